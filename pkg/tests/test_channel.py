import math
from fractions import Fraction

import numpy as np
import pytest

from gpcb.channel import (
    ChannelConfig,
    awgn_add,
    bpsk_modulate,
    frame_rng,
    hard_decision,
    qfunc,
    run_ber,
    shannon_limit,
    sigma_from_ebn0,
)
from gpcb.cyclic import get_code
from gpcb.siho import DecoderConfig
from gpcb.systems import ComponentSystem, UncodedBpsk


def test_bpsk_mapping():
    assert bpsk_modulate([0, 0, 0]).tolist() == [1.0, 1.0, 1.0]
    assert bpsk_modulate([1, 0, 1]).tolist() == [-1.0, 1.0, -1.0]


def test_modulation_round_trip():
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, 200, dtype=np.uint8)
    assert (hard_decision(bpsk_modulate(bits)) == bits).all()
    assert hard_decision([0.0, -0.0, 1e-300]).tolist() == [0, 0, 0]


def test_awgn_zero_sigma_is_identity():
    x = np.linspace(-1, 1, 17)
    y = awgn_add(x, 0.0, frame_rng(0, 0, 1))
    assert (y == x).all()
    with pytest.raises(ValueError):
        awgn_add(x, -1.0, frame_rng(0, 0, 1))


def test_awgn_deterministic_per_stream():
    x = np.zeros(64)
    a = awgn_add(x, 1.0, frame_rng(5, 7, 1))
    b = awgn_add(x, 1.0, frame_rng(5, 7, 1))
    c = awgn_add(x, 1.0, frame_rng(5, 8, 1))
    d = awgn_add(x, 1.0, frame_rng(5, 7, 0))
    assert (a == b).all()
    assert (a != c).any()
    assert (a != d).any()


def test_awgn_moments():
    noise = awgn_add(np.zeros(10**6), 1.0, frame_rng(1, 0, 1))
    assert abs(noise.mean()) < 0.01
    assert abs(noise.var() - 1.0) < 0.02


def test_sigma_from_ebn0_values():
    assert sigma_from_ebn0(1, 0.0) ** 2 == pytest.approx(0.5)
    assert sigma_from_ebn0(0.68, 2.0) == pytest.approx(0.6811, abs=2e-4)
    assert sigma_from_ebn0(0.5, 10 * math.log10(2)) ** 2 == pytest.approx(0.5)
    assert sigma_from_ebn0(Fraction(1, 2), 10 * math.log10(2)) ** 2 == pytest.approx(0.5)
    assert sigma_from_ebn0(0.5, np.inf) == 0.0
    with pytest.raises(ValueError):
        sigma_from_ebn0(0, 1.0)


def test_channel_config_sigma_and_validation():
    cfg = ChannelConfig(ebn0_db=2.0, code_rate=Fraction(51, 75))
    assert cfg.sigma == pytest.approx(sigma_from_ebn0(0.68, 2.0))
    with pytest.raises(ValueError):
        ChannelConfig(ebn0_db=1.0, code_rate=0.5, max_frames=0)
    with pytest.raises(ValueError):
        ChannelConfig(ebn0_db=1.0, code_rate=0.5, target_bit_errors=0)
    with pytest.raises(ValueError):
        ChannelConfig(ebn0_db=1.0, code_rate=0)


def test_uncoded_ber_matches_qfunc():
    scheme = UncodedBpsk(frame_bits=20000)
    channel = ChannelConfig(ebn0_db=2.0, code_rate=1, seed=3, max_frames=50,
                            target_bit_errors=10**9)
    rec = run_ber(scheme, channel)[0]
    assert rec.frames == 50
    assert rec.bits == 10**6
    expected = qfunc(math.sqrt(2 * 10 ** 0.2))
    assert rec.ber == pytest.approx(expected, rel=0.05)


def test_sigma_zero_gives_zero_ber():
    scheme = ComponentSystem(get_code("qr-7-4"), DecoderConfig(p=2, threshold_enabled=False))
    channel = ChannelConfig(ebn0_db=np.inf, code_rate=scheme.rate, seed=0,
                            max_frames=20, target_bit_errors=5)
    rec = run_ber(scheme, channel)[0]
    assert rec.ber == 0.0 and rec.fer == 0.0 and rec.frames == 20


def test_early_stop_at_target_errors():
    scheme = UncodedBpsk(frame_bits=100)
    channel = ChannelConfig(ebn0_db=0.0, code_rate=1, seed=1, max_frames=10**6,
                            target_bit_errors=50)
    rec = run_ber(scheme, channel)[0]
    assert rec.bit_errors >= 50
    assert rec.frames < 10**6
    assert rec.frames % 64 == 0  # whole chunks only
    assert rec.ber == rec.bit_errors / rec.bits
    assert rec.fer == rec.frame_errors / rec.frames


def test_run_ber_identical_serial_and_parallel():
    scheme = ComponentSystem(get_code("bch-15-7"), DecoderConfig(p=3, threshold_enabled=False))
    channel = ChannelConfig(ebn0_db=3.0, code_rate=scheme.rate, seed=4,
                            max_frames=192, target_bit_errors=10**9)
    serial = run_ber(scheme, channel, workers=1)
    parallel = run_ber(scheme, channel, workers=2)
    assert serial == parallel


def test_run_ber_per_iteration_records(bch63_table):
    from gpcb.concatenation import GpcbCode
    from gpcb.interleavers import make_interleaver
    from gpcb.systems import turbo_system

    code = get_code("bch-63-51")
    g = GpcbCode(code, code, 2, make_interleaver("random", 102, seed=2))
    scheme = turbo_system(g, bch63_table, iterations=3,
                          component_cfg=DecoderConfig(p=4))
    channel = ChannelConfig(ebn0_db=2.5, code_rate=scheme.rate, seed=6,
                            max_frames=64, target_bit_errors=10**9)
    records = run_ber(scheme, channel)
    assert [r.iteration for r in records] == [1, 2, 3]
    assert all(r.frames == 64 and r.bits == 64 * g.N for r in records)
    assert records[0].mean_test_sequences <= records[2].mean_test_sequences


def test_trace_file(tmp_path, qr7_table):
    from gpcb.concatenation import GpcbCode
    from gpcb.interleavers import make_interleaver
    from gpcb.systems import turbo_system

    code = get_code("qr-7-4")
    g = GpcbCode(code, code, 2, make_interleaver("random", 8, seed=1))
    scheme = turbo_system(g, qr7_table, iterations=2, component_cfg=DecoderConfig(p=2))
    channel = ChannelConfig(ebn0_db=2.0, code_rate=scheme.rate, seed=7,
                            max_frames=10, target_bit_errors=10**9)
    path = tmp_path / "trace.csv"
    run_ber(scheme, channel, trace_path=path)
    lines = path.read_text().splitlines()
    assert lines[0] == "frame,iteration,bit_errors"
    assert len(lines) == 1 + 10 * 2
    frame, iteration, errs = lines[1].split(",")
    assert (frame, iteration) == ("0", "1") and int(errs) >= 0


def test_shannon_limits():
    assert shannon_limit(1e-5, False) == pytest.approx(-1.59, abs=0.01)
    assert shannon_limit(1e-5, True) == pytest.approx(-1.59, abs=0.01)
    assert shannon_limit(0.5, False) == pytest.approx(10 * math.log10(1.0), abs=1e-9)
    assert shannon_limit(0.5, True) == pytest.approx(0.187, abs=0.02)
    for rate in (0.1, 0.25, 0.5, 0.68, 0.9):
        assert shannon_limit(rate, True) >= shannon_limit(rate, False)
    with pytest.raises(ValueError):
        shannon_limit(0.0, True)
    with pytest.raises(ValueError):
        shannon_limit(1.0, False)


def test_ber_monotone_in_ebn0():
    scheme = UncodedBpsk(frame_bits=50000)
    bers = []
    for ebn0 in (0.0, 2.0, 4.0, 6.0):
        channel = ChannelConfig(ebn0_db=ebn0, code_rate=1, seed=8, max_frames=10,
                                target_bit_errors=10**9)
        bers.append(run_ber(scheme, channel)[0].ber)
    assert all(a > b for a, b in zip(bers, bers[1:]))
