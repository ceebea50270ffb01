import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gpcb.channel import bpsk_modulate, frame_rng, sigma_from_ebn0
from gpcb.concatenation import GpcbCode, gpcb_encode
from gpcb.cyclic import encode_systematic, get_code
from gpcb.estimators import CyclicCodeDecoder, GpcbEncoder, GpcbTurboDecoder
from gpcb.interleavers import make_interleaver
from gpcb.siho import DecoderConfig, siho_decode


def test_encoder_params_round_trip():
    enc = GpcbEncoder(component="qr-7-4", m_subblocks=2, interleaver="random",
                      interleaver_seed=5)
    params = enc.get_params()
    enc2 = GpcbEncoder(**params)
    assert enc2.get_params() == params
    assert clone(enc).get_params() == params


def test_encoder_transform_matches_functional_api():
    enc = GpcbEncoder(component="qr-7-4", m_subblocks=2, interleaver="random",
                      interleaver_seed=5).fit()
    rng = np.random.default_rng(0)
    X = rng.integers(0, 2, (6, 8), dtype=np.uint8)
    out = enc.transform(X)
    ref = GpcbCode(get_code("qr-7-4"), get_code("qr-7-4"), 2,
                   make_interleaver("random", 8, seed=5))
    for row_in, row_out in zip(X, out):
        assert (row_out == gpcb_encode(ref, row_in)).all()
    assert (enc.inverse_transform(out) == X).all()


def test_encoder_requires_fit_and_validates():
    enc = GpcbEncoder(component="qr-7-4", m_subblocks=2)
    with pytest.raises(NotFittedError):
        enc.transform(np.zeros((2, 8), dtype=np.uint8))
    enc.fit()
    with pytest.raises(ValueError):
        enc.transform(np.zeros((2, 7), dtype=np.uint8))
    with pytest.raises(ValueError):
        enc.transform(np.full((2, 8), 2, dtype=np.uint8))


def test_cyclic_decoder_matches_siho():
    dec = CyclicCodeDecoder(code="bch-15-7", p=3, threshold_enabled=False).fit()
    code = get_code("bch-15-7")
    rng = np.random.default_rng(1)
    msgs = rng.integers(0, 2, (8, 7), dtype=np.uint8)
    R = np.stack([
        bpsk_modulate(encode_systematic(code, m)) + rng.normal(0, 0.5, 15)
        for m in msgs
    ])
    out = dec.predict(R)
    cfg = DecoderConfig(p=3, threshold_enabled=False)
    for row, got in zip(R, out):
        assert (got == siho_decode(code, row, cfg).decision[8:]).all()


def test_cyclic_decoder_noiseless_identity():
    dec = CyclicCodeDecoder(code="qr-7-4", p=2, threshold_enabled=False).fit()
    code = get_code("qr-7-4")
    msgs = np.array([[1, 0, 1, 1], [0, 0, 0, 0], [1, 1, 1, 1]], dtype=np.uint8)
    R = np.stack([bpsk_modulate(encode_systematic(code, m)) for m in msgs])
    assert (dec.predict(R) == msgs).all()


def test_turbo_estimator_fit_predict(qr7_table):
    est = GpcbTurboDecoder(
        component="qr-7-4", m_subblocks=3, interleaver="random",
        interleaver_seed=5, p=2, iterations=3, ebn0_db=4.0,
        confidence_table=qr7_table,
    ).fit()
    g = est.code_
    sigma = sigma_from_ebn0(g.rate, 4.0)
    rng = np.random.default_rng(2)
    msgs = rng.integers(0, 2, (5, g.N), dtype=np.uint8)
    R = np.stack([
        bpsk_modulate(gpcb_encode(g, m))
        + frame_rng(3, i, 1).normal(0, sigma, g.L)
        for i, m in enumerate(msgs)
    ])
    out = est.predict(R)
    assert out.shape == (5, g.N)
    # mostly correct at this operating point
    assert (out == msgs).mean() > 0.9
    # noiseless frames decode exactly
    clean = np.stack([bpsk_modulate(gpcb_encode(g, m)) for m in msgs])
    assert (est.predict(clean) == msgs).all()


def test_turbo_estimator_calibrates_when_no_table_given():
    est = GpcbTurboDecoder(
        component="qr-7-4", m_subblocks=2, interleaver="random", p=2,
        iterations=2, ebn0_db=4.0, calibration_ebn0=(3.0, 5.0),
        calibration_frames=1000, calibration_bins=8,
    ).fit()
    assert est.turbo_cfg_.table1.code_name == "qr-7-4"
    rng = np.random.default_rng(4)
    msg = rng.integers(0, 2, (1, est.code_.N), dtype=np.uint8)
    clean = np.stack([bpsk_modulate(gpcb_encode(est.code_, msg[0]))])
    assert (est.predict(clean) == msg).all()


def test_turbo_estimator_validates_input(qr7_table):
    est = GpcbTurboDecoder(component="qr-7-4", m_subblocks=2, p=2,
                           confidence_table=qr7_table).fit()
    with pytest.raises(ValueError):
        est.predict(np.zeros((2, est.code_.L - 1)))
    bad = np.zeros((1, est.code_.L))
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        est.predict(bad)


def test_estimator_clone_independence(qr7_table):
    est = GpcbTurboDecoder(component="qr-7-4", m_subblocks=2, p=2,
                           confidence_table=qr7_table)
    est.fit()
    fresh = clone(est)
    with pytest.raises(NotFittedError):
        fresh.predict(np.zeros((1, est.code_.L)))
