"""BPSK/AWGN channel, Monte-Carlo BER measurement, and Shannon limits.

Every frame draws its message and noise from counter-based RNG streams keyed
by (seed, frame index, role), so results are independent of execution order
and worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

ROLE_MESSAGE = 0
ROLE_NOISE = 1

#: Exact column order of BER sweep CSV files.
CSV_HEADER = "ebn0_db,iteration,frames,bits,bit_errors,frame_errors,ber,fer,mean_test_sequences"

# Early stopping is evaluated on whole chunks of this many frames so that the
# set of simulated frames is a deterministic function of the configuration.
_STOP_CHUNK = 64


def bpsk_modulate(bits) -> np.ndarray:
    """Antipodal mapping: bit 0 -> +1.0, bit 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


def hard_decision(values) -> np.ndarray:
    """value >= 0 -> bit 0, value < 0 -> bit 1 (zeros break toward bit 0)."""
    return (np.asarray(values, dtype=float) < 0).astype(np.uint8)


def frame_rng(seed: int, frame: int, role: int) -> np.random.Generator:
    """Deterministic per-(seed, frame, role) random stream."""
    return np.random.default_rng((seed, frame, role))


def awgn_add(x, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Add zero-mean Gaussian noise of standard deviation sigma."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    x = np.asarray(x, dtype=float)
    return x + rng.normal(0.0, sigma, x.shape)


def sigma_from_ebn0(rate, ebn0_db: float) -> float:
    """Noise standard deviation for unit-energy BPSK at rate ``rate``.

    sigma^2 = 1 / (2 * rate * 10^(ebn0_db / 10)); Eb/N0 is per information
    bit.
    """
    rate = float(rate)
    if rate <= 0:
        raise ValueError("rate must be positive")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def qfunc(x: float) -> float:
    """Gaussian tail probability Q(x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


@dataclass(frozen=True)
class ChannelConfig:
    """One operating point of the AWGN channel plus stopping rules."""

    ebn0_db: float
    code_rate: Fraction | float
    seed: int = 0
    max_frames: int = 100_000
    target_bit_errors: int = 100

    def __post_init__(self):
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.target_bit_errors < 1:
            raise ValueError("target_bit_errors must be >= 1")
        self.sigma  # validates the rate

    @property
    def sigma(self) -> float:
        return sigma_from_ebn0(self.code_rate, self.ebn0_db)


@dataclass(frozen=True)
class BerRecord:
    """One (Eb/N0, iteration) row of a BER measurement."""

    ebn0_db: float
    iteration: int
    frames: int
    bits: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    mean_test_sequences: float


# Worker-process state for parallel frame simulation.
_worker_state: dict = {}


def _init_worker(scheme, sigma, seed):
    _worker_state["scheme"] = scheme
    _worker_state["sigma"] = sigma
    _worker_state["seed"] = seed


def _run_frame_global(frame: int):
    return _run_frame(
        _worker_state["scheme"], _worker_state["sigma"], _worker_state["seed"], frame
    )


def _run_frame(scheme, sigma: float, seed: int, frame: int):
    msg = frame_rng(seed, frame, ROLE_MESSAGE).integers(
        0, 2, scheme.info_bits, dtype=np.uint8
    )
    tx = bpsk_modulate(scheme.encode(msg))
    r = awgn_add(tx, sigma, frame_rng(seed, frame, ROLE_NOISE))
    outcomes = scheme.decode(r, sigma)
    errs = [int((dec != msg).sum()) for dec, _ in outcomes]
    ts = [t for _, t in outcomes]
    return errs, ts


def run_ber(scheme, channel: ChannelConfig, *, workers: int = 1,
            trace_path=None) -> list[BerRecord]:
    """Monte-Carlo BER/FER for one scheme at one channel operating point.

    Parameters
    ----------
    scheme
        Duck-typed system under test with attributes ``info_bits``,
        ``iterations`` and methods ``encode(message_bits) -> coded_bits``,
        ``decode(soft, sigma) -> [(info_decisions, test_sequences), ...]``
        (one entry per decoding iteration, test_sequences cumulative).
    channel : ChannelConfig
        Errors are counted on information bits only; the run stops once the
        final iteration has accumulated ``target_bit_errors`` or after
        ``max_frames`` frames, whichever happens first, always at frame
        granularity.
    workers : int
        Process parallelism; results are identical for any worker count.
    trace_path : path, optional
        Write per-frame rows "frame,iteration,bit_errors" for turbo-effect
        analysis.

    Returns
    -------
    list of BerRecord, one per iteration.
    """
    iterations = scheme.iterations
    sigma = channel.sigma
    bit_errors = np.zeros(iterations, dtype=np.int64)
    frame_errors = np.zeros(iterations, dtype=np.int64)
    ts_total = np.zeros(iterations, dtype=np.float64)
    frames = 0

    trace = open(trace_path, "w") if trace_path is not None else None
    if trace is not None:
        trace.write("frame,iteration,bit_errors\n")

    pool = None
    if workers > 1:
        pool = ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(scheme, sigma, channel.seed),
        )
    try:
        while frames < channel.max_frames:
            chunk = range(frames, min(frames + _STOP_CHUNK, channel.max_frames))
            if pool is not None:
                results = list(pool.map(_run_frame_global, chunk, chunksize=8))
            else:
                results = [_run_frame(scheme, sigma, channel.seed, f) for f in chunk]
            for frame, (errs, ts) in zip(chunk, results):
                for i in range(iterations):
                    bit_errors[i] += errs[i]
                    frame_errors[i] += errs[i] > 0
                    ts_total[i] += ts[i]
                    if trace is not None:
                        trace.write(f"{frame},{i + 1},{errs[i]}\n")
            frames = chunk.stop
            if bit_errors[-1] >= channel.target_bit_errors:
                break
    finally:
        if pool is not None:
            pool.shutdown()
        if trace is not None:
            trace.close()

    bits = frames * scheme.info_bits
    return [
        BerRecord(
            ebn0_db=channel.ebn0_db,
            iteration=i + 1,
            frames=frames,
            bits=bits,
            bit_errors=int(bit_errors[i]),
            frame_errors=int(frame_errors[i]),
            ber=bit_errors[i] / bits,
            fer=frame_errors[i] / frames,
            mean_test_sequences=ts_total[i] / frames,
        )
        for i in range(iterations)
    ]


def default_workers() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Shannon limits

def _bpsk_capacity(sigma: float, nodes, weights) -> float:
    """Mutual information of BPSK over real AWGN with noise sigma, in bits."""
    # y = 1 + sigma * z, z ~ N(0, 1); C = 1 - E[log2(1 + exp(-2 y / sigma^2))]
    y = 1.0 + sigma * math.sqrt(2.0) * nodes
    vals = np.logaddexp(0.0, -2.0 * y / (sigma * sigma)) / math.log(2.0)
    return 1.0 - float(weights @ vals) / math.sqrt(math.pi)


def shannon_limit(rate, constrained: bool) -> float:
    """Minimum Eb/N0 (dB) for reliable communication at ``rate``.

    constrained=False gives the unconstrained real-AWGN limit
    (2^(2R) - 1) / (2R); constrained=True gives the BPSK-input limit found
    by root-finding on the Gauss-Hermite evaluation of the BPSK mutual
    information.
    """
    rate = float(rate)
    if not 0.0 < rate < 1.0:
        raise ValueError("rate must lie in (0, 1)")
    if not constrained:
        ebn0 = (2.0 ** (2.0 * rate) - 1.0) / (2.0 * rate)
        return 10.0 * math.log10(ebn0)
    nodes, weights = np.polynomial.hermite.hermgauss(128)
    lo, hi = 1e-3, 1e3  # capacity is decreasing in sigma
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if _bpsk_capacity(mid, nodes, weights) > rate:
            lo = mid
        else:
            hi = mid
    sigma = math.sqrt(lo * hi)
    return 10.0 * math.log10(1.0 / (2.0 * rate * sigma * sigma))
