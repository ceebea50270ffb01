"""Soft-input hard-output component decoder for cyclic codes.

The decoder exploits cyclic-shift closure: the received word is rotated so
that high-reliability positions land on the information coordinates, the
information part is hard-decided, a small family of test patterns flips the
least-reliable information bits, and each patched message is re-encoded
systematically.  Candidates are scored by squared Euclidean distance to the
+-1 image of the received word; an optional threshold stops the search as
soon as a candidate scores below it.

Shift processing order follows the reliability ranking so the early exit
fires on the most promising information sets first.  The batch entry point
decodes many independent words of the same code in one array pass, which is
what the turbo loop uses for its sub-blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cyclic import CyclicCode, parity_basis

_MAX_PATTERN_BITS = 20


@dataclass(frozen=True)
class DecoderConfig:
    """Component decoder knobs.

    Parameters
    ----------
    p : int
        Number of least-reliable information positions eligible for
        flipping; 2^p test patterns are tried per shift.  0 <= p <= 20.
    max_shifts : int or None
        Budget of cyclic permutations, at most k.  None means use all k.
    threshold_enabled : bool
        Enable the early-exit threshold on the candidate metric.
    threshold : float or None
        Explicit threshold value.  None selects the adaptive default
        n*sigma^2 + threshold_slack*sigma^2*sqrt(2n), the mean of the true
        codeword's squared-distance statistic plus a slack in units of its
        standard deviation.
    threshold_slack : float
        Slack multiplier c in the adaptive threshold.  The default 2.0
        keeps the miss rate of the exit test around 3% independent of SNR.
    """

    p: int = 4
    max_shifts: int | None = None
    threshold_enabled: bool = True
    threshold: float | None = None
    threshold_slack: float = 2.0

    def __post_init__(self):
        if not 0 <= self.p <= _MAX_PATTERN_BITS:
            raise ValueError(f"p={self.p} outside 0..{_MAX_PATTERN_BITS}")
        if self.max_shifts is not None and self.max_shifts < 1:
            raise ValueError("max_shifts must be >= 1")
        if self.threshold is not None and self.threshold < 0:
            raise ValueError("threshold must be nonnegative")

    def resolved_threshold(self, n: int, sigma: float | None) -> float | None:
        """Effective metric threshold, or None when disabled."""
        if not self.threshold_enabled:
            return None
        if self.threshold is not None:
            return self.threshold
        if sigma is None or sigma <= 0:
            raise ValueError(
                "adaptive threshold needs sigma > 0; pass sigma, set an "
                "explicit threshold, or disable the threshold"
            )
        var = sigma * sigma
        return n * var + self.threshold_slack * var * np.sqrt(2.0 * n)


@dataclass
class DecodeResult:
    """Outcome of one component decode."""

    decision: np.ndarray          # hard codeword bits, length n
    metric: float                 # squared Euclidean distance to +-1 image
    test_sequences_used: int
    shifts_used: int
    stopped_early: bool
    candidates: list | None = field(default=None, repr=False)  # test builds only


def reliability_sort(r) -> np.ndarray:
    """Permutation sigma with |r[sigma[0]]| >= |r[sigma[1]]| >= ...

    Ties break toward the smaller index (stable sort), so equal-magnitude
    inputs return the identity.
    """
    r = np.asarray(r, dtype=float)
    return np.argsort(-np.abs(r), kind="stable")


def rank_shifts(code: CyclicCode, r, max_shifts: int | None = None) -> np.ndarray:
    """Cyclic shifts ranked by reliability mass on the information positions.

    Every shift s is scored by the sum of |r| over the information
    coordinates after right-rotation by s; the top ``max_shifts`` shifts are
    returned in descending score with ties broken toward the smaller shift.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (code.n,):
        raise ValueError(f"received word length {r.shape} != n={code.n}")
    if max_shifts is None:
        max_shifts = code.k
    return _rank_shifts_batch(code, r[None, :], max_shifts)[0]


def _rank_shifts_batch(code: CyclicCode, words: np.ndarray, max_shifts: int) -> np.ndarray:
    n, k = code.n, code.k
    abs_r = np.abs(words)                                   # (B, n)
    gather = (np.arange(n - k, n)[None, :] - np.arange(n)[:, None]) % n  # (n, k)
    scores = abs_r[:, gather].sum(axis=2)                   # (B, n)
    order = np.argsort(-scores, axis=1, kind="stable")
    return order[:, : min(max_shifts, n)]


@lru_cache(maxsize=None)
def _roll_index(n: int) -> np.ndarray:
    """Row s holds the gather indices of a right-rotation by s."""
    table = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    table = table.astype(np.intp)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _patterns(p: int) -> np.ndarray:
    """(2^p, p) flip masks: all-zero first, then by weight, ties by value."""
    values = sorted(range(1 << p), key=lambda v: (v.bit_count(), v))
    out = np.zeros((1 << p, p), dtype=np.uint8)
    for row, v in enumerate(values):
        for j in range(p):
            out[row, j] = (v >> j) & 1
    out.setflags(write=False)
    return out


def error_patterns(p: int) -> np.ndarray:
    """Test-pattern masks over the p least-reliable information positions.

    Column j of a row flips the j-th least reliable position (column 0 is
    the least reliable).  Rows start with the all-zero mask, then the
    nonzero masks by increasing Hamming weight, ties by numeric value.
    """
    if not 0 <= p <= _MAX_PATTERN_BITS:
        raise ValueError(f"p={p} outside 0..{_MAX_PATTERN_BITS}")
    return _patterns(p)


def siho_decode_batch(
    code: CyclicCode,
    words,
    cfg: DecoderConfig = DecoderConfig(),
    sigma: float | None = None,
    *,
    all_shifts: bool = False,
    record_candidates: bool = False,
) -> list[DecodeResult]:
    """Decode a (B, n) batch of independent received words; see siho_decode."""
    words = np.asarray(words, dtype=float)
    n, k = code.n, code.k
    if words.ndim != 2 or words.shape[1] != n or words.shape[0] == 0:
        raise ValueError(f"batch shape {words.shape} incompatible with (B, {n})")
    if not np.isfinite(words).all():
        raise ValueError("received words contain non-finite values")
    if cfg.p > k:
        raise ValueError(f"p={cfg.p} exceeds k={k}")
    if cfg.max_shifts is not None and cfg.max_shifts > k and not all_shifts:
        raise ValueError(f"max_shifts={cfg.max_shifts} exceeds k={k}")

    threshold = cfg.resolved_threshold(n, sigma)
    budget = n if all_shifts else (cfg.max_shifts if cfg.max_shifts is not None else k)
    shifts = _rank_shifts_batch(code, words, budget)          # (B, S)
    n_shifts = shifts.shape[1]
    patterns = _patterns(cfg.p)
    n_patterns = patterns.shape[0]
    basis = parity_basis(code)
    sum_r2 = (words * words).sum(axis=1)                      # (B,)

    # Row (b, s) of `views` is word b rotated right by shifts[b, s].
    n_b = len(words)
    idx = _roll_index(n)[shifts]                              # (B, S, n)
    views = np.take_along_axis(words[:, None, :], idx, axis=2)
    info_soft = views[:, :, n - k :]
    base_info = (info_soft < 0)
    basis_f = basis.astype(float)
    # sums of 0/1 rows are exact small integers in float; parity via int cast
    base_parity = (base_info @ basis_f).astype(np.int8) & 1   # (B, S, n-k)
    base_cw = np.empty((n_b, n_shifts, n), dtype=np.uint8)
    base_cw[:, :, : n - k] = base_parity
    base_cw[:, :, n - k :] = base_info
    w = views * (1.0 - 2.0 * base_cw)                         # (B, S, n)
    base_metric = sum_r2[:, None] - 2.0 * w.sum(axis=2) + n   # (B, S)

    # Per (word, shift): the p least-reliable info positions and the parity
    # deltas of every test pattern over them.  Selection runs as p argmin
    # passes, which matches a stable ascending sort (ties toward the lower
    # index) without the per-row sort overhead.
    least = np.empty((n_b, n_shifts, cfg.p), dtype=np.intp)
    work = np.abs(info_soft)
    for j in range(cfg.p):
        am = work.argmin(axis=2)
        least[:, :, j] = am
        np.put_along_axis(work, am[:, :, None], np.inf, axis=2)
    pat_f = patterns.astype(float)                            # (2^p, p)
    sel = basis_f[least].reshape(n_b * n_shifts, cfg.p, n - k)
    counts = np.tensordot(pat_f, sel, axes=([1], [1]))        # (2^p, B*S, n-k)
    dparity = counts.astype(np.int8) & 1
    delta = np.einsum("tmj,mj->mt", dparity,
                      w[:, :, : n - k].reshape(n_b * n_shifts, n - k))
    w_least = np.take_along_axis(w[:, :, n - k :], least, axis=2)
    delta += w_least.reshape(n_b * n_shifts, cfg.p) @ pat_f.T
    metrics = base_metric[:, :, None] + 4.0 * delta.reshape(n_b, n_shifts, n_patterns)

    def candidate_bits(b: int, s_pos: int, t: int) -> np.ndarray:
        bits = base_cw[b, s_pos].copy()
        bits[: n - k] ^= dparity[t, b * n_shifts + s_pos].astype(np.uint8)
        bits[n - k :][least[b, s_pos]] ^= patterns[t]
        return np.roll(bits, -int(shifts[b, s_pos]))

    flat = metrics.reshape(n_b, -1)                           # scan order per word
    results = []
    for b in range(len(words)):
        stopped = False
        if threshold is not None and (flat[b] < threshold).any():
            pos = int(np.argmax(flat[b] < threshold))
            stopped = True
        else:
            pos = int(np.argmin(flat[b]))  # first minimum in scan order
        s_pos, t = divmod(pos, n_patterns)
        tested = pos + 1 if stopped else n_shifts * n_patterns
        log = None
        if record_candidates:
            log = [
                (candidate_bits(b, u // n_patterns, u % n_patterns), float(flat[b][u]))
                for u in range(tested)
            ]
        # The threshold-triggering candidate is also the running minimum:
        # every earlier candidate scored >= threshold > this one.
        results.append(
            DecodeResult(
                decision=candidate_bits(b, s_pos, t),
                metric=float(flat[b][pos]),
                test_sequences_used=tested,
                shifts_used=s_pos + 1 if stopped else n_shifts,
                stopped_early=stopped,
                candidates=log,
            )
        )
    return results


def siho_decode(
    code: CyclicCode,
    r,
    cfg: DecoderConfig = DecoderConfig(),
    sigma: float | None = None,
    *,
    all_shifts: bool = False,
    record_candidates: bool = False,
) -> DecodeResult:
    """Decode one received soft word to the best candidate codeword found.

    Parameters
    ----------
    code : CyclicCode
    r : array_like of float, shape (n,)
        Channel (or extrinsic-updated) reliabilities; values >= 0 hard-decide
        to bit 0, values < 0 to bit 1.
    cfg : DecoderConfig
    sigma : float, optional
        Channel noise standard deviation; required only by the adaptive
        threshold.
    all_shifts : bool
        Test mode: sweep all n shifts instead of the top-k budget (the
        heavier original search, kept for oracle comparisons).
    record_candidates : bool
        Test mode: log every generated (bits, metric) candidate on the
        result for metric-optimality audits.

    Returns
    -------
    DecodeResult
        ``decision`` minimizes the squared Euclidean distance over all
        generated candidates; with the threshold enabled the search returns
        immediately on the first candidate scoring below the threshold
        (which is necessarily the running minimum).
    """
    r = np.asarray(r, dtype=float)
    if r.size == 0:
        raise ValueError("empty received word")
    if r.shape != (code.n,):
        raise ValueError(f"received word length {r.shape} != n={code.n}")
    return siho_decode_batch(
        code,
        r[None, :],
        cfg,
        sigma,
        all_shifts=all_shifts,
        record_candidates=record_candidates,
    )[0]
