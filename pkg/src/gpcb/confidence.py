"""Soft output for the component decoder.

The decoder's hard decision is converted to extrinsic reliabilities through
an empirically calibrated confidence value: the probability that the decision
equals the transmitted codeword, estimated as a function of the destructive
Euclidean distance between the received word and the decision.  The
confidence feeds a two-hypothesis a-posteriori model (decision correct /
decision wrong with a Gaussian channel prior) whose log-likelihood ratio,
minus the input reliability, is the extrinsic output.  No multiplicative
scaling is applied anywhere on the extrinsic path.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .cyclic import CyclicCode, encode_systematic
from .siho import DecoderConfig, siho_decode

#: Confidence values are clamped to [PHI_EPSILON, 1 - PHI_EPSILON] to keep
#: the extrinsic logarithm finite.
PHI_EPSILON = 1e-6

_FORMAT_VERSION = "v1"

# diagnostics: how many times an out-of-range phi had to be clamped
_clamp_events = 0


def clamp_event_count() -> int:
    return _clamp_events


def reset_clamp_events() -> None:
    global _clamp_events
    _clamp_events = 0


def destructive_distance(r, decision_pm) -> float:
    """Squared-distance mass of the positions opposing the decision.

    Only coordinates j with (r_j - d_j) * d_j < 0 contribute (r and the
    +-1-valued decision d disagree in the destructive sense); the returned
    value is the sum of (r_j - d_j)^2 over that set.
    """
    r = np.asarray(r, dtype=float)
    d = np.asarray(decision_pm, dtype=float)
    if r.shape != d.shape:
        raise ValueError(f"length mismatch {r.shape} vs {d.shape}")
    diff = r - d
    des = diff * d < 0
    return float((diff[des] ** 2).sum())


def _stable_sigmoid_pair(x):
    """(sigmoid(x), sigmoid(-x)) computed so the pair sums to 1 up to 1 ulp."""
    x = np.asarray(x, dtype=float)
    t = np.exp(-np.abs(x))
    big = 1.0 / (1.0 + t)
    small = t / (1.0 + t)
    pos = x >= 0
    return np.where(pos, big, small), np.where(pos, small, big)


def aposteriori(r_j, d_j, phi: float, sigma: float):
    """A-posteriori probabilities (P[x=+1 | r], P[x=-1 | r]).

    With probability phi the decision d_j is correct and all mass sits on
    its branch; with probability 1 - phi the symbol is only Gaussian-channel
    informed, contributing sigmoid(+-2 r_j / sigma^2).  The pair sums to 1
    by construction.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi={phi} outside [0, 1]")
    r_j = np.asarray(r_j, dtype=float)
    d_j = np.asarray(d_j, dtype=float)
    g_plus, g_minus = _stable_sigmoid_pair(2.0 * r_j / (sigma * sigma))
    p_plus = (1.0 - phi) * g_plus + phi * (d_j > 0)
    p_minus = (1.0 - phi) * g_minus + phi * (d_j < 0)
    return p_plus, p_minus


def extrinsic_vector(r, decision_pm, phi: float, sigma: float) -> np.ndarray:
    """Unscaled extrinsic output for one decoded word.

    omega_j = d_j * [ (sigma^2/2) * ln((phi + exp(2 r_j d_j / sigma^2))
    / (1 - phi)) - r_j d_j ], evaluated with log-sum-exp so it stays finite
    for any input magnitude.  phi is clamped into
    [PHI_EPSILON, 1 - PHI_EPSILON]; clamp events are counted for
    diagnostics.  At phi -> 0 the log term cancels r_j d_j and the output
    vanishes: the decoder adds no information beyond the channel.
    """
    global _clamp_events
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    r = np.asarray(r, dtype=float)
    d = np.asarray(decision_pm, dtype=float)
    if r.shape != d.shape:
        raise ValueError(f"length mismatch {r.shape} vs {d.shape}")
    if not PHI_EPSILON <= phi <= 1.0 - PHI_EPSILON:
        _clamp_events += 1
        phi = min(max(phi, PHI_EPSILON), 1.0 - PHI_EPSILON)
    var = sigma * sigma
    x = 2.0 * r * d / var
    log_term = np.logaddexp(np.log(phi), x) - np.log1p(-phi)
    return d * (0.5 * var * log_term - r * d)


@dataclass
class ConfidenceTable:
    """Binned map from destructive distance to confidence value.

    Bins are [bin_lower[i], bin_upper[i]) with contiguous, strictly
    increasing edges; lookups outside the calibrated range clamp into the
    end bins.  ``phi`` is non-increasing across bins (isotonic smoothing is
    applied after estimation); the raw pre-smoothing estimates are kept in
    memory for audit but are not serialized.
    """

    code_name: str
    p: int
    bin_lower: np.ndarray
    bin_upper: np.ndarray
    phi: np.ndarray
    sample_counts: np.ndarray
    raw_phi: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        edges = np.append(self.bin_lower, self.bin_upper[-1])
        if not (np.diff(edges) > 0).all():
            raise ValueError("bin edges must be strictly increasing")
        if not ((self.phi >= PHI_EPSILON) & (self.phi <= 1 - PHI_EPSILON)).all():
            raise ValueError("phi values outside the clamped range")
        if (np.diff(self.phi) > 1e-12).any():
            raise ValueError("phi values must be non-increasing across bins")

    def lookup(self, distance: float) -> float:
        idx = int(np.searchsorted(self.bin_upper, distance, side="right"))
        return float(self.phi[min(idx, len(self.phi) - 1)])

    def save(self, path) -> None:
        lines = [
            f"gpcb-confidence {_FORMAT_VERSION} code={self.code_name} p={self.p}\n"
        ]
        for lo, hi, ph, cnt in zip(
            self.bin_lower, self.bin_upper, self.phi, self.sample_counts
        ):
            lines.append(f"{float(lo)!r}, {float(hi)!r}, {float(ph)!r}, {int(cnt)}\n")
        with open(path, "w") as fh:
            fh.writelines(lines)

    @classmethod
    def load(cls, path) -> "ConfidenceTable":
        with open(path) as fh:
            header = fh.readline().split()
            if (
                len(header) < 4
                or header[0] != "gpcb-confidence"
                or header[1] != _FORMAT_VERSION
            ):
                raise ValueError(f"{path}: not a gpcb-confidence {_FORMAT_VERSION} file")
            meta = dict(item.split("=", 1) for item in header[2:])
            rows = [line.split(",") for line in fh if line.strip()]
        cols = list(zip(*rows))
        return cls(
            code_name=meta["code"],
            p=int(meta["p"]),
            bin_lower=np.array([float(v) for v in cols[0]]),
            bin_upper=np.array([float(v) for v in cols[1]]),
            phi=np.array([float(v) for v in cols[2]]),
            sample_counts=np.array([int(v) for v in cols[3]]),
        )


def calibration_key(code_name: str, p: int, ebn0_grid, frames_per_point: int,
                    bins: int, seed: int) -> str:
    """Short stable key identifying one calibration setup (for file naming)."""
    text = f"{code_name}|{p}|{[float(e) for e in ebn0_grid]!r}|{frames_per_point}|{bins}|{seed}"
    return hashlib.sha256(text.encode()).hexdigest()[:10]


def _isotonic_decreasing(y, weights) -> np.ndarray:
    """Weighted pool-adjacent-violators fit, non-increasing."""
    blocks = [[float(v), float(w), 1] for v, w in zip(y, weights)]
    merged: list[list] = []
    for blk in blocks:
        merged.append(blk)
        while len(merged) > 1 and merged[-2][0] < merged[-1][0]:
            v2, w2, c2 = merged.pop()
            v1, w1, c1 = merged.pop()
            w = w1 + w2
            merged.append([(v1 * w1 + v2 * w2) / w, w, c1 + c2])
    out = []
    for v, _, c in merged:
        out.extend([v] * c)
    return np.array(out)


def calibrate_confidence(
    code: CyclicCode,
    decoder_cfg: DecoderConfig,
    ebn0_grid,
    frames_per_point: int,
    bins: int = 32,
    seed: int = 0,
) -> ConfidenceTable:
    """Estimate the confidence table for one (code, decoder) pair.

    Known codewords are sent through BPSK + AWGN at every grid point
    (sigma derived from the component rate k/n), decoded, and each frame is
    binned by the destructive distance between the received word and the
    decision.  phi per bin is the fraction of frames whose decision equals
    the transmitted codeword, pooled across the whole Eb/N0 grid into a
    single table; bin edges sit at empirical quantiles of the observed
    distances.  Estimates are clamped away from {0, 1} and smoothed to be
    non-increasing; empty bins are filled by neighbor interpolation and
    flagged with sample_counts = 0.
    """
    from .channel import ROLE_MESSAGE, ROLE_NOISE, frame_rng, sigma_from_ebn0

    if frames_per_point < 1000:
        raise ValueError("frames_per_point must be >= 1000")
    if bins < 2:
        raise ValueError("bins must be >= 2")
    ebn0_grid = [float(e) for e in ebn0_grid]
    if not ebn0_grid:
        raise ValueError("ebn0_grid must be nonempty")

    n, k = code.n, code.k
    rate = k / n
    distances = np.empty(len(ebn0_grid) * frames_per_point)
    correct = np.empty(distances.shape, dtype=bool)
    idx = 0
    for point, ebn0 in enumerate(ebn0_grid):
        sigma = sigma_from_ebn0(rate, ebn0)
        for f in range(frames_per_point):
            frame = point * frames_per_point + f
            msg = frame_rng(seed, frame, ROLE_MESSAGE).integers(0, 2, k, dtype=np.uint8)
            cw = encode_systematic(code, msg)
            tx = 1.0 - 2.0 * cw
            r = tx + frame_rng(seed, frame, ROLE_NOISE).normal(0.0, sigma, n)
            res = siho_decode(code, r, decoder_cfg, sigma if sigma > 0 else None)
            distances[idx] = destructive_distance(r, 1.0 - 2.0 * res.decision)
            correct[idx] = bool((res.decision == cw).all())
            idx += 1

    edges = np.unique(np.quantile(distances, np.linspace(0.0, 1.0, bins + 1)))
    if len(edges) < 2:
        edges = np.array([edges[0], edges[0] + 1.0])
    n_bins = len(edges) - 1
    # same assignment rule as ConfidenceTable.lookup
    which = np.minimum(
        np.searchsorted(edges[1:], distances, side="right"), n_bins - 1
    )
    counts = np.bincount(which, minlength=n_bins)
    hits = np.bincount(which, weights=correct.astype(float), minlength=n_bins)

    raw = np.empty(n_bins)
    filled = counts > 0
    raw[filled] = hits[filled] / counts[filled]
    if not filled.all():
        occupied = np.flatnonzero(filled)
        raw[~filled] = np.interp(np.flatnonzero(~filled), occupied, raw[occupied])
    raw = np.clip(raw, PHI_EPSILON, 1.0 - PHI_EPSILON)
    phi = np.clip(
        _isotonic_decreasing(raw, np.maximum(counts, 1)),
        PHI_EPSILON,
        1.0 - PHI_EPSILON,
    )
    return ConfidenceTable(
        code_name=code.name,
        p=decoder_cfg.p,
        bin_lower=edges[:-1].copy(),
        bin_upper=edges[1:].copy(),
        phi=phi,
        sample_counts=counts,
        raw_phi=raw,
    )
