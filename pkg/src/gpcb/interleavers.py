"""Interleaver family for the parallel concatenation.

All kinds reduce to a forward permutation in "reading order":
``interleaved[i] = natural[forward[i]]``.  The matrix kinds (block,
diagonal, cyclic, helical) view the N symbols as a rows x cols array
written row-wise; in the GPCB context rows = M and cols = k, matching the
sub-block layout of the data.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

KINDS = ("identity", "block", "diagonal", "cyclic", "helical", "random", "s_random")
_MATRIX_KINDS = ("block", "diagonal", "cyclic", "helical")


@dataclass(eq=False)
class Interleaver:
    """A bijection on 0..size-1 with its inverse."""

    kind: str
    size: int
    forward: np.ndarray
    inverse: np.ndarray
    params: dict = field(default_factory=dict)

    def interleave(self, x) -> np.ndarray:
        return np.asarray(x)[self.forward]

    def deinterleave(self, y) -> np.ndarray:
        return np.asarray(y)[self.inverse]


def _block(rows: int, cols: int) -> np.ndarray:
    # write row-wise, read column-wise
    return np.arange(rows * cols).reshape(rows, cols).T.ravel()


def _diagonal(rows: int, cols: int) -> np.ndarray:
    # read along wrapping diagonals: diagonal d visits (i, (i + d) mod cols)
    i = np.arange(rows)
    return np.concatenate([i * cols + (i + d) % cols for d in range(cols)])


def _cyclic(rows: int, cols: int) -> np.ndarray:
    # sub-block (row) i right-rotated by i, then read column-wise so the
    # rotation phase disperses each sub-block across the readout
    i = np.arange(rows)
    return np.concatenate([i * cols + (j - i) % cols for j in range(cols)])


def _helical(rows: int, cols: int) -> np.ndarray:
    # read column-wise with a one-step row offset per column
    i = np.arange(rows)
    return np.concatenate([((i + j) % rows) * cols + j for j in range(cols)])


def _s_random_attempt(size: int, spread: int, rng: np.random.Generator) -> list[int] | None:
    """One randomized greedy pass with endgame swap repair.

    The pool is kept sorted so the values excluded by the trailing window
    can be masked with searchsorted intervals; among compatible values the
    one with the smallest random priority is placed.  When no pool value
    fits (which happens only near the end, where leftovers cluster), a
    placed value that does fit is swapped out in favor of a leftover that
    fits its slot.
    """
    pool = np.arange(size)
    priority = rng.permutation(size).astype(float)
    out: list[int] = []
    repairs_left = 4 * (spread + 1)

    def compatible_mask(values: np.ndarray, window) -> np.ndarray:
        bounds = np.zeros(len(values) + 1, dtype=np.int32)
        for u in window:
            lo = np.searchsorted(values, u - spread, side="left")
            hi = np.searchsorted(values, u + spread, side="right")
            bounds[lo] += 1
            bounds[hi] -= 1
        return np.cumsum(bounds[:-1]) == 0

    while len(out) < size:
        window = out[-spread:] if spread else []
        ok = np.flatnonzero(compatible_mask(pool, window))
        if ok.size:
            pick = ok[np.argmin(priority[pool[ok]])]
            out.append(int(pool[pick]))
            pool = np.delete(pool, pick)
            continue
        # endgame repair: a placed value u that fits the current window gets
        # returned to the pool (placeable next round) and its slot takes a
        # leftover that fits there; slots inside the window never qualify
        # (|u - u| = 0), so the window itself is unchanged by the swap.
        repaired = False
        if repairs_left > 0:
            repairs_left -= 1
            for j in rng.permutation(len(out)):
                u = out[j]
                if not all(abs(u - w) > spread for w in window):
                    continue
                neighbors = out[max(0, j - spread):j] + out[j + 1:j + spread + 1]
                fits = next(
                    (t for t, v in enumerate(pool)
                     if all(abs(int(v) - w) > spread for w in neighbors)),
                    None,
                )
                if fits is not None:
                    out[j] = int(pool[fits])
                    pool = np.sort(np.append(np.delete(pool, fits), u))
                    repaired = True
                    break
        if not repaired:
            return None
    return out


def _s_random(size: int, spread: int, rng: np.random.Generator,
              max_attempts: int = 30) -> np.ndarray | None:
    """Spread-constrained permutation; None if all attempts fail."""
    if spread <= 0:
        return rng.permutation(size)
    for _ in range(max_attempts):
        out = _s_random_attempt(size, spread, rng)
        if out is not None:
            return np.array(out)
    return None


def make_interleaver(kind: str, size: int, *, rows: int | None = None,
                     cols: int | None = None, seed: int = 0,
                     spread: int | None = None) -> Interleaver:
    """Build an interleaver; deterministic given (kind, size, params, seed).

    block/diagonal/cyclic/helical need rows * cols == size.  s_random uses
    spread S = floor(sqrt(size / 2)) by default and guarantees
    |pi(i) - pi(j)| > S whenever 0 < |i - j| <= S; if construction fails
    after bounded retries, S is lowered (and reported) until it succeeds.
    """
    if size < 1:
        raise ValueError("interleaver size must be >= 1")
    if kind not in KINDS:
        raise ValueError(
            f"unknown interleaver kind {kind!r}; supported kinds: {', '.join(KINDS)}"
        )
    params: dict = {}
    if kind == "identity":
        forward = np.arange(size)
    elif kind in _MATRIX_KINDS:
        if rows is None or cols is None or rows * cols != size:
            raise ValueError(
                f"{kind} interleaver needs rows*cols == size ({rows}x{cols} != {size})"
            )
        forward = {"block": _block, "diagonal": _diagonal,
                   "cyclic": _cyclic, "helical": _helical}[kind](rows, cols)
        params = {"rows": rows, "cols": cols}
    elif kind == "random":
        forward = np.random.default_rng(seed).permutation(size)
        params = {"seed": seed}
    else:  # s_random
        requested = spread if spread is not None else int(math.floor(math.sqrt(size / 2)))
        s = requested
        rng = np.random.default_rng(seed)
        forward = None
        while forward is None:
            forward = _s_random(size, s, rng)
            if forward is None:
                s -= 1
        if s < requested:
            logger.warning(
                "s_random interleaver: spread lowered from %d to %d for size %d",
                requested, s, size,
            )
        params = {"seed": seed, "spread": s, "requested_spread": requested}

    inverse = np.empty(size, dtype=forward.dtype)
    inverse[forward] = np.arange(size)
    forward.setflags(write=False)
    inverse.setflags(write=False)
    return Interleaver(kind=kind, size=size, forward=forward, inverse=inverse,
                       params=params)
