"""Independent reference implementations used to check the library."""

from __future__ import annotations

import math

import numpy as np


def codebook(generator_coeffs, n: int, k: int) -> np.ndarray:
    """All 2^k codewords as polynomial multiples of the generator.

    Built by GF(2) convolution, a different route from the remainder-based
    systematic encoder under test.
    """
    g = np.asarray(generator_coeffs, dtype=np.uint8)
    words = np.zeros((1 << k, n), dtype=np.uint8)
    for value in range(1 << k):
        u = np.array([(value >> i) & 1 for i in range(k)], dtype=np.uint8)
        prod = np.convolve(u, g) % 2
        words[value, : len(prod)] = prod
    return words


def ml_decode(book_pm1: np.ndarray, r: np.ndarray) -> int:
    """Index of the codeword minimizing squared Euclidean distance."""
    return int(np.argmin(((r - book_pm1) ** 2).sum(axis=1)))


def min_distance(book: np.ndarray) -> int:
    weights = book.sum(axis=1)
    return int(weights[weights > 0].min())


def poly_divmod_reference(a: int, b: int) -> tuple[int, int]:
    """Long division over GF(2) on int-packed polynomials."""
    q = 0
    while a and a.bit_length() >= b.bit_length():
        shift = a.bit_length() - b.bit_length()
        q |= 1 << shift
        a ^= b << shift
    return q, a


def crossing_ebn0(points: list[tuple[float, float]], target_ber: float) -> float:
    """Eb/N0 where the BER curve crosses ``target_ber``.

    Interpolates linearly in (Eb/N0, log10 BER) between the bracketing grid
    points; raises if the grid does not bracket the target.
    """
    pts = sorted((e, b) for e, b in points if b > 0)
    for (e1, b1), (e2, b2) in zip(pts, pts[1:]):
        if b1 >= target_ber >= b2:
            if b1 == b2:
                return (e1 + e2) / 2
            frac = (math.log10(b1) - math.log10(target_ber)) / (
                math.log10(b1) - math.log10(b2)
            )
            return e1 + frac * (e2 - e1)
    raise AssertionError(
        f"target BER {target_ber:g} not bracketed by {pts}"
    )


def qfunc(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))
