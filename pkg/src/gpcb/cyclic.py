"""Cyclic block codes: BCH and quadratic-residue construction, systematic encoding.

Codeword layout is lowest-degree-first: coordinates 0..n-k-1 carry the parity
bits and coordinates n-k..n-1 carry the message (the message polynomial is
pre-multiplied by x^(n-k), so the parity is the division remainder and the
systematic part sits in the high-order positions).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf2 import (
    BinaryPolynomial,
    CodeConstructionError,
    GaloisField,
    _gf_mul_mod,
    _gf_pow_mod,
    default_primitive_polynomial,
    minimal_polynomial,
)

# Known minimum distances of binary QR codes (informational metadata only;
# decoding never uses d).  Other lengths fall back to the square-root bound.
_QR_DISTANCES = {7: 3, 17: 5, 23: 7, 31: 7, 41: 9, 47: 11, 73: 13, 89: 17}


@dataclass(frozen=True)
class CyclicCode:
    """An (n, k, d) binary cyclic code with systematic generator structure."""

    name: str
    n: int
    k: int
    d: int
    generator: BinaryPolynomial

    def __post_init__(self):
        if self.generator.degree != self.n - self.k:
            raise CodeConstructionError(
                f"generator degree {self.generator.degree} != n-k = {self.n - self.k}"
            )
        # generator must divide x^n - 1 (cyclic-shift closure)
        xn1 = BinaryPolynomial((1 << self.n) | 1)
        if (xn1 % self.generator).bits != 0:
            raise CodeConstructionError("generator does not divide x^n - 1")

    @property
    def info_positions(self) -> range:
        """Coordinates carrying message bits in systematic form."""
        return range(self.n - self.k, self.n)

    @property
    def rate(self):
        from fractions import Fraction

        return Fraction(self.k, self.n)

    def __str__(self) -> str:
        return f"{self.name} ({self.n},{self.k},{self.d})"


@lru_cache(maxsize=None)
def _parity_basis(generator_bits: int, n: int, k: int) -> np.ndarray:
    """Row i = parity bits of the unit message e_i, i.e. x^(n-k+i) mod g."""
    g = BinaryPolynomial(generator_bits)
    rows = np.zeros((k, n - k), dtype=np.uint8)
    for i in range(k):
        rem = BinaryPolynomial(1 << (n - k + i)) % g
        for j in range(n - k):
            rows[i, j] = (rem.bits >> j) & 1
    rows.setflags(write=False)
    return rows


def parity_basis(code: CyclicCode) -> np.ndarray:
    """(k, n-k) matrix mapping a message to its parity bits over GF(2)."""
    return _parity_basis(code.generator.bits, code.n, code.k)


def encode_systematic(code: CyclicCode, message) -> np.ndarray:
    """Systematic encode: [parity | message], parity = x^(n-k)·m(x) mod g(x)."""
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape != (code.k,):
        raise ValueError(f"message length {msg.shape} != k={code.k}")
    parity = (msg.astype(np.int64) @ parity_basis(code)) & 1
    out = np.empty(code.n, dtype=np.uint8)
    out[: code.n - code.k] = parity
    out[code.n - code.k :] = msg
    return out


def cyclic_shift(word, s: int) -> np.ndarray:
    """Right-rotate by s: output[i] = input[(i - s) mod n].  Works on hard or soft words."""
    return np.roll(np.asarray(word), s)


def is_codeword(code: CyclicCode, bits) -> bool:
    """Generator-divisibility check."""
    word = BinaryPolynomial.from_coefficients(np.asarray(bits, dtype=np.uint8))
    return (word % code.generator).bits == 0


def build_bch(m: int, t: int) -> CyclicCode:
    """Binary BCH code of length 2^m - 1 correcting t errors by design.

    The generator is the lcm of the minimal polynomials of alpha^1..alpha^2t,
    i.e. the product over the distinct conjugacy classes they cover.
    """
    if t < 1:
        raise CodeConstructionError(f"t={t} must be >= 1")
    fld = GaloisField(m)
    n = fld.order
    g = BinaryPolynomial(1)
    seen: set[int] = set()
    for e in range(1, 2 * t + 1):
        cls = e % n
        if cls in seen:
            continue
        cur = cls
        while True:
            seen.add(cur)
            cur = (2 * cur) % n
            if cur == cls:
                break
        g = g * minimal_polynomial(fld, cls)
    k = n - g.degree
    if k < 1:
        raise CodeConstructionError(f"BCH(m={m}, t={t}): generator degree {g.degree} leaves k <= 0")
    return CyclicCode(name=f"bch-{n}-{k}", n=n, k=k, d=2 * t + 1, generator=g)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def _multiplicative_order(a: int, n: int) -> int:
    order = 1
    cur = a % n
    while cur != 1:
        cur = (cur * a) % n
        order += 1
        if order > n:
            raise CodeConstructionError(f"{a} is not invertible mod {n}")
    return order


def build_qr(n: int) -> CyclicCode:
    """Binary quadratic-residue code of prime length n with k = (n+1)/2.

    Requires 2 to be a quadratic residue mod n (prime n = +-1 mod 8); the
    generator is the product of (x - beta^r) over the nonzero quadratic
    residues r, with beta a primitive n-th root of unity in GF(2^m),
    m = ord_n(2).  The residue set is closed under doubling, so the product
    has binary coefficients.
    """
    if not _is_prime(n) or n % 8 not in (1, 7):
        raise CodeConstructionError(
            f"QR length {n} unsupported: n must be prime with 2 a quadratic "
            "residue mod n (n = +-1 mod 8)"
        )
    m = _multiplicative_order(2, n)
    modulus = default_primitive_polynomial(m).bits
    beta = _gf_pow_mod(2, ((1 << m) - 1) // n, modulus)  # element x^e, order n
    residues = sorted({pow(i, 2, n) for i in range(1, n)})

    coeffs = [1]
    for r in residues:
        root = _gf_pow_mod(beta, r, modulus)
        nxt = [0] * (len(coeffs) + 1)
        for t, c in enumerate(coeffs):
            nxt[t + 1] ^= c
            nxt[t] ^= _gf_mul_mod(root, c, modulus)
        coeffs = nxt
    if any(c not in (0, 1) for c in coeffs):
        raise CodeConstructionError(f"QR({n}) generator has non-binary coefficients")
    g = BinaryPolynomial.from_coefficients(coeffs)
    k = n - len(residues)
    if n in _QR_DISTANCES:
        d = _QR_DISTANCES[n]
    else:
        d = 1
        while d * d < n:  # square-root lower bound, informational
            d += 2
    return CyclicCode(name=f"qr-{n}-{k}", n=n, k=k, d=d, generator=g)


# ---------------------------------------------------------------------------
# registry

#: Components exercised by the shipped experiments plus small test codes.
KNOWN_CODES = (
    "qr-7-4",
    "bch-15-7",
    "qr-23-12",
    "bch-63-51",
    "qr-47-24",
    "bch-127-106",
    "bch-255-215",
)


@lru_cache(maxsize=None)
def get_code(name: str) -> CyclicCode:
    """Resolve a registry name like "bch-63-51" or "qr-47-24" to a code."""
    parts = name.lower().split("-")
    if len(parts) != 3:
        raise CodeConstructionError(
            f"unknown code name {name!r}; expected 'bch-<n>-<k>' or 'qr-<n>-<k>'"
        )
    kind, n_s, k_s = parts
    try:
        n, k = int(n_s), int(k_s)
    except ValueError:
        raise CodeConstructionError(f"unknown code name {name!r}: n and k must be integers")
    if kind == "qr":
        code = build_qr(n)
        if code.k != k:
            raise CodeConstructionError(f"QR({n}) has k={code.k}, not {k}")
        return code
    if kind == "bch":
        m = n.bit_length()
        if (1 << m) - 1 != n:
            raise CodeConstructionError(f"BCH length {n} is not 2^m - 1")
        for t in range(1, n // 2):
            code = build_bch(m, t)
            if code.k == k:
                return code
            if code.k < k:
                break
        raise CodeConstructionError(f"no BCH code of length {n} with k={k}")
    raise CodeConstructionError(f"unknown code family {kind!r}; supported: bch, qr")


def list_codes() -> list[CyclicCode]:
    return [get_code(name) for name in KNOWN_CODES]
