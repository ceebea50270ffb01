"""GF(2) polynomial arithmetic and GF(2^m) field tables.

Polynomials over GF(2) are stored as Python integers with bit i holding the
coefficient of x^i (lowest degree first, packed machine words).  Field
elements of GF(2^m) are integers in [0, 2^m) in the polynomial basis of a
primitive element alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class CodeConstructionError(ValueError):
    """Raised when a field or code cannot be built from the given parameters."""


# Default primitive polynomials over GF(2), bit i = coefficient of x^i.
# Any primitive choice yields an equivalent code; these are the conventional
# low-weight ones.  Primitivity is re-verified at construction time.
DEFAULT_PRIMITIVE_POLYNOMIALS = {
    1: 0b11,                   # x + 1
    2: 0b111,                  # x^2 + x + 1
    3: 0b1011,                 # x^3 + x + 1
    4: 0b10011,                # x^4 + x + 1
    5: 0b100101,               # x^5 + x^2 + 1
    6: 0b1000011,              # x^6 + x + 1
    7: 0b10001001,             # x^7 + x^3 + 1
    8: 0b100011101,            # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,           # x^9 + x^4 + 1
    10: 0b10000001001,         # x^10 + x^3 + 1
    11: 0b100000000101,        # x^11 + x^2 + 1
    12: 0b1000001010011,       # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,      # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,     # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,    # x^15 + x + 1
    16: 0b10001000000001011,   # x^16 + x^12 + x^3 + x + 1
    17: 0b100000000000001001,  # x^17 + x^3 + 1
    18: 0b1000000000010000001,       # x^18 + x^7 + 1
    19: 0b10000000000000100111,      # x^19 + x^5 + x^2 + x + 1
    20: 0b100000000000000001001,     # x^20 + x^3 + 1
    21: 0b1000000000000000000101,    # x^21 + x^2 + 1
    22: 0b10000000000000000000011,   # x^22 + x + 1
    23: 0b100000000000000000100001,  # x^23 + x^5 + 1
    24: 0b1000000000000000010000111,  # x^24 + x^7 + x^2 + x + 1
}


def _bits_degree(bits: int) -> int:
    return bits.bit_length() - 1


def _clmul(a: int, b: int) -> int:
    """Carry-less (GF(2)) polynomial multiplication of int-packed polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def _poly_divmod_bits(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise CodeConstructionError("division by the zero polynomial")
    db = _bits_degree(b)
    q = 0
    r = a
    while r and _bits_degree(r) >= db:
        shift = _bits_degree(r) - db
        q |= 1 << shift
        r ^= b << shift
    return q, r


def _gf_mul_mod(a: int, b: int, modulus: int) -> int:
    """Multiply two field elements, reducing by the field's defining polynomial."""
    return _poly_divmod_bits(_clmul(a, b), modulus)[1]


def _gf_pow_mod(a: int, e: int, modulus: int) -> int:
    result = 1
    while e:
        if e & 1:
            result = _gf_mul_mod(result, a, modulus)
        a = _gf_mul_mod(a, a, modulus)
        e >>= 1
    return result


def _factorize(n: int) -> list[int]:
    """Prime factors of n (distinct), by trial division.  Fine for n <= 2^48."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def _is_primitive(poly: int, m: int) -> bool:
    """True if x has multiplicative order 2^m - 1 modulo poly."""
    order = (1 << m) - 1
    if _gf_pow_mod(2, order, poly) != 1:
        return False
    return all(_gf_pow_mod(2, order // q, poly) != 1 for q in _factorize(order))


def default_primitive_polynomial(m: int) -> "BinaryPolynomial":
    """Shipped primitive polynomial of degree m (m in 1..24)."""
    if m not in DEFAULT_PRIMITIVE_POLYNOMIALS:
        raise CodeConstructionError(
            f"no default primitive polynomial of degree {m}; "
            f"supported degrees are 1..{max(DEFAULT_PRIMITIVE_POLYNOMIALS)}"
        )
    return BinaryPolynomial(DEFAULT_PRIMITIVE_POLYNOMIALS[m])


@dataclass(frozen=True)
class BinaryPolynomial:
    """Polynomial over GF(2), bit i of ``bits`` = coefficient of x^i."""

    bits: int

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("polynomial bits must be nonnegative")

    @classmethod
    def from_coefficients(cls, coeffs) -> "BinaryPolynomial":
        """Build from a lowest-degree-first coefficient sequence."""
        bits = 0
        for i, c in enumerate(coeffs):
            if int(c) & 1:
                bits |= 1 << i
        return cls(bits)

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return None if self.bits == 0 else _bits_degree(self.bits)

    @property
    def coefficients(self) -> tuple[int, ...]:
        """Coefficients lowest degree first; () for the zero polynomial."""
        if self.bits == 0:
            return ()
        return tuple((self.bits >> i) & 1 for i in range(self.bits.bit_length()))

    def __add__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(self.bits ^ other.bits)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(_clmul(self.bits, other.bits))

    def __divmod__(self, other: "BinaryPolynomial"):
        q, r = _poly_divmod_bits(self.bits, other.bits)
        return BinaryPolynomial(q), BinaryPolynomial(r)

    def __mod__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return divmod(self, other)[0]

    def shift(self, amount: int) -> "BinaryPolynomial":
        """Multiply by x^amount."""
        return BinaryPolynomial(self.bits << amount)

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for i in range(self.bits.bit_length() - 1, -1, -1):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return " + ".join(terms)


def gf2_poly_divmod(a: BinaryPolynomial, b: BinaryPolynomial):
    """Quotient and remainder of a / b over GF(2); b must be nonzero."""
    return divmod(a, b)


class GaloisField:
    """GF(2^m) with log/antilog tables, m in 1..16.

    ``antilog_table[i]`` = alpha^i for i in 0..2^m-2 and ``log_table[x]`` is
    its inverse on nonzero elements.  Construction verifies that the supplied
    polynomial is primitive (the powers of alpha must cycle with period
    exactly 2^m - 1) and fails fast otherwise.
    """

    def __init__(self, m: int, primitive_polynomial: BinaryPolynomial | None = None):
        if not 1 <= m <= 16:
            raise CodeConstructionError(f"extension degree m={m} outside supported 1..16")
        if primitive_polynomial is None:
            primitive_polynomial = default_primitive_polynomial(m)
        if primitive_polynomial.degree != m:
            raise CodeConstructionError(
                f"primitive polynomial degree {primitive_polynomial.degree} != m={m}"
            )
        self.m = m
        self.primitive_polynomial = primitive_polynomial
        self.order = (1 << m) - 1

        poly = primitive_polynomial.bits
        antilog = [0] * self.order
        log = [-1] * (1 << m)
        x = 1
        for i in range(self.order):
            if x == 0 or (i > 0 and x == 1):
                raise CodeConstructionError(
                    "polynomial is not primitive: generated cyclic group "
                    f"smaller than 2^{m} - 1"
                )
            antilog[i] = x
            log[x] = i
            x <<= 1
            if x >> m:
                x ^= poly
        if x != 1:
            raise CodeConstructionError(
                "polynomial is not primitive: alpha^(2^m - 1) != 1"
            )
        self.antilog_table = tuple(antilog)
        self.log_table = tuple(log)

    def element(self, power: int) -> int:
        """alpha^power as a field element."""
        return self.antilog_table[power % self.order]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.antilog_table[(self.log_table[a] + self.log_table[b]) % self.order]

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self.antilog_table[(-self.log_table[a]) % self.order]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self.antilog_table[(self.log_table[a] * e) % self.order]

    def eval_poly(self, poly: BinaryPolynomial, x: int) -> int:
        """Evaluate a GF(2)[x] polynomial at a field element (Horner)."""
        acc = 0
        for c in reversed(poly.coefficients):
            acc = self.mul(acc, x) if acc else 0
            if c:
                acc ^= 1
        return acc

    def __repr__(self) -> str:
        return f"GaloisField(m={self.m}, primitive_polynomial={self.primitive_polynomial})"


def build_field(m: int, primitive_polynomial: BinaryPolynomial | None = None) -> GaloisField:
    """Construct GF(2^m); see GaloisField."""
    return GaloisField(m, primitive_polynomial)


@lru_cache(maxsize=None)
def _conjugacy_class(exponent: int, order: int) -> tuple[int, ...]:
    cls = [exponent % order]
    cur = (2 * exponent) % order
    while cur != cls[0]:
        cls.append(cur)
        cur = (2 * cur) % order
    return tuple(cls)


def minimal_polynomial(field: GaloisField, exponent: int) -> BinaryPolynomial:
    """Lowest-degree monic GF(2) polynomial with alpha^exponent as a root.

    The product runs over the conjugacy class {e, 2e, 4e, ...} mod 2^m - 1,
    so the result automatically has binary coefficients.
    """
    if not 0 <= exponent < field.order:
        raise ValueError(f"exponent {exponent} outside 0..{field.order - 1}")
    # coeffs[t] is the GF(2^m) coefficient of x^t.
    coeffs = [1]
    for j in _conjugacy_class(exponent, field.order):
        root = field.element(j)
        nxt = [0] * (len(coeffs) + 1)
        for t, c in enumerate(coeffs):
            nxt[t + 1] ^= c               # x * c(x)
            nxt[t] ^= field.mul(root, c)  # root * c(x)
        coeffs = nxt
    if any(c not in (0, 1) for c in coeffs):
        raise CodeConstructionError("minimal polynomial has non-binary coefficients")
    return BinaryPolynomial.from_coefficients(coeffs)
