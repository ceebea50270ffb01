"""Generalized parallel concatenation of two cyclic component codes.

N = M*k data bits are split into M sub-blocks; each sub-block is encoded by
the first component directly and, after interleaving the whole data block,
by the second component.  The codeword on the wire is
``[systematic N | parity field 1 | parity field 2]`` of total length
L = M*(n1 + n2 - k); the rate k / (n1 + n2 - k) does not depend on M.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclic import CyclicCode, parity_basis
from .interleavers import Interleaver


@dataclass(eq=False)
class GpcbCode:
    """Two equal-k cyclic components, a sub-block count M, and an interleaver."""

    c1: CyclicCode
    c2: CyclicCode
    m_subblocks: int
    interleaver: Interleaver

    def __post_init__(self):
        if self.c1.k != self.c2.k:
            raise ValueError(
                f"component codes must share k ({self.c1.k} != {self.c2.k})"
            )
        if self.m_subblocks < 1:
            raise ValueError("M must be >= 1")
        if self.interleaver.size != self.N:
            raise ValueError(
                f"interleaver size {self.interleaver.size} != N = M*k = {self.N}"
            )

    @property
    def k(self) -> int:
        return self.c1.k

    @property
    def N(self) -> int:
        return self.m_subblocks * self.k

    @property
    def P1(self) -> int:
        return self.m_subblocks * (self.c1.n - self.k)

    @property
    def P2(self) -> int:
        return self.m_subblocks * (self.c2.n - self.k)

    @property
    def L(self) -> int:
        return self.N + self.P1 + self.P2

    @property
    def rate(self) -> Fraction:
        return gpcb_rate(self)

    def __str__(self) -> str:
        return (
            f"gpcb[{self.c1.name}+{self.c2.name}, M={self.m_subblocks}, "
            f"{self.interleaver.kind}] ({self.L},{self.N})"
        )


def gpcb_rate(code: GpcbCode) -> Fraction:
    """Exact code rate k / (n1 + n2 - k), independent of M."""
    return Fraction(code.k, code.c1.n + code.c2.n - code.k)


def _parity_field(code: CyclicCode, data: np.ndarray, m_subblocks: int) -> np.ndarray:
    blocks = data.reshape(m_subblocks, code.k).astype(np.int64)
    return ((blocks @ parity_basis(code)) & 1).astype(np.uint8).ravel()


def gpcb_encode(code: GpcbCode, message) -> np.ndarray:
    """Encode N message bits to the [systematic | P1 | P2] codeword."""
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape != (code.N,):
        raise ValueError(f"message length {msg.shape} != N={code.N}")
    p1 = _parity_field(code.c1, msg, code.m_subblocks)
    p2 = _parity_field(code.c2, code.interleaver.interleave(msg), code.m_subblocks)
    return np.concatenate([msg, p1, p2])


def split_codeword(code: GpcbCode, word) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Views of the systematic, first-parity, and second-parity fields."""
    word = np.asarray(word)
    if word.shape != (code.L,):
        raise ValueError(f"word length {word.shape} != L={code.L}")
    return (
        word[: code.N],
        word[code.N : code.N + code.P1],
        word[code.N + code.P1 :],
    )
