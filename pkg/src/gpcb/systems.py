"""Concrete systems pluggable into channel.run_ber.

Each scheme exposes ``info_bits``, ``rate``, ``iterations``, ``encode`` and
``decode``; decode returns one (info-bit decisions, cumulative test
sequences) pair per decoding iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import hard_decision
from .concatenation import GpcbCode, gpcb_encode
from .confidence import ConfidenceTable
from .cyclic import CyclicCode, encode_systematic
from .siho import DecoderConfig, siho_decode
from .turbo import TurboConfig, turbo_decode


@dataclass(frozen=True)
class UncodedBpsk:
    """Plain BPSK, used to sanity-check the measurement harness."""

    frame_bits: int = 1000
    iterations: int = 1

    @property
    def info_bits(self) -> int:
        return self.frame_bits

    @property
    def rate(self) -> Fraction:
        return Fraction(1)

    def encode(self, message: np.ndarray) -> np.ndarray:
        return message

    def decode(self, soft: np.ndarray, sigma: float):
        return [(hard_decision(soft), 0)]


@dataclass(frozen=True)
class ComponentSystem:
    """A bare cyclic code with the SIHO decoder (single shot, no iteration)."""

    code: CyclicCode
    decoder_cfg: DecoderConfig = DecoderConfig()
    iterations: int = 1

    @property
    def info_bits(self) -> int:
        return self.code.k

    @property
    def rate(self) -> Fraction:
        return self.code.rate

    def encode(self, message: np.ndarray) -> np.ndarray:
        return encode_systematic(self.code, message)

    def decode(self, soft: np.ndarray, sigma: float):
        res = siho_decode(self.code, soft, self.decoder_cfg, sigma)
        return [(res.decision[self.code.n - self.code.k :], res.test_sequences_used)]


@dataclass(frozen=True)
class TurboSystem:
    """A GPCB code under iterative decoding."""

    gpcb: GpcbCode
    turbo_cfg: TurboConfig

    @property
    def info_bits(self) -> int:
        return self.gpcb.N

    @property
    def rate(self) -> Fraction:
        return self.gpcb.rate

    @property
    def iterations(self) -> int:
        return self.turbo_cfg.max_iterations

    def encode(self, message: np.ndarray) -> np.ndarray:
        return gpcb_encode(self.gpcb, message)

    def decode(self, soft: np.ndarray, sigma: float):
        _, traces = turbo_decode(self.gpcb, soft, self.turbo_cfg, sigma)
        return [(t.decision, t.test_sequences) for t in traces]


def turbo_system(
    gpcb: GpcbCode,
    table1: ConfidenceTable,
    table2: ConfidenceTable | None = None,
    *,
    iterations: int = 6,
    component_cfg: DecoderConfig = DecoderConfig(),
) -> TurboSystem:
    cfg = TurboConfig(
        table1=table1,
        table2=table2,
        max_iterations=iterations,
        component_cfg=component_cfg,
    )
    return TurboSystem(gpcb=gpcb, turbo_cfg=cfg)
