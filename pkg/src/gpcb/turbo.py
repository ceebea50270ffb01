"""Iterative decoding of GPCB codes with unscaled extrinsic exchange.

Each full iteration runs the two component decoders in turn.  Side 1 sees
the systematic channel values plus side 2's extrinsic together with the
first parity field; side 2 sees the interleaved sum of the systematic
channel values and side 1's extrinsic together with the second parity
field.  Component decisions are converted to extrinsic reliabilities via
the confidence table and fed to the partner with unit weight: the value
entering each component decoder is exactly channel + opposite extrinsic.
Channel observations are never overwritten, parity reliabilities are never
updated, and extrinsics are carried in natural (deinterleaved) order;
interleaving is applied only when composing side 2's input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .concatenation import GpcbCode, split_codeword
from .confidence import ConfidenceTable, destructive_distance, extrinsic_vector
from .siho import DecoderConfig, siho_decode_batch


@dataclass
class TurboConfig:
    """Iteration budget, component decoder setup, and confidence tables."""

    table1: ConfidenceTable
    table2: ConfidenceTable | None = None
    max_iterations: int = 6
    component_cfg: DecoderConfig = field(default_factory=DecoderConfig)
    output_tap: str = "combined"        # or "last_decisions"
    stop_on_convergence: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.output_tap not in ("combined", "last_decisions"):
            raise ValueError(f"unknown output_tap {self.output_tap!r}")

    def table_for(self, side: int) -> ConfidenceTable:
        if side == 2 and self.table2 is not None:
            return self.table2
        return self.table1


@dataclass
class TurboState:
    """Mutable per-frame decoder state; channel fields are never modified."""

    systematic: np.ndarray   # length N, natural order
    parity1: np.ndarray      # length P1
    parity2: np.ndarray      # length P2, interleaved-domain sub-blocks
    extrinsic1: np.ndarray   # length N, natural order
    extrinsic2: np.ndarray   # length N, natural order
    iteration: int = 0


@dataclass
class IterationTrace:
    """Decision snapshot after one full iteration."""

    decision: np.ndarray       # hard info bits, natural order
    test_sequences: int        # cumulative component test sequences so far


def make_state(gpcb: GpcbCode, received) -> TurboState:
    received = np.asarray(received, dtype=float)
    if received.shape != (gpcb.L,):
        raise ValueError(f"received length {received.shape} != L={gpcb.L}")
    if not np.isfinite(received).all():
        raise ValueError("received word contains non-finite values")
    systematic, parity1, parity2 = split_codeword(gpcb, received)
    return TurboState(
        systematic=systematic,
        parity1=parity1,
        parity2=parity2,
        extrinsic1=np.zeros(gpcb.N),
        extrinsic2=np.zeros(gpcb.N),
    )


def side_input(side: int, state: TurboState, gpcb: GpcbCode) -> tuple[np.ndarray, np.ndarray]:
    """(info reliabilities, parity reliabilities) seen by one side.

    The info part is exactly channel + opposite-side extrinsic (no scaling);
    side 2's view is interleaved.
    """
    if side == 1:
        return state.systematic + state.extrinsic2, state.parity1
    if side == 2:
        combined = state.systematic + state.extrinsic1
        return gpcb.interleaver.interleave(combined), state.parity2
    raise ValueError(f"side must be 1 or 2, got {side}")


def half_iteration(
    side: int,
    state: TurboState,
    gpcb: GpcbCode,
    cfg: TurboConfig,
    sigma: float,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Run one side's M sub-block decodes.

    Assembles each sub-block's length-n word as [parity | info] per the
    systematic convention, decodes it, derives the confidence value from
    the destructive distance, and keeps only the info-position components
    of the extrinsic output (parity extrinsics are discarded).

    Returns
    -------
    (extrinsic, info_decisions, test_sequences)
        ``extrinsic`` and ``info_decisions`` are length N in the side's own
        domain (natural for side 1, interleaved for side 2).
    """
    code = gpcb.c1 if side == 1 else gpcb.c2
    table = cfg.table_for(side)
    info, parity = side_input(side, state, gpcb)
    n, k = code.n, code.k
    n_parity = n - k
    m = gpcb.m_subblocks

    words = np.empty((m, n))
    words[:, :n_parity] = parity.reshape(m, n_parity)
    words[:, n_parity:] = info.reshape(m, k)
    results = siho_decode_batch(code, words, cfg.component_cfg, sigma)

    extrinsic = np.empty(gpcb.N)
    decisions = np.empty(gpcb.N, dtype=np.uint8)
    tested = 0
    for b, res in enumerate(results):
        tested += res.test_sequences_used
        dec_pm = 1.0 - 2.0 * res.decision
        phi = table.lookup(destructive_distance(words[b], dec_pm))
        omega = extrinsic_vector(words[b], dec_pm, phi, sigma)
        extrinsic[b * k : (b + 1) * k] = omega[n_parity:]
        decisions[b * k : (b + 1) * k] = res.decision[n_parity:]
    return extrinsic, decisions, tested


def turbo_decode(
    gpcb: GpcbCode,
    received,
    cfg: TurboConfig,
    sigma: float,
) -> tuple[np.ndarray, list[IterationTrace]]:
    """Iteratively decode one received GPCB frame.

    Runs ``cfg.max_iterations`` full iterations (side 1 then side 2) and
    records after each one the hard decision of
    systematic + extrinsic1 + extrinsic2 in natural order (or, with
    output_tap="last_decisions", side 2's deinterleaved sub-block
    decisions).  Returns the final message decision and the per-iteration
    trace.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    state = make_state(gpcb, received)
    fwd = gpcb.interleaver.forward
    traces: list[IterationTrace] = []
    tested = 0
    converged_at: int | None = None

    for it in range(cfg.max_iterations):
        state.iteration = it + 1
        e1, _, t1 = half_iteration(1, state, gpcb, cfg, sigma)
        state.extrinsic1 = e1
        e2_pi, dec2_pi, t2 = half_iteration(2, state, gpcb, cfg, sigma)
        e2 = np.empty(gpcb.N)
        e2[fwd] = e2_pi
        state.extrinsic2 = e2
        tested += t1 + t2

        if cfg.output_tap == "last_decisions":
            decision = np.empty(gpcb.N, dtype=np.uint8)
            decision[fwd] = dec2_pi
        else:
            combined = state.systematic + state.extrinsic1 + state.extrinsic2
            decision = (combined < 0).astype(np.uint8)
        traces.append(IterationTrace(decision=decision, test_sequences=tested))

        if (
            cfg.stop_on_convergence
            and len(traces) > 1
            and (traces[-1].decision == traces[-2].decision).all()
        ):
            converged_at = len(traces)
            break

    if converged_at is not None:
        # pad the trace so callers always see max_iterations entries
        while len(traces) < cfg.max_iterations:
            traces.append(IterationTrace(decision=traces[-1].decision, test_sequences=tested))
    return traces[-1].decision, traces
