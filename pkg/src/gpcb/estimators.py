"""Scikit-learn-style estimator facade.

`GpcbEncoder.transform` maps message frames to codeword frames,
`CyclicCodeDecoder.predict` and `GpcbTurboDecoder.predict` map received
soft-value frames back to message bits.  `GpcbTurboDecoder.fit` runs (or
loads) the confidence calibration the turbo decoder needs, so the usual
fit-then-predict workflow and `get_params`/`set_params`/`clone` composition
work out of the box.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .channel import sigma_from_ebn0
from .concatenation import GpcbCode, gpcb_encode
from .confidence import ConfidenceTable, calibrate_confidence
from .cyclic import get_code
from .interleavers import make_interleaver
from .siho import DecoderConfig, siho_decode
from .turbo import TurboConfig, turbo_decode


def _decoder_config(p, max_shifts, threshold_enabled, threshold_slack):
    return DecoderConfig(
        p=p,
        max_shifts=max_shifts,
        threshold_enabled=threshold_enabled,
        threshold_slack=threshold_slack,
    )


def _build_gpcb(component, component2, m_subblocks, interleaver, interleaver_seed,
                rows, cols, spread):
    c1 = get_code(component)
    c2 = get_code(component2) if component2 is not None else c1
    size = m_subblocks * c1.k
    if interleaver in ("block", "diagonal", "cyclic", "helical"):
        rows = rows if rows is not None else m_subblocks
        cols = cols if cols is not None else c1.k
    return GpcbCode(
        c1,
        c2,
        m_subblocks,
        make_interleaver(interleaver, size, rows=rows, cols=cols,
                         seed=interleaver_seed, spread=spread),
    )


def _check_binary_frames(X, width, name):
    X = check_array(X, dtype=np.uint8, ensure_2d=True)
    if X.shape[1] != width:
        raise ValueError(f"{name} must have {width} columns, got {X.shape[1]}")
    if not np.isin(X, (0, 1)).all():
        raise ValueError(f"{name} must be binary")
    return X


def _check_soft_frames(X, width, name):
    X = check_array(X, dtype=np.float64, ensure_2d=True, ensure_all_finite=True)
    if X.shape[1] != width:
        raise ValueError(f"{name} must have {width} columns, got {X.shape[1]}")
    return X


class GpcbEncoder(TransformerMixin, BaseEstimator):
    """Encode (n_frames, N) message bits to (n_frames, L) codeword bits."""

    def __init__(self, component="bch-63-51", component2=None, m_subblocks=1,
                 interleaver="random", interleaver_seed=0, rows=None, cols=None,
                 spread=None):
        self.component = component
        self.component2 = component2
        self.m_subblocks = m_subblocks
        self.interleaver = interleaver
        self.interleaver_seed = interleaver_seed
        self.rows = rows
        self.cols = cols
        self.spread = spread

    def fit(self, X=None, y=None):
        self.code_ = _build_gpcb(self.component, self.component2, self.m_subblocks,
                                 self.interleaver, self.interleaver_seed,
                                 self.rows, self.cols, self.spread)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "code_")
        X = _check_binary_frames(X, self.code_.N, "message frames")
        return np.stack([gpcb_encode(self.code_, row) for row in X])

    def inverse_transform(self, X) -> np.ndarray:
        """Recover the systematic part of noiseless codeword frames."""
        check_is_fitted(self, "code_")
        X = _check_binary_frames(X, self.code_.L, "codeword frames")
        return X[:, : self.code_.N].copy()


class CyclicCodeDecoder(BaseEstimator):
    """SIHO-decode (n_frames, n) soft values to (n_frames, k) message bits."""

    def __init__(self, code="bch-63-51", p=4, max_shifts=None,
                 threshold_enabled=True, threshold_slack=2.0, ebn0_db=None):
        self.code = code
        self.p = p
        self.max_shifts = max_shifts
        self.threshold_enabled = threshold_enabled
        self.threshold_slack = threshold_slack
        self.ebn0_db = ebn0_db

    def fit(self, X=None, y=None):
        self.code_ = get_code(self.code)
        self.decoder_cfg_ = _decoder_config(self.p, self.max_shifts,
                                            self.threshold_enabled,
                                            self.threshold_slack)
        self.sigma_ = (
            sigma_from_ebn0(self.code_.rate, self.ebn0_db)
            if self.ebn0_db is not None
            else None
        )
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "code_")
        X = _check_soft_frames(X, self.code_.n, "received frames")
        k = self.code_.k
        out = np.empty((len(X), k), dtype=np.uint8)
        for i, row in enumerate(X):
            res = siho_decode(self.code_, row, self.decoder_cfg_, self.sigma_)
            out[i] = res.decision[self.code_.n - k :]
        return out


class GpcbTurboDecoder(BaseEstimator):
    """Iteratively decode (n_frames, L) soft values to (n_frames, N) bits.

    ``fit`` calibrates the confidence table for the component decoder (or
    adopts ``confidence_table`` when given), after which ``predict`` runs
    the turbo decoder at the configured Eb/N0 operating point.
    """

    def __init__(self, component="bch-63-51", component2=None, m_subblocks=1,
                 interleaver="random", interleaver_seed=0, rows=None, cols=None,
                 spread=None, p=4, max_shifts=None, threshold_enabled=True,
                 threshold_slack=2.0, iterations=6, ebn0_db=2.0,
                 confidence_table=None, calibration_ebn0=(1.0, 2.0, 3.0, 4.0, 5.0),
                 calibration_frames=2000, calibration_bins=32, calibration_seed=0):
        self.component = component
        self.component2 = component2
        self.m_subblocks = m_subblocks
        self.interleaver = interleaver
        self.interleaver_seed = interleaver_seed
        self.rows = rows
        self.cols = cols
        self.spread = spread
        self.p = p
        self.max_shifts = max_shifts
        self.threshold_enabled = threshold_enabled
        self.threshold_slack = threshold_slack
        self.iterations = iterations
        self.ebn0_db = ebn0_db
        self.confidence_table = confidence_table
        self.calibration_ebn0 = calibration_ebn0
        self.calibration_frames = calibration_frames
        self.calibration_bins = calibration_bins
        self.calibration_seed = calibration_seed

    def fit(self, X=None, y=None):
        self.code_ = _build_gpcb(self.component, self.component2, self.m_subblocks,
                                 self.interleaver, self.interleaver_seed,
                                 self.rows, self.cols, self.spread)
        cfg = _decoder_config(self.p, self.max_shifts, self.threshold_enabled,
                              self.threshold_slack)
        if self.confidence_table is not None:
            table1 = (
                ConfidenceTable.load(self.confidence_table)
                if not isinstance(self.confidence_table, ConfidenceTable)
                else self.confidence_table
            )
        else:
            table1 = calibrate_confidence(
                self.code_.c1, cfg, list(self.calibration_ebn0),
                self.calibration_frames, bins=self.calibration_bins,
                seed=self.calibration_seed,
            )
        table2 = None
        if self.code_.c2.name != self.code_.c1.name:
            table2 = calibrate_confidence(
                self.code_.c2, cfg, list(self.calibration_ebn0),
                self.calibration_frames, bins=self.calibration_bins,
                seed=self.calibration_seed,
            )
        self.turbo_cfg_ = TurboConfig(
            table1=table1, table2=table2,
            max_iterations=self.iterations, component_cfg=cfg,
        )
        self.sigma_ = sigma_from_ebn0(self.code_.rate, self.ebn0_db)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "turbo_cfg_")
        X = _check_soft_frames(X, self.code_.L, "received frames")
        out = np.empty((len(X), self.code_.N), dtype=np.uint8)
        for i, row in enumerate(X):
            out[i], _ = turbo_decode(self.code_, row, self.turbo_cfg_, self.sigma_)
        return out
