"""Estimator-style entry points.

``SpectralTypeAnalyzer`` runs the whole exact pipeline in ``fit`` and keeps
every intermediate result as a fitted attribute; ``transform`` maps lags to
correlation vectors and ``predict`` gives the diffraction verdict for a set
of letter weights. ``PeriodogramTransformer`` is the numeric counterpart for
batches of sequences.
"""
from __future__ import annotations

import time
from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bisubstitution import DecompositionError, build_bisubstitution, ergodic_decomposition
from .classify import assemble_maximal_type, profile_rays, weighted_diffraction_verdict
from .correlation import CorrelationTable, verify_theorem_consistency
from .hull import UnsupportedHullError, spectral_hull
from .numerics import MemoryBudgetError, periodogram
from .substitution import (
    NoFixedPointError,
    NotInjectiveError,
    NotPrimitiveError,
    SubstitutionError,
    height,
    instruction_matrices,
    is_aperiodic_pansiot,
    is_primitive,
    letter_frequencies,
    substitution_matrix,
)
from .validation import check_positive_int, check_sequences, check_substitution

__all__ = ["AnalysisError", "NotAperiodicError", "SpectralTypeAnalyzer", "PeriodogramTransformer"]


class NotAperiodicError(ValueError):
    pass


class AnalysisError(RuntimeError):
    """A pipeline stage failed; ``stage`` names it and ``__cause__`` holds the reason."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


class SpectralTypeAnalyzer(BaseEstimator):
    """Maximal spectral type of a constant-length substitution.

    Parameters
    ----------
    k_max : int, default=4096
        Horizon for the ray coefficients used by the classification.
    seed_letter : str, optional
        Fixed-point seed for the height computation (default: first letter
        that starts its own image).
    consistency_levels : tuple of int, default=(2, 3)
        Block levels at which the correlation recursion is cross-checked.
    consistency_lags : int, default=8
        Lags ``k < consistency_lags`` used by that cross-check.

    Attributes
    ----------
    substitution_ : Substitution
    primitivity_exponent_ : int
    frequencies_ : tuple of Fraction
    aperiodicity_ : PansiotWitness
    height_ : HeightResult
    decomposition_ : ErgodicDecomposition
    correlations_ : CorrelationTable
    hull_ : SpectralHull
    profiles_ : list of RayMeasureProfile
    report_ : SpectralReport
    stages_ : dict
        Stage name -> status, filled as the pipeline advances.
    timings_ : dict
        Stage name -> seconds.
    """

    def __init__(self, k_max=4096, seed_letter=None, consistency_levels=(2, 3), consistency_lags=8):
        self.k_max = k_max
        self.seed_letter = seed_letter
        self.consistency_levels = consistency_levels
        self.consistency_lags = consistency_lags

    def _stage(self, name, func):
        t0 = time.perf_counter()
        try:
            result = func()
        except Exception as exc:
            self.stages_[name] = "failed"
            self.timings_[name] = time.perf_counter() - t0
            raise AnalysisError(name, exc) from exc
        self.stages_[name] = "ok"
        self.timings_[name] = time.perf_counter() - t0
        return result

    def fit(self, X, y=None):
        """Run the pipeline on a substitution (object, mapping, JSON text or path)."""
        k_max = check_positive_int(self.k_max, "k_max", minimum=64)
        self.stages_, self.timings_ = {}, {}
        s = self._stage("parse", lambda: check_substitution(X))
        self.substitution_ = s

        def matrices():
            self.instruction_matrices_ = instruction_matrices(s)
            self.substitution_matrix_ = substitution_matrix(s)

        self._stage("matrices", matrices)

        def primitivity():
            ok, n = is_primitive(s)
            self.primitivity_exponent_ = n
            if not ok:
                raise NotPrimitiveError(
                    f"no power M^n with n <= {s.size ** 2 - 2 * s.size + 2} is positive")

        self._stage("primitivity", primitivity)
        self.frequencies_ = self._stage("frequencies", lambda: letter_frequencies(s))

        def aperiodicity():
            w = is_aperiodic_pansiot(s)
            self.aperiodicity_ = w
            if not w.aperiodic:
                raise NotAperiodicError("no letter has two distinct neighbourhoods")

        self._stage("aperiodicity", aperiodicity)
        self.height_ = self._stage("height", lambda: height(s, self.seed_letter))
        self.decomposition_ = self._stage(
            "decomposition", lambda: ergodic_decomposition(build_bisubstitution(s)))

        def correlations():
            table = CorrelationTable(s)
            table.upto(k_max)
            self.correlations_ = table
            self.consistency_ = {
                (p, k): verify_theorem_consistency(s, k, p, table)
                for p in self.consistency_levels for k in range(self.consistency_lags)
            }
            if not all(self.consistency_.values()):
                bad = [key for key, ok in self.consistency_.items() if not ok]
                raise ArithmeticError(f"block identity fails at (p, k) = {bad[0]}")

        self._stage("correlation", correlations)
        self.hull_ = self._stage("hull", lambda: spectral_hull(s, self.decomposition_))
        self.profiles_ = self._stage(
            "classify", lambda: profile_rays(self.hull_, self.correlations_, k_max))
        weighted = None
        if s.weights is not None:
            weighted = self._stage("weighted", lambda: self._weighted(s))
        self.report_ = assemble_maximal_type(s, self.profiles_, self.height_.height, weighted)
        return self

    def _weighted(self, s):
        return weighted_diffraction_verdict(
            s, self.hull_, self.decomposition_.classes, self.profiles_, self.correlations_,
            self.k_max)

    def transform(self, X):
        """Correlation vectors for the lags in ``X`` (object array of Fractions)."""
        check_is_fitted(self, "correlations_")
        ks = np.atleast_1d(np.asarray(X, dtype=np.int64))
        if (ks < 0).any():
            raise ValueError("lags must be nonnegative")
        return np.array([self.correlations_[int(k)] for k in ks], dtype=object)

    def predict(self, X=None):
        """Diffraction verdict for weights ``X`` (letter -> number), or the fitted weights."""
        check_is_fitted(self, "profiles_")
        s = self.substitution_
        if X is not None:
            if not isinstance(X, Mapping):
                raise TypeError("weights must be a mapping letter -> number")
            s = s.with_weights(X)
        if s.weights is None:
            raise SubstitutionError("no weights supplied")
        return self._weighted(s).verdict


class PeriodogramTransformer(TransformerMixin, BaseEstimator):
    """Rows of sequences -> periodogram rows on a grid of ``grid_factor * N`` points."""

    def __init__(self, grid_factor=1):
        self.grid_factor = grid_factor

    def fit(self, X, y=None):
        a = check_sequences(X)
        check_positive_int(self.grid_factor, "grid_factor")
        self.n_features_in_ = a.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        a = check_sequences(X)
        if a.shape[1] != self.n_features_in_:
            raise ValueError(f"expected sequences of length {self.n_features_in_}, got {a.shape[1]}")
        n = a.shape[1]
        return np.vstack([periodogram(row, n, self.grid_factor * n) for row in a])


EXIT_CODES = {
    SubstitutionError: 3,
    OSError: 3,
    NotPrimitiveError: 4,
    NotInjectiveError: 5,
    NotAperiodicError: 5,
    NoFixedPointError: 5,
    DecompositionError: 6,
    UnsupportedHullError: 6,
    MemoryBudgetError: 7,
}


def exit_code_for(exc: BaseException) -> int:
    cause = exc.cause if isinstance(exc, AnalysisError) else exc
    for cls, code in EXIT_CODES.items():
        if isinstance(cause, cls):
            return code
    return 1
