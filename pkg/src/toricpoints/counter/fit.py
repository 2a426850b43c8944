"""Fitting N(T) ~ c T^a (log T)^(b-1) by least squares in log space."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted, check_X_y, check_array

from .records import CountRecord


class FitError(ValueError):
    pass


def _design(T: np.ndarray) -> np.ndarray:
    lt = np.log(T)
    return np.column_stack([lt, np.log(lt), np.ones_like(lt)])


class AsymptoticGrowthRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of log N = a log T + (b - 1) log log T + log c.

    ``X`` is a single column of height bounds T > e, ``y`` the counts.
    """

    def __init__(self, min_points: int = 6, min_decades: float = 3.0):
        self.min_points = min_points
        self.min_decades = min_decades

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        T = X[:, 0]
        if len(T) < self.min_points:
            raise FitError(f"need at least {self.min_points} checkpoints, got {len(T)}")
        if np.any(T <= math.e) or np.any(y <= 0):
            raise FitError("fit needs T > e and positive counts")
        if math.log10(T.max() / T.min()) < self.min_decades - 1e-9:
            raise FitError(f"checkpoints must span at least {self.min_decades} decades")
        A = _design(T)
        if np.linalg.matrix_rank(A) < 3:
            raise FitError("degenerate design matrix")
        coef, res, _, _ = np.linalg.lstsq(A, np.log(y), rcond=None)
        self.a_, bm1, logc = (float(v) for v in coef)
        self.b_ = bm1 + 1.0
        self.c_ = math.exp(logc)
        resid = np.log(y) - A @ coef
        self.residual_ = float(np.sqrt(np.mean(resid ** 2)))
        self.n_checkpoints_ = len(T)
        return self

    def predict(self, X):
        check_is_fitted(self, "a_")
        X = check_array(X, dtype=np.float64)
        T = X[:, 0]
        return self.c_ * T ** self.a_ * np.log(T) ** (self.b_ - 1.0)


@dataclass(frozen=True)
class FitResult:
    a_hat: float
    b_hat: float
    c_hat: float
    residual: float
    checkpoints: tuple[int, ...]


def fit_asymptotics(records: Sequence[CountRecord]) -> FitResult:
    if not records:
        raise FitError("no records")
    T = np.array([[float(r.T)] for r in records])
    N = np.array([float(r.N) for r in records])
    est = AsymptoticGrowthRegressor().fit(T, N)
    return FitResult(est.a_, est.b_, est.c_, est.residual_, tuple(r.T for r in records))


@dataclass(frozen=True)
class Verdict:
    passed: bool
    a_hat: float
    b_hat: float
    a: float
    b: float

    def __str__(self):
        word = "PASS" if self.passed else "FAIL"
        return (f"{word}: a_hat={self.a_hat:.4f} (predicted {self.a}), "
                f"b_hat={self.b_hat:.4f} (predicted {self.b})")


def verdict(fit: FitResult, a, b, a_tol: float = 0.05, b_tol: float = 0.2) -> Verdict:
    ok = abs(fit.a_hat - float(a)) <= a_tol and abs(fit.b_hat - float(b)) <= b_tol
    return Verdict(ok, fit.a_hat, fit.b_hat, float(a), float(b))
