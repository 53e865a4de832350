"""Correlation and significance statistics.

Pearson correlation uses the closed-form sample estimator; the one-sample
t-test converts t to a two-sided p-value through a regularized incomplete
beta function evaluated by Lentz's continued fraction, so no statistics
library is involved. Quantiles follow the linear-interpolation rule on
order statistics (the common "type 7" convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_N_MIN = 6

_CF_MAX_ITER = 300
_CF_EPS = 3e-14
_CF_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must be in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: int) -> float:
    """Two-sided p-value of a Student-t statistic with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if t == 0.0:
        return 1.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def pearson_r(
    x: Sequence[float], y: Sequence[float], n_min: int = DEFAULT_N_MIN
) -> float | None:
    """Sample Pearson correlation; None when too short or either side is constant."""
    if len(x) != len(y):
        raise ValueError(f"series length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < n_min:
        return None
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return None
    return float((dx @ dy) / math.sqrt(sxx * syy))


@dataclass
class TTestResult:
    t: float | None
    df: int
    p_value: float | None


def t_test_one_sample(values: Sequence[float], mu0: float = 0.0) -> TTestResult:
    """One-sample t-test of the mean against ``mu0``; undefined for n < 2 or zero spread."""
    n = len(values)
    if n < 2:
        return TTestResult(t=None, df=max(n - 1, 0), p_value=None)
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1))
    if sd == 0.0:
        return TTestResult(t=None, df=n - 1, p_value=None)
    t = (mean - mu0) / (sd / math.sqrt(n))
    return TTestResult(t=t, df=n - 1, p_value=student_t_two_sided_p(t, n - 1))


def boxplot_stats(values: Sequence[float]) -> tuple[float, float, float, float, float]:
    """(min, q25, median, q75, max) with linear interpolation between order statistics."""
    if len(values) == 0:
        raise ValueError("empty series")
    arr = np.asarray(values, dtype=float)
    q25, q50, q75 = (float(np.quantile(arr, q)) for q in (0.25, 0.5, 0.75))
    return float(arr.min()), q25, q50, q75, float(arr.max())
