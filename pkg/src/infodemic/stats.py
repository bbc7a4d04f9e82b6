"""Rank and linear correlation with p-values."""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Sequence

import numpy as np
from scipy.stats import t as student_t

EXACT_MAX_N = 8


class UndefinedCorrelationError(ValueError):
    """One of the inputs is constant, so the correlation has no value."""


class Correlation(NamedTuple):
    coefficient: float
    p_value: float


def midranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of the ranks they span."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x), dtype=float)
    sorted_x = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _check(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or len(x) != len(y):
        raise ValueError(f"inputs must be 1-d and equally long, got {x.shape} and {y.shape}")
    if len(x) < 3:
        raise ValueError(f"need at least 3 observations, got {len(x)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("inputs must be finite")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("correlation is undefined for a constant input")
    return x, y


def _r(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(np.dot(dx, dy) / math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy))))
    return min(1.0, max(-1.0, r))


def _t_pvalue(r: float, n: int) -> float:
    if abs(r) >= 1.0:
        return 0.0
    df = n - 2
    t = r * math.sqrt(df / (1.0 - r * r))
    return float(min(1.0, 2.0 * student_t.sf(abs(t), df)))


def _permutation_pvalue(rx: np.ndarray, ry: np.ndarray, rho: float) -> float:
    """Share of all orderings of ``ry`` whose |rho| reaches the observed |rho|."""
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    perms = np.array(list(itertools.permutations(dy)))
    rhos = perms @ dx / math.sqrt(float(dx @ dx) * float(dy @ dy))
    hits = np.count_nonzero(np.abs(rhos) >= abs(rho) - 1e-12)
    return hits / len(perms)


def spearman(xs: Sequence[float], ys: Sequence[float]) -> Correlation:
    """Spearman's rho as the Pearson correlation of mid-ranks.

    The two-sided p-value is exact (all n! pairings) for n <= 8, otherwise the
    Student t approximation with n - 2 degrees of freedom.
    """
    x, y = _check(xs, ys)
    rx, ry = midranks(x), midranks(y)
    rho = _r(rx, ry)
    n = len(x)
    if n <= EXACT_MAX_N:
        p = _permutation_pvalue(rx, ry, rho)
    else:
        p = _t_pvalue(rho, n)
    return Correlation(rho, p)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> Correlation:
    x, y = _check(xs, ys)
    r = _r(x, y)
    return Correlation(r, _t_pvalue(r, len(x)))
