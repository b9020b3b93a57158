"""Floating-point cross-checks: exponential sums, periodograms, growth, autocorrelation."""
from __future__ import annotations

import math
import os
from typing import List, NamedTuple, Sequence

import numpy as np

__all__ = [
    "MemoryBudgetError",
    "grid_cap",
    "exponential_sum",
    "exponential_sums_on_grid",
    "periodogram",
    "periodogram_direct",
    "GrowthRow",
    "growth_test",
    "empirical_autocorrelation",
    "pair_frequencies",
    "wiener_average",
]

GRID_CAP_ENV = "SUBSTITUTION_SPECTRA_MAX_GRID"
DEFAULT_GRID_CAP = 1 << 26


class MemoryBudgetError(MemoryError):
    pass


def grid_cap() -> int:
    """Largest periodogram grid allowed (env ``SUBSTITUTION_SPECTRA_MAX_GRID``)."""
    value = os.environ.get(GRID_CAP_ENV)
    return int(value) if value else DEFAULT_GRID_CAP


def exponential_sum(seq: Sequence[float], n: int, theta: float) -> complex:
    """``sum_{m < n} a_m exp(2 pi i m theta)`` with correctly rounded partial sums."""
    if n < 1:
        raise ValueError("n must be positive")
    a = np.asarray(seq[:n], dtype=np.float64)
    m = np.arange(n, dtype=np.float64)
    # reduce the phase mod 1 before scaling by 2 pi
    phase = 2.0 * np.pi * np.mod(m * theta, 1.0)
    return complex(math.fsum(a * np.cos(phase)), math.fsum(a * np.sin(phase)))


def exponential_sums_on_grid(seq: Sequence[float], n: int, m: int) -> np.ndarray:
    """``S_n(j / m)`` for ``j < m`` via one inverse FFT (needs ``m >= n``)."""
    if m < n:
        raise ValueError("grid size must be at least N")
    if m > grid_cap():
        raise MemoryBudgetError(f"grid of {m} points exceeds cap {grid_cap()} (set {GRID_CAP_ENV})")
    a = np.asarray(seq[:n], dtype=np.float64)
    return np.fft.ifft(a, n=m) * m


def periodogram(seq: Sequence[float], n: int, m: int = None) -> np.ndarray:
    """``R_N(j / M) = |S_N(j / M)|^2 / N`` on the grid ``j < M`` (default ``M = N``)."""
    m = n if m is None else m
    s = exponential_sums_on_grid(seq, n, m)
    return (s.real**2 + s.imag**2) / n


def periodogram_direct(seq: Sequence[float], n: int, m: int) -> np.ndarray:
    """Reference O(NM) evaluation of the periodogram."""
    a = np.asarray(seq[:n], dtype=np.float64)
    idx = np.arange(n)
    out = np.empty(m)
    for j in range(m):
        phase = 2.0 * np.pi * np.mod(idx * j, m) / m
        out[j] = (np.dot(a, np.cos(phase)) ** 2 + np.dot(a, np.sin(phase)) ** 2) / n
    return out


class GrowthRow(NamedTuple):
    N: int
    sup: float
    ratio: float


def growth_test(seq: Sequence[float], n_list: Sequence[int], grid_factor: int = 8) -> List[GrowthRow]:
    """Grid supremum of ``|S_N|`` and its ratio to ``sqrt(N)``.

    The grid maximum is a lower bound for the true supremum over ``theta``.
    """
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("N values must be strictly ascending")
    rows = []
    for n in n_list:
        s = exponential_sums_on_grid(seq, n, grid_factor * n)
        sup = float(np.abs(s).max())
        rows.append(GrowthRow(n, sup, sup / math.sqrt(n)))
    return rows


def empirical_autocorrelation(seq: Sequence[float], n: int, k_max: int) -> np.ndarray:
    """``c_N(k) = (1/N) sum_{m < N} a_m a_{m+k}`` for ``k <= k_max`` (needs N + k_max terms)."""
    a = np.asarray(seq, dtype=np.float64)
    if a.size < n + k_max:
        raise ValueError(f"need {n + k_max} terms, got {a.size}")
    head = a[:n]
    return np.array([np.dot(head, a[k:k + n]) / n for k in range(k_max + 1)])


def pair_frequencies(word: np.ndarray, size: int, k: int) -> np.ndarray:
    """Relative frequency of each pair ``(x_m, x_{m+k})`` in a letter-index word."""
    word = np.asarray(word, dtype=np.int64)
    pairs = word[: word.size - k] * size + word[k:]
    return np.bincount(pairs, minlength=size * size) / pairs.size


def wiener_average(coefficients: Sequence[complex], k_list: Sequence[int]) -> List[float]:
    """``W(K) = (1/K) sum_{k < K} |c(k)|^2``."""
    c = np.abs(np.asarray(coefficients, dtype=np.complex128)) ** 2
    if max(k_list) > c.size:
        raise ValueError("not enough coefficients for the largest K")
    cums = np.concatenate([[0.0], np.cumsum(c)])
    return [float(cums[k] / k) for k in k_list]
