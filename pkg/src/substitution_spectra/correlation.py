"""Exact Fourier coefficients of the pair correlation measures.

``sigma_k(s, k)[pair(a, b)]`` is the asymptotic density of positions ``n``
with ``(x_n, x_{n+k}) = (a, b)`` in a fixed point ``x`` of ``s``. Under the
row-major pair order the ``j``-th block operator is ``numpy.kron(R_j, R_i)``;
applying it to a vector just relabels coordinates, which is how it is done
here to keep arithmetic in ``Fraction``.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import _linalg as la
from .substitution import Substitution, letter_frequencies, power_maps

__all__ = [
    "carry_set",
    "sigma0",
    "sigma1",
    "sigma_k",
    "sigma_table",
    "CorrelationTable",
    "kron_maps_apply",
    "verify_theorem_consistency",
]

Vector = Tuple[Fraction, ...]


def carry_set(p: int, k: int, q: int = 2) -> frozenset:
    """Positions ``j < q**p`` for which ``j + k`` overflows the block."""
    if p < 1:
        raise ValueError("p must be at least 1")
    block = q**p
    if not 0 <= k <= block:
        raise ValueError(f"k must lie in [0, {block}]")
    return frozenset(range(block - k, block))


def kron_maps_apply(left: Sequence[int], right: Sequence[int], v: Sequence[Fraction], n: int,
                    out: List[Fraction]) -> None:
    """Accumulate ``kron(R_left, R_right) @ v`` into ``out``."""
    for a in range(n):
        la_ = left[a] * n
        row = a * n
        for b in range(n):
            x = v[row + b]
            if x:
                out[la_ + right[b]] += x


def sigma0(s: Substitution) -> Vector:
    """Diagonal vector ``sum_g u_g e_{gg}``."""
    u = letter_frequencies(s)
    n = s.size
    v = [Fraction(0)] * (n * n)
    for g in range(n):
        v[g * n + g] = u[g]
    return tuple(v)


def _kron_matrix(left: Sequence[int], right: Sequence[int], n: int) -> List[List[Fraction]]:
    m = [[Fraction(0)] * (n * n) for _ in range(n * n)]
    for a in range(n):
        for b in range(n):
            m[left[a] * n + right[b]][a * n + b] += 1
    return m


def sigma1(s: Substitution) -> Vector:
    """Solve ``(qI - sum_{carry} R_j (x) R_{j+1-q}) X = sum_{no carry} R_j (x) R_{j+1} sigma0``."""
    n, q = s.size, s.length
    dim = n * n
    base = sigma0(s)
    carries = carry_set(1, 1, q)
    rhs = [Fraction(0)] * dim
    lhs = [[Fraction(q if i == j else 0) for j in range(dim)] for i in range(dim)]
    for j in range(q):
        if j in carries:
            k = _kron_matrix(s.maps[j], s.maps[j + 1 - q], n)
            lhs = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, k)]
        else:
            kron_maps_apply(s.maps[j], s.maps[j + 1], base, n, rhs)
    return tuple(la.solve(lhs, rhs))


class CorrelationTable:
    """Memoized ``sigma_k`` for one substitution.

    Values are filled bottom-up, so asking for ``k`` computes every smaller
    index it depends on. The store is guarded by a lock; entries are
    deterministic, so a lost race only repeats work.
    """

    def __init__(self, s: Substitution):
        self.substitution = s
        self._memo: Dict[int, Vector] = {}
        self._lock = threading.Lock()

    def __getitem__(self, k: int) -> Vector:
        if k < 0:
            raise ValueError("k must be nonnegative")
        with self._lock:
            if k in self._memo:
                return self._memo[k]
        value = self._compute(k)
        with self._lock:
            self._memo.setdefault(k, value)
        return value

    def _compute(self, k: int) -> Vector:
        s = self.substitution
        if k == 0:
            return sigma0(s)
        if k == 1:
            return sigma1(s)
        n, q = s.size, s.length
        m, r = divmod(k, q)
        low, high = self[m], self[m + 1] if r else None
        out = [Fraction(0)] * (n * n)
        for j in range(q):
            if j + r < q:
                kron_maps_apply(s.maps[j], s.maps[j + r], low, n, out)
            else:
                kron_maps_apply(s.maps[j], s.maps[j + r - q], high, n, out)
        return tuple(x / q for x in out)

    def upto(self, k_max: int) -> List[Vector]:
        return [self[k] for k in range(k_max + 1)]


def sigma_k(s: Substitution, k: int, table: CorrelationTable = None) -> Vector:
    return (table or CorrelationTable(s))[k]


def sigma_table(s: Substitution, k_max: int) -> List[Vector]:
    return CorrelationTable(s).upto(k_max)


def verify_theorem_consistency(s: Substitution, k: int, p: int,
                               table: CorrelationTable = None) -> bool:
    """Check ``sigma_k`` against the level-``p`` block identity.

    ``sigma(k) = q^-p sum_{j < q^p} (R^p_j (x) R^p_{(j+k) mod q^p}) sigma(floor((j+k)/q^p))``
    with the digit matrices of ``S^p``. For ``k < q**p`` the quotient is 0 or 1;
    larger ``k`` reach further into the table.
    """
    table = table or CorrelationTable(s)
    block = s.length**p
    if k < 0:
        raise ValueError("k must be nonnegative")
    maps = power_maps(s, p)
    n = s.size
    out = [Fraction(0)] * (n * n)
    for j in range(block):
        quotient, rest = divmod(j + k, block)
        kron_maps_apply(maps[j], maps[rest], table[quotient], n, out)
    return tuple(x / block for x in out) == table[k]
