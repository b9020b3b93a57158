"""Spectral hull of a substitution and its extreme rays.

A hull vector ``v`` is a ``q``-eigenvector of ``C^T`` (``C = sum_j R_j (x) R_j``)
whose ``A x A`` reshape is positive semidefinite. Such vectors are fixed by
their constant value ``w_i`` on each ergodic class; the values on transient
pairs follow from an exact solve. Positive semidefiniteness becomes a finite
set of linear inequalities in ``w`` once the reshaped class matrices are
simultaneously diagonalized, which needs them symmetric, commuting, and with
rational spectra. Anything else is reported as unsupported.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from . import _linalg as la
from .bisubstitution import ErgodicDecomposition, build_bisubstitution, ergodic_decomposition
from .substitution import Substitution

__all__ = [
    "UnsupportedHullError",
    "SpectralHull",
    "correlation_operator",
    "apply_transposed_operator",
    "hull_candidates",
    "semipositivity_constraints",
    "extreme_rays",
    "spectral_hull",
    "format_form",
]

Vector = Tuple[Fraction, ...]
Form = Tuple[Fraction, ...]


class UnsupportedHullError(ValueError):
    """The hull is not polyhedral by the commuting-family method."""


def correlation_operator(s: Substitution) -> np.ndarray:
    """``C = sum_j kron(R_j, R_j)`` as an integer matrix."""
    return sum(build_bisubstitution(s).matrices())


def apply_transposed_operator(s: Substitution, v: Sequence[Fraction]) -> Vector:
    """``C^T v``: ``(C^T v)[ab] = sum_j v[R_j(a) R_j(b)]``."""
    maps = build_bisubstitution(s).maps
    return tuple(sum((v[m[x]] for m in maps), Fraction(0)) for x in range(len(v)))


def hull_candidates(s: Substitution, d: ErgodicDecomposition) -> List[Vector]:
    """Coefficient vectors of ``v(w) = sum_i w_i b_i``.

    ``b_i`` is the class indicator of ``E_i`` extended to the transient pairs by
    ``(qI - P_T C^T P_T) x_T = P_T C^T (indicator)``.
    """
    n2 = s.size**2
    q = s.length
    maps = build_bisubstitution(s).maps
    transient = list(d.transient)
    pos = {x: i for i, x in enumerate(transient)}
    if transient:
        lhs = [[Fraction(0)] * len(transient) for _ in transient]
        for i, x in enumerate(transient):
            lhs[i][i] += q
            for m in maps:
                y = m[x]
                if y in pos:
                    lhs[i][pos[y]] -= 1
    out = []
    for cls in d.classes:
        v = [Fraction(0)] * n2
        for x in cls:
            v[x] = Fraction(1)
        if transient:
            rhs = [sum((v[m[x]] for m in maps), Fraction(0)) for x in transient]
            try:
                xt = la.solve(lhs, rhs)
            except la.SingularSystemError as exc:
                raise UnsupportedHullError("transient solve is singular") from exc
            for x, val in zip(transient, xt):
                v[x] = val
        out.append(tuple(v))
    return out


def _reshape(v: Sequence[Fraction], n: int) -> List[List[Fraction]]:
    return [list(v[i * n:(i + 1) * n]) for i in range(n)]


def _restrict(b, basis: List[Vector]) -> List[List[Fraction]]:
    """Matrix of ``b`` on the invariant span of ``basis`` (columns)."""
    m = len(basis)
    images = [la.matvec(b, u) for u in basis]
    cols = []
    for img in images:
        aug = [[basis[c][r] for c in range(m)] + [img[r]] for r in range(len(img))]
        red, piv = la.rref(aug)
        if piv != list(range(m)):
            raise UnsupportedHullError("class matrices do not leave a common eigenspace invariant")
        cols.append([red[i][m] for i in range(m)])
    return la.transpose(cols)


def _rational_eigenspaces(x: List[List[Fraction]]) -> List[Tuple[Fraction, List[Vector]]]:
    """Exact eigen-decomposition of a diagonalizable matrix with rational spectrum."""
    m = len(x)
    approx = np.linalg.eigvals(np.array([[float(a) for a in row] for row in x]))
    if np.max(np.abs(approx.imag), initial=0.0) > 1e-9:
        raise UnsupportedHullError("class matrices have non-real eigenvalues")
    candidates = sorted({Fraction(float(z)).limit_denominator(10**9) for z in approx.real})
    out = []
    seen = 0
    for lam in candidates:
        shifted = [[a - (lam if i == j else 0) for j, a in enumerate(row)] for i, row in enumerate(x)]
        vecs = la.nullspace(shifted)
        if vecs:
            out.append((lam, [tuple(v) for v in vecs]))
            seen += len(vecs)
    if seen != m:
        raise UnsupportedHullError("class matrices need an irrational or non-diagonal eigenbasis")
    return out


def semipositivity_constraints(basis: Sequence[Vector], size: int) -> List[Tuple[Form, int]]:
    """Eigenvalue forms of the reshaped ``v(w)`` with their multiplicities.

    Each form ``f`` is a coefficient tuple meaning ``sum_i f[i] w_i``; the
    reshape of ``v(w)`` is positive semidefinite iff every form is ``>= 0``.
    """
    mats = [_reshape(b, size) for b in basis]
    for m in mats:
        if any(m[i][j] != m[j][i] for i in range(size) for j in range(size)):
            raise UnsupportedHullError("hull not polyhedral by this method: class matrix not symmetric")
    for a, b in itertools.combinations(mats, 2):
        if la.matmul(a, b) != la.matmul(b, a):
            raise UnsupportedHullError("hull not polyhedral by this method: class matrices do not commute")
    spaces: List[List[Vector]] = [[tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)]]
    for b in mats:
        refined = []
        for span in spaces:
            restricted = _restrict(b, span)
            for _, coords in _rational_eigenspaces(restricted):
                refined.append([
                    tuple(sum((c * u[r] for c, u in zip(y, span)), Fraction(0)) for r in range(size))
                    for y in coords
                ])
        spaces = refined
    forms = {}
    for span in spaces:
        u = span[0]
        r = next(i for i, x in enumerate(u) if x != 0)
        form = tuple(la.matvec(b, u)[r] / u[r] for b in mats)
        forms[form] = forms.get(form, 0) + len(span)
    return sorted(forms.items(), key=lambda kv: tuple(-x for x in kv[0]))


def extreme_rays(forms: Sequence[Form], basis: Sequence[Vector]) -> List[Tuple[Vector, Vector]]:
    """Vertices of ``{w : forms(w) >= 0, w_1 = 1}`` and their hull vectors.

    Returns ``(vertex, ray)`` pairs with rays scaled so that their first
    nonzero coordinate is 1, sorted by decreasing vertex.
    """
    k = len(basis)
    forms = [f for f in forms if any(x != 0 for x in f)]
    if any(all(x == 0 for x in f[1:]) and f[0] < 0 for f in forms):
        return []
    vertices = set()
    if k == 1:
        vertices.add((Fraction(1),))
    else:
        free = [f for f in forms if any(x != 0 for x in f[1:])]
        for subset in itertools.combinations(free, k - 1):
            lhs = [list(f[1:]) for f in subset]
            rhs = [-f[0] for f in subset]
            try:
                w = la.solve(lhs, rhs)
            except la.SingularSystemError:
                continue
            vertex = (Fraction(1),) + tuple(w)
            if all(sum((c * x for c, x in zip(f, vertex)), Fraction(0)) >= 0 for f in forms):
                vertices.add(vertex)
        if not vertices:
            raise UnsupportedHullError("semipositivity polytope has no vertices (unbounded or empty)")
    out = []
    for vertex in sorted(vertices, key=lambda w: tuple(-x for x in w)):
        ray = [sum((w * b[i] for w, b in zip(vertex, basis)), Fraction(0)) for i in range(len(basis[0]))]
        lead = next((x for x in ray if x != 0), Fraction(1))
        out.append((vertex, tuple(x / lead for x in ray)))
    return out


@dataclass(frozen=True)
class SpectralHull:
    basis: Tuple[Vector, ...]
    eigenspace_dim: int
    constraints: Tuple[Tuple[Form, int], ...]
    vertices: Tuple[Vector, ...]
    rays: Tuple[Vector, ...]

    @property
    def spans_eigenspace(self) -> bool:
        return self.eigenspace_dim == len(self.basis)


def spectral_hull(s: Substitution, d: ErgodicDecomposition = None) -> SpectralHull:
    """Candidates, semipositivity forms and extreme rays in one pass."""
    d = d or ergodic_decomposition(build_bisubstitution(s))
    n = s.size
    diagonal = {a * n + a for a in range(n)}
    if not diagonal <= set(d.classes[0]):
        raise UnsupportedHullError("diagonal pairs are not a single ergodic class")
    basis = hull_candidates(s, d)
    q = s.length
    for b in basis:
        if apply_transposed_operator(s, b) != tuple(q * x for x in b):
            raise UnsupportedHullError("hull candidate is not a q-eigenvector of C^T")
    c = correlation_operator(s)
    shifted = [[Fraction(int(c[j, i]) - (q if i == j else 0)) for j in range(n * n)]
               for i in range(n * n)]
    dim = len(la.nullspace(shifted))
    constraints = semipositivity_constraints(basis, n)
    pairs = extreme_rays([f for f, _ in constraints], basis)
    return SpectralHull(
        tuple(basis), dim, tuple(constraints),
        tuple(v for v, _ in pairs), tuple(r for _, r in pairs),
    )


def format_form(form: Form, fix_first: bool = True) -> str:
    """Human-readable linear form, e.g. ``1 + w2 - 2w3``."""
    terms = []
    for i, c in enumerate(form):
        if c == 0:
            continue
        if i == 0 and fix_first:
            body = la.fmt(abs(c))
        else:
            mag = "" if abs(c) == 1 else la.fmt(abs(c))
            body = f"{mag}w{i + 1}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text
