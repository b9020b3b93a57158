"""Ray measure classification and the maximal spectral type.

For each extreme ray ``w`` of the hull the coefficients ``w . sigma(k)`` are
the Fourier coefficients of a measure ``lambda_w``. The rule applied, in this
order: all ``k != 0`` coefficients vanish -> Lebesgue; coefficients periodic
-> pure point; otherwise singular continuous (Dekking). The first two can
only be checked up to a finite horizon and are labelled accordingly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import _linalg as la
from .correlation import CorrelationTable
from .hull import SpectralHull
from .substitution import Substitution, SubstitutionError, letter_frequencies

__all__ = [
    "PURE_POINT",
    "LEBESGUE",
    "SINGULAR_CONTINUOUS",
    "RayMeasureProfile",
    "SpectralReport",
    "WeightedVerdict",
    "ray_coefficients",
    "find_period",
    "classify_ray",
    "profile_rays",
    "assemble_maximal_type",
    "weighted_coefficients",
    "weighted_diffraction_verdict",
]

PURE_POINT = "pure point"
LEBESGUE = "Lebesgue"
SINGULAR_CONTINUOUS = "singular continuous"

Vector = Tuple[Fraction, ...]


def ray_coefficients(ray: Sequence[Fraction], table: CorrelationTable, k_max: int) -> List[Fraction]:
    """``lambda_w(k) = w . sigma(k)`` for ``0 <= k <= k_max``, exact."""
    out = []
    for k in range(k_max + 1):
        sig = table[k]
        out.append(sum((a * b for a, b in zip(ray, sig) if a and b), Fraction(0)))
    return out


def find_period(coefficients: Sequence[Fraction], max_period: int) -> Optional[int]:
    """Least ``P <= max_period`` with ``c[k + P] == c[k]`` on the whole window."""
    n = len(coefficients)
    for p in range(1, max_period + 1):
        if all(coefficients[k] == coefficients[k + p] for k in range(n - p)):
            return p
    return None


def classify_ray(coefficients: Sequence[Fraction], k_max: int = None) -> Tuple[str, str, Optional[int]]:
    """Verdict, certificate kind and period (if pure point).

    ``coefficients`` must cover ``0..k_max``.
    """
    k_max = len(coefficients) - 1 if k_max is None else k_max
    window = coefficients[:k_max + 1]
    if all(c == 0 for c in window[1:]):
        return LEBESGUE, "horizon-checked", None
    period = find_period(window, max(1, k_max // 4))
    if period is not None:
        return PURE_POINT, "horizon-checked", period
    return SINGULAR_CONTINUOUS, "exact-witness", None


@dataclass
class RayMeasureProfile:
    ray: Vector
    vertex: Vector
    coefficients: List[Fraction]
    verdict: str
    certificate: str
    period: Optional[int] = None
    witness: Optional[Tuple[int, Fraction]] = None

    def to_dict(self, labels: Sequence[str], n_coefficients: int = 64) -> dict:
        return {
            "vertex": [la.fmt(x) for x in self.vertex],
            "ray": {lab: la.fmt(x) for lab, x in zip(labels, self.ray)},
            "coefficients": [la.fmt(x) for x in self.coefficients[:n_coefficients]],
            "verdict": self.verdict,
            "certificate": self.certificate,
            "period": self.period,
            "nonvanishing_witness": None if self.witness is None
            else {"k": self.witness[0], "value": la.fmt(self.witness[1])},
            "horizon": len(self.coefficients) - 1,
        }


def profile_rays(hull: SpectralHull, table: CorrelationTable, k_max: int) -> List[RayMeasureProfile]:
    out = []
    for vertex, ray in zip(hull.vertices, hull.rays):
        coeffs = ray_coefficients(ray, table, k_max)
        verdict, cert, period = classify_ray(coeffs, k_max)
        witness = next(((k, c) for k, c in enumerate(coeffs) if k and c != 0), None)
        out.append(RayMeasureProfile(ray, vertex, coeffs, verdict, cert, period, witness))
    return out


@dataclass
class WeightedVerdict:
    mean: Tuple[Fraction, Fraction]
    bragg_at_zero: Fraction
    extinguished: bool
    ray_components: List[Tuple[int, Fraction]]
    continuous_part: List[str]
    verdict: str
    coefficients: List[Tuple[Fraction, Fraction]] = field(repr=False, default_factory=list)

    def to_dict(self, n_coefficients: int = 64) -> dict:
        return {
            "mean": [la.fmt(x) for x in self.mean],
            "bragg_at_zero": la.fmt(self.bragg_at_zero),
            "extinguished": self.extinguished,
            "ray_components": [{"ray": i, "coefficient": la.fmt(c)} for i, c in self.ray_components],
            "continuous_part": self.continuous_part,
            "verdict": self.verdict,
            "coefficients": [[la.fmt(re), la.fmt(im)] for re, im in self.coefficients[:n_coefficients]],
        }


@dataclass
class SpectralReport:
    q: int
    height: int
    profiles: List[RayMeasureProfile]
    point_factor: str
    notes: List[str]
    weighted: Optional[WeightedVerdict] = None

    @property
    def verdicts(self) -> List[str]:
        return [p.verdict for p in self.profiles]


def assemble_maximal_type(s: Substitution, profiles: List[RayMeasureProfile], height: int,
                          weighted: WeightedVerdict = None) -> SpectralReport:
    """``sigma_max ~ omega_q * sum_w lambda_w`` with per-ray verdicts."""
    notes = []
    if height == 1:
        notes.append("trivial height: the pure point part is omega_q * delta_0, "
                     "i.e. supported on the q-adic roots of unity")
    else:
        notes.append(f"height {height}: the pure point part also carries roots of unity of order {height}")
    return SpectralReport(
        s.length, height, profiles,
        f"omega_{s.length} (probability measure on the {s.length}-adic roots of unity)",
        notes, weighted,
    )


def _weight_matrix(s: Substitution) -> Tuple[Vector, Vector]:
    """Real and imaginary parts of ``w(a) conj(w(b))`` in pair order."""
    if s.weights is None:
        raise SubstitutionError("substitution carries no weights")
    re, im = [], []
    for a, b in s.weights:
        for c, d in s.weights:
            re.append(a * c + b * d)
            im.append(b * c - a * d)
    return tuple(re), tuple(im)


def weighted_coefficients(s: Substitution, table: CorrelationTable,
                          k_max: int) -> List[Tuple[Fraction, Fraction]]:
    """``c(k) = sum_{ab} w(a) conj(w(b)) sigma(k)[ab]`` as (real, imag) pairs."""
    re, im = _weight_matrix(s)
    return list(zip(ray_coefficients(re, table, k_max), ray_coefficients(im, table, k_max)))


def _class_stationary(s: Substitution, cls: Sequence[int]) -> Dict[int, Fraction]:
    """Invariant probability of the pair chain restricted to a closed class."""
    from .bisubstitution import build_bisubstitution

    maps = build_bisubstitution(s).maps
    q = s.length
    pos = {x: i for i, x in enumerate(cls)}
    m = len(cls)
    rows = [[Fraction(0)] * m for _ in range(m)]
    for x in cls:
        for mp in maps:
            rows[pos[mp[x]]][pos[x]] += 1
    for i in range(m):
        rows[i][i] -= q
    rows.append([Fraction(1)] * m)
    red, piv = la.rref([r + [Fraction(int(i == m))] for i, r in enumerate(rows)])
    sol = [Fraction(0)] * m
    for r, c in enumerate(piv):
        if c < m:
            sol[c] = red[r][m]
    return {x: sol[pos[x]] for x in cls}


def hull_projection(s: Substitution, classes: Sequence[Sequence[int]],
                    x: Sequence[Fraction]) -> Vector:
    """Class weights ``w`` of the harmonic part of ``x`` (stationary class averages)."""
    out = []
    for cls in classes:
        pi = _class_stationary(s, cls)
        out.append(sum((pi[i] * x[i] for i in cls), Fraction(0)))
    return tuple(out)


def _ray_decomposition(w: Vector, vertices: Sequence[Vector]) -> Optional[List[Fraction]]:
    """Write ``w`` as a combination of hull vertices (``None`` if impossible)."""
    k = len(w)
    cols = list(vertices)
    aug = [[v[r] for v in cols] + [w[r]] for r in range(k)]
    red, piv = la.rref(aug)
    if len(cols) in piv:
        return None
    sol = [Fraction(0)] * len(cols)
    for r, c in enumerate(piv):
        sol[c] = red[r][len(cols)]
    return sol


def weighted_diffraction_verdict(s: Substitution, hull: SpectralHull, classes,
                                 profiles: List[RayMeasureProfile], table: CorrelationTable,
                                 k_max: int) -> WeightedVerdict:
    """Diffraction verdict for the weighted reduction of ``s``.

    The Bragg intensity at 0 is ``|sum_a w(a) u_a|^2``. The weight matrix is
    projected onto the hull (class averages against the invariant law of each
    class) and written in terms of the extreme rays; the verdicts of rays
    with nonzero share make up the spectral type.
    """
    u = letter_frequencies(s)
    if s.weights is None:
        raise SubstitutionError("substitution carries no weights")
    m_re = sum((w[0] * p for w, p in zip(s.weights, u)), Fraction(0))
    m_im = sum((w[1] * p for w, p in zip(s.weights, u)), Fraction(0))
    bragg = m_re * m_re + m_im * m_im
    re, im = _weight_matrix(s)
    components: Dict[int, Fraction] = {}
    for part in (re, im):
        w = hull_projection(s, classes, part)
        if all(x == 0 for x in w):
            continue
        sol = _ray_decomposition(w, hull.vertices)
        if sol is None:
            raise ValueError("weight projection is not spanned by the hull vertices")
        for i, c in enumerate(sol):
            if c != 0:
                components[i] = components.get(i, Fraction(0)) + abs(c)
    ray_components = sorted(components.items())
    present = [profiles[i].verdict for i, _ in ray_components]
    continuous = sorted({v for v in present if v != PURE_POINT})
    has_point = PURE_POINT in present or bragg != 0
    if has_point and not continuous:
        verdict = "pure point"
    elif not has_point and continuous == [LEBESGUE]:
        verdict = "purely absolutely continuous"
    elif not has_point and continuous == [SINGULAR_CONTINUOUS]:
        verdict = "purely singular continuous"
    else:
        parts = (["pure point"] if has_point else []) + continuous
        verdict = "mixed: " + " + ".join(parts)
    return WeightedVerdict(
        (m_re, m_im), bragg, bragg == 0, ray_components, continuous, verdict,
        weighted_coefficients(s, table, k_max),
    )
