from fractions import Fraction

import numpy as np
import pytest

from substitution_spectra.bisubstitution import build_bisubstitution, ergodic_decomposition
from substitution_spectra.classify import (
    LEBESGUE,
    PURE_POINT,
    SINGULAR_CONTINUOUS,
    assemble_maximal_type,
    classify_ray,
    find_period,
    profile_rays,
    ray_coefficients,
    weighted_coefficients,
    weighted_diffraction_verdict,
)
from substitution_spectra.correlation import CorrelationTable
from substitution_spectra.hull import spectral_hull
from substitution_spectra.substitution import SubstitutionError

F = Fraction
REFERENCE_SIGMA1 = [0, F(1, 6), 0, F(1, 12), 0, 0, F(1, 12), F(1, 6),
                F(1, 6), F(1, 12), 0, 0, F(1, 12), 0, F(1, 6), 0]


def pipeline(s, k_max=256):
    d = ergodic_decomposition(build_bisubstitution(s))
    h = spectral_hull(s, d)
    t = CorrelationTable(s)
    return d, h, t, profile_rays(h, t, k_max)


class TestCoefficients:
    def test_all_ones_ray(self, rsl):
        _, h, t, _ = pipeline(rsl)
        assert ray_coefficients(h.rays[0], t, 100) == [1] * 101

    def test_hand_dots(self, rsl):
        _, h, t, _ = pipeline(rsl)
        v2, v3 = h.rays[1], h.rays[2]
        # hand: v2 . sigma(1) = -4/6 + 4/12
        assert sum(a * b for a, b in zip(v2, REFERENCE_SIGMA1)) == F(-1, 3)
        assert ray_coefficients(v2, t, 1)[1] == F(-1, 3)
        # hand: v3 . sigma(1) = -(1/12) * 4
        assert sum(a * b for a, b in zip(v3, REFERENCE_SIGMA1)) == F(-1, 3)
        assert ray_coefficients(v3, t, 1)[1] == F(-1, 3)


class TestClassifyRule:
    def test_lebesgue(self):
        assert classify_ray([F(1)] + [F(0)] * 64)[0] == LEBESGUE

    def test_constant_is_pure_point(self):
        assert classify_ray([F(1)] * 65) == (PURE_POINT, "horizon-checked", 1)

    def test_periodic(self):
        c = [F(x) for x in [1, -1, 0] * 30]
        assert classify_ray(c)[0] == PURE_POINT and find_period(c, 20) == 3

    def test_otherwise_singular(self):
        c = [F(1), F(1, 2)] + [F(1, k) for k in range(2, 80)]
        assert classify_ray(c)[0] == SINGULAR_CONTINUOUS

    def test_period_bound(self):
        # a period longer than k_max / 4 is not accepted
        c = [F(int(k % 30 == 0)) for k in range(65)]
        assert classify_ray(c)[0] == SINGULAR_CONTINUOUS

    def test_larger_horizon_keeps_lebesgue_and_pp(self, rs):
        _, h, t, _ = pipeline(rs)
        for k_max in (64, 128, 512):
            verdicts = [classify_ray(ray_coefficients(r, t, k_max))[0] for r in h.rays]
            assert verdicts == [PURE_POINT, LEBESGUE]


class TestVerdicts:
    def test_rsl(self, rsl):
        _, h, t, profiles = pipeline(rsl)
        assert [p.verdict for p in profiles] == [PURE_POINT, SINGULAR_CONTINUOUS, SINGULAR_CONTINUOUS]
        for p in profiles[1:]:
            k, value = p.witness
            assert 1 <= k <= 64 and value != 0

    def test_rs(self, rs):
        _, _, _, profiles = pipeline(rs)
        assert [p.verdict for p in profiles] == [PURE_POINT, LEBESGUE]

    def test_report(self, rsl):
        _, _, _, profiles = pipeline(rsl)
        rep = assemble_maximal_type(rsl, profiles, 1)
        assert rep.verdicts == [PURE_POINT, SINGULAR_CONTINUOUS, SINGULAR_CONTINUOUS]
        assert "2-adic" in rep.point_factor and "delta_0" in rep.notes[0]


class TestWeighted:
    def test_rsl_balanced(self, rsl):
        d, h, t, profiles = pipeline(rsl)
        w = weighted_diffraction_verdict(rsl, h, d.classes, profiles, t, 256)
        assert w.mean == (0, 0) and w.extinguished
        assert w.verdict == "purely singular continuous"
        assert w.ray_components == [(2, 1)]

    def test_rs_balanced(self, rs):
        d, h, t, profiles = pipeline(rs)
        w = weighted_diffraction_verdict(rs, h, d.classes, profiles, t, 256)
        assert w.verdict == "purely absolutely continuous"
        assert all(c == (0, 0) for c in w.coefficients[1:])

    def test_all_ones(self, rsl):
        s = rsl.with_weights({a: 1 for a in rsl.alphabet})
        d, h, t, profiles = pipeline(s)
        w = weighted_diffraction_verdict(s, h, d.classes, profiles, t, 64)
        assert all(c == (1, 0) for c in w.coefficients)
        assert w.bragg_at_zero == 1 and w.verdict == "pure point"

    def test_unbalanced_is_mixed(self, rsl):
        s = rsl.with_weights({"0": 1, "1": 0, "2": 0, "3": 0})
        d, h, t, profiles = pipeline(s)
        w = weighted_diffraction_verdict(s, h, d.classes, profiles, t, 64)
        assert w.bragg_at_zero == F(1, 16) and w.verdict.startswith("mixed")

    def test_complex_weights(self, rsl):
        s = rsl.with_weights({"0": 1, "1": [0, 1], "2": -1, "3": [0, -1]})
        t = CorrelationTable(s)
        c = weighted_coefficients(s, t, 8)
        assert c[0] == (1, 0)
        # oracle in floating point
        w = np.array([1, 1j, -1, -1j])
        mat = np.outer(w, w.conj()).ravel()
        for k in range(9):
            z = np.dot(mat, np.array([float(x) for x in t[k]]))
            assert np.isclose(z, float(c[k][0]) + 1j * float(c[k][1]))

    def test_unknown_weight_letter(self, rsl):
        with pytest.raises(SubstitutionError):
            rsl.with_weights({"9": 1})

    def test_requires_weights(self, rsl):
        s = type(rsl)(rsl.alphabet, rsl.rules)
        d, h, t, profiles = pipeline(s)
        with pytest.raises(SubstitutionError):
            weighted_diffraction_verdict(s, h, d.classes, profiles, t, 64)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["rsl", "rs"])
def test_weighted_coefficients_match_empirical(name):
    from substitution_spectra import bundled
    from substitution_spectra.numerics import empirical_autocorrelation
    from substitution_spectra.sequences import generate

    s = bundled(name)
    exact = [float(re) for re, _ in weighted_coefficients(s, CorrelationTable(s), 64)]
    emp = empirical_autocorrelation(generate(name, (1 << 22) + 64), 1 << 22, 64)
    assert np.abs(emp - exact).max() <= 1e-3
    if name == "rs":
        assert np.abs(emp[1:]).max() < 1e-2
