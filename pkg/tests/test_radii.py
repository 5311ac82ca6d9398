import numpy as np
import pytest

from weighted_tubes import (
    CircleArcCurve,
    ConstantWeight,
    CosineWeight,
    EllipseCurve,
    FourierCurve,
    NumericError,
    PolynomialWeight,
    dcsd_half,
    delta_lambda,
    find_double_critical_pairs,
    focal_radii,
    lemma3_roots,
    radii_report,
)
from weighted_tubes.config import DEFAULT_TOLERANCES


def scan_roots(a, b, c, n=1_000_000, t_hi=None):
    """Sign-scan oracle for 1 - (c/2) t^2 - a t sqrt(1 - b^2 t^2) = 0."""
    if b > 0:
        hi = 1.0 / b
    else:
        hi = t_hi if t_hi is not None else 10.0
    t = np.linspace(0.0, hi, n)
    with np.errstate(invalid="ignore"):
        f = 1.0 - 0.5 * c * t * t - a * t * np.sqrt(np.clip(1.0 - b * b * t * t, 0.0, None))
    sign_change = np.nonzero(f[:-1] * f[1:] < 0)[0]
    roots = []
    for k in sign_change:
        lo_t, hi_t = t[k], t[k + 1]
        for _ in range(80):
            mid = 0.5 * (lo_t + hi_t)
            fm = 1.0 - 0.5 * c * mid * mid - a * mid * np.sqrt(max(0.0, 1.0 - b * b * mid * mid))
            if f[k] * fm <= 0:
                hi_t = mid
            else:
                lo_t = mid
        roots.append(0.5 * (lo_t + hi_t))
    # Endpoint root at t = 1/b (f can vanish without a sign change there).
    if b > 0:
        f_end = 1.0 - 0.5 * c / b**2
        if abs(f_end) <= 1e-12 and not any(abs(r - 1.0 / b) < 1e-9 for r in roots):
            roots.append(1.0 / b)
    return sorted(roots)


class TestRootAlgebra:
    def test_single_root_linear_case(self):
        assert lemma3_roots(1.0, 0.0, 0.0) == (1.0,)

    def test_boundary_double_root(self):
        # 2 b^2 = c with a = 0 puts the only root at t = 1/b.
        assert lemma3_roots(0.0, 1.0, 2.0) == (1.0,)

    def test_mixed_case_against_scan(self):
        roots = lemma3_roots(1.0, 0.5, 1.0)
        oracle = scan_roots(1.0, 0.5, 1.0)
        assert len(roots) == len(oracle)
        for r, o in zip(roots, oracle):
            assert r == pytest.approx(o, abs=1e-9)

    def test_no_solution_cases(self):
        with pytest.raises(NumericError):
            lemma3_roots(0.0, 0.0, 0.0)
        with pytest.raises(NumericError):
            lemma3_roots(1.0, 2.0, 0.1)

    def test_random_triples_against_scan(self):
        # Acceptance-level oracle: no missed roots, no spurious roots.
        rng = np.random.default_rng(42)
        checked = 0
        for _ in range(100):
            a = abs(rng.normal())
            b = abs(rng.normal())
            c = rng.normal(scale=2.0)
            try:
                roots = lemma3_roots(a, b, c)
            except NumericError:
                roots = ()
            oracle = scan_roots(a, b, c, n=100_000, t_hi=12.0)
            if b == 0:
                # Unbounded interval: compare only within the scan window.
                roots = tuple(r for r in roots if r <= 12.0)
            assert len(roots) == len(oracle), (a, b, c, roots, oracle)
            for r, o in zip(roots, oracle):
                assert r == pytest.approx(o, abs=1e-7), (a, b, c)
            checked += 1
        assert checked == 100

    def test_residuals_are_tiny(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a, b, c = abs(rng.normal()), abs(rng.normal()), rng.normal(scale=2.0)
            try:
                roots = lemma3_roots(a, b, c)
            except NumericError:
                continue
            for t in roots:
                val = 1.0 - 0.5 * c * t * t - a * t * np.sqrt(max(0.0, 1.0 - b * b * t * t))
                assert abs(val) <= 1e-12


class TestPointwiseFocal:
    def test_flat_discriminant_arc(self):
        curve, weight = CircleArcCurve(-np.pi / 2, np.pi / 2), CosineWeight()
        for s in (-1.2, 0.0, 0.9):
            pf = delta_lambda(curve, weight, s)
            assert pf.delta == pytest.approx(0.0, abs=1e-15)
            assert pf.lambda_val == pytest.approx(0.25, abs=1e-14)
            assert pf.focrad0_pt == pytest.approx(2.0, abs=1e-12)
            if s != 0.0:
                assert pf.focradminus_pt == pytest.approx(2.0 / abs(np.sin(s / 2)), abs=1e-10)

    def test_constant_weight_circle(self):
        curve, weight = CircleArcCurve(0, 2 * np.pi, closed=True), ConstantWeight(0.5)
        pf = delta_lambda(curve, weight, 1.0)
        assert pf.delta == pytest.approx(0.0625)
        assert pf.lambda_val == pytest.approx(0.25)
        assert pf.focrad0_pt == pytest.approx(2.0)
        assert pf.focradminus_pt == pytest.approx(2.0)

    def test_example4_direct_evaluation(self):
        # Direct evaluation of mu (mu'' + kappa^2 mu / 4); the value at
        # s = 0.5 is exactly dyadic.
        curve, weight = CircleArcCurve(-1, 1), PolynomialWeight([1.0, 0.0, -0.125])
        pf = delta_lambda(curve, weight, 0.5)
        assert pf.delta == -0.007568359375
        assert pf.lambda_val is None
        assert pf.focrad0_pt == pytest.approx(8.0)  # 1/|mu'| = 4/|s|

    def test_ordering_focradminus_ge_focrad0(self):
        curve, weight = CircleArcCurve(-1, 1), PolynomialWeight([1.0, 0.0, -0.125])
        for s in np.linspace(-1, 1, 21):
            pf = delta_lambda(curve, weight, float(s))
            assert pf.focradminus_pt >= pf.focrad0_pt - 1e-12


class TestLambdaPositivity:
    def test_positive_wherever_defined(self, scenes):
        # Wherever the discriminant is nonnegative and the coefficient pair
        # does not vanish, the first-height expression is positive.
        from weighted_tubes.radii import _abc

        for name, scene in scenes.items():
            curve, weight = scene.pairs[0]
            sg = curve.grid(1024)
            a, b, c, disc, lam = _abc(curve, weight, sg)
            mask = (disc >= 0) & (a**2 + c**2 > 1e-20)
            if np.any(mask):
                assert float(np.min(lam[mask])) > 0.0, name


class TestFocalRadii:
    def test_half_circle_cosine(self):
        curve, weight = CircleArcCurve(-np.pi / 2, np.pi / 2), CosineWeight()
        f0, fm, wit = focal_radii([(curve, weight)])
        assert f0 == pytest.approx(2.0, abs=1e-6)
        assert fm == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-6)
        # The open-band value is attained at the arc endpoints.
        assert abs(abs(wit["focradminus"].s) - np.pi / 2) <= 1e-9

    def test_example4_isolated_touching_zero(self):
        curve, weight = CircleArcCurve(-1, 1), PolynomialWeight([1.0, 0.0, -0.125])
        f0, fm, wit = focal_radii([(curve, weight)])
        assert f0 == pytest.approx(2.0, abs=1e-6)
        assert fm == pytest.approx(4.0, abs=1e-6)
        assert abs(wit["focrad0"].s) <= 1e-6

    def test_uniform_reduction(self):
        # Constant weight recovers 1 / (c0 max kappa) for both radii.
        curve = EllipseCurve(2, 1)
        f0, fm, _ = focal_radii([(curve, ConstantWeight(1.0))])
        assert f0 == pytest.approx(0.5, abs=1e-8)
        assert fm == pytest.approx(0.5, abs=1e-8)
        f0, fm, _ = focal_radii([(CircleArcCurve(0, 2 * np.pi, closed=True), ConstantWeight(2.0))])
        assert f0 == pytest.approx(0.5, abs=1e-10)

    def test_stability_under_density_doubling(self):
        curve, weight = CircleArcCurve(-np.pi / 2, np.pi / 2), CosineWeight()
        coarse = focal_radii([(curve, weight)], DEFAULT_TOLERANCES)
        dense = focal_radii(
            [(curve, weight)], DEFAULT_TOLERANCES.with_overrides({"focal_samples": 8192})
        )
        assert abs(coarse[0] - dense[0]) <= 1e-8 * coarse[0]
        assert abs(coarse[1] - dense[1]) <= 1e-8 * coarse[1]


class TestDoubleCriticalPairs:
    def test_unit_circle_antipodal(self):
        curve, weight = CircleArcCurve(0, 2 * np.pi, closed=True), ConstantWeight(1.0)
        pairs = find_double_critical_pairs([(curve, weight)])
        assert pairs
        for p in pairs:
            assert p.ratio == pytest.approx(1.0, abs=1e-9)
            assert curve.periodic_distance(p.s1, p.s2) == pytest.approx(np.pi, abs=1e-6)
        assert dcsd_half(pairs) == pytest.approx(1.0, abs=1e-9)

    def test_ellipse_axes(self):
        pairs = find_double_critical_pairs([(EllipseCurve(2, 1), ConstantWeight(1.0))])
        ratios = sorted(p.ratio for p in pairs)
        assert ratios[0] == pytest.approx(1.0, abs=1e-8)  # minor axis
        assert ratios[-1] == pytest.approx(2.0, abs=1e-8)  # major axis

    def test_angle_law_residuals(self):
        pairs = find_double_critical_pairs([(EllipseCurve(2, 1), ConstantWeight(1.0))])
        for p in pairs:
            assert max(p.angle_residuals) <= 1e-6

    def test_half_circle_cosine_has_none(self):
        pairs = find_double_critical_pairs(
            [(CircleArcCurve(-np.pi / 2, np.pi / 2), CosineWeight())]
        )
        assert pairs == []
        assert dcsd_half(pairs) == np.inf

    def test_example6_negative_offset_has_none(self):
        pairs = find_double_critical_pairs(
            [(CircleArcCurve(-1, 1), PolynomialWeight([0.95, 0.0, -0.125]))]
        )
        assert pairs == []

    def test_two_far_circles(self):
        one = ConstantWeight(1.0)
        near = CircleArcCurve(0, 2 * np.pi, closed=True)
        far = FourierCurve([[10.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        pairs = find_double_critical_pairs([(near, one), (far, one)])
        inter = [p for p in pairs if p.component_1 != p.component_2]
        assert min(p.ratio for p in inter) == pytest.approx(4.0, abs=1e-7)
        assert dcsd_half(pairs) == pytest.approx(1.0, abs=1e-9)


class TestReports:
    def test_unit_circle_all_one(self):
        rep = radii_report([(CircleArcCurve(0, 2 * np.pi, closed=True), ConstantWeight(1.0))])
        for value in (rep.dir, rep.tir, rep.air):
            assert value == pytest.approx(1.0, abs=1e-8)

    def test_half_circle_report(self):
        rep = radii_report([(CircleArcCurve(-np.pi / 2, np.pi / 2), CosineWeight())])
        assert rep.dir == pytest.approx(2.0, abs=1e-6)
        assert rep.air == pytest.approx(2 * np.sqrt(2.0), abs=1e-6)
        assert rep.dcsd_half == np.inf

    def test_ordering_invariant(self, scenes):
        for name, scene in scenes.items():
            if "family" in name:
                continue
            rep = radii_report(scene.pairs, scene.tolerances)
            assert rep.dir <= rep.tir <= rep.air, name
            assert rep.lr == min(rep.dcsd_half, rep.focrad0)
            assert rep.ur == min(rep.dcsd_half, rep.focradminus)
            assert rep.dir == rep.lr and rep.air == rep.ur
