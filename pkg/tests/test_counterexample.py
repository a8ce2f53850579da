import math

import numpy as np
import pytest

from cocycle_lab import make_builtin, product
from cocycle_lab.counterexample import (
    D,
    INEQUALITIES,
    Q_POINT,
    ZERO,
    CounterexampleParams,
    DiagRotationCocycle,
    cone_of,
    determine_k0,
    first_return,
    homoclinic_point,
    in_v0,
    inequality_thresholds,
    k_of,
    nested_cones,
    random_v0_point,
    self_return_point,
    theta,
    track_orbit,
    verify_cone_step,
    verify_exponent_bound,
    verify_not_uh,
)
from cocycle_lab.errors import ConeStepViolated, ConeUndefined, NoReturn
from cocycle_lab.lyapunov import periodic_exponent
from cocycle_lab.sl2 import HALF_PI, arc_contains, rotation
from cocycle_lab.symbolic import PeriodicOrbit, SymbolSequence, distance, shift

LOG2 = math.log(2.0)
PARAMS = CounterexampleParams()


def point_with_k(r):
    """1 at 0, nearest other 1 at distance r, ones repeating to the right."""
    return SymbolSequence((0,), (1,) + (0,) * (r - 1), (1,) + (0,) * (r - 1), 0)


class TestKAndTheta:
    def test_k_of(self):
        assert k_of(Q_POINT) == math.inf
        assert k_of(self_return_point(4)) == 9
        assert k_of(SymbolSequence.constant(1)) == 1
        assert k_of(SymbolSequence((0,), (1, 0, 0, 0, 1), (0,), -4)) == 4

    def test_theta_cases(self):
        assert theta(Q_POINT) == HALF_PI
        k = PARAMS.k0 + 8
        assert theta(point_with_k(k)) == pytest.approx(HALF_PI - 2 ** (-k / 8), abs=1e-15)
        assert theta(ZERO) == 0.0
        assert theta(shift(Q_POINT, 1)) == 0.0
        assert theta(point_with_k(PARAMS.k0)) == 0.0

    def test_theta_continuity_at_q(self):
        prev = math.inf
        for r in range(PARAMS.k0 + 1, 200):
            gap = HALF_PI - theta(point_with_k(r))
            assert gap == pytest.approx(2 ** (-r / 8), rel=1e-12)
            assert gap < prev
            prev = gap

    def test_distance_to_q(self):
        rng = np.random.default_rng(61)
        for _ in range(100):
            x = random_v0_point(rng)
            assert distance(x, Q_POINT) == 2.0 ** -k_of(x)

    def test_range(self):
        rng = np.random.default_rng(62)
        for _ in range(100):
            assert 0.0 <= theta(random_v0_point(rng)) <= HALF_PI


class TestK0:
    def test_thresholds(self):
        th = inequality_thresholds()
        assert th["rotation-offset-below-0.3"] == 14
        assert th["cot-beta-upper-bound"] == 1
        assert set(th) == set(INEQUALITIES) and len(th) == 6

    def test_k0(self):
        k0 = determine_k0()
        assert k0 == 13
        for check in INEQUALITIES.values():
            assert all(check(k) for k in range(k0 + 1, 513))
        assert not INEQUALITIES["rotation-offset-below-0.3"](k0)

    def test_params_validate(self):
        assert CounterexampleParams(20).k0 == 20
        with pytest.raises(ValueError):
            CounterexampleParams(5)


class TestCocycle:
    def test_matrices(self):
        spec = make_builtin("diag-rotation")
        assert spec.evaluate(Q_POINT) == D @ rotation(HALF_PI)
        x = point_with_k(PARAMS.k0 + 3)
        assert spec.evaluate(x).norm() == pytest.approx(2.0)
        assert (spec.evaluate(x) - D @ rotation(theta(x))).norm() <= 1e-15
        assert spec.matrices(x, -2, 5) == [spec.evaluate(shift(x, k)) for k in range(-2, 3)]

    def test_builtin_params(self):
        spec = make_builtin("diag-rotation", k0=20, alpha=0.1)
        assert spec == DiagRotationCocycle(20, 0.1) and spec.k0 == 20
        with pytest.raises(ValueError):
            DiagRotationCocycle(alpha=0.0)
        assert math.isinf(spec.holder_constant(0.5))

    def test_holder_bound_on_smooth_branch(self):
        spec = make_builtin("diag-rotation")
        _, c = spec.alpha, spec.holder_constant()
        for r in range(PARAMS.k0 + 1, 80):
            x = point_with_k(r)
            d = distance(x, Q_POINT)
            assert (spec.evaluate(x) - spec.evaluate(Q_POINT)).norm() <= c * d ** 0.125

    def test_binary_only(self):
        with pytest.raises(ValueError):
            k_of(SymbolSequence.constant(2))


class TestReturns:
    def test_fixed_one(self):
        s = first_return(SymbolSequence.constant(1))
        assert s.n_return == 1
        assert s.matrix == make_builtin("diag-rotation").evaluate(SymbolSequence.constant(1))

    def test_self_return(self):
        x = self_return_point(5)
        s = first_return(x)
        assert s.n_return == 11 and s.image == x

    def test_no_return(self):
        with pytest.raises(NoReturn):
            first_return(Q_POINT)
        assert not in_v0(Q_POINT)

    def test_k_at_most_return_time(self):
        rng = np.random.default_rng(63)
        for _ in range(200):
            x = random_v0_point(rng)
            s = first_return(x)
            assert s.k <= s.n_return and s.k_next <= s.n_return
            assert (s.matrix - product(make_builtin("diag-rotation"), x, s.n_return).true_matrix()).norm() <= 1e-9 * s.matrix.norm()


class TestCones:
    def test_limit_band(self):
        c = cone_of(point_with_k(300))
        assert c.half_width == pytest.approx(HALF_PI, abs=1e-12)
        assert abs(c.center - math.pi / 2) < 0.1 or abs(c.center - math.pi) < 0.1 or c.center < 0.1

    def test_first_valid_k(self):
        k = PARAMS.k0 + 1
        c = cone_of(point_with_k(k))
        assert c.half_width == pytest.approx(HALF_PI - 2 ** (-k / 2 + 0.25), abs=1e-15)

    def test_undefined(self):
        with pytest.raises(ConeUndefined):
            cone_of(point_with_k(PARAMS.k0))
        with pytest.raises(ConeUndefined):
            cone_of(Q_POINT)
        assert cone_of(point_with_k(3), strict=False).half_width == pytest.approx(math.pi / 4)

    @pytest.mark.parametrize("m", range(7, 31))
    def test_self_return_family(self, m):
        r = verify_cone_step(self_return_point(m))
        assert r.inclusion_margin > 0 and r.growth >= r.growth_bound * (1 - 1e-12)
        assert r.growth_bound == pytest.approx(2 ** ((2 * m + 1) / 2))
        assert r.tan_gamma <= r.tan_gamma_bound * (1 + 1e-12)
        assert not r.substituted

    def test_mixed_points(self):
        rng = np.random.default_rng(64)
        for _ in range(100):
            x = random_v0_point(rng, deep_k0=PARAMS.k0)
            assert k_of(x) > PARAMS.k0
            verify_cone_step(x)

    def test_points_with_substitute(self):
        rng = np.random.default_rng(65)
        for _ in range(100):
            verify_cone_step(random_v0_point(rng))

    def test_corrupted_beta(self):
        with pytest.raises(ConeStepViolated):
            verify_cone_step(self_return_point(7), beta_scale=0.5)

    def test_nested(self):
        arcs = nested_cones(self_return_point(9), 6)
        for outer, inner in zip(arcs, arcs[1:]):
            assert arc_contains(outer, inner)
            assert inner.half_width <= outer.half_width
        # the widths collapse to rounding level; a common direction survives
        assert all(a.contains_direction(arcs[-1].center, closed=True) for a in arcs)


class TestNotUH:
    def test_witness(self):
        r = verify_not_uh(25)
        assert r.passed and r.max_deviation <= 1e-10
        assert r.contrast_log_norms[19] == pytest.approx(40 * LOG2)

    def test_small(self):
        assert verify_not_uh(1).norms[0] == pytest.approx(1.0, abs=1e-15)
        assert homoclinic_point(3)[3] == 1

    def test_bad_n(self):
        with pytest.raises(ValueError):
            verify_not_uh(0)


class TestExponents:
    def test_fixed_point(self):
        assert periodic_exponent(make_builtin("diag-rotation"), PeriodicOrbit((0,))).lambda_plus == pytest.approx(LOG2)

    def test_self_return(self):
        spec = make_builtin("diag-rotation")
        for m in range(7, 20):
            assert periodic_exponent(spec, PeriodicOrbit(self_return_point(m).right)).lambda_plus >= LOG2 / 2

    def test_shallow_orbit(self):
        assert periodic_exponent(make_builtin("diag-rotation"), PeriodicOrbit((0, 1))).lambda_plus == pytest.approx(LOG2)

    def test_tracking(self):
        rng = np.random.default_rng(66)
        for _ in range(20):
            t = track_orbit(random_v0_point(rng), 20)
            assert t.passed and t.worst_slack >= -1e-9

    def test_report(self):
        r = verify_exponent_bound(10, samples=20)
        assert r.passed and r.off_v_exponent == pytest.approx(LOG2)
        assert r.scan.holds
