import numpy as np
import pytest

import fanwelfare as fw
from fanwelfare import (
    ContaminationFan,
    DomainError,
    InvalidFanError,
    MaxIterExceededError,
    MonotoneFunction,
    Rawlsian,
    SolverConfig,
    StepFan,
    Utilitarian,
    UtilityVector,
    VertexTableFan,
    WeightVector,
    rank,
    welfare,
    welfare_closed_form_identity,
)
from fanwelfare.fans import Fan
from conftest import build_adversarial_table, build_nested_table

IDENTITY = MonotoneFunction.identity()


def solvable_families(n=3):
    return [
        Utilitarian(),
        Rawlsian(),
        ContaminationFan(IDENTITY),
        ContaminationFan(MonotoneFunction.power(2.0)),
        StepFan(0.3),
        build_nested_table(n),
    ]


class TestWelfareExamples:
    def test_rawlsian(self):
        assert welfare(Rawlsian(), [0.2, 0.6]).value == 0.2

    def test_contamination_identity(self):
        result = welfare(ContaminationFan(IDENTITY), [0.2, 0.6])
        assert result.value == pytest.approx(1.0 / 3.0, abs=1e-9)
        assert result.method == "bisection"

    def test_step_cases(self):
        # min at or below the threshold pins welfare at the min; otherwise the
        # qualifying set starts at the mean.
        assert welfare(StepFan(0.3), [0.25, 0.9]).value == 0.25
        assert welfare(StepFan(0.3), [0.4, 0.9]).value == pytest.approx(0.65)
        assert welfare(StepFan(0.3), [0.3, 0.9]).value == 0.3

    def test_utilitarian(self):
        r = welfare(Utilitarian(), [0.2, 0.6])
        assert r.value == pytest.approx(0.4)
        assert r.method == "iteration"

    def test_all_zero_profile(self):
        for fan in solvable_families():
            n = fan.n if isinstance(fan, VertexTableFan) else 2
            assert welfare(fan, [0.0] * n).value == 0.0


class TestWelfareContracts:
    def test_residual_and_witness(self):
        rng = np.random.default_rng(5)
        cfg = SolverConfig()
        for fan in solvable_families():
            for _ in range(40):
                x = UtilityVector(rng.uniform(0.01, 1.0, 3))
                res = welfare(fan, x, cfg)
                assert res.residual <= cfg.tol_abs
                assert res.witness.dot(x) == pytest.approx(res.value, abs=10 * cfg.tol_abs)
                assert x.min - cfg.tol_abs <= res.value <= x.max + cfg.tol_abs

    def test_constant_profile_welfare_is_the_constant(self):
        for fan in solvable_families():
            for c in (0.2, 0.7, 1.0, 3.5):
                assert welfare(fan, [c, c, c]).value == pytest.approx(c, abs=1e-9)

    def test_monotone_in_profile(self):
        rng = np.random.default_rng(6)
        for fan in solvable_families():
            for _ in range(30):
                x = rng.uniform(0.01, 1.0, 3)
                weak = x + rng.uniform(0.0, 0.3, 3) * (rng.random(3) < 0.5)
                strict = x + rng.uniform(0.02, 0.3, 3)
                ux = welfare(fan, x).value
                assert welfare(fan, weak).value >= ux - 1e-9
                assert welfare(fan, strict).value > ux

    def test_no_qualifying_level_below_solution(self):
        # the solved value is the infimum: strictly below it the support
        # minimum still exceeds the level
        rng = np.random.default_rng(7)
        for fan in solvable_families():
            for _ in range(20):
                x = UtilityVector(rng.uniform(0.05, 1.0, 3))
                u = welfare(fan, x).value
                for v in np.linspace(0.0, max(u - 1e-9, 0.0), 50):
                    value, _ = fw.support_min(fan, float(v), x)
                    assert value > v

    def test_representation_agrees_with_near_rawlsian_contamination(self):
        # An extreme contamination profile (aversion v**0.001 is ~1 away from
        # zero) should price profiles almost like the pure worst-off rule.
        # Approximate check only: on [0.3, 1]^n the gap is bounded by
        # (1 - 0.3**0.001) * (mean - min) < 1e-3.
        rng = np.random.default_rng(8)
        steep = ContaminationFan(MonotoneFunction.power(0.001))
        for _ in range(60):
            n = int(rng.choice([2, 3, 5]))
            x = UtilityVector(rng.uniform(0.3, 1.0, n))
            assert welfare(steep, x).value == pytest.approx(
                welfare(Rawlsian(), x).value, abs=1e-3
            )

    def test_vertex_table_reaches_exact_fixed_point_quickly(self):
        fan = build_nested_table(3)
        res = welfare(fan, [0.5, 0.6, 0.9])
        assert res.residual == 0.0
        assert res.iterations <= len(fan.breakpoints) + 2


class TestClosedForm:
    def test_reference_value(self):
        assert welfare_closed_form_identity([0.2, 0.6]) == pytest.approx(1.0 / 3.0)

    def test_constant(self):
        assert welfare_closed_form_identity([0.4, 0.4]) == pytest.approx(0.4)

    def test_three_agents(self):
        # 0.5 / (1 + 0.5 - 0.1)
        assert welfare_closed_form_identity([0.1, 0.5, 0.9]) == pytest.approx(
            0.35714285714285715
        )

    def test_domain_is_open_unit_interval(self):
        with pytest.raises(DomainError):
            welfare_closed_form_identity([0.0, 0.5])
        with pytest.raises(DomainError):
            welfare_closed_form_identity([0.5, 1.0])

    def test_matches_solver(self):
        rng = np.random.default_rng(9)
        fan = ContaminationFan(IDENTITY)
        for _ in range(50):
            x = UtilityVector(rng.uniform(0.01, 0.99, int(rng.choice([2, 3, 5]))))
            assert welfare(fan, x).value == pytest.approx(
                welfare_closed_form_identity(x), abs=1e-9
            )


class TestRank:
    def test_utilitarian_prefers_higher_mean(self):
        assert rank(Utilitarian(), [0.2, 0.6], [0.3, 0.3]) == "x_preferred"

    def test_rawlsian_prefers_higher_min(self):
        assert rank(Rawlsian(), [0.2, 0.6], [0.3, 0.3]) == "y_preferred"

    def test_indifference_with_certainty_equivalent(self):
        third = 1.0 / 3.0
        assert rank(ContaminationFan(IDENTITY), [0.2, 0.6], [third, third]) == "indifferent"

    def test_length_mismatch(self):
        with pytest.raises(fw.DimensionMismatchError):
            rank(Utilitarian(), [0.2, 0.6], [0.1, 0.2, 0.3])


class TestSolverGuards:
    def test_increasing_vertex_table_rejected(self):
        fan = VertexTableFan(
            (0.0, 1.0),
            ((WeightVector([0.5, 0.5]),),
             (WeightVector([1.0, 0.0]), WeightVector([0.0, 1.0]))),
            "increasing",
        )
        with pytest.raises(InvalidFanError):
            welfare(fan, [0.2, 0.6])

    def test_oscillating_non_fan_raises_max_iter(self):
        # on the non-monotone table the iteration bounces between bands for
        # profiles whose min falls in the lowest band
        fan = build_adversarial_table()
        with pytest.raises(MaxIterExceededError):
            welfare(fan, [0.5, 0.03], SolverConfig(max_iter=500))

    def test_config_validation(self):
        with pytest.raises(DomainError):
            SolverConfig(tol_abs=0.0)
        with pytest.raises(DomainError):
            SolverConfig(max_iter=0)
        with pytest.raises(DomainError):
            SolverConfig(v_upper_factor=0.5)

    def test_stall_guard_jumps_to_fixed_point(self):
        # Synthetic curve: a near-fixed stall just below a jump, with a true
        # fixed point on the far side. The guard must land on 0.9.
        tol = 1e-10

        class Stall(Fan):
            direction = "decreasing"

            def support_min_value(self, v, x):
                if v < 0.3:
                    return 0.3
                if v < 0.3 + tol / 4:
                    return 0.3 + tol / 2
                return 0.9

            def witness(self, v, x):
                return WeightVector.uniform(len(x))

        res = welfare(Stall(), [0.9, 0.9], SolverConfig(tol_abs=tol))
        assert res.value == pytest.approx(0.9)

    def test_stall_guard_reports_failure_when_jump_misses(self):
        tol = 1e-10

        class StallBroken(Fan):
            direction = "decreasing"

            def support_min_value(self, v, x):
                if v < 0.3:
                    return 0.3
                if v < 0.3 + tol / 4:
                    return 0.3 + tol / 2
                return 0.9 if v < 0.9 else 0.95

            def witness(self, v, x):
                return WeightVector.uniform(len(x))

        with pytest.raises(MaxIterExceededError):
            welfare(StallBroken(), [0.95, 0.95], SolverConfig(tol_abs=tol))
