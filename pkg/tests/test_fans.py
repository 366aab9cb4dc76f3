import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fanwelfare as fw
from fanwelfare import (
    ContaminationFan,
    InvalidFanError,
    InvalidLevelError,
    MonotoneFunction,
    Rawlsian,
    StepFan,
    Utilitarian,
    UtilityVector,
    VertexTableFan,
    WeightVector,
    check_fan_monotone,
    fan_from_dict,
    fan_from_json,
    fan_to_dict,
    fan_to_json,
    sample_directions,
    support_min,
)
from conftest import build_adversarial_table, build_nested_table

IDENTITY = MonotoneFunction.identity()


def all_families(n=3):
    return [
        Utilitarian(),
        Rawlsian(),
        ContaminationFan(IDENTITY),
        ContaminationFan(MonotoneFunction.power(2.0)),
        StepFan(0.3),
        build_nested_table(n),
    ]


profiles = st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
                    min_size=3, max_size=3).map(UtilityVector)


class TestSupportMin:
    def test_utilitarian_is_mean(self):
        value, witness = support_min(Utilitarian(), 0.7, UtilityVector([0.2, 0.6]))
        assert value == pytest.approx(0.4)
        assert witness.tolist() == [0.5, 0.5]

    def test_rawlsian_is_min(self):
        value, witness = support_min(Rawlsian(), 0.7, UtilityVector([0.2, 0.6]))
        assert value == 0.2
        assert witness.tolist() == [1.0, 0.0]

    def test_contamination_blends_mean_and_min(self):
        value, witness = support_min(ContaminationFan(IDENTITY), 0.5,
                                     UtilityVector([0.2, 0.6]))
        assert value == pytest.approx(0.3, abs=1e-12)
        assert witness.tolist() == pytest.approx([0.75, 0.25])
        assert witness.dot(UtilityVector([0.2, 0.6])) == pytest.approx(value)

    def test_step_switches_at_threshold(self):
        x = UtilityVector([0.2, 0.6])
        low, _ = support_min(StepFan(2.0), 1.0, x)
        high, _ = support_min(StepFan(2.0), 3.0, x)
        at, _ = support_min(StepFan(2.0), 2.0, x)  # threshold is on the large side
        assert low == 0.2 and at == 0.2 and high == pytest.approx(0.4)

    def test_vertex_table_minimizes_over_vertices(self):
        fan = VertexTableFan(
            (0.0, 1.0),
            ((WeightVector([0.5, 0.5]),),
             (WeightVector([0.9, 0.1]), WeightVector([0.1, 0.9]))),
            "increasing",
        )
        x = UtilityVector([0.2, 0.6])
        v0, w0 = support_min(fan, 0.5, x)
        v1, w1 = support_min(fan, 1.5, x)
        assert v0 == pytest.approx(0.4)
        assert v1 == pytest.approx(0.9 * 0.2 + 0.1 * 0.6)
        assert w1.tolist() == [0.9, 0.1]

    def test_negative_level_rejected(self):
        with pytest.raises(InvalidLevelError):
            support_min(Rawlsian(), -0.1, UtilityVector([0.2, 0.6]))

    def test_dimension_mismatch_for_tables(self):
        fan = build_nested_table(3)
        with pytest.raises(fw.DimensionMismatchError):
            support_min(fan, 0.1, UtilityVector([0.2, 0.6]))

    def test_witness_attains_value_everywhere(self):
        rng = np.random.default_rng(11)
        for fan in all_families():
            for _ in range(25):
                x = UtilityVector(rng.uniform(0.0, 1.5, 3))
                v = float(rng.uniform(0.0, 1.2))
                value, witness = support_min(fan, v, x)
                assert witness.dot(x) == pytest.approx(value, abs=1e-12)
                assert x.min - 1e-12 <= value <= x.max + 1e-12


class TestSupportMinProperties:
    @settings(max_examples=60)
    @given(profiles, st.floats(min_value=0.0, max_value=1.0),
           st.floats(min_value=0.0, max_value=3.0))
    def test_homogeneous_in_x(self, x, v, lam):
        for fan in all_families():
            base, _ = support_min(fan, v, x)
            scaled, _ = support_min(fan, v, x.scaled(lam))
            assert scaled == pytest.approx(lam * base, abs=1e-9)

    @settings(max_examples=60)
    @given(profiles, profiles, st.floats(min_value=0.0, max_value=1.0),
           st.floats(min_value=0.0, max_value=1.0))
    def test_concave_in_x(self, x, y, alpha, v):
        for fan in all_families():
            mx, _ = support_min(fan, v, x)
            my, _ = support_min(fan, v, y)
            mix = UtilityVector(alpha * x.values + (1 - alpha) * y.values)
            m_mix, _ = support_min(fan, v, mix)
            assert m_mix >= alpha * mx + (1 - alpha) * my - 1e-12

    @settings(max_examples=60)
    @given(profiles, st.floats(min_value=0.0, max_value=1.0),
           st.floats(min_value=0.0, max_value=1.0))
    def test_monotone_in_level(self, x, a, b):
        v_lo, v_hi = sorted((a, b))
        for fan in all_families():
            lo, _ = support_min(fan, v_lo, x)
            hi, _ = support_min(fan, v_hi, x)
            if fan.direction == "increasing":
                assert hi <= lo + 1e-12
            elif fan.direction == "decreasing":
                assert lo <= hi + 1e-12
            else:
                assert lo == pytest.approx(hi, abs=1e-12)

    @settings(max_examples=60)
    @given(profiles, st.lists(st.floats(min_value=0.0, max_value=0.5, allow_nan=False),
                              min_size=3, max_size=3),
           st.floats(min_value=0.0, max_value=1.0))
    def test_monotone_in_x(self, x, bump, v):
        y = UtilityVector(x.values + np.asarray(bump))
        for fan in all_families():
            mx, _ = support_min(fan, v, x)
            my, _ = support_min(fan, v, y)
            assert mx <= my + 1e-12

    @given(st.floats(min_value=0.0, max_value=5.0),
           st.floats(min_value=0.0, max_value=1.0))
    def test_constant_profiles(self, c, v):
        x = UtilityVector([c, c, c])
        for fan in all_families():
            value, _ = support_min(fan, v, x)
            assert value == pytest.approx(c, abs=1e-12)


class TestCheckFanMonotone:
    def test_contamination_grows(self):
        result = check_fan_monotone(ContaminationFan(IDENTITY), [0.0, 0.3, 0.9], dim=2)
        assert bool(result)

    def test_step_declared_decreasing(self):
        assert check_fan_monotone(StepFan(2.0), [1.0, 3.0], dim=2).ok

    def test_growing_table_declared_decreasing_fails(self):
        fan = VertexTableFan(
            (0.0, 1.0),
            ((WeightVector([0.5, 0.5]),),
             (WeightVector([1.0, 0.0]), WeightVector([0.0, 1.0]))),
            "decreasing",
        )
        result = check_fan_monotone(fan, [0.5, 1.5])
        assert not result.ok
        assert result.violation is not None
        assert result.violation["v"] == 0.5 and result.violation["v_next"] == 1.5

    def test_nested_table_passes(self):
        assert check_fan_monotone(build_nested_table(3), [0.0, 0.2, 0.4, 0.6, 0.8]).ok

    def test_adversarial_table_fails(self):
        assert not check_fan_monotone(build_adversarial_table(), [0.02, 0.2, 0.8]).ok

    def test_constant_fans_pass_both_ways(self):
        assert check_fan_monotone(Utilitarian(), [0.0, 0.5, 2.0], dim=4).ok
        assert check_fan_monotone(Rawlsian(), [0.0, 0.5, 2.0], dim=4).ok

    def test_requires_sorted_levels(self):
        with pytest.raises(ValueError):
            check_fan_monotone(Rawlsian(), [0.5, 0.1], dim=2)

    def test_requires_dimension_information(self):
        with pytest.raises(ValueError):
            check_fan_monotone(Rawlsian(), [0.1, 0.5])

    def test_rejects_too_few_directions(self):
        with pytest.raises(ValueError):
            check_fan_monotone(Rawlsian(), [0.1, 0.5], directions=np.eye(2))

    def test_sample_directions_span_axes(self):
        dirs = sample_directions(3, seed=0)
        assert dirs.shape == (12, 3)
        for e in np.eye(3):
            assert any(np.allclose(d, e) for d in dirs)
            assert any(np.allclose(d, -e) for d in dirs)


class TestFanValidation:
    def test_step_requires_positive_threshold(self):
        with pytest.raises(InvalidFanError):
            StepFan(0.0)
        with pytest.raises(InvalidFanError):
            StepFan(-1.0)

    def test_table_breakpoints_must_start_at_zero(self):
        with pytest.raises(InvalidFanError):
            VertexTableFan((0.5, 1.0), ((WeightVector([1.0]),),) * 2, "decreasing")

    def test_table_breakpoints_strictly_increasing(self):
        with pytest.raises(InvalidFanError):
            VertexTableFan((0.0, 1.0, 1.0), ((WeightVector([1.0]),),) * 3, "decreasing")

    def test_table_rejects_empty_band(self):
        with pytest.raises(InvalidFanError):
            VertexTableFan((0.0, 1.0), ((WeightVector([1.0]),), ()), "decreasing")

    def test_table_rejects_mixed_dimensions(self):
        with pytest.raises(InvalidFanError):
            VertexTableFan(
                (0.0,),
                ((WeightVector([1.0]), WeightVector([0.5, 0.5])),),
                "decreasing",
            )

    def test_table_direction_vocabulary(self):
        with pytest.raises(InvalidFanError):
            VertexTableFan((0.0,), ((WeightVector([1.0]),),), "sideways")

    def test_full_simplex_at_zero_detection(self):
        assert Rawlsian().full_simplex_at_zero()
        assert StepFan(0.3).full_simplex_at_zero()
        assert not Utilitarian().full_simplex_at_zero()
        assert not ContaminationFan(IDENTITY).full_simplex_at_zero()
        assert build_nested_table(3).full_simplex_at_zero()
        trimmed = build_nested_table(3, breakpoints=(0.0, 0.4), spreads=(0.5, 0.1))
        assert not trimmed.full_simplex_at_zero()


class TestSerialization:
    def test_round_trip_all_families(self):
        for fan in all_families():
            doc = fan_to_dict(fan)
            again = fan_from_dict(doc)
            assert fan_to_dict(again) == doc
            assert fan_from_json(fan_to_json(fan)).direction == fan.direction

    def test_round_trip_preserves_behavior(self):
        x = UtilityVector([0.15, 0.8, 0.4])
        for fan in all_families():
            again = fan_from_json(fan_to_json(fan))
            for v in (0.0, 0.25, 0.6, 1.1):
                assert support_min(again, v, x)[0] == pytest.approx(
                    support_min(fan, v, x)[0], abs=1e-14
                )

    def test_direction_conflict_rejected(self):
        with pytest.raises(InvalidFanError):
            fan_from_dict({"family": "step", "params": {"c_star": 1.0},
                           "direction": "increasing"})

    def test_unknown_family_rejected(self):
        with pytest.raises(InvalidFanError):
            fan_from_dict({"family": "ellipsoid", "params": {}})

    def test_bad_json_rejected(self):
        with pytest.raises(InvalidFanError):
            fan_from_json("{not json")

    def test_contamination_accepts_rho_alias(self):
        fan = fan_from_dict({
            "family": "contamination",
            "params": {"rho": {"kind": "identity"}},
        })
        assert isinstance(fan, ContaminationFan)
