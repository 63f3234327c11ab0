"""Haar layer: exact coefficients, Parseval, projections, square function."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsq.dyadic import (
    DyadicInterval,
    GridFunction,
    HaarCoefficients,
    haar_analyze,
    haar_synthesize,
    integral,
    project,
    square_function,
    truncated_square_function,
)
from bsq.rng import stream

PARSEVAL_RTOL = 1e-12
ROUNDTRIP_ATOL = 1e-12


def haar_on_grid(interval: DyadicInterval, depth: int) -> np.ndarray:
    """The Haar step function h_I sampled on the depth-N grid."""
    n = 2 ** depth
    vals = np.zeros(n)
    width = n >> interval.level
    start = interval.index * width
    vals[start:start + width // 2] = 1.0
    vals[start + width // 2:start + width] = -1.0
    return vals


def coefficient_oracle(f: GridFunction, interval: DyadicInterval) -> float:
    """(1/|I|) integral(f h_I) by direct cell-product summation."""
    h = haar_on_grid(interval, f.depth)
    return float(np.sum(f.values * h) / 2 ** f.depth / interval.measure)


class TestDyadicInterval:
    def test_geometry(self):
        i = DyadicInterval(2, 3)
        assert (i.left, i.right, i.measure) == (0.75, 1.0, 0.25)
        assert i.parent() == DyadicInterval(1, 1)
        left, right = i.children()
        assert left.left == i.left and right.right == i.right
        assert i.contains(0.75) and not i.contains(1.0)

    def test_children_partition_parent(self):
        i = DyadicInterval(3, 5)
        left, right = i.children()
        assert left.measure + right.measure == i.measure
        assert left.right == right.left

    def test_flat_enumeration_matches_paper_listing(self):
        # h_1 on [0,1), h_2 on [0,1/2), h_3 on [1/2,1), h_4 on [0,1/4), ...
        order = [DyadicInterval(0, 0), DyadicInterval(1, 0), DyadicInterval(1, 1),
                 DyadicInterval(2, 0), DyadicInterval(2, 1)]
        assert [i.flat_haar_index() for i in order] == [1, 2, 3, 4, 5]

    def test_invalid(self):
        with pytest.raises(ValueError):
            DyadicInterval(1, 2)
        with pytest.raises(ValueError):
            DyadicInterval(-1, 0)


class TestAnalyze:
    def test_constant_has_only_mean(self):
        c = haar_analyze(GridFunction.constant(1.0, 3))
        assert c.mean == 1.0
        assert all(np.all(d == 0.0) for d in c.details)

    def test_h1_self_coefficient(self):
        c = haar_analyze(GridFunction([1.0, -1.0]))
        assert c.mean == 0.0
        assert c.details[0][0] == 1.0

    def test_depth2_example_against_inner_product_oracle(self):
        f = GridFunction([1.0, 2.0, 3.0, 4.0])
        c = haar_analyze(f)
        assert c.mean == 2.5
        for lvl in range(2):
            for idx in range(2 ** lvl):
                iv = DyadicInterval(lvl, idx)
                assert c.coefficient(iv) == pytest.approx(
                    coefficient_oracle(f, iv), abs=1e-15
                )
        assert c.details[0][0] == -1.0
        assert np.allclose(c.details[1], [-0.5, -0.5])
        assert c.parseval_sum() == 7.5

    def test_linearity(self):
        rng = stream(101)
        f = GridFunction(rng.standard_normal(64))
        g = GridFunction(rng.standard_normal(64))
        cf, cg = haar_analyze(f), haar_analyze(g)
        both = haar_analyze(GridFunction(2.0 * f.values - 3.0 * g.values))
        assert both.mean == pytest.approx(2 * cf.mean - 3 * cg.mean, rel=1e-12)
        for k in range(6):
            assert np.allclose(
                both.details[k], 2 * cf.details[k] - 3 * cg.details[k], rtol=1e-12
            )


class TestSynthesize:
    def test_zero_coefficients(self):
        f = haar_synthesize(HaarCoefficients(0.0, (np.zeros(1), np.zeros(2))))
        assert np.all(f.values == 0.0)

    def test_mean_only(self):
        f = haar_synthesize(HaarCoefficients(5.0, ()))
        assert f == GridFunction([5.0])

    def test_random_roundtrip_depth6(self):
        rng = stream(77)
        c = HaarCoefficients(
            float(rng.standard_normal()),
            tuple(rng.standard_normal(2 ** k) for k in range(6)),
        )
        back = haar_analyze(haar_synthesize(c))
        assert back.mean == pytest.approx(c.mean, abs=ROUNDTRIP_ATOL)
        for k in range(6):
            assert np.allclose(back.details[k], c.details[k], atol=ROUNDTRIP_ATOL)

    def test_depth_mismatch_rejected(self):
        c = haar_analyze(GridFunction([1.0, 2.0]))
        with pytest.raises(ValueError):
            haar_synthesize(c, depth=3)


class TestProject:
    def test_identity_at_full_depth(self):
        f = GridFunction([1.0, 2.0, 3.0, 4.0])
        assert project(f, 2) == f

    def test_level_zero_is_mean(self):
        f = GridFunction([1.0, 2.0, 3.0, 4.0])
        assert np.all(project(f, 0).values == 2.5)

    def test_direct_averaging_oracle(self):
        f = GridFunction([1.0, 2.0, 3.0, 4.0])
        assert np.array_equal(project(f, 1).values, [1.5, 1.5, 3.5, 3.5])

    def test_integral_preserved_and_tower_property(self):
        rng = stream(5)
        f = GridFunction(rng.standard_normal(256))
        for n in range(9):
            assert integral(project(f, n)) == pytest.approx(integral(f), rel=1e-12)
        for n in range(4):
            assert np.allclose(
                project(project(f, 6), n).values, project(f, n).values, rtol=1e-12
            )

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            project(GridFunction([1.0, 2.0]), 2)


class TestSquareFunction:
    def test_constant(self):
        assert np.all(square_function(GridFunction.constant(-3.0, 4)).values == 3.0)

    def test_h0_plus_h1(self):
        f = GridFunction([2.0, 0.0])  # 1 + h_1
        assert np.allclose(square_function(f).values, np.sqrt(2.0))

    def test_depth2_example_brute_force(self):
        f = GridFunction([1.0, 2.0, 3.0, 4.0])
        s = square_function(f)
        # sum the squared coefficients of every Haar support containing x
        c = haar_analyze(f)
        for j, x in enumerate([0.125, 0.375, 0.625, 0.875]):
            total = c.mean ** 2
            for lvl in range(2):
                for idx in range(2 ** lvl):
                    iv = DyadicInterval(lvl, idx)
                    if iv.contains(x):
                        total += c.coefficient(iv) ** 2
            assert s.values[j] == pytest.approx(np.sqrt(total), rel=1e-14)
        assert s.values[0] == pytest.approx(np.sqrt(7.5), rel=1e-14)
        assert integral(GridFunction(s.values ** 2)) == 7.5

    def test_absolute_homogeneity(self):
        rng = stream(9)
        f = GridFunction(rng.standard_normal(32))
        s = square_function(f)
        s_scaled = square_function(GridFunction(-2.5 * f.values))
        assert np.allclose(s_scaled.values, 2.5 * s.values, rtol=1e-12)

    def test_isometry_random(self):
        rng = stream(13)
        for _ in range(50):
            f = GridFunction(rng.standard_normal(128))
            s = square_function(f)
            lhs = integral(GridFunction(s.values ** 2))
            rhs = integral(GridFunction(f.values ** 2))
            assert lhs == pytest.approx(rhs, rel=PARSEVAL_RTOL)


class TestTruncated:
    def test_level_zero_is_abs_mean(self):
        f = GridFunction([1.0, 2.0, 3.0, 4.0])
        assert np.all(truncated_square_function(f, 0).values == 2.5)

    def test_zero_mean_at_level_zero(self):
        f = GridFunction([1.0, -1.0])
        assert np.all(truncated_square_function(f, 0).values == 0.0)

    def test_level1_example(self):
        f = GridFunction([1.0, 2.0, 3.0, 4.0])
        expect = np.sqrt(2.5 ** 2 + 1.0)
        assert np.allclose(truncated_square_function(f, 1).values, expect)

    def test_matches_projection_and_monotone(self):
        rng = stream(21)
        f = GridFunction(rng.standard_normal(64))
        prev = truncated_square_function(f, 0).values
        for n in range(1, 7):
            sn = truncated_square_function(f, n).values
            assert np.allclose(
                sn, square_function(project(f, n)).values, rtol=1e-12
            )
            assert np.all(sn >= prev - 1e-14)
            prev = sn
        assert np.allclose(prev, square_function(f).values)


class TestSerialization:
    def test_csv_roundtrip(self):
        f = GridFunction([1.0, np.pi, -2.0 / 3.0, 1e-17])
        assert GridFunction.from_csv_line(f.to_csv_line()) == f
        assert f.to_csv_line().startswith("2,")

    def test_json_roundtrip_17_digits(self):
        f = GridFunction([np.pi, np.e])
        text = f.to_json()
        assert "3.1415926535897931" in text
        assert GridFunction.from_json(text) == f

    def test_bad_shapes(self):
        with pytest.raises(ValueError):
            GridFunction([1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            GridFunction.from_csv_line("2,1,2")
        with pytest.raises(ValueError):
            GridFunction(np.ones(2 ** 21))  # above the depth cap

    def test_cell_value_lookup(self):
        f = GridFunction([1.0, 2.0, 3.0, 4.0])
        assert f.cell_value(0.0) == 1.0
        assert f.cell_value(0.9) == 4.0
        with pytest.raises(ValueError):
            f.cell_value(1.0)

    def test_immutability(self):
        f = GridFunction([1.0, 2.0])
        with pytest.raises(AttributeError):
            f.depth = 3
        with pytest.raises(ValueError):
            f.values[0] = 9.0


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_roundtrip_and_parseval_property(data):
    depth = data.draw(st.integers(min_value=0, max_value=8))
    vals = data.draw(
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
            min_size=2 ** depth,
            max_size=2 ** depth,
        )
    )
    f = GridFunction(vals)
    c = haar_analyze(f)
    back = haar_synthesize(c)
    scale = 1.0 + np.max(np.abs(f.values))
    assert np.allclose(back.values, f.values, atol=1e-11 * scale)
    norm = integral(GridFunction(f.values ** 2))
    assert abs(c.parseval_sum() - norm) <= PARSEVAL_RTOL * (1.0 + norm)
