"""
신호 표현 모듈 테스트
"""

import logging

import numpy as np
import pytest

from src.signals.representation import (
    AffineMap,
    PiecewiseConstant,
    PiecewiseLinear,
    SineWave,
    constant_signal,
    eval_signal,
    identity_signal,
    normalize_unit,
    piecewise_table1,
    sampled_signal,
    sine_g,
    uniform_grid,
)
from src.utils.errors import DomainError


class TestPiecewiseConstant:
    """구간별 상수 신호 테스트"""

    @pytest.mark.parametrize('x,expected', [
        (0.0, 0.25),
        (0.15, 0.25),
        (0.150001, 0.72),
        (0.4, 0.72),
        (0.55, 0.35),
        (0.7, 0.35),
        (0.9, 0.55),
        (1.0, 0.55),
    ])
    def test_right_closed_values(self, table1_signal, x, expected):
        """경계는 왼쪽 구간에 속함"""
        assert eval_signal(table1_signal, x) == expected

    def test_integral(self, table1_signal):
        """∫₀¹ f = 0.15·0.25 + 0.25·0.72 + 0.3·0.35 + 0.3·0.55"""
        expected = 0.15 * 0.25 + 0.25 * 0.72 + 0.3 * 0.35 + 0.3 * 0.55
        assert table1_signal.integral(0.0, 1.0) == pytest.approx(expected, abs=1e-15)
        assert table1_signal.integral(0.1, 0.2) == pytest.approx(0.05 * 0.25 + 0.05 * 0.72)

    def test_integral_vectorized(self, table1_signal):
        lo = np.array([0.0, 0.2, 0.5])
        hi = np.array([0.1, 0.3, 0.6])
        np.testing.assert_allclose(table1_signal.integral(lo, hi), [0.025, 0.072, 0.035])

    def test_linear_pieces(self, table1_signal):
        edges, p, q = table1_signal.linear_pieces()
        np.testing.assert_array_equal(edges, [0.0, 0.15, 0.4, 0.7, 1.0])
        np.testing.assert_array_equal(p, [0.25, 0.72, 0.35, 0.55])
        assert np.all(q == 0.0)

    def test_validation(self):
        with pytest.raises(DomainError):
            PiecewiseConstant([0.5], [0.1])
        with pytest.raises(DomainError):
            PiecewiseConstant([0.6, 0.4], [0.1, 0.2, 0.3])
        with pytest.raises(DomainError):
            PiecewiseConstant([1.0], [0.1, 0.2])
        with pytest.raises(DomainError):
            PiecewiseConstant([0.5], [0.1, 1.5])

    def test_outside_domain(self, table1_signal):
        with pytest.raises(DomainError):
            table1_signal(-0.01)
        with pytest.raises(DomainError):
            table1_signal(np.array([0.5, 1.01]))

    def test_constant_signal(self):
        f = constant_signal(0.3, -1.0, 2.0)
        assert f.domain == (-1.0, 2.0)
        assert f(0.5) == 0.3
        assert f.integral(-1.0, 2.0) == pytest.approx(0.9)


class TestPiecewiseLinear:
    """구간별 선형 신호 테스트"""

    def test_interpolation(self):
        f = PiecewiseLinear([0.0, 0.5, 1.0], [0.0, 1.0, 0.5])
        assert f(0.25) == pytest.approx(0.5)
        assert f(0.75) == pytest.approx(0.75)

    def test_integral(self):
        """삼각형 + 사다리꼴 넓이"""
        f = PiecewiseLinear([0.0, 0.5, 1.0], [0.0, 1.0, 0.5])
        assert f.integral(0.0, 1.0) == pytest.approx(0.25 + 0.375)
        assert f.integral(0.0, 0.25) == pytest.approx(0.0625)

    def test_identity(self, identity):
        assert identity(0.3) == pytest.approx(0.3)
        assert identity.integral(0.0, 1.0) == pytest.approx(0.5)
        _, p, q = identity.linear_pieces()
        assert p[0] == pytest.approx(0.0)
        assert q[0] == pytest.approx(1.0)

    def test_validation(self):
        with pytest.raises(DomainError):
            PiecewiseLinear([0.0], [0.5])
        with pytest.raises(DomainError):
            PiecewiseLinear([0.0, 0.0, 1.0], [0.1, 0.2, 0.3])


class TestSineWave:
    """사인파 신호 테스트"""

    def test_values(self, sine_signal):
        assert sine_signal(1 / 16) == pytest.approx(0.7)
        assert sine_signal(3 / 16) == pytest.approx(0.2)
        assert sine_signal(0.0) == pytest.approx(0.45)

    def test_integral(self, sine_signal):
        """정수 주기 적분은 offset"""
        assert sine_signal.integral(0.0, 1.0) == pytest.approx(0.45, abs=1e-14)
        assert sine_signal.integral(0.0, 1 / 8) == pytest.approx(0.45 / 8 + 0.25 / (4 * np.pi))

    def test_not_piecewise_linear(self, sine_signal):
        assert sine_signal.linear_pieces() is None

    def test_range_validation(self):
        with pytest.raises(DomainError):
            SineWave(offset=0.9, amplitude=0.25)


class TestSampledSignal:
    """표본 보간 신호 테스트"""

    def test_step_nearest_sample(self):
        """step 보간은 최근접 표본 (중점은 왼쪽 표본)"""
        f = sampled_signal([0.0, 0.5, 1.0], [0.1, 0.9, 0.3])

        # 검증
        assert isinstance(f, PiecewiseConstant)
        assert f(0.2) == 0.1
        assert f(0.25) == 0.1
        assert f(0.3) == 0.9
        assert f(1.0) == 0.3

    def test_linear(self):
        f = sampled_signal([0.0, 0.5, 1.0], [0.1, 0.9, 0.3], interpolation='linear')
        assert isinstance(f, PiecewiseLinear)
        assert f(0.25) == pytest.approx(0.5)

    def test_validation(self):
        with pytest.raises(DomainError):
            sampled_signal([0.0], [0.5])
        with pytest.raises(DomainError):
            sampled_signal([0.0, 1.0], [0.5, 0.5], interpolation='cubic')
        with pytest.raises(DomainError):
            sampled_signal([0.0, 0.0], [0.5, 0.5])


class TestGridAndNormalize:
    """격자와 정규화 테스트"""

    def test_uniform_grid(self):
        grid = uniform_grid(0.0, 1.0, 5)
        np.testing.assert_allclose(grid, [0.0, 0.25, 0.5, 0.75, 1.0])
        assert grid[-1] == 1.0

    def test_uniform_grid_endpoint_exact(self):
        assert uniform_grid(0.0, 0.7, 7999)[-1] == 0.7

    def test_uniform_grid_too_small(self):
        with pytest.raises(DomainError):
            uniform_grid(0.0, 1.0, 1)

    def test_normalize_unit(self):
        unit, amap = normalize_unit([-1.0, 0.0, 1.0])
        assert unit.tolist() == [0.0, 0.5, 1.0]
        assert (amap.lo, amap.hi) == (-1.0, 1.0)
        np.testing.assert_allclose(amap.denormalize(unit), [-1.0, 0.0, 1.0])

    def test_normalize_constant(self, caplog):
        """상수 표본은 [c, c+1]로 변환하고 경고"""
        with caplog.at_level(logging.WARNING):
            unit, amap = normalize_unit([3.0, 3.0])

        # 검증
        assert unit.tolist() == [0.0, 0.0]
        assert (amap.lo, amap.hi) == (3.0, 4.0)
        assert '상수 신호 정규화' in caplog.text

    def test_normalize_invalid(self):
        with pytest.raises(DomainError):
            normalize_unit([])
        with pytest.raises(DomainError):
            normalize_unit([0.0, np.nan])

    def test_affine_map_validation(self):
        with pytest.raises(DomainError):
            AffineMap(1.0, 1.0)

    def test_builtin_signals(self):
        assert piecewise_table1().domain == (0.0, 1.0)
        assert sine_g().domain == (0.0, 1.0)
        assert identity_signal(0.2, 0.8)(0.5) == pytest.approx(0.5)
