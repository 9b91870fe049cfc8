"""
구적법 모듈 테스트

셀 질량, Durrmeyer 가중 평균, Kantorovich 셀 평균의 세 계산 경로
(닫힌 형태, 합성 중점법, 적응 구적)를 서로 비교합니다.
"""

import math

import numpy as np
import pytest

from src.approximation import quadrature
from src.approximation.kernels import ChiKernel, chi_constants
from src.approximation.quadrature import (
    QuadratureConfig,
    cell_masses,
    chi_cell_mass,
    chi_weighted_mean,
    durrmeyer_range,
    integer_endpoint,
    integrate_adaptive,
    kantorovich_mean,
    kantorovich_means,
    kantorovich_range,
    lattice_ceil,
    lattice_floor,
    weighted_means,
)
from src.signals.representation import PiecewiseConstant, constant_signal
from src.utils.errors import DomainError, QuadratureFailure

ADAPTIVE = QuadratureConfig(mode='adaptive')
COMPOSITE = QuadratureConfig(mode='composite')


class TestLatticeIndices:
    """셀 인덱스 범위 계산"""

    def test_lattice_rounding(self):
        """격자 점 근처 값은 그 정수로"""
        assert lattice_ceil(2.0000000001) == 2
        assert lattice_ceil(2.3) == 3
        assert lattice_floor(2.9999999999) == 3
        assert lattice_floor(2.7) == 2

    def test_floating_products(self):
        """0.1·30 같은 부동소수 곱도 정수로 인식"""
        assert lattice_ceil(30 * 0.1) == 3
        assert lattice_floor(10 * 0.7) == 7

    def test_ranges(self):
        assert durrmeyer_range(200, 0.0, 1.0) == (0, 199)
        assert durrmeyer_range(5, -1.0, 2.0) == (-5, 9)
        assert kantorovich_range(10, 0.05, 0.95) == (1, 8)
        assert kantorovich_range(200, 0.0, 1.0) == (0, 199)

    def test_integer_endpoint_required(self):
        """Durrmeyer 계열은 정수 끝점만 허용"""
        assert integer_endpoint(3.0, 'b') == 3
        with pytest.raises(DomainError):
            integer_endpoint(0.5, 'b')
        with pytest.raises(DomainError):
            durrmeyer_range(10, 0.0, 0.5)


class TestIntegrateAdaptive:
    """적응 구적 테스트"""

    def test_known_integral(self):
        """∫₀¹ 1/(1+u²)du = π/4"""
        value = integrate_adaptive(lambda u: 1.0 / (1.0 + u * u), 0.0, 1.0)
        assert value == pytest.approx(math.pi / 4, abs=1e-10)

    def test_discontinuity_points(self, table1_signal):
        """불연속 점을 넘겨주면 구간별 상수 적분이 정확"""
        value = integrate_adaptive(table1_signal, 0.0, 1.0, points=[0.15, 0.4, 0.7])
        assert value == pytest.approx(table1_signal.integral(0.0, 1.0), abs=1e-10)

    def test_empty_and_reversed_interval(self):
        assert integrate_adaptive(lambda u: 1.0, 0.5, 0.5) == 0.0
        with pytest.raises(DomainError):
            integrate_adaptive(lambda u: 1.0, 1.0, 0.0)

    def test_failure_raises(self, mocker):
        """QUADPACK 경고가 있으면 QuadratureFailure"""
        mocker.patch.object(
            quadrature.integrate, 'quad',
            return_value=(0.1, 0.5, {'last': 200}, 'The maximum number of subdivisions (200) has been achieved.')
        )

        with pytest.raises(QuadratureFailure) as exc_info:
            integrate_adaptive(lambda u: u, 0.0, 1.0)

        # 검증
        assert 'subdivisions' in str(exc_info.value)
        assert exc_info.value.exit_code == 6


class TestCellMass:
    """셀 질량 테스트"""

    def test_hat_example(self):
        """hat, n=2, k=0 → 1/4"""
        assert chi_cell_mass(ChiKernel('hat'), 2, 0, 0, 1) == pytest.approx(0.25, abs=1e-12)

    @pytest.mark.parametrize('chi', [ChiKernel('hat'), ChiKernel('rational', 1.0), ChiKernel('rational', 0.002)])
    def test_mass_bounds(self, chi):
        """𝒜/n ≤ 질량 ≤ ‖χ‖₁/n"""
        n = 25
        constants = chi_constants(chi)
        masses = cell_masses(chi, n, np.arange(0, n), 0.0, 1.0)

        # 검증
        assert np.all(masses >= constants.A / n - 1e-14)
        assert np.all(masses <= constants.l1_norm / n + 1e-14)

    def test_closed_form_matches_adaptive(self, rational_chi):
        ks = np.arange(0, 10)
        exact = cell_masses(rational_chi, 10, ks, 0.0, 1.0)
        adaptive = cell_masses(rational_chi, 10, ks, 0.0, 1.0, ADAPTIVE)
        np.testing.assert_allclose(exact, adaptive, atol=1e-10)

    def test_out_of_range(self, hat_chi):
        with pytest.raises(DomainError):
            chi_cell_mass(hat_chi, 4, 4, 0, 1)
        with pytest.raises(DomainError):
            chi_cell_mass(hat_chi, 4, 0, 1, 1)


class TestWeightedMeans:
    """Durrmeyer 계수 테스트"""

    def test_hat_identity_example(self, hat_chi, identity):
        """hat, f(x)=x, n=2, k=0 → 1/6"""
        assert chi_weighted_mean(hat_chi, identity, 2, 0) == pytest.approx(1 / 6, abs=1e-12)

    @pytest.mark.parametrize('level', [0.0, 0.37, 1.0])
    def test_constant_preserved(self, rational_chi, level):
        """상수 신호의 계수는 그 상수"""
        means, masses = weighted_means(rational_chi, constant_signal(level), 40)

        # 검증
        assert len(means) == 40
        np.testing.assert_allclose(means, level, atol=1e-12)
        assert np.all(masses > 0)

    def test_closed_form_matches_adaptive(self, rational_chi, table1_signal):
        """닫힌 형태와 적응 구적 일치 (구간별 상수)"""
        exact, _ = weighted_means(rational_chi, table1_signal, 20)
        adaptive, _ = weighted_means(rational_chi, table1_signal, 20, q=ADAPTIVE)
        np.testing.assert_allclose(exact, adaptive, atol=1e-8)

    def test_linear_pieces_match_adaptive(self, hat_chi, identity):
        """닫힌 형태와 적응 구적 일치 (구간별 선형)"""
        exact, _ = weighted_means(hat_chi, identity, 16)
        adaptive, _ = weighted_means(hat_chi, identity, 16, q=ADAPTIVE)
        np.testing.assert_allclose(exact, adaptive, atol=1e-8)

    def test_composite_matches_adaptive(self, rational_chi, sine_signal):
        """매끄러운 신호는 합성 중점법 경로"""
        composite, _ = weighted_means(rational_chi, sine_signal, 20)
        adaptive, _ = weighted_means(rational_chi, sine_signal, 20, q=ADAPTIVE)
        np.testing.assert_allclose(composite, adaptive, atol=1e-4)

    def test_forced_composite_on_piecewise(self, rational_chi, table1_signal):
        """composite 모드는 구간별 신호에도 적용"""
        exact, exact_masses = weighted_means(rational_chi, table1_signal, 20)
        composite, masses = weighted_means(rational_chi, table1_signal, 20, q=COMPOSITE)
        np.testing.assert_allclose(composite, exact, atol=1e-4)
        np.testing.assert_allclose(masses, exact_masses, rtol=1e-4)

    def test_subset_of_cells(self, rational_chi, table1_signal):
        """ks 부분 집합은 전체 벡터의 해당 원소"""
        full, _ = weighted_means(rational_chi, table1_signal, 30)
        part, _ = weighted_means(rational_chi, table1_signal, 30, np.array([3, 17, 29]))
        np.testing.assert_allclose(part, full[[3, 17, 29]], atol=1e-14)

    def test_range_checks(self, rational_chi, table1_signal):
        with pytest.raises(DomainError):
            weighted_means(rational_chi, table1_signal, 10, np.array([10]))
        half = PiecewiseConstant([], [0.3], 0.0, 0.5)
        with pytest.raises(DomainError):
            weighted_means(rational_chi, half, 10)


class TestKantorovichMeans:
    """Kantorovich 셀 평균 테스트"""

    def test_cell_inside_piece(self, table1_signal):
        assert kantorovich_mean(table1_signal, 200, 30) == pytest.approx(0.72, abs=1e-12)

    def test_cell_containing_breakpoint(self):
        """경계가 셀 안에 있으면 길이 가중 평균"""
        f = PiecewiseConstant([0.125], [0.2, 0.6])
        # 셀 [0.1, 0.2]: 0.25 비율이 0.2, 0.75 비율이 0.6
        assert kantorovich_mean(f, 10, 1) == pytest.approx(0.25 * 0.2 + 0.75 * 0.6, abs=1e-12)

    def test_exact_matches_adaptive(self, table1_signal):
        exact = kantorovich_means(table1_signal, 10)
        adaptive = kantorovich_means(table1_signal, 10, q=ADAPTIVE)
        np.testing.assert_allclose(exact, adaptive, atol=1e-9)

    def test_non_integer_domain(self):
        """정수가 아닌 끝점도 허용"""
        f = PiecewiseConstant([0.5], [0.1, 0.9], 0.05, 0.95)
        means = kantorovich_means(f, 10)

        # 검증
        assert len(means) == 8
        assert means[0] == pytest.approx(0.1)
        assert means[-1] == pytest.approx(0.9)

    def test_out_of_range(self, table1_signal):
        with pytest.raises(DomainError):
            kantorovich_mean(table1_signal, 10, 10)


class TestQuadratureConfig:
    def test_invalid(self):
        with pytest.raises(DomainError):
            QuadratureConfig(mode='simpson')
        with pytest.raises(DomainError):
            QuadratureConfig(panels=0)
        with pytest.raises(DomainError):
            QuadratureConfig(tol=0.0)
