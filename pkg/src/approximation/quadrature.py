"""
구적법 모듈

연산자 계수에 필요한 적분을 계산합니다.
- chi_cell_mass: 셀 질량 ∫_a^b χ(nt−k)dt
- chi_weighted_mean: Durrmeyer 계수 ∫χ(nt−k)f(t)dt / ∫χ(nt−k)dt
- kantorovich_mean: Kantorovich 셀 평균 n∫_{k/n}^{(k+1)/n} f(u)du
- integrate_adaptive: 독립 검증용 적응 구적법 (QUADPACK)

계산 경로:
    1. 닫힌 형태: χ 원시함수 Φ, Ψ와 신호의 구간별 선형 표현 조합
    2. 합성 중점법: 격자 셀당 panels개 중점, FFT 상관으로 모든 k를 한 번에 계산
    3. 적응: scipy.integrate.quad (오라클/테스트 용도)
"""

import math
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate
from scipy.signal import fftconvolve

from src.approximation.kernels import ChiKernel
from src.signals.representation import Signal
from src.utils.errors import DomainError, QuadratureFailure, ZeroDenominator

logger = logging.getLogger(__name__)

QUADRATURE_MODES = ('closed_form_preferred', 'composite', 'adaptive')

# 격자 정수 판정 허용 오차
_LATTICE_TOL = 1.0e-9

# 행렬 연산 한 번에 허용하는 원소 수
_MAX_BLOCK = 2_000_000


@dataclass(frozen=True)
class QuadratureConfig:
    """
    구적 설정

    Attributes:
        mode: 'closed_form_preferred' | 'composite' | 'adaptive'
        panels: 합성 중점법의 격자 셀당 패널 수
        tol: 적응 구적 절대 허용 오차
        limit: 적응 구적 최대 분할 수
    """
    mode: str = 'closed_form_preferred'
    panels: int = 64
    tol: float = 1.0e-10
    limit: int = 200

    def __post_init__(self):
        if self.mode not in QUADRATURE_MODES:
            raise DomainError(f"지원하지 않는 구적 모드: {self.mode}. 사용 가능: {QUADRATURE_MODES}")
        if self.panels < 1:
            raise DomainError(f"panels는 1 이상이어야 합니다: {self.panels}")
        if not self.tol > 0:
            raise DomainError(f"tol은 양수여야 합니다: {self.tol}")
        if self.limit < 1:
            raise DomainError(f"limit은 1 이상이어야 합니다: {self.limit}")


def lattice_ceil(value: float) -> int:
    """격자 점에 1e-9 이내로 가까우면 그 정수, 아니면 ⌈value⌉"""
    nearest = round(value)
    if abs(value - nearest) <= _LATTICE_TOL:
        return int(nearest)
    return int(math.ceil(value))


def lattice_floor(value: float) -> int:
    """격자 점에 1e-9 이내로 가까우면 그 정수, 아니면 ⌊value⌋"""
    nearest = round(value)
    if abs(value - nearest) <= _LATTICE_TOL:
        return int(nearest)
    return int(math.floor(value))


def integer_endpoint(value: float, name: str) -> int:
    """
    정수 끝점 확인

    Raises:
        DomainError: value가 정수가 아닌 경우
    """
    nearest = round(value)
    if abs(value - nearest) > _LATTICE_TOL:
        raise DomainError(f"Durrmeyer 계열은 정수 끝점이 필요합니다: {name}={value}")
    return int(nearest)


def durrmeyer_range(n: int, a: float, b: float) -> Tuple[int, int]:
    """Durrmeyer 셀 인덱스 범위 (na, nb−1)"""
    a_int = integer_endpoint(a, 'a')
    b_int = integer_endpoint(b, 'b')
    return n * a_int, n * b_int - 1


def kantorovich_range(n: int, a: float, b: float) -> Tuple[int, int]:
    """Kantorovich 셀 인덱스 범위 (⌈na⌉, ⌊nb⌋−1)"""
    return lattice_ceil(n * a), lattice_floor(n * b) - 1


def integrate_adaptive(
        g: Callable[[float], float],
        lo: float,
        hi: float,
        tol: float = 1.0e-10,
        limit: int = 200,
        points: Optional[Sequence[float]] = None
) -> float:
    """
    적응 구적 (Gauss-Kronrod 21점 규칙, 절대 오차 기준)

    Args:
        g: 피적분 함수 (유계)
        lo: 하한
        hi: 상한 (lo ≤ hi)
        tol: 절대 허용 오차
        limit: 최대 분할 수
        points: 불연속 점 등 분할에 반드시 포함할 내부 점

    Returns:
        float: 적분 추정치

    Raises:
        DomainError: lo > hi
        QuadratureFailure: 분할 한도 안에서 수렴하지 못한 경우

    Examples:
        >>> round(integrate_adaptive(lambda u: 1.0 / (1.0 + u * u), 0.0, 1.0), 10)
        0.7853981634
    """
    if lo > hi:
        raise DomainError(f"적분 구간이 잘못되었습니다: lo={lo} > hi={hi}")
    if lo == hi:
        return 0.0

    inner = None
    if points is not None:
        inner = sorted({float(p) for p in points if lo < p < hi})
        if not inner:
            inner = None
        elif len(inner) >= limit:
            limit = len(inner) + limit

    result = integrate.quad(
        g, lo, hi,
        epsabs=tol, epsrel=0.0, limit=limit, points=inner, full_output=1
    )
    # 경고가 있으면 (값, 오차, 정보, 메시지[, 설명]) 형태로 반환됨
    if len(result) > 3:
        value, abserr = result[0], result[1]
        raise QuadratureFailure(
            f"적응 구적 실패 [{lo}, {hi}]: {result[3]} (추정치={value:.6g}, 오차={abserr:.3g})"
        )
    return float(result[0])


def _chi_adaptive(c: ChiKernel, n: int, k: int, weight: Optional[Callable] = None):
    if weight is None:
        return lambda t: c(n * t - k)
    return lambda t: c(n * t - k) * weight(t)


def _cell_points(c: ChiKernel, n: int, k: int, extra: Sequence[float] = ()) -> list:
    # hat 커널의 꺾이는 점과 신호 불연속 점
    points = list(extra)
    if c.compact:
        points += [(k - 1) / n, k / n, (k + 1) / n]
    else:
        points.append(k / n)
    return points


def cell_masses(
        c: ChiKernel,
        n: int,
        ks: np.ndarray,
        a: float,
        b: float,
        q: QuadratureConfig = QuadratureConfig()
) -> np.ndarray:
    """
    셀 질량 벡터 ∫_a^b χ(nt−k)dt (k ∈ ks)

    Returns:
        np.ndarray: 질량 (ks와 같은 길이)
    """
    ks = np.asarray(ks, dtype=float)
    if q.mode == 'adaptive':
        return np.array([
            integrate_adaptive(
                _chi_adaptive(c, n, int(k)), a, b, q.tol, q.limit, _cell_points(c, n, int(k))
            )
            for k in ks
        ])
    return (c.antiderivative(n * b - ks) - c.antiderivative(n * a - ks)) / n


def chi_cell_mass(
        c: ChiKernel,
        n: int,
        k: int,
        a: int,
        b: int,
        q: QuadratureConfig = QuadratureConfig()
) -> float:
    """
    셀 질량 ∫_a^b χ(nt−k)dt = (1/n)∫_{na−k}^{nb−k} χ(u)du

    Args:
        c: ChiKernel
        n: 연산자 차수
        k: 셀 인덱스 (na ≤ k ≤ nb−1)
        a: 정의역 왼쪽 끝 (정수)
        b: 정의역 오른쪽 끝 (정수)
        q: 구적 설정

    Returns:
        float: 𝒜/n ≤ 질량 ≤ ‖χ‖₁/n

    Raises:
        DomainError: a ≥ b 또는 k가 범위 밖
        QuadratureFailure: 적응 구적 실패

    Examples:
        >>> round(chi_cell_mass(ChiKernel('hat'), 2, 0, 0, 1), 12)
        0.25
    """
    if not a < b:
        raise DomainError(f"a < b 여야 합니다: a={a}, b={b}")
    k_lo, k_hi = durrmeyer_range(n, a, b)
    if not k_lo <= k <= k_hi:
        raise DomainError(f"k={k}가 셀 범위 [{k_lo}, {k_hi}] 밖입니다")
    return float(cell_masses(c, n, np.array([k]), a, b, q)[0])


def _piecewise_numerators(
        c: ChiKernel,
        n: int,
        ks: np.ndarray,
        pieces: Tuple[np.ndarray, np.ndarray, np.ndarray]
) -> np.ndarray:
    # 조각 f = p + q·t 위에서 ∫χ(nt−k)f dt = (1/n)[(p + qk/n)ΔΦ + (q/n)ΔΨ]
    edges, p, slope = pieces
    linear = bool(np.any(slope != 0.0))
    rows = max(1, _MAX_BLOCK // max(1, len(p)))
    out = np.empty(len(ks))

    for start in range(0, len(ks), rows):
        k = ks[start:start + rows, None]
        u = n * edges[None, :] - k
        d_phi = np.diff(c.antiderivative(u), axis=1)
        total = (p[None, :] * d_phi).sum(axis=1)
        if linear:
            d_psi = np.diff(c.first_moment_antiderivative(u), axis=1)
            total += (slope[None, :] * (k * d_phi + d_psi)).sum(axis=1) / n
        out[start:start + rows] = total / n
    return out


def _composite_integrals(
        c: ChiKernel,
        f: Signal,
        n: int,
        k_lo: int,
        k_hi: int,
        panels: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    합성 중점법으로 (분자, 분모) 계산

    격자 셀 j마다 panels개의 중점 t = (j + (i+½)/P)/n을 두고,
    Σ_m f(t_m)χ(nt_m − k)를 모든 k에 대해 FFT 상관 한 번으로 구합니다.
    """
    cells = k_hi - k_lo + 1
    total = cells * panels
    offsets = (np.arange(total) + 0.5) / panels
    t = (k_lo + offsets) / n
    f_values = f(np.clip(t, f.a, f.b))

    # kernel[r] = χ((r − total + ½)/P), r = 0..2·total−1
    kernel = c((np.arange(2 * total) - total + 0.5) / panels)
    reversed_kernel = kernel[::-1]
    index = total - 1 + panels * np.arange(cells)

    scale = 1.0 / (n * panels)
    numerators = fftconvolve(f_values, reversed_kernel)[index] * scale
    denominators = fftconvolve(np.ones(total), reversed_kernel)[index] * scale
    return numerators, denominators


def weighted_means(
        c: ChiKernel,
        f: Signal,
        n: int,
        ks: Optional[np.ndarray] = None,
        q: QuadratureConfig = QuadratureConfig()
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Durrmeyer 계수 벡터와 셀 질량 계산

    Args:
        c: ChiKernel
        f: 신호 (정수 끝점 [a,b])
        n: 연산자 차수
        ks: 셀 인덱스 (None이면 na..nb−1 전체)
        q: 구적 설정

    Returns:
        Tuple[np.ndarray, np.ndarray]: (가중 평균, 셀 질량)

    Raises:
        DomainError: 정수가 아닌 끝점, 범위 밖 k
        ZeroDenominator: 셀 질량이 0인 경우
        QuadratureFailure: 적응 구적 실패

    Notes:
        - closed_form_preferred: 구간별 선형 신호는 정확 계산, 그 외는 합성 중점법
        - composite: 항상 합성 중점법 (분자와 분모 모두 같은 규칙)
        - adaptive: k마다 scipy.integrate.quad
    """
    k_lo, k_hi = durrmeyer_range(n, f.a, f.b)
    full = ks is None
    ks = np.arange(k_lo, k_hi + 1) if full else np.asarray(ks, dtype=int).reshape(-1)
    if ks.size and (ks.min() < k_lo or ks.max() > k_hi):
        raise DomainError(f"셀 인덱스가 범위 [{k_lo}, {k_hi}] 밖입니다")

    pieces = f.linear_pieces()
    ks_float = ks.astype(float)

    if q.mode == 'adaptive':
        breaks = [] if pieces is None else list(pieces[0][1:-1])
        numerators = np.array([
            integrate_adaptive(
                _chi_adaptive(c, n, int(k), f), f.a, f.b, q.tol, q.limit,
                _cell_points(c, n, int(k), breaks)
            )
            for k in ks
        ])
        masses = cell_masses(c, n, ks_float, f.a, f.b, q)
        path = 'adaptive'
    elif q.mode == 'closed_form_preferred' and pieces is not None:
        numerators = _piecewise_numerators(c, n, ks_float, pieces)
        masses = cell_masses(c, n, ks_float, f.a, f.b, q)
        path = 'closed_form'
    else:
        all_num, all_den = _composite_integrals(c, f, n, k_lo, k_hi, q.panels)
        numerators = all_num[ks - k_lo]
        masses = all_den[ks - k_lo]
        path = 'composite'

    if np.any(masses <= 0.0):
        raise ZeroDenominator(f"셀 질량이 0입니다 (n={n}, χ={c.kind})")

    logger.debug(f"가중 평균 계산 ({path}): n={n}, k={len(ks)}개")
    means = np.clip(numerators / masses, 0.0, 1.0)
    return means, masses


def chi_weighted_mean(
        c: ChiKernel,
        f: Signal,
        n: int,
        k: int,
        q: QuadratureConfig = QuadratureConfig()
) -> float:
    """
    Durrmeyer 계수 ∫_a^b χ(nt−k)f(t)dt / ∫_a^b χ(nt−k)dt

    Examples:
        >>> from src.signals.representation import identity_signal
        >>> round(chi_weighted_mean(ChiKernel('hat'), identity_signal(), 2, 0), 12)
        0.166666666667
    """
    means, _ = weighted_means(c, f, n, np.array([k]), q)
    return float(means[0])


def kantorovich_means(
        f: Signal,
        n: int,
        ks: Optional[np.ndarray] = None,
        q: QuadratureConfig = QuadratureConfig()
) -> np.ndarray:
    """
    Kantorovich 셀 평균 벡터 n∫_{k/n}^{(k+1)/n} f(u)du

    신호의 정확한 원시함수를 사용하므로 구간별 상수 신호의 경계가
    셀 안에 있어도 정확합니다.
    """
    k_lo, k_hi = kantorovich_range(n, f.a, f.b)
    ks = np.arange(k_lo, k_hi + 1) if ks is None else np.asarray(ks, dtype=int).reshape(-1)
    if ks.size and (ks.min() < k_lo or ks.max() > k_hi):
        raise DomainError(f"셀 인덱스가 Kantorovich 범위 [{k_lo}, {k_hi}] 밖입니다")

    if q.mode == 'adaptive':
        pieces = f.linear_pieces()
        breaks = [] if pieces is None else list(pieces[0][1:-1])
        means = np.array([
            n * integrate_adaptive(f, k / n, (k + 1) / n, q.tol, q.limit, breaks)
            for k in ks
        ])
    else:
        ks_float = ks.astype(float)
        means = n * f.integral(ks_float / n, (ks_float + 1.0) / n)

    return np.clip(means, 0.0, 1.0)


def kantorovich_mean(
        f: Signal,
        n: int,
        k: int,
        q: QuadratureConfig = QuadratureConfig()
) -> float:
    """
    Kantorovich 셀 평균 n∫_{k/n}^{(k+1)/n} f(u)du

    Examples:
        >>> from src.signals.representation import piecewise_table1
        >>> round(kantorovich_mean(piecewise_table1(), 200, 30), 12)
        0.72
    """
    return float(kantorovich_means(f, n, np.array([k]), q)[0])
