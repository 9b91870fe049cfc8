"""
커널 모듈

max-min 신경망 연산자에 필요한 활성화 함수와 커널을 계산합니다.
- Sigmoid: 시그모이드 활성화 함수 (logistic, tanh, step, ramp)
- BellKernel: 중심 종형 커널 φ_σ(x) = ½(σ(s(x+1)) − σ(s(x−1)))
- ChiKernel: Durrmeyer 계수용 평균화 커널 χ (rational, hat)
- KernelConstants: 𝒜, ‖χ‖₁, M₀, M̃₁, m_β 모멘트 상수
"""

import math
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Sequence, Union

import numpy as np
from scipy.special import expit

from src.utils.errors import DomainError, NonIntegrable, ZeroDenominator

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

SIGMOID_KINDS = ('logistic', 'tanh', 'step', 'ramp')
CHI_KINDS = ('rational', 'hat')

# (Σ3) 감쇠 지수 기본값: 매끄러운 함수는 모든 α>0 허용, step/ramp는 −∞에서 0
_DEFAULT_ALPHA = {
    'logistic': 1.0,
    'tanh': 1.0,
    'step': 5.0,
    'ramp': 5.0,
}

# 행렬 연산 한 번에 허용하는 원소 수
_MAX_BLOCK = 2_000_000


def _as_output(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


@dataclass(frozen=True)
class Sigmoid:
    """
    시그모이드 활성화 함수

    Attributes:
        kind: 'logistic' | 'tanh' | 'step' | 'ramp'
        slope: 기울기 (σ(slope·x)로 평가)
        alpha: (Σ3) 조건의 감쇠 지수 α (None이면 종류별 기본값)
    """
    kind: str = 'logistic'
    slope: float = 1.0
    alpha: Optional[float] = None

    def __post_init__(self):
        """초기화 후 검증 및 기본값 설정"""
        if self.kind not in SIGMOID_KINDS:
            raise DomainError(
                f"지원하지 않는 시그모이드 종류: {self.kind}. 사용 가능: {SIGMOID_KINDS}"
            )
        if not self.slope > 0:
            raise DomainError(f"slope는 양수여야 합니다: {self.slope}")
        if self.alpha is None:
            object.__setattr__(self, 'alpha', _DEFAULT_ALPHA[self.kind])
        elif not self.alpha > 0:
            raise DomainError(f"alpha는 양수여야 합니다: {self.alpha}")

    @property
    def smooth(self) -> bool:
        """연속 미분 가능한 종류인지 여부"""
        return self.kind in ('logistic', 'tanh')

    def __call__(self, x: ArrayLike):
        return sigmoid_eval(self, x)


def sigmoid_eval(s: Sigmoid, x: ArrayLike):
    """
    시그모이드 함수 값 계산

    Args:
        s: Sigmoid 설정
        x: 입력 값 (스칼라 또는 배열)

    Returns:
        float | np.ndarray: [0,1] 범위의 σ(slope·x)

    Examples:
        >>> sigmoid_eval(Sigmoid('logistic'), 0.0)
        0.5
        >>> sigmoid_eval(Sigmoid('ramp'), 0.25)
        0.75

    Notes:
        - tanh 종류는 σ_h(x) = ½(tanh x + 1)이며 수치적으로 동일한 expit(2x)로 계산
          (큰 음수 x에서 1 − tanh 소거 오차 방지)
        - step: x < −1/2 → 0, |x| ≤ 1/2 → 1/2, x > 1/2 → 1
        - ramp: [−1/2, 1/2]에서 x + 1/2
    """
    scalar = np.ndim(x) == 0
    y = s.slope * np.asarray(x, dtype=float)

    if s.kind == 'logistic':
        values = expit(y)
    elif s.kind == 'tanh':
        values = expit(2.0 * y)
    elif s.kind == 'step':
        values = np.where(y < -0.5, 0.0, np.where(y > 0.5, 1.0, 0.5))
    else:
        values = np.clip(y + 0.5, 0.0, 1.0)

    return _as_output(values, scalar)


@dataclass(frozen=True)
class BellKernel:
    """
    중심 종형 커널 φ_σ

    Attributes:
        sigmoid: 활성화 함수
        shift_scale: 스케일 s (이론은 s=1, 잡음 실험은 s=0.05)
    """
    sigmoid: Sigmoid = field(default_factory=Sigmoid)
    shift_scale: float = 1.0

    def __post_init__(self):
        if not self.shift_scale > 0:
            raise DomainError(f"shift_scale은 양수여야 합니다: {self.shift_scale}")

    @property
    def alpha(self) -> float:
        return self.sigmoid.alpha

    def __call__(self, x: ArrayLike):
        return phi_eval(self, x)


def phi_eval(b: BellKernel, x: ArrayLike):
    """
    종형 커널 값 φ(x) = ½(σ(s(x+1)) − σ(s(x−1))) 계산

    Args:
        b: BellKernel
        x: 입력 값 (스칼라 또는 배열)

    Returns:
        float | np.ndarray: [0, 1/2] 범위의 커널 값

    Examples:
        >>> phi_eval(BellKernel(Sigmoid('ramp')), 0.0)
        0.5
        >>> round(phi_eval(BellKernel(), 2.0), 6)
        0.110757

    Notes:
        - φ는 짝함수이므로 −|x|에서 평가 (큰 |x|에서 1에 가까운 두 값의 차 대신
          0에 가까운 두 값의 차를 사용)
        - 음수 반올림 오차는 0으로 절단
    """
    scalar = np.ndim(x) == 0
    u = -np.abs(np.asarray(x, dtype=float))
    s = b.shift_scale
    values = 0.5 * (
        sigmoid_eval(b.sigmoid, s * (u + 1.0)) - sigmoid_eval(b.sigmoid, s * (u - 1.0))
    )
    values = np.maximum(values, 0.0)
    return _as_output(values, scalar)


def guard_denominator(maxima: np.ndarray, context: str) -> None:
    if np.any(maxima <= 0.0):
        raise ZeroDenominator(
            f"⋁φ(nx−k)가 0입니다 ({context}). "
            "컴팩트 지지 커널(step/ramp)은 s를 줄이거나 n을 키워야 합니다."
        )


def phi_max_over_cells(
        b: BellKernel,
        n: int,
        x: ArrayLike,
        k_lo: int,
        k_hi: int
):
    """
    셀 범위에서 커널 최댓값 ⋁_{k=k_lo}^{k_hi} φ(nx−k) 계산

    φ가 [0,∞)에서 비증가하는 짝함수이므로 nx에 가장 가까운 두 정수 k만
    (범위로 절단하여) 비교하면 충분합니다.

    Args:
        b: BellKernel
        n: 연산자 차수
        x: 평가 점 (스칼라 또는 배열)
        k_lo: 셀 인덱스 하한
        k_hi: 셀 인덱스 상한

    Returns:
        float | np.ndarray: 최댓값 (양수)

    Raises:
        DomainError: k_lo > k_hi
        ZeroDenominator: 최댓값이 0인 경우
    """
    if k_lo > k_hi:
        raise DomainError(f"k_lo({k_lo})가 k_hi({k_hi})보다 큽니다")

    scalar = np.ndim(x) == 0
    nx = n * np.asarray(x, dtype=float)
    lower = np.clip(np.floor(nx), k_lo, k_hi)
    upper = np.clip(np.ceil(nx), k_lo, k_hi)
    maxima = np.maximum(phi_eval(b, nx - lower), phi_eval(b, nx - upper))

    guard_denominator(np.atleast_1d(maxima), f"n={n}, k∈[{k_lo},{k_hi}]")
    return _as_output(maxima, scalar)


def partition_sum(b: BellKernel, x: ArrayLike, trunc: int):
    """
    절단된 단위분할 합 Σ_{|k|≤trunc} φ(x−k)

    Returns:
        float | np.ndarray: trunc가 커질수록 1로 수렴
    """
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ks = np.arange(-trunc, trunc + 1, dtype=float)
    total = phi_eval(b, xs[:, None] - ks[None, :]).sum(axis=1)
    return _as_output(total[0] if scalar else total, scalar)


def phi_tail_sup(b: BellKernel, n: int, delta: float) -> float:
    """
    꼬리 상한 sup_{|u| > nδ} φ(u)

    φ가 [0,∞)에서 비증가하므로 nδ 바로 오른쪽 값이 상한입니다.

    Args:
        b: BellKernel
        n: 연산자 차수
        delta: 양수 δ

    Returns:
        float: 꼬리 상한 (n이 커질수록 O(n^{−(1+α)})로 감소)
    """
    if not delta > 0:
        raise DomainError(f"delta는 양수여야 합니다: {delta}")
    radius = np.nextafter(n * delta, np.inf)
    return float(phi_eval(b, radius))


def m_beta(
        b: BellKernel,
        beta: float,
        trunc: int = 50,
        grid_step: float = 1.0e-3
) -> float:
    """
    일반화 절대 모멘트 m_β(φ) = sup_x ⋁_k φ(x−k)|x−k|^β 계산

    정의식이 정수 평행이동에 불변이므로 x ∈ [0,1) 격자에서만 sup을 취합니다.

    Args:
        b: BellKernel
        beta: 차수 β (> 0)
        trunc: |k| ≤ trunc 절단 반경
        grid_step: x 격자 간격

    Returns:
        float: 절단된 추정치 (호출자가 trunc를 키워 안정성 확인)

    Examples:
        >>> m_beta(BellKernel(Sigmoid('ramp')), 1.0)
        0.28125
    """
    if not beta > 0:
        raise DomainError(f"beta는 양수여야 합니다: {beta}")

    xs = np.arange(0.0, 1.0, grid_step)
    ks = np.arange(-trunc, trunc + 1, dtype=float)
    rows = max(1, _MAX_BLOCK // len(ks))

    best = 0.0
    for start in range(0, len(xs), rows):
        u = xs[start:start + rows, None] - ks[None, :]
        values = phi_eval(b, u) * np.abs(u) ** beta
        best = max(best, float(values.max()))
    return best


def stable_m_beta(
        b: BellKernel,
        beta: float,
        grid_step: float = 1.0e-3,
        rtol: float = 1.0e-9,
        initial_trunc: int = 8,
        max_trunc: int = 4096
) -> float:
    """
    상대 변화가 rtol 미만이 될 때까지 절단 반경을 두 배씩 늘려 m_β 계산

    Returns:
        float: 안정화된 m_β
    """
    trunc = initial_trunc
    previous = m_beta(b, beta, trunc, grid_step)
    while trunc < max_trunc:
        trunc *= 2
        current = m_beta(b, beta, trunc, grid_step)
        if abs(current - previous) <= rtol * max(abs(current), 1e-300):
            logger.debug(f"m_β(β={beta}) 수렴: trunc={trunc}, 값={current:.12g}")
            return current
        previous = current

    logger.warning(f"m_β(β={beta})가 max_trunc={max_trunc}에서 안정화되지 않았습니다")
    return previous


@dataclass(frozen=True)
class ChiKernel:
    """
    평균화 커널 χ

    Attributes:
        kind: 'rational' (χ(x) = 1/(1+c·x²)) 또는 'hat' (χ(x) = max(0, 1−|x|))
        c: rational 종류의 폭 매개변수 (hat에서는 무시)
    """
    kind: str = 'rational'
    c: float = 1.0

    def __post_init__(self):
        if self.kind not in CHI_KINDS:
            raise DomainError(f"지원하지 않는 χ 종류: {self.kind}. 사용 가능: {CHI_KINDS}")
        if self.kind == 'rational' and not self.c > 0:
            raise DomainError(f"rational χ의 c는 양수여야 합니다: {self.c}")

    @property
    def compact(self) -> bool:
        return self.kind == 'hat'

    def __call__(self, x: ArrayLike):
        return chi_eval(self, x)

    def antiderivative(self, u: ArrayLike) -> np.ndarray:
        """
        χ의 원시함수 Φ(u) (차이만 의미가 있음)

        rational: arctan(√c·u)/√c, hat: 구간별 2차식 (Φ(−∞)=0, Φ(∞)=1)
        """
        u = np.asarray(u, dtype=float)
        if self.kind == 'rational':
            root = math.sqrt(self.c)
            return np.arctan(root * u) / root

        v = np.clip(u, -1.0, 1.0)
        return np.where(v <= 0.0, 0.5 * (1.0 + v) ** 2, 1.0 - 0.5 * (1.0 - v) ** 2)

    def first_moment_antiderivative(self, u: ArrayLike) -> np.ndarray:
        """
        u·χ(u)의 원시함수 Ψ(u)

        rational: ln(1+c·u²)/(2c), hat: 구간별 3차식 (|u| ≥ 1에서 0)
        """
        u = np.asarray(u, dtype=float)
        if self.kind == 'rational':
            return np.log1p(self.c * u * u) / (2.0 * self.c)

        v = np.clip(u, -1.0, 1.0)
        left = v * v / 2.0 + v ** 3 / 3.0 - 1.0 / 6.0
        right = -1.0 / 6.0 + v * v / 2.0 - v ** 3 / 3.0
        return np.where(v <= 0.0, left, right)


def chi_eval(c: ChiKernel, x: ArrayLike):
    """
    평균화 커널 값 χ(x)

    Examples:
        >>> chi_eval(ChiKernel('rational', 1.0), 1.0)
        0.5
        >>> chi_eval(ChiKernel('hat'), 0.25)
        0.75
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if c.kind == 'rational':
        values = 1.0 / (1.0 + c.c * x * x)
    else:
        values = np.maximum(0.0, 1.0 - np.abs(x))
    return _as_output(values, scalar)


@dataclass
class KernelConstants:
    """
    커널 상수 묶음

    Attributes:
        A: 𝒜 = ∫₀¹ χ(u)du
        l1_norm: ‖χ‖₁
        M0: 이산 0차 절대 모멘트 sup_t Σ_k χ(t−k)
        M1_tilde: 연속 1차 절대 모멘트 ∫χ(u)|u|du (발산 시 math.inf)
        m_beta: β → m_β(φ_σ) 표
    """
    A: float
    l1_norm: float
    M0: float
    M1_tilde: float
    m_beta: Dict[float, float] = field(default_factory=dict)

    def require_finite(self, name: str) -> float:
        """
        유한해야 하는 상수 반환

        Raises:
            NonIntegrable: 값이 +∞ 표식인 경우
        """
        value = getattr(self, name)
        if math.isinf(value):
            raise NonIntegrable(f"{name}이(가) 발산합니다 (+∞). 유한 모멘트 χ(hat)를 사용하세요.")
        return value


def lattice_sum_sup(c: ChiKernel, trunc: int, grid_step: float = 1.0e-3) -> float:
    """
    격자 합의 상한 sup_{t∈[0,1)} Σ_{|k|≤trunc} χ(t−k) 수치 계산

    Returns:
        float: M₀(χ)의 절단 추정치 (아래에서 수렴)
    """
    ts = np.arange(0.0, 1.0, grid_step)
    ks = np.arange(-trunc, trunc + 1, dtype=float)
    rows = max(1, _MAX_BLOCK // len(ks))

    best = 0.0
    for start in range(0, len(ts), rows):
        sums = chi_eval(c, ts[start:start + rows, None] - ks[None, :]).sum(axis=1)
        best = max(best, float(sums.max()))
    return best


@lru_cache(maxsize=64)
def chi_constants(
        c: ChiKernel,
        trunc: int = 64,
        grid_step: float = 1.0e-3
) -> KernelConstants:
    """
    χ 커널 상수 계산

    Args:
        c: ChiKernel
        trunc: 격자 합 절단 반경 (컴팩트 지지 커널의 M₀ 계산에 사용)
        grid_step: t 격자 간격

    Returns:
        KernelConstants: 𝒜, ‖χ‖₁, M₀, M̃₁ (m_β 표는 비어 있음)

    Examples:
        >>> k = chi_constants(ChiKernel('hat'))
        >>> (k.A, k.l1_norm, k.M0)
        (0.5, 1.0, 1.0)

    Notes:
        - rational: 𝒜 = arctan(√c)/√c, ‖χ‖₁ = π/√c,
          M₀ = (π/√c)·coth(π/√c) (격자 합 항등식), M̃₁ = +∞ (로그 발산)
        - hat: 𝒜 = 1/2, ‖χ‖₁ = 1, M̃₁ = 1/3, M₀는 격자 합 상한
    """
    if c.kind == 'rational':
        root = math.sqrt(c.c)
        A = math.atan(root) / root
        l1_norm = math.pi / root
        M0 = (math.pi / root) / math.tanh(math.pi / root)
        M1_tilde = math.inf
    else:
        A = 0.5
        l1_norm = 1.0
        M0 = lattice_sum_sup(c, trunc, grid_step)
        M1_tilde = 1.0 / 3.0

    logger.debug(
        f"χ 상수 계산 완료 ({c.kind}, c={c.c}): "
        f"A={A:.6g}, ‖χ‖₁={l1_norm:.6g}, M0={M0:.6g}, M̃₁={M1_tilde}"
    )
    return KernelConstants(A=A, l1_norm=l1_norm, M0=M0, M1_tilde=M1_tilde)


def kernel_constants(
        c: ChiKernel,
        bell: Optional[BellKernel] = None,
        betas: Sequence[float] = (),
        grid_step: float = 1.0e-3,
        rtol: float = 1.0e-9,
        initial_trunc: int = 8,
        max_trunc: int = 4096
) -> KernelConstants:
    """
    χ 상수에 φ_σ의 m_β 표를 더한 KernelConstants 생성

    Args:
        c: ChiKernel
        bell: m_β를 계산할 BellKernel (없으면 표 생략)
        betas: 계산할 β 목록
        grid_step: 격자 간격
        rtol: m_β 안정성 허용 오차
        initial_trunc: m_β 시작 절단 반경
        max_trunc: m_β 절단 반경 상한

    Returns:
        KernelConstants: 새 객체 (캐시된 χ 상수는 변경하지 않음)
    """
    base = chi_constants(c, grid_step=grid_step)
    table = {}
    if bell is not None:
        for beta in betas:
            table[float(beta)] = stable_m_beta(
                bell, beta, grid_step=grid_step, rtol=rtol,
                initial_trunc=initial_trunc, max_trunc=max_trunc,
            )
    return KernelConstants(
        A=base.A,
        l1_norm=base.l1_norm,
        M0=base.M0,
        M1_tilde=base.M1_tilde,
        m_beta=table,
    )
