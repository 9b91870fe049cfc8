"""
max-min 신경망 연산자 모듈

다섯 가지 연산자 계열과 보수 이중 적용(1 − Op(1 − Op))을 제공합니다.

계열:
    - maxmin_sampling (F):     ⋁_k f(k/n) ∧ φ(nx−k)/⋁_d φ(nx−d)
    - maxmin_kantorovich (K):  ⋁_k n∫_{k/n}^{(k+1)/n} f ∧ (정규화 가중치)
    - maxmin_durrmeyer (D):    ⋁_k [∫χ(nt−k)f / ∫χ(nt−k)] ∧ (정규화 가중치)
    - linear_sampling (LF):    Σ_k f(k/n)φ(nx−k) / Σ_k φ(nx−k)
    - linear_durrmeyer (LD):   Σ_k (∫χ(nt−k)f)φ(nx−k) / Σ_k (∫χ(nt−k))φ(nx−k)

계수는 (설정, 신호)마다 한 번만 계산하여 모든 평가 점에서 재사용하고,
평가 점은 블록으로 나누어 스레드 풀에서 병렬 처리합니다.
"""

import os
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from src.approximation.kernels import BellKernel, ChiKernel, guard_denominator, phi_eval
from src.approximation.maxmin import max_of_meets, vmax, vmin
from src.approximation.quadrature import (
    QuadratureConfig,
    durrmeyer_range,
    kantorovich_means,
    kantorovich_range,
    lattice_ceil,
    lattice_floor,
    weighted_means,
)
from src.signals.representation import Signal, sampled_signal, uniform_grid
from src.utils.errors import DomainError, ZeroDenominator

logger = logging.getLogger(__name__)

FAMILIES = (
    'maxmin_sampling',
    'maxmin_kantorovich',
    'maxmin_durrmeyer',
    'linear_sampling',
    'linear_durrmeyer',
)

FAMILY_CODES = {
    'F': 'maxmin_sampling',
    'K': 'maxmin_kantorovich',
    'D': 'maxmin_durrmeyer',
    'LF': 'linear_sampling',
    'LD': 'linear_durrmeyer',
}

MAXMIN_FAMILIES = ('maxmin_sampling', 'maxmin_kantorovich', 'maxmin_durrmeyer')
DURRMEYER_FAMILIES = ('maxmin_durrmeyer', 'linear_durrmeyer')

# 평가 블록 하나의 가중치 행렬 원소 수 상한
_MAX_BLOCK = 2_000_000

# 정의역 끝점 비교 허용 오차
_EDGE_TOL = 1.0e-12


def resolve_family(name: str) -> str:
    """
    계열 이름 또는 코드(F, K, D, LF, LD)를 정식 이름으로 변환

    Raises:
        DomainError: 알 수 없는 계열
    """
    key = name.strip()
    if key.upper() in FAMILY_CODES:
        return FAMILY_CODES[key.upper()]
    if key in FAMILIES:
        return key
    raise DomainError(
        f"알 수 없는 연산자 계열: {name}. 사용 가능: {sorted(FAMILY_CODES)} 또는 {FAMILIES}"
    )


def family_code(family: str) -> str:
    """정식 계열 이름 → 코드"""
    for code, name in FAMILY_CODES.items():
        if name == family:
            return code
    raise DomainError(f"알 수 없는 연산자 계열: {family}")


def resolve_threads(threads: Optional[int]) -> int:
    """워커 수 결정 (0 또는 None이면 머신 코어 수)"""
    if not threads:
        return os.cpu_count() or 1
    if threads < 0:
        raise DomainError(f"threads는 0 이상이어야 합니다: {threads}")
    return int(threads)


@dataclass(frozen=True)
class OperatorConfig:
    """
    연산자 설정

    Attributes:
        family: 연산자 계열 (정식 이름 또는 코드)
        n: 연산자 차수 (≥ 1)
        bell: 종형 커널 φ_σ
        chi: 평균화 커널 χ (Durrmeyer 계열 필수)
        quad: 구적 설정
        threads: 평가 워커 수 (0이면 머신 코어 수)
    """
    family: str
    n: int
    bell: BellKernel = field(default_factory=BellKernel)
    chi: Optional[ChiKernel] = None
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    threads: int = 0

    def __post_init__(self):
        """초기화 후 검증"""
        object.__setattr__(self, 'family', resolve_family(self.family))

        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n은 1 이상의 정수여야 합니다: {self.n}")
        object.__setattr__(self, 'n', int(self.n))

        if self.family in DURRMEYER_FAMILIES and self.chi is None:
            raise DomainError(f"{self.family} 계열은 χ 커널이 필요합니다")
        if self.threads < 0:
            raise DomainError(f"threads는 0 이상이어야 합니다: {self.threads}")

    @property
    def is_maxmin(self) -> bool:
        return self.family in MAXMIN_FAMILIES

    @property
    def code(self) -> str:
        return family_code(self.family)

    def with_family(self, family: str) -> 'OperatorConfig':
        """계열만 바꾼 새 설정"""
        return OperatorConfig(
            family=family,
            n=self.n,
            bell=self.bell,
            chi=self.chi,
            quad=self.quad,
            threads=self.threads,
        )


@dataclass(frozen=True)
class CoefficientVector:
    """
    셀별 계수 (표본값 / 셀 평균 / χ 가중 평균)

    Attributes:
        k_lo: 첫 셀 인덱스
        k_hi: 마지막 셀 인덱스
        values: 계수 (읽기 전용, [0,1])
        masses: 셀 질량 ∫χ(nt−k)dt (Durrmeyer 계열만)
    """
    k_lo: int
    k_hi: int
    values: np.ndarray
    masses: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if len(values) != self.k_hi - self.k_lo + 1:
            raise DomainError(
                f"계수 길이({len(values)})가 셀 범위 [{self.k_lo}, {self.k_hi}]와 맞지 않습니다"
            )
        if values.size and (vmin(values) < 0.0 or vmax(values) > 1.0):
            raise DomainError("계수는 [0,1] 범위여야 합니다")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

        if self.masses is not None:
            masses = np.array(self.masses, dtype=float).reshape(-1)
            if len(masses) != len(values):
                raise DomainError("셀 질량 길이가 계수 길이와 다릅니다")
            masses.setflags(write=False)
            object.__setattr__(self, 'masses', masses)

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_lo, self.k_hi + 1)

    def __len__(self) -> int:
        return len(self.values)


def cell_range(cfg: OperatorConfig, a: float, b: float) -> Tuple[int, int]:
    """
    계열별 셀 인덱스 범위

    Returns:
        Tuple[int, int]: sampling ⌈na⌉..⌊nb⌋, Kantorovich ⌈na⌉..⌊nb⌋−1,
            Durrmeyer na..nb−1
    """
    n = cfg.n
    if cfg.family in DURRMEYER_FAMILIES:
        return durrmeyer_range(n, a, b)
    if cfg.family == 'maxmin_kantorovich':
        return kantorovich_range(n, a, b)
    return lattice_ceil(n * a), lattice_floor(n * b)


def coefficients(cfg: OperatorConfig, f: Signal) -> CoefficientVector:
    """
    계열에 맞는 계수 벡터 계산

    Args:
        cfg: 연산자 설정
        f: [a,b] 위의 [0,1] 값 신호

    Returns:
        CoefficientVector: 셀별 계수

    Raises:
        DomainError: Durrmeyer 계열의 비정수 끝점, 빈 셀 범위
        ZeroDenominator: 셀 질량이 0인 경우
        QuadratureFailure: 적응 구적 실패

    Examples:
        >>> from src.signals.representation import constant_signal
        >>> cv = coefficients(OperatorConfig('F', 5), constant_signal(0.3))
        >>> len(cv), set(cv.values.tolist())
        (6, {0.3})
    """
    try:
        k_lo, k_hi = cell_range(cfg, f.a, f.b)
        if k_lo > k_hi:
            raise DomainError(
                f"n={cfg.n}에서 [{f.a}, {f.b}]에 셀이 없습니다. n을 키우세요."
            )
        ks = np.arange(k_lo, k_hi + 1)
        masses = None

        if cfg.family in ('maxmin_sampling', 'linear_sampling'):
            values = f(np.clip(ks / cfg.n, f.a, f.b))
        elif cfg.family == 'maxmin_kantorovich':
            values = kantorovich_means(f, cfg.n, ks, cfg.quad)
        else:
            values, masses = weighted_means(cfg.chi, f, cfg.n, ks, cfg.quad)

        logger.info(f"계수 계산 완료: {cfg.code}, n={cfg.n}, k={k_lo}..{k_hi}")
        return CoefficientVector(k_lo, k_hi, np.clip(values, 0.0, 1.0), masses)

    except Exception as e:
        logger.error(f"계수 계산 실패 ({cfg.family}, n={cfg.n}): {e}")
        raise


def _evaluate_block(cfg: OperatorConfig, coeffs: CoefficientVector, xs: np.ndarray) -> np.ndarray:
    weights = phi_eval(cfg.bell, cfg.n * xs[:, None] - coeffs.ks[None, :])
    c = coeffs.values

    if cfg.is_maxmin:
        maxima = vmax(weights, axis=1)
        guard_denominator(maxima, f"n={cfg.n}, k∈[{coeffs.k_lo},{coeffs.k_hi}]")
        return np.clip(max_of_meets(c, weights / maxima[:, None]), 0.0, 1.0)

    if cfg.family == 'linear_sampling':
        numerator = weights @ c
        denominator = weights.sum(axis=1)
    else:
        numerator = weights @ (coeffs.masses * c)
        denominator = weights @ coeffs.masses

    if np.any(denominator <= 0.0):
        raise ZeroDenominator(f"선형 연산자 분모가 0입니다 (n={cfg.n})")
    return numerator / denominator


def evaluate_coefficients(
        cfg: OperatorConfig,
        coeffs: CoefficientVector,
        xs: Sequence[float]
) -> np.ndarray:
    """
    미리 계산한 계수로 연산자 평가

    평가 점을 블록(행 × 셀 ≤ 2·10⁶)으로 나누어 스레드 풀에서 계산합니다.
    블록 경계는 셀 개수에만 의존하므로 워커 수와 무관하게 결과가 같습니다.

    Args:
        cfg: 연산자 설정
        coeffs: coefficients()의 결과
        xs: 평가 점

    Returns:
        np.ndarray: 연산자 값
    """
    xs = np.asarray(xs, dtype=float).reshape(-1)
    if xs.size == 0:
        return np.empty(0)
    if cfg.family == 'linear_durrmeyer' and coeffs.masses is None:
        raise DomainError("linear_durrmeyer 평가에는 셀 질량이 필요합니다")

    rows = max(1, _MAX_BLOCK // len(coeffs))
    blocks = [xs[start:start + rows] for start in range(0, len(xs), rows)]
    workers = min(resolve_threads(cfg.threads), len(blocks))
    logger.debug(f"연산자 평가: {cfg.code}, 점 {len(xs)}개, 블록 {len(blocks)}개, 워커 {workers}개")

    if workers == 1:
        results = [_evaluate_block(cfg, coeffs, block) for block in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda block: _evaluate_block(cfg, coeffs, block), blocks))

    return np.concatenate(results)


def evaluate(
        cfg: OperatorConfig,
        f: Signal,
        xs: Sequence[float],
        coeffs: Optional[CoefficientVector] = None
) -> np.ndarray:
    """
    연산자 Op_n(f; x) 평가

    Args:
        cfg: 연산자 설정
        f: 신호
        xs: [a,b] 안의 평가 점
        coeffs: 미리 계산한 계수 (없으면 계산)

    Returns:
        np.ndarray: 연산자 값 (max-min 계열은 [0,1])

    Raises:
        DomainError: 정의역 밖의 x
        ZeroDenominator: ⋁φ(nx−k) = 0 (컴팩트 지지 커널)

    Examples:
        >>> from src.signals.representation import constant_signal
        >>> cfg = OperatorConfig('D', 10, chi=ChiKernel('hat'))
        >>> evaluate(cfg, constant_signal(0.4), [0.0, 0.5, 1.0]).round(12).tolist()
        [0.4, 0.4, 0.4]
    """
    try:
        xs = np.asarray(xs, dtype=float).reshape(-1)
        if xs.size and (xs.min() < f.a - _EDGE_TOL or xs.max() > f.b + _EDGE_TOL):
            raise DomainError(
                f"평가 점이 정의역 [{f.a}, {f.b}] 밖에 있습니다 "
                f"(min={xs.min():.6g}, max={xs.max():.6g})"
            )
        if coeffs is None:
            coeffs = coefficients(cfg, f)
        return evaluate_coefficients(cfg, coeffs, np.clip(xs, f.a, f.b))

    except Exception as e:
        logger.error(f"연산자 평가 실패 ({cfg.family}, n={cfg.n}): {e}")
        raise


def noisy_signal(
        noisy: Sequence[float],
        domain: Tuple[float, float] = (0.0, 1.0),
        interpolation: str = 'step'
) -> Tuple[Signal, np.ndarray]:
    """
    균등 격자 표본을 신호로 감싸기

    Returns:
        Tuple[Signal, np.ndarray]: ([0,1]로 절단한 보간 신호, 표본 격자)
    """
    samples = np.asarray(noisy, dtype=float).reshape(-1)
    if samples.size < 2:
        raise DomainError(f"표본은 2개 이상이어야 합니다: {samples.size}")
    grid = uniform_grid(domain[0], domain[1], samples.size)
    return sampled_signal(grid, np.clip(samples, 0.0, 1.0), interpolation), grid


def denoise(
        cfg: OperatorConfig,
        noisy: Sequence[float],
        domain: Tuple[float, float] = (0.0, 1.0),
        interpolation: str = 'step'
) -> np.ndarray:
    """
    잡음 표본을 연산자로 필터링

    Args:
        cfg: 연산자 설정
        noisy: [a,b] 균등 격자 위의 표본 (2개 이상)
        domain: 정의역 (a, b)
        interpolation: 표본 보간 ('step' 기본, 'linear')

    Returns:
        np.ndarray: 같은 격자 위의 필터링 결과
    """
    signal, grid = noisy_signal(noisy, domain, interpolation)
    logger.debug(f"필터링: {cfg.code}, n={cfg.n}, 표본 {len(grid)}개")
    return evaluate(cfg, signal, grid)


def complement_double_pass(
        cfg: OperatorConfig,
        noisy: Sequence[float],
        domain: Tuple[float, float] = (0.0, 1.0),
        interpolation: str = 'step'
) -> np.ndarray:
    """
    보수 이중 적용 1 − Op(1 − Op(noisy))

    첫 번째 적용이 pepper(0) 충격을 제거하고, 보수에 대한 두 번째 적용이
    남은 salt(1) 충격을 제거합니다. 중간 결과는 [0,1]로 절단합니다.

    Returns:
        np.ndarray: 필터링 결과
    """
    first = np.clip(denoise(cfg, noisy, domain, interpolation), 0.0, 1.0)
    second = np.clip(denoise(cfg, 1.0 - first, domain, interpolation), 0.0, 1.0)
    return 1.0 - second
