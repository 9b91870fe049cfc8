"""
신호 표현 모듈

[a,b] 위에서 [0,1] 값을 갖는 신호를 표현합니다.
- PiecewiseConstant: 구간별 상수 (오른쪽 닫힌 구간 규약)
- PiecewiseLinear: 구간별 선형 (표본 선형 보간)
- SineWave: 닫힌 형태 사인파 offset + amplitude·sin(2π·frequency·x)
- sampled_signal: 표본값을 step/linear 보간 신호로 변환
- normalize_unit / AffineMap: 유계 신호를 [0,1]로 정규화

모든 신호는 정확한 부분 적분 integral(lo, hi)을 제공하며,
구간별 선형 신호는 linear_pieces()로 (경계, 절편, 기울기)를 노출합니다.
"""

import math
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

# 정의역 끝점 비교 허용 오차
_EDGE_TOL = 1.0e-12

INTERPOLATIONS = ('step', 'linear')


def _check_unit_range(values: np.ndarray, what: str) -> None:
    if values.size and (np.any(~np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0):
        raise DomainError(
            f"{what} 값은 [0,1] 범위여야 합니다 "
            f"(min={np.nanmin(values):.6g}, max={np.nanmax(values):.6g}). "
            "normalize_unit으로 먼저 정규화하세요."
        )


class Signal(ABC):
    """
    [a,b] → [0,1] 신호의 기본 클래스

    Attributes:
        a: 정의역 왼쪽 끝
        b: 정의역 오른쪽 끝
    """

    def __init__(self, a: float, b: float):
        a, b = float(a), float(b)
        if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
            raise DomainError(f"정의역은 a < b 여야 합니다: [{a}, {b}]")
        self.a = a
        self.b = b

    @property
    def domain(self) -> Tuple[float, float]:
        return self.a, self.b

    def _check_domain(self, x: np.ndarray) -> None:
        if x.size and (x.min() < self.a - _EDGE_TOL or x.max() > self.b + _EDGE_TOL):
            raise DomainError(
                f"평가 점이 정의역 [{self.a}, {self.b}] 밖에 있습니다 "
                f"(min={x.min():.6g}, max={x.max():.6g})"
            )

    def __call__(self, x: ArrayLike):
        return eval_signal(self, x)

    @abstractmethod
    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        """정의역 검사를 통과한 점에서 값 계산"""

    @abstractmethod
    def antiderivative(self, x: np.ndarray) -> np.ndarray:
        """F(x) = ∫_a^x f(t)dt (x는 [a,b] 안으로 절단됨)"""

    def integral(self, lo: ArrayLike, hi: ArrayLike):
        """
        ∫_lo^hi f(t)dt 정확 계산 (원소별)

        Args:
            lo: 적분 하한 (스칼라 또는 배열)
            hi: 적분 상한

        Returns:
            float | np.ndarray: 적분 값
        """
        scalar = np.ndim(lo) == 0 and np.ndim(hi) == 0
        lo = np.clip(np.asarray(lo, dtype=float), self.a, self.b)
        hi = np.clip(np.asarray(hi, dtype=float), self.a, self.b)
        values = self.antiderivative(hi) - self.antiderivative(lo)
        return float(values) if scalar else values

    def linear_pieces(self) -> Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
        """
        구간별 선형 표현 (edges, p, q): [edges_i, edges_{i+1}]에서 f(t) = p_i + q_i·t

        Returns:
            tuple | None: 구간별 선형이 아니면 None
        """
        return None


class _PiecewiseLinearBase(Signal):
    """(edges, p, q) 표현을 공유하는 구간별 다항식 신호"""

    def __init__(self, a: float, b: float, edges: np.ndarray, p: np.ndarray, q: np.ndarray):
        super().__init__(a, b)
        self._edges = edges
        self._p = p
        self._q = q
        # 각 조각 왼쪽 끝에서의 누적 적분
        widths_integral = p * np.diff(edges) + 0.5 * q * (edges[1:] ** 2 - edges[:-1] ** 2)
        self._cumulative = np.concatenate(([0.0], np.cumsum(widths_integral)))

    def antiderivative(self, x: np.ndarray) -> np.ndarray:
        x = np.clip(np.asarray(x, dtype=float), self.a, self.b)
        idx = np.clip(np.searchsorted(self._edges, x, side='right') - 1, 0, len(self._p) - 1)
        left = self._edges[idx]
        return (
            self._cumulative[idx]
            + self._p[idx] * (x - left)
            + 0.5 * self._q[idx] * (x * x - left * left)
        )

    def linear_pieces(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._edges, self._p, self._q


class PiecewiseConstant(_PiecewiseLinearBase):
    """
    구간별 상수 신호

    breakpoints β_1 < … < β_r (모두 (a,b) 내부), values v_0..v_r에 대해
    x ∈ [a, β_1] → v_0, x ∈ (β_i, β_{i+1}] → v_i (오른쪽 닫힌 구간)

    Examples:
        >>> f = piecewise_table1()
        >>> f(0.15), f(0.150001)
        (0.25, 0.72)
    """

    def __init__(
            self,
            breakpoints: Sequence[float],
            values: Sequence[float],
            a: float = 0.0,
            b: float = 1.0
    ):
        breakpoints = np.asarray(breakpoints, dtype=float).reshape(-1)
        values = np.asarray(values, dtype=float).reshape(-1)

        if len(values) != len(breakpoints) + 1:
            raise DomainError(
                f"values 개수({len(values)})는 breakpoints 개수({len(breakpoints)}) + 1 이어야 합니다"
            )
        if len(breakpoints) > 1 and np.any(np.diff(breakpoints) <= 0):
            raise DomainError("breakpoints는 순증가해야 합니다")
        if len(breakpoints) and (breakpoints[0] <= a or breakpoints[-1] >= b):
            raise DomainError(f"breakpoints는 ({a}, {b}) 내부에 있어야 합니다")
        _check_unit_range(values, "구간별 상수 신호")

        self.breakpoints = breakpoints
        self.values = values
        edges = np.concatenate(([float(a)], breakpoints, [float(b)]))
        super().__init__(a, b, edges, values.copy(), np.zeros_like(values))

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.values[np.searchsorted(self.breakpoints, x, side='left')]

    def __repr__(self) -> str:
        return f"PiecewiseConstant(pieces={len(self.values)}, domain=[{self.a}, {self.b}])"


class PiecewiseLinear(_PiecewiseLinearBase):
    """
    구간별 선형 신호 (knots에서 values를 지나는 선형 보간)

    Attributes:
        knots: 순증가 절점 (첫 값 a, 마지막 값 b)
        values: 절점 값 ([0,1])
    """

    def __init__(self, knots: Sequence[float], values: Sequence[float]):
        knots = np.asarray(knots, dtype=float).reshape(-1)
        values = np.asarray(values, dtype=float).reshape(-1)

        if len(knots) < 2 or len(knots) != len(values):
            raise DomainError(
                f"절점은 2개 이상이고 값과 개수가 같아야 합니다 (knots={len(knots)}, values={len(values)})"
            )
        if np.any(np.diff(knots) <= 0):
            raise DomainError("절점은 순증가해야 합니다")
        _check_unit_range(values, "구간별 선형 신호")

        self.knots = knots
        self.values = values
        q = np.diff(values) / np.diff(knots)
        p = values[:-1] - q * knots[:-1]
        super().__init__(knots[0], knots[-1], knots, p, q)

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.interp(x, self.knots, self.values)

    def __repr__(self) -> str:
        return f"PiecewiseLinear(knots={len(self.knots)}, domain=[{self.a}, {self.b}])"


class SineWave(Signal):
    """
    사인파 신호 offset + amplitude·sin(2π·frequency·x)

    Examples:
        >>> g = sine_g()
        >>> round(g(1 / 16), 12)
        0.7
    """

    def __init__(
            self,
            offset: float = 0.45,
            amplitude: float = 0.25,
            frequency: float = 4.0,
            a: float = 0.0,
            b: float = 1.0
    ):
        super().__init__(a, b)
        if offset - abs(amplitude) < 0.0 or offset + abs(amplitude) > 1.0:
            raise DomainError(
                f"사인파 값이 [0,1]을 벗어납니다: offset={offset}, amplitude={amplitude}"
            )
        self.offset = float(offset)
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.offset + self.amplitude * np.sin(2.0 * np.pi * self.frequency * x)

    def antiderivative(self, x: np.ndarray) -> np.ndarray:
        x = np.clip(np.asarray(x, dtype=float), self.a, self.b)
        omega = 2.0 * np.pi * self.frequency
        if omega == 0.0:
            return self.offset * (x - self.a)
        return (
            self.offset * (x - self.a)
            - self.amplitude / omega * (np.cos(omega * x) - np.cos(omega * self.a))
        )

    def __repr__(self) -> str:
        return (
            f"SineWave(offset={self.offset}, amplitude={self.amplitude}, "
            f"frequency={self.frequency}, domain=[{self.a}, {self.b}])"
        )


def eval_signal(s: Signal, x: ArrayLike):
    """
    신호 값 계산

    Args:
        s: Signal
        x: 평가 점 (스칼라 또는 배열, [a,b] 안)

    Returns:
        float | np.ndarray: [0,1] 범위의 신호 값

    Raises:
        DomainError: x가 [a,b] 밖인 경우
    """
    scalar = np.ndim(x) == 0
    xs = np.asarray(x, dtype=float)
    s._check_domain(np.atleast_1d(xs))
    values = s._evaluate(np.clip(xs, s.a, s.b))
    return float(values) if scalar else np.asarray(values, dtype=float)


def constant_signal(c: float, a: float = 0.0, b: float = 1.0) -> PiecewiseConstant:
    """상수 신호 f ≡ c"""
    return PiecewiseConstant([], [c], a, b)


def piecewise_table1() -> PiecewiseConstant:
    """
    4구간 불연속 비교 함수 (0.25, 0.72, 0.35, 0.55; 경계 0.15, 0.4, 0.7)
    """
    return PiecewiseConstant([0.15, 0.4, 0.7], [0.25, 0.72, 0.35, 0.55], 0.0, 1.0)


def sine_g() -> SineWave:
    """g(x) = 0.45 + 0.25·sin(8πx) on [0,1]"""
    return SineWave(0.45, 0.25, 4.0, 0.0, 1.0)


def identity_signal(a: float = 0.0, b: float = 1.0) -> PiecewiseLinear:
    """f(x) = x ([a,b] ⊂ [0,1])"""
    return PiecewiseLinear([a, b], [a, b])


def sampled_signal(
        xs: Sequence[float],
        values: Sequence[float],
        interpolation: str = 'step'
) -> Signal:
    """
    표본값을 보간 신호로 변환

    Args:
        xs: 순증가 표본 위치 (정의역은 [xs[0], xs[-1]])
        values: [0,1] 범위 표본값
        interpolation: 'step' (최근접 표본, 기본값) 또는 'linear'

    Returns:
        Signal: step이면 PiecewiseConstant, linear면 PiecewiseLinear

    Raises:
        DomainError: 표본 수 < 2, 값 범위 위반, 보간 방식 오류

    Notes:
        - step 보간의 경계는 인접 표본 위치의 중점이며 중점 자체는 왼쪽 표본에 속함
          (모든 표본이 양의 길이 셀을 가지므로 충격 잡음이 적분에서 사라지지 않음)
    """
    xs = np.asarray(xs, dtype=float).reshape(-1)
    values = np.asarray(values, dtype=float).reshape(-1)

    if interpolation not in INTERPOLATIONS:
        raise DomainError(f"지원하지 않는 보간 방식: {interpolation}. 사용 가능: {INTERPOLATIONS}")
    if len(xs) < 2 or len(xs) != len(values):
        raise DomainError(
            f"표본은 2개 이상이고 위치와 개수가 같아야 합니다 (xs={len(xs)}, values={len(values)})"
        )
    if np.any(np.diff(xs) <= 0):
        raise DomainError("표본 위치는 순증가해야 합니다")

    if interpolation == 'linear':
        return PiecewiseLinear(xs, values)

    midpoints = 0.5 * (xs[:-1] + xs[1:])
    return PiecewiseConstant(midpoints, values, xs[0], xs[-1])


def uniform_grid(a: float, b: float, m: int) -> np.ndarray:
    """
    균등 격자 x_j = a + j(b−a)/(m−1), j = 0..m−1

    Raises:
        DomainError: m < 2
    """
    if m < 2:
        raise DomainError(f"격자 점 개수는 2 이상이어야 합니다: {m}")
    j = np.arange(m, dtype=float)
    grid = a + j * (b - a) / (m - 1)
    grid[-1] = b
    return grid


@dataclass(frozen=True)
class AffineMap:
    """
    원래 범위 [lo, hi]와 [0,1] 사이의 아핀 변환

    Attributes:
        lo: 원래 범위 하한
        hi: 원래 범위 상한 (lo < hi)
    """
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"AffineMap은 lo < hi 여야 합니다: lo={self.lo}, hi={self.hi}")

    def normalize(self, values: ArrayLike) -> np.ndarray:
        return (np.asarray(values, dtype=float) - self.lo) / (self.hi - self.lo)

    def denormalize(self, values: ArrayLike) -> np.ndarray:
        return self.lo + np.asarray(values, dtype=float) * (self.hi - self.lo)


def normalize_unit(samples: Sequence[float]) -> Tuple[np.ndarray, AffineMap]:
    """
    표본을 [0,1]로 정규화

    Args:
        samples: 실수 표본

    Returns:
        Tuple[np.ndarray, AffineMap]: (정규화된 표본, 역변환용 AffineMap)

    Examples:
        >>> unit, amap = normalize_unit([-1.0, 0.0, 1.0])
        >>> unit.tolist(), (amap.lo, amap.hi)
        ([0.0, 0.5, 1.0], (-1.0, 1.0))

    Notes:
        - 모든 값이 같으면 [min, min+1] 범위로 변환 (결과는 모두 0)
    """
    arr = np.asarray(samples, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DomainError("빈 표본은 정규화할 수 없습니다")
    if not np.all(np.isfinite(arr)):
        raise DomainError("표본에 유한하지 않은 값이 있습니다")

    lo, hi = float(arr.min()), float(arr.max())
    if hi == lo:
        logger.warning(f"상수 신호 정규화: 모든 값이 {lo}입니다. 범위 [{lo}, {lo + 1}] 사용")
        hi = lo + 1.0

    amap = AffineMap(lo, hi)
    # 반올림으로 경계를 살짝 넘는 값 절단
    return np.clip(amap.normalize(arr), 0.0, 1.0), amap
