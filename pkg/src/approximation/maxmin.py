"""
max-min 대수 보조 함수

[0,1] 위의 max(⋁)와 min(∧) 연산, 그리고 연산자 보조정리에서 쓰이는
격자 부등식을 계산합니다. 속성 테스트와 연산자 내부 루프가 함께 사용합니다.
"""

from typing import Sequence, Union

import numpy as np

ArrayLike = Union[float, Sequence[float], np.ndarray]


def vmax(values: ArrayLike, axis=None):
    """⋁ x_i (빈 입력은 0, 즉 [0,1] 격자의 최소원)"""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return 0.0
    return arr.max(axis=axis)


def vmin(values: ArrayLike, axis=None):
    """∧ x_i (빈 입력은 1, 즉 [0,1] 격자의 최대원)"""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return 1.0
    return arr.min(axis=axis)


def meet(a: ArrayLike, b: ArrayLike):
    """a ∧ b (원소별)"""
    return np.minimum(a, b)


def join(a: ArrayLike, b: ArrayLike):
    """a ∨ b (원소별)"""
    return np.maximum(a, b)


def max_of_meets(coeffs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """
    ⋁_k (c_k ∧ w_k) 계산

    Args:
        coeffs: 계수 벡터 (K,)
        weights: 정규화된 가중치 행렬 (rows, K)

    Returns:
        np.ndarray: 행별 결과 (rows,)
    """
    return vmax(meet(coeffs[None, :], weights), axis=1)


def sup_difference_gap(x: ArrayLike, y: ArrayLike) -> float:
    """
    |⋁x_i − ⋁y_i| − ⋁|x_i − y_i| (항상 ≤ 0)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(abs(x.max() - y.max()) - np.abs(x - y).max())


def meet_difference_gap(a: float, b: float, c: float) -> float:
    """
    |a∧b − a∧c| − a∧|b−c| (a,b,c ∈ [0,1]이면 항상 ≤ 0)
    """
    return float(abs(meet(a, b) - meet(a, c)) - meet(a, abs(b - c)))


def power_of_sup_gap(x: ArrayLike, k: float) -> float:
    """
    (⋁x_i)^k − ⋁x_i^k (x_i ≥ 0, k > 0이면 0)
    """
    x = np.asarray(x, dtype=float)
    return float(x.max() ** k - (x ** k).max())


def meet_subadditivity_gap(a: float, b: float, c: float) -> float:
    """(a+b)∧c − (a∧c + b∧c) (a,b,c ≥ 0이면 ≤ 0)"""
    return float(meet(a + b, c) - (meet(a, c) + meet(b, c)))


def join_subadditivity_gap(a: float, b: float, c: float) -> float:
    """(a+b)∨c − (a∨c + b∨c) (a,b,c ≥ 0이면 ≤ 0)"""
    return float(join(a + b, c) - (join(a, c) + join(b, c)))
