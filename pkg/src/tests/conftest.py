"""
Pytest 설정 및 공통 Fixtures

커널, 신호, 무작위 구간별 상수 신호 생성기 등 테스트 전반에서 쓰는 설정
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# 프로젝트 루트를 Python 경로에 추가
project_root = Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(project_root))

from src.approximation.kernels import BellKernel, ChiKernel, Sigmoid
from src.signals.representation import (
    PiecewiseConstant,
    identity_signal,
    piecewise_table1,
    sine_g,
)


@pytest.fixture
def logistic_bell():
    """logistic σ, s=1 종형 커널"""
    return BellKernel(Sigmoid('logistic', 1.0), 1.0)


@pytest.fixture
def ramp_bell():
    """ramp σ, s=1 종형 커널"""
    return BellKernel(Sigmoid('ramp', 1.0), 1.0)


@pytest.fixture
def hat_chi():
    return ChiKernel('hat')


@pytest.fixture
def rational_chi():
    """χ(x) = 1/(1+x²)"""
    return ChiKernel('rational', 1.0)


@pytest.fixture
def table1_signal():
    """4구간 불연속 비교 함수"""
    return piecewise_table1()


@pytest.fixture
def sine_signal():
    """g(x) = 0.45 + 0.25 sin(8πx)"""
    return sine_g()


@pytest.fixture
def identity():
    """f(x) = x on [0,1]"""
    return identity_signal()


@pytest.fixture
def rng():
    """고정 시드 난수 생성기"""
    return np.random.default_rng(20240601)


def make_random_pair(rng, pieces=None, sum_le_one=False):
    """
    같은 경계를 공유하는 무작위 구간별 상수 신호 쌍 (f ≤ g) 생성

    Returns:
        Tuple[PiecewiseConstant, PiecewiseConstant, np.ndarray, np.ndarray]
    """
    pieces = pieces or int(rng.integers(1, 6))
    breakpoints = np.sort(rng.uniform(0.02, 0.98, pieces - 1))
    # 경계가 너무 가까우면 다시 뽑기
    while pieces > 1 and np.min(np.diff(np.concatenate(([0.0], breakpoints, [1.0])))) < 1e-3:
        breakpoints = np.sort(rng.uniform(0.02, 0.98, pieces - 1))

    if sum_le_one:
        f_values = rng.uniform(0.0, 0.5, pieces)
        g_values = rng.uniform(0.0, 0.5, pieces)
    else:
        g_values = rng.uniform(0.0, 1.0, pieces)
        f_values = g_values * rng.uniform(0.0, 1.0, pieces)

    f = PiecewiseConstant(breakpoints, f_values)
    g = PiecewiseConstant(breakpoints, g_values)
    return f, g, f_values, g_values


@pytest.fixture
def random_pair():
    """make_random_pair 함수 fixture"""
    return make_random_pair
