"""
오차 지표 모듈

근사 결과와 기준 신호의 최대 오차(ME), 평균 절대 오차(MAE),
평균 제곱 오차(MSE)를 계산합니다.
"""

import logging
from dataclasses import dataclass, asdict
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.signals.representation import Signal
from src.utils.errors import DomainError, LengthMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErrorReport:
    """
    오차 보고서

    Attributes:
        me: 최대 오차 max|Δ|
        mae: 평균 절대 오차 mean|Δ|
        mse: 평균 제곱 오차 mean Δ²
        sample_count: 격자 점 개수
    """
    me: float
    mae: float
    mse: float
    sample_count: int

    def __post_init__(self):
        if self.sample_count < 1:
            raise DomainError(f"sample_count는 1 이상이어야 합니다: {self.sample_count}")
        if min(self.me, self.mae, self.mse) < 0.0:
            raise DomainError("오차 지표는 음수일 수 없습니다")

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def error_report(
        approx: Sequence[float],
        ref: Union[Signal, Sequence[float]],
        grid: Optional[Sequence[float]] = None
) -> ErrorReport:
    """
    근사 오차 계산

    Args:
        approx: 격자 위의 근사 값
        ref: 기준 신호 (Signal이면 grid에서 평가) 또는 기준 표본
        grid: 평가 격자 (ref가 Signal이면 필수)

    Returns:
        ErrorReport: ME, MAE, MSE

    Raises:
        LengthMismatch: 길이가 다른 경우
        DomainError: 빈 입력, Signal 기준에 grid가 없는 경우

    Examples:
        >>> r = error_report([0.75, 0.25], [0.5, 0.5])
        >>> r.me, r.mae, r.mse
        (0.25, 0.25, 0.0625)
    """
    approx = np.asarray(approx, dtype=float).reshape(-1)

    if isinstance(ref, Signal):
        if grid is None:
            raise DomainError("기준이 Signal이면 평가 격자가 필요합니다")
        grid = np.asarray(grid, dtype=float).reshape(-1)
        if len(grid) != len(approx):
            raise LengthMismatch(f"근사 값({len(approx)})과 격자({len(grid)}) 길이가 다릅니다")
        reference = ref(grid)
    else:
        reference = np.asarray(ref, dtype=float).reshape(-1)
        if grid is not None and len(grid) != len(approx):
            raise LengthMismatch(f"근사 값({len(approx)})과 격자({len(grid)}) 길이가 다릅니다")

    if len(reference) != len(approx):
        raise LengthMismatch(f"근사 값({len(approx)})과 기준({len(reference)}) 길이가 다릅니다")
    if approx.size == 0:
        raise DomainError("빈 입력의 오차는 정의되지 않습니다")

    delta = np.abs(approx - reference)
    return ErrorReport(
        me=float(delta.max()),
        mae=float(delta.mean()),
        mse=float(np.mean(delta * delta)),
        sample_count=int(delta.size),
    )


def reports_to_frame(reports: Dict[str, ErrorReport]) -> pd.DataFrame:
    """
    계열별 오차 보고서를 errors.csv 형식 DataFrame으로 변환

    Returns:
        pd.DataFrame: 컬럼 family, me, mae, mse
    """
    rows = [
        {'family': family, 'me': r.me, 'mae': r.mae, 'mse': r.mse}
        for family, r in reports.items()
    ]
    return pd.DataFrame(rows, columns=['family', 'me', 'mae', 'mse'])
