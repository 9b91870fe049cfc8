"""
신호 파일 입출력 모듈

CSV (헤더 x,value)와 16비트 PCM 모노 WAV를 읽고 씁니다.
- CSV: pandas, 17자리 유효숫자로 저장하여 값이 그대로 왕복
- WAV: scipy.io.wavfile, 진폭 v를 (v + 32768)/65535로 [0,1]에 대응
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.io import wavfile

from src.signals.representation import Signal, sampled_signal, uniform_grid
from src.utils.errors import ParseError, UnsupportedFormat

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'wav')

CSV_COLUMNS = ['x', 'value']

# 16비트 PCM 진폭 ↔ [0,1] 고정 아핀 변환
_PCM_OFFSET = 32768.0
_PCM_SPAN = 65535.0


@dataclass
class SampledData:
    """
    파일에서 읽은 표본

    Attributes:
        xs: 표본 위치 (WAV는 [0,1] 균등 격자)
        values: 표본 값
        sample_rate: WAV 표본 주파수 (CSV는 None)
    """
    xs: np.ndarray
    values: np.ndarray
    sample_rate: Optional[int] = None

    def __len__(self) -> int:
        return len(self.values)


def infer_format(path: Union[str, Path], fmt: Optional[str] = None) -> str:
    """
    파일 형식 결정 (명시 값 우선, 없으면 확장자)

    Raises:
        UnsupportedFormat: csv/wav가 아닌 경우
    """
    fmt = (fmt or Path(path).suffix.lstrip('.')).lower()
    if fmt not in FORMATS:
        raise UnsupportedFormat(f"지원하지 않는 파일 형식: {fmt!r} ({path}). 사용 가능: {FORMATS}")
    return fmt


def pcm_to_unit(pcm: np.ndarray) -> np.ndarray:
    """16비트 진폭 → [0,1]"""
    return (np.asarray(pcm, dtype=float) + _PCM_OFFSET) / _PCM_SPAN


def unit_to_pcm(values: Sequence[float]) -> np.ndarray:
    """[0,1] → 16비트 진폭 (반올림, 범위 절단)"""
    pcm = np.rint(np.asarray(values, dtype=float) * _PCM_SPAN - _PCM_OFFSET)
    return np.clip(pcm, -32768, 32767).astype(np.int16)


def _read_csv(path: Path) -> SampledData:
    try:
        df = pd.read_csv(path, encoding='utf-8', float_precision='round_trip')
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ParseError(f"CSV 파싱 실패 ({path}): {e}") from e

    if list(df.columns) != CSV_COLUMNS:
        raise ParseError(f"CSV 헤더는 {','.join(CSV_COLUMNS)} 이어야 합니다: {list(df.columns)}")

    try:
        xs = pd.to_numeric(df['x']).to_numpy(dtype=float)
        values = pd.to_numeric(df['value']).to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise ParseError(f"CSV에 숫자가 아닌 값이 있습니다 ({path}): {e}") from e

    if len(xs) < 2:
        raise ParseError(f"CSV에는 표본이 2개 이상 필요합니다 ({path})")
    if np.any(~np.isfinite(xs)) or np.any(~np.isfinite(values)):
        raise ParseError(f"CSV에 유한하지 않은 값이 있습니다 ({path})")
    if np.any(np.diff(xs) <= 0):
        raise ParseError(f"CSV의 x는 순증가해야 합니다 ({path})")

    return SampledData(xs, values)


def _read_wav(path: Path) -> SampledData:
    try:
        rate, data = wavfile.read(path)
    except ValueError as e:
        raise ParseError(f"WAV 파싱 실패 ({path}): {e}") from e

    if data.dtype != np.int16:
        raise UnsupportedFormat(f"16비트 PCM WAV만 지원합니다 (dtype={data.dtype}): {path}")
    if data.ndim != 1:
        raise UnsupportedFormat(f"모노 WAV만 지원합니다 (채널 {data.shape[1]}개): {path}")
    if len(data) < 2:
        raise ParseError(f"WAV에는 표본이 2개 이상 필요합니다 ({path})")

    return SampledData(uniform_grid(0.0, 1.0, len(data)), pcm_to_unit(data), int(rate))


def load_samples(path: Union[str, Path], fmt: Optional[str] = None) -> SampledData:
    """
    파일에서 표본 읽기

    Args:
        path: 파일 경로
        fmt: 'csv' 또는 'wav' (None이면 확장자로 판단)

    Returns:
        SampledData: 표본 위치, 값, 표본 주파수

    Raises:
        FileNotFoundError: 파일이 없는 경우
        ParseError: 형식 오류
        UnsupportedFormat: 스테레오/부동소수 WAV, 알 수 없는 확장자
    """
    path = Path(path)
    fmt = infer_format(path, fmt)
    if not path.exists():
        raise FileNotFoundError(f"신호 파일이 없습니다: {path}")

    data = _read_csv(path) if fmt == 'csv' else _read_wav(path)
    logger.info(f"신호 로드 완료: {path} ({fmt}, 표본 {len(data)}개)")
    return data


def load_signal(
        path: Union[str, Path],
        fmt: Optional[str] = None,
        interpolation: str = 'step'
) -> Signal:
    """
    파일에서 신호 읽기

    Returns:
        Signal: 표본 보간 신호 (값은 [0,1]이어야 함)

    Raises:
        DomainError: 값이 [0,1] 밖 (정규화 필요)
    """
    data = load_samples(path, fmt)
    return sampled_signal(data.xs, data.values, interpolation)


def save_signal(
        path: Union[str, Path],
        values: Sequence[float],
        xs: Optional[Sequence[float]] = None,
        fmt: Optional[str] = None,
        sample_rate: int = 8000
) -> Path:
    """
    표본을 파일로 저장

    Args:
        path: 저장 경로
        values: 표본 값 (WAV는 [0,1])
        xs: 표본 위치 (CSV 필수)
        fmt: 'csv' 또는 'wav'
        sample_rate: WAV 표본 주파수

    Returns:
        Path: 저장한 파일 경로
    """
    path = Path(path)
    fmt = infer_format(path, fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    values = np.asarray(values, dtype=float).reshape(-1)

    if fmt == 'csv':
        if xs is None:
            raise ParseError("CSV 저장에는 표본 위치 xs가 필요합니다")
        df = pd.DataFrame({'x': np.asarray(xs, dtype=float), 'value': values})
        df.to_csv(path, index=False, float_format='%.17g', encoding='utf-8')
    else:
        wavfile.write(path, int(sample_rate), unit_to_pcm(values))

    logger.info(f"신호 저장 완료: {path} ({fmt}, 표본 {len(values)}개)")
    return path
