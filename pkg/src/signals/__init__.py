"""
Signals 패키지

신호 표현, 잡음 주입, 오차 지표, 파일 입출력을 제공합니다.

하위 모듈:
- representation: 구간별 상수/선형, 사인파, 표본 보간, 정규화
- noise: salt-and-pepper, 가우시안 잡음
- metrics: ME / MAE / MSE
- io: CSV, WAV 입출력
"""

from . import representation
from . import noise
from . import metrics
from . import io

__all__ = ['representation', 'noise', 'metrics', 'io']
