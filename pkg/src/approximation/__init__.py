"""
Approximation 패키지

max-min 신경망 연산자와 이를 위한 커널, 구적법, 오차 추정을 제공합니다.

하위 모듈:
- kernels: 시그모이드, 종형 커널 φ_σ, 평균화 커널 χ, 모멘트 상수
- maxmin: max-min 대수 보조 함수
- quadrature: 셀 질량, 가중 평균, Kantorovich 평균, 적응 구적
- operators: 다섯 가지 연산자 계열과 보수 이중 적용
- estimates: 연속 계수, 상한식, 수렴 실험
"""

from . import kernels
from . import maxmin
from . import quadrature
from . import operators
from . import estimates

__all__ = ['kernels', 'maxmin', 'quadrature', 'operators', 'estimates']
