"""
예외 클래스 모듈

근사 연산자, 구적법, 신호 입출력에서 사용하는 예외 계층을 정의합니다.
CLI는 예외 클래스별로 서로 다른 종료 코드를 반환합니다.
"""


class MaxMinError(Exception):
    """패키지 공통 최상위 예외"""

    exit_code = 1


class DomainError(MaxMinError, ValueError):
    """정의역/입력 범위를 벗어난 경우 (예: x가 [a,b] 밖, 값이 [0,1] 밖)"""

    exit_code = 3


class ZeroDenominator(MaxMinError, ArithmeticError):
    """연산자 분모(⋁φ 또는 셀 질량)가 0이 되는 경우"""

    exit_code = 4


class NonIntegrable(MaxMinError, ArithmeticError):
    """유한해야 하는 적분 상수가 발산(+∞)하는 경우"""

    exit_code = 5


class QuadratureFailure(MaxMinError, RuntimeError):
    """적응 구적법이 분할 한도 안에서 수렴하지 못한 경우"""

    exit_code = 6


class LengthMismatch(MaxMinError, ValueError):
    """비교하는 시퀀스의 길이가 서로 다른 경우"""

    exit_code = 7


class ParseError(MaxMinError, ValueError):
    """CLI 인자, CSV, 설정 값 파싱 실패"""

    exit_code = 2


class UnsupportedFormat(MaxMinError, ValueError):
    """지원하지 않는 파일 형식 (스테레오/부동소수 WAV 등)"""

    exit_code = 8
