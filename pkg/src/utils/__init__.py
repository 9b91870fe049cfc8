"""
Utils 패키지

유틸리티 기능을 제공하는 패키지입니다.

하위 모듈:
- errors: 패키지 공통 예외 계층
"""

from .errors import (
    MaxMinError,
    DomainError,
    ZeroDenominator,
    NonIntegrable,
    QuadratureFailure,
    LengthMismatch,
    ParseError,
    UnsupportedFormat,
)

__all__ = [
    'MaxMinError',
    'DomainError',
    'ZeroDenominator',
    'NonIntegrable',
    'QuadratureFailure',
    'LengthMismatch',
    'ParseError',
    'UnsupportedFormat',
]
