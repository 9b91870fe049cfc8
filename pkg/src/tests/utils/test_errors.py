"""
예외 계층 테스트
"""

import pytest

from src.utils.errors import (
    DomainError,
    LengthMismatch,
    MaxMinError,
    NonIntegrable,
    ParseError,
    QuadratureFailure,
    UnsupportedFormat,
    ZeroDenominator,
)


class TestErrorHierarchy:
    """예외 클래스별 종료 코드와 표준 예외 호환"""

    @pytest.mark.parametrize('cls,code', [
        (MaxMinError, 1),
        (ParseError, 2),
        (DomainError, 3),
        (ZeroDenominator, 4),
        (NonIntegrable, 5),
        (QuadratureFailure, 6),
        (LengthMismatch, 7),
        (UnsupportedFormat, 8),
    ])
    def test_exit_codes(self, cls, code):
        assert cls.exit_code == code
        assert issubclass(cls, MaxMinError)

    def test_exit_codes_unique(self):
        classes = [ParseError, DomainError, ZeroDenominator, NonIntegrable,
                   QuadratureFailure, LengthMismatch, UnsupportedFormat]
        assert len({c.exit_code for c in classes}) == len(classes)

    def test_builtin_bases(self):
        """기존 except ValueError 코드와 호환"""
        assert isinstance(DomainError('x'), ValueError)
        assert isinstance(ParseError('x'), ValueError)
        assert isinstance(ZeroDenominator('x'), ArithmeticError)
        assert isinstance(QuadratureFailure('x'), RuntimeError)

    def test_message(self):
        with pytest.raises(MaxMinError, match='cell 3'):
            raise ZeroDenominator('cell 3')
