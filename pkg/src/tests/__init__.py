"""
테스트 패키지

연산자, 커널, 구적법, 신호 처리, 실험 CLI 테스트
"""

__all__ = []
