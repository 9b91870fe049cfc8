"""
max-min 신경망 연산자 근사/필터링 실험 패키지
"""

__version__ = "0.1.0"
