"""
Experiments 모듈 및 CLI 테스트
"""
