"""공통 유틸리티 테스트"""
