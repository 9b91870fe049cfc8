"""설정 로더 테스트"""
