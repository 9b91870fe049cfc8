"""
설정 관리 모듈

YAML 기반 실험 설정 로드 및 커널 프리셋 관리
"""

from .config_loader import (
    ConfigLoader,
    get_config_loader,
    load_config,
    get_preset,
)

__all__ = [
    'ConfigLoader',
    'get_config_loader',
    'load_config',
    'get_preset',
]
