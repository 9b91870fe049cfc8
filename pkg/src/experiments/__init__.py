"""
Experiments 패키지

CLI 서브커맨드가 사용하는 실험 실행, 실행 기록, 그래프 저장 기능을 제공합니다.

하위 모듈:
- runner: approximate / denoise / bench / bound-check / moments 실험
- manifest: manifest.json 저장, 로드
- plotting: matplotlib SVG 그래프
"""

from . import plotting
from . import manifest
from . import runner

__all__ = ['plotting', 'manifest', 'runner']
