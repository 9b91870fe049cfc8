"""
실행 기록(manifest) 모듈

모든 출력 디렉토리에 manifest.json을 남겨 명령, 해석된 매개변수,
소프트웨어 버전, 실행 시간을 기록합니다. replay 명령은 기록된 argv로
같은 실험을 다시 실행합니다.
"""

import json
import logging
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any, Dict, List, Union

from src import __version__
from src.utils.errors import ParseError

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'


@dataclass
class RunManifest:
    """
    실행 기록

    Attributes:
        command: 서브커맨드 이름
        argv: 재실행용 인자 목록 (서브커맨드 포함)
        parameters: 해석된 모든 매개변수 (계열, n, 커널, 잡음, 격자 등)
        version: 패키지 버전
        wall_time: 실행 시간 (초)
        outputs: 생성한 파일 이름 목록
    """
    command: str
    argv: List[str]
    parameters: Dict[str, Any] = field(default_factory=dict)
    version: str = __version__
    wall_time: float = 0.0
    outputs: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def save_manifest(manifest: RunManifest, out_dir: Union[str, Path]) -> Path:
    """
    manifest.json 저장

    Returns:
        Path: 저장 경로
    """
    path = Path(out_dir) / MANIFEST_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(manifest.to_dict(), f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write('\n')
    logger.info(f"실행 기록 저장: {path}")
    return path


def load_manifest(path: Union[str, Path]) -> RunManifest:
    """
    manifest.json 로드

    Args:
        path: manifest 파일 또는 그 파일이 있는 디렉토리

    Raises:
        FileNotFoundError: 파일이 없는 경우
        ParseError: JSON 형식 또는 필드 오류
    """
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    if not path.exists():
        raise FileNotFoundError(f"실행 기록 파일이 없습니다: {path}")

    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        return RunManifest(**data)
    except json.JSONDecodeError as e:
        raise ParseError(f"실행 기록 JSON 파싱 실패 ({path}): {e}") from e
    except TypeError as e:
        raise ParseError(f"실행 기록 필드 오류 ({path}): {e}") from e
