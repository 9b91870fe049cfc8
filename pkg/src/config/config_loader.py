"""
설정 파일 로더

.env 파일에서 환경변수를 로드하고,
config.yaml의 환경변수 참조를 실제 값으로 치환합니다.
추가 YAML 파일을 덮어써서 실험별 설정을 구성할 수 있습니다.
"""

import os
import re
import copy
import logging
from pathlib import Path
from typing import Dict, Any, Optional

import yaml

from src.utils.errors import ParseError

logger = logging.getLogger(__name__)

# ${VAR} 또는 ${VAR:-default}
_ENV_PATTERN = re.compile(r'\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-([^}]*))?\}')


class ConfigLoader:
    """설정 파일 로더 클래스"""

    def __init__(
        self,
        config_path: Optional[str] = None,
        env_path: Optional[str] = None,
        override_path: Optional[str] = None
    ):
        """
        ConfigLoader 초기화

        Args:
            config_path (str): config.yaml 파일 경로
            env_path (str): .env 파일 경로
            override_path (str): 기본 설정 위에 병합할 YAML 파일 경로 (선택)
        """
        # 프로젝트 루트 디렉토리 찾기
        self.project_root = self._find_project_root()

        # 기본 경로 설정
        if config_path is None:
            config_path = self.project_root / 'src' / 'config' / 'config.yaml'
        if env_path is None:
            env_path = self.project_root / '.env'

        self.config_path = Path(config_path)
        self.env_path = Path(env_path)
        self.override_path = Path(override_path) if override_path else None

        # .env 파일 로드
        self._load_env_file()

    def _find_project_root(self) -> Path:
        """
        프로젝트 루트 디렉토리 찾기 (.env 또는 pyproject.toml이 있는 위치)

        Returns:
            Path: 프로젝트 루트 경로
        """
        current = Path(__file__).resolve().parent

        while current != current.parent:
            if (current / '.env').exists() or (current / 'pyproject.toml').exists():
                return current
            current = current.parent

        # 찾지 못한 경우 현재 파일의 3단계 상위 디렉토리 (src/config 기준)
        return Path(__file__).resolve().parent.parent.parent

    def _load_env_file(self):
        """
        .env 파일에서 환경변수 로드 (파일이 없으면 건너뜀)
        """
        if not self.env_path.exists():
            logger.debug(f".env 파일 없음: {self.env_path}")
            return

        with open(self.env_path, 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()

                # 빈 줄이나 주석 무시
                if not line or line.startswith('#'):
                    continue

                # KEY=VALUE 형태 파싱
                if '=' in line:
                    key, value = line.split('=', 1)
                    key = key.strip()
                    value = value.strip()

                    # 기존 환경변수가 없을 때만 설정 (기존 환경변수 우선)
                    if key not in os.environ:
                        os.environ[key] = value

    def _replace_env_vars(self, value: Any) -> Any:
        """
        값에서 환경변수 참조(${VAR_NAME}, ${VAR_NAME:-default})를 실제 값으로 치환

        값 전체가 하나의 참조였다면 치환 결과를 YAML 스칼라로 다시 해석하여
        숫자/불리언 타입을 복원합니다.

        Args:
            value: 치환할 값 (str, dict, list 등)

        Returns:
            치환된 값
        """
        if isinstance(value, str):
            whole = _ENV_PATTERN.fullmatch(value) is not None

            def _sub(match: re.Match) -> str:
                var_name, default = match.group(1), match.group(2)
                env_value = os.environ.get(var_name)
                if env_value is None or env_value == '':
                    if default is None:
                        logger.warning(f"환경변수 {var_name}가 설정되지 않았습니다")
                        return ''
                    return default
                return env_value

            replaced = _ENV_PATTERN.sub(_sub, value)
            if whole:
                return yaml.safe_load(replaced) if replaced != '' else None
            return replaced

        elif isinstance(value, dict):
            return {k: self._replace_env_vars(v) for k, v in value.items()}

        elif isinstance(value, list):
            return [self._replace_env_vars(item) for item in value]

        else:
            return value

    @staticmethod
    def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """딕셔너리 재귀 병합 (override 우선)"""
        merged = copy.deepcopy(base)
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = ConfigLoader._deep_merge(merged[key], value)
            else:
                merged[key] = copy.deepcopy(value)
        return merged

    def _read_yaml(self, path: Path) -> Dict[str, Any]:
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        with open(path, 'r', encoding='utf-8') as f:
            try:
                data = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ParseError(f"YAML 파싱 실패 ({path}): {e}") from e

        if not isinstance(data, dict):
            raise ParseError(f"설정 파일 최상위는 매핑이어야 합니다: {path}")
        return data

    def load_config(self) -> Dict[str, Any]:
        """
        설정 파일 로드, 덮어쓰기 병합 및 환경변수 치환

        Returns:
            Dict: 설정 딕셔너리

        Raises:
            FileNotFoundError: 설정 파일이 없을 경우
            ParseError: YAML 형식이 잘못된 경우
        """
        config = self._read_yaml(self.config_path)

        if self.override_path is not None:
            config = self._deep_merge(config, self._read_yaml(self.override_path))
            logger.debug(f"설정 덮어쓰기 적용: {self.override_path}")

        return self._replace_env_vars(config)

    def get_preset(self, name: str) -> Dict[str, Any]:
        """
        이름으로 커널 프리셋 조회

        Args:
            name: 프리셋 이름 (예: 'saltpepper-fig2')

        Returns:
            Dict: 프리셋 설정 (sigma, slope, scale, chi, n)

        Raises:
            ParseError: 존재하지 않는 프리셋
        """
        presets = self.load_config().get('presets', {})
        if name not in presets:
            raise ParseError(
                f"알 수 없는 프리셋: {name}. 사용 가능: {sorted(presets)}"
            )
        return dict(presets[name])


# 싱글톤 인스턴스
_config_loader = None


def get_config_loader() -> ConfigLoader:
    """
    ConfigLoader 싱글톤 인스턴스 반환

    Returns:
        ConfigLoader: 설정 로더 인스턴스
    """
    global _config_loader
    if _config_loader is None:
        _config_loader = ConfigLoader()
    return _config_loader


def load_config(override_path: Optional[str] = None) -> Dict[str, Any]:
    """
    설정 파일 로드 (간편 함수)

    Args:
        override_path: 병합할 YAML 파일 경로 (선택)

    Returns:
        Dict: 설정 딕셔너리
    """
    if override_path:
        return ConfigLoader(override_path=override_path).load_config()
    return get_config_loader().load_config()


def get_preset(name: str) -> Dict[str, Any]:
    """
    커널 프리셋 반환 (간편 함수)

    Returns:
        Dict: 프리셋 설정
    """
    return get_config_loader().get_preset(name)
