"""
설정 로더 테스트

기본 config.yaml 로드, 덮어쓰기 병합, 환경변수 치환, 프리셋 조회를 테스트합니다.
"""

import tempfile
from pathlib import Path

import pytest

from src.config.config_loader import ConfigLoader
from src.utils.errors import ParseError


@pytest.fixture
def tmp_dir():
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding='utf-8')
    return path


@pytest.fixture
def loader_for(tmp_dir):
    """임시 config.yaml과 .env로 ConfigLoader 생성"""
    def _make(config_text: str, env_text: str = '', override_text: str = None) -> ConfigLoader:
        config_path = _write(tmp_dir / 'config.yaml', config_text)
        env_path = _write(tmp_dir / '.env', env_text)
        override = _write(tmp_dir / 'override.yaml', override_text) if override_text is not None else None
        return ConfigLoader(config_path=str(config_path), env_path=str(env_path), override_path=override)
    return _make


class TestDefaultConfig:
    """프로젝트 기본 설정"""

    def test_load(self, monkeypatch):
        monkeypatch.delenv('MAXMIN_THREADS', raising=False)
        monkeypatch.delenv('MAXMIN_LOG_LEVEL', raising=False)
        config = ConfigLoader(env_path='/nonexistent/.env').load_config()

        # 검증
        assert config['grid_size'] == 8000
        assert config['threads'] == 0
        assert config['log_level'] == 'INFO'
        assert config['quadrature']['panels'] == 64
        assert config['noise']['seed'] == 7
        assert set(config['presets']) == {'table1', 'saltpepper-fig2', 'gaussian-fig3'}

    def test_presets(self):
        loader = ConfigLoader(env_path='/nonexistent/.env')
        preset = loader.get_preset('saltpepper-fig2')

        # 검증
        assert preset['sigma'] == 'tanh'
        assert preset['scale'] == 0.05
        assert preset['chi'] == 'rational:0.001'
        assert preset['n'] == 8000
        assert loader.get_preset('gaussian-fig3')['slope'] == 10.0

    def test_unknown_preset(self):
        with pytest.raises(ParseError):
            ConfigLoader(env_path='/nonexistent/.env').get_preset('fig4')


class TestEnvSubstitution:
    """환경변수 치환"""

    def test_default_value_typed(self, loader_for, monkeypatch):
        """값 전체가 참조면 YAML 스칼라로 다시 해석"""
        monkeypatch.delenv('MAXMIN_TEST_THREADS', raising=False)
        config = loader_for('threads: ${MAXMIN_TEST_THREADS:-4}\n').load_config()
        assert config['threads'] == 4

    def test_env_overrides_default(self, loader_for, monkeypatch):
        monkeypatch.setenv('MAXMIN_TEST_THREADS', '2')
        config = loader_for('threads: ${MAXMIN_TEST_THREADS:-4}\n').load_config()
        assert config['threads'] == 2

    def test_embedded_reference(self, loader_for, monkeypatch):
        monkeypatch.setenv('MAXMIN_TEST_DIR', 'results')
        config = loader_for('out: "${MAXMIN_TEST_DIR}/table1"\n').load_config()
        assert config['out'] == 'results/table1'

    def test_env_file(self, loader_for, monkeypatch):
        """.env 값은 기존 환경변수가 없을 때만 적용"""
        monkeypatch.delenv('MAXMIN_TEST_LEVEL', raising=False)
        loader = loader_for('level: ${MAXMIN_TEST_LEVEL}\n', '# comment\nMAXMIN_TEST_LEVEL=DEBUG\n')
        assert loader.load_config()['level'] == 'DEBUG'

    def test_missing_without_default(self, loader_for, monkeypatch, caplog):
        monkeypatch.delenv('MAXMIN_TEST_ABSENT', raising=False)
        config = loader_for('value: ${MAXMIN_TEST_ABSENT}\n').load_config()
        assert config['value'] is None
        assert 'MAXMIN_TEST_ABSENT' in caplog.text

    def test_nested_lists(self, loader_for, monkeypatch):
        monkeypatch.setenv('MAXMIN_TEST_N', '50')
        config = loader_for('estimates:\n  n_list: [25, "${MAXMIN_TEST_N}"]\n').load_config()
        assert config['estimates']['n_list'] == [25, 50]


class TestOverride:
    """덮어쓰기 병합"""

    def test_deep_merge(self, loader_for):
        base = 'grid_size: 8000\nquadrature:\n  mode: composite\n  panels: 64\n'
        config = loader_for(base, override_text='quadrature:\n  panels: 16\n').load_config()

        # 검증
        assert config['grid_size'] == 8000
        assert config['quadrature'] == {'mode': 'composite', 'panels': 16}

    def test_merge_does_not_mutate(self):
        base = {'a': {'b': 1}}
        merged = ConfigLoader._deep_merge(base, {'a': {'c': 2}})
        assert merged == {'a': {'b': 1, 'c': 2}}
        assert base == {'a': {'b': 1}}


class TestErrors:
    """설정 파일 오류"""

    def test_missing_file(self, tmp_dir):
        loader = ConfigLoader(config_path=str(tmp_dir / 'none.yaml'), env_path=str(tmp_dir / '.env'))
        with pytest.raises(FileNotFoundError):
            loader.load_config()

    def test_invalid_yaml(self, loader_for):
        with pytest.raises(ParseError):
            loader_for('grid_size: [8000\n').load_config()

    def test_top_level_not_mapping(self, loader_for):
        with pytest.raises(ParseError):
            loader_for('- 1\n- 2\n').load_config()
