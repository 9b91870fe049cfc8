"""
신호 파일 입출력 모듈 테스트
"""

import tempfile
from pathlib import Path

import numpy as np
import pytest
from scipy.io import wavfile

from src.signals.io import (
    infer_format,
    load_samples,
    load_signal,
    pcm_to_unit,
    save_signal,
    unit_to_pcm,
)
from src.signals.representation import PiecewiseConstant, PiecewiseLinear
from src.utils.errors import DomainError, ParseError, UnsupportedFormat


@pytest.fixture
def tmp_dir():
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


class TestFormat:
    """형식 판단"""

    def test_infer_from_extension(self):
        assert infer_format('a/b/speech.WAV') == 'wav'
        assert infer_format('signal.csv') == 'csv'
        assert infer_format('data.txt', 'csv') == 'csv'

    def test_unsupported(self):
        with pytest.raises(UnsupportedFormat):
            infer_format('signal.mp3')
        assert UnsupportedFormat('x').exit_code == 8


class TestPcmMapping:
    """16비트 진폭 ↔ [0,1]"""

    def test_extremes(self):
        np.testing.assert_allclose(pcm_to_unit(np.array([-32768, 32767])), [0.0, 1.0])
        np.testing.assert_array_equal(unit_to_pcm([0.0, 1.0]), [-32768, 32767])

    def test_round_trip_exact(self):
        """모든 진폭이 그대로 복원"""
        pcm = np.arange(-32768, 32768, dtype=np.int16)
        np.testing.assert_array_equal(unit_to_pcm(pcm_to_unit(pcm)), pcm)

    def test_clipping(self):
        assert unit_to_pcm([1.5])[0] == 32767
        assert unit_to_pcm([-0.5])[0] == -32768
        assert unit_to_pcm([0.5]).dtype == np.int16


class TestCsv:
    """CSV 입출력"""

    def test_save_and_load(self, tmp_dir):
        xs = np.linspace(0.0, 1.0, 7)
        values = np.array([0.1, 1 / 3, 0.5, 0.7, 2 / 3, 0.9, 0.123456789012345678])
        path = save_signal(tmp_dir / 'out.csv', values, xs)

        data = load_samples(path)

        # 검증
        assert path.read_text(encoding='utf-8').splitlines()[0] == 'x,value'
        np.testing.assert_array_equal(data.xs, xs)
        np.testing.assert_array_equal(data.values, values)
        assert data.sample_rate is None
        assert len(data) == 7

    def test_load_signal_interpolation(self, tmp_dir):
        path = save_signal(tmp_dir / 's.csv', [0.1, 0.9, 0.3], [0.0, 0.5, 1.0])
        assert isinstance(load_signal(path), PiecewiseConstant)
        assert isinstance(load_signal(path, interpolation='linear'), PiecewiseLinear)

    def test_values_outside_unit_range(self, tmp_dir):
        """정규화하지 않은 값은 신호로 만들 수 없음"""
        path = save_signal(tmp_dir / 's.csv', [0.1, 2.0], [0.0, 1.0])
        with pytest.raises(DomainError):
            load_signal(path)

    @pytest.mark.parametrize('content', [
        'time,value\n0,0.1\n1,0.2\n',
        'x,value\n0,0.1\n',
        'x,value\n0,0.1\n1,abc\n',
        'x,value\n0.5,0.1\n0.2,0.2\n',
        '',
    ])
    def test_parse_errors(self, tmp_dir, content):
        path = tmp_dir / 'bad.csv'
        path.write_text(content, encoding='utf-8')
        with pytest.raises(ParseError):
            load_samples(path)

    def test_missing_file(self, tmp_dir):
        with pytest.raises(FileNotFoundError):
            load_samples(tmp_dir / 'none.csv')

    def test_save_csv_needs_xs(self, tmp_dir):
        with pytest.raises(ParseError):
            save_signal(tmp_dir / 'out.csv', [0.1, 0.2])


class TestWav:
    """WAV 입출력"""

    def test_round_trip(self, tmp_dir):
        """저장 후 로드하면 진폭과 표본 주파수가 그대로"""
        pcm = np.array([-32768, -100, 0, 1234, 32767], dtype=np.int16)
        values = pcm_to_unit(pcm)
        path = save_signal(tmp_dir / 'out.wav', values, sample_rate=11025)

        data = load_samples(path)
        rate, raw = wavfile.read(path)

        # 검증
        assert rate == 11025
        np.testing.assert_array_equal(raw, pcm)
        assert data.sample_rate == 11025
        np.testing.assert_allclose(data.values, values)
        np.testing.assert_allclose(data.xs, np.linspace(0.0, 1.0, 5))

    def test_stereo_rejected(self, tmp_dir):
        path = tmp_dir / 'stereo.wav'
        wavfile.write(path, 8000, np.zeros((10, 2), dtype=np.int16))
        with pytest.raises(UnsupportedFormat):
            load_samples(path)

    def test_float_rejected(self, tmp_dir):
        path = tmp_dir / 'float.wav'
        wavfile.write(path, 8000, np.zeros(10, dtype=np.float32))
        with pytest.raises(UnsupportedFormat):
            load_samples(path)

    def test_not_a_wav(self, tmp_dir):
        path = tmp_dir / 'fake.wav'
        path.write_bytes(b'not a riff file at all')
        with pytest.raises(ParseError):
            load_samples(path)

    def test_too_short(self, tmp_dir):
        path = tmp_dir / 'short.wav'
        wavfile.write(path, 8000, np.zeros(1, dtype=np.int16))
        with pytest.raises(ParseError):
            load_samples(path)

    def test_random_file_data_identical(self, tmp_dir):
        """임의 16비트 모노 파일을 로드 후 저장하면 데이터가 그대로"""
        rng = np.random.default_rng(5)
        pcm = rng.integers(-32768, 32767, size=1000, endpoint=True).astype(np.int16)
        wavfile.write(tmp_dir / 'in.wav', 22050, pcm)

        data = load_samples(tmp_dir / 'in.wav')
        save_signal(tmp_dir / 'out.wav', data.values, fmt='wav', sample_rate=data.sample_rate)
        rate, raw = wavfile.read(tmp_dir / 'out.wav')

        # 검증
        assert rate == 22050
        assert raw.dtype == np.int16
        assert raw.tobytes() == pcm.tobytes()
