"""
잡음 주입 모듈 테스트
"""

import numpy as np
import pytest

from src.signals.noise import GENERATOR_ALGORITHM, NoiseSpec, add_noise
from src.utils.errors import DomainError, ParseError


class TestNoiseSpec:
    """NoiseSpec 파싱과 검증"""

    @pytest.mark.parametrize('text,kind,level', [
        ('saltpepper:0.05', 'salt_pepper', 0.05),
        ('salt-pepper:0.1', 'salt_pepper', 0.1),
        ('gaussian:0.05', 'gaussian', 0.05),
        ('Gaussian:0', 'gaussian', 0.0),
    ])
    def test_parse(self, text, kind, level):
        spec = NoiseSpec.parse(text, seed=11)
        assert spec.kind == kind
        assert spec.level == level
        assert spec.seed == 11

    @pytest.mark.parametrize('text', ['poisson:0.1', 'saltpepper', 'gaussian:abc', ''])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            NoiseSpec.parse(text)

    def test_parse_level_defaults(self):
        """수준을 생략하면 종류별 기본값 사용"""
        defaults = {'salt_pepper': 0.05, 'gaussian': 0.08}
        assert NoiseSpec.parse('gaussian', 3, defaults) == NoiseSpec('gaussian', 0.08, 3)
        assert NoiseSpec.parse('saltpepper:', 3, defaults).level == 0.05
        assert NoiseSpec.parse('gaussian:0.02', 3, defaults).level == 0.02
        with pytest.raises(ParseError):
            NoiseSpec.parse('gaussian', 3, {'salt_pepper': 0.05})

    def test_describe(self):
        assert NoiseSpec('salt_pepper', 0.05).describe() == 'saltpepper:0.05'
        assert NoiseSpec('gaussian', 0.05).describe() == 'gaussian:0.05'

    def test_validation(self):
        with pytest.raises(DomainError):
            NoiseSpec('salt_pepper', 1.0)
        with pytest.raises(DomainError):
            NoiseSpec('gaussian', -0.1)
        with pytest.raises(DomainError):
            NoiseSpec('gaussian', 0.1, seed=-1)

    def test_generator_algorithm(self):
        assert GENERATOR_ALGORITHM == 'PCG64'
        assert type(np.random.default_rng(0).bit_generator).__name__ == GENERATOR_ALGORITHM


class TestAddNoise:
    """잡음 추가 테스트"""

    def test_reproducible(self):
        """같은 시드는 같은 결과"""
        clean = np.full(2000, 0.5)
        spec = NoiseSpec('salt_pepper', 0.1, seed=7)
        np.testing.assert_array_equal(add_noise(clean, spec), add_noise(clean, spec))

    def test_seed_changes_realization(self):
        clean = np.full(2000, 0.5)
        a = add_noise(clean, NoiseSpec('gaussian', 0.05, seed=7))
        b = add_noise(clean, NoiseSpec('gaussian', 0.05, seed=8))
        assert not np.array_equal(a, b)

    def test_salt_pepper_values_and_density(self):
        """오염 표본은 0 또는 1, 비율은 p 근처"""
        clean = np.full(100_000, 0.5)
        noisy = add_noise(clean, NoiseSpec('salt_pepper', 0.05, seed=7))
        changed = noisy != 0.5

        # 검증
        assert set(np.unique(noisy[changed])) <= {0.0, 1.0}
        assert changed.mean() == pytest.approx(0.05, abs=0.005)
        assert (noisy == 0.0).mean() == pytest.approx(0.025, abs=0.003)
        assert (noisy == 1.0).mean() == pytest.approx(0.025, abs=0.003)

    def test_salt_pepper_rule(self):
        """u < p/2 → 0, p/2 ≤ u < p → 1"""
        clean = np.full(1000, 0.5)
        spec = NoiseSpec('salt_pepper', 0.2, seed=3)
        draws = np.random.default_rng(3).random(1000)

        noisy = add_noise(clean, spec)

        # 검증
        np.testing.assert_array_equal(noisy[draws < 0.1], 0.0)
        np.testing.assert_array_equal(noisy[(draws >= 0.1) & (draws < 0.2)], 1.0)
        np.testing.assert_array_equal(noisy[draws >= 0.2], 0.5)

    def test_gaussian_clipped(self):
        """가우시안 잡음은 [0,1]로 절단"""
        clean = np.linspace(0.0, 1.0, 10_000)
        noisy = add_noise(clean, NoiseSpec('gaussian', 0.2, seed=7))

        # 검증
        assert noisy.min() >= 0.0 and noisy.max() <= 1.0
        middle = slice(4000, 6000)
        assert np.std(noisy[middle] - clean[middle]) == pytest.approx(0.2, rel=0.1)

    def test_zero_level(self):
        clean = [0.2, 0.4]
        assert add_noise(clean, NoiseSpec('salt_pepper', 0.0)).tolist() == [0.2, 0.4]
        assert add_noise(clean, NoiseSpec('gaussian', 0.0)).tolist() == [0.2, 0.4]

    def test_input_unchanged(self):
        clean = np.full(100, 0.5)
        add_noise(clean, NoiseSpec('salt_pepper', 0.5))
        assert np.all(clean == 0.5)

    def test_out_of_range_input(self):
        with pytest.raises(DomainError):
            add_noise([0.5, 1.5], NoiseSpec('gaussian', 0.1))
