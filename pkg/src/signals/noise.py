"""
잡음 주입 모듈

salt-and-pepper 충격 잡음과 가우시안 잡음을 시드 고정 난수로 추가합니다.
난수 생성기는 numpy PCG64 (np.random.default_rng(seed))이며,
같은 (NoiseSpec, 원본 신호)에서는 항상 같은 결과를 냅니다.
"""

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from src.utils.errors import DomainError, ParseError

logger = logging.getLogger(__name__)

NOISE_KINDS = ('salt_pepper', 'gaussian')

GENERATOR_ALGORITHM = 'PCG64'


@dataclass(frozen=True)
class NoiseSpec:
    """
    잡음 설정

    Attributes:
        kind: 'salt_pepper' 또는 'gaussian'
        level: salt_pepper는 표본별 오염 확률 p ∈ [0,1), gaussian은 표준편차 sd ≥ 0
        seed: 64비트 부호 없는 정수 시드
    """
    kind: str
    level: float
    seed: int = 7

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise DomainError(f"지원하지 않는 잡음 종류: {self.kind}. 사용 가능: {NOISE_KINDS}")
        if self.kind == 'salt_pepper' and not 0.0 <= self.level < 1.0:
            raise DomainError(f"salt-pepper 밀도는 [0,1) 범위여야 합니다: {self.level}")
        if self.kind == 'gaussian' and not self.level >= 0.0:
            raise DomainError(f"가우시안 표준편차는 0 이상이어야 합니다: {self.level}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError(f"seed는 64비트 부호 없는 정수여야 합니다: {self.seed}")

    @classmethod
    def parse(cls, text: str, seed: int = 7, defaults: Optional[Mapping[str, float]] = None) -> 'NoiseSpec':
        """
        'saltpepper:p' 또는 'gaussian:sd' 문자열 파싱

        Args:
            text: 잡음 지정 문자열 (수준을 생략하면 defaults에서 가져옴)
            seed: 난수 시드
            defaults: 종류별 기본 수준 ({'salt_pepper': p, 'gaussian': sd})

        Raises:
            ParseError: 형식 오류, 또는 수준을 생략했는데 기본값이 없는 경우
        """
        kind, _, value = text.partition(':')
        kind = kind.strip().lower().replace('-', '').replace('_', '')
        mapping = {'saltpepper': 'salt_pepper', 'gaussian': 'gaussian'}
        if kind not in mapping:
            raise ParseError(f"잡음 형식은 saltpepper:p 또는 gaussian:sd 입니다: {text!r}")
        kind = mapping[kind]

        if not value.strip():
            if not defaults or defaults.get(kind) is None:
                raise ParseError(f"잡음 수준이 없고 {kind} 기본값도 없습니다: {text!r}")
            return cls(kind, float(defaults[kind]), seed)

        try:
            level = float(value)
        except ValueError as e:
            raise ParseError(f"잡음 수준을 숫자로 읽을 수 없습니다: {value!r}") from e
        return cls(kind, level, seed)

    def describe(self) -> str:
        prefix = 'saltpepper' if self.kind == 'salt_pepper' else 'gaussian'
        return f"{prefix}:{self.level:g}"


def add_noise(clean: Sequence[float], spec: NoiseSpec) -> np.ndarray:
    """
    원본 표본에 잡음 추가

    Args:
        clean: [0,1] 범위 원본 표본
        spec: 잡음 설정

    Returns:
        np.ndarray: 잡음이 섞인 표본 ([0,1])

    Raises:
        DomainError: 원본 값이 [0,1] 밖인 경우

    Examples:
        >>> add_noise([0.2, 0.4], NoiseSpec('salt_pepper', 0.0)).tolist()
        [0.2, 0.4]

    Notes:
        - salt_pepper: 균등 난수 u < p/2 → 0 (pepper), p/2 ≤ u < p → 1 (salt)
        - gaussian: N(0, sd²) 추가 후 [0,1]로 절단
    """
    samples = np.asarray(clean, dtype=float).reshape(-1)
    if samples.size and (samples.min() < 0.0 or samples.max() > 1.0):
        raise DomainError("잡음을 추가할 원본 값은 [0,1] 범위여야 합니다")

    rng = np.random.default_rng(int(spec.seed))
    noisy = samples.copy()

    if spec.kind == 'salt_pepper':
        draws = rng.random(samples.size)
        half = spec.level / 2.0
        noisy[draws < half] = 0.0
        noisy[(draws >= half) & (draws < spec.level)] = 1.0
        corrupted = int(np.count_nonzero(draws < spec.level))
    else:
        if spec.level > 0.0:
            noisy = np.clip(samples + rng.normal(0.0, spec.level, samples.size), 0.0, 1.0)
        corrupted = samples.size if spec.level > 0.0 else 0

    logger.debug(
        f"잡음 추가: {spec.describe()}, seed={spec.seed}, "
        f"오염 표본 {corrupted}/{samples.size}"
    )
    return noisy
