"""
오차 추정 모듈

- modulus_of_continuity: 격자 기반 연속 계수 ω(f, δ)
- sup_error_bound: 연속 신호에 대한 sup-노름 오차 상한
- convergence_study: n 목록에 대한 sup / L^p 오차 표
- fit_loglog_slope: log 오차 vs log n 최소제곱 기울기
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Any, Callable, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.approximation.kernels import KernelConstants, kernel_constants, phi_eval
from src.approximation.operators import OperatorConfig, evaluate, resolve_threads
from src.signals.representation import Signal, uniform_grid
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


def default_delta(n: int) -> float:
    """δ_n = Δ_n = n^{−1/2}"""
    return n ** -0.5


def modulus_of_continuity(f: Signal, delta: float, grid_step: float = 1.0e-4) -> float:
    """
    격자 연속 계수 ω(f, δ) = sup_{|x−y| ≤ δ} |f(x) − f(y)|

    간격 h ≤ grid_step인 균등 격자에서 길이 ⌊δ/h⌋+1 창의 (최댓값 − 최솟값) 중
    최댓값을 취합니다. 참값의 하한이며 grid_step → 0에서 아래로부터 수렴합니다.

    Args:
        f: 신호
        delta: 양수 δ (≤ b − a)
        grid_step: 격자 간격 상한

    Returns:
        float: ω 추정치

    Raises:
        DomainError: δ ≤ 0, δ > b − a, grid_step ≤ 0

    Examples:
        >>> from src.signals.representation import piecewise_table1
        >>> round(modulus_of_continuity(piecewise_table1(), 0.01), 12)
        0.47
    """
    width = f.b - f.a
    if not delta > 0 or delta > width + 1e-12:
        raise DomainError(f"delta는 (0, b−a] 범위여야 합니다: {delta}")
    if not grid_step > 0:
        raise DomainError(f"grid_step은 양수여야 합니다: {grid_step}")

    m = int(math.ceil(width / grid_step - 1e-9)) + 1
    grid = uniform_grid(f.a, f.b, m)
    h = width / (m - 1)
    window = int(math.floor(delta / h + 1e-9)) + 1
    if window < 2:
        return 0.0

    values = pd.Series(f(grid))
    rolling = values.rolling(window, min_periods=1)
    return float((rolling.max() - rolling.min()).max())


@dataclass(frozen=True)
class BoundInputs:
    """
    상한식 입력

    Attributes:
        n: 연산자 차수
        delta_n: δ_n
        Delta_n: Δ_n
        alpha: 시그모이드 감쇠 지수 α
        constants: χ 커널 상수
        phi2: φ_σ(2)
        m_1plus_alpha: m_{1+α}(φ_σ)
    """
    n: int
    delta_n: float
    Delta_n: float
    alpha: float
    constants: KernelConstants
    phi2: float
    m_1plus_alpha: float

    def __post_init__(self):
        for name in ('n', 'delta_n', 'Delta_n', 'alpha', 'phi2', 'm_1plus_alpha'):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"BoundInputs.{name}은(는) 양수여야 합니다: {value}")


def bound_inputs(
        cfg: OperatorConfig,
        n: Optional[int] = None,
        delta_n: Optional[float] = None,
        Delta_n: Optional[float] = None,
        constants: Optional[KernelConstants] = None
) -> BoundInputs:
    """
    연산자 설정으로부터 BoundInputs 구성

    Args:
        cfg: Durrmeyer 계열 연산자 설정
        n: 차수 (None이면 cfg.n)
        delta_n: δ_n (None이면 n^{−1/2})
        Delta_n: Δ_n (None이면 n^{−1/2})
        constants: m_{1+α}가 들어 있는 커널 상수 (None이면 계산)

    Returns:
        BoundInputs
    """
    if cfg.chi is None:
        raise DomainError("상한식에는 χ 커널이 필요합니다")
    n = cfg.n if n is None else n
    alpha = cfg.bell.alpha
    beta = 1.0 + alpha

    if constants is None or beta not in constants.m_beta:
        constants = kernel_constants(cfg.chi, cfg.bell, betas=(beta,))

    return BoundInputs(
        n=n,
        delta_n=default_delta(n) if delta_n is None else delta_n,
        Delta_n=default_delta(n) if Delta_n is None else Delta_n,
        alpha=alpha,
        constants=constants,
        phi2=float(phi_eval(cfg.bell, 2.0)),
        m_1plus_alpha=constants.m_beta[beta],
    )


def sup_error_bound(inp: BoundInputs, omega_Delta: float, omega_delta: float) -> float:
    """
    sup-노름 오차 상한

        (ω(f,Δ_n)/𝒜)(‖χ‖₁ + M̃₁/(nΔ_n))
            + max( m_{1+α}/(φ(2)(nδ_n)^{1+α}), ω(f,δ_n) )

    Args:
        inp: 상한식 입력
        omega_Delta: ω(f, Δ_n)
        omega_delta: ω(f, δ_n)

    Returns:
        float: 상한 값

    Raises:
        NonIntegrable: M̃₁(χ)가 발산하는 경우 (rational χ)
    """
    M1_tilde = inp.constants.require_finite('M1_tilde')
    c = inp.constants

    averaging = (omega_Delta / c.A) * (c.l1_norm + M1_tilde / (inp.n * inp.Delta_n))
    tail = inp.m_1plus_alpha / (inp.phi2 * (inp.n * inp.delta_n) ** (1.0 + inp.alpha))
    return averaging + max(tail, omega_delta)


@dataclass(frozen=True)
class ConvergenceRow:
    """
    수렴 실험 한 행

    Attributes:
        n: 연산자 차수
        sup_error: 격자 최대 오차
        lp_error: 격자 L^p 오차
        p: 노름 지수 (≥ 1)
        bound: 상한식 값 (계산한 경우)
    """
    n: int
    sup_error: float
    lp_error: float
    p: float
    bound: Optional[float] = None

    def __post_init__(self):
        if self.sup_error < 0 or self.lp_error < 0:
            raise DomainError("오차는 음수일 수 없습니다")
        if self.p < 1:
            raise DomainError(f"p는 1 이상이어야 합니다: {self.p}")


def lp_error(
        approx: Sequence[float],
        reference: Sequence[float],
        a: float,
        b: float,
        p: float = 2.0
) -> float:
    """
    격자 L^p 오차 ((b−a)·mean|Δ|^p)^{1/p}

    균등 격자 평균을 ∫_a^b |Δ|^p 의 구적으로 사용합니다.
    """
    if p < 1:
        raise DomainError(f"p는 1 이상이어야 합니다: {p}")
    delta = np.abs(np.asarray(approx, dtype=float) - np.asarray(reference, dtype=float))
    return float(((b - a) * np.mean(delta ** p)) ** (1.0 / p))


def convergence_study(
        cfg: OperatorConfig,
        f: Signal,
        n_list: Sequence[int],
        p: float = 2.0,
        grid_size: int = 8000,
        with_bound: bool = False,
        delta_fn: Callable[[int], float] = default_delta,
        omega_grid_step: float = 1.0e-4,
        safety: float = 0.05,
        threads: Optional[int] = None,
        moment_options: Optional[Mapping[str, Any]] = None,
        progress: bool = True
) -> List[ConvergenceRow]:
    """
    n 목록에 대한 수렴 실험

    Args:
        cfg: 연산자 설정 (n은 행마다 교체)
        f: 신호
        n_list: 오름차순 차수 목록
        p: L^p 노름 지수
        grid_size: 오차 격자 점 개수
        with_bound: 상한식 열 계산 여부 (유한 M̃₁ χ 필요)
        delta_fn: n → δ_n = Δ_n
        omega_grid_step: 상한식 ω 계산 격자 간격
        safety: 상한식 ω에 곱하는 여유 비율 (1 + safety)
        threads: 행 병렬 워커 수 (None/0이면 머신 코어 수)
        moment_options: m_β 계산 옵션 (grid_step, rtol, initial_trunc, max_trunc)
        progress: tqdm 진행 표시 여부

    Returns:
        List[ConvergenceRow]: n 오름차순 행

    Raises:
        DomainError: 빈 목록, 오름차순이 아닌 목록
        NonIntegrable: with_bound이고 χ가 rational인 경우

    Notes:
        - 격자 ω는 참 ω의 하한이므로 상한식 쪽 ω에 safety 비율을 더합니다
          (검증용 여유이며 정리 자체의 주장은 아님)
        - 행마다 연산자 평가는 단일 스레드로, 행 사이는 병렬로 실행
    """
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise DomainError("n_list가 비어 있습니다")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError(f"n_list는 오름차순이어야 합니다: {n_list}")

    grid = uniform_grid(f.a, f.b, grid_size)
    reference = f(grid)

    constants = None
    if with_bound:
        if cfg.chi is None:
            raise DomainError("상한식에는 χ 커널이 필요합니다")
        constants = kernel_constants(
            cfg.chi, cfg.bell, betas=(1.0 + cfg.bell.alpha,), **dict(moment_options or {})
        )
        constants.require_finite('M1_tilde')

    def _row(n: int) -> ConvergenceRow:
        cfg_n = replace(cfg, n=n, threads=1)
        approx = evaluate(cfg_n, f, grid)
        sup_error = float(np.max(np.abs(approx - reference)))

        bound = None
        if with_bound:
            delta = delta_fn(n)
            omega = modulus_of_continuity(f, min(delta, f.b - f.a), omega_grid_step) * (1.0 + safety)
            inp = bound_inputs(cfg, n, delta, delta, constants)
            bound = sup_error_bound(inp, omega, omega)

        return ConvergenceRow(
            n=n,
            sup_error=sup_error,
            lp_error=lp_error(approx, reference, f.a, f.b, p),
            p=p,
            bound=bound,
        )

    rows = []
    workers = min(resolve_threads(threads), len(n_list))
    try:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_n = {executor.submit(_row, n): n for n in n_list}
            with tqdm(total=len(n_list), desc="수렴 실험", disable=not progress) as pbar:
                for future in as_completed(future_to_n):
                    row = future.result()
                    rows.append(row)
                    logger.info(
                        f"수렴 실험 n={row.n}: sup={row.sup_error:.6g}, "
                        f"L{p:g}={row.lp_error:.6g}, bound={row.bound}"
                    )
                    pbar.update(1)
    except Exception as e:
        logger.error(f"수렴 실험 실패 ({cfg.family}): {e}")
        raise

    return sorted(rows, key=lambda r: r.n)


def fit_loglog_slope(rows: Sequence[ConvergenceRow], field_name: str = 'sup_error') -> float:
    """
    log(오차) vs log(n) 최소제곱 기울기 (음수면 수렴 경향)

    Raises:
        DomainError: 양수 오차 행이 2개 미만
    """
    points = [(r.n, getattr(r, field_name)) for r in rows if getattr(r, field_name) > 0]
    if len(points) < 2:
        raise DomainError("기울기 추정에는 양수 오차 행이 2개 이상 필요합니다")
    ns, errors = zip(*points)
    slope, _ = np.polyfit(np.log(ns), np.log(errors), 1)
    return float(slope)


def rows_to_frame(rows: Sequence[ConvergenceRow]) -> pd.DataFrame:
    """ConvergenceRow 목록 → DataFrame (컬럼 n, sup_error, lp_error, p, bound)"""
    return pd.DataFrame(
        [
            {'n': r.n, 'sup_error': r.sup_error, 'lp_error': r.lp_error, 'p': r.p, 'bound': r.bound}
            for r in rows
        ],
        columns=['n', 'sup_error', 'lp_error', 'p', 'bound'],
    )
