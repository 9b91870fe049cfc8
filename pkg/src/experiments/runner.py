"""
실험 실행 모듈

CLI 서브커맨드가 호출하는 실험 함수를 제공합니다.
- run_approximate: 여러 연산자 계열의 근사 오차 (points.csv, errors.csv, plot.svg)
- run_denoise: 잡음 주입 후 필터링 (CSV 또는 WAV 입출력)
- run_bench: 단일 적용 D와 이중 적용 K/F의 실행 시간 비교 (timing.csv)
- run_bound_check: 수렴 실험과 상한식 (convergence.csv)
- run_moments: 커널 상수와 m_β 표
"""

import time
import logging
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.approximation.estimates import convergence_study, fit_loglog_slope, rows_to_frame
from src.approximation.kernels import (
    BellKernel,
    ChiKernel,
    Sigmoid,
    kernel_constants,
    phi_eval,
)
from src.approximation.operators import (
    OperatorConfig,
    coefficients,
    complement_double_pass,
    denoise,
    evaluate,
    evaluate_coefficients,
    family_code,
    noisy_signal,
    resolve_family,
)
from src.approximation.quadrature import QuadratureConfig
from src.experiments.plotting import plot_series
from src.signals.io import SampledData, infer_format, load_samples, save_signal
from src.signals.metrics import ErrorReport, error_report, reports_to_frame
from src.signals.noise import NoiseSpec, add_noise
from src.signals.representation import (
    AffineMap,
    Signal,
    identity_signal,
    normalize_unit,
    piecewise_table1,
    sampled_signal,
    sine_g,
    uniform_grid,
)
from src.utils.errors import DomainError, ParseError

logger = logging.getLogger(__name__)

BUILTIN_SIGNALS = {
    'piecewise-table1': piecewise_table1,
    'sine-g': sine_g,
    'identity': identity_signal,
}

CSV_FLOAT_FORMAT = '%.17g'


def parse_sigma(text: str) -> Tuple[str, Optional[float]]:
    """
    '--sigma kind[:slope]' 파싱

    Returns:
        Tuple[str, Optional[float]]: (종류, 기울기 또는 None)
    """
    kind, _, slope = text.partition(':')
    kind = kind.strip().lower()
    if not slope:
        return kind, None
    try:
        return kind, float(slope)
    except ValueError as e:
        raise ParseError(f"시그모이드 기울기를 숫자로 읽을 수 없습니다: {text!r}") from e


def parse_chi(text: str) -> ChiKernel:
    """
    '--chi rational:c | hat' 파싱

    Examples:
        >>> parse_chi('rational:0.001')
        ChiKernel(kind='rational', c=0.001)
    """
    kind, _, value = text.strip().lower().partition(':')
    if kind == 'hat' and not value:
        return ChiKernel('hat')
    if kind == 'rational':
        try:
            return ChiKernel('rational', float(value) if value else 1.0)
        except ValueError as e:
            raise ParseError(f"χ 매개변수를 숫자로 읽을 수 없습니다: {text!r}") from e
    raise ParseError(f"χ 형식은 rational:c 또는 hat 입니다: {text!r}")


@dataclass
class KernelSettings:
    """
    실험 공통 커널/구적 설정

    Attributes:
        sigma: 시그모이드 종류
        slope: 시그모이드 기울기
        scale: 종형 커널 스케일 s
        alpha: 감쇠 지수 (None이면 종류별 기본값)
        chi: χ 지정 문자열 ('rational:c' 또는 'hat')
        panels: 합성 중점법 패널 수
        quad_mode: 구적 모드
        tol: 적응 구적 허용 오차
        threads: 평가 워커 수
        quad_limit: 적응 구적 최대 분할 수
        moment_grid_step: 커널 상수/m_β 계산 격자 간격
        moment_rtol: m_β 안정성 허용 오차
        initial_trunc: m_β 시작 절단 반경
        max_trunc: m_β 절단 반경 상한
    """
    sigma: str = 'logistic'
    slope: float = 1.0
    scale: float = 1.0
    alpha: Optional[float] = None
    chi: str = 'rational:1'
    panels: int = 64
    quad_mode: str = 'closed_form_preferred'
    tol: float = 1.0e-10
    threads: int = 0
    quad_limit: int = 200
    moment_grid_step: float = 1.0e-3
    moment_rtol: float = 1.0e-9
    initial_trunc: int = 8
    max_trunc: int = 4096

    def bell(self) -> BellKernel:
        return BellKernel(Sigmoid(self.sigma, self.slope, self.alpha), self.scale)

    def chi_kernel(self) -> ChiKernel:
        return parse_chi(self.chi)

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(mode=self.quad_mode, panels=self.panels, tol=self.tol, limit=self.quad_limit)

    def moment_options(self) -> Dict[str, Any]:
        """kernel_constants에 넘길 m_β 계산 옵션"""
        return {
            'grid_step': self.moment_grid_step,
            'rtol': self.moment_rtol,
            'initial_trunc': self.initial_trunc,
            'max_trunc': self.max_trunc,
        }

    def operator(self, family: str, n: int) -> OperatorConfig:
        """계열과 차수로 OperatorConfig 생성"""
        return OperatorConfig(
            family=family,
            n=n,
            bell=self.bell(),
            chi=self.chi_kernel(),
            quad=self.quadrature(),
            threads=self.threads,
        )

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class LoadedSignal:
    """
    실험 입력 신호

    Attributes:
        signal: [0,1] 값 신호
        amap: 정규화 변환 (정규화하지 않았으면 None)
        samples: 파일 입력의 원본 표본 (내장 신호는 None)
        source: 신호 이름 또는 경로
    """
    signal: Signal
    amap: Optional[AffineMap] = None
    samples: Optional[SampledData] = None
    source: str = ''

    def to_original(self, values: np.ndarray) -> np.ndarray:
        """정규화 이전 단위로 복원"""
        return values if self.amap is None else self.amap.denormalize(values)


def _unit_samples(data: SampledData, normalize: bool) -> Tuple[np.ndarray, Optional[AffineMap]]:
    if normalize:
        return normalize_unit(data.values)
    return data.values, None


def resolve_signal(
        spec: str,
        normalize: bool = False,
        interpolation: str = 'step'
) -> LoadedSignal:
    """
    내장 신호 이름 또는 파일 경로로 신호 준비

    Args:
        spec: 'piecewise-table1' | 'sine-g' | 'identity' | CSV/WAV 경로
        normalize: 파일 표본을 [0,1]로 정규화할지 여부
        interpolation: 파일 표본 보간 방식

    Raises:
        ParseError: 내장 이름도 아니고 파일도 없는 경우
    """
    if spec in BUILTIN_SIGNALS:
        return LoadedSignal(BUILTIN_SIGNALS[spec](), source=spec)

    path = Path(spec)
    if not path.exists():
        raise ParseError(
            f"알 수 없는 신호: {spec!r}. 내장 신호 {sorted(BUILTIN_SIGNALS)} 또는 CSV/WAV 경로를 지정하세요."
        )

    data = load_samples(path)
    values, amap = _unit_samples(data, normalize)
    signal = sampled_signal(data.xs, values, interpolation)
    return LoadedSignal(signal, amap, data, str(path))


def write_frame(df: pd.DataFrame, path: Path) -> Path:
    """CSV 저장 (17자리 유효숫자, 인덱스 없음)"""
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, encoding='utf-8')
    logger.info(f"CSV 저장: {path} ({len(df)}행)")
    return path


def run_approximate(
        settings: KernelSettings,
        n: int,
        families: Sequence[str],
        loaded: LoadedSignal,
        grid_size: int,
        out_dir: Path,
        svg: bool = False
) -> Dict[str, ErrorReport]:
    """
    여러 계열로 신호를 근사하고 오차 기록

    Args:
        settings: 커널 설정
        n: 연산자 차수
        families: 계열 이름/코드 목록
        loaded: 입력 신호
        grid_size: 오차 격자 점 개수
        out_dir: 출력 디렉토리
        svg: plot.svg 생성 여부

    Returns:
        Dict[str, ErrorReport]: 계열 코드 → 오차 보고서
    """
    f = loaded.signal
    grid = uniform_grid(f.a, f.b, grid_size)
    reference = loaded.to_original(f(grid))

    points = {'x': grid, 'reference': reference}
    reports = {}
    for family in families:
        cfg = settings.operator(resolve_family(family), n)
        approx = loaded.to_original(evaluate(cfg, f, grid))
        points[f'approx_{cfg.code}'] = approx
        reports[cfg.code] = error_report(approx, reference)
        logger.info(
            f"{cfg.code}_{n}: ME={reports[cfg.code].me:.6f}, "
            f"MAE={reports[cfg.code].mae:.6f}, MSE={reports[cfg.code].mse:.6f}"
        )

    out_dir = Path(out_dir)
    write_frame(pd.DataFrame(points), out_dir / 'points.csv')
    write_frame(reports_to_frame(reports), out_dir / 'errors.csv')
    if svg:
        series = {k: v for k, v in points.items() if k != 'x'}
        plot_series(out_dir / 'plot.svg', grid, series, f"n={n}")
    return reports


def _window_bounds(length: int, window: int) -> List[Tuple[int, int]]:
    # 마지막 창이 표본 1개면 앞 창에 붙임
    bounds = [(start, min(start + window, length)) for start in range(0, length, window)]
    if len(bounds) > 1 and bounds[-1][1] - bounds[-1][0] < 2:
        last = bounds.pop()
        bounds[-1] = (bounds[-1][0], last[1])
    return bounds


def filter_samples(
        cfg: OperatorConfig,
        noisy: np.ndarray,
        domain: Tuple[float, float],
        double_pass: bool,
        interpolation: str = 'step'
) -> np.ndarray:
    """단일 또는 보수 이중 적용 필터"""
    if double_pass:
        return complement_double_pass(cfg, noisy, domain, interpolation)
    return denoise(cfg, noisy, domain, interpolation)


def filter_windowed(
        settings: KernelSettings,
        family: str,
        noisy: np.ndarray,
        window: int,
        double_pass: bool,
        interpolation: str = 'step'
) -> np.ndarray:
    """
    긴 신호를 고정 길이 창으로 나누어 필터링

    각 창은 [0,1] 위의 표본으로 보고 n = 창 길이로 연산자를 적용한 뒤 이어 붙입니다.
    """
    if window < 2:
        raise DomainError(f"창 길이는 2 이상이어야 합니다: {window}")
    pieces = []
    bounds = _window_bounds(len(noisy), window)
    for start, stop in bounds:
        chunk = noisy[start:stop]
        cfg = settings.operator(family, len(chunk))
        pieces.append(filter_samples(cfg, chunk, (0.0, 1.0), double_pass, interpolation))
    logger.info(f"창 단위 필터링 완료: 창 {len(bounds)}개, 표본 {len(noisy)}개")
    return np.concatenate(pieces)


def run_denoise(
        settings: KernelSettings,
        n: int,
        family: str,
        loaded: LoadedSignal,
        noise: NoiseSpec,
        grid_size: int,
        out_dir: Path,
        double_pass: bool = False,
        svg: bool = False,
        window: int = 8000,
        interpolation: str = 'step'
) -> ErrorReport:
    """
    잡음을 추가하고 연산자로 필터링한 뒤 원본과 비교

    Args:
        settings: 커널 설정
        n: 연산자 차수 (WAV 입력은 창 길이 사용)
        family: 계열 이름/코드
        loaded: 원본 신호
        noise: 잡음 설정
        grid_size: 내장 신호 표본 수
        out_dir: 출력 디렉토리
        double_pass: 보수 이중 적용 여부
        svg: plot.svg 생성 여부
        window: WAV 창 길이
        interpolation: 표본 보간 방식

    Returns:
        ErrorReport: 원본 대비 필터링 결과 오차
    """
    family = resolve_family(family)
    code = family_code(family)
    out_dir = Path(out_dir)
    is_wav = loaded.samples is not None and infer_format(loaded.source) == 'wav'

    if loaded.samples is None:
        f = loaded.signal
        grid = uniform_grid(f.a, f.b, grid_size)
        clean = f(grid)
    else:
        grid = loaded.samples.xs
        clean = loaded.signal(grid)
        if not is_wav and not np.allclose(np.diff(grid), (grid[-1] - grid[0]) / (len(grid) - 1)):
            raise DomainError("denoise 입력 CSV의 x는 균등 간격이어야 합니다")

    noisy = add_noise(clean, noise)

    if is_wav:
        filtered = filter_windowed(settings, family, noisy, window, double_pass, interpolation)
    else:
        cfg = settings.operator(family, n)
        filtered = filter_samples(cfg, noisy, (grid[0], grid[-1]), double_pass, interpolation)

    clean_out = loaded.to_original(clean)
    noisy_out = loaded.to_original(noisy)
    filtered_out = loaded.to_original(filtered)
    report = error_report(filtered_out, clean_out)
    label = f"{code}2" if double_pass else code
    logger.info(f"필터링 {label}: ME={report.me:.6f}, MAE={report.mae:.6f}, MSE={report.mse:.6f}")

    points = pd.DataFrame({
        'x': grid,
        'reference': clean_out,
        'noisy': noisy_out,
        f'approx_{code}': filtered_out,
    })
    write_frame(points, out_dir / 'points.csv')
    write_frame(reports_to_frame({label: report}), out_dir / 'errors.csv')

    if is_wav:
        rate = loaded.samples.sample_rate
        save_signal(out_dir / 'noisy.wav', noisy, fmt='wav', sample_rate=rate)
        save_signal(out_dir / 'filtered.wav', filtered, fmt='wav', sample_rate=rate)
    if svg:
        plot_series(
            out_dir / 'plot.svg', grid,
            {'reference': clean_out, 'noisy': noisy_out, f'approx_{code}': filtered_out},
            f"{label}, {noise.describe()}",
        )
    return report


def _median_time(func, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def run_bench(
        settings: KernelSettings,
        n: int,
        noise: NoiseSpec,
        grid_size: int,
        out_dir: Path,
        repeats: int = 3
) -> pd.DataFrame:
    """
    단일 적용 D와 이중 적용 K, F의 실행 시간 비교

    첫 번째 적용의 계수는 시간 측정 전에 계산하고, 이중 적용의 두 번째
    계수는 첫 번째 결과에 의존하므로 측정 구간 안에서 계산합니다.

    Returns:
        pd.DataFrame: 컬럼 family, passes, seconds
    """
    if repeats < 1:
        raise DomainError(f"repeats는 1 이상이어야 합니다: {repeats}")

    g = sine_g()
    noisy = add_noise(g(uniform_grid(g.a, g.b, grid_size)), noise)
    signal, grid = noisy_signal(noisy, (g.a, g.b))

    rows = []

    cfg_d = settings.operator('maxmin_durrmeyer', n)
    coeffs_d = coefficients(cfg_d, signal)
    seconds = _median_time(lambda: evaluate_coefficients(cfg_d, coeffs_d, grid), repeats)
    rows.append({'family': 'D', 'passes': 1, 'seconds': seconds})

    for family in ('maxmin_kantorovich', 'maxmin_sampling'):
        cfg = settings.operator(family, n)
        first_coeffs = coefficients(cfg, signal)

        def _double_pass():
            first = np.clip(evaluate_coefficients(cfg, first_coeffs, grid), 0.0, 1.0)
            complement, _ = noisy_signal(1.0 - first, (g.a, g.b))
            second = evaluate_coefficients(cfg, coefficients(cfg, complement), grid)
            return 1.0 - np.clip(second, 0.0, 1.0)

        seconds = _median_time(_double_pass, repeats)
        rows.append({'family': cfg.code, 'passes': 2, 'seconds': seconds})

    timing = pd.DataFrame(rows, columns=['family', 'passes', 'seconds'])
    for row in rows:
        logger.info(f"시간 측정 {row['family']} ({row['passes']}회 적용): {row['seconds']:.4f}초")
    write_frame(timing, Path(out_dir) / 'timing.csv')
    return timing


def run_bound_check(
        settings: KernelSettings,
        family: str,
        loaded: LoadedSignal,
        n_list: Sequence[int],
        p: float,
        grid_size: int,
        out_dir: Path,
        omega_grid_step: float = 1.0e-4
) -> Tuple[pd.DataFrame, float]:
    """
    수렴 실험과 상한식 계산

    Returns:
        Tuple[pd.DataFrame, float]: (convergence.csv 내용, log-log 기울기)
    """
    cfg = settings.operator(resolve_family(family), n_list[0])
    rows = convergence_study(
        cfg, loaded.signal, n_list, p=p, grid_size=grid_size,
        with_bound=True, omega_grid_step=omega_grid_step,
        threads=settings.threads,
        moment_options=settings.moment_options(),
    )
    frame = rows_to_frame(rows)
    violations = [r.n for r in rows if r.bound is not None and r.sup_error > r.bound]
    if violations:
        logger.warning(f"상한식 위반 행: n={violations}")

    slope = fit_loglog_slope(rows) if len(rows) > 1 else float('nan')
    logger.info(f"수렴 기울기 (log sup-error vs log n): {slope:.4f}")
    write_frame(frame, Path(out_dir) / 'convergence.csv')
    return frame, slope


def run_moments(settings: KernelSettings, betas: Sequence[float]) -> pd.DataFrame:
    """
    커널 상수와 m_β 표

    Returns:
        pd.DataFrame: 컬럼 name, value
    """
    bell = settings.bell()
    constants = kernel_constants(settings.chi_kernel(), bell, betas=tuple(betas), **settings.moment_options())
    rows = [
        ('A', constants.A),
        ('l1_norm', constants.l1_norm),
        ('M0', constants.M0),
        ('M1_tilde', constants.M1_tilde),
        ('phi(0)', float(phi_eval(bell, 0.0))),
        ('phi(2)', float(phi_eval(bell, 2.0))),
        ('alpha', bell.alpha),
    ]
    rows += [(f'm_beta({beta:g})', value) for beta, value in constants.m_beta.items()]
    return pd.DataFrame(rows, columns=['name', 'value'])
