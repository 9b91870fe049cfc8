"""
명령행 인터페이스

서브커맨드:
    approximate   여러 연산자 계열로 신호 근사 (points.csv, errors.csv, plot.svg)
    denoise       잡음 주입 후 필터링 (CSV 또는 WAV)
    bench         단일 적용 D vs 이중 적용 K/F 실행 시간 (timing.csv)
    bound-check   수렴 실험과 오차 상한식 (convergence.csv)
    moments       커널 상수와 m_β 출력
    replay        manifest.json에 기록된 실행 재현

매개변수 우선순위: 명시한 플래그 > --preset > config.yaml 기본값

사용 예:
    python -m src.cli approximate --signal piecewise-table1 --families D,K,F \\
        --n 200 --sigma logistic --chi rational:1 --grid 8000 --out results/table1
    python -m src.cli denoise --preset saltpepper-fig2 --noise saltpepper:0.05 \\
        --seed 7 --family D --out results/sp_d
"""

import sys
import time
import logging
import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src import __version__
from src.config.config_loader import ConfigLoader
from src.experiments.manifest import RunManifest, load_manifest, save_manifest
from src.experiments.runner import (
    KernelSettings,
    parse_sigma,
    resolve_signal,
    run_approximate,
    run_bench,
    run_bound_check,
    run_denoise,
    run_moments,
    write_frame,
)
from src.signals.noise import NoiseSpec
from src.utils.errors import MaxMinError, ParseError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'


def _csv_list(text: str) -> List[str]:
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError(f"빈 목록입니다: {text!r}")
    return items


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in _csv_list(text)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"정수 목록이 아닙니다: {text!r}") from e


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in _csv_list(text)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"실수 목록이 아닙니다: {text!r}") from e


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed는 64비트 부호 없는 정수여야 합니다: {text}")
    return value


def _add_kernel_flags(parser: argparse.ArgumentParser, config: Dict[str, Any], chi_default: str) -> None:
    quad = config.get('quadrature', {})
    parser.add_argument('--preset', help=f"커널 프리셋 ({', '.join(sorted(config.get('presets', {})))})")
    parser.add_argument('--sigma', help="시그모이드 종류[:기울기] (logistic|tanh|step|ramp, 기본값: logistic:1)")
    parser.add_argument('--scale', type=float, help="종형 커널 스케일 s (기본값: 1)")
    parser.add_argument('--chi', help=f"평균화 커널 rational:c 또는 hat (기본값: {chi_default})")
    parser.add_argument('--alpha', type=float, help="감쇠 지수 α (기본값: logistic/tanh 1, step/ramp 5)")
    parser.add_argument('--panels', type=int, default=quad.get('panels', 64),
                        help=f"합성 중점법 셀당 패널 수 (기본값: {quad.get('panels', 64)})")
    parser.add_argument('--quad', choices=['closed_form_preferred', 'composite', 'adaptive'],
                        default=quad.get('mode', 'closed_form_preferred'),
                        help=f"구적 모드 (기본값: {quad.get('mode', 'closed_form_preferred')})")
    parser.add_argument('--threads', type=int, default=int(config.get('threads') or 0),
                        help="평가 워커 수, 0이면 머신 코어 수 (기본값: %(default)s)")


def _add_common_flags(parser: argparse.ArgumentParser, config: Dict[str, Any], with_n: bool = True) -> None:
    if with_n:
        parser.add_argument('--n', type=int, help=f"연산자 차수 (기본값: 프리셋 또는 {config.get('default_n', 200)})")
    parser.add_argument('--grid', type=int, default=config.get('grid_size', 8000),
                        help="격자 점 개수 (기본값: %(default)s)")
    parser.add_argument('--out', default='results', help="출력 디렉토리 (기본값: %(default)s)")
    parser.add_argument('--svg', action='store_true', help="plot.svg 생성")


def build_parser(config: Dict[str, Any]) -> argparse.ArgumentParser:
    """
    인자 파서 생성

    Args:
        config: 로드된 설정 (도움말 기본값 표시에 사용)

    Returns:
        argparse.ArgumentParser
    """
    noise = config.get('noise', {})
    estimates = config.get('estimates', {})

    parser = argparse.ArgumentParser(
        prog='maxmin',
        description="max-min 신경망 연산자 근사/필터링 실험",
        allow_abbrev=False,
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--config', help="기본 설정 위에 병합할 YAML 파일")
    parser.add_argument('--log-level', help=f"로그 레벨 (기본값: {config.get('log_level', 'INFO')})")
    parser.add_argument('--log-file', help="로그 파일 경로 (예: log/run.log)")

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('approximate', help="연산자 근사 오차", allow_abbrev=False)
    p.add_argument('--signal', default='piecewise-table1',
                   help="내장 신호(piecewise-table1|sine-g|identity) 또는 CSV/WAV 경로 (기본값: %(default)s)")
    p.add_argument('--families', type=_csv_list, default=['D', 'K', 'F'],
                   help="계열 목록 D,K,F,LF,LD (기본값: D,K,F)")
    p.add_argument('--normalize', action='store_true', help="파일 신호를 [0,1]로 정규화")
    p.add_argument('--interpolation', choices=['step', 'linear'], default='step',
                   help="파일 표본 보간 (기본값: %(default)s)")
    _add_common_flags(p, config)
    _add_kernel_flags(p, config, 'rational:1')

    p = sub.add_parser('denoise', help="잡음 필터링", allow_abbrev=False)
    p.add_argument('--signal', default='sine-g',
                   help="내장 신호 또는 CSV/WAV 경로 (기본값: %(default)s)")
    p.add_argument('--family', default='D', help="계열 D|K|F|LF|LD (기본값: %(default)s)")
    p.add_argument('--noise', default=f"saltpepper:{noise.get('saltpepper_density', 0.05)}",
                   help="잡음 saltpepper[:p] 또는 gaussian[:sd], 수준 생략 시 설정 기본값 (기본값: %(default)s)")
    p.add_argument('--seed', type=_seed, default=noise.get('seed', 7), help="잡음 시드 (기본값: %(default)s)")
    p.add_argument('--double-pass', action='store_true', help="1 − Op(1 − Op) 이중 적용")
    p.add_argument('--window', type=int, default=config.get('wav', {}).get('window', 8000),
                   help="WAV 창 길이 (기본값: %(default)s)")
    p.add_argument('--normalize', action='store_true', help="파일 신호를 [0,1]로 정규화")
    p.add_argument('--interpolation', choices=['step', 'linear'], default='step',
                   help="표본 보간 (기본값: %(default)s)")
    _add_common_flags(p, config)
    _add_kernel_flags(p, config, 'rational:1')

    p = sub.add_parser('bench', help="실행 시간 비교", allow_abbrev=False)
    p.add_argument('--noise', default=f"saltpepper:{noise.get('saltpepper_density', 0.05)}",
                   help="잡음 saltpepper[:p] 또는 gaussian[:sd], 수준 생략 시 설정 기본값 (기본값: %(default)s)")
    p.add_argument('--seed', type=_seed, default=noise.get('seed', 7), help="잡음 시드 (기본값: %(default)s)")
    p.add_argument('--repeats', type=int, default=config.get('bench', {}).get('repeats', 3),
                   help="반복 횟수, 중앙값 사용 (기본값: %(default)s)")
    _add_common_flags(p, config)
    _add_kernel_flags(p, config, 'rational:1')

    p = sub.add_parser('bound-check', help="수렴 실험과 오차 상한", allow_abbrev=False)
    p.add_argument('--signal', default='identity',
                   help="연속 내장 신호(identity|sine-g) 또는 파일 경로 (기본값: %(default)s)")
    p.add_argument('--family', default='D', help="계열 (기본값: %(default)s)")
    n_list = estimates.get('n_list', [25, 50, 100, 200])
    p.add_argument('--n-list', type=_int_list, default=list(n_list),
                   help=f"오름차순 차수 목록 (기본값: {','.join(str(n) for n in n_list)})")
    p.add_argument('--p', type=float, default=estimates.get('p', 2.0), help="L^p 지수 (기본값: %(default)s)")
    p.add_argument('--omega-step', type=float, default=estimates.get('omega_grid_step', 1.0e-4),
                   help="연속 계수 격자 간격 (기본값: %(default)s)")
    _add_common_flags(p, config, with_n=False)
    _add_kernel_flags(p, config, 'hat')

    p = sub.add_parser('moments', help="커널 상수 출력", allow_abbrev=False)
    p.add_argument('--betas', type=_float_list, default=[1.0, 2.0], help="m_β의 β 목록 (기본값: 1,2)")
    p.add_argument('--out', help="moments.csv 저장 디렉토리 (선택)")
    _add_kernel_flags(p, config, 'rational:1')

    p = sub.add_parser('replay', help="manifest.json 재실행", allow_abbrev=False)
    p.add_argument('manifest', help="manifest.json 또는 그 디렉토리")
    p.add_argument('--out', help="재실행 출력 디렉토리 (기본값: 기록된 디렉토리)")

    return parser


def setup_logging(level: str = 'INFO', log_file: Optional[str] = None) -> None:
    """CLI 로깅 설정 (stderr, 선택적으로 파일)"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

    numeric = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric, int):
        raise ParseError(f"알 수 없는 로그 레벨: {level}")
    logging.basicConfig(level=numeric, format=LOG_FORMAT, handlers=handlers, force=True)


def noise_defaults(config: Dict[str, Any]) -> Dict[str, float]:
    """수준을 생략한 --noise에 쓸 종류별 기본값"""
    noise = config.get('noise', {})
    return {
        'salt_pepper': float(noise.get('saltpepper_density', 0.05)),
        'gaussian': float(noise.get('gaussian_sd', 0.05)),
    }


def resolve_settings(
        args: argparse.Namespace,
        loader: ConfigLoader,
        config: Dict[str, Any],
        chi_default: str
) -> Tuple[KernelSettings, Optional[int], Dict[str, Any]]:
    """
    플래그 > 프리셋 > 설정 기본값 순서로 커널 설정 결정

    Returns:
        Tuple[KernelSettings, Optional[int], Dict]: (커널 설정, n, 사용한 프리셋)
    """
    preset = loader.get_preset(args.preset) if args.preset else {}

    if args.sigma:
        kind, slope = parse_sigma(args.sigma)
    else:
        kind, slope = preset.get('sigma', 'logistic'), None
    if slope is None:
        slope = float(preset.get('slope', 1.0))

    quad = config.get('quadrature', {})
    kernels = config.get('kernels', {})
    settings = KernelSettings(
        sigma=kind,
        slope=slope,
        scale=args.scale if args.scale is not None else float(preset.get('scale', 1.0)),
        alpha=args.alpha,
        chi=args.chi or preset.get('chi', chi_default),
        panels=args.panels,
        quad_mode=args.quad,
        tol=float(quad.get('tol', 1.0e-10)),
        threads=args.threads,
        quad_limit=int(quad.get('limit', 200)),
        moment_grid_step=float(kernels.get('moment_grid_step', 1.0e-3)),
        moment_rtol=float(kernels.get('moment_rtol', 1.0e-9)),
        initial_trunc=int(kernels.get('initial_trunc', 8)),
        max_trunc=int(kernels.get('max_trunc', 4096)),
    )

    n = getattr(args, 'n', None)
    if n is None:
        n = int(preset.get('n', config.get('default_n', 200)))
    return settings, n, preset


def _replay(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    argv = list(manifest.argv)
    if args.out:
        if '--out' in argv:
            argv[argv.index('--out') + 1] = args.out
        else:
            argv += ['--out', args.out]
    logger.info(f"실행 재현: {' '.join(argv)}")
    return run_cli(argv)


def _dispatch(args: argparse.Namespace, argv: Sequence[str], loader: ConfigLoader, config: Dict[str, Any]) -> int:
    command = args.command
    chi_default = 'hat' if command == 'bound-check' else 'rational:1'
    settings, n, preset = resolve_settings(args, loader, config, chi_default)

    parameters: Dict[str, Any] = {'kernel': settings.to_dict(), 'preset': args.preset}
    outputs: List[str] = []
    started = time.perf_counter()

    if command == 'moments':
        table = run_moments(settings, args.betas)
        print(table.to_string(index=False, float_format=lambda v: f"{v:.12g}"))
        if args.out:
            write_frame(table, Path(args.out) / 'moments.csv')
            outputs.append('moments.csv')
        else:
            return 0
        parameters['betas'] = args.betas

    elif command == 'approximate':
        loaded = resolve_signal(args.signal, args.normalize, args.interpolation)
        reports = run_approximate(settings, n, args.families, loaded, args.grid, Path(args.out), args.svg)
        for code, r in reports.items():
            print(f"{code}_{n}: ME={r.me:.6f} MAE={r.mae:.6f} MSE={r.mse:.6f}")
        parameters.update({
            'signal': args.signal, 'families': args.families, 'n': n, 'grid': args.grid,
            'normalize': args.normalize, 'interpolation': args.interpolation,
            'affine_map': None if loaded.amap is None else [loaded.amap.lo, loaded.amap.hi],
        })
        outputs += ['points.csv', 'errors.csv'] + (['plot.svg'] if args.svg else [])

    elif command == 'denoise':
        loaded = resolve_signal(args.signal, args.normalize, args.interpolation)
        noise = NoiseSpec.parse(args.noise, args.seed, noise_defaults(config))
        report = run_denoise(
            settings, n, args.family, loaded, noise, args.grid, Path(args.out),
            double_pass=args.double_pass, svg=args.svg, window=args.window,
            interpolation=args.interpolation,
        )
        print(f"{args.family}: ME={report.me:.6f} MAE={report.mae:.6f} MSE={report.mse:.6f}")
        parameters.update({
            'signal': args.signal, 'family': args.family, 'n': n, 'grid': args.grid,
            'noise': noise.describe(), 'seed': noise.seed, 'generator': 'PCG64',
            'double_pass': args.double_pass, 'window': args.window,
            'normalize': args.normalize, 'interpolation': args.interpolation,
            'affine_map': None if loaded.amap is None else [loaded.amap.lo, loaded.amap.hi],
        })
        outputs += ['points.csv', 'errors.csv'] + (['plot.svg'] if args.svg else [])
        if loaded.samples is not None and str(args.signal).lower().endswith('.wav'):
            outputs += ['noisy.wav', 'filtered.wav']

    elif command == 'bench':
        noise = NoiseSpec.parse(args.noise, args.seed, noise_defaults(config))
        timing = run_bench(settings, n, noise, args.grid, Path(args.out), args.repeats)
        print(timing.to_string(index=False))
        parameters.update({
            'n': n, 'grid': args.grid, 'noise': noise.describe(), 'seed': noise.seed,
            'generator': 'PCG64', 'repeats': args.repeats,
        })
        outputs.append('timing.csv')

    else:
        loaded = resolve_signal(args.signal)
        frame, slope = run_bound_check(
            settings, args.family, loaded, args.n_list, args.p, args.grid,
            Path(args.out), args.omega_step,
        )
        print(frame.to_string(index=False))
        print(f"log-log slope: {slope:.4f}")
        parameters.update({
            'signal': args.signal, 'family': args.family, 'n_list': args.n_list,
            'p': args.p, 'grid': args.grid, 'omega_step': args.omega_step, 'slope': slope,
        })
        outputs.append('convergence.csv')

    manifest = RunManifest(
        command=command,
        argv=list(argv),
        parameters=parameters,
        wall_time=time.perf_counter() - started,
        outputs=outputs,
    )
    save_manifest(manifest, args.out)
    return 0


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    CLI 실행

    Args:
        argv: 인자 목록 (None이면 sys.argv[1:])

    Returns:
        int: 종료 코드 (0 성공, 예외 클래스별 코드)
    """
    argv = list(sys.argv[1:] if argv is None else argv)

    # --config를 먼저 읽어 도움말 기본값에도 반영
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config')
    known, _ = pre.parse_known_args(argv)

    try:
        loader = ConfigLoader(override_path=known.config)
        config = loader.load_config()
        args = build_parser(config).parse_args(argv)
        setup_logging(args.log_level or config.get('log_level') or 'INFO', args.log_file)

        if args.command == 'replay':
            return _replay(args)
        return _dispatch(args, argv, loader, config)

    except MaxMinError as e:
        print(f"error[{type(e).__name__}]: {e}", file=sys.stderr)
        return e.exit_code
    except FileNotFoundError as e:
        print(f"error[{type(e).__name__}]: {e}", file=sys.stderr)
        return ParseError.exit_code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
