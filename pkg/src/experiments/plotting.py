"""
실험 결과 그래프 모듈

matplotlib(Agg 백엔드)으로 기준 신호와 근사 결과를 겹친 SVG 선 그래프를 만듭니다.
CSV가 원본 결과이고 SVG는 확인용입니다.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)


def plot_series(
        filepath: Union[str, Path],
        xs: Sequence[float],
        series: Dict[str, Sequence[float]],
        title: str = ''
) -> Optional[Path]:
    """
    여러 계열을 한 축에 그려 SVG로 저장

    Args:
        filepath: 저장 경로 (.svg)
        xs: 공통 x 값
        series: 범례 이름 → y 값
        title: 그래프 제목

    Returns:
        Path | None: 저장 경로 (matplotlib이 없거나 계열이 없으면 None)
    """
    try:
        import matplotlib
        matplotlib.use('Agg')
        import matplotlib.pyplot as plt
    except ImportError:
        logger.warning("matplotlib이 설치되어 있지 않습니다. SVG 생성을 건너뜁니다.")
        return None

    if not series:
        logger.warning("그릴 계열이 없습니다.")
        return None

    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    xs = np.asarray(xs, dtype=float)

    # 재현성: SVG 안의 생성 시각과 무작위 id 고정
    with matplotlib.rc_context({'svg.hashsalt': 'maxmin', 'svg.fonttype': 'none'}):
        fig, ax = plt.subplots(figsize=(10, 5))
        for name, ys in series.items():
            linestyle = '--' if name == 'reference' else '-'
            ax.plot(xs, np.asarray(ys, dtype=float), linestyle=linestyle, linewidth=1.0, label=name)
        ax.set_xlabel('x')
        ax.set_ylabel('value')
        if title:
            ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        fig.savefig(filepath, format='svg', metadata={'Date': None})
        plt.close(fig)

    logger.info(f"그래프 저장: {filepath}")
    return filepath
