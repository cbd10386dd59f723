"""Grid-size statistics over uniform random triangulations.

Every sample is closed from a uniform bicolored tree, oriented, drawn and
compacted; the identities linking the grid to the tree are checked on each
sample before it is aggregated.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Iterable, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from .bijection import closure
from .colors import BLUE, RED
from .drawing import ccw_internal_edges, compact, fast_coordinates
from .errors import ExperimentError
from .ternary_tree import count_red_edges, random_bicolored
from .transversal import propagate_directions

logger = logging.getLogger(__name__)


class ExperimentConfig(BaseModel):
    """Sizes, sample counts and seed of a statistics run."""

    model_config = {"extra": "forbid"}

    sizes: list[int] = Field(description="Numbers of inner vertices to sample")
    samples_per_size: int = Field(default=100, description="Samples drawn at every size")
    seed: int = Field(default=0, description="Master seed, split into one stream per sample")
    compact: bool = Field(default=True, description="Also measure the compacted grid")
    workers: int = Field(default=1, description="Worker processes; 1 runs in-process")

    @field_validator("sizes")
    @classmethod
    def validate_sizes(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("BAD_SIZE: at least one size is required")
        if any(n < 1 for n in v):
            raise ValueError(f"BAD_SIZE: sizes must be at least 1, got {v}")
        return v

    @field_validator("samples_per_size", "workers")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"BAD_SIZE: expected a positive count, got {v}")
        return v

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        if not 0 <= v < 2**64:
            raise ValueError(f"BAD_SIZE: seed must fit in 64 unsigned bits, got {v}")
        return v


@dataclass(frozen=True)
class Sample:
    """Measurements on one random triangulation."""

    n: int
    width: int
    height: int
    red_edges: int
    ccw_red: int
    ccw_blue: int
    compact_width: Optional[int] = None
    compact_height: Optional[int] = None


def run_sample(n: int, seed: np.random.SeedSequence, compacted: bool = True) -> Sample:
    """Draw one sample and check the identities linking tree, structure and grid."""
    tree = random_bicolored(n, seed)
    tri, ep = closure(tree)
    ts = propagate_directions(tri, ep)
    drawing, _, _ = fast_coordinates(tri, ts)
    sample = Sample(
        n=n,
        width=drawing.width,
        height=drawing.height,
        red_edges=count_red_edges(tree),
        ccw_red=ccw_internal_edges(tri, ep, RED),
        ccw_blue=ccw_internal_edges(tri, ep, BLUE),
    )
    checks = {
        "W + H = |V| - 1": sample.width + sample.height == tri.map.vertex_count - 1,
        "W = e_r - n + 1": sample.width == sample.red_edges - n + 1,
    }
    if compacted:
        small = compact(drawing)
        sample = replace(sample, compact_width=small.width, compact_height=small.height)
        checks["W_c = W - ccw red"] = small.width == sample.width - sample.ccw_red
        checks["H_c = H - ccw blue"] = small.height == sample.height - sample.ccw_blue
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise ExperimentError(
            "IDENTITY_FAILED", f"{', '.join(failed)} on tree {tree}", location=str(tree)
        )
    return sample


def _run_task(task: tuple[int, np.random.SeedSequence, bool]) -> Sample:
    return run_sample(*task)


@dataclass(frozen=True)
class SizeSummary:
    """Means, standard deviations and standard errors of one size's samples."""

    n: int
    samples: int
    mean_width: float
    mean_height: float
    mean_compact_width: float
    mean_compact_height: float
    std_width: float
    std_compact_width: float
    mean_red_edges: float
    se_width: float
    se_height: float
    se_compact_width: float
    se_compact_height: float
    se_red_edges: float

    @property
    def width_ratio(self) -> float:
        return self.mean_width / self.n

    @property
    def height_ratio(self) -> float:
        return self.mean_height / self.n

    @property
    def compact_width_ratio(self) -> float:
        return self.mean_compact_width / self.n

    @property
    def compact_height_ratio(self) -> float:
        return self.mean_compact_height / self.n

    @classmethod
    def from_samples(cls, n: int, samples: list[Sample]) -> "SizeSummary":
        table = np.array(
            [
                (
                    s.width,
                    s.height,
                    np.nan if s.compact_width is None else s.compact_width,
                    np.nan if s.compact_height is None else s.compact_height,
                    s.red_edges,
                )
                for s in samples
            ],
            dtype=np.float64,
        )
        means = table.mean(axis=0)
        stds = table.std(axis=0)
        if len(samples) > 1:
            errors = table.std(axis=0, ddof=1) / np.sqrt(len(samples))
        else:
            errors = np.full(table.shape[1], np.nan)
        return cls(
            n=n,
            samples=len(samples),
            mean_width=float(means[0]),
            mean_height=float(means[1]),
            mean_compact_width=float(means[2]),
            mean_compact_height=float(means[3]),
            std_width=float(stds[0]),
            std_compact_width=float(stds[2]),
            mean_red_edges=float(means[4]),
            se_width=float(errors[0]),
            se_height=float(errors[1]),
            se_compact_width=float(errors[2]),
            se_compact_height=float(errors[3]),
            se_red_edges=float(errors[4]),
        )


REPORT_COLUMNS = (
    "n",
    "samples",
    "mean_W",
    "mean_H",
    "mean_Wc",
    "mean_Hc",
    "std_W",
    "std_Wc",
    "W/n",
    "H/n",
    "Wc/n",
    "Hc/n",
    "mean_e_r",
    "se_W",
    "se_H",
    "se_Wc",
    "se_Hc",
    "se_e_r",
)


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    rows: tuple[SizeSummary, ...]
    samples: tuple[Sample, ...]

    def to_tsv(self) -> str:
        lines = ["#" + "\t".join(REPORT_COLUMNS)]
        for r in self.rows:
            values = (
                r.n,
                r.samples,
                r.mean_width,
                r.mean_height,
                r.mean_compact_width,
                r.mean_compact_height,
                r.std_width,
                r.std_compact_width,
                r.width_ratio,
                r.height_ratio,
                r.compact_width_ratio,
                r.compact_height_ratio,
                r.mean_red_edges,
                r.se_width,
                r.se_height,
                r.se_compact_width,
                r.se_compact_height,
                r.se_red_edges,
            )
            lines.append("\t".join(str(v) if isinstance(v, int) else f"{v:.6f}" for v in values))
        return "\n".join(lines) + "\n"

    def samples_tsv(self) -> str:
        fields = list(asdict(self.samples[0])) if self.samples else []
        lines = ["#" + "\t".join(fields)]
        lines.extend("\t".join(str(v) for v in asdict(s).values()) for s in self.samples)
        return "\n".join(lines) + "\n"


def sample_tasks(
    config: ExperimentConfig,
) -> Iterable[tuple[int, np.random.SeedSequence, bool]]:
    """One task per sample, seeds split deterministically from the master seed."""
    per_size = np.random.SeedSequence(config.seed).spawn(len(config.sizes))
    for n, ss in zip(config.sizes, per_size):
        for child in ss.spawn(config.samples_per_size):
            yield n, child, config.compact


def run_stats(config: ExperimentConfig) -> ExperimentReport:
    tasks = list(sample_tasks(config))
    logger.info(
        "sampling %d triangulations over sizes %s with %d workers",
        len(tasks),
        config.sizes,
        config.workers,
    )
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            samples = list(pool.map(_run_task, tasks))
    else:
        samples = [_run_task(task) for task in tasks]

    rows = []
    for n in dict.fromkeys(config.sizes):
        group = [s for s in samples if s.n == n]
        rows.append(SizeSummary.from_samples(n, group))
        logger.info("n=%d: W/n=%.4f Wc/n=%.4f", n, rows[-1].width_ratio, rows[-1].compact_width_ratio)
    return ExperimentReport(config, tuple(rows), tuple(samples))
