"""Depth distributions of random geodesics and tropical segments.

For each ``m`` the same ``s`` tree pairs feed both modes: pair ``k`` is drawn
from ``SeedSequence([seed, m, k, 0/1])``, so runs are reproducible regardless
of how samples are spread over workers.
"""

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import ResourceError, ValidationError
from .sampler import sample_pair
from .treespace import bhv_geodesic, compose
from .tropical import segment_depth

MODES = ("euclidean", "tropical", "both")
DEFAULT_MAX_M = 12
MAX_COLUMNS = 19


@dataclass
class DepthExperimentConfig:
    ms: tuple = (4, 5, 6, 7, 8)
    samples: int = 1000
    seed: int = 0
    mode: str = "both"
    output: str = None
    max_m: int = DEFAULT_MAX_M

    def __post_init__(self):
        self.ms = tuple(int(m) for m in self.ms)
        if self.samples < 1:
            raise ValidationError("need at least one sample")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {', '.join(MODES)}")
        for m in self.ms:
            if not 4 <= m <= 20:
                raise ValidationError(f"m={m} outside 4..20")
            if m > self.max_m:
                raise ResourceError(f"m={m} exceeds the configured limit {self.max_m}; raise max_m to run it")


@dataclass
class DepthTable:
    mode: str
    counts: dict = field(default_factory=dict)

    def percentages(self, m):
        c = self.counts[m]
        total = sum(c)
        return [100 * x / total for x in c]

    def to_csv(self):
        width = max((len(c) for c in self.counts.values()), default=0)
        width = max(width, 1)
        lines = ["m," + ",".join(f"depth{k}" for k in range(width))]
        for m in sorted(self.counts):
            row = [f"{x:.1f}" for x in self.percentages(m)]
            row += [""] * (width - len(row))
            lines.append(f"{m}," + ",".join(row))
        return "\n".join(lines) + "\n"


def pair_depths(m, seed, index):
    """``(euclidean depth, tropical depth)`` for pair ``index``."""
    t1, t2 = sample_pair(m, seed, index)
    g, _ = bhv_geodesic(t1, t2)
    tdepth, _ = segment_depth(compose(t1).entries, compose(t2).entries, m)
    return g.depth, tdepth


def _row_job(args):
    m, seed, lo, hi = args
    return [pair_depths(m, seed, k) for k in range(lo, hi)]


def _workers():
    try:
        return max(1, int(os.environ.get("TREESPACE_THREADS", "1")))
    except ValueError:
        return 1


def depth_experiment(cfg, workers=None):
    """Return ``{"euclidean": DepthTable, "tropical": DepthTable}`` (as selected by ``cfg.mode``)."""
    workers = workers or _workers()
    eu = DepthTable("euclidean")
    tr = DepthTable("tropical")
    for m in cfg.ms:
        chunk = max(1, cfg.samples // (4 * workers))
        jobs = [(m, cfg.seed, lo, min(lo + chunk, cfg.samples)) for lo in range(0, cfg.samples, chunk)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_row_job, jobs))
        else:
            parts = [_row_job(j) for j in jobs]
        results = [r for part in parts for r in part]
        width = m - 1
        for table, pick in ((eu, 0), (tr, 1)):
            c = Counter(r[pick] for r in results)
            if any(not 0 <= k < width for k in c):
                raise ValidationError(f"depth out of range for m={m}: {sorted(c)}")
            table.counts[m] = [c.get(k, 0) for k in range(width)]
    out = {}
    if cfg.mode in ("euclidean", "both"):
        out["euclidean"] = eu
    if cfg.mode in ("tropical", "both"):
        out["tropical"] = tr
    return out
