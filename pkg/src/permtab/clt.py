"""Monte Carlo checks of normal approximations for tableau statistics."""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import ndtr

from .distribution import DistributionTable
from .exact import distribution_from_pgf, pgf
from .growth import sample_stats
from .perms import batch_count_31_2, batch_descents, batch_rl_minima, random_permutations
from .rng import DEFAULT_SEED, substreams

__all__ = [
    "STATISTICS",
    "SOURCES",
    "ExperimentConfig",
    "ExperimentReport",
    "normalizers",
    "exact_normalizers",
    "ks_normal",
    "ks_normal_exact",
    "exact_ks",
    "sample_records",
    "draw",
    "run_mc",
    "PatternCovariances",
    "pattern_covariances",
    "variance_ratio",
]

STATISTICS = ("U", "F", "R", "C", "S", "Y", "pattern31_2")
SOURCES = ("tableau", "permutation", "indicator")

_COMPATIBLE = {
    "tableau": {"U", "F", "R", "C", "S", "Y"},
    "permutation": {"U", "R", "C", "S", "pattern31_2"},
    "indicator": {"U", "F"},
}


def normalizers(statistic: str, n: int) -> tuple[float, float]:
    """Asymptotic centring and scaling from the limiting normal laws."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if statistic in ("U", "F"):
        return math.log(n), math.sqrt(math.log(n))
    if statistic == "R":
        return (n + 1) / 2, math.sqrt((n + 1) / 12)
    if statistic == "C":
        return (n - 1) / 2, math.sqrt((n + 1) / 12)
    if statistic in ("S", "Y", "pattern31_2"):
        return n * n / 12, math.sqrt(n**3 / 180)
    raise ValueError(f"unknown statistic {statistic!r}")


def exact_normalizers(statistic: str, n: int) -> tuple[float, float]:
    """Finite-n mean and standard deviation.

    Y only has an exact mean (E S + E C); its scale stays asymptotic.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if statistic in ("U", "F"):
        h1 = math.fsum(1 / k for k in range(1, n + 1))
        h2 = math.fsum(1 / k**2 for k in range(1, n + 1))
        return (h1 if statistic == "U" else h1 - 1), math.sqrt(h1 - h2)
    if statistic in ("R", "C"):
        return normalizers(statistic, n)
    mean_s = (n - 1) * (n - 2) / 12
    if statistic in ("S", "pattern31_2"):
        return mean_s, math.sqrt((n - 2) * (2 * n * n + 11 * n - 1) / 360)
    if statistic == "Y":
        return mean_s + (n - 1) / 2, normalizers("Y", n)[1]
    raise ValueError(f"unknown statistic {statistic!r}")


def ks_normal(samples) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF and N(0, 1)."""
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.size
    if m == 0:
        raise ValueError("ks_normal needs at least one sample")
    cdf = ndtr(x)
    upper = np.arange(1, m + 1) / m - cdf
    lower = cdf - np.arange(0, m) / m
    return float(max(upper.max(), lower.max()))


def ks_normal_exact(dist: DistributionTable, center: float, scale: float) -> float:
    """KS distance between an exact lattice distribution and N(center, scale^2)."""
    total = dist.total
    below = 0
    worst = 0.0
    for value, count in dist.counts.items():
        phi = float(ndtr((value - center) / scale))
        worst = max(worst, abs(phi - below / total))
        below += count
        worst = max(worst, abs(below / total - phi))
    return worst


def exact_ks(statistic: str, n: int, normalization: str = "exact") -> float:
    """KS distance of the exact law of U, F, R, C or S (from its pgf) to the normal.

    S at n = 200 takes a couple of minutes and about 2 GB.
    """
    center, scale = (exact_normalizers if normalization == "exact" else normalizers)(statistic, n)
    return ks_normal_exact(distribution_from_pgf(pgf(statistic, n), n), center, scale)


def sample_records(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Sum of independent Bernoulli(1/k), k = 1..n, for ``size`` draws.

    Uses record times: after a record at time t the next one is at
    ``floor(t / V) + 1`` with V uniform on (0, 1], which has
    ``P(next > m) = t / m``, exactly the law of the indicator sequence.
    Cost is O(log n) per draw.
    """
    count = np.ones(size, dtype=np.int64)
    t = np.ones(size, dtype=float)
    active = np.ones(size, dtype=bool)
    while active.any():
        v = 1.0 - rng.random(int(active.sum()))
        nxt = np.floor(t[active] / v) + 1
        hit = nxt <= n
        idx = np.flatnonzero(active)
        count[idx[hit]] += 1
        t[idx[hit]] = nxt[hit]
        active[idx[~hit]] = False
    return count


@dataclass(frozen=True)
class ExperimentConfig:
    statistic: str
    n: int
    trials: int
    source: str = "tableau"
    seed: int = DEFAULT_SEED
    normalization: str = "exact"  # or "asymptotic"
    threads: int = 1

    def __post_init__(self):
        if self.statistic not in STATISTICS:
            raise ValueError(f"unknown statistic {self.statistic!r}")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.statistic not in _COMPATIBLE[self.source]:
            raise ValueError(f"statistic {self.statistic} is not available from source {self.source}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.normalization not in ("exact", "asymptotic"):
            raise ValueError(f"unknown normalization {self.normalization!r}")


@dataclass
class ExperimentReport:
    config: dict
    center: float
    scale: float
    mean: float
    variance: float
    skewness: float
    ks_distance: float
    raw_mean: float
    rng: str = "numpy.PCG64/SeedSequence"
    samples: np.ndarray | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("samples")
        return out

    def samples_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["raw", "normalized"])
        z = (self.samples - self.center) / self.scale
        for raw, norm in zip(self.samples, z):
            writer.writerow([int(raw), repr(float(norm))])
        return buf.getvalue()


def draw(statistic: str, source: str, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` raw values of a statistic from one source."""
    if source == "tableau":
        return sample_stats(n, size, rng)[statistic]
    if source == "indicator":
        u = sample_records(n, size, rng)
        return u if statistic == "U" else u - 1
    perms = random_permutations(n, size, rng)
    if statistic == "U":
        return batch_rl_minima(perms)
    if statistic == "R":
        return batch_descents(perms) + 1
    if statistic == "C":
        return n - 1 - batch_descents(perms)
    return batch_count_31_2(perms)


def _chunk_size(source: str, n: int) -> int:
    if source == "indicator":
        return 100_000
    return max(1, min(20_000, 20_000_000 // n))


def run_mc(cfg: ExperimentConfig, keep_samples: bool = False) -> ExperimentReport:
    """Draw ``cfg.trials`` values, normalise, and summarise.

    Trials are split in fixed-size chunks, chunk i using the i-th child
    stream of ``cfg.seed``; the result does not depend on ``cfg.threads``.
    """
    chunk = _chunk_size(cfg.source, cfg.n)
    sizes = [chunk] * (cfg.trials // chunk)
    if cfg.trials % chunk:
        sizes.append(cfg.trials % chunk)
    streams = substreams(cfg.seed, len(sizes))

    def work(i: int) -> np.ndarray:
        return draw(cfg.statistic, cfg.source, cfg.n, sizes[i], streams[i])

    if cfg.threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(i) for i in range(len(sizes))]
    raw = np.concatenate(parts)

    center, scale = (exact_normalizers if cfg.normalization == "exact" else normalizers)(cfg.statistic, cfg.n)
    z = (raw - center) / scale
    m = z.size
    mean = math.fsum(z) / m
    dev = z - mean
    var = math.fsum(dev * dev) / (m - 1) if m > 1 else 0.0
    third = math.fsum(dev**3) / m
    skew = third / var**1.5 if var > 0 else 0.0
    return ExperimentReport(
        config=asdict(cfg),
        center=center,
        scale=scale,
        mean=mean,
        variance=var,
        skewness=skew,
        ks_distance=ks_normal(z),
        raw_mean=math.fsum(raw.astype(float)) / m,
        samples=raw if keep_samples else None,
    )


# covariance constants of the 31-2 indicators -------------------------------

PAIRS = (
    ((2, 3), (2, 4)),
    ((2, 5), (4, 5)),
    ((2, 4), (3, 5)),
    ((2, 5), (3, 4)),
    ((2, 3), (4, 5)),
    ((2, 4), (4, 5)),
)


@dataclass(frozen=True)
class PatternCovariances:
    single: Fraction  # E I_{i,j}
    expectations: dict[str, Fraction]
    covariances: dict[str, Fraction]
    coefficient: Fraction  # var S_n ~ coefficient * n^3


def pattern_covariances() -> PatternCovariances:
    """Exact pair expectations of ``I_{i,j} = [X_{i-1} > X_j > X_i]`` over
    all 120 orderings of five exchangeable values."""

    def ind(x, i, j):
        return x[i - 2] > x[j - 1] > x[i - 1]

    orders = list(itertools.permutations(range(5)))
    single = Fraction(sum(ind(x, 2, 3) for x in orders), len(orders))
    expectations = {}
    for a, b in PAIRS:
        hits = sum(1 for x in orders if ind(x, *a) and ind(x, *b))
        expectations[f"I{a[0]}{a[1]}*I{b[0]}{b[1]}"] = Fraction(hits, len(orders))
    covariances = {k: v - single**2 for k, v in expectations.items()}
    return PatternCovariances(single, expectations, covariances, sum(covariances.values()) / 3)


def variance_ratio(n: int) -> Fraction:
    """Exact var S_n divided by n^3/180."""
    return Fraction((n - 2) * (2 * n * n + 11 * n - 1), 360) / Fraction(n**3, 180)
