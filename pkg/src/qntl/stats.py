"""Seeded randomness, counting statistics, and distribution-comparison tools.

Every experiment in this package draws its randomness from a stream derived
from a root seed, a text label, and a trial index.  The derivation mixes the
label through SHA-256, so streams for different experiments (or different
trials of the same experiment) are independent, and the same triple always
reproduces the same draws on any platform.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.stats import chi2 as _chi2

__all__ = [
    "MAX_SEED",
    "stream",
    "poisson_sample",
    "poisson_sample_array",
    "Histogram",
    "ZScoreSeries",
    "zscore_compare",
    "chi_square_gof",
    "chsh_estimate",
]

MAX_SEED = 2**64 - 1

# Largest mean for which the term-by-term CDF inversion below stays within
# float range (exp(-mu) underflows near 745).
_MAX_POISSON_MEAN = 700.0


def _label_entropy(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def stream(seed: int, label: str, trial: int = 0) -> np.random.Generator:
    """Derive the RNG stream for ``(seed, label, trial)``.

    Args:
        seed: root seed, 0 <= seed < 2**64.
        label: experiment or sub-experiment name.
        trial: non-negative trial index within the labeled experiment.

    Returns:
        A ``numpy.random.Generator`` whose draws are a pure function of the
        three inputs.
    """
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    if trial < 0:
        raise ValueError(f"trial index must be >= 0, got {trial}")
    seq = np.random.SeedSequence(entropy=(int(seed), _label_entropy(label), int(trial)))
    return np.random.Generator(np.random.PCG64(seq))


def _check_mean(mu: float) -> float:
    mu = float(mu)
    if not math.isfinite(mu) or mu < 0.0:
        raise ValueError(f"Poisson mean must be finite and >= 0, got {mu}")
    if mu > _MAX_POISSON_MEAN:
        raise ValueError(f"Poisson mean {mu} too large for exact CDF inversion")
    return mu


def poisson_sample(mu: float, rng: np.random.Generator) -> int:
    """Draw one Poisson(mu) variate by CDF inversion on a single uniform.

    Inversion keeps the draw an exact, platform-independent function of the
    uniform stream, which vectorized library samplers do not guarantee.
    """
    mu = _check_mean(mu)
    if mu == 0.0:
        return 0
    u = rng.random()
    k = 0
    pmf = math.exp(-mu)
    cdf = pmf
    while u > cdf and pmf > 0.0:
        k += 1
        pmf *= mu / k
        cdf += pmf
    return k


def poisson_sample_array(mu: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized form of :func:`poisson_sample`.

    Consumes exactly one uniform per draw, in order, and returns the same
    counts the scalar routine would produce from the same stream.
    """
    mu = _check_mean(mu)
    if size < 0:
        raise ValueError("size must be >= 0")
    if mu == 0.0:
        rng.random(size)  # keep stream position consistent with the scalar path
        return np.zeros(size, dtype=np.int64)
    u = rng.random(size)
    if size == 0:
        return np.zeros(0, dtype=np.int64)
    umax = float(u.max())
    pmf = math.exp(-mu)
    cdf_steps = [pmf]
    k = 0
    while cdf_steps[-1] < umax and pmf > 0.0:
        k += 1
        pmf *= mu / k
        cdf_steps.append(cdf_steps[-1] + pmf)
    return np.searchsorted(np.asarray(cdf_steps), u, side="left").astype(np.int64)


@dataclass(frozen=True, eq=False)
class Histogram:
    """Integer-bin histogram over 0..max_bin with an optional overflow bin.

    When ``overflow`` is true the last bin aggregates every observation
    >= max_bin, so the total is conserved no matter how large the samples.
    """

    counts: np.ndarray
    total: int
    overflow: bool = True

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size == 0:
            raise ValueError("counts must be a non-empty 1-d array")
        if np.any(counts < 0):
            raise ValueError("bin counts must be non-negative")
        if int(counts.sum()) != int(self.total):
            raise ValueError("bin counts do not sum to the stated total")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "total", int(self.total))

    @property
    def max_bin(self) -> int:
        return self.counts.size - 1

    @property
    def bins(self) -> np.ndarray:
        return np.arange(self.counts.size)

    @classmethod
    def from_samples(cls, values: Sequence[int], max_bin: int = 20, overflow: bool = True) -> "Histogram":
        arr = np.asarray(values, dtype=np.int64)
        if max_bin < 0:
            raise ValueError("max_bin must be >= 0")
        if arr.size and arr.min() < 0:
            raise ValueError("samples must be non-negative integers")
        if overflow:
            clipped = np.minimum(arr, max_bin)
        else:
            if arr.size and arr.max() > max_bin:
                raise ValueError("sample exceeds max_bin and overflow aggregation is off")
            clipped = arr
        counts = np.bincount(clipped, minlength=max_bin + 1)
        return cls(counts=counts, total=int(arr.size), overflow=overflow)

    def frequencies(self) -> np.ndarray:
        if self.total == 0:
            return np.zeros_like(self.counts, dtype=float)
        return self.counts / self.total

    def rebin(self, max_bin: int) -> "Histogram":
        """Aggregate the tail into a smaller overflow bin; total is conserved."""
        if not 0 <= max_bin <= self.max_bin:
            raise ValueError("new max_bin must be within the current range")
        head = self.counts[:max_bin]
        tail = int(self.counts[max_bin:].sum())
        counts = np.concatenate([head, [tail]])
        return Histogram(counts=counts, total=self.total, overflow=True)

    def to_csv(self) -> str:
        lines = ["bin,count"]
        lines.extend(f"{b},{c}" for b, c in zip(self.bins, self.counts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, overflow: bool = True) -> "Histogram":
        rows = [line for line in text.strip().splitlines() if line]
        if not rows or rows[0] != "bin,count":
            raise ValueError("histogram CSV must start with a 'bin,count' header")
        counts = []
        for i, line in enumerate(rows[1:]):
            bin_str, count_str = line.split(",")
            if int(bin_str) != i:
                raise ValueError("histogram CSV bins must be contiguous from 0")
            counts.append(int(count_str))
        arr = np.asarray(counts, dtype=np.int64)
        return cls(counts=arr, total=int(arr.sum()), overflow=overflow)


@dataclass(frozen=True, eq=False)
class ZScoreSeries:
    """Per-bin pooled two-proportion z statistics for two aligned histograms."""

    z: np.ndarray
    n_a: int
    n_b: int

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=float)
        z.setflags(write=False)
        object.__setattr__(self, "z", z)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.z))) if self.z.size else 0.0


def zscore_compare(a: Histogram, b: Histogram) -> ZScoreSeries:
    """Per-bin z-scores of histogram ``a`` against histogram ``b``.

    Uses the pooled two-proportion statistic
    z = (p_a - p_b) / sqrt(p(1-p)(1/n_a + 1/n_b)); bins that are empty in
    both histograms (or saturated in both) score 0.
    """
    if a.counts.size != b.counts.size or a.overflow != b.overflow:
        raise ValueError("histograms are not bin-aligned")
    if a.total == 0 or b.total == 0:
        raise ValueError("cannot compare an empty histogram")
    ca = a.counts.astype(float)
    cb = b.counts.astype(float)
    na, nb = float(a.total), float(b.total)
    pooled = (ca + cb) / (na + nb)
    var = pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb)
    diff = ca / na - cb / nb
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(var > 0.0, diff / np.sqrt(var), 0.0)
    return ZScoreSeries(z=z, n_a=a.total, n_b=b.total)


def chi_square_gof(
    hist: Histogram,
    pmf: Callable[[int], float],
    min_expected: float = 5.0,
) -> float:
    """Chi-square goodness-of-fit p-value of ``hist`` against an analytic pmf.

    Expected counts below ``min_expected`` are merged rightward into the tail
    before the statistic is formed, so sparse tail bins cannot dominate.
    The last bin is treated as the distribution's full upper tail when the
    histogram aggregates overflow.
    """
    if hist.total == 0:
        raise ValueError("cannot test an empty histogram")
    if hist.counts.size < 2:
        raise ValueError("need at least two bins for a goodness-of-fit test")
    m = hist.max_bin
    probs = np.array([float(pmf(k)) for k in range(m)], dtype=float)
    if np.any(probs < -1e-12):
        raise ValueError("pmf returned a negative probability")
    probs = np.clip(probs, 0.0, 1.0)
    if hist.overflow:
        tail = max(0.0, 1.0 - float(probs.sum()))
    else:
        tail = float(pmf(m))
    expected = np.append(probs, tail) * hist.total
    observed = hist.counts.astype(float)

    # Merge the right tail until every retained bin has enough mass.
    exp_list = list(expected)
    obs_list = list(observed)
    while len(exp_list) > 1 and exp_list[-1] < min_expected:
        exp_list[-2] += exp_list[-1]
        obs_list[-2] += obs_list[-1]
        del exp_list[-1], obs_list[-1]
    exp_arr = np.asarray(exp_list)
    obs_arr = np.asarray(obs_list)
    keep = exp_arr > 0.0
    exp_arr = exp_arr[keep]
    obs_arr = obs_arr[keep]
    if exp_arr.size < 2:
        raise ValueError("fewer than two usable bins after tail merging")
    stat = float(np.sum((obs_arr - exp_arr) ** 2 / exp_arr))
    dof = exp_arr.size - 1
    return float(_chi2.sf(stat, dof))


def chsh_estimate(
    alice_settings: Sequence[int],
    bob_settings: Sequence[int],
    products: Sequence[int],
) -> float:
    """Estimate the CHSH combination from sampled correlation rounds.

    Settings are 0/1 indices into each side's two analyzer angles; products
    are the +/-1 outcome products.  The combination matches the analytic
    convention: |E00 - E01 + E10 + E11|.
    """
    xs = np.asarray(alice_settings, dtype=np.int64)
    ys = np.asarray(bob_settings, dtype=np.int64)
    ps = np.asarray(products, dtype=float)
    if not (xs.shape == ys.shape == ps.shape):
        raise ValueError("setting and product arrays must be the same length")
    if xs.size == 0:
        raise ValueError("no correlation rounds to estimate from")
    if np.any((xs < 0) | (xs > 1)) or np.any((ys < 0) | (ys > 1)):
        raise ValueError("settings must be 0 or 1")
    corr = np.zeros((2, 2))
    for x in (0, 1):
        for y in (0, 1):
            mask = (xs == x) & (ys == y)
            if not mask.any():
                raise ValueError(f"no samples for setting pair ({x}, {y})")
            corr[x, y] = float(ps[mask].mean())
    return abs(corr[0, 0] - corr[0, 1] + corr[1, 0] + corr[1, 1])
