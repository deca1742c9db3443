"""Seeded Monte Carlo of the helical random walk down the peg board.

Each ball takes n independent left/right deflections with rightward
probability p.  On a cylinder with M slots the angle advances half a
slot per deflection, the net angle after n rows is S_n * dtheta / 2 with
S_n the signed step sum, and the landing slot is the rightward count
X mod M.  In flat mode (M = None) the bin is X itself, over n+1 bins.

Randomness is counter-based: draw (b, k) for ball b, step k is a pure
64-bit hash of (seed, b, k) (SplitMix64 finaliser over a Weyl counter).
Histograms are therefore bit-identical for any chunk size or execution
order, and any single ball can be replayed in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angular import TWO_PI, wrap_angle

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)

_U64_MASK = 0xFFFFFFFFFFFFFFFF

HISTOGRAM_CSV_HEADER = "slot,count,frequency"

DEFAULT_CHUNK = 1 << 16


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 output function; uint64 lanes, wrapping arithmetic."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX_A
        z = (z ^ (z >> np.uint64(27))) * _MIX_B
        return z ^ (z >> np.uint64(31))


def _step_uniforms(seed: int, lo: int, hi: int, n: int) -> np.ndarray:
    """Uniforms in [0, 1) for balls lo..hi-1, shape (hi-lo, n)."""
    with np.errstate(over="ignore"):
        balls = np.arange(lo, hi, dtype=np.uint64)
        keys = _mix64(np.uint64(seed & _U64_MASK) + (balls + np.uint64(1)) * _GOLDEN)
        steps = (np.arange(n, dtype=np.uint64) + np.uint64(1)) * _GOLDEN
        bits = _mix64(keys[:, None] + steps[None, :])
    return (bits >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class WalkConfig:
    """One Monte Carlo experiment: board shape, bias, ball count, seed."""

    n: int
    M: int | None       # None selects flat mode (no wrapping)
    p: float
    balls: int
    seed: int = 0
    record_traces: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        if self.M is not None and self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p!r}")
        if self.balls < 1:
            raise ValueError(f"balls must be >= 1, got {self.balls}")

    @property
    def planar(self) -> bool:
        return self.M is None

    @property
    def bins(self) -> int:
        return self.n + 1 if self.planar else self.M


@dataclass(frozen=True)
class BallTrace:
    """One ball's deflection record and landing state."""

    steps: tuple[int, ...]   # +-1 per row
    final_s: int             # signed step sum
    final_theta: float       # landing angle in [0, 2*pi); 0.0 in flat mode
    final_z: float           # vertical drop in row units (starts at 0)
    bin: int


@dataclass(frozen=True)
class BinHistogram:
    """Integer landing counts over the board's bins."""

    M: int
    counts: tuple[int, ...]
    total: int

    def __post_init__(self):
        if len(self.counts) != self.M:
            raise ValueError(f"expected {self.M} counts, got {len(self.counts)}")
        if sum(self.counts) != self.total:
            raise ValueError(
                f"counts sum to {sum(self.counts)}, declared total {self.total}")

    def frequencies(self) -> tuple[float, ...]:
        return tuple(c / self.total for c in self.counts)


@dataclass(frozen=True)
class SimulationResult:
    histogram: BinHistogram
    traces: tuple[BallTrace, ...] | None


def _trace_from_rights(config: WalkConfig, rights: np.ndarray) -> BallTrace:
    x = int(rights.sum())
    s = 2 * x - config.n
    steps = tuple(1 if r else -1 for r in rights)
    if config.planar:
        theta, landing = 0.0, x
    else:
        theta = wrap_angle(s * (TWO_PI / config.M) / 2.0)
        landing = x % config.M
    return BallTrace(steps=steps, final_s=s, final_theta=theta,
                     final_z=-float(config.n), bin=landing)


def simulate_ball(config: WalkConfig, ball_index: int) -> BallTrace:
    """Replay a single ball; identical to its row in a full simulation."""
    if not 0 <= ball_index < config.balls:
        raise ValueError(f"ball_index {ball_index} out of range [0, {config.balls})")
    u = _step_uniforms(config.seed, ball_index, ball_index + 1, config.n)
    return _trace_from_rights(config, u[0] < config.p)


def simulate(config: WalkConfig, chunk: int = DEFAULT_CHUNK) -> SimulationResult:
    """Run all balls and bin the landings.

    chunk bounds working memory only; the histogram (and traces) are a
    pure function of (seed, config) regardless of chunking.
    """
    if chunk < 1:
        raise ValueError(f"chunk must be >= 1, got {chunk}")
    nbins = config.bins
    counts = np.zeros(nbins, dtype=np.int64)
    traces: list[BallTrace] = []
    for lo in range(0, config.balls, chunk):
        hi = min(config.balls, lo + chunk)
        rights = _step_uniforms(config.seed, lo, hi, config.n) < config.p
        x = rights.sum(axis=1).astype(np.int64)
        landings = x if config.planar else x % config.M
        counts += np.bincount(landings, minlength=nbins)
        if config.record_traces:
            traces.extend(_trace_from_rights(config, row) for row in rights)
    hist = BinHistogram(M=nbins, counts=tuple(int(c) for c in counts),
                        total=config.balls)
    return SimulationResult(histogram=hist,
                            traces=tuple(traces) if config.record_traces else None)


def planar_histogram(config: WalkConfig, chunk: int = DEFAULT_CHUNK) -> BinHistogram:
    """Flat-mode landing counts over bins 0..n (no wrapping)."""
    if not config.planar:
        raise ValueError("planar_histogram needs a flat config (M=None)")
    return simulate(config, chunk=chunk).histogram


def unwrapped_stats(traces, m_slots: int) -> tuple[float, float]:
    """Sample mean and variance of the unwrapped angle S_n * dtheta / 2."""
    if not traces:
        raise ValueError("no traces to summarise")
    half_step = math.pi / m_slots
    vals = np.array([t.final_s for t in traces], dtype=float) * half_step
    mean = float(vals.mean())
    var = float(vals.var(ddof=1)) if len(vals) > 1 else 0.0
    return mean, var


def histogram_to_csv(hist: BinHistogram) -> str:
    lines = [HISTOGRAM_CSV_HEADER]
    for k, (c, f) in enumerate(zip(hist.counts, hist.frequencies())):
        lines.append(f"{k},{c},{f!r}")
    return "\n".join(lines) + "\n"
