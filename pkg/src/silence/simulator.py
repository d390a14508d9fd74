"""Seeded Monte-Carlo check of silence designs.

Ticks are grouped in fixed blocks; block j draws its uniforms from a Philox
counter-based stream keyed by (seed, j).  Aggregates are summed block by
block in index order, so results do not depend on how blocks are sharded
across workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ._io import json_text
from .density import Density, DistortionKind, Interval
from .errors import InvalidParameterError

BLOCK = 1 << 16


@dataclass(frozen=True)
class SimReport:
    n_ticks: int
    seed: int
    empirical_rate: float
    empirical_mse: float
    empirical_mae: float
    standard_errors: dict

    def to_json(self) -> str:
        return json_text(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "SimReport":
        return cls(**json.loads(text))


def block_uniforms(seed: int, block: int, n: int) -> np.ndarray:
    """Uniforms in the open interval (0, 1) for one block of ticks."""
    ss = np.random.SeedSequence([seed, block])
    bits = np.random.Philox(ss).random_raw(n)
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def _block_sums(d: Density, silence: Interval, estimate: float, seed: int, block: int, n: int):
    x = d.quantile(block_uniforms(seed, block, n))
    silent = (x >= silence.lo) & (x <= silence.hi)
    err = np.where(silent, x - estimate, 0.0)
    sent = (~silent).astype(float)
    sq = DistortionKind.SQUARED_ERROR(err)
    ab = DistortionKind.ABSOLUTE_ERROR(err)
    return np.array([sent.sum(), sq.sum(), ab.sum(), (sq * sq).sum(), (ab * ab).sum()])


def simulate(d: Density, silence: Interval, estimate: float, n_ticks: int, seed: int,
             workers: int = 1) -> SimReport:
    """Draw ``n_ticks`` IID samples, stay silent inside ``silence``, and measure."""
    if not isinstance(n_ticks, (int, np.integer)) or n_ticks < 1:
        raise InvalidParameterError(f"n_ticks must be a positive integer, got {n_ticks}")
    n_blocks = -(-n_ticks // BLOCK)
    sizes = [min(BLOCK, n_ticks - j * BLOCK) for j in range(n_blocks)]

    def run(j):
        return _block_sums(d, silence, estimate, seed, j, sizes[j])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(n_blocks)))
    else:
        parts = [run(j) for j in range(n_blocks)]
    total = np.zeros(5)
    for p in parts:
        total += p
    n = float(n_ticks)
    rate, mse, mae = total[0] / n, total[1] / n, total[2] / n

    def se(mean, mean_sq):
        if n_ticks < 2:
            return 0.0
        var = max(mean_sq - mean * mean, 0.0) * n / (n - 1.0)
        return math.sqrt(var / n)

    errors = {
        "empirical_rate": se(rate, rate),  # indicator: E[s^2] = E[s]
        "empirical_mse": se(mse, total[3] / n),
        "empirical_mae": se(mae, total[4] / n),
    }
    return SimReport(int(n_ticks), int(seed), float(rate), float(mse), float(mae),
                     {k: float(v) for k, v in errors.items()})
