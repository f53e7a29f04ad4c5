"""Packaged experiments: loss of uniform continuity below ``L^2`` and
convergence studies in the Galerkin cutoff."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .birkhoff import BirkhoffState
from .flow import evolve_birkhoff
from .fourier import RealPotential
from .lax import assemble_lax, eigen_decompose


@dataclass
class IllposedCell:
    N: int
    d0: float
    dt: float
    ratio: float
    phase_gap: float


def _weighted_distance(a: BirkhoffState, b: BirkhoffState, beta: float) -> float:
    n = np.arange(1, a.M_B + 1, dtype=float)
    return float(np.sqrt(np.sum(n ** (2 * beta) * np.abs(a.zeta - b.zeta) ** 2)))


def illposed_pair(s: float, N: int, amplitude: float = 1.0, eps: float = 0.1, t: float = 1.0):
    """Two single-mode states at mode ``N`` and the distance ``D`` between them.

    Both have zero phase; their weighted moduli ``N^{s+1/2}|zeta_N|`` are
    ``amplitude`` and ``amplitude + D`` with ``D = min(eps, D_pi)``, where
    ``D_pi`` is the separation at which the two phases are antipodal at time ``t``.
    """
    A = amplitude
    if t > 0:
        d_pi = math.sqrt(A * A + math.pi * N ** (2 * s) / (2 * t)) - A
        D = min(eps, d_pi)
    else:
        D = eps
    w = N ** (-s - 0.5)
    z1 = BirkhoffState.from_modes({N: A * w}, N)
    z2 = BirkhoffState.from_modes({N: (A + D) * w}, N)
    return z1, z2, D


def illposed_cell(s: float, N: int, amplitude: float = 1.0, eps: float = 0.1, t: float = 1.0) -> IllposedCell:
    beta = s + 0.5
    z1, z2, _ = illposed_pair(s, N, amplitude, eps, t)
    d0 = _weighted_distance(z1, z2, beta)
    e1, e2 = evolve_birkhoff(z1, t), evolve_birkhoff(z2, t)
    dt = _weighted_distance(e1, e2, beta)
    gap = float(np.angle(e1.zeta[N - 1] * np.conj(e2.zeta[N - 1])))
    return IllposedCell(N, d0, dt, dt / d0, gap)


def illposed_report(s: float, N_list=(8, 32, 128, 512), amplitude: float = 1.0,
                    eps: float = 0.1, t: float = 1.0, workers: int | None = None) -> dict:
    """Separation ratio of two nearby single-mode solutions along ``N``.

    The ratio is bounded in ``N`` at ``s = 0`` and grows without bound for
    ``-1/2 < s < 0``.
    """
    if not -0.5 < s <= 0:
        raise ValueError(f"s = {s} outside (-1/2, 0]")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        cells = list(pool.map(lambda N: illposed_cell(s, N, amplitude, eps, t), N_list))
    ratios = [c.ratio for c in cells]
    return {"s": s, "t": t, "eps": eps, "amplitude": amplitude,
            "cells": [asdict(c) for c in cells],
            "monotone": bool(all(b > a for a, b in zip(ratios, ratios[1:]))),
            "max_ratio": max(ratios)}


def convergence_study(u: RealPotential, M_list=(16, 32, 64, 128, 256), n_max: int = 16) -> dict:
    """``lambda_n(M)`` for ``n <= n_max`` against the largest cutoff."""
    lams = {M: eigen_decompose(assemble_lax(u.resized(M), M))[0] for M in M_list}
    ref = lams[max(M_list)]
    rows = []
    for M in M_list:
        k = min(n_max, M) + 1
        rows.append({"M": M, "max_dev": float(np.abs(lams[M][:k] - ref[:k]).max())})
    return {"potential": u.digest(), "n_max": n_max, "rows": rows}
