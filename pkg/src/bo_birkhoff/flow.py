"""Evolution in Birkhoff coordinates and the coordinate-space solver."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .birkhoff import BirkhoffState, birkhoff_vector
from .errors import BOError, ConvergenceError
from .fourier import RealPotential


@dataclass
class Trajectory:
    times: np.ndarray
    samples: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.samples):
            raise ValueError("times and samples differ in length")

    def at(self, t: float) -> RealPotential:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > 1e-12:
            raise KeyError(f"no sample at t = {t}")
        return self.samples[i]

    def to_json(self) -> dict:
        return {"times": [float(t) for t in self.times],
                "samples": [u.to_json() for u in self.samples],
                "meta": dict(self.meta)}

    @classmethod
    def from_json(cls, data: dict) -> "Trajectory":
        return cls(data["times"], [RealPotential.from_json(s) for s in data["samples"]],
                   data.get("meta", {}))


def frequencies(z: BirkhoffState) -> np.ndarray:
    """``omega_n = n^2 - 2 sum_{k<=n} k|zeta_k|^2 - 2n sum_{k>n} |zeta_k|^2``."""
    a = np.abs(z.zeta) ** 2
    n = np.arange(1, z.M_B + 1, dtype=float)
    head = np.cumsum(n * a)
    tail = np.sum(a) - np.cumsum(a)
    return n ** 2 - 2 * head - 2 * n * tail


def evolve_birkhoff(z0: BirkhoffState, t: float) -> BirkhoffState:
    """``zeta_n(t) = zeta_n(0) exp(i t omega_n(zeta(0)))``."""
    omega = frequencies(z0)
    meta = dict(z0.meta)
    meta["t"] = float(t)
    return BirkhoffState(z0.zeta * np.exp(1j * t * omega), meta)


def solve_bo(u0: RealPotential, times, cfg=None, M_B: int | None = None,
             mode: str = "sequential", workers: int | None = None) -> Trajectory:
    """Potential at each time via ``Phi``, phase rotation and Newton inversion.

    ``sequential`` warm-starts each inversion from the previous sample;
    ``parallel`` starts every inversion from the linear guess.
    """
    from .inverse import NewtonConfig, newton_solve
    from .lax import compute_spectrum

    if cfg is None:
        cfg = NewtonConfig()
    if M_B is None:
        M_B = min(compute_spectrum(u0, cfg.M).M_B, cfg.M // 2)
    times = np.asarray(times, dtype=float)
    z0 = BirkhoffState(birkhoff_vector(u0, cfg.M, M_B), {"M": cfg.M})

    def invert(t, warm):
        try:
            return newton_solve(evolve_birkhoff(z0, t), cfg, warm)
        except BOError as exc:
            raise ConvergenceError(f"inversion failed at t = {t:.6g}: {exc}", time=float(t)) from exc

    if mode == "sequential":
        results, warm = [], u0
        for t in times:
            res = invert(t, warm)
            results.append(res)
            warm = res.potential
    elif mode == "parallel":
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: invert(t, None), times))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    diag = [{"t": float(t), "residual": r.residual, "iterations": r.iterations}
            for t, r in zip(times, results)]
    meta = {"method": "birkhoff", "M": cfg.M, "M_B": M_B, "potential": u0.digest(),
            "frequencies": frequencies(z0).tolist(), "inversions": diag}
    return Trajectory(times, [r.potential for r in results], meta)


def galilean_shift(traj: Trajectory, c: float) -> Trajectory:
    """``u(t, x - 2ct) + c``; the mean is carried in ``meta["mean"]``."""
    samples = []
    for t, u in zip(traj.times, traj.samples):
        n = np.arange(1, u.M + 1)
        samples.append(RealPotential(u.coeffs * np.exp(-2j * c * t * n)))
    meta = dict(traj.meta)
    meta["mean"] = meta.get("mean", 0.0) + c
    return Trajectory(traj.times.copy(), samples, meta)
