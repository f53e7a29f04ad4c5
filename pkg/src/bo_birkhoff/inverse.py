"""Numerical inverse of the Birkhoff map and finite-gap potentials."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .birkhoff import BirkhoffState, birkhoff_vector
from .errors import ConditioningError, ConvergenceError
from .fourier import RealPotential, pad_full
from .lax import GAP_TOL, compute_spectrum, g_infinity

log = logging.getLogger(__name__)

SIGMA_MIN = 1e-10


@dataclass(frozen=True)
class NewtonConfig:
    M: int = 128
    max_iter: int = 40
    step_tol: float = 1e-15
    resid_tol: float = 1e-11
    fd_step: float = 1e-6
    contraction: float = 0.5
    slope: float = 1e-4
    min_step: float = 1e-6

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        for name in ("step_tol", "resid_tol", "fd_step", "slope", "min_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.contraction < 1:
            raise ValueError("contraction must lie in (0, 1)")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class NewtonResult:
    potential: RealPotential
    residual: float
    iterations: int
    log: list = field(default_factory=list)


def phi_smooth(u: RealPotential, M: int, M_B: int) -> BirkhoffState:
    """Coordinates through the threshold-free evaluation, as used for Newton targets."""
    return BirkhoffState(birkhoff_vector(u, M, M_B), {"M": M, "potential": u.digest()})


def linear_guess(z: BirkhoffState) -> RealPotential:
    """``uhat(n) = -sqrt(n) zeta_n``, the inverse of the linearization at 0."""
    n = np.arange(1, z.M_B + 1)
    return RealPotential(-np.sqrt(n) * z.zeta)


def _to_real(c: np.ndarray) -> np.ndarray:
    return np.concatenate([c.real, c.imag])


def _to_complex(x: np.ndarray) -> np.ndarray:
    m = len(x) // 2
    return x[:m] + 1j * x[m:]


def newton_solve(z_target: BirkhoffState, cfg: NewtonConfig = NewtonConfig(),
                 warm_start: RealPotential | None = None) -> NewtonResult:
    """Damped Newton for ``Phi(u) = z_target`` on the modes ``1..M_B``.

    The residual is measured in the ``h^{1/2}`` norm.  The Jacobian is
    rebuilt by forward differences at every iteration.
    """
    M_B = z_target.M_B
    if cfg.M < 2 * M_B:
        raise ValueError(f"Galerkin cutoff {cfg.M} must be at least 2 M_B = {2 * M_B}")
    w = np.sqrt(np.arange(1, M_B + 1))
    target = z_target.zeta

    def F(x):
        z = birkhoff_vector(RealPotential(_to_complex(x)), cfg.M, M_B)
        return _to_real(w * (z - target))

    u0 = warm_start.resized(M_B) if warm_start is not None else linear_guess(z_target)
    x = _to_real(u0.coeffs)
    r = F(x)
    res = float(np.linalg.norm(r))
    records = [{"iter": 0, "residual": res, "step": 0.0, "damping": 1.0}]
    it = 0
    while res > cfg.resid_tol:
        if it >= cfg.max_iter:
            raise ConvergenceError(f"Newton did not converge in {cfg.max_iter} iterations "
                                   f"(residual {res:.3e})", residual=res)
        it += 1
        J = np.empty((len(x), len(x)))
        for j in range(len(x)):
            xp = x.copy()
            xp[j] += cfg.fd_step
            J[:, j] = (F(xp) - r) / cfg.fd_step
        U, sv, Vt = np.linalg.svd(J)
        if sv[-1] < SIGMA_MIN:
            raise ConditioningError(f"Jacobian smallest singular value {sv[-1]:.2e}")
        dx = -(Vt.T @ ((U.T @ r) / sv))
        t = 1.0
        while True:
            x_new = x + t * dx
            r_new = F(x_new)
            res_new = float(np.linalg.norm(r_new))
            if res_new ** 2 <= (1 - 2 * cfg.slope * t) * res ** 2:
                break
            t *= cfg.contraction
            if t < cfg.min_step:
                raise ConvergenceError(f"line search failed at iteration {it} "
                                       f"(residual {res:.3e})", residual=res)
        step = float(np.linalg.norm(t * dx))
        x, r, res = x_new, r_new, res_new
        records.append({"iter": it, "residual": res, "step": step, "damping": t})
        log.debug("newton %d residual %.3e step %.3e damping %.3g", it, res, step, t)
        if step < cfg.step_tol and res > cfg.resid_tol:
            raise ConvergenceError(f"Newton stalled at residual {res:.3e}", residual=res)
    return NewtonResult(RealPotential(_to_complex(x)), res, it, records)


def newton_invert(z_target: BirkhoffState, cfg: NewtonConfig = NewtonConfig(),
                  warm_start: RealPotential | None = None) -> RealPotential:
    return newton_solve(z_target, cfg, warm_start).potential


def finite_gap(w: RealPotential, N: int, cfg: NewtonConfig = NewtonConfig(),
               M_B: int | None = None, gap_tol: float = GAP_TOL) -> RealPotential:
    """Potential whose first ``N`` coordinates are those of ``w`` and all others vanish."""
    if M_B is None:
        M_B = cfg.M // 2
    spec = compute_spectrum(w, cfg.M, M_B=M_B)
    if spec.gaps[N - 1] <= gap_tol:
        raise ConditioningError(f"gap {N} of the input is closed ({spec.gaps[N - 1]:.2e})")
    z = birkhoff_vector(w, cfg.M, M_B)
    z[N:] = 0
    return newton_invert(BirkhoffState(z), cfg, warm_start=w)


@dataclass
class FiniteGapReport:
    N: int
    M_B: int
    lambda_dev: float
    one_dev: float
    eigvec_dev: float
    expansion_dev: float

    @property
    def max_dev(self) -> float:
        return max(self.lambda_dev, self.one_dev, self.eigvec_dev, self.expansion_dev)

    def to_json(self) -> dict:
        d = asdict(self)
        d["max_dev"] = self.max_dev
        return d


def verify_finite_gap(u: RealPotential, N: int, M: int = 128, M_B: int | None = None) -> FiniteGapReport:
    """Residuals of the finite-gap structure beyond index ``N``.

    Reports ``max |lambda_n - n|`` for ``N <= n <= M_B``, ``max |<1|f_n>|`` for
    ``n > N``, ``max ||f_n - c g_inf e^{inx}||`` over ``N <= n <= M_B`` with
    ``|c| = 1`` chosen optimally, and ``||1 - sum_{a<=N} <1|f_a> f_a||``.
    """
    spec = compute_spectrum(u, M, M_B=M_B)
    M_B = spec.M_B
    n = np.arange(N, M_B + 1)
    lam_dev = float(np.abs(spec.lambdas[n] - n).max(initial=0.0))
    one_dev = float(np.abs(spec.one_products[N + 1:M_B + 1]).max(initial=0.0))
    g = pad_full(g_infinity(u, 2 * M), 2 * M)
    vec_dev = 0.0
    for k in n:
        ref = g[2 * M - k:2 * M - k + M + 1]
        f = spec.f(k)
        c = np.vdot(ref, f)
        c = c / abs(c) if abs(c) > 0 else 1.0
        vec_dev = max(vec_dev, float(np.linalg.norm(f - c * ref)))
    one = np.zeros(M + 1, dtype=complex)
    one[0] = 1.0
    V = spec.eigvecs[:, :N + 1]
    exp_dev = float(np.linalg.norm(one - V @ spec.one_products[:N + 1]))
    return FiniteGapReport(N, M_B, lam_dev, one_dev, vec_dev, exp_dev)
