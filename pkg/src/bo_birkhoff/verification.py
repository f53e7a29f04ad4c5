"""Invariant checks shared by the ``verify`` command and the test suite.

Every check returns a :class:`CheckResult` holding the measured values next
to the tolerances they were judged against.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .birkhoff import birkhoff_coords, birkhoff_vector, canonical_check, phi, trace_check
from .direct import IntegratorConfig, conserved_report, evolve
from .experiments import illposed_report
from .flow import frequencies, solve_bo
from .fourier import HardyFunction, RealPotential, random_smooth
from .hardy import make_symbols, toeplitz_apply, toeplitz_inverse
from .inverse import NewtonConfig, finite_gap, newton_invert, phi_smooth, verify_finite_gap
from .lax import compute_spectrum, eigen_residuals

ASYMPTOTIC_BOUND = 7 / 12 * math.exp(1 / 3)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: dict
    tolerance: dict
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        vals = ", ".join(f"{k}={_short(v)}" for k, v in self.measured.items() if not isinstance(v, (list, dict)))
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {vals}"


def _short(v):
    return f"{v:.3e}" if isinstance(v, float) else v


def random_suite(seed: int = 0, count: int = 20, M: int = 128, max_norm: float = 0.5) -> list:
    """Band-limited random potentials with ``||u||_0`` spread over ``[0.05, max_norm]``."""
    rng = np.random.default_rng(seed)
    norms = np.linspace(0.05, max_norm, count)
    return [random_smooth(M, rng, norm=float(r)) for r in norms]


@lru_cache(maxsize=4)
def _suite(seed: int, M: int):
    return tuple(random_suite(seed, 20, M))


@lru_cache(maxsize=4)
def _suite_spectra(seed: int, M: int):
    return tuple(compute_spectrum(u, M) for u in _suite(seed, M))


def _timed(fn):
    def wrapper(*args, **kw):
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        res.elapsed = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_baseline(seed: int = 0, M: int = 64) -> CheckResult:
    """Zero potential: ``lambda_n = n``, ``kappa_0 = 1``, ``n kappa_n = 1``, ``mu_n = 1``, ``zeta = 0``."""
    spec = compute_spectrum(RealPotential.zero(M), M)
    n = np.arange(M + 1)
    z = phi(RealPotential.zero(M), M).zeta
    m = {
        "lambda_dev": float(np.abs(spec.lambdas - n).max()),
        "kappa0_dev": float(abs(spec.kappas[0] - 1)),
        "n_kappa_dev": float(np.abs(n[1:] * spec.kappas[1:] - 1).max()),
        "kappa_unit_dev": float(np.abs(spec.kappas - 1).max()),
        "mu_dev": float(np.abs(spec.mus - 1).max()),
        "zeta_max": float(np.abs(z).max()),
    }
    tol = {"lambda_dev": 1e-12, "kappa0_dev": 1e-12, "n_kappa_dev": 1e-12, "mu_dev": 1e-12, "zeta_max": 0.0}
    ok = all(m[k] <= tol[k] for k in tol)
    return CheckResult("baseline", ok, m, tol)


@_timed
def check_spectral_structure(seed: int = 0, M: int = 128) -> CheckResult:
    min_spacing, min_gap, ortho, resid = np.inf, np.inf, 0.0, 0.0
    for u, spec in zip(_suite(seed, M), _suite_spectra(seed, M)):
        lam = spec.lambdas[:spec.M_B + 1]
        min_spacing = min(min_spacing, float(np.diff(lam).min()))
        min_gap = min(min_gap, float(spec.gaps[:spec.M_B].min()))
        V = spec.eigvecs
        ortho = max(ortho, float(np.abs(V.conj().T @ V - np.eye(M + 1)).max()))
        resid = max(resid, float(eigen_residuals(u, spec)[:spec.M_B + 1].max()))
    m = {"min_spacing": min_spacing, "min_gap": min_gap, "orthonormality": ortho, "eigen_residual": resid}
    ok = min_spacing >= 1 - 1e-8 and min_gap >= -1e-8 and ortho <= 1e-10 and resid <= 1e-9
    return CheckResult("spectral_structure", ok, m,
                       {"min_spacing": 1 - 1e-8, "min_gap": -1e-8, "orthonormality": 1e-10,
                        "eigen_residual": 1e-9})


@_timed
def check_action(seed: int = 0, M: int = 128) -> CheckResult:
    """``| |zeta_n|^2 - gamma_n |`` on both evaluation routes."""
    dev, dev_smooth = 0.0, 0.0
    for u, spec in zip(_suite(seed, M), _suite_spectra(seed, M)):
        z = birkhoff_coords(spec).zeta
        g = spec.gaps[:spec.M_B]
        open_ = g > spec.gap_tol
        dev = max(dev, float(np.abs(np.abs(z[open_]) ** 2 - g[open_]).max(initial=0.0)))
        zs = birkhoff_vector(u, M, spec.M_B)
        dev_smooth = max(dev_smooth, float(np.abs(np.abs(zs) ** 2 - g).max()))
    m = {"max_dev": dev, "max_dev_smooth": dev_smooth}
    return CheckResult("action", max(dev, dev_smooth) <= 1e-9, m, {"max_dev": 1e-9})


@_timed
def check_trace(seed: int = 0, M: int = 128) -> CheckResult:
    samples = [u for u in _suite(seed, M) if u.l2_norm() <= 0.3]
    samples.append(RealPotential.cosine(1, 0.2, M))
    worst, lam_ok = 0.0, True
    for u in samples:
        r = trace_check(u, M)
        worst = max(worst, r.rel_error)
        lam_ok &= r.lambda0_ok
    m = {"max_rel_error": worst, "lambda0_bound": bool(lam_ok), "samples": len(samples)}
    return CheckResult("trace", worst <= 1e-4 and lam_ok, m, {"max_rel_error": 1e-4})


def linearization_errors(v: RealPotential, eps_list=(1e-2, 1e-3, 1e-4), M: int = 64, M_B: int = 16):
    n = np.arange(1, M_B + 1)
    lin = -v.resized(M_B).coeffs / np.sqrt(n)
    return np.array([np.linalg.norm(birkhoff_vector(v * e, M, M_B) - e * lin) for e in eps_list])


@_timed
def check_linearization(seed: int = 0) -> CheckResult:
    v = RealPotential.from_modes({1: 0.5, 2: 0.25j, 3: -0.1}, 64)
    eps = np.array([1e-2, 1e-3, 1e-4])
    err = linearization_errors(v, eps)
    slope = float(np.polyfit(np.log(eps), np.log(err), 1)[0])
    m = {"slope": slope, "err_over_eps2": (err / eps ** 2).tolist()}
    return CheckResult("linearization", abs(slope - 2) <= 0.1, m, {"slope": "2 +- 0.1"})


@_timed
def check_canonical(seed: int = 0, mutation: str | None = None) -> CheckResult:
    u = RealPotential.cosine(1, 0.4, 64) + RealPotential.cosine(2, 0.2, 64)
    r = canonical_check(u, n_max=3, M=64, h=1e-5, k_max=16, mutation=mutation)
    m = {"dev_plain": r.dev_plain, "dev_conj": r.dev_conj}
    return CheckResult("canonical", r.max_deviation <= 1e-3, m, {"max_deviation": 1e-3})


@_timed
def check_asymptotics(seed: int = 0, M: int = 128) -> CheckResult:
    """``|n kappa_n - 1|`` and ``|mu_n - 1|`` below ``(7/12) e^{1/3}`` from some ``n_2`` on."""
    n2_list, worst_k, worst_m = [], 0.0, 0.0
    for spec in _suite_spectra(seed, M):
        n = np.arange(1, spec.M_B + 1)
        dk = np.abs(n * spec.kappas[1:spec.M_B + 1] - 1)
        dm = np.abs(spec.mus[:spec.M_B] - 1)
        bad = np.flatnonzero((dk > ASYMPTOTIC_BOUND) | (dm > ASYMPTOTIC_BOUND))
        n2 = int(bad[-1]) + 2 if bad.size else 1
        n2_list.append(n2)
        tail = n >= n2
        worst_k = max(worst_k, float(dk[tail].max(initial=0.0)))
        worst_m = max(worst_m, float(dm[tail].max(initial=0.0)))
    ok = max(n2_list) <= min(s.M_B for s in _suite_spectra(seed, M))
    m = {"n2_max": max(n2_list), "n2": n2_list, "max_n_kappa_dev": worst_k, "max_mu_dev": worst_m}
    return CheckResult("asymptotics", ok, m, {"bound": ASYMPTOTIC_BOUND})


def flow_sample(seed: int = 0, M: int = 128) -> RealPotential:
    """Smooth initial datum with ``||u0|| = 0.2`` and a slowly decaying spectrum."""
    rng = np.random.default_rng(seed + 1)
    return random_smooth(M, rng, norm=0.2, n_modes=12, decay=0.2)


FLOW_TIMES = (0.0, 0.25, 0.5, 1.0)


@lru_cache(maxsize=4)
def _direct(seed: int, M: int, dt: float):
    return evolve(flow_sample(seed, M), IntegratorConfig(M=M, dt=dt), FLOW_TIMES)


@lru_cache(maxsize=4)
def _birkhoff(seed: int, M: int):
    return solve_bo(flow_sample(seed, M), FLOW_TIMES, NewtonConfig(M=M))


@_timed
def check_flow(seed: int = 0, M: int = 128, dt: float = 1e-3) -> CheckResult:
    e1 = (_direct(seed, M, dt).samples[-1] - _birkhoff(seed, M).samples[-1]).l2_norm()
    e2 = (_direct(seed, 2 * M, dt / 2).samples[-1] - _birkhoff(seed, 2 * M).samples[-1]).l2_norm()
    rep = conserved_report(_direct(seed, M, dt), M)
    m = {"error": e1, "error_refined": e2, "reduction": e1 / e2 if e2 > 0 else math.inf,
         "lambda_drift": rep["max_lambda_drift"], "action_drift": rep["max_action_drift"],
         "norm_drift": rep["max_norm_drift"]}
    ok = e1 <= 1e-4 and m["reduction"] >= 10 and m["lambda_drift"] <= 1e-6 and m["action_drift"] <= 1e-6
    return CheckResult("flow", ok, m, {"error": 1e-4, "reduction": 10, "drift": 1e-6})


@_timed
def check_phase_law(seed: int = 0, M: int = 128, dt: float = 1e-3, n_max: int = 4) -> CheckResult:
    traj = _direct(seed, M, dt)
    u0 = traj.samples[0]
    spec = compute_spectrum(u0, M)
    z0 = phi_smooth(u0, M, spec.M_B)
    om = frequencies(z0)[:n_max]
    worst = 0.0
    for t, u in zip(traj.times[1:], traj.samples[1:]):
        z = phi(u, M, M_B=spec.M_B).zeta[:n_max]
        d = np.angle(z * np.conj(z0.zeta[:n_max]) * np.exp(-1j * t * om))
        worst = max(worst, float(np.abs(d).max()))
    return CheckResult("phase_law", worst <= 1e-3, {"max_phase_error": worst}, {"max_phase_error": 1e-3})


@_timed
def check_roundtrip(seed: int = 0, M: int = 128) -> CheckResult:
    worst = 0.0
    cfg = NewtonConfig(M=M)
    for u, spec in zip(_suite(seed, M), _suite_spectra(seed, M)):
        M_B = min(spec.M_B, M // 2)
        w = newton_invert(phi_smooth(u, M, M_B), cfg)
        worst = max(worst, (w - u).l2_norm())
    return CheckResult("roundtrip", worst <= 1e-7, {"max_error": worst}, {"max_error": 1e-7})


def roundtrip_example(M: int = 128) -> RealPotential:
    return RealPotential.cosine(1, 0.4, M) + RealPotential.sine(3, 0.1, M)


@_timed
def check_finite_gap(seed: int = 0, M: int = 128, N: int = 3) -> CheckResult:
    wN = finite_gap(roundtrip_example(M), N, NewtonConfig(M=M))
    r = verify_finite_gap(wN, N, M)
    m = r.to_json()
    return CheckResult("finite_gap", r.max_dev <= 1e-6, m, {"max_dev": 1e-6})


@_timed
def check_toeplitz(seed: int = 0, M: int = 64) -> CheckResult:
    rng = np.random.default_rng(seed + 2)
    u = random_smooth(16, rng, norm=0.5)
    c = np.zeros(M + 1, dtype=complex)
    c[:8] = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    f0 = HardyFunction(c)
    x = toeplitz_inverse(u, f0)
    half = M // 2 + 1
    rt = float(np.linalg.norm((toeplitz_apply(u, x).coeffs - f0.coeffs)[:half]))
    gp = make_symbols(u, M).g_plus
    one = float(np.abs(toeplitz_inverse(u, HardyFunction.one(M)).coeffs - gp).max())
    m = {"roundtrip": rt, "inverse_of_one": one}
    return CheckResult("toeplitz", rt <= 1e-6 and one <= 1e-8, m, {"roundtrip": 1e-6, "inverse_of_one": 1e-8})


@_timed
def check_illposed(seed: int = 0) -> CheckResult:
    neg = illposed_report(-0.25)
    ctrl = illposed_report(0.0)
    r_neg = [c["ratio"] for c in neg["cells"]]
    r_ctl = [c["ratio"] for c in ctrl["cells"]]
    m = {"ratios": r_neg, "control": r_ctl, "monotone": neg["monotone"],
         "max_ratio": neg["max_ratio"], "control_max": max(r_ctl)}
    ok = neg["monotone"] and neg["max_ratio"] > 10 and max(r_ctl) <= 10
    return CheckResult("illposed", ok, m, {"max_ratio": "> 10", "control_max": 10})


CHECKS = {
    "baseline": check_baseline,
    "spectral_structure": check_spectral_structure,
    "action": check_action,
    "trace": check_trace,
    "linearization": check_linearization,
    "canonical": check_canonical,
    "asymptotics": check_asymptotics,
    "flow": check_flow,
    "phase_law": check_phase_law,
    "roundtrip": check_roundtrip,
    "finite_gap": check_finite_gap,
    "toeplitz": check_toeplitz,
    "illposed": check_illposed,
}


def run_checks(names=None, seed: int = 0) -> list:
    names = list(CHECKS) if names is None else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")
    return [CHECKS[n](seed=seed) for n in names]
