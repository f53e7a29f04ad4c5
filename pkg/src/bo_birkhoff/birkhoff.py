"""Birkhoff coordinates, their gradients and the identity checks built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import SpectrumError
from .fourier import RealPotential, _from_pairs, _pairs
from .lax import (GAP_TOL, LaxSpectrum, assemble_lax, compute_spectrum, eigen_decompose,
                  gaps, kappa_product, phase_fix)

AGREE_TOL = 1e-9
FD_STEP = 1e-5


@dataclass(frozen=True)
class BirkhoffState:
    """Coordinates ``zeta[k] = zeta_{k+1}``, ``k = 0..M_B-1``."""

    zeta: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        z = np.array(np.atleast_1d(self.zeta), dtype=complex, copy=True)
        z.setflags(write=False)
        object.__setattr__(self, "zeta", z)

    @property
    def M_B(self) -> int:
        return len(self.zeta)

    @classmethod
    def zero(cls, M_B: int) -> "BirkhoffState":
        return cls(np.zeros(M_B, dtype=complex))

    @classmethod
    def from_modes(cls, modes: dict, M_B: int) -> "BirkhoffState":
        z = np.zeros(M_B, dtype=complex)
        for n, val in modes.items():
            z[n - 1] = val
        return cls(z)

    def actions(self) -> np.ndarray:
        return np.abs(self.zeta) ** 2

    def norm(self, beta: float = 0.5) -> float:
        n = np.arange(1, self.M_B + 1, dtype=float)
        return float(np.sqrt(np.sum(n ** (2 * beta) * np.abs(self.zeta) ** 2)))

    def padded(self, M_B: int) -> "BirkhoffState":
        z = np.zeros(M_B, dtype=complex)
        k = min(M_B, self.M_B)
        z[:k] = self.zeta[:k]
        return BirkhoffState(z, dict(self.meta))

    def to_json(self) -> dict:
        return {"M_B": self.M_B, "zeta": _pairs(self.zeta), "meta": dict(self.meta)}

    @classmethod
    def from_json(cls, data: dict) -> "BirkhoffState":
        z = _from_pairs(data["zeta"])
        if len(z) != data["M_B"]:
            raise ValueError(f"M_B={data['M_B']} but {len(z)} coordinates")
        return cls(z, data.get("meta", {}))


def birkhoff_coords(spec: LaxSpectrum) -> BirkhoffState:
    """``zeta_n = <1|f_n> / sqrt(kappa_n)`` on open gaps, ``0`` on closed ones.

    The second evaluation ``sqrt(gamma_n) <1|f_n>/|<1|f_n>|`` is computed
    alongside and any disagreement above ``1e-9`` raises.
    """
    M_B = spec.M_B
    z = np.zeros(M_B, dtype=complex)
    for n in range(1, M_B + 1):
        g = spec.gaps[n - 1]
        if g <= spec.gap_tol:
            continue
        k = spec.kappas[n]
        if not k > 0:
            raise SpectrumError(f"kappa_{n} = {k!r} is not positive", index=n)
        a = spec.one_products[n]
        z1 = a / np.sqrt(k)
        z2 = np.sqrt(g) * a / abs(a)
        if abs(z1 - z2) > AGREE_TOL:
            raise SpectrumError(f"coordinate {n}: evaluations differ by {abs(z1 - z2):.2e}", index=n)
        z[n - 1] = z1
    meta = {"M": spec.M, "gap_tol": spec.gap_tol}
    meta.update(spec.meta)
    return BirkhoffState(z, meta)


def phi(u: RealPotential, M: int, M_B: int | None = None, **kw) -> BirkhoffState:
    """Coordinates of ``u`` at Galerkin cutoff ``M``."""
    return birkhoff_coords(compute_spectrum(u, M, M_B=M_B, **kw))


def birkhoff_vector(u: RealPotential, M: int, M_B: int) -> np.ndarray:
    """Smooth evaluation ``<1|f_n> / sqrt(kappa_n)`` for ``n = 1..M_B`` with
    the product-formula ``kappa_n`` and no gap threshold.

    It agrees with :func:`birkhoff_coords` on open gaps and stays
    differentiable across closed ones, which Newton steps and finite
    differences need.
    """
    lam, V = eigen_decompose(assemble_lax(u, M))
    V = phase_fix(V, M_B)
    kap = kappa_product(lam, gaps(lam), M_B, M_B)
    if np.any(kap[1:] <= 0):
        n = int(np.flatnonzero(kap[1:] <= 0)[0]) + 1
        raise SpectrumError(f"kappa_{n} = {kap[n]!r} is not positive", index=n)
    return np.conj(V[0, 1:M_B + 1]) / np.sqrt(kap[1:])


# -- gradients and brackets -----------------------------------------------

def _directional(F: Callable, u: RealPotential, k_max: int, h: float):
    """Central differences of ``F`` along ``cos kx`` and ``sin kx``.

    Returns arrays ``a, b`` with a leading ``k`` axis.
    """
    M = max(u.M, k_max)
    u = u.resized(M)
    a, b = [], []
    for k in range(1, k_max + 1):
        for basis, out in ((RealPotential.cosine(k, 1.0, M), a), (RealPotential.sine(k, 1.0, M), b)):
            fp = np.asarray(F(u + h * basis))
            fm = np.asarray(F(u - h * basis))
            q = (fp - fm) / (2 * h)
            if not np.all(np.isfinite(q)):
                raise FloatingPointError(f"non-finite difference quotient along mode {k}")
            out.append(q)
    return np.array(a), np.array(b)


def _assemble_gradient(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Full arrays on ``-k_max..k_max`` (last axis) from directional data."""
    k_max = a.shape[0]
    a = np.moveaxis(a, 0, -1)
    b = np.moveaxis(b, 0, -1)
    out = np.zeros(a.shape[:-1] + (2 * k_max + 1,), dtype=complex)
    out[..., k_max + 1:] = a - 1j * b
    out[..., :k_max] = (a + 1j * b)[..., ::-1]
    return out


def gradient(F: Callable | str, u: RealPotential, k_max: int, h: float = FD_STEP,
             M: int | None = None, M_B: int | None = None) -> np.ndarray:
    """Gradient coefficients ``gradF(n)``, ``|n| <= k_max``, of a functional.

    ``F`` is a callable on potentials or a tag ``"re_phi:n"``, ``"im_phi:n"``,
    ``"phi:n"``, ``"lambda:n"``, ``"gamma:n"``, ``"kappa:n"``.  The pairing is
    ``d_u F[v] = sum_n gradF(n) vhat(-n)``.
    """
    if isinstance(F, str):
        F = functional(F, M if M is not None else max(2 * u.M, 64), M_B)
    return _assemble_gradient(*_directional(F, u, k_max, h))


def functional(tag: str, M: int, M_B: int | None = None) -> Callable:
    name, _, idx = tag.partition(":")
    n = int(idx)
    if M_B is None:
        M_B = max(n, M // 4)

    def spec_of(v):
        return compute_spectrum(v, M, M_B=M_B)

    table = {
        "phi": lambda v: birkhoff_vector(v, M, M_B)[n - 1],
        "re_phi": lambda v: birkhoff_vector(v, M, M_B)[n - 1].real,
        "im_phi": lambda v: birkhoff_vector(v, M, M_B)[n - 1].imag,
        "lambda": lambda v: eigen_decompose(assemble_lax(v, M))[0][n],
        "gamma": lambda v: gaps(eigen_decompose(assemble_lax(v, M))[0])[n - 1],
        "kappa": lambda v: spec_of(v).kappas[n],
    }
    if name not in table:
        raise ValueError(f"unknown functional {tag!r}")
    return table[name]


def phi_gradients(u: RealPotential, n_max: int, k_max: int, h: float = FD_STEP,
                  M: int = 64, M_B: int | None = None, transform: Callable | None = None):
    """Gradients of ``Phi_n`` and ``conj Phi_n`` for ``n = 1..n_max``.

    ``transform`` is applied to every perturbed potential before the
    coordinates are evaluated.  Returns two arrays of shape
    ``(n_max, 2 k_max + 1)``.
    """
    if M_B is None:
        M_B = max(n_max, M // 4)
    if transform is None:
        transform = lambda v: v
    F = lambda v: birkhoff_vector(transform(v), M, M_B)[:n_max]
    a, b = _directional(F, u, k_max, h)
    return _assemble_gradient(a, b), _assemble_gradient(np.conj(a), np.conj(b))


# Corruptions of the Toeplitz part of the Lax operator, for mutation testing.
# "index_flip" builds T_u from uhat(k - j) instead of uhat(j - k); "amplitude_flip"
# uses -u.  The latter is a symmetry of the bracket and is not detectable here.
MUTATIONS = {
    "index_flip": RealPotential.reflect,
    "amplitude_flip": lambda v: v * -1.0,
}


def gardner_bracket(gradF: np.ndarray, gradG: np.ndarray) -> complex:
    """``sum_n (i n) gradF(n) gradG(-n)`` over the common window."""
    K = (len(gradF) - 1) // 2
    n = np.arange(-K, K + 1)
    return complex(np.sum(1j * n * gradF * gradG[::-1]))


@dataclass
class CanonicalReport:
    brackets: np.ndarray       # {Phi_n, Phi_k}
    conj_brackets: np.ndarray  # {Phi_n, conj Phi_k}
    dev_plain: float
    dev_conj: float

    @property
    def max_deviation(self) -> float:
        return max(self.dev_plain, self.dev_conj)

    def to_json(self) -> dict:
        return {"dev_plain": self.dev_plain, "dev_conj": self.dev_conj,
                "max_deviation": self.max_deviation,
                "conj_brackets": [[[z.real, z.imag] for z in row] for row in self.conj_brackets]}


def canonical_check(u: RealPotential, n_max: int = 3, M: int = 64, h: float = FD_STEP,
                    k_max: int = 16, M_B: int | None = None,
                    mutation: str | None = None) -> CanonicalReport:
    """Bracket tables for ``n, k <= n_max`` and their deviation from ``(0, -i delta)``."""
    transform = MUTATIONS[mutation] if mutation else None
    gp, gc = phi_gradients(u, n_max, k_max, h, M, M_B, transform)
    B = np.array([[gardner_bracket(gp[i], gp[j]) for j in range(n_max)] for i in range(n_max)])
    C = np.array([[gardner_bracket(gp[i], gc[j]) for j in range(n_max)] for i in range(n_max)])
    dev_plain = float(np.abs(B).max())
    dev_conj = float(np.abs(C + 1j * np.eye(n_max)).max())
    return CanonicalReport(B, C, dev_plain, dev_conj)


@dataclass
class TraceReport:
    lhs: float
    rhs: float
    rel_error: float
    lambda0: float
    lambda0_ok: bool

    def to_json(self) -> dict:
        return dict(lhs=self.lhs, rhs=self.rhs, rel_error=self.rel_error,
                    lambda0=self.lambda0, lambda0_ok=self.lambda0_ok)


def trace_check(u: RealPotential, M: int = 128, M_B: int | None = None, tol: float = 1e-8) -> TraceReport:
    """``sum_{k<=M_B} k gamma_k`` against ``1/2 ||u||^2 = sum_{n>=1} |uhat(n)|^2``."""
    spec = compute_spectrum(u, M, M_B=M_B)
    k = np.arange(1, spec.M_B + 1)
    lhs = float(np.sum(k * spec.gaps[:spec.M_B]))
    rhs = float(np.sum(np.abs(u.coeffs) ** 2))
    rel = abs(lhs - rhs) / rhs if rhs > 0 else abs(lhs - rhs)
    lam0 = float(spec.lambdas[0])
    return TraceReport(lhs, rhs, rel, lam0, abs(lam0) <= rhs + tol)


@dataclass
class JacobianReport:
    raw: np.ndarray
    weighted: np.ndarray
    singular_values: np.ndarray

    @property
    def sigma_min(self) -> float:
        return float(self.singular_values[-1])

    @property
    def cond(self) -> float:
        return float(self.singular_values[0] / self.singular_values[-1])


def _realify(z: np.ndarray) -> np.ndarray:
    return np.column_stack([z.real, z.imag]).ravel()


def jacobian(u: RealPotential, n_max: int, M: int = 64, M_B: int | None = None,
             s: float = 0.0, h: float = 1e-4) -> JacobianReport:
    """Central-difference Jacobian of ``(Re zeta_n, Im zeta_n)_{n<=n_max}``
    with respect to ``(Re uhat(k), Im uhat(k))_{k<=n_max}``.

    The weighted matrix is ``diag(n^{s+1/2}) J diag(k^{-s})``, the matrix of
    the map between the ``h^{s+1/2}`` and ``H^s`` coordinates.
    """
    if M_B is None:
        M_B = max(n_max, M // 4)
    u = u.resized(max(u.M, M_B))
    J = np.empty((2 * n_max, 2 * n_max))
    for k in range(n_max):
        for part, dz in ((0, 1.0), (1, 1j)):
            e = np.zeros(u.M, dtype=complex)
            e[k] = dz * h
            zp = birkhoff_vector(RealPotential(u.coeffs + e), M, M_B)[:n_max]
            zm = birkhoff_vector(RealPotential(u.coeffs - e), M, M_B)[:n_max]
            J[:, 2 * k + part] = _realify((zp - zm) / (2 * h))
    n = np.repeat(np.arange(1, n_max + 1, dtype=float), 2)
    W = (n ** (s + 0.5))[:, None] * J * (n ** (-s))[None, :]
    sv = np.linalg.svd(W, compute_uv=False)
    return JacobianReport(J, W, sv)
