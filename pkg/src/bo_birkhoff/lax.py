"""Truncated Lax operator ``L_u = D - T_u`` on modes ``0..M`` and its spectral data."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateSpectrumError, PhaseChainError, ScalingFactorError,
                     SpectrumError)
from .fourier import RealPotential, analyze, antiderivative, synthesize

CONV_TOL = 1e-9
GAP_TOL = 1e-10
PHASE_TOL = 1e-12
DEGEN_TOL = 1e-8
RESIDUAL_FACTOR = 1e-10


@dataclass(frozen=True)
class LaxMatrix:
    M: int
    entries: np.ndarray


def assemble_lax(u: RealPotential, M: int) -> LaxMatrix:
    """``A[j, k] = j delta_jk - uhat(j - k)`` for ``0 <= j, k <= M``."""
    if u.M > M and np.any(u.coeffs[M:] != 0):
        warnings.warn(f"potential modes above {M} exceed the matrix bandwidth and are dropped",
                      stacklevel=2)
    col = np.zeros(M + 1, dtype=complex)
    n = min(M, u.M)
    col[1:n + 1] = u.coeffs[:n]
    d = np.arange(M + 1)[:, None] - np.arange(M + 1)[None, :]
    T = np.where(d >= 0, col[np.abs(d)], np.conj(col[np.abs(d)]))
    A = np.diag(np.arange(M + 1, dtype=float)).astype(complex) - T
    return LaxMatrix(M, A)


def eigen_decompose(A: LaxMatrix | np.ndarray, degen_tol: float = DEGEN_TOL):
    """Ascending eigenvalues and orthonormal eigenvectors (as columns).

    Every pair is checked against ``||A v - lam v|| <= 1e-10 ||A||``.
    """
    mat = A.entries if isinstance(A, LaxMatrix) else np.asarray(A)
    try:
        lam, V = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(f"Hermitian eigensolver failed: {exc}") from exc
    scale = max(np.linalg.norm(mat, 2), 1.0)
    resid = np.linalg.norm(mat @ V - V * lam, axis=0)
    bad = np.flatnonzero(resid > RESIDUAL_FACTOR * scale)
    if bad.size:
        raise SpectrumError(f"eigenpair {bad[0]} has residual {resid[bad[0]]:.2e}", index=int(bad[0]))
    close = np.flatnonzero(np.diff(lam) < degen_tol)
    if close.size:
        k = int(close[0])
        raise DegenerateSpectrumError(f"eigenvalues {k} and {k + 1} collide: "
                                      f"{lam[k]!r}, {lam[k + 1]!r}", index=k + 1)
    return lam, V


def gaps(lambdas: np.ndarray) -> np.ndarray:
    """``gamma_n = lambda_n - lambda_{n-1} - 1`` for ``n = 1..M``."""
    lambdas = np.asarray(lambdas)
    return lambdas[1:] - lambdas[:-1] - 1.0


def shift_product(prev: np.ndarray, cur: np.ndarray) -> complex:
    """``<e^{ix} f_prev | f_cur>`` for coefficient vectors on modes ``0..M``."""
    return complex(np.vdot(cur[1:], prev[:-1]))


def phase_fix(vecs: np.ndarray, M_B: int | None = None, phase_tol: float = PHASE_TOL) -> np.ndarray:
    """Rotate eigenvectors by unit scalars so that ``<f_0|1> > 0`` and
    ``<S f_{n-1}|f_n> > 0``.

    The chain is enforced (and breaks raise ``PhaseChainError``) for
    ``n <= M_B``; above the trust cutoff a vanishing link is left unrotated.
    """
    V = np.array(vecs, dtype=complex, copy=True)
    ncol = V.shape[1]
    if M_B is None:
        M_B = ncol - 1
    a = V[0, 0]
    if abs(a) < phase_tol:
        raise PhaseChainError(f"|f_0(0)| = {abs(a):.2e} below phase_tol", index=0)
    V[:, 0] *= np.conj(a) / abs(a)
    for n in range(1, ncol):
        p = shift_product(V[:, n - 1], V[:, n])
        if abs(p) < phase_tol:
            if n <= M_B:
                raise PhaseChainError(f"|<S f_{n-1}|f_{n}>| = {abs(p):.2e} below phase_tol", index=n)
            continue
        V[:, n] *= p / abs(p)
    return V


def kappa_product(lambdas: np.ndarray, gamma: np.ndarray, P: int, n_max: int | None = None) -> np.ndarray:
    """Scaling factors from the spectral product representation.

    ``kappa_0 = prod_{p<=P} (1 - gamma_p / (lambda_p - lambda_0))`` and for ``n >= 1``
    ``kappa_n = 1/(lambda_n - lambda_0) prod_{1<=p<=P, p!=n} (1 - gamma_p/(lambda_p - lambda_n))``.
    Only gaps up to ``P`` enter; the top of the Galerkin window carries spurious
    gaps and must be excluded.
    """
    lam = np.asarray(lambdas)
    if n_max is None:
        n_max = len(lam) - 1
    p = np.arange(1, P + 1)
    g = np.asarray(gamma)[:P]
    out = np.empty(n_max + 1)
    out[0] = np.prod(1.0 - g / (lam[p] - lam[0]))
    for n in range(1, n_max + 1):
        mask = p != n
        out[n] = np.prod(1.0 - g[mask] / (lam[p[mask]] - lam[n])) / (lam[n] - lam[0])
    return out


def scaling_factors(lambdas, gamma, vecs, M_B: int, gap_tol: float = GAP_TOL):
    """``(kappa[0..M], mu[1..M])`` from phase-fixed eigenvectors.

    ``kappa_n = |<1|f_n>|^2 / gamma_n`` on open gaps, the product
    representation on closed ones.
    """
    V = np.asarray(vecs)
    M = V.shape[0] - 1
    one = np.conj(V[0, :])
    mu = np.array([shift_product(V[:, n - 1], V[:, n]) for n in range(1, M + 1)])
    mu = np.real(mu) ** 2
    kap_prod = kappa_product(lambdas, gamma, P=M_B, n_max=M)
    kappa = np.empty(M + 1)
    kappa[0] = abs(V[0, 0]) ** 2
    for n in range(1, M + 1):
        g = gamma[n - 1]
        if g > gap_tol:
            kappa[n] = abs(one[n]) ** 2 / g
        else:
            if n <= M_B and abs(one[n]) > np.sqrt(gap_tol):
                raise ScalingFactorError(
                    f"closed gap gamma_{n} = {g:.2e} but |<1|f_{n}>| = {abs(one[n]):.2e}", index=n)
            kappa[n] = kap_prod[n]
    return kappa, mu


@dataclass(frozen=True)
class LaxSpectrum:
    """Normalized spectral data of the truncated Lax operator.

    Arrays cover the whole Galerkin window ``0..M``; only indices up to the
    trust cutoff ``M_B`` passed the convergence screen.
    """

    M: int
    M_B: int
    lambdas: np.ndarray
    gaps: np.ndarray
    eigvecs: np.ndarray
    one_products: np.ndarray
    kappas: np.ndarray
    mus: np.ndarray
    gap_tol: float = GAP_TOL
    meta: dict = field(default_factory=dict, compare=False)

    def f(self, n: int) -> np.ndarray:
        return self.eigvecs[:, n]

    def kappa_product(self, n_max: int | None = None) -> np.ndarray:
        return kappa_product(self.lambdas, self.gaps, self.M_B,
                             self.M_B if n_max is None else n_max)

    def to_json(self, include_eigvecs: bool = False) -> dict:
        pairs = lambda a: [[float(z.real), float(z.imag)] for z in a]
        out = {
            "M": self.M,
            "M_B": self.M_B,
            "lambdas": [float(x) for x in self.lambdas],
            "gaps": [float(x) for x in self.gaps],
            "one_products": pairs(self.one_products),
            "kappas": [float(x) for x in self.kappas],
            "mus": [float(x) for x in self.mus],
        }
        if include_eigvecs:
            out["eigvecs"] = [pairs(self.eigvecs[:, n]) for n in range(self.M + 1)]
        return out


def trust_cutoff(lam_fine: np.ndarray, lam_coarse: np.ndarray, conv_tol: float = CONV_TOL) -> int:
    """Largest ``n`` such that ``|lambda_k(M) - lambda_k(M/2)| <= conv_tol`` for all ``1 <= k <= n``.

    Returns ``-1`` when even ``lambda_0`` is unconverged.
    """
    m = len(lam_coarse)
    bad = np.flatnonzero(np.abs(lam_fine[:m] - lam_coarse) > conv_tol)
    return int(bad[0]) - 1 if bad.size else m - 1


def compute_spectrum(u: RealPotential, M: int, *, M_B: int | None = None,
                     conv_tol: float = CONV_TOL, gap_tol: float = GAP_TOL,
                     phase_tol: float = PHASE_TOL) -> LaxSpectrum:
    """Assemble, diagonalize, phase-fix and normalize.

    Without an explicit ``M_B`` the trust cutoff comes from comparing the
    spectrum at ``M`` with the one at ``M // 2``.
    """
    lam, V = eigen_decompose(assemble_lax(u, M))
    if M_B is None:
        lam_half, _ = eigen_decompose(assemble_lax(u.resized(M // 2), M // 2))
        M_B = max(trust_cutoff(lam, lam_half, conv_tol), 0)
    M_B = min(M_B, M)
    gam = gaps(lam)
    V = phase_fix(V, M_B, phase_tol)
    kappa, mu = scaling_factors(lam, gam, V, M_B, gap_tol)
    return LaxSpectrum(M=M, M_B=M_B, lambdas=lam, gaps=gam, eigvecs=V,
                       one_products=np.conj(V[0, :]), kappas=kappa, mus=mu,
                       gap_tol=gap_tol, meta={"potential": u.digest(), "conv_tol": conv_tol})


def eigen_residuals(u: RealPotential, spec: LaxSpectrum) -> np.ndarray:
    """``||L_u f_n - lambda_n f_n||_0`` for every ``n`` in the window."""
    A = assemble_lax(u, spec.M).entries
    return np.linalg.norm(A @ spec.eigvecs - spec.eigvecs * spec.lambdas, axis=0)


def lambda_variation(spec: LaxSpectrum, v: RealPotential, n: int) -> float:
    """First-order eigenvalue change ``-<T_v f_n | f_n>``."""
    Tv = -assemble_lax(v, spec.M).entries + np.diag(np.arange(spec.M + 1))
    f = spec.f(n)
    return -float(np.real(np.vdot(f, Tv @ f)))


# -- g_n and g_infinity ---------------------------------------------------

def g_function(spec: LaxSpectrum, n: int) -> np.ndarray:
    """``g_n = f_n e^{-inx}`` as a coefficient array on modes ``-n..M-n``."""
    return spec.f(n).copy()


def g_residual(u: RealPotential, spec: LaxSpectrum, n: int) -> float:
    """``||D g_n - (lambda_n - n) g_n - Pi_{>=-n}(u g_n)||_0`` on the window.

    Modes ``m = -n..M-n`` of ``g_n`` sit at indices ``m + n`` of ``f_n``.
    """
    g = g_function(spec, n)
    M = spec.M
    m = np.arange(-n, M - n + 1)
    # (u g)(m) for m in window: sum_k uhat(m - k') g(k'); shift back to f-index
    ufull = u.full(M)
    idx = np.arange(M + 1)
    conv = np.array([np.sum(ufull[M + (j - idx)] * g) for j in idx])
    r = m * g - (spec.lambdas[n] - n) * g - conv
    return float(np.linalg.norm(r))


def g_infinity(u: RealPotential, K: int | None = None, Ng: int | None = None) -> np.ndarray:
    """``exp(i d^{-1} u)`` as a full coefficient array on ``-K..K``.

    Computed by exponentiating on a grid; ``Ng`` defaults to ``8 (K + u.M) + 8``
    points so the discarded tail is far below roundoff for smooth ``u``.
    """
    if K is None:
        K = 2 * u.M
    if Ng is None:
        Ng = 8 * (K + u.M) + 8
    phase = np.real(synthesize(antiderivative(u.full()), Ng))
    return analyze(np.exp(1j * phase), K)


def g_infinity_grid(u: RealPotential, Ng: int) -> np.ndarray:
    phase = np.real(synthesize(antiderivative(u.full()), Ng))
    return np.exp(1j * phase)


def g_infinity_residual(u: RealPotential, K: int | None = None) -> float:
    """``||D g_inf - u g_inf||_0`` on the lower half of the window."""
    from .fourier import mult

    g = g_infinity(u, K)
    K = (len(g) - 1) // 2
    m = np.arange(-K, K + 1)
    r = m * g - mult(u.full(), g, K)
    keep = np.abs(m) <= K // 2
    return float(np.linalg.norm(r[keep]))
