"""Toeplitz and Hankel operators with symbol ``conj(g_inf)`` and the
weighted operator ``G(u)``.

All operators are realized as dense matrices on a finite mode window.
Compositions of truncated operators are only trusted on the lower half of
that window.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import (HardyFunction, RealPotential, SequenceState, analyze, antiderivative,
                      mult, pad_full, synthesize)
from .lax import g_infinity


def _fine_grid(K: int, u: RealPotential) -> int:
    n = 8 * (K + u.M) + 8
    return n + n % 2


@dataclass(frozen=True)
class SymbolPair:
    """``g_+`` on modes ``0..K`` and ``g_-`` on modes ``0, -1, .., -K``.

    ``g_minus[m]`` holds the coefficient of mode ``-m``.
    """

    g_plus: np.ndarray
    g_minus: np.ndarray

    @property
    def K(self) -> int:
        return len(self.g_plus) - 1

    def plus_full(self) -> np.ndarray:
        K = self.K
        out = np.zeros(2 * K + 1, dtype=complex)
        out[K:] = self.g_plus
        return out

    def minus_full(self) -> np.ndarray:
        K = self.K
        out = np.zeros(2 * K + 1, dtype=complex)
        out[:K + 1] = self.g_minus[::-1]
        return out


def make_symbols(u: RealPotential, K: int | None = None, tail_tol: float = 1e-16) -> SymbolPair:
    """``g_+ = exp(i d^{-1} Pi u)`` and ``g_- = exp(i d^{-1} (Id - Pi) u)``.

    Without ``K`` the window doubles until the top quarter of ``g_+`` is
    below ``tail_tol``.
    """
    if K is None:
        K = 2 * max(u.M, 1)
        while K < 4096:
            sp = _symbols(u, K)
            if np.abs(sp.g_plus[3 * K // 4:]).max() <= tail_tol:
                return sp
            K *= 2
    return _symbols(u, K)


def _symbols(u: RealPotential, K: int) -> SymbolPair:
    Ng = _fine_grid(K, u)
    full = u.full()
    M = u.M
    pos = full.copy()
    pos[:M + 1] = 0
    neg = full.copy()
    neg[M:] = 0
    gp = analyze(np.exp(1j * synthesize(antiderivative(pos), Ng)), K)
    gm = analyze(np.exp(1j * synthesize(antiderivative(neg), Ng)), K)
    return SymbolPair(gp[K:].copy(), gm[:K + 1][::-1].copy())


def factorization_error(u: RealPotential, K: int | None = None, Ng: int = 256) -> float:
    """Max over a grid of ``|g_+ g_- - g_inf|``."""
    sp = make_symbols(u, K)
    g = g_infinity(u, sp.K)
    prod = synthesize(sp.plus_full(), Ng) * synthesize(sp.minus_full(), Ng)
    return float(np.abs(prod - synthesize(g, Ng)).max())


def _symbol_coeffs(u: RealPotential, K: int) -> np.ndarray:
    """Coefficients of ``c = conj(g_inf)`` on ``-K..K``: ``chat(m) = conj(ghat(-m))``."""
    g = g_infinity(u, K)
    return np.conj(g[::-1])


def toeplitz_matrix(u: RealPotential, M: int) -> np.ndarray:
    """``T[j, k] = chat(j - k)`` on modes ``0..M``."""
    c = _symbol_coeffs(u, M)
    j = np.arange(M + 1)
    return c[M + j[:, None] - j[None, :]]


def toeplitz_apply(u: RealPotential, f: HardyFunction) -> HardyFunction:
    """``Pi(conj(g_inf) f)`` on the window of ``f``."""
    return HardyFunction(toeplitz_matrix(u, f.M) @ f.coeffs)


def toeplitz_inverse(u: RealPotential, f0: HardyFunction, K: int | None = None) -> HardyFunction:
    """``g_+ Pi(g_- f0)``, returned on the window of ``f0``.

    Products are formed on an internal window of ``K`` modes (default
    ``2 (M + u.M)``) so that the result is exact up to the symbol tail.
    """
    M = f0.M
    if K is None:
        K = 2 * (M + u.M)
    sp = make_symbols(u, K)
    inner = mult(sp.minus_full(), f0.full(K), K)
    inner[:K] = 0
    out = mult(sp.plus_full(), inner, K)
    return HardyFunction(out[K:K + M + 1])


def hankel_matrix(u: RealPotential, M: int, j: int | None = None) -> np.ndarray:
    """``H[p, m] = chat(p + m)`` from modes ``0, -1, .., -M`` to ``0..M``.

    With ``j`` given, only symbol coefficients ``chat(0..j)`` are kept, which
    gives an operator of rank ``j + 1``.
    """
    c = _symbol_coeffs(u, 2 * M)
    idx = np.arange(M + 1)
    s = idx[:, None] + idx[None, :]
    H = c[2 * M + s]
    if j is not None:
        H = np.where(s <= j, H, 0)
    return H


def hankel_apply(u: RealPotential, f: np.ndarray) -> HardyFunction:
    """``Pi(conj(g_inf) f)`` for a full array ``f`` supported on modes ``<= 0``.

    The output window matches the input one.
    """
    f = np.asarray(f, dtype=complex)
    K = (len(f) - 1) // 2
    if np.any(f[K + 1:] != 0):
        raise ValueError("hankel_apply needs an input supported on non-positive modes")
    return HardyFunction(hankel_matrix(u, K) @ f[:K + 1][::-1])


def hankel_truncation_errors(u: RealPotential, M: int, js) -> np.ndarray:
    """Operator norms ``||H - H_j||`` on the window, for each ``j``."""
    H = hankel_matrix(u, M)
    return np.array([np.linalg.norm(H - hankel_matrix(u, M, j), 2) for j in js])


def G_apply(u: RealPotential, v: RealPotential, M_B: int) -> SequenceState:
    """``n -> (v conj(g_inf))^(n) / sqrt(n)`` for ``n = 1..M_B``."""
    K = M_B + v.M
    prod = mult(v.full(), np.conj(g_infinity(u, K)[::-1]), M_B)
    n = np.arange(1, M_B + 1)
    return SequenceState(prod[M_B + 1:] / np.sqrt(n), beta=0.5)


def G_matrix(u: RealPotential, n_max: int, k_max: int | None = None) -> np.ndarray:
    """Real matrix of ``G(u)`` from ``(Re vhat(k), Im vhat(k))_{k<=k_max}`` to
    ``(Re, Im)`` of components ``n <= n_max``."""
    if k_max is None:
        k_max = n_max
    cols = []
    for k in range(k_max):
        for dz in (1.0, 1j):
            e = np.zeros(k_max, dtype=complex)
            e[k] = dz
            z = G_apply(u, RealPotential(e), n_max).z
            cols.append(np.column_stack([z.real, z.imag]).ravel())
    return np.array(cols).T


def compact_part_singular_values(u: RealPotential, n_max: int = 16, M: int = 64,
                                 M_B: int | None = None) -> np.ndarray:
    """Singular values of ``A(u) = diag(sqrt(n)) (d_u Phi + G(u))`` restricted to
    ``n, k <= n_max``, in decreasing order."""
    from .birkhoff import jacobian

    rep = jacobian(u, n_max, M=M, M_B=M_B, s=0.0)
    G = G_matrix(u, n_max)
    n = np.repeat(np.arange(1, n_max + 1, dtype=float), 2)
    A = np.sqrt(n)[:, None] * (rep.raw + G)
    return np.linalg.svd(A, compute_uv=False)
