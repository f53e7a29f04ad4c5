"""Fourier-coefficient containers and spectral primitives on the torus.

Coefficients follow the normalization ``uhat(n) = (1/2pi) int u(x) exp(-inx) dx``
so that ``||u||_0^2 = sum_n |uhat(n)|^2``.  A grid of ``Ng`` points
``x_j = 2 pi j / Ng`` is paired with ``numpy.fft`` as ``uhat = fft(u) / Ng``.

Three array layouts are used throughout the package:

* ``RealPotential.coeffs``  -- modes ``1..M`` of a real, mean-zero function;
* ``HardyFunction.coeffs``  -- modes ``0..M`` of a function in ``H_+``;
* *full* arrays             -- modes ``-M..M`` stored at index ``n + M``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

MEAN_TOL = 1e-12


def _as_complex(a) -> np.ndarray:
    arr = np.array(a, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


def _pairs(arr) -> list:
    return [[float(z.real), float(z.imag)] for z in arr]


def _from_pairs(pairs) -> np.ndarray:
    if len(pairs) == 0:
        return np.zeros(0, dtype=complex)
    a = np.asarray(pairs, dtype=float)
    return a[:, 0] + 1j * a[:, 1]


@dataclass(frozen=True)
class RealPotential:
    """Real, zero-mean potential stored as its positive Fourier modes.

    ``coeffs[k]`` is ``uhat(k + 1)``; negative modes are implied by
    ``uhat(-n) = conj(uhat(n))`` and the mean is zero by construction.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_complex(np.atleast_1d(self.coeffs)))

    @property
    def M(self) -> int:
        return len(self.coeffs)

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, M: int) -> "RealPotential":
        return cls(np.zeros(M, dtype=complex))

    @classmethod
    def from_modes(cls, modes: dict, M: int) -> "RealPotential":
        """Build from ``{n: uhat(n)}`` with ``n >= 1``."""
        c = np.zeros(M, dtype=complex)
        for n, val in modes.items():
            if not 1 <= n <= M:
                raise ValueError(f"mode {n} outside 1..{M}")
            c[n - 1] = val
        return cls(c)

    @classmethod
    def cosine(cls, k: int, amplitude: float, M: int) -> "RealPotential":
        """``amplitude * cos(k x)``."""
        return cls.from_modes({k: amplitude / 2}, M)

    @classmethod
    def sine(cls, k: int, amplitude: float, M: int) -> "RealPotential":
        """``amplitude * sin(k x)``."""
        return cls.from_modes({k: amplitude / 2j}, M)

    @classmethod
    def from_full(cls, full: np.ndarray, M: int | None = None, tol: float = 1e-10) -> "RealPotential":
        """From a symmetric full array on ``-K..K``; checks reality and zero mean."""
        full = np.asarray(full, dtype=complex)
        K = (len(full) - 1) // 2
        if abs(full[K]) > tol * max(1.0, np.abs(full).max()):
            raise ValueError(f"nonzero mean {full[K]!r}")
        pos, neg = full[K + 1:], full[:K][::-1]
        if np.abs(pos - np.conj(neg)).max(initial=0.0) > tol * max(1.0, np.abs(full).max()):
            raise ValueError("coefficients are not conjugate-symmetric (not a real function)")
        if M is None:
            M = K
        c = np.zeros(M, dtype=complex)
        n = min(M, K)
        c[:n] = pos[:n]
        return cls(c)

    @classmethod
    def from_grid(cls, values: np.ndarray, M: int, tol: float = 1e-10) -> "RealPotential":
        values = np.asarray(values)
        if np.iscomplexobj(values) and np.abs(values.imag).max() > tol:
            raise ValueError("grid values are not real")
        Ng = len(values)
        if Ng < 2 * M + 1:
            raise ValueError(f"grid of {Ng} points cannot resolve {M} modes")
        uhat = np.fft.fft(np.real(values)) / Ng
        if abs(uhat[0]) > max(tol, MEAN_TOL):
            raise ValueError(f"grid function has nonzero mean {uhat[0].real:.3e}")
        return cls(uhat[1:M + 1])

    # -- conversions --------------------------------------------------
    def full(self, M: int | None = None) -> np.ndarray:
        """Coefficients on ``-M..M`` (index ``n + M``), truncating or zero-padding."""
        if M is None:
            M = self.M
        out = np.zeros(2 * M + 1, dtype=complex)
        n = min(M, self.M)
        out[M + 1:M + 1 + n] = self.coeffs[:n]
        out[M - n:M][::-1] = np.conj(self.coeffs[:n])
        return out

    def resized(self, M: int) -> "RealPotential":
        c = np.zeros(M, dtype=complex)
        n = min(M, self.M)
        c[:n] = self.coeffs[:n]
        return RealPotential(c)

    def to_grid(self, Ng: int | None = None) -> np.ndarray:
        if Ng is None:
            Ng = grid_size(self.M)
        return np.real(synthesize(self.full(), Ng))

    def __add__(self, other: "RealPotential") -> "RealPotential":
        M = max(self.M, other.M)
        return RealPotential(self.resized(M).coeffs + other.resized(M).coeffs)

    def __sub__(self, other: "RealPotential") -> "RealPotential":
        M = max(self.M, other.M)
        return RealPotential(self.resized(M).coeffs - other.resized(M).coeffs)

    def __mul__(self, scalar: float) -> "RealPotential":
        if np.iscomplexobj(scalar) or isinstance(scalar, complex):
            raise TypeError("a real potential can only be scaled by a real number")
        return RealPotential(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def translate(self, theta: float) -> "RealPotential":
        """``u(x + theta)``."""
        n = np.arange(1, self.M + 1)
        return RealPotential(self.coeffs * np.exp(1j * n * theta))

    def reflect(self) -> "RealPotential":
        """``u(-x)``."""
        return RealPotential(np.conj(self.coeffs))

    def l2_norm(self) -> float:
        return sobolev_norm(self, 0.0)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {"M": self.M, "coeffs": _pairs(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "RealPotential":
        c = _from_pairs(data["coeffs"])
        if len(c) != data["M"]:
            raise ValueError(f"M={data['M']} but {len(c)} coefficients")
        return cls(c)

    def digest(self) -> str:
        """Stable short hash of the coefficients (for provenance metadata)."""
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class HardyFunction:
    """Function in the truncated Hardy space; ``coeffs[n] = fhat(n)``, ``n = 0..M``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_complex(np.atleast_1d(self.coeffs)))

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def monomial(cls, k: int, M: int) -> "HardyFunction":
        c = np.zeros(M + 1, dtype=complex)
        c[k] = 1.0
        return cls(c)

    @classmethod
    def one(cls, M: int) -> "HardyFunction":
        return cls.monomial(0, M)

    def full(self, M: int | None = None) -> np.ndarray:
        if M is None:
            M = self.M
        out = np.zeros(2 * M + 1, dtype=complex)
        n = min(M, self.M) + 1
        out[M:M + n] = self.coeffs[:n]
        return out

    def to_json(self) -> dict:
        return {"M": self.M, "coeffs": _pairs(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "HardyFunction":
        c = _from_pairs(data["coeffs"])
        if len(c) != data["M"] + 1:
            raise ValueError(f"M={data['M']} but {len(c)} coefficients")
        return cls(c)


@dataclass(frozen=True)
class SequenceState:
    """Element of the weighted sequence space with exponent ``beta`` (modes ``1..M_B``)."""

    z: np.ndarray
    beta: float = 0.5
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "z", _as_complex(np.atleast_1d(self.z)))

    @property
    def M_B(self) -> int:
        return len(self.z)

    def norm(self, beta: float | None = None) -> float:
        if beta is None:
            beta = self.beta
        n = np.arange(1, self.M_B + 1, dtype=float)
        return float(np.sqrt(np.sum(n ** (2 * beta) * np.abs(self.z) ** 2)))


# -- grid helpers -----------------------------------------------------

def grid_size(M: int) -> int:
    """Default transform grid: ``2 (2M + 1)`` points, rounded up to even."""
    n = 2 * (2 * M + 1)
    return n + (n % 2)


def synthesize(full: np.ndarray, Ng: int) -> np.ndarray:
    """Grid values from a full coefficient array on ``-K..K``."""
    K = (len(full) - 1) // 2
    if Ng < 2 * K + 1:
        raise ValueError(f"grid of {Ng} points aliases {K} modes")
    buf = np.zeros(Ng, dtype=complex)
    buf[:K + 1] = full[K:]
    if K:
        buf[-K:] = full[:K]
    return np.fft.ifft(buf) * Ng


def analyze(values: np.ndarray, K: int) -> np.ndarray:
    """Full coefficient array on ``-K..K`` from grid values."""
    Ng = len(values)
    if Ng < 2 * K + 1:
        raise ValueError(f"grid of {Ng} points cannot resolve {K} modes")
    uhat = np.fft.fft(values) / Ng
    out = np.empty(2 * K + 1, dtype=complex)
    out[K:] = uhat[:K + 1]
    if K:
        out[:K] = uhat[-K:]
    return out


def _full_of(f) -> np.ndarray:
    if isinstance(f, (RealPotential, HardyFunction)):
        return f.full()
    return np.asarray(f, dtype=complex)


def pad_full(full: np.ndarray, M: int) -> np.ndarray:
    """Zero-pad or truncate a full array to ``-M..M``."""
    K = (len(full) - 1) // 2
    out = np.zeros(2 * M + 1, dtype=complex)
    n = min(M, K)
    out[M - n:M + n + 1] = full[K - n:K + n + 1]
    return out


# -- operations -------------------------------------------------------

def sobolev_norm(u, s: float) -> float:
    """``(sum <n>^{2s} |uhat(n)|^2)^{1/2}`` with ``<n> = max(1, |n|)``.

    Accepts a ``RealPotential`` (both halves counted), a ``HardyFunction``,
    or a full coefficient array.
    """
    full = _full_of(u)
    K = (len(full) - 1) // 2
    n = np.maximum(1, np.abs(np.arange(-K, K + 1))).astype(float)
    return float(np.sqrt(np.sum(n ** (2 * s) * np.abs(full) ** 2)))


def hilbert_transform(u: RealPotential) -> RealPotential:
    """Fourier multiplier ``-i sign(n)``."""
    return RealPotential(-1j * u.coeffs)


def szego_project(f) -> HardyFunction:
    """Keep modes ``n >= 0`` of a full array (or pass a Hardy function through)."""
    if isinstance(f, HardyFunction):
        return f
    full = _full_of(f)
    K = (len(full) - 1) // 2
    return HardyFunction(full[K:])


def antiderivative(u, tol: float = MEAN_TOL) -> np.ndarray:
    """Zero-mean antiderivative: ``uhat(n) / (i n)``; returns a full array."""
    full = _full_of(u)
    K = (len(full) - 1) // 2
    if abs(full[K]) > tol:
        raise ValueError(f"antiderivative needs zero mean, got {full[K]!r}")
    n = np.arange(-K, K + 1)
    out = np.zeros_like(full)
    nz = n != 0
    out[nz] = full[nz] / (1j * n[nz])
    return out


def mult(f, g, M_out: int | None = None) -> np.ndarray:
    """Exact truncated product of two full coefficient arrays.

    The result is returned on ``-M_out..M_out`` (default: the larger input
    window).  The padded grid has at least ``Kf + Kg + M_out + 1`` points,
    so every retained mode is alias-free.
    """
    f = _full_of(f)
    g = _full_of(g)
    Kf = (len(f) - 1) // 2
    Kg = (len(g) - 1) // 2
    if M_out is None:
        M_out = max(Kf, Kg)
    Ng = max(Kf + Kg + M_out + 1, 2 * M_out + 1, 2 * max(Kf, Kg) + 1)
    Ng += Ng % 2
    prod = synthesize(f, Ng) * synthesize(g, Ng)
    return analyze(prod, M_out)


def inner(f, g) -> complex:
    """Sesquilinear pairing ``sum fhat(n) conj(ghat(n))``."""
    f, g = _full_of(f), _full_of(g)
    M = max(len(f), len(g)) // 2
    return complex(np.vdot(pad_full(g, M), pad_full(f, M)))


def pair(f, g) -> complex:
    """Bilinear pairing ``sum fhat(n) ghat(-n)``."""
    f, g = _full_of(f), _full_of(g)
    M = max(len(f), len(g)) // 2
    return complex(np.sum(pad_full(f, M) * pad_full(g, M)[::-1]))


def shift(f: HardyFunction) -> HardyFunction:
    """Multiplication by ``exp(ix)``; the top mode leaves the window."""
    c = np.zeros_like(f.coeffs)
    c[1:] = f.coeffs[:-1]
    return HardyFunction(c)


def random_smooth(M: int, rng: np.random.Generator, norm: float = 0.3,
                  n_modes: int = 8, decay: float = 0.5) -> RealPotential:
    """Band-limited random potential with ``||u||_0 = norm``.

    Modes ``1..n_modes`` carry complex Gaussian amplitudes damped by
    ``exp(-decay * n)``.
    """
    n = np.arange(1, n_modes + 1)
    c = (rng.standard_normal(n_modes) + 1j * rng.standard_normal(n_modes)) * np.exp(-decay * n)
    u = RealPotential(c).resized(M)
    return u * (norm / u.l2_norm())
