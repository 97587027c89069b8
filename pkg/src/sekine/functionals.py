"""Linear functionals on A_k: convolution, Fourier transform, state and idempotency checks.

A functional is written in the dual basis as
mu = sum alpha_{i,j} d~_{i,j} + sum kappa_{r,s} e~_{r,s}.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Dict

import numpy as np

from . import algebra
from .algebra import DEFAULT_TOL, AlgebraElement, eta_pow, roots_of_unity, _check_k
from .representations import RepLabel, labels

__all__ = [
    "Functional",
    "FourierMatrix",
    "StateReport",
    "IdempotencyReport",
    "point_d",
    "point_e",
    "counit_functional",
    "zero_functional",
    "evaluate",
    "convolve",
    "convolve_oracle",
    "convolve_power",
    "is_state",
    "idempotency_report",
    "fourier",
    "fourier_all",
    "inverse_fourier",
]

EQUALITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Functional:
    k: int
    alpha: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        _check_k(self.k)
        a = np.array(self.alpha, dtype=complex)
        c = np.array(self.kappa, dtype=complex)
        if a.shape != (self.k, self.k) or c.shape != (self.k, self.k):
            raise ValueError(
                f"alpha and kappa must be {self.k}x{self.k}, got {a.shape} and {c.shape}"
            )
        a.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "kappa", c)

    def __call__(self, a: AlgebraElement) -> complex:
        return evaluate(self, a)

    def _same_k(self, other):
        if other.k != self.k:
            raise ValueError(f"mismatched k: {self.k} vs {other.k}")

    def __add__(self, other):
        if not isinstance(other, Functional):
            return NotImplemented
        self._same_k(other)
        return Functional(self.k, self.alpha + other.alpha, self.kappa + other.kappa)

    def __sub__(self, other):
        if not isinstance(other, Functional):
            return NotImplemented
        self._same_k(other)
        return Functional(self.k, self.alpha - other.alpha, self.kappa - other.kappa)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return Functional(self.k, other * self.alpha, other * self.kappa)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: "Functional") -> "Functional":
        return convolve(self, other)

    def vector(self) -> np.ndarray:
        return np.concatenate([self.alpha.ravel(), self.kappa.ravel()])

    def distance(self, other: "Functional") -> float:
        """L-infinity distance on the concatenated (alpha, kappa) coefficients."""
        self._same_k(other)
        return float(np.abs(self.vector() - other.vector()).max())

    def allclose(self, other: "Functional", tol: float = EQUALITY_TOL) -> bool:
        return self.distance(other) < tol

    @property
    def alpha_mass(self) -> complex:
        return complex(self.alpha.sum())

    @property
    def kappa_trace(self) -> complex:
        return complex(np.trace(self.kappa))

    def __repr__(self):
        return f"Functional(k={self.k}, mass={self.alpha_mass.real:.4g}+{self.kappa_trace.real:.4g})"


def zero_functional(k: int) -> Functional:
    return Functional(k, np.zeros((k, k)), np.zeros((k, k)))


def point_d(k: int, i: int, j: int) -> Functional:
    """The dual basis functional d~_{i,j}."""
    a = np.zeros((k, k))
    a[i % k, j % k] = 1
    return Functional(k, a, np.zeros((k, k)))


def point_e(k: int, r: int, s: int) -> Functional:
    c = np.zeros((k, k))
    c[r % k, s % k] = 1
    return Functional(k, np.zeros((k, k)), c)


def counit_functional(k: int) -> Functional:
    return point_d(k, 0, 0)


def evaluate(f: Functional, a: AlgebraElement) -> complex:
    if f.k != a.k:
        raise ValueError(f"mismatched k: {f.k} vs {a.k}")
    return complex((f.alpha * a.dcoef).sum() + (f.kappa * a.mcoef).sum())


# ---------------------------------------------------------------------------
# convolution


def _diag_shift(x: np.ndarray, j: int) -> np.ndarray:
    """[x_{r+j, s+j}]_{r,s}."""
    return np.roll(x, (-j, -j), axis=(0, 1))


def _phase(k: int) -> np.ndarray:
    """W[i, r, s] = eta^{i(r-s)}."""
    i, r, s = np.meshgrid(np.arange(k), np.arange(k), np.arange(k), indexing="ij")
    return eta_pow(k, i * (r - s))


def _cyclic_convolve2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """sum_{m,n} a_{m,n} b_{i-m, j-n}."""
    k = a.shape[0]
    out = np.zeros((k, k), dtype=complex)
    for m, n in zip(*np.nonzero(a)):
        out += a[m, n] * np.roll(b, (m, n), axis=(0, 1))
    return out


def convolve(mu: Functional, nu: Functional) -> Functional:
    """mu * nu from the closed-form coefficient formulas."""
    mu._same_k(nu)
    k = mu.k
    alpha, kappa = mu.alpha, mu.kappa
    beta, omega = nu.alpha, nu.kappa

    # gamma_{i,j} = (alpha conv beta)_{i,j} + 1/k sum_{r,s} eta^{i(r-s)} kappa_{r,s} omega_{r+j,s+j}
    shifted_omega = np.stack([_diag_shift(omega, j) for j in range(k)])
    gamma = _cyclic_convolve2(alpha, beta)
    gamma += np.einsum("irs,jrs->ij", _phase(k), kappa[None] * shifted_omega) / k

    # theta_{r,s} = sum_{i,j} eta^{i(s-r)} (alpha_{i,j} omega_{r+j,s+j} + beta_{i,j} kappa_{r-j,s-j})
    roots = roots_of_unity(k)
    t = (np.arange(k)[None, :] - np.arange(k)[:, None]) % k  # t[r, s] = s - r
    # ahat[j, t] = sum_i alpha_{i,j} eta^{i t}
    dft = roots[np.outer(np.arange(k), np.arange(k)) % k]  # dft[i, t] = eta^{it}
    ahat = alpha.T @ dft
    bhat = beta.T @ dft
    theta = np.zeros((k, k), dtype=complex)
    for j in range(k):
        theta += ahat[j][t] * shifted_omega[j] + bhat[j][t] * _diag_shift(kappa, -j)
    return Functional(k, gamma, theta)


def convolve_oracle(mu: Functional, nu: Functional) -> Functional:
    """(mu (x) nu) o Delta, evaluated basis element by basis element."""
    mu._same_k(nu)
    k = mu.k
    gamma = np.zeros((k, k), dtype=complex)
    theta = np.zeros((k, k), dtype=complex)
    for label in algebra.basis_labels(k):
        kind, i, j = label
        value = algebra.tensor_pair_apply(mu, nu, algebra.comultiply(algebra.basis_element(k, label)))
        (gamma if kind == "d" else theta)[i, j] = value
    return Functional(k, gamma, theta)


def convolve_power(mu: Functional, n: int) -> Functional:
    """mu^{*n} by repeated squaring."""
    if not isinstance(n, numbers.Integral) or n < 1:
        raise ValueError(f"convolution power needs n >= 1, got {n!r}")
    result = None
    base = mu
    while n:
        if n & 1:
            result = base if result is None else convolve(result, base)
        n >>= 1
        if n:
            base = convolve(base, base)
    return result


# ---------------------------------------------------------------------------
# states and idempotents


@dataclass(frozen=True)
class StateReport:
    alpha_min: float
    alpha_imag: float
    kappa_hermitian: float
    kappa_min_eig: float
    normalization: float
    tol: float

    @property
    def positive(self) -> bool:
        return (
            self.alpha_min >= -self.tol
            and self.alpha_imag <= self.tol
            and self.kappa_hermitian <= self.tol
            and self.kappa_min_eig >= -self.tol
        )

    @property
    def passed(self) -> bool:
        return self.positive and self.normalization <= self.tol

    def failures(self) -> list[str]:
        out = []
        if self.alpha_min < -self.tol:
            out.append(f"negative alpha entry ({self.alpha_min:.3g})")
        if self.alpha_imag > self.tol:
            out.append(f"non-real alpha entry ({self.alpha_imag:.3g})")
        if self.kappa_hermitian > self.tol:
            out.append(f"kappa not Hermitian ({self.kappa_hermitian:.3g})")
        if self.kappa_min_eig < -self.tol:
            out.append(f"kappa not positive semi-definite ({self.kappa_min_eig:.3g})")
        if self.normalization > self.tol:
            out.append(f"mu(1) != 1 (off by {self.normalization:.3g})")
        return out


def is_state(f: Functional, tol: float = DEFAULT_TOL) -> StateReport:
    herm = float(np.abs(f.kappa - f.kappa.conj().T).max())
    # eigenvalues of the Hermitian part; a non-Hermitian kappa already fails above
    min_eig = float(np.linalg.eigvalsh((f.kappa + f.kappa.conj().T) / 2).min())
    return StateReport(
        alpha_min=float(f.alpha.real.min()),
        alpha_imag=float(np.abs(f.alpha.imag).max()),
        kappa_hermitian=herm,
        kappa_min_eig=min_eig,
        normalization=abs(f.alpha_mass + f.kappa_trace - 1),
        tol=tol,
    )


@dataclass(frozen=True)
class IdempotencyReport:
    residual_A: float
    residual_B: float
    residual_C: float
    residual_fixed_point: float
    state: StateReport
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residual_A, self.residual_B, self.residual_C, self.residual_fixed_point)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol and self.state.positive

    def as_dict(self) -> dict:
        return {
            "residual_A": self.residual_A,
            "residual_B": self.residual_B,
            "residual_C": self.residual_C,
            "residual_fixed_point": self.residual_fixed_point,
            "positive": self.state.positive,
            "passed": self.passed,
        }


def _equation_a(alpha: np.ndarray, kappa: np.ndarray) -> np.ndarray:
    k = alpha.shape[0]
    r, s = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    rhs = np.empty((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            conv = (alpha[(i - r) % k, (j - s) % k] * alpha).sum()
            quad = (eta_pow(k, i * (r - s)) * kappa * kappa[(r + j) % k, (s + j) % k]).sum()
            rhs[i, j] = conv + quad / k
    return rhs


def _equation_b(alpha: np.ndarray, kappa: np.ndarray) -> np.ndarray:
    k = alpha.shape[0]
    i, j = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    rhs = np.empty((k, k), dtype=complex)
    for r in range(k):
        for s in range(k):
            rhs[r, s] = (
                eta_pow(k, i * (s - r))
                * alpha
                * (kappa[(r + j) % k, (s + j) % k] + kappa[(r - j) % k, (s - j) % k])
            ).sum()
    return rhs


def idempotency_report(f: Functional, tol: float = DEFAULT_TOL) -> IdempotencyReport:
    """Residuals of the three idempotent-state equations plus the fixed point f*f = f.

    The equations are transcribed term by term here rather than routed
    through :func:`convolve`, so each side checks the other.
    """
    res_a = float(np.abs(_equation_a(f.alpha, f.kappa) - f.alpha).max())
    res_b = float(np.abs(_equation_b(f.alpha, f.kappa) - f.kappa).max())
    res_c = abs(f.alpha_mass + f.kappa_trace - 1)
    fixed = convolve(f, f).distance(f)
    return IdempotencyReport(res_a, res_b, res_c, fixed, is_state(f, tol), tol)


# ---------------------------------------------------------------------------
# Fourier transform


@dataclass(frozen=True, eq=False)
class FourierMatrix:
    label: RepLabel
    matrix: np.ndarray

    def __matmul__(self, other: "FourierMatrix") -> np.ndarray:
        return self.matrix @ other.matrix


def _rho_values(f: Functional, p, q) -> np.ndarray:
    k = f.k
    m, n = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    return (f.alpha * eta_pow(k, m * p + n * q)).sum()


def _sigma_values(f: Functional, p, q) -> complex:
    k = f.k
    i = np.arange(k)
    return (f.kappa[i, (i + p) % k] * eta_pow(k, i * q)).sum()


def fourier(f: Functional, p: int, q: int) -> FourierMatrix:
    """The 2x2 matrix [[f(rho_{p,q}), f(sigma_{p,-q})], [f(sigma_{p,q}), f(rho_{p,-q})]]."""
    k = f.k
    p, q = p % k, q % k
    mat = np.array(
        [
            [_rho_values(f, p, q), _sigma_values(f, p, -q)],
            [_sigma_values(f, p, q), _rho_values(f, p, -q)],
        ],
        dtype=complex,
    )
    return FourierMatrix(RepLabel(p, q), mat)


def fourier_all(f: Functional) -> Dict[RepLabel, FourierMatrix]:
    return {lab: fourier(f, *lab) for lab in labels(f.k)}


def inverse_fourier(k: int, mats: Dict[RepLabel, np.ndarray]) -> Functional:
    """Recover (alpha, kappa) from the 2x2 matrices at every label.

    Each coefficient appears twice across the labels (entry (0,0) at (p,q)
    and entry (1,1) at (p,-q), likewise for the off-diagonal pair); both
    copies are averaged.
    """
    rho_hat = np.zeros((k, k), dtype=complex)
    sigma_hat = np.zeros((k, k), dtype=complex)
    for (p, q), m in mats.items():
        m = np.asarray(m)
        rho_hat[p, q] += m[0, 0] / 2
        rho_hat[p, -q % k] += m[1, 1] / 2
        sigma_hat[p, q] += m[1, 0] / 2
        sigma_hat[p, -q % k] += m[0, 1] / 2
    # rho_hat[p, q] = sum_{m,n} alpha_{m,n} eta^{mp+nq}, an unnormalised inverse DFT
    alpha = np.fft.fft2(rho_hat) / (k * k)
    # sigma_hat[p, q] = sum_i kappa_{i,i+p} eta^{iq}
    diag = np.fft.fft(sigma_hat, axis=1) / k  # diag[p, i] = kappa_{i,i+p}
    kappa = np.zeros((k, k), dtype=complex)
    i = np.arange(k)
    for p in range(k):
        kappa[i, (i + p) % k] = diag[p]
    return Functional(k, alpha, kappa)
