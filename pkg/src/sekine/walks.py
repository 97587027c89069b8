"""Random walks on A_k: convolution powers, Cesaro averages and convergence tests."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .algebra import DEFAULT_TOL
from .functionals import Functional, convolve, fourier_all, inverse_fourier, is_state, point_d
from .idempotents import Catalog, IdempotentDescriptor, classify, enumerate_catalog
from .representations import RepLabel

__all__ = [
    "WalkReport",
    "SpectralReport",
    "walk",
    "cesaro",
    "cesaro_limit",
    "check_sufficient",
    "check_weak_sufficient",
    "weak_condition_labels",
    "spectral_report",
    "random_state",
    "random_mixture",
]

WALK_TOL = 1e-10
MAX_STEPS = 10**5
CONSECUTIVE = 3
TRACE_POINTS = 1000


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: Dict[RepLabel, Tuple[complex, complex]]
    tol: float

    @property
    def max_modulus(self) -> float:
        return max(abs(z) for pair in self.eigenvalues.values() for z in pair)

    def peripheral(self) -> Dict[RepLabel, List[complex]]:
        """Eigenvalues on the unit circle other than 1, by label."""
        out = {}
        for lab, pair in self.eigenvalues.items():
            bad = [z for z in pair if abs(z) >= 1 - self.tol and abs(z - 1) >= self.tol]
            if bad:
                out[lab] = bad
        return out

    @property
    def convergent_spectrum(self) -> bool:
        """Every eigenvalue is either strictly inside the disc or equal to 1."""
        return not self.peripheral()


def spectral_report(mu: Functional, tol: float = 1e-9) -> SpectralReport:
    eig = {}
    for lab, fm in fourier_all(mu).items():
        vals = np.linalg.eigvals(fm.matrix)
        eig[lab] = (complex(vals[0]), complex(vals[1]))
    return SpectralReport(eig, tol)


@dataclass
class WalkReport:
    converged: bool
    steps_used: int
    limit: Optional[Functional]
    limit_descriptor: Optional[IdempotentDescriptor]
    trace: List[Tuple[int, float]] = field(default_factory=list)
    spectrum: Optional[SpectralReport] = None

    def to_dict(self, max_points: int = TRACE_POINTS) -> dict:
        from .serialize import functional_to_dict

        trace = self.trace
        if len(trace) > max_points:
            idx = np.linspace(0, len(trace) - 1, max_points).round().astype(int)
            trace = [trace[i] for i in idx]
        doc = {
            "converged": self.converged,
            "steps_used": self.steps_used,
            "limit": functional_to_dict(self.limit) if self.limit is not None else None,
            "limit_descriptor": self.limit_descriptor.label if self.limit_descriptor else None,
            "trace": [[n, r] for n, r in trace],
        }
        if self.spectrum is not None:
            doc["spectrum"] = {
                f"{p},{q}": [[z.real, z.imag] for z in pair]
                for (p, q), pair in self.spectrum.eigenvalues.items()
            }
            doc["peripheral_eigenvalues"] = {
                f"{p},{q}": [[z.real, z.imag] for z in zs]
                for (p, q), zs in self.spectrum.peripheral().items()
            }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def walk(
    mu: Functional,
    max_steps: int = MAX_STEPS,
    tol: float = WALK_TOL,
    catalog: Optional[Catalog] = None,
) -> WalkReport:
    """Follow mu^{*n} until three consecutive steps move less than ``tol``.

    Probes sit at n = 1, 2, 4, 8, ...: mu^{*n} is reached by squaring, then
    three single steps are taken from it.  A periodic walk therefore fails
    after O(log max_steps) convolutions instead of max_steps.
    """
    if not is_state(mu).passed:
        raise ValueError("walk needs a state")
    if catalog is None:
        catalog = enumerate_catalog(mu.k, verify=False)
    trace: List[Tuple[int, float]] = []
    power, n = mu, 1
    while n <= max_steps:
        current, ok = power, True
        for step in range(CONSECUTIVE):
            nxt = convolve(current, mu)
            diff = nxt.distance(current)
            trace.append((n + step, diff))
            if diff >= tol:
                ok = False
                break
            current = nxt
        if ok:
            return WalkReport(True, n, power, classify(power, catalog), trace, spectral_report(mu))
        power, n = convolve(power, power), 2 * n
    return WalkReport(False, max_steps, None, None, trace, spectral_report(mu))


def cesaro(mu: Functional, n: int) -> Functional:
    """(1/N) sum_{m=1}^{N} mu^{*m}.

    The partial sums obey S_{a+b} = S_a + mu^{*a} * S_b, so S_N is built
    from the binary expansion of N with O(log N) convolutions and O(k^2)
    memory.
    """
    if n < 1:
        raise ValueError(f"Cesaro average needs N >= 1, got {n}")
    count = n
    total: Optional[Functional] = None  # S_m for the bits consumed so far
    total_power: Optional[Functional] = None  # mu^{*m}
    block_sum, block_power = mu, mu  # S_{2^b}, mu^{*2^b}
    while n:
        if n & 1:
            if total is None:
                total, total_power = block_sum, block_power
            else:
                total = total + convolve(total_power, block_sum)
                total_power = convolve(total_power, block_power)
        n >>= 1
        if n:
            block_sum = block_sum + convolve(block_power, block_sum)
            block_power = convolve(block_power, block_power)
    return (1 / count) * total


def _fixed_projector(mat: np.ndarray, tol: float) -> np.ndarray:
    """Orthogonal projector onto ker(mat - I)."""
    _, sv, vh = np.linalg.svd(mat - np.eye(mat.shape[0]))
    null = vh[sv < tol].conj().T
    return null @ null.conj().T


def cesaro_limit(mu: Functional, tol: float = 1e-8) -> Functional:
    """The idempotent state lim_N (1/N) sum_{m<=N} mu^{*m}, computed exactly.

    Every Fourier matrix of a state is a contraction, and for a contraction
    the Cesaro means converge to the orthogonal projector onto its fixed
    vectors.  Those projectors are assembled label by label and transformed
    back.  ``tol`` is the singular-value cut deciding which directions are
    fixed.
    """
    if not is_state(mu).passed:
        raise ValueError("Cesaro limit needs a state")
    mats = {lab: _fixed_projector(fm.matrix, tol) for lab, fm in fourier_all(mu).items()}
    return inverse_fourier(mu.k, mats)


def check_sufficient(mu: Functional, tol: float = DEFAULT_TOL) -> bool:
    """alpha_{0,0} > 0 guarantees that mu^{*n} converges."""
    return bool(mu.alpha[0, 0].real > tol)


def weak_condition_labels(mu: Functional, tol: float = DEFAULT_TOL) -> Dict[RepLabel, bool]:
    """Per label (p, q): whether {eta^{ip+jq} : alpha_{i,j} != 0} has at least two values."""
    k = mu.k
    support = [(i, j) for i, j in zip(*np.nonzero(np.abs(mu.alpha) > tol))]
    out = {}
    for p in range(k):
        for q in range(k):
            values = {(i * p + j * q) % k for i, j in support}
            out[RepLabel(p, q)] = len(values) >= 2
    return out


def check_weak_sufficient(mu: Functional, tol: float = DEFAULT_TOL) -> bool:
    return all(weak_condition_labels(mu, tol).values())


def random_state(
    k: int,
    seed: int,
    force_alpha00: bool = False,
    alpha_density: float = 1.0,
    kappa_rank: Optional[int] = None,
) -> Functional:
    """A reproducible random state.

    alpha is exponential noise on a random support of relative size
    ``alpha_density``; kappa = G G^* for a complex Gaussian k x rank matrix G
    (rank 0 gives kappa = 0).  With ``force_alpha00`` the state is mixed
    with the counit so that alpha_{0,0} >= 0.01.
    """
    rng = np.random.default_rng(seed)
    alpha = rng.exponential(size=(k, k))
    if alpha_density < 1:
        mask = rng.random((k, k)) < alpha_density
        alpha = alpha * mask
    rank = k if kappa_rank is None else kappa_rank
    g = rng.normal(size=(k, rank)) + 1j * rng.normal(size=(k, rank))
    kappa = g @ g.conj().T
    kappa = (kappa + kappa.conj().T) / 2
    total = alpha.sum() + np.trace(kappa).real
    if total == 0:
        alpha[0, 0] = total = 1.0
    mu = Functional(k, alpha / total, kappa / total)
    if force_alpha00:
        eps = np.zeros((k, k))
        eps[0, 0] = 1
        mu = 0.99 * mu + 0.01 * Functional(k, eps, np.zeros((k, k)))
    return mu


def random_mixture(catalog: Catalog, seed: int) -> Functional:
    """A random convex combination of one or two catalog members.

    Half the time a point mass d_{i,j} on the alpha-support of the first
    member is mixed in as well.  The Cesaro limit is then the smallest
    idempotent above every ingredient, which reaches all families.
    """
    rng = np.random.default_rng(seed)
    members = catalog.entries
    picks = rng.choice(len(members), size=int(rng.integers(1, 3)), replace=False)
    parts = [members[int(i)].functional for i in picks]
    if rng.random() < 0.5:
        support = np.argwhere(np.abs(parts[0].alpha) > DEFAULT_TOL)
        i, j = support[int(rng.integers(len(support)))]
        parts.append(point_d(catalog.k, i, j))
    weights = rng.dirichlet(np.ones(len(parts)))
    out = weights[0] * parts[0]
    for w, f in zip(weights[1:], parts[1:]):
        out = out + w * f
    return out
