"""Named invariant suites for A_k: Hopf axioms, representations, Fourier transform.

Each check returns a :class:`CheckResult` holding the worst residual seen.
:func:`run_selfcheck` runs them all; the CLI ``selfcheck`` command is a thin
wrapper around it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .algebra import (
    AlgebraElement,
    adjoint,
    basis_element,
    basis_labels,
    comultiply,
    comultiply_leg,
    contract_leg,
    counit,
    counit_on_label,
    eta_pow,
    haar_on_label,
    haar_state,
    multiply,
    tensor,
    unit,
)
from .functionals import Functional, convolve, convolve_oracle, fourier_all
from .representations import (
    decompose_characters,
    irrep_inventory,
    labels,
    pi,
    rho,
    sigma,
)

__all__ = ["CheckResult", "CHECKS", "run_selfcheck", "random_element", "random_functional"]

AXIOM_TOL = 1e-12
PRODUCT_TOL = 1e-9
ORACLE_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<28} residual={self.residual:.3e}  tol={self.tol:.0e}"


def random_element(k: int, rng: np.random.Generator) -> AlgebraElement:
    shape = (k, k)
    return AlgebraElement(
        k,
        rng.normal(size=shape) + 1j * rng.normal(size=shape),
        rng.normal(size=shape) + 1j * rng.normal(size=shape),
    )


def random_functional(k: int, rng: np.random.Generator) -> Functional:
    """A random (not necessarily positive) functional with unit-scale entries."""
    shape = (k, k)
    return Functional(
        k,
        rng.normal(size=shape) + 1j * rng.normal(size=shape),
        rng.normal(size=shape) + 1j * rng.normal(size=shape),
    )


def check_coassociativity(k: int, rng=None) -> float:
    worst = 0.0
    for lab in basis_labels(k):
        delta = comultiply(basis_element(k, lab))
        worst = max(worst, comultiply_leg(delta, 0).distance(comultiply_leg(delta, 1)))
    return worst


def check_counit(k: int, rng=None) -> float:
    worst = 0.0
    for lab in basis_labels(k):
        a = tensor(basis_element(k, lab))
        delta = comultiply_leg(a, 0)
        left = contract_leg(delta, 0, counit_on_label)
        right = contract_leg(delta, 1, counit_on_label)
        worst = max(worst, left.distance(a), right.distance(a))
    return worst


def check_delta_multiplicative(k: int, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(3):
        a, b = random_element(k, rng), random_element(k, rng)
        lhs = comultiply(multiply(a, b))
        rhs = comultiply(a) * comultiply(b)
        worst = max(worst, lhs.distance(rhs) / max(1.0, lhs.norm()))
    return worst


def check_delta_star(k: int, rng: np.random.Generator) -> float:
    worst = comultiply(unit(k)).distance(tensor(unit(k), unit(k)))
    for _ in range(3):
        a = random_element(k, rng)
        worst = max(worst, comultiply(adjoint(a)).distance(comultiply(a).adjoint()))
    return worst


def check_haar_invariance(k: int, rng=None) -> float:
    h = haar_on_label(k)
    one = tensor(unit(k))
    worst = 0.0
    for lab in basis_labels(k):
        a = basis_element(k, lab)
        delta = comultiply(a)
        target = haar_state(a) * one
        worst = max(worst, contract_leg(delta, 0, h).distance(target))
        worst = max(worst, contract_leg(delta, 1, h).distance(target))
    return worst


def check_haar_trace(k: int, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(20):
        a, b = random_element(k, rng), random_element(k, rng)
        worst = max(worst, abs(haar_state(a * b) - haar_state(b * a)))
    return worst


def check_counit_character(k: int, rng: np.random.Generator) -> float:
    worst = abs(counit(unit(k)) - 1)
    for _ in range(20):
        a, b = random_element(k, rng), random_element(k, rng)
        worst = max(worst, abs(counit(a * b) - counit(a) * counit(b)))
    return worst


def check_rho_sigma_relations(k: int, rng=None) -> float:
    rhos = {(p, q): rho(k, p, q) for p in range(k) for q in range(k)}
    sigmas = {(r, s): sigma(k, r, s) for r in range(k) for s in range(k)}
    worst = 0.0
    for (p, q), x in rhos.items():
        worst = max(worst, adjoint(x).distance(rhos[-p % k, -q % k]))
        for (p2, q2), y in rhos.items():
            worst = max(worst, (x * y).distance(rhos[(p + p2) % k, (q + q2) % k]))
        for y in sigmas.values():
            worst = max(worst, (x * y).norm(), (y * x).norm())
    for (r, s), x in sigmas.items():
        star = eta_pow(k, r * s) * sigmas[-r % k, -s % k]
        worst = max(worst, adjoint(x).distance(star))
        for (r2, s2), y in sigmas.items():
            prod = eta_pow(k, r * s2) * sigmas[(r + r2) % k, (s + s2) % k]
            worst = max(worst, (x * y).distance(prod))
    return worst


def check_pi_unitary(k: int, rng=None) -> float:
    worst = 0.0
    for p, q in labels(k):
        u = pi(k, p, q)
        worst = max(worst, (u.adjoint() @ u).distance_to_identity())
        worst = max(worst, (u @ u.adjoint()).distance_to_identity())
    return worst


def check_pi_corepresentation(k: int, rng=None) -> float:
    """Delta(u_ab) = sum_c u_ac (x) u_cb for every entry of every pi_{p,q}."""
    worst = 0.0
    for p, q in labels(k):
        u = pi(k, p, q)
        for a in range(2):
            for b in range(2):
                rhs = tensor(u[a, 0], u[0, b]) + tensor(u[a, 1], u[1, b])
                worst = max(worst, comultiply(u[a, b]).distance(rhs))
    return worst


def check_pi_equivalence(k: int, rng=None) -> float:
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    worst = 0.0
    for p, q in labels(k):
        conj = pi(k, p, q).conjugate_by(swap)
        worst = max(worst, conj.distance(pi(k, p, -q)))
    return worst


def check_characters(k: int, rng=None) -> float:
    worst = 0.0
    count = 0
    one = unit(k)
    for p in range(k):
        for chi in decompose_characters(k, p):
            count += 1
            worst = max(worst, comultiply(chi).distance(tensor(chi, chi)))
            worst = max(worst, (adjoint(chi) * chi).distance(one))
    inventory = irrep_inventory(k)
    if count != inventory.one_dim_count:
        return float("inf")
    return worst


def check_fourier_multiplicative(k: int, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(10):
        mu, nu = random_functional(k, rng), random_functional(k, rng)
        lhs, a, b = fourier_all(convolve(mu, nu)), fourier_all(mu), fourier_all(nu)
        for lab in lhs:
            worst = max(worst, np.abs(lhs[lab].matrix - a[lab].matrix @ b[lab].matrix).max())
    return float(worst)


def check_convolution_oracle(k: int, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(3):
        mu, nu = random_functional(k, rng), random_functional(k, rng)
        worst = max(worst, convolve(mu, nu).distance(convolve_oracle(mu, nu)))
    return worst


CHECKS: List[tuple] = [
    ("coassociativity", check_coassociativity, AXIOM_TOL),
    ("counit laws", check_counit, AXIOM_TOL),
    ("Delta multiplicative", check_delta_multiplicative, PRODUCT_TOL),
    ("Delta *-preserving, unital", check_delta_star, PRODUCT_TOL),
    ("Haar bi-invariance", check_haar_invariance, AXIOM_TOL),
    ("Haar trace property", check_haar_trace, AXIOM_TOL),
    ("counit is a character", check_counit_character, AXIOM_TOL),
    ("rho/sigma relations", check_rho_sigma_relations, AXIOM_TOL),
    ("pi unitary", check_pi_unitary, AXIOM_TOL),
    ("pi corepresentation", check_pi_corepresentation, AXIOM_TOL),
    ("pi(p,q) ~ pi(p,-q)", check_pi_equivalence, AXIOM_TOL),
    ("one-dim characters", check_characters, AXIOM_TOL),
    ("Fourier multiplicative", check_fourier_multiplicative, ORACLE_TOL),
    ("convolution oracle", check_convolution_oracle, ORACLE_TOL),
]


def run_selfcheck(k: int, seed: int = 0, only: Optional[Callable[[str], bool]] = None) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    for name, fn, tol in CHECKS:
        if only is not None and not only(name):
            continue
        try:
            residual = float(fn(k, rng))
        except Exception:  # a crash counts as a failure of that property
            residual = float("inf")
        results.append(CheckResult(name, residual, tol))
    return results
