"""Enumeration of every idempotent state on A_k.

The catalog is the Haar state together with three families:

* ``HaarSub``  -- uniform measures h_G on subgroups G of Z_k x Z_k (kappa = 0);
* ``TypeII``   -- h_{G,l} with G = Z_k x qZ_k and a diagonal kappa supported on
  the residue class l mod q;
* ``TypeIII``  -- h_{G,l,tau} with G = pZ_k x qZ_k, pq = k, and a circulant
  kappa block signed by tau.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

import numpy as np

from .algebra import DEFAULT_TOL, _check_k, roots_of_unity
from .functionals import Functional, idempotency_report, is_state

__all__ = [
    "Subgroup",
    "TauVector",
    "Haar",
    "HaarSub",
    "TypeII",
    "TypeIII",
    "IdempotentDescriptor",
    "CatalogEntry",
    "Catalog",
    "closure",
    "enumerate_subgroups",
    "divisors",
    "haar_functional",
    "build_haar_sub",
    "build_type2",
    "enumerate_tau",
    "build_type3",
    "build",
    "enumerate_catalog",
    "classify",
    "nearest",
]

log = logging.getLogger(__name__)

CLASSIFY_TOL = 1e-6
TAU_WARN_SIZE = 20

Pair = Tuple[int, int]


def divisors(k: int) -> List[int]:
    return [d for d in range(1, k + 1) if k % d == 0]


# ---------------------------------------------------------------------------
# subgroups of Z_k x Z_k


def closure(k: int, generators: Iterable[Pair]) -> FrozenSet[Pair]:
    """Subgroup of Z_k x Z_k generated by ``generators``."""
    elems = {(0, 0)}
    frontier = [(0, 0)]
    gens = [(a % k, b % k) for a, b in generators]
    while frontier:
        nxt = []
        for x, y in frontier:
            for a, b in gens:
                z = ((x + a) % k, (y + b) % k)
                if z not in elems:
                    elems.add(z)
                    nxt.append(z)
        frontier = nxt
    return frozenset(elems)


@dataclass(frozen=True)
class Subgroup:
    k: int
    elements: Tuple[Pair, ...]

    @classmethod
    def from_elements(cls, k: int, elements: Iterable[Pair]) -> "Subgroup":
        elems = tuple(sorted({(a % k, b % k) for a, b in elements}))
        sub = cls(k, elems)
        if not sub.is_subgroup():
            raise ValueError(f"not a subgroup of Z_{k} x Z_{k}: {elems}")
        return sub

    @classmethod
    def generated(cls, k: int, generators: Iterable[Pair]) -> "Subgroup":
        return cls(k, tuple(sorted(closure(k, generators))))

    @classmethod
    def product(cls, k: int, p: int, q: int) -> "Subgroup":
        """pZ_k x qZ_k."""
        return cls.generated(k, [(p, 0), (0, q)])

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return (a % self.k, b % self.k) in set(self.elements)

    def __le__(self, other: "Subgroup") -> bool:
        return set(self.elements) <= set(other.elements)

    def is_subgroup(self) -> bool:
        k, s = self.k, set(self.elements)
        if (0, 0) not in s or (k * k) % len(s):
            return False
        for (a, b), (c, d) in itertools.product(s, s):
            if ((a + c) % k, (b + d) % k) not in s:
                return False
        return all(((-a) % k, (-b) % k) in s for a, b in s)

    def hermite(self) -> Tuple[int, int, int]:
        """Generators (a, b), (0, c) in Hermite normal form, with 1 <= a, c <= k."""
        k, s = self.k, set(self.elements)
        a = next(i for i in range(1, k + 1) if any((i % k, j) in s for j in range(k)))
        b = next(j for j in range(k) if (a % k, j) in s)
        c = next(j for j in range(1, k + 1) if (0, j % k) in s)
        return a, b, c

    @property
    def label(self) -> str:
        a, b, c = self.hermite()
        return f"G[{a},{b};0,{c}]"


def enumerate_subgroups(k: int) -> List[Subgroup]:
    """Every subgroup of Z_k x Z_k exactly once, ordered by (order, elements).

    Each subgroup is the join of (at most) two cyclic subgroups, so the
    cyclic ones are closed first and then joined pairwise.
    """
    k = _check_k(k)
    cyclic = {closure(k, [(a, b)]) for a in range(k) for b in range(k)}
    gens = {}
    for c in cyclic:
        # a generator of each cyclic subgroup: an element of maximal order
        gens[c] = max(c, key=lambda g: len(closure(k, [g])))
    found = set(cyclic)
    cyc = list(cyclic)
    for x, y in itertools.combinations(cyc, 2):
        found.add(closure(k, [gens[x], gens[y]]))
    subs = [Subgroup(k, tuple(sorted(s))) for s in found]
    subs.sort(key=lambda g: (g.order, g.elements))
    return subs


# ---------------------------------------------------------------------------
# sign vectors for the circulant family


@dataclass(frozen=True)
class TauVector:
    """Signs tau_j for j in qZ_k, stored by j/q = 0..p-1."""

    k: int
    q: int
    values: Tuple[int, ...]

    @property
    def p(self) -> int:
        return self.k // self.q

    def __getitem__(self, j: int) -> int:
        """tau at the group element j (must be a multiple of q)."""
        j %= self.k
        if j % self.q:
            raise KeyError(f"tau is indexed by multiples of {self.q}, got {j}")
        return self.values[j // self.q]

    def dft(self) -> np.ndarray:
        """sum_{j in qZ_k} tau_j eta^{ij} for i = 0..p-1."""
        p = self.p
        roots = roots_of_unity(p)  # eta^q is a primitive p-th root
        idx = np.outer(np.arange(p), np.arange(p)) % p
        return roots[idx] @ np.asarray(self.values, dtype=float)

    def is_positive(self, tol: float = DEFAULT_TOL) -> bool:
        vals = self.dft()
        return bool((vals.real >= -tol).all() and (np.abs(vals.imag) <= tol).all())

    @property
    def signs(self) -> str:
        return "".join("+" if v > 0 else "-" for v in self.values)


def enumerate_tau(k: int, q: int, tol: float = DEFAULT_TOL) -> List[TauVector]:
    """All sign patterns with tau_0 = +1 whose DFT is real and nonnegative."""
    if k % q:
        raise ValueError(f"q={q} does not divide k={k}")
    p = k // q
    if p < 2:
        raise ValueError(f"need p = k/q > 1, got p={p}")
    if p > TAU_WARN_SIZE:
        warnings.warn(f"enumerating 2^{p - 1} sign patterns for k={k}, q={q}", stacklevel=2)
    out = []
    for rest in itertools.product((1, -1), repeat=p - 1):
        tau = TauVector(k, q, (1,) + rest)
        if tau.is_positive(tol):
            out.append(tau)
    return out


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class Haar:
    k: int
    family = "haar"

    @property
    def label(self) -> str:
        return "h"

    def subgroup(self) -> None:
        return None

    def to_dict(self) -> dict:
        return {"type": "Haar", "k": self.k}


@dataclass(frozen=True)
class HaarSub:
    gamma: Subgroup
    family = "I1"

    @property
    def k(self) -> int:
        return self.gamma.k

    @property
    def label(self) -> str:
        if self.gamma.order == 1:
            return "eps"
        return "h_" + self.gamma.label

    def subgroup(self) -> Subgroup:
        return self.gamma

    def to_dict(self) -> dict:
        return {
            "type": "HaarSub",
            "k": self.k,
            "generators": list(self.gamma.hermite()),
            "elements": [list(x) for x in self.gamma.elements],
        }


@dataclass(frozen=True)
class TypeII:
    k: int
    q: int
    l: int
    family = "I2"

    def __post_init__(self):
        if self.q <= 1 or self.k % self.q:
            raise ValueError(f"TypeII needs a divisor q > 1 of k={self.k}, got q={self.q}")
        if not 0 <= self.l < self.q:
            raise ValueError(f"TypeII needs 0 <= l < q={self.q}, got l={self.l}")

    @property
    def label(self) -> str:
        return f"h_{{{self.q},{self.l}}}"

    def subgroup(self) -> Subgroup:
        return Subgroup.product(self.k, 1, self.q)

    def to_dict(self) -> dict:
        return {"type": "TypeII", "k": self.k, "q": self.q, "l": self.l}


@dataclass(frozen=True)
class TypeIII:
    k: int
    p: int
    l: int
    tau: TauVector
    family = "I3"

    def __post_init__(self):
        if self.p <= 1 or self.k % self.p:
            raise ValueError(f"TypeIII needs a divisor p > 1 of k={self.k}, got p={self.p}")
        if not 0 <= self.l < self.q:
            raise ValueError(f"TypeIII needs 0 <= l < q={self.q}, got l={self.l}")
        if self.tau.k != self.k or self.tau.q != self.q:
            raise ValueError("tau does not match (k, q)")

    @property
    def q(self) -> int:
        return self.k // self.p

    @property
    def label(self) -> str:
        return f"h_{{{self.p},{self.l},{self.tau.signs}}}"

    def subgroup(self) -> Subgroup:
        return Subgroup.product(self.k, self.p, self.q)

    def to_dict(self) -> dict:
        return {
            "type": "TypeIII",
            "k": self.k,
            "p": self.p,
            "q": self.q,
            "l": self.l,
            "tau": list(self.tau.values),
        }


IdempotentDescriptor = Union[Haar, HaarSub, TypeII, TypeIII]


# ---------------------------------------------------------------------------
# builders


def haar_functional(k: int) -> Functional:
    k = _check_k(k)
    return Functional(k, np.full((k, k), 1 / (2 * k * k)), np.eye(k) / (2 * k))


def build_haar_sub(gamma: Subgroup) -> Functional:
    k = gamma.k
    alpha = np.zeros((k, k))
    for i, j in gamma.elements:
        alpha[i, j] = 1 / gamma.order
    return Functional(k, alpha, np.zeros((k, k)))


def build_type2(k: int, q: int, l: int) -> Functional:
    TypeII(k, q, l)  # validates
    gamma = Subgroup.product(k, 1, q)
    alpha = np.zeros((k, k))
    alpha[:, ::q] = 1 / (2 * gamma.order)
    kappa = np.zeros((k, k))
    r = np.arange(l, k, q)
    kappa[r, r] = q / (2 * k)
    return Functional(k, alpha, kappa)


def build_type3(k: int, p: int, l: int, tau: TauVector, tol: float = DEFAULT_TOL) -> Functional:
    desc = TypeIII(k, p, l, tau)
    if not tau.is_positive(tol):
        raise ValueError(f"tau {tau.signs} fails the positivity condition")
    q = desc.q
    alpha = np.zeros((k, k))
    alpha[::p, ::q] = 1 / (2 * k)
    kappa = np.zeros((k, k))
    idx = np.arange(l, k, q)
    for r in idx:
        for s in idx:
            kappa[r, s] = q / (2 * k) * tau[s - r]
    return Functional(k, alpha, kappa)


def build(desc: IdempotentDescriptor) -> Functional:
    if isinstance(desc, Haar):
        return haar_functional(desc.k)
    if isinstance(desc, HaarSub):
        return build_haar_sub(desc.gamma)
    if isinstance(desc, TypeII):
        return build_type2(desc.k, desc.q, desc.l)
    if isinstance(desc, TypeIII):
        return build_type3(desc.k, desc.p, desc.l, desc.tau)
    raise TypeError(f"unknown descriptor {desc!r}")


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    descriptor: IdempotentDescriptor
    functional: Functional

    @property
    def label(self) -> str:
        return self.descriptor.label


@dataclass(frozen=True)
class Catalog:
    k: int
    entries: Tuple[CatalogEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def descriptors(self) -> List[IdempotentDescriptor]:
        return [e.descriptor for e in self.entries]

    @property
    def functionals(self) -> List[Functional]:
        return [e.functional for e in self.entries]

    @property
    def labels(self) -> List[str]:
        return [e.label for e in self.entries]

    def family(self, name: str) -> List[CatalogEntry]:
        return [e for e in self.entries if e.descriptor.family == name]

    def index(self, label: str) -> int:
        return self.labels.index(label)


def _descriptors(k: int, tol: float) -> List[IdempotentDescriptor]:
    descs: List[IdempotentDescriptor] = [Haar(k)]
    descs += [HaarSub(g) for g in enumerate_subgroups(k)]
    for q in divisors(k)[1:]:
        descs += [TypeII(k, q, l) for l in range(q)]
    for p in divisors(k)[1:]:
        q = k // p
        taus = sorted(enumerate_tau(k, q, tol), key=lambda t: tuple(-v for v in t.values))
        descs += [TypeIII(k, p, l, tau) for l in range(q) for tau in taus]
    return descs


def pairwise_min_distance(functionals: List[Functional]) -> float:
    if len(functionals) < 2:
        return np.inf
    vecs = np.stack([f.vector() for f in functionals])
    best = np.inf
    for i in range(len(vecs) - 1):
        dist = np.abs(vecs[i + 1 :] - vecs[i]).max(axis=1).min()
        best = min(best, float(dist))
    return best


def enumerate_catalog(k: int, verify: bool = True, tol: float = DEFAULT_TOL) -> Catalog:
    """The full list Idem(A_k), in deterministic order.

    With ``verify`` every member is checked to be an idempotent state at
    ``tol`` and the members are checked to be pairwise distinct.
    """
    k = _check_k(k)
    entries = tuple(CatalogEntry(d, build(d)) for d in _descriptors(k, tol))
    if verify:
        for entry in entries:
            rep = idempotency_report(entry.functional, tol)
            if not (rep.passed and is_state(entry.functional, tol).passed):
                raise RuntimeError(f"catalog member {entry.label} fails verification: {rep}")
        gap = pairwise_min_distance([e.functional for e in entries])
        if gap <= CLASSIFY_TOL:
            raise RuntimeError(f"catalog members collide (min distance {gap:.3g})")
    log.debug("k=%d: %d idempotent states", k, len(entries))
    return Catalog(k, entries)


def nearest(f: Functional, catalog: Catalog) -> Tuple[IdempotentDescriptor, float]:
    """The closest catalog member and its L-infinity distance to ``f``."""
    if f.k != catalog.k:
        raise ValueError(f"mismatched k: {f.k} vs {catalog.k}")
    dists = [f.distance(e.functional) for e in catalog]
    best = int(np.argmin(dists))
    return catalog[best].descriptor, dists[best]


def classify(f: Functional, catalog: Catalog, tol: float = CLASSIFY_TOL) -> Optional[IdempotentDescriptor]:
    """Descriptor of the nearest catalog member if it is within ``tol``."""
    desc, dist = nearest(f, catalog)
    return desc if dist < tol else None
