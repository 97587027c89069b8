"""The Sekine algebra A_k = (+)_{i,j} C d_{i,j} (+) M_k(C) and its Hopf structure.

An element is stored as two k x k complex arrays: ``dcoef`` holds the
coefficients of the minimal projections d_{i,j}, ``mcoef`` is the matrix
block written in the matrix units e_{r,s}.  Tensor powers are kept sparse
(a dict keyed by tuples of basis labels), since the comultiplication of a
basis element only has O(k^2) terms.
"""

from __future__ import annotations

import functools
import numbers
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, Tuple

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "AlgebraElement",
    "TensorElement",
    "Label",
    "basis_labels",
    "d",
    "e",
    "unit",
    "zero",
    "multiply",
    "adjoint",
    "comultiply",
    "comultiply_leg",
    "contract_leg",
    "counit",
    "haar_state",
    "tensor",
    "tensor_pair_apply",
    "eta_pow",
    "roots_of_unity",
]

DEFAULT_TOL = 1e-9

# ('d', i, j) or ('e', r, s)
Label = Tuple[str, int, int]

# Sign of the exponent of eta used when building Delta on basis elements.
# Only flipped by negative-control tests; any other value breaks the
# compatibility between Delta and the representations rho, sigma.
_DELTA_ETA_SIGN = 1


def _check_k(k: int) -> int:
    if not isinstance(k, numbers.Integral) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    return int(k)


@functools.lru_cache(maxsize=None)
def roots_of_unity(k: int) -> np.ndarray:
    """Table of eta^m for m = 0..k-1, with eta = exp(2 pi i / k)."""
    table = np.exp(2j * np.pi * np.arange(k) / k)
    table.setflags(write=False)
    return table


def eta_pow(k: int, m) -> np.ndarray | complex:
    """eta^m, reducing the exponent mod k before taking the exponential."""
    table = roots_of_unity(k)
    if np.isscalar(m):
        return complex(table[int(m) % k])
    return table[np.mod(m, k)]


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    k: int
    dcoef: np.ndarray
    mcoef: np.ndarray

    def __post_init__(self):
        _check_k(self.k)
        dc = np.array(self.dcoef, dtype=complex)
        mc = np.array(self.mcoef, dtype=complex)
        if dc.shape != (self.k, self.k) or mc.shape != (self.k, self.k):
            raise ValueError(
                f"coefficient arrays must be {self.k}x{self.k}, "
                f"got {dc.shape} and {mc.shape}"
            )
        dc.setflags(write=False)
        mc.setflags(write=False)
        object.__setattr__(self, "dcoef", dc)
        object.__setattr__(self, "mcoef", mc)

    def _same_k(self, other: "AlgebraElement"):
        if other.k != self.k:
            raise ValueError(f"mismatched k: {self.k} vs {other.k}")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same_k(other)
        return AlgebraElement(self.k, self.dcoef + other.dcoef, self.mcoef + other.mcoef)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same_k(other)
        return AlgebraElement(self.k, self.dcoef - other.dcoef, self.mcoef - other.mcoef)

    def __neg__(self):
        return AlgebraElement(self.k, -self.dcoef, -self.mcoef)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, numbers.Number):
            return AlgebraElement(self.k, other * self.dcoef, other * self.mcoef)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return AlgebraElement(self.k, other * self.dcoef, other * self.mcoef)
        return NotImplemented

    def adjoint(self) -> "AlgebraElement":
        return adjoint(self)

    def norm(self) -> float:
        """Largest absolute coefficient (not the C*-norm)."""
        return float(max(np.abs(self.dcoef).max(), np.abs(self.mcoef).max()))

    def distance(self, other: "AlgebraElement") -> float:
        return (self - other).norm()

    def allclose(self, other: "AlgebraElement", tol: float = DEFAULT_TOL) -> bool:
        return self.distance(other) <= tol

    def terms(self) -> Iterator[Tuple[Label, complex]]:
        """Nonzero (label, coefficient) pairs."""
        for i, j in zip(*np.nonzero(self.dcoef)):
            yield ("d", int(i), int(j)), complex(self.dcoef[i, j])
        for r, s in zip(*np.nonzero(self.mcoef)):
            yield ("e", int(r), int(s)), complex(self.mcoef[r, s])

    def __repr__(self):
        parts = [f"{c:.4g}*{t}_{i},{j}" for (t, i, j), c in self.terms()]
        return f"AlgebraElement(k={self.k}: {' + '.join(parts) or '0'})"


def zero(k: int) -> AlgebraElement:
    k = _check_k(k)
    return AlgebraElement(k, np.zeros((k, k)), np.zeros((k, k)))


def unit(k: int) -> AlgebraElement:
    k = _check_k(k)
    return AlgebraElement(k, np.ones((k, k)), np.eye(k))


def d(k: int, i: int, j: int) -> AlgebraElement:
    """The minimal projection d_{i,j}."""
    k = _check_k(k)
    dc = np.zeros((k, k), dtype=complex)
    dc[i % k, j % k] = 1
    return AlgebraElement(k, dc, np.zeros((k, k)))


def e(k: int, r: int, s: int) -> AlgebraElement:
    """The matrix unit e_{r,s}."""
    k = _check_k(k)
    mc = np.zeros((k, k), dtype=complex)
    mc[r % k, s % k] = 1
    return AlgebraElement(k, np.zeros((k, k)), mc)


def basis_labels(k: int) -> list[Label]:
    return [("d", i, j) for i in range(k) for j in range(k)] + [
        ("e", r, s) for r in range(k) for s in range(k)
    ]


def basis_element(k: int, label: Label) -> AlgebraElement:
    kind, i, j = label
    return d(k, i, j) if kind == "d" else e(k, i, j)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.k != b.k:
        raise ValueError(f"mismatched k: {a.k} vs {b.k}")
    return AlgebraElement(a.k, a.dcoef * b.dcoef, a.mcoef @ b.mcoef)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.k, a.dcoef.conj(), a.mcoef.conj().T)


def counit(a: AlgebraElement) -> complex:
    return complex(a.dcoef[0, 0])


def haar_state(a: AlgebraElement) -> complex:
    k = a.k
    return complex(a.dcoef.sum() / (2 * k * k) + np.trace(a.mcoef) / (2 * k))


# ---------------------------------------------------------------------------
# sparse tensors


def _basis_product(x: Label, y: Label):
    """Product of two basis elements as (label, 1) or None."""
    if x[0] != y[0]:
        return None
    if x[0] == "d":
        return x if x == y else None
    if x[2] != y[1]:
        return None
    return ("e", x[1], y[2])


@dataclass(frozen=True, eq=False)
class TensorElement:
    """Sparse element of A_k^{(x) n}: tuple of n labels -> coefficient."""

    k: int
    terms: Dict[Tuple[Label, ...], complex] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        for key in self.terms:
            return len(key)
        return 0

    def _same_k(self, other):
        if other.k != self.k:
            raise ValueError(f"mismatched k: {self.k} vs {other.k}")

    def __add__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._same_k(other)
        out = defaultdict(complex, self.terms)
        for key, c in other.terms.items():
            out[key] += c
        return TensorElement(self.k, dict(out))

    def __sub__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self + (-1) * other

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return TensorElement(self.k, {key: other * c for key, c in self.terms.items()})
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return other * self
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._same_k(other)
        # index the right factor by the left index of each leg so that only
        # composable pairs are visited
        def left_key(lab):
            return lab if lab[0] == "d" else ("e", lab[1])

        def right_key(lab):
            return lab if lab[0] == "d" else ("e", lab[2])

        index = defaultdict(list)
        for key, c in other.terms.items():
            index[tuple(left_key(lab) for lab in key)].append((key, c))
        out = defaultdict(complex)
        for key, c in self.terms.items():
            for key2, c2 in index.get(tuple(right_key(lab) for lab in key), ()):
                out[tuple(_basis_product(x, y) for x, y in zip(key, key2))] += c * c2
        return TensorElement(self.k, dict(out))

    def adjoint(self) -> "TensorElement":
        def star(lab):
            return lab if lab[0] == "d" else ("e", lab[2], lab[1])

        out = defaultdict(complex)
        for key, c in self.terms.items():
            out[tuple(star(lab) for lab in key)] += np.conj(c)
        return TensorElement(self.k, dict(out))

    def norm(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def distance(self, other: "TensorElement") -> float:
        return (self - other).norm()

    def to_element(self) -> AlgebraElement:
        """Collapse a rank-1 tensor back to an AlgebraElement."""
        if self.rank not in (0, 1):
            raise ValueError(f"rank {self.rank} tensor is not an algebra element")
        dc = np.zeros((self.k, self.k), dtype=complex)
        mc = np.zeros((self.k, self.k), dtype=complex)
        for ((kind, i, j),), c in self.terms.items():
            (dc if kind == "d" else mc)[i, j] += c
        return AlgebraElement(self.k, dc, mc)


def tensor(*elements: AlgebraElement) -> TensorElement:
    """Elementary tensor a_1 (x) ... (x) a_n."""
    k = elements[0].k
    if any(a.k != k for a in elements):
        raise ValueError("mismatched k in tensor product")
    terms = {(): 1 + 0j}
    for a in elements:
        nxt = {}
        for key, c in terms.items():
            for lab, c2 in a.terms():
                nxt[key + (lab,)] = c * c2
        terms = nxt
    return TensorElement(k, terms)


@functools.lru_cache(maxsize=None)
def _delta_basis(k: int) -> Dict[Label, Dict[Tuple[Label, Label], complex]]:
    sign = _DELTA_ETA_SIGN
    table: Dict[Label, Dict[Tuple[Label, Label], complex]] = {}
    rng = range(k)
    for i in rng:
        for j in rng:
            terms = defaultdict(complex)
            for m in rng:
                for n in rng:
                    terms[("d", m, n), ("d", (i - m) % k, (j - n) % k)] += 1
                    terms[("e", m, n), ("e", (m + j) % k, (n + j) % k)] += (
                        eta_pow(k, sign * i * (m - n)) / k
                    )
            table["d", i, j] = dict(terms)
    for i in rng:
        for j in rng:
            terms = defaultdict(complex)
            for m in rng:
                for n in rng:
                    terms[("d", -m % k, -n % k), ("e", (i - n) % k, (j - n) % k)] += eta_pow(
                        k, sign * m * (i - j)
                    )
                    terms[("e", (i - n) % k, (j - n) % k), ("d", m, n)] += eta_pow(
                        k, sign * m * (j - i)
                    )
            table["e", i, j] = dict(terms)
    return table


def comultiply(a: AlgebraElement) -> TensorElement:
    """Delta_k(a), extended linearly from the basis formulas."""
    return comultiply_leg(tensor(a), 0)


def comultiply_leg(t: TensorElement, leg: int) -> TensorElement:
    """Apply Delta to one tensor leg: (id^leg (x) Delta (x) id ...)(t)."""
    table = _delta_basis(t.k)
    out = defaultdict(complex)
    for key, c in t.terms.items():
        for (x, y), c2 in table[key[leg]].items():
            out[key[:leg] + (x, y) + key[leg + 1 :]] += c * c2
    return TensorElement(t.k, dict(out))


def contract_leg(t: TensorElement, leg: int, f: Callable[[Label], complex]) -> TensorElement:
    """Apply a functional (given on basis labels) to one leg, dropping it."""
    out = defaultdict(complex)
    for key, c in t.terms.items():
        v = f(key[leg])
        if v != 0:
            out[key[:leg] + key[leg + 1 :]] += c * v
    return TensorElement(t.k, dict(out))


def counit_on_label(label: Label) -> complex:
    return 1.0 if label == ("d", 0, 0) else 0.0


def haar_on_label(k: int) -> Callable[[Label], complex]:
    def h(label: Label) -> complex:
        kind, i, j = label
        if kind == "d":
            return 1 / (2 * k * k)
        return 1 / (2 * k) if i == j else 0.0

    return h


def functional_on_label(f) -> Callable[[Label], complex]:
    """Basis values of anything carrying ``alpha`` and ``kappa`` arrays."""

    def value(label: Label) -> complex:
        kind, i, j = label
        return f.alpha[i, j] if kind == "d" else f.kappa[i, j]

    return value


def tensor_pair_apply(f, g, t: TensorElement) -> complex:
    """(f (x) g)(t) for a rank-2 tensor."""
    if f.k != t.k or g.k != t.k:
        raise ValueError("mismatched k")
    fv, gv = functional_on_label(f), functional_on_label(g)
    return complex(sum(c * fv(x) * gv(y) for (x, y), c in t.terms.items()))
