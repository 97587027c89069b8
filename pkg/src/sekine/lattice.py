"""The order phi_1 < phi_2 iff phi_1 * phi_2 = phi_2 on idempotent states.

Three independent routes decide the order:

* :func:`precedes` convolves and compares;
* :func:`precedes_fourier` checks mu^(pi) nu^(pi) = nu^(pi) label by label;
* :func:`theoretic_precedes` looks only at the descriptors.

The Hasse diagram is the transitive reduction of the resulting relation.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .functionals import EQUALITY_TOL, Functional, convolve, fourier_all
from .idempotents import Catalog, Haar, HaarSub, IdempotentDescriptor, TypeIII

__all__ = [
    "OrderRelation",
    "HasseDiagram",
    "precedes",
    "precedes_fourier",
    "theoretic_precedes",
    "build_order",
    "hasse",
    "export_dot",
    "export_json",
    "max_workers",
]

WORKERS_ENV = "SEKINE_MAX_WORKERS"


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def precedes(mu: Functional, nu: Functional, tol: float = EQUALITY_TOL) -> bool:
    return convolve(mu, nu).distance(nu) < tol


def precedes_fourier(mu: Functional, nu: Functional, tol: float = EQUALITY_TOL) -> bool:
    mu_hat, nu_hat = fourier_all(mu), fourier_all(nu)
    for lab, b in nu_hat.items():
        if np.abs(mu_hat[lab].matrix @ b.matrix - b.matrix).max() >= tol:
            return False
    return True


def _congruent(a: int, b: int, mod: int) -> bool:
    return (a - b) % mod == 0


def theoretic_precedes(da: IdempotentDescriptor, db: IdempotentDescriptor) -> bool:
    """Decide da < db from the family parameters alone."""
    if da.k != db.k:
        raise ValueError(f"mismatched k: {da.k} vs {db.k}")
    # the Haar state is the maximum
    if isinstance(db, Haar):
        return True
    if isinstance(da, Haar):
        return False
    if isinstance(da, HaarSub):
        # below anything whose subgroup contains its own
        return da.gamma <= db.subgroup()
    if isinstance(db, HaarSub):
        return False
    if isinstance(db, TypeIII):
        # nothing but itself lies below a circulant state
        return isinstance(da, TypeIII) and da == db
    # db is TypeII: TypeII and TypeIII below it pass the same congruence test
    return da.q % db.q == 0 and _congruent(da.l, db.l, db.q)


@dataclass(frozen=True, eq=False)
class OrderRelation:
    """Boolean matrix rel[i, j] = (node i < node j)."""

    labels: Tuple[str, ...]
    rel: np.ndarray
    catalog: Optional[Catalog] = None

    def __post_init__(self):
        rel = np.array(self.rel, dtype=bool)
        n = len(self.labels)
        if rel.shape != (n, n):
            raise ValueError(f"relation must be {n}x{n}, got {rel.shape}")
        rel.setflags(write=False)
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "labels", tuple(self.labels))

    def __len__(self):
        return len(self.labels)

    def is_reflexive(self) -> bool:
        return bool(np.diag(self.rel).all())

    def is_antisymmetric(self) -> bool:
        off = ~np.eye(len(self), dtype=bool)
        return not (self.rel & self.rel.T & off).any()

    def is_transitive(self) -> bool:
        r = self.rel.astype(np.int64)
        return bool(((r @ r > 0) <= self.rel).all())

    def is_partial_order(self) -> bool:
        return self.is_reflexive() and self.is_antisymmetric() and self.is_transitive()

    def minimum(self) -> Optional[int]:
        hits = np.nonzero(self.rel.all(axis=1))[0]
        return int(hits[0]) if len(hits) == 1 else None

    def maximum(self) -> Optional[int]:
        hits = np.nonzero(self.rel.all(axis=0))[0]
        return int(hits[0]) if len(hits) == 1 else None


def _relation_matrix(n: int, test: Callable[[int, int], bool]) -> np.ndarray:
    pairs = [(i, j) for i in range(n) for j in range(n)]
    workers = max_workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(lambda ij: test(*ij), pairs))
    else:
        values = [test(i, j) for i, j in pairs]
    return np.array(values, dtype=bool).reshape(n, n)


def build_order(catalog: Catalog, method: str = "convolution", tol: float = EQUALITY_TOL) -> OrderRelation:
    """Order relation on a catalog by ``method`` in {"convolution", "fourier", "theory"}."""
    fs, ds = catalog.functionals, catalog.descriptors
    n = len(catalog)
    if method == "convolution":
        rel = _relation_matrix(n, lambda i, j: precedes(fs[i], fs[j], tol))
    elif method == "fourier":
        hats = [fourier_all(f) for f in fs]
        stacks = [np.stack([h.matrix for h in hat.values()]) for hat in hats]

        def test(i, j):
            return bool(np.abs(stacks[i] @ stacks[j] - stacks[j]).max() < tol)

        rel = _relation_matrix(n, test)
    elif method == "theory":
        rel = _relation_matrix(n, lambda i, j: theoretic_precedes(ds[i], ds[j]))
    else:
        raise ValueError(f"unknown method {method!r}")
    order = OrderRelation(tuple(catalog.labels), rel, catalog)
    if not order.is_partial_order():
        raise RuntimeError(f"{method} relation is not a partial order")
    lo, hi = order.minimum(), order.maximum()
    if lo is None or hi is None or catalog.labels[lo] != "eps" or catalog.labels[hi] != "h":
        raise RuntimeError(f"{method} relation lacks eps as minimum or h as maximum")
    return order


@dataclass(frozen=True)
class HasseDiagram:
    labels: Tuple[str, ...]
    edges: Tuple[Tuple[int, int], ...]

    def edge_labels(self) -> List[Tuple[str, str]]:
        return [(self.labels[i], self.labels[j]) for i, j in self.edges]


def hasse(order: OrderRelation) -> HasseDiagram:
    """Cover relation: i < j with nothing strictly in between."""
    n = len(order)
    off = ~np.eye(n, dtype=bool)
    strict = order.rel & off
    if (strict & strict.T).any():
        raise ValueError("relation has a cycle")
    s = strict.astype(np.int64)
    covers = strict & ~((s @ s) > 0)
    edges = tuple((int(i), int(j)) for i, j in zip(*np.nonzero(covers)))
    return HasseDiagram(order.labels, edges)


def _quote(text: str) -> str:
    return json.dumps(text)


def export_dot(hd: HasseDiagram, name: str = "idempotents") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, lab in enumerate(hd.labels):
        lines.append(f"  n{i} [label={_quote(lab)}];")
    for i, j in hd.edges:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(hd: HasseDiagram, k: Optional[int] = None) -> str:
    adjacency = {lab: [] for lab in hd.labels}
    for a, b in hd.edge_labels():
        adjacency[a].append(b)
    doc = {"k": k, "nodes": list(hd.labels), "edges": [list(e) for e in hd.edges], "adjacency": adjacency}
    return json.dumps(doc, indent=2)
