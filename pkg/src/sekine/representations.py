"""The elements rho_{p,q}, sigma_{p,q} and the two-dimensional representations pi_{p,q}."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple

import numpy as np

from .algebra import AlgebraElement, adjoint, eta_pow, unit, zero, _check_k

__all__ = [
    "RepLabel",
    "RepMatrix",
    "IrrepCount",
    "rho",
    "sigma",
    "pi",
    "decompose_characters",
    "irrep_inventory",
    "labels",
]


class RepLabel(NamedTuple):
    p: int
    q: int


def labels(k: int) -> List[RepLabel]:
    return [RepLabel(p, q) for p in range(k) for q in range(k)]


def rho(k: int, p: int, q: int) -> AlgebraElement:
    """rho_{p,q} = sum_{m,n} eta^{mp+nq} d_{m,n}."""
    k = _check_k(k)
    m, n = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    return AlgebraElement(k, eta_pow(k, m * p + n * q), np.zeros((k, k)))


def sigma(k: int, p: int, q: int) -> AlgebraElement:
    """sigma_{p,q} = sum_i eta^{iq} e_{i,i+p}."""
    k = _check_k(k)
    i = np.arange(k)
    mc = np.zeros((k, k), dtype=complex)
    mc[i, (i + p) % k] = eta_pow(k, i * q)
    return AlgebraElement(k, np.zeros((k, k)), mc)


@dataclass(frozen=True, eq=False)
class RepMatrix:
    """A 2x2 matrix over A_k; ``entries[a][b]`` is an AlgebraElement."""

    k: int
    label: RepLabel | None
    entries: tuple

    def __getitem__(self, idx):
        a, b = idx
        return self.entries[a][b]

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        rows = tuple(
            tuple(self[a, 0] * other[0, b] + self[a, 1] * other[1, b] for b in range(2))
            for a in range(2)
        )
        return RepMatrix(self.k, None, rows)

    def adjoint(self) -> "RepMatrix":
        rows = tuple(tuple(adjoint(self[b, a]) for b in range(2)) for a in range(2))
        return RepMatrix(self.k, None, rows)

    def conjugate_by(self, t: np.ndarray) -> "RepMatrix":
        """T . pi . T^{-1} for a scalar 2x2 matrix T."""
        tinv = np.linalg.inv(t)
        rows = []
        for a in range(2):
            row = []
            for b in range(2):
                acc = zero(self.k)
                for c in range(2):
                    for f in range(2):
                        acc = acc + (t[a, c] * tinv[f, b]) * self[c, f]
                row.append(acc)
            rows.append(tuple(row))
        return RepMatrix(self.k, None, tuple(rows))

    def distance(self, other: "RepMatrix") -> float:
        return max(self[a, b].distance(other[a, b]) for a in range(2) for b in range(2))

    def distance_to_identity(self) -> float:
        one, nil = unit(self.k), zero(self.k)
        ident = RepMatrix(self.k, None, ((one, nil), (nil, one)))
        return self.distance(ident)


def pi(k: int, p: int, q: int) -> RepMatrix:
    """pi_{p,q} = [[rho_{p,q}, sigma_{p,-q}], [sigma_{p,q}, rho_{p,-q}]]."""
    k = _check_k(k)
    p, q = p % k, q % k
    return RepMatrix(
        k,
        RepLabel(p, q),
        (
            (rho(k, p, q), sigma(k, p, -q)),
            (sigma(k, p, q), rho(k, p, -q)),
        ),
    )


def decompose_characters(k: int, p: int) -> List[AlgebraElement]:
    """One-dimensional pieces rho +- sigma of pi_{p,0} (and pi_{p,k/2} for even k)."""
    k = _check_k(k)
    qs = [0] + ([k // 2] if k % 2 == 0 else [])
    out = []
    for q in qs:
        r, s = rho(k, p, q), sigma(k, p, q)
        out += [r + s, r - s]
    return out


class IrrepCount(NamedTuple):
    one_dim_count: int
    two_dim_count: int


def irrep_inventory(k: int) -> IrrepCount:
    k = _check_k(k)
    if k % 2:
        count = IrrepCount(2 * k, k * (k - 1) // 2)
    else:
        count = IrrepCount(4 * k, k * (k - 2) // 2)
    # sum of squared dimensions must equal dim A_k = 2k^2
    assert count.one_dim_count + 4 * count.two_dim_count == 2 * k * k
    return count
