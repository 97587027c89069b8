"""JSON forms of functionals, catalogs and reports.

Complex numbers are ``[re, im]`` pairs and matrices are row-major lists.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .functionals import Functional, idempotency_report

__all__ = [
    "StateFileError",
    "complex_matrix_to_list",
    "complex_matrix_from_list",
    "functional_to_dict",
    "functional_from_dict",
    "load_state",
    "dump_state",
    "catalog_to_dict",
]


class StateFileError(ValueError):
    """A state file that does not parse or has inconsistent dimensions."""


def complex_matrix_to_list(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def complex_matrix_from_list(rows: Any, k: int, name: str) -> np.ndarray:
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"{name}: not a numeric array ({exc})") from None
    if arr.shape != (k, k, 2):
        raise StateFileError(f"{name}: expected shape ({k}, {k}, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def functional_to_dict(f: Functional) -> dict:
    return {
        "k": f.k,
        "alpha": complex_matrix_to_list(f.alpha),
        "kappa": complex_matrix_to_list(f.kappa),
    }


def functional_from_dict(doc: Any) -> Functional:
    if not isinstance(doc, dict):
        raise StateFileError("state file must be a JSON object")
    missing = {"k", "alpha", "kappa"} - set(doc)
    if missing:
        raise StateFileError(f"missing keys: {sorted(missing)}")
    k = doc["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise StateFileError(f"k must be an integer >= 2, got {k!r}")
    alpha = complex_matrix_from_list(doc["alpha"], k, "alpha")
    kappa = complex_matrix_from_list(doc["kappa"], k, "kappa")
    return Functional(k, alpha, kappa)


def load_state(path) -> Functional:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from None
    return functional_from_dict(doc)


def dump_state(f: Functional, path) -> None:
    with open(path, "w") as fh:
        json.dump(functional_to_dict(f), fh)


def catalog_to_dict(catalog, tol: float = 1e-9) -> dict:
    members = []
    for entry in catalog:
        members.append(
            {
                "label": entry.label,
                "descriptor": entry.descriptor.to_dict(),
                "functional": functional_to_dict(entry.functional),
                "residuals": idempotency_report(entry.functional, tol).as_dict(),
            }
        )
    return {"k": catalog.k, "count": len(members), "members": members}
