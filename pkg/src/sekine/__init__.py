"""Idempotent states, their order and random walks on the Sekine quantum groups A_k."""

from .algebra import (
    DEFAULT_TOL,
    AlgebraElement,
    TensorElement,
    adjoint,
    comultiply,
    counit,
    d,
    e,
    haar_state,
    multiply,
    unit,
)
from .functionals import (
    Functional,
    convolve,
    convolve_oracle,
    convolve_power,
    fourier,
    fourier_all,
    idempotency_report,
    is_state,
)
from .idempotents import (
    Catalog,
    Haar,
    HaarSub,
    Subgroup,
    TypeII,
    TypeIII,
    classify,
    enumerate_catalog,
    enumerate_subgroups,
)
from .lattice import build_order, export_dot, hasse
from .representations import pi, rho, sigma
from .walks import cesaro, cesaro_limit, random_state, walk

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "AlgebraElement",
    "TensorElement",
    "Functional",
    "Catalog",
    "Subgroup",
    "Haar",
    "HaarSub",
    "TypeII",
    "TypeIII",
    "adjoint",
    "build_order",
    "cesaro",
    "cesaro_limit",
    "classify",
    "comultiply",
    "convolve",
    "convolve_oracle",
    "convolve_power",
    "counit",
    "d",
    "e",
    "enumerate_catalog",
    "enumerate_subgroups",
    "export_dot",
    "fourier",
    "fourier_all",
    "haar_state",
    "hasse",
    "idempotency_report",
    "is_state",
    "multiply",
    "pi",
    "random_state",
    "rho",
    "sigma",
    "unit",
    "walk",
]
