"""Exact-arithmetic multivariate Hahn, Krawtchouk, and Meixner systems.

Evaluation of the eigenpolynomial families, application of the
commuting difference operators on integer lattices, orthogonality
weights, and an exact identity-verification suite.  Every scalar is an
arbitrary-precision rational; see :mod:`mvortho._backend` for the
gmpy2 / fractions backend selection.
"""

from ._backend import BACKEND, R
from .core import (
    HahnParams,
    KrawtchoukParams,
    Lattice,
    LatticeFunction,
    MeixnerParams,
    enumerate_degrees,
    enumerate_lattice,
    family_lattice,
    multinomial,
    rising_factorial,
    tail_param,
    tail_sum,
)
from .measures import (
    WeightTable,
    hahn_weight,
    inner_product,
    krawtchouk_weight,
    meixner_tail_mass_bound,
    meixner_weight,
    weight_table,
)
from .operators import (
    OperatorMatrix,
    OperatorSpec,
    adjointness_defect,
    apply_operator,
    commutator_defect,
    degree_invariance_check,
    operator_matrix,
)
from .polynomials import (
    eigenpoly,
    eigenpoly_table,
    eigenvalue,
    hahn,
    hahn_pair,
    km_pair,
    krawtchouk,
    meixner,
    multi_hahn,
    multi_krawtchouk,
    multi_meixner,
    pair_backward_table,
    pair_product,
    rodrigues_pair,
)
from .verify import CheckReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "R",
    "CheckReport",
    "HahnParams",
    "KrawtchoukParams",
    "Lattice",
    "LatticeFunction",
    "MeixnerParams",
    "OperatorMatrix",
    "OperatorSpec",
    "WeightTable",
    "adjointness_defect",
    "apply_operator",
    "commutator_defect",
    "degree_invariance_check",
    "eigenpoly",
    "eigenpoly_table",
    "eigenvalue",
    "enumerate_degrees",
    "enumerate_lattice",
    "family_lattice",
    "hahn",
    "hahn_pair",
    "hahn_weight",
    "inner_product",
    "km_pair",
    "krawtchouk",
    "krawtchouk_weight",
    "meixner",
    "meixner_tail_mass_bound",
    "meixner_weight",
    "multi_hahn",
    "multi_krawtchouk",
    "multi_meixner",
    "multinomial",
    "operator_matrix",
    "pair_backward_table",
    "pair_product",
    "rising_factorial",
    "rodrigues_pair",
    "run_suite",
    "tail_param",
    "tail_sum",
    "weight_table",
]
