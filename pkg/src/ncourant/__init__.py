"""Exact symbolic calculus of double brackets and Courant structures on quivers."""

from .algebra import (
    AlgElem,
    Alphabet,
    Element,
    FormElem,
    PolyVec,
    Tensor,
    alphabet,
    bimodule_act,
    circ,
    cycle_perm,
    cyclic_project,
    mul,
    permute,
    tensor,
    tensor_insert,
)
from .bisymplectic import canonical_omega, hamiltonian, pairing
from .courant import build_standard, check_courant, twist
from .doubleder import DoubleDer, contract, lie, reduced_contract, reduced_lie
from .errors import NCError
from .forms import DRClass, dr_d, dr_normalize, form_mul, lambda_inject, univ_d
from .frontend import parse_expr, parse_quiver, render
from .polyvec import check_double_poisson, mu, sn_bracket
from .quiver import (
    Arrow,
    GradedQuiver,
    double,
    hat_extend,
    jordan,
    kronecker,
    standard_double,
    two_loops,
    weight_subquivers,
)
from .report import CheckReport

__version__ = "0.1.0"

__all__ = [
    "AlgElem", "Alphabet", "Arrow", "CheckReport", "DRClass", "DoubleDer", "Element",
    "FormElem", "GradedQuiver", "NCError", "PolyVec", "Tensor", "alphabet", "bimodule_act",
    "build_standard", "canonical_omega", "check_courant", "check_double_poisson", "circ",
    "contract", "cycle_perm", "cyclic_project", "double", "dr_d", "dr_normalize", "form_mul",
    "hamiltonian", "hat_extend", "jordan", "kronecker", "lambda_inject", "lie", "mu", "mul",
    "pairing", "parse_expr", "parse_quiver", "permute", "reduced_contract", "reduced_lie",
    "render", "sn_bracket", "standard_double", "tensor", "tensor_insert", "twist",
    "two_loops", "univ_d", "weight_subquivers",
]
