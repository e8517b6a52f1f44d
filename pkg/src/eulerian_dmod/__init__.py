"""Divided-power differential operators, Eulerian graded D-modules and
degreewise Cech computation of iterated local cohomology of monomial ideals,
in characteristic 0 and p, with exact arithmetic throughout."""

from ._kernels import get_backend, set_backend, set_threads
from .cech import (
    CechSpec,
    LCModule,
    MonomialIdeal,
    cech_complex,
    decompose_as_E,
    hilbert_box,
    iterated_local_cohomology,
    local_cohomology,
    socle,
    strand_cohomology,
)
from .frob import (
    FModuleStruct,
    check_fmodule_eulerian,
    consistency_battery,
    frobenius_decompose,
    induced_action,
)
from .inj import MonomialPrime, a_invariant, ann_min_degree, eulerian_shift, x_action_bijectivity
from .parse import ParseError, parse_expression
from .region import AxisRule, ModElem, RegionModule, act, is_eulerian_witness, make_module
from .scalars import QQ, CharSpec, FieldScalar, InputError, binom_field
from .weyl import DOp, dop_apply, dop_degree, dop_mul, euler_op, is_member, reduce_by

__all__ = [
    "get_backend", "set_backend", "set_threads",
    "CechSpec", "LCModule", "MonomialIdeal", "cech_complex", "decompose_as_E", "hilbert_box",
    "iterated_local_cohomology", "local_cohomology", "socle", "strand_cohomology",
    "FModuleStruct", "check_fmodule_eulerian", "consistency_battery", "frobenius_decompose", "induced_action",
    "MonomialPrime", "a_invariant", "ann_min_degree", "eulerian_shift", "x_action_bijectivity",
    "ParseError", "parse_expression",
    "AxisRule", "ModElem", "RegionModule", "act", "is_eulerian_witness", "make_module",
    "QQ", "CharSpec", "FieldScalar", "InputError", "binom_field",
    "DOp", "dop_apply", "dop_degree", "dop_mul", "euler_op", "is_member", "reduce_by",
]
