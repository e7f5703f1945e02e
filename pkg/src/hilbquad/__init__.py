"""Quadratic fields with large class group rank from specializations of
hyperelliptic curves, with the arithmetic toolkit needed to produce and
check them."""

from .arith import Factorization, KFreeDecomposition, factor, kfree_part
from .census import CensusSeries, field_census, growth_fit, s_k_count, s_k_series
from .classgroup import AbelianGroupStructure, group_structure, narrow_group_structure, reduced_forms
from .errors import CapacityError, DomainError, PreconditionError
from .forms import BinaryForm, MobiusMap, homogenize_split, odd_model
from .lattice import Lattice2, minimal_basis, positivize
from .localize import PlaceSet, build_gadget, pullback
from .polynomial import Polynomial
from .specialize import CurveSpec, SpecializationRecord, catalog_curve, choose_shift, enumerate_specializations

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupStructure",
    "BinaryForm",
    "CapacityError",
    "CensusSeries",
    "CurveSpec",
    "DomainError",
    "Factorization",
    "KFreeDecomposition",
    "Lattice2",
    "MobiusMap",
    "PlaceSet",
    "Polynomial",
    "PreconditionError",
    "SpecializationRecord",
    "build_gadget",
    "catalog_curve",
    "choose_shift",
    "enumerate_specializations",
    "factor",
    "field_census",
    "group_structure",
    "growth_fit",
    "homogenize_split",
    "kfree_part",
    "minimal_basis",
    "narrow_group_structure",
    "odd_model",
    "positivize",
    "pullback",
    "reduced_forms",
    "s_k_count",
    "s_k_series",
]
