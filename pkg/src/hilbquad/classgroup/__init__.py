"""Class groups of quadratic fields from binary quadratic forms."""

from .imaginary import (
    DEFAULT_MAX_DISC,
    class_number_window,
    group_structure,
    m_rank,
    set_structure_cache,
)
from .qform import (
    QForm,
    class_number,
    compose,
    compose_checked,
    form_pow,
    fundamental_discriminant,
    identity_form,
    inverse_form,
    is_fundamental,
    prime_form,
    prime_forms,
    reduce_form,
    reduced_forms,
)
from .real import cycle, narrow_group_structure, narrow_structure_by_closure, reduce_indefinite
from .structure import AbelianGroupStructure


def genus_two_rank(d: int) -> int:
    """2-rank of the (narrow) class group predicted by genus theory."""
    from ..arith import omega

    return omega(abs(d)) - 1


__all__ = [
    "AbelianGroupStructure",
    "DEFAULT_MAX_DISC",
    "QForm",
    "class_number",
    "class_number_window",
    "compose",
    "compose_checked",
    "cycle",
    "form_pow",
    "fundamental_discriminant",
    "genus_two_rank",
    "group_structure",
    "identity_form",
    "inverse_form",
    "is_fundamental",
    "m_rank",
    "narrow_group_structure",
    "narrow_structure_by_closure",
    "prime_form",
    "prime_forms",
    "reduce_form",
    "reduce_indefinite",
    "reduced_forms",
    "set_structure_cache",
]
