from .laurent import LaurentPoly, determinant_bareiss, determinant_expansion, format_poly
from .presentation import (
    LaurentPresentation,
    alex_presentation,
    alex_prime_presentation,
    alexander_polynomial,
    braid_shape,
    cm_presentation,
    hom_count,
    mirror_relation_check,
    normalise_alexander,
)
