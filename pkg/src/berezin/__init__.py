"""Berezin symbols, Berezin numbers and norms on finite Hardy/Bergman kernel models."""

from .calculus import (
    BerezinEstimates,
    DiskGrid,
    berezin_defect,
    berezin_estimates,
    berezin_norm,
    berezin_number,
    berezin_symbol,
    inf_defect,
    radial_defect_profile,
    symbol_field,
    symbol_injectivity_rank,
)
from .errors import (
    BerezinError,
    ConfigurationError,
    DomainError,
    NumericalConsistencyError,
    SingularityError,
    UsageError,
)
from .operators import (
    OperatorMatrix,
    diagonal,
    example36_operator,
    identity,
    inverse,
    inverse_norm,
    modulus,
    numerical_radius,
    operator_norm,
    random_invertible,
    random_normal,
    random_operator,
    shift,
    toeplitz_analytic,
)
from .rkhs import Kind, SpaceSpec, inner_product, kernel_vector, make_space, normalize

__version__ = "0.1.0"
