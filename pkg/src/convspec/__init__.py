"""Convolution operators on discrete groups: exact commutation certificates and spectral estimates."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BallCapError, ConvspecError, ElementParseError, GroupError, NonAbelianError,
    PreconditionError, ResourceCapError, SupportCapError,
)
from .groups import (  # noqa: E402
    ConjugationBy, Cyclic, DirectProduct, Element, FreeGroup, GeneratorImages, Group,
    IntLattice, Semidirect, Symmetric, Trivial, WreathLite, ball, conjugate, element_order,
    identity, inverse, multiply,
)
from .measures import (  # noqa: E402
    ComplexRational, Measure, adjoint, apply, convolution_power, convolve, is_central,
    is_selfadjoint, l1_norm, moment_at_identity, moments_at_identity, norm_bound_holds,
)
from .characters import (  # noqa: E402
    RealCharacter, character_space, derivation_identity_check, evaluate, is_adapted,
    is_semi_adapted, k_measure, kernel_chain_witness, l_measure, multiply_by_character,
    precis_applicable,
)
from .semidirect import (  # noqa: E402
    FiberData, ac_hypothesis_report, commutation_condition_holds, construct_symmetric_set,
    counting_condition_holds, validate_fiber_data,
)
from .spectral import (  # noqa: E402
    build_truncation, eigendecompose, kernel_weight, moment_crosscheck, point_mass_estimate,
    spectral_report,
)
from .fourier import (  # noqa: E402
    Symbol, derivative_identity_check, multiplier_report, point_spectrum_scan, symbol_eval,
    symbol_grid,
)
