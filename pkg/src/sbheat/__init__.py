"""Segal-Bargmann transforms on compact symmetric spaces, computed in coefficient space."""
from .coefficients import (
    CoefficientVector,
    Mode,
    embed_heat_factor,
    fock_inner,
    fock_norm,
    l2_inner,
    l2_norm,
    random_vector,
    to_full,
)
from .errors import CapabilityError, ConfigurationError, HeatOverflowError, QuadratureSpecError
from .heat import heat_apply, heat_invert, kernel_coefficients
from .lattice import SphericalWeight, casimir, dimension, enumerate_weights, weight
from .limits import (
    Chain,
    LimitElement,
    StageMap,
    check_diagram,
    delta_embed,
    embed_to_stage,
    eta_embed,
    gamma_embed,
    iota,
    limit_heat_apply,
    phi_embed,
    stage_map,
)
from .models import (
    Family,
    RestrictedRoot,
    SymmetricSpaceModel,
    build_model,
    check_propagation,
    group_su,
    inner,
    product,
    sphere,
)
from .quadrature import (
    QuadratureSpec,
    integrate_radial_compact,
    integrate_radial_dual,
    verify_fock_inner,
    verify_heat_identity,
    verify_plancherel,
    verify_schur,
)
from .report import VerificationReport
from .special import (
    RadialPoint,
    dual_heat_kernel,
    dual_spherical,
    kernel_eval,
    spherical_eval,
    spherical_eval_holo,
)

__version__ = "0.1.0"
