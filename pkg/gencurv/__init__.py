"""gencurv: Generalized Ricci curvature of left-invariant Courant algebroids.

This package computes the generalized (Courant algebroid) Ricci tensor of
left-invariant data on a Lie group: structure constants, a metric, a closed
three-form and a divergence. It checks the generalized Einstein condition and
verifies the three-dimensional classification of Einstein solutions.

Modules:
    config: Tolerances, grids and exit codes
    exceptions: Error hierarchy
    linalg: Small dense tensor helpers
    lie: Lie algebras, metrics, three-forms and adapted bases
    courant: Dorfman bracket and its coefficients
    connections: Canonical connection, divergence, Christoffel symbols
    curvature: Generalized and classical Ricci curvature
    dim3: Three-dimensional normal forms and Bianchi classes
    families: Registry of Einstein solution families
    tables: Verification of the solution tables
    samples: Seeded random instances
    data: Bundled instance files
    utils: Helper functions

Examples:
    >>> from gencurv import solution_family, generalized_ricci
    >>>
    >>> inst = solution_family("so(3)", a=1.0)
    >>> inst.is_einstein()
    True
    >>> generalized_ricci(inst.dorfman(), inst.delta).residual < 1e-9
    True
"""

__version__ = "0.1.0"
__author__ = "gencurv developers"
__license__ = "MIT"

# Import submodules
from gencurv import config
from gencurv import exceptions
from gencurv import linalg
from gencurv import lie
from gencurv import courant
from gencurv import connections
from gencurv import curvature
from gencurv import dim3
from gencurv import families
from gencurv import tables
from gencurv import samples
from gencurv import data
from gencurv import utils

# Import commonly used items for convenience
from gencurv.config import (
    get_tolerance,
    set_tolerance,
    reset_tolerance,
    tolerance,
)

from gencurv.exceptions import (
    GencurvError,
    DimensionError,
    SingularityError,
    InvalidInputError,
    UnsupportedError,
)

from gencurv.lie import (
    LieAlgebraData,
    MetricData,
    ThreeFormData,
    AdaptedBasis,
    adapted_basis,
    validate_lie_algebra,
)

from gencurv.courant import (
    DorfmanTensor,
    dorfman_bracket,
    dorfman_tensor,
    check_courant_axioms,
)

from gencurv.connections import (
    DivergenceForm,
    canonical_connection,
    prescribed_divergence_connection,
    riemannian_divergence,
)

from gencurv.curvature import (
    GeneralizedRicci,
    generalized_ricci,
    ricci_via_curvature,
    is_generalized_einstein,
    classical_ricci,
)

from gencurv.dim3 import (
    identify_bianchi,
    normal_form_of_symmetric_l,
    unimodular_kernel,
)

from gencurv.families import (
    solution_family,
    perturbed_instance,
    list_families,
    get_family_info,
)

from gencurv.tables import verify_tables

from gencurv.data import (
    load_instance,
    list_available_instances,
)

# Package metadata and exports
__all__ = [
    # Version info
    "__version__",
    "__author__",
    "__license__",
    # Submodules
    "config",
    "exceptions",
    "linalg",
    "lie",
    "courant",
    "connections",
    "curvature",
    "dim3",
    "families",
    "tables",
    "samples",
    "data",
    "utils",
    # Configuration
    "get_tolerance",
    "set_tolerance",
    "reset_tolerance",
    "tolerance",
    # Errors
    "GencurvError",
    "DimensionError",
    "SingularityError",
    "InvalidInputError",
    "UnsupportedError",
    # Lie data
    "LieAlgebraData",
    "MetricData",
    "ThreeFormData",
    "AdaptedBasis",
    "adapted_basis",
    "validate_lie_algebra",
    # Courant algebroid
    "DorfmanTensor",
    "dorfman_bracket",
    "dorfman_tensor",
    "check_courant_axioms",
    # Connections
    "DivergenceForm",
    "canonical_connection",
    "prescribed_divergence_connection",
    "riemannian_divergence",
    # Curvature
    "GeneralizedRicci",
    "generalized_ricci",
    "ricci_via_curvature",
    "is_generalized_einstein",
    "classical_ricci",
    # Dimension three
    "identify_bianchi",
    "normal_form_of_symmetric_l",
    "unimodular_kernel",
    # Families
    "solution_family",
    "perturbed_instance",
    "list_families",
    "get_family_info",
    "verify_tables",
    # Data
    "load_instance",
    "list_available_instances",
]
