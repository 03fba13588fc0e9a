"""Numerical function theory on circular domains.

Cauchy decompositions, Blaschke factorizations, corona bounds with Bezout
certificates and approximation of pairs by unimodular pairs, for rational
functions on a disk with finitely many disjoint closed disks removed.
"""

from .blaschke import (
    GeneralizedBlaschke,
    blaschke_condition,
    blaschke_eval,
    circle,
    component_blaschke,
    locate_zeros,
    split_zeros,
    winding_number,
)
from .cauchy import cauchy_decompose, decompose_bounded_above, reassemble, symmetrize_parts
from .corona import (
    PerturbationResult,
    UnimodularCertificate,
    approximate_by_unimodular,
    bezout_residual,
    bezout_solve,
    cross_perturb,
    fiber_intersection,
    lower_bound,
    lower_bound_detail,
    perturb_pair_simply_connected,
    symmetrize_bezout,
)
from .errors import CircdomError, NumericalError, ValidationError
from .factorization import (
    Factorization,
    log_nonvanishing,
    multiplicative_factorize,
    symmetric_snap,
    symmetrize_factorization,
    symmetry_defect,
)
from .funcrep import (
    CauchyParts,
    ComplexRational,
    ComponentSeries,
    evaluate,
    sample_boundary,
    sup_norm,
)
from .geometry import (
    CircularDomain,
    Contour,
    Disk,
    SimpleRegion,
    annulus,
    conjugate_partners,
    is_real_symmetric,
    locate,
    validate_domain,
)

__version__ = "0.1.0"
