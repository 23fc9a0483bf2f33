"""Effective Mindlin second-gradient elasticity of dilute two-phase composites.

The package turns first-order homogenization data of a matrix-inclusion cell
(matrix stiffness, effective local stiffness, volume fraction, cell inertia
radius) into the sixth-order gradient stiffness of the energetically
equivalent second-gradient solid, validates the geometric and
positive-definiteness preconditions, and numerically certifies that the
quadratic-boundary-displacement strain energies of the heterogeneous cell
and the equivalent solid match to first order in the volume fraction.
"""

__version__ = "0.1.0"

from .energy import (
    EnergyReport,
    QuadraticBC,
    annihilation_form,
    curvature_invariants,
    dilution_sweep,
    energy_mismatch,
    fields_from_quadratic,
    linear_part_energy_gap,
    rve_energy_beta,
    rve_energy_bounds,
    sge_energy_beta,
    strain_energy_density,
)
from .geometry import (
    Ball,
    Composite,
    Ellipsoid,
    GeometryError,
    GPReport,
    MassProperties,
    Polygon,
    Polyhedron,
    check_gp,
    contains,
    mass_properties,
    sample_points,
    scale_shape,
    translate_shape,
)
from .homogenize import (
    HomogenizationProblem,
    HomogenizationResult,
    effective_gradient_stiffness,
    equilibrium_constraint_matrix,
    equilibrium_kernel_basis,
    gradient_stiffness_from_contrast,
    isotropic_gradient_coefficients,
    project_isotropic_coefficients,
    sample_admissible_beta,
    stiffness_contrast,
)
from .tensors import (
    NotPositiveDefiniteError,
    SymmetryError,
    Tensor2Sym,
    Tensor3PairSym,
    Tensor4Elastic,
    Tensor6SGE,
    double_stress_from_curvature,
    invert_gradient_stiffness,
    invert_stiffness,
    isotropic_gradient_stiffness,
    isotropic_stiffness,
    isotropic_stiffness_is_pd,
    min_eigenvalue,
    mindlin_eshel_conditions,
    stress_from_strain,
)

__all__ = [
    "__version__",
    # tensors
    "SymmetryError",
    "NotPositiveDefiniteError",
    "Tensor2Sym",
    "Tensor3PairSym",
    "Tensor4Elastic",
    "Tensor6SGE",
    "isotropic_stiffness",
    "isotropic_gradient_stiffness",
    "isotropic_stiffness_is_pd",
    "mindlin_eshel_conditions",
    "stress_from_strain",
    "double_stress_from_curvature",
    "invert_stiffness",
    "invert_gradient_stiffness",
    "min_eigenvalue",
    # geometry
    "GeometryError",
    "Ball",
    "Ellipsoid",
    "Polygon",
    "Polyhedron",
    "Composite",
    "MassProperties",
    "GPReport",
    "mass_properties",
    "check_gp",
    "contains",
    "sample_points",
    "scale_shape",
    "translate_shape",
    # homogenize
    "HomogenizationProblem",
    "HomogenizationResult",
    "stiffness_contrast",
    "gradient_stiffness_from_contrast",
    "effective_gradient_stiffness",
    "isotropic_gradient_coefficients",
    "project_isotropic_coefficients",
    "equilibrium_constraint_matrix",
    "equilibrium_kernel_basis",
    "sample_admissible_beta",
    # energy
    "QuadraticBC",
    "EnergyReport",
    "fields_from_quadratic",
    "strain_energy_density",
    "curvature_invariants",
    "rve_energy_beta",
    "sge_energy_beta",
    "annihilation_form",
    "energy_mismatch",
    "linear_part_energy_gap",
    "rve_energy_bounds",
    "dilution_sweep",
]
