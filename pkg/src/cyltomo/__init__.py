"""Tomographic transforms for densities on the plane, cylinder, and torus."""

from .config import AccuracyWarning, QuadratureConfig, DEFAULT_CONFIG
from .grid import GridAxis, TWO_PI, wrap_angle
from .densities import (
    PlaneDensity,
    CylinderDensity,
    TorusDensity,
    default_cylinder_axes,
    default_plane_axes,
    make_plane_gaussian,
    make_uniform_phi_gaussian,
    make_wrapped_gaussian,
    make_wrapped_mixture,
)
from .circle import (
    StripTomogramParams,
    HelixTomogramParams,
    HelixParams,
    strip_tomogram,
    helix_tomogram,
    gauge_translate,
    strip_to_helix_resum,
    DensityStripSampler,
    DensityHelixSampler,
    circle_inverse_strip,
    circle_inverse_helix,
    helix_params_from_tomogram,
    helix_params_to_tomogram,
)
from .plane import (
    PlaneTomogramParams,
    FrameParams,
    frame_to_mu_nu,
    plane_tomogram,
    radon_line_integral,
    RadonTable,
    radon_table,
    radon_classical_inverse,
    plane_inverse,
    PlaneSliceSampler,
)
from .torus import (
    TorusTomogramParams,
    torus_tomogram,
    torus_inverse,
)
from .limits import (
    RadiusScaledDensity,
    rescale_density,
    wrap_onto_radius,
    radius_tomogram,
    fourier_coefficient,
    radius_inverse,
    ConvergenceRow,
    ConvergenceReport,
    convergence_report,
)
from .slices import (
    TomogramSlice,
    plane_slice,
    strip_slice,
    helix_slice,
    torus_component_slices,
    write_slice,
    read_slice,
    write_density,
    read_density,
)
from .estimators import (
    PlaneTomography,
    CylinderTomography,
    TorusTomography,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyWarning",
    "QuadratureConfig",
    "DEFAULT_CONFIG",
    "GridAxis",
    "TWO_PI",
    "wrap_angle",
    "PlaneDensity",
    "CylinderDensity",
    "TorusDensity",
    "default_cylinder_axes",
    "default_plane_axes",
    "make_plane_gaussian",
    "make_uniform_phi_gaussian",
    "make_wrapped_gaussian",
    "make_wrapped_mixture",
    "StripTomogramParams",
    "HelixTomogramParams",
    "HelixParams",
    "strip_tomogram",
    "helix_tomogram",
    "gauge_translate",
    "strip_to_helix_resum",
    "DensityStripSampler",
    "DensityHelixSampler",
    "circle_inverse_strip",
    "circle_inverse_helix",
    "helix_params_from_tomogram",
    "helix_params_to_tomogram",
    "PlaneTomogramParams",
    "FrameParams",
    "frame_to_mu_nu",
    "plane_tomogram",
    "radon_line_integral",
    "RadonTable",
    "radon_table",
    "radon_classical_inverse",
    "plane_inverse",
    "PlaneSliceSampler",
    "TorusTomogramParams",
    "torus_tomogram",
    "torus_inverse",
    "RadiusScaledDensity",
    "rescale_density",
    "wrap_onto_radius",
    "radius_tomogram",
    "fourier_coefficient",
    "radius_inverse",
    "ConvergenceRow",
    "ConvergenceReport",
    "convergence_report",
    "TomogramSlice",
    "plane_slice",
    "strip_slice",
    "helix_slice",
    "torus_component_slices",
    "write_slice",
    "read_slice",
    "write_density",
    "read_density",
    "PlaneTomography",
    "CylinderTomography",
    "TorusTomography",
    "__version__",
]
