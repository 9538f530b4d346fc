"""Fisher information and D-optimal sensor geometry."""
from design.fisher import (
    InfoMatrix2,
    angle_condition_residual,
    angular_determinant,
    fim_single,
    fim_total,
    radius_objective,
    range_fim,
    rotation,
)
from design.geometry import (
    GeometrySpec,
    default_angles,
    design_geometry,
    doptimal_placement,
    golden_section_max,
    optimal_radius,
)

__all__ = [
    "GeometrySpec",
    "InfoMatrix2",
    "angle_condition_residual",
    "angular_determinant",
    "default_angles",
    "design_geometry",
    "doptimal_placement",
    "fim_single",
    "fim_total",
    "golden_section_max",
    "optimal_radius",
    "radius_objective",
    "range_fim",
    "rotation",
]
