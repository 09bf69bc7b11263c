from .elastica import Shape, material_point, shape_from_curvature, straight_shape
from .lag import MechParams, effective_curvature, mech_lag
from .laminate import (CrossSection, CurvatureModel, Ply, bimorph_curvature, cell_curvature, curvature_field,
                       solve_section)
from .measure import (REFERENCE_OFFSET, circumcircle_curvature, reference_displacement, three_point_curvature,
                      tip_deflection, tip_displacement)
