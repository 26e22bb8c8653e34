"""Exact Clifford systems and the FKM isoparametric hypersurfaces they define."""
from .exact import ExactMatrix, Subspace, intersect, involution_eigenspace, nullspace, rank
from .focal import (DegenerateSystemError, FocalPoint, GeometryError, NearFocalError, ShapeReport, Spectrum,
                    SpherePoint, condition_a_dim, focal_shape_minus, focal_shape_plus, level_point,
                    minimal_level, mminus_point, mplus_point, normal_circle_profile, nplus_membership,
                    reconstruct_eplus, shape_spectrum, sigma_minus, sigma_plus, special_eigenvector)
from .polynomial import FkmPolynomial, verify_cartan_muenzner
from .rep import CliffordRep, delta, irreducible_generators, verify_rep
from .system import (CliffordSystem, SphereElement, build_system, direct_sum, enumerate_classes,
                     make_system, product_trace, sphere_element, verify_system)

__version__ = "0.1.0"
