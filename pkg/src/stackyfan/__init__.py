"""Exact combinatorics of toric orbifolds.

Weighted fans and weighted (Lerman-Tolman) polytopes, orbifold
fundamental groups and universal covers, orbi-line bundles with exact
section counts, prequantization of rational polytopes, and
Bohr-Sommerfeld decompositions under sub-torus reduction. All
arithmetic is exact (integers and fractions); nothing here ever
touches a float.
"""

from .errors import (CapExceeded, EmptySlice, Incompatible, NotIntegral,
                     NotOrbifold, NotSimplicial, StackyFanError, Unbounded)
from .fan import (Ray, ValidationReport, WeightedFan, common_face, dual_fan,
                  validate)
from .kernels import DEFAULT_CAP, HAVE_COMPILED
from .lattice import (FiniteAbelianGroup, Lattice, affine_meets_lattice,
                      dual_lattice, hermite_normal_form, intersect,
                      lattice_from_generators, quotient, reduce_mod_lattice,
                      saturation, smith_normal_form)
from .orbifold import (CoverData, UniversalCover, chart_basis_check,
                       cone_cover_lattice, cover_data,
                       orbifold_fundamental_group, ray_stabilizer_order,
                       universal_cover, weighted_ray_lattice)
from .picard import (Bundle, BundleClass, RationalClass, VertexCharacters,
                     bundle_class, bundles_equivalent, bundles_with_class,
                     chern_class, h0, is_orbi_integral, newton_polytope,
                     pullback_from_coarse, rational_class, to_ray_data,
                     to_vertex_characters, torsion_subgroup, twist)
from .polytope import (Facet, HPolytope, SliceResult, facet_defining,
                       irredundant, is_empty, lattice_points, polytope_slice,
                       project, vertices)
from .prequant import PrequantResult, prequantize, vertex_characters_of_polytope
from .reduction import (Leaf, ReducedOrbifold, ReductionReport, Subtorus,
                        bs_values, critical_values, is_regular_value, leaf_h0,
                        moment_image, qr_rq_report, reduce_at)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
