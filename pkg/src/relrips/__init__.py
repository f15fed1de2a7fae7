"""Relative Rips complexes and Brown's criterion on finite balls.

Build coned-off Cayley graphs of a group relative to a peripheral subgroup,
estimate hyperbolicity and coset penetration constants, build the relative
Rips filtration and test it for essential triviality with exact integer
homology.
"""

__version__ = "0.1.0"

from .errors import RelRipsError, ResourceLimitError, TruncationWarning
from .presentation import (GroupPresentation, PeripheralSpec, bounded_confluence_check,
                           load_presentation, normal_form, parse_presentation,
                           peripheral_distance)
from .cayley import build_ball, coset_table, peripheral_ball
from .coned import build_coned_ball, enumerate_relative_geodesics, relative_distance
from .hyperbolicity import delta_four_point, derive_params, estimate_rbcp
from .complex import SimplicialComplex
from .rips import (RipsParams, build_plain_rips, build_relative_rips, coset_subcomplex,
                   inclusion)
from .homology import (boundary_matrices, induced_map_zero_test, reduced_homology,
                       smith_normal_form)
from .brown import (FiltrationIndex, check_essential_triviality, coset_localize,
                    run_theorem_pipeline)

__all__ = [
    "RelRipsError", "ResourceLimitError", "TruncationWarning",
    "GroupPresentation", "PeripheralSpec", "bounded_confluence_check", "load_presentation",
    "normal_form", "parse_presentation", "peripheral_distance",
    "build_ball", "coset_table", "peripheral_ball",
    "build_coned_ball", "enumerate_relative_geodesics", "relative_distance",
    "delta_four_point", "derive_params", "estimate_rbcp",
    "SimplicialComplex",
    "RipsParams", "build_plain_rips", "build_relative_rips", "coset_subcomplex", "inclusion",
    "boundary_matrices", "induced_map_zero_test", "reduced_homology", "smith_normal_form",
    "FiltrationIndex", "check_essential_triviality", "coset_localize", "run_theorem_pipeline",
]
