"""Tube formulas and complex dimensions for self-similar tilings."""

from . import catalog
from .errors import (BudgetExceeded, DegenerateShape, DivergentSeries, FractubeError,
                     IncompleteRootSet, InvalidWord, NearPole, NotMonophase,
                     NotSimplePole, NumericalFailure, PoleClusterError)
from .geometry2d import (ConvexPolygon, RoundedCornerSquare, exact_tube_area,
                         inner_parallel_body, montecarlo_tube_area, polygon_area,
                         polygon_inradius)
from .ifs import GeneratorSpec, SelfSimilarSystem, tile_inradius, total_tiling_volume, word_ratio, words_by_depth
from .steiner import SteinerRep, gamma_tube, monophase_from_polygon
from .tube import (TilingModel, TubeExpansion, finite_spray, measurability_report,
                   residue_tubular, string_adapter, tube_expansion, tube_volume_formula,
                   tube_volume_oracle, tubular_zeta_eval)
from .zeta import (ComplexDimension, ScalingZeta, Window, complex_dimensions,
                   detect_lattice, residue_zeta_s, similarity_dimension)

__version__ = "0.1.0"
