"""Executable combinatorial topology and algebra.

Surface words with their elementary rewrites and classification,
combinatorial maps on quadricell flags with dual and census, map
geometries with exact rational angles, marked-plane line incidence, and
finite multi-space algebra with metric fixed points.
"""

from .errors import (CombTopError, ContractionError, GeometryError,
                     GraphError, GuardExceeded, InternalInconsistencyError,
                     LagrangeError, MapError, MoveError, MultiGroupError,
                     SPlaneError, WordError)
from .geometry import (Angle, AngleSum, BoundedMapGeometry, MapGeometry,
                       SLine, SPlaneConfig, VertexClassification, VertexKind,
                       classify_vertex, new_geometry, point, s_line_through,
                       s_parallels_through, total_angle_defect, with_boundary)
from .maps import (CombMap, Face, MapCensus, MultiEmbeddingReport,
                   SimpleGraph, Vertex, census, check_multi_embedding, dual,
                   edges, faces, format_map_file, is_planar,
                   min_orientable_genus, new_map, orientable, parse_graph_file,
                   parse_map_file, rotation_genus, valency, vertices,
                   word_to_map)
from .mingenus import KERNEL
from .multispace import (GroupTable, LagrangeResult, MetricInterval,
                         MultiGroup, MultiGroupReport, MultiMetricSpace,
                         PiecewiseAffineMap, SubMultiGroup,
                         build_cyclic_multigroup, fixed_points,
                         generate_sub_multigroup, is_multigroup, is_normal,
                         lagrange_decomposition,
                         maximal_normal_series_lengths,
                         parse_fixpoint_file, parse_multigroup_file,
                         sub_multigroup)
from .words import (MoveApplication, NormalizeResult, SignedLetter,
                    StandardForm, SurfaceWord, apply_move, classify,
                    connected_sum, corner_trace_euler, enumerate_moves,
                    inverse_application, is_orientable_word,
                    normalize_with_trace, parse_word, replay, standard_word,
                    word_from_pairs)

__version__ = "0.1.0"
