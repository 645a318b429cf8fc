"""Exact-arithmetic toolkit for dilated point configurations over F_q^d.

The package computes, verifies and explores size thresholds above which a
finite point set must contain a pair of tuples whose prescribed mutual
distances differ by a fixed square factor.  Everything is exact: field
arithmetic in coefficient tuples, counts as integers, bounds as rationals.
"""

__version__ = "0.1.0"

from .errors import FalsificationError, GuardExceededError
from .field import (FieldElem, FieldSpec, enumerate_field, field_make,
                    is_square, sqrt, squares_nonzero, subfield_embed)
from .geometry import (Point, PointSet, dilate, distance_set, format_elem,
                       format_point, full_space, norm, parse_elem,
                       quotient_set, read_point_set, sphere, translate,
                       write_point_set)
from .orthogonal import (OrthMatrix, apply, brute_force_orthogonal,
                         enumerate_orthogonal, group_order, identity)
from .counting import (ChainReport, CountingTable, count_tuple_family,
                       dilated_count_lower_bound, offset_counts,
                       offset_power_sum, verify_chain)
from .search import (DilatedWitness, EdgeSet, count_dilated_tuples,
                     edges_all_pairs, edges_cycle, edges_path, edges_star,
                     find_congruent_tuple_translation,
                     find_dilated_pair_bruteforce, find_dilated_tuple_scaling,
                     find_witness_auto, parse_edge_spec, verify_witness)
from .sharpness import (SharpnessCertificate, build_subfield_grid,
                        build_unit_sphere, certify_no_dilated,
                        max_distinct_sphere_overlap, sphere_pair_intersection)
from .experiment import (ExperimentConfig, TrialRecord, records_to_csv,
                         records_to_json, run_quotient_check,
                         run_threshold_sweep, sample_subset, trial_rng)
