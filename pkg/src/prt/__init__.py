"""Coding trees of 1-types, almost antichains and diaries for the dense pseudotree."""

from .amalgamation import Cone, RayTree, a3_check, amalgamate, audit, subtree_host, subtree_host_for_levels
from .antichain import (
    AlmostAntichain,
    antichain_structure,
    audit_level,
    build,
    host,
    host_for_levels,
    is_almost_antichain,
)
from .approx import Approximation, CompactSubtree, isomorphism_check, level_map, r_n
from .coding_tree import CodingTree, decode_structure, generate
from .diary import CriticalType, Diary, canonicalize, classify, delta_of, diary_axioms_check, meet_closure, similar
from .enumeration import (
    ColoringReport,
    DiaryCatalog,
    brute_force_classes,
    census,
    cross_check,
    enumerate_diaries,
    witness_persistence,
)
from .errors import (
    ConstraintUnsatisfiable,
    DepthExhausted,
    DepthWarning,
    InstanceTooLarge,
    InvalidExtension,
    NodeAbsent,
    NotAChain,
    NotAlmostAntichain,
    NotCodingNode,
    NotDiaryShaped,
    NotMeetClosed,
    ParseError,
    PrtError,
)
from .formats import dump, parse, roundtrip
from .hl import HLInstance, HLResult, HLWitness, hl_micro_search, verify_witness
from .pseudotree import Between, FinitePseudotree, GreaterLeft, NewRay, extend, new_root

__version__ = "0.1.0"
