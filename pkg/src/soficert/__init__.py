"""Exact sofic-approximation certificates for free-group actions."""

from .words import Word, free_reduce, identity, invert, multiply, parse_word
from .stallings import (
    CosetTable,
    InseparableError,
    StallingsGraph,
    contains,
    core_graph,
    coset_of,
    hall_completion,
    left_coset_of,
    normal_core,
    schreier_representative,
)
from .actions import (
    BiregularAction,
    CosetAction,
    RestrictedAction,
    act,
    canonical_point,
    orbit_partition,
    separation_targets,
)
from .builder import (
    Caps,
    Certificate,
    CertificateFormatError,
    approximate,
    combine_orbits,
    load_certificate,
    restrict_certificate,
    write_certificate,
)
from .verifier import (
    VerificationReport,
    brute_force_witness,
    hamming,
    verify_certificate,
)

__version__ = "0.1.0"
