"""Finite skew braces: construction, left ideals, enumeration via the
holomorph, left-simplicity classification checks, and Hopf-Galois
correspondence reports."""

__version__ = "0.1.0"

from .braces import (
    BraceMaps,
    LeftIdeal,
    SkewBrace,
    brace_class,
    brace_maps,
    braces_isomorphic,
    canonical_ideals,
    image_subgroups,
    is_left_simple,
    left_ideal_closure,
    left_ideals,
    make_brace,
    scan_brace_relation,
)
from .catalog import builtin_group, cyclic_group, group_from_permutations
from .classification import (
    FactorizationWitness,
    PrimePowerParam,
    check_conditions,
    check_thm2b,
    evaluate_conditions,
    out_order,
    psl2_order,
    verify_thm1,
    verify_thm2a,
    vp,
    zsigmondy,
)
from .enumeration import (
    Holomorph,
    RegularSubgroup,
    brace_from_regular,
    brute_force_braces,
    enumerate_braces,
    holomorph,
    regular_subgroups,
)
from .errors import (
    BraceRelationFails,
    CodingMismatch,
    IdentityMismatch,
    NotAGroup,
    NotSimpleAdditive,
    SearchTimeout,
    SizeLimit,
    SkewBraceError,
    TableCorrupt,
    UnknownFamily,
)
from .groups import (
    Automorphism,
    AutomorphismGroup,
    FiniteGroup,
    GroupProfile,
    Subgroup,
    all_subgroups,
    automorphism_group,
    build_group,
    direct_power,
    group_profile,
    opposite_group,
    subgroup_closure,
)
from .hopf_galois import HGSReport, correspondence_report, fixed_algebra_stats
from .tables import audit_paper_tables
