"""Exact standard and conjugacy growth series of wreath products G wr L where
the base group L has a tree Cayley graph, together with a brute-force group
oracle that verifies every computed coefficient."""

from .groups import (
    FiniteGroupTable,
    GroupSeriesInput,
    GroupTableError,
    conjugacy_series_of_group,
    finite_group_from_table,
    load_group_json,
    preset_lamp,
    preset_table,
    standard_series_of_group,
)
from .oracle import (
    BudgetError,
    OracleSpec,
    WreathElement,
    ball_enumerate,
    conjugacy_census,
    element_length,
    identity_element,
    invert,
    key_of,
    make_element,
    multiply,
    sgs_prefix,
    unionfind_census,
)
from .series import (
    BivariateSeries,
    EstimateError,
    RootBracketError,
    SeriesDegreeError,
    SeriesDomainError,
    TruncatedSeries,
    find_unit_root,
    growth_rate_estimate,
    subtree_fixed_point,
    subtree_series_bivariate,
)
from .treegroup import (
    TreeGroupSpec,
    TreeOrbitRep,
    canonical_tree_translate,
    tree_orbit_representatives,
)
from .wreathseries import (
    RCReport,
    WreathSpec,
    block_series,
    block_tuple_series,
    cgs_closed_form_c2,
    cgs_closed_form_c2c2,
    cgs_closed_form_lamplighter,
    cgs_closed_form_z,
    cgs_infinite_cursor,
    cgs_torsion_cursor,
    cgs_total,
    cgs_trivial_cursor,
    euler_phi,
    lamplighter_asymptotic_check,
    rc_report,
)

__version__ = "0.1.0"
