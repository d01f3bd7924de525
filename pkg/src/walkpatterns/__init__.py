"""Exact and simulated waiting times for +-1 pattern collections in
simple random walks, capacity bounds on hitting probabilities, and
filling-scheme resampling of meander paths."""

from .capacity import (
    CapacityResult,
    SandwichReport,
    alpha_potential,
    capacity_of,
    hit_before_geometric,
    hitting_probability_exact,
    minimize_energy,
    sandwich,
)
from .exactsolve import SingularMatrixError, fraction_gauss_solve, solve_int_system
from .filling import (
    FillingSample,
    FillingTables,
    build_filling_tables,
    ks_distance,
    sample_meander_paths,
    sample_via_filling,
)
from .lattice import (
    Kind,
    LatticePath,
    PatternClass,
    PatternCollection,
    PatternError,
    count_class,
    custom_collection,
    dump_patterns,
    enumerate_class,
    is_member,
    lambda_n,
    load_patterns,
)
from .matching import (
    MatchingMatrix,
    build_matching_matrix,
    collection_column_sums,
    overlap_indicator,
)
from .montecarlo import (
    DEFAULT_SEED,
    SimConfig,
    SimResult,
    WindowScanner,
    empirical_exponent_table,
    simulate_waiting_time,
    single_waiting_time,
    slepian_first_level_bridge,
)
from .waiting import (
    WaitReport,
    brute_force_oracle,
    closed_form_excursion_wait,
    closed_form_positive_wait,
    exponent_fit,
    solve_class,
    solve_expected_waits,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityResult",
    "DEFAULT_SEED",
    "FillingSample",
    "FillingTables",
    "Kind",
    "LatticePath",
    "MatchingMatrix",
    "PatternClass",
    "PatternCollection",
    "PatternError",
    "SandwichReport",
    "SimConfig",
    "SimResult",
    "SingularMatrixError",
    "WaitReport",
    "WindowScanner",
    "alpha_potential",
    "brute_force_oracle",
    "build_filling_tables",
    "build_matching_matrix",
    "capacity_of",
    "closed_form_excursion_wait",
    "closed_form_positive_wait",
    "collection_column_sums",
    "count_class",
    "custom_collection",
    "dump_patterns",
    "empirical_exponent_table",
    "enumerate_class",
    "exponent_fit",
    "fraction_gauss_solve",
    "hit_before_geometric",
    "hitting_probability_exact",
    "is_member",
    "ks_distance",
    "lambda_n",
    "load_patterns",
    "minimize_energy",
    "overlap_indicator",
    "sample_meander_paths",
    "sample_via_filling",
    "sandwich",
    "simulate_waiting_time",
    "single_waiting_time",
    "slepian_first_level_bridge",
    "solve_class",
    "solve_expected_waits",
    "solve_int_system",
]
