"""Symbolic-dynamics toolkit for binary subshifts, their hereditary closures,
densities, entropies and the Gibbs property of Bernoulli-half convolutions."""

from .words import Block, block, dominates, dominating_set, ones_count, subword
from .subshifts import (
    ForbiddenSet,
    LabeledGraph,
    SubshiftSpec,
    hereditary_closure_graph,
    hereditary_closure_language,
    is_hereditary_sufficient,
    language,
    normalize,
    sft_to_graph,
    upgrade_embedding,
)
from .spectral import (
    entropy_density_bound_check,
    entropy_series,
    max_mean_cycle,
    ones_density_series,
    pf_eigenvalue,
    shannon_entropy,
    topological_entropy_exact,
)
from .generators import (
    BFreeSpec,
    SturmianSpec,
    admissible_check,
    behrend_check,
    eta,
    logarithmic_density,
    primitivize,
    sturmian_point,
    taut_check,
)
from .measures import (
    BlockDistribution,
    MeasureSeries,
    atom_bound_series,
    convolve_half,
    d_nu,
    D_nu_series,
    empirical_measure,
    entropy_gibbs_bound_check,
    gibbs_lower_bound_check,
    gibbs_ratio_series,
    maximal_block_formula_check,
    measure_entropy_series,
    monotonicity_check,
    ones_maximal_block,
    periodic_measure,
    rate_of_convergence_check,
)

__version__ = "0.1.0"
