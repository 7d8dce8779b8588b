"""graphdrift: concept-drift detection from the evolution of dependence forests."""

__version__ = "0.1.0"

from .dataset import (  # noqa: F401
    SimulationConfig,
    VariableSpec,
    WindowedTensor,
    elec2_adapter,
    load_csv,
    make_windows,
    simulate_appendix,
)
from .forest import (  # noqa: F401
    AdjacencyMatrix,
    WeightedGraph,
    creates_forbidden_path,
    forest_total_weight,
    kruskal_max_forest,
    weight_matrix,
)
from .inference import (  # noqa: F401
    DesignMatrix,
    PosteriorDraws,
    Prior,
    SamplerConfig,
    StabilityCurve,
    build_design,
    log_likelihood,
    log_posterior,
    map_estimate,
    posterior_predictive,
    sample_posterior,
)
from .mi import (  # noqa: F401
    DegenerateVarianceError,
    EdgeWeight,
    MiConfig,
    mi_continuous,
    mi_discrete,
    mi_mixed_heterogeneous,
    mi_mixed_homogeneous,
    penalize,
)
from .transition import (  # noqa: F401
    StabilityDataset,
    StabilityRecord,
    TransitionMatrix,
    build_stability_dataset,
    decode_bits,
    fold_bits,
    fold_transition,
    stability_fraction,
    stability_indicator,
)
