"""citefair: journal citation indicators, field normalization, and the
top-share fairness test.

The pipeline: ingest (or synthesize) a journal/citation dataset, compute
indicator tables under integer or fractional counting, rescale them by
per-cluster means, and evaluate cross-field fairness statistically.
"""

from .errors import (
    CiteFairError,
    FairnessError,
    IngestWarning,
    ParseError,
    ProfileError,
    RescaleError,
    StatsError,
    ValidationError,
)
from .fairness import (
    FairnessReport,
    ReportComparison,
    calibration,
    compare_reports,
    fairness_test,
    percentage_summary,
)
from .indicators import (
    IndicatorSpec,
    IndicatorTable,
    compute_table,
    compute_tables,
    rank_table,
    read_table,
    rescale,
    write_table,
)
from .ingest import (
    IngestConfig,
    assemble,
    load_bundle,
    parse_citations,
    parse_journals,
    parse_publications,
    save_bundle,
    write_dataset,
)
from .model import (
    CitationEvent,
    Cluster,
    Dataset,
    JournalRecord,
    PublicationCount,
    Violation,
    validate,
)
from .stats import (
    HypergeomParams,
    VarianceDecomposition,
    decile_correlations,
    ecdf_by_group,
    hypergeom_ci,
    hypergeom_pmf,
    ks_two_sample,
    pearson,
    spearman,
    top_fraction,
    variance_decomposition,
)
from .synth import SynthProfile, generate, paper2010_profile

__version__ = "0.1.0"
