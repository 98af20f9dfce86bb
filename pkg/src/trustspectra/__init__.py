"""Mine qualitative trust concepts from quantitative trust-score matrices.

Rows are trustees (objects), columns are trustors (subjects).  A complete
block ``M`` factors as ``M = V diag(lambdas) U^T``; each singular triple is a
trust concept and ``v u^T`` its qualified trust matrix.
"""
from .concepts import (
    Concept,
    EdgeDecomposition,
    QualifiedMatrix,
    concept_spectrum,
    decompose_edge,
    qualified_matrix,
    reconstruct,
    similarity_preserving_matrix,
)
from .estimator import TrustConceptMiner
from .exceptions import (
    ConvergenceError,
    KernelRayError,
    MissingCellError,
    StaleDecompositionError,
    TrustDataError,
    TrustSpectraError,
)
from .linalg import (
    BidiagonalFactorization,
    SpectralDecomposition,
    bidiagonalize,
    svd,
    top_singular_pair,
    truncate,
)
from .model import (
    DenseTrustMatrix,
    ScoreTable,
    TrustGraph,
    TrustStatement,
    extract_block,
    greedy_complete_block,
    ingest_scores,
    merge_trustees,
    parse_scores,
)
from .recommend import RankedRecommendation, rank_trustees, refine_query
from .similarity import (
    ClusteringPair,
    FiniteSimilarityNetwork,
    Ray,
    check_clustering,
    induced_map,
    morphism_violation_report,
    ray_similarity,
    similarity_map_F,
)

__version__ = "0.1.0"
