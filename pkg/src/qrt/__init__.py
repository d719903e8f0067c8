"""Explicit quasi-random regular tournaments: constructions, spectral gaps,
consistent-edge rankings and property checks."""
from .constructions import (
    ConstructionError,
    CyclotomicSpec,
    admissible_ivecs,
    build_cyclotomic,
    build_from_spec,
    build_paley,
    cyclotomic_classes,
    cyclotomic_spec,
    find_primitive_element,
)
from .core import (
    Ranking,
    Tournament,
    TournamentError,
    VertexSet,
    consistent_edges,
    edges_between,
    is_normal,
    is_regular,
    out_degrees,
    reverse_ranking,
    sample_random_tournament,
    transitive_tournament,
    validate,
)
from .elliptic import (
    Curve,
    GroupTable,
    HalfSet,
    build_elliptic_tournament,
    curve_points,
    find_curve_with_order,
    split_inverse_pairs,
)
from .properties import (
    CertificateReport,
    CertifyOptions,
    SchutteResult,
    certify,
    graham_spencer_threshold,
    has_schutte,
    is_doubly_regular,
)
from .ranking import (
    BisectionCertificate,
    RankingResult,
    bisection_certificate,
    exact_max_consistent,
    heuristic_max_consistent,
    theorem_bound,
    trivial_bounds,
)
from .spectral import (
    Spectrum,
    detect_spectral_pattern,
    lambda_circulant,
    lambda_general,
    lambda_lower_bound,
    mixing_audit,
)

__version__ = "0.1.0"
