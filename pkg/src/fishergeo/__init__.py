"""Fisher-Rao information geometry of normal distributions."""

from .barycenter import ClusterResult, KarcherResult, WeightedSet, cluster, karcher_mean
from .errors import (
    DegenerateGeodesic,
    DimensionMismatch,
    DomainError,
    FisherGeometryError,
    InvalidCovariance,
    InvalidMetric,
    InvalidParameter,
    NotOnSubmanifold,
    NumericFailure,
)
from .hyperbolic import (
    HalfSpacePoint,
    HGeodesic,
    HPoint,
    HTangent,
    h_circle,
    h_distance,
    h_distance_halfspace,
    h_exp,
    h_geodesic,
    h_geodesic_point,
    h_interpolate,
    h_log,
)
from .multivariate import (
    BivariateAngular,
    DiagonalGaussian,
    FixedMeanGaussian,
    RoundGaussian,
    bivariate_distance_estimate,
    bivariate_metric,
    estimate_fisher_matrix_bivariate,
    fisher_distance_diag_u0,
    fisher_distance_diagonal,
    fisher_distance_fixed_mean,
    fisher_distance_round,
)
from .univariate import (
    ExpectationParams,
    FisherGeodesic,
    GaussianUni,
    NaturalParams,
    SourceParams,
    convert,
    estimate_fisher_matrix,
    fisher_circle,
    fisher_curvature,
    fisher_distance,
    fisher_distance_in,
    fisher_geodesic,
    fisher_geodesic_point,
    fisher_interpolate,
    fisher_midpoint,
    gaussian_curvature,
    horizontal_bound_check,
    kl_divergence,
    kl_from_fisher_vertical,
    kl_symmetrized,
)

__version__ = "0.1.0"
