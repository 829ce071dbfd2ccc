"""Nuclear and spectral norms of tensors, t-orthogonality and diagonal singular value decompositions."""
from ._ascent import OptimizerSettings
from .bounds import (
    Bound,
    NuclearInterval,
    SpectralBounds,
    check_main_inequality,
    nuclear_interval,
    nuclear_lower_orthogonal,
    nuclear_lower_pairing,
    spectral_bounds,
    spectral_measure,
)
from .core import (
    DenseTensor,
    TensorSpace,
    flatten,
    flattening_spectral_norm,
    frobenius_norm,
    hosvd,
    inner,
    matrix_rank,
)
from .decomposition import (
    Certificate,
    Decomposition,
    PureTensor,
    PureTuple,
    assemble,
    horizontal_product,
    normalize,
    nuclear_cost,
    vertical_product,
)
from .errors import (
    DegenerateInputError,
    DimensionError,
    InapplicableError,
    PreconditionError,
    ResourceError,
    ValidationError,
)
from .orthogonality import (
    MeasureEstimate,
    MeasureStatus,
    Verdict,
    bracket_alpha,
    bracket_alpha_upper,
    coherence_mu,
    count_orthogonal_modes,
    dsvd_extract,
    dsvd_verify,
    mu_alpha,
    t_orthogonality_check,
)

__version__ = "0.1.0"
