"""Distance configurations, character sums and sphere spectra over F_q^d."""

from .charsums import MultCharacter, gauss_constant, gauss_sum, kloosterman, weil_scan
from .errors import (
    DegenerateSpan,
    FqSimplexError,
    InstanceTooLarge,
    NotCongruent,
    NotGeneralPosition,
    PointSetFormatError,
    ResidualTooLarge,
)
from .field import FieldCtx, add_char, field_ctx, legendre, norm
from .fourier import GridFunction, correlate_count, dft, inverse_dft, plancherel_gap
from .isometry import AffineIsometry, build_isometry, check_congruent, random_orthogonal
from .simplex import (
    CountReport,
    PointSet,
    SimplexSpec,
    concentration_report,
    count_pairs,
    count_simplices,
    is_general_position,
    main_term,
    threshold,
)
from .sphere import SphereSpec, sphere_decay_scan, sphere_ft_closed, sphere_indicator, sphere_size

__version__ = "0.1.0"
