"""Exact spectral classification of constant-length substitutions."""
__version__ = "0.1.0"

from .substitution import (  # noqa: E402
    Substitution,
    SubstitutionError,
    NotPrimitiveError,
    NotInjectiveError,
    NoFixedPointError,
    parse_substitution,
    load_substitution,
    serialize_substitution,
    instruction_matrices,
    substitution_matrix,
    power_instruction_matrices,
    is_primitive,
    letter_frequencies,
    legal_words,
    is_aperiodic_pansiot,
    height,
    fixed_point_prefix,
)
from .bisubstitution import build_bisubstitution, ergodic_decomposition  # noqa: E402
from .correlation import (  # noqa: E402
    CorrelationTable,
    carry_set,
    sigma0,
    sigma1,
    sigma_k,
    verify_theorem_consistency,
)
from .hull import spectral_hull, correlation_operator  # noqa: E402
from .estimator import SpectralTypeAnalyzer, PeriodogramTransformer  # noqa: E402


def bundled(name: str) -> Substitution:
    """Load a bundled example substitution (``"rsl"`` or ``"rs"``)."""
    from importlib.resources import files

    return load_substitution(files(__name__) / "data" / f"{name}.json")
