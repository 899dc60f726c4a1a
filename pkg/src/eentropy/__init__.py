"""Empirical entropy, two-part model selection and compression distances."""

__version__ = "0.1.0"

from .core import (
    SEPARATOR,
    Alphabet,
    AlphabetMismatch,
    EmptyString,
    EntropyToolkitError,
    LengthMismatch,
    OrderTooLarge,
    SymbolString,
    UnknownSymbol,
    from_text,
    infer_alphabet,
    parse_string,
)
from .empirical import ContextStats, CountTable, context_stats, empirical_entropy_k, entropy_profile
from .models import (
    BERNOULLI,
    SINGLETON,
    UNIFORM,
    EmptyFamilyList,
    Family,
    FittedModel,
    SelectionResult,
    bernoulli_model,
    fit,
    markov,
    model_codelength,
    neg_log2_prob,
    parse_families,
    select_model,
    select_model_joint,
    uniform_model,
)
from .compressors import (
    BUILTIN,
    CompressedBlob,
    CompressorHandle,
    CorruptHeader,
    EmptyInput,
    ExternalProcessFailure,
    TruncatedPayload,
    codelength,
    external_compress,
    huffman_compress,
    huffman_decompress,
)
from .distances import (
    DegenerateJoint,
    DistanceMatrix,
    JointTable,
    audit_metric,
    distance_matrix,
    e_h,
    e_h_from_strings,
    e_h_parts,
    ncd,
    ncd_decomposed,
    nid_empirical,
)
from .typicality import (
    EnumerationTooLarge,
    TypicalSetReport,
    atypical_mass_curve,
    is_typical,
    typical_set_report,
)
