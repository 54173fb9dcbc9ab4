"""Linear codes over Z_2k: standard forms, Type II certificates, weight
scans, the doubling construction, and the length-32 candidate search."""

from .rings import (
    DimensionError,
    DomainError,
    Modulus,
    Z2,
    Z4,
    Z8,
    ZVector,
    count_occurrences,
    euclidean_weight,
    hamming_weight,
    inner_product,
    reduce_vector,
    support_of,
    vector_combine,
)
from .model import (
    CapacityError,
    GeneratorMatrix,
    StandardForm,
    TypeProfile,
    code_size,
    codes_equal,
    contains,
    dual,
    enumerate_codewords,
    residue_code,
    standardize,
)
from .certify import (
    TypeIICertificate,
    certify_type_II,
    extremal_bound,
    is_extremal,
    is_self_dual,
    is_self_orthogonal,
)
from .weights import (
    MinWeightResult,
    WeightDistribution,
    low_weight_codewords,
    merge_distributions,
    min_euclidean_weight,
    sample_weights,
    weight_distribution,
)
from .doubling import (
    DoubleResult,
    DoublingVector,
    double_by_cosets,
    double_code,
    find_free_type_ii_seed,
    undouble,
    validate_doubling_vector,
)
from .search import (
    CandidateSet,
    ExcludedCandidateError,
    ExclusionLedger,
    ExclusionWitness,
    ExtremalDouble,
    ResidueNotExtremalError,
    SourceFamily,
    algorithmC_exclusions,
    brute_force_exclusions,
    build_extremal_double,
    candidate_count,
    candidate_sets,
    doubled_weight16_codeword,
    family_candidate_counts,
    recover_source,
    undouble_family,
)
from .golden import (
    GOLDEN_NAMES,
    GoldenRecord,
    golden_check,
    golden_record,
    golden_records,
)
from .fileio import (
    CodeFileError,
    parse_code_file,
    serialize_code_file,
)
from .cli import cli_dispatch

__all__ = [
    "DimensionError",
    "DomainError",
    "Modulus",
    "Z2",
    "Z4",
    "Z8",
    "ZVector",
    "count_occurrences",
    "euclidean_weight",
    "hamming_weight",
    "inner_product",
    "reduce_vector",
    "support_of",
    "vector_combine",
    "CapacityError",
    "GeneratorMatrix",
    "StandardForm",
    "TypeProfile",
    "code_size",
    "codes_equal",
    "contains",
    "dual",
    "enumerate_codewords",
    "residue_code",
    "standardize",
    "TypeIICertificate",
    "certify_type_II",
    "extremal_bound",
    "is_extremal",
    "is_self_dual",
    "is_self_orthogonal",
    "MinWeightResult",
    "WeightDistribution",
    "low_weight_codewords",
    "merge_distributions",
    "min_euclidean_weight",
    "sample_weights",
    "weight_distribution",
    "DoubleResult",
    "DoublingVector",
    "double_by_cosets",
    "double_code",
    "find_free_type_ii_seed",
    "undouble",
    "validate_doubling_vector",
    "CandidateSet",
    "ExcludedCandidateError",
    "ExclusionLedger",
    "ExclusionWitness",
    "ExtremalDouble",
    "ResidueNotExtremalError",
    "SourceFamily",
    "algorithmC_exclusions",
    "brute_force_exclusions",
    "build_extremal_double",
    "candidate_count",
    "candidate_sets",
    "doubled_weight16_codeword",
    "family_candidate_counts",
    "recover_source",
    "undouble_family",
    "GOLDEN_NAMES",
    "GoldenRecord",
    "golden_check",
    "golden_record",
    "golden_records",
    "CodeFileError",
    "parse_code_file",
    "serialize_code_file",
    "cli_dispatch",
]

__version__ = "0.1.0"
