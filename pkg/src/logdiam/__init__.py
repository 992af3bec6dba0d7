"""Exact word certificates and diameter experiments for congruence Cayley graphs."""

from .backend import compiled_available
from .bddgen import (
    ConjugateWord,
    Letter,
    SeedPair,
    find_seed_pair,
    step1_triangularize,
    step2_lower_unipotent_word,
    step3_upper_unipotent_word,
    step4_scaling_word,
    step5_prime_power_decompose,
    step6_decompose,
    verify_word,
    word_budget,
)
from .cayley import (
    CayleyWord,
    DiameterRecord,
    ScanReport,
    bfs_distance,
    diameter,
    diameter_scan,
    run_closure,
    scan_csv,
    search_with_predicate,
    surjectivity_check,
)
from .certify import (
    AuxiliaryKit,
    LengthAccounting,
    assemble_product_certificate,
    assemble_sa_certificate,
    find_product_kit,
    find_sa_kit,
    key_identity,
    solve_translation_pair,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    DecompositionError,
    JacobianSingularError,
    LogdiamError,
    ModulusError,
    PreconditionError,
    SeedConditionError,
    VerificationError,
)
from .matmod import (
    AffineModQ,
    GenSet,
    MatModQ,
    ProductModQ,
    SeedConditions,
    check_seed,
    standard_product_genset,
    standard_sa2_genset,
    standard_sl2_genset,
)
from .modarith import FactoredModulus, factorize, hensel_lift_system

__version__ = "0.1.0"
