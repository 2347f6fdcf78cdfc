"""Word-level big-integer and Montgomery arithmetic."""

from .bigint import (
    DEFAULT_WORD_BITS,
    SUPPORTED_WORD_BITS,
    BigUint,
    KaratsubaCounter,
    add,
    bit_length,
    cmp,
    div_rem,
    from_bytes,
    from_hex,
    from_int,
    gcd,
    lcm,
    mod_inverse,
    mod_word,
    mul_karatsuba,
    mul_schoolbook,
    popcount,
    random_below,
    random_bits,
    rebase,
    shl_bits,
    shr_bits,
    sub,
    test_bit,
    to_bytes,
    to_hex,
    to_int,
)
from .montgomery import (
    MontForm,
    MontgomeryContext,
    OpCounter,
    context_new,
    from_mont,
    mod_exp,
    mod_exp_count,
    mod_mul,
    mont_mul,
    to_mont,
    word_inverse,
)

__all__ = [
    "DEFAULT_WORD_BITS",
    "SUPPORTED_WORD_BITS",
    "BigUint",
    "KaratsubaCounter",
    "add",
    "bit_length",
    "cmp",
    "div_rem",
    "from_bytes",
    "from_hex",
    "from_int",
    "gcd",
    "lcm",
    "mod_inverse",
    "mod_word",
    "mul_karatsuba",
    "mul_schoolbook",
    "popcount",
    "random_below",
    "random_bits",
    "rebase",
    "shl_bits",
    "shr_bits",
    "sub",
    "test_bit",
    "to_bytes",
    "to_hex",
    "to_int",
    "MontForm",
    "MontgomeryContext",
    "OpCounter",
    "context_new",
    "from_mont",
    "mod_exp",
    "mod_exp_count",
    "mod_mul",
    "mont_mul",
    "to_mont",
    "word_inverse",
]
