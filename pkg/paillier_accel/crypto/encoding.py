"""Fixed-point encoding of floats into Paillier plaintexts, and sparse word storage.

Plaintexts are split in thirds: [0, max_int] holds non-negative values,
[n - max_int, n) holds negatives as n - |m|, and the middle third is a dead
zone that signals overflow after homomorphic arithmetic.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from paillier_accel.arith.bigint import BigUint, cmp, div_rem, from_int, sub
from paillier_accel.arith.montgomery import OpCounter
from paillier_accel.crypto.paillier import (
    Ciphertext,
    PrivateKey,
    PublicKey,
    decrypt,
    encrypt,
    scalar_mul,
)
from paillier_accel.errors import EncodingOverflowError, MalformedCiphertextError

DEFAULT_BASE = 16
FLOAT_MANTISSA_BITS = 53

Number = Union[int, float]


@dataclass(frozen=True)
class EncodedNumber:
    """Plaintext mantissa with value mantissa·base^exponent (signed via the thirds rule)."""
    mantissa: BigUint
    exponent: int
    base: int = DEFAULT_BASE


@dataclass(frozen=True)
class SparseWords:
    """Nonzero (index, word) pairs of a value stored in ``total_words`` words."""
    pairs: Tuple[Tuple[int, int], ...]
    total_words: int
    word_bits: int

    @property
    def memory_reduction(self) -> float:
        if self.total_words == 0:
            return 0.0
        return 1.0 - len(self.pairs) / self.total_words


def _default_exponent(value: Number, base: int) -> int:
    if isinstance(value, int):
        return 0
    # keep every significant bit of the float mantissa
    lsb_exponent = math.frexp(value)[1] - FLOAT_MANTISSA_BITS
    return math.floor(lsb_exponent / math.log2(base))


def encode(value: Number, pk: PublicKey, exponent: Optional[int] = None,
           base: int = DEFAULT_BASE) -> EncodedNumber:
    """Scale ``value`` by base^-exponent and map it into [0, n)."""
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"Cannot encode non-finite value {value}")
    if base < 2:
        raise ValueError(f"Encoding base must be at least 2, got {base}")
    if exponent is None:
        exponent = _default_exponent(value, base)

    if isinstance(value, int) and exponent <= 0:
        scaled = value * base ** (-exponent)
    else:
        scaled = int(round(value * base ** (-exponent)))

    k = pk.n.word_bits
    magnitude = from_int(abs(scaled), k)
    if cmp(magnitude, pk.max_int) > 0:
        raise EncodingOverflowError(f"Value {value} at exponent {exponent} exceeds the encodable range")
    mantissa = magnitude if scaled >= 0 else sub(pk.n, magnitude)
    return EncodedNumber(mantissa=mantissa, exponent=exponent, base=base)


def signed_mantissa(e: EncodedNumber, pk: PublicKey) -> int:
    """Signed integer represented by the mantissa."""
    mantissa = e.mantissa if e.mantissa.word_bits == pk.n.word_bits else e.mantissa.rebase(pk.n.word_bits)
    if cmp(mantissa, pk.n) >= 0:
        raise MalformedCiphertextError("Mantissa is not below n")
    if cmp(mantissa, pk.max_int) <= 0:
        return mantissa.to_int()
    if cmp(mantissa, sub(pk.n, pk.max_int)) >= 0:
        return -sub(pk.n, mantissa).to_int()
    raise EncodingOverflowError("Mantissa fell in the overflow dead zone")


def decode(e: EncodedNumber, pk: PublicKey) -> float:
    return float(signed_mantissa(e, pk) * (e.base ** e.exponent))


def align(a: EncodedNumber, b: EncodedNumber, pk: PublicKey) -> Tuple[EncodedNumber, EncodedNumber]:
    """Lower the larger exponent so both encodings share min(exponent)."""
    if a.base != b.base:
        raise ValueError(f"Cannot align encodings with bases {a.base} and {b.base}")
    if a.exponent == b.exponent:
        return a, b
    if a.exponent > b.exponent:
        return _decrease_exponent(a, b.exponent, pk), b
    return a, _decrease_exponent(b, a.exponent, pk)


def _decrease_exponent(e: EncodedNumber, new_exponent: int, pk: PublicKey) -> EncodedNumber:
    signed = signed_mantissa(e, pk) * e.base ** (e.exponent - new_exponent)
    if abs(signed) > pk.max_int.to_int():
        raise EncodingOverflowError(f"Rescaling to exponent {new_exponent} overflows the encodable range")
    factor = from_int(e.base ** (e.exponent - new_exponent), pk.n.word_bits)
    mantissa = div_rem(e.mantissa * factor, pk.n)[1]
    return EncodedNumber(mantissa=mantissa, exponent=new_exponent, base=e.base)


def align_ciphertexts(pk: PublicKey, c1: Ciphertext, c2: Ciphertext, base: int = DEFAULT_BASE,
                      counter: Optional[OpCounter] = None) -> Tuple[Ciphertext, Ciphertext]:
    """Bring two ciphertexts to the same exponent by scalar multiplication with base^Δ."""
    if c1.exponent == c2.exponent:
        return c1, c2
    if c1.exponent > c2.exponent:
        return _rescale_cipher(pk, c1, c2.exponent, base, counter), c2
    return c1, _rescale_cipher(pk, c2, c1.exponent, base, counter)


def _rescale_cipher(pk: PublicKey, c: Ciphertext, new_exponent: int, base: int,
                    counter: Optional[OpCounter]) -> Ciphertext:
    factor = from_int(base ** (c.exponent - new_exponent), pk.n.word_bits)
    scaled = scalar_mul(pk, c, factor, counter)
    return Ciphertext(scaled.value, new_exponent)


def encrypt_value(pk: PublicKey, value: Number, exponent: Optional[int] = None, rng=None,
                  base: int = DEFAULT_BASE, **kwargs) -> Ciphertext:
    encoded = encode(value, pk, exponent, base)
    return encrypt_encoded(pk, encoded, rng=rng, **kwargs)


def encrypt_encoded(pk: PublicKey, encoded: EncodedNumber, r: Optional[BigUint] = None, rng=None,
                    **kwargs) -> Ciphertext:
    return encrypt(pk, encoded.mantissa, r, rng, exponent=encoded.exponent, **kwargs)


def decrypt_value(sk: PrivateKey, pk: PublicKey, c: Ciphertext, base: int = DEFAULT_BASE) -> float:
    return decode(decrypt_encoded(sk, pk, c, base), pk)


def decrypt_encoded(sk: PrivateKey, pk: PublicKey, c: Ciphertext, base: int = DEFAULT_BASE) -> EncodedNumber:
    return EncodedNumber(mantissa=decrypt(sk, pk, c), exponent=c.exponent, base=base)


def multiply_encoded(pk: PublicKey, c: Ciphertext, scalar: EncodedNumber,
                     counter: Optional[OpCounter] = None) -> Ciphertext:
    """Ciphertext of (plaintext · scalar); exponents add."""
    product = scalar_mul(pk, c, scalar.mantissa, counter)
    return Ciphertext(product.value, c.exponent + scalar.exponent)


def sparsify(x: BigUint, total_words: Optional[int] = None) -> SparseWords:
    total = len(x.words) if total_words is None else total_words
    if total < len(x.words):
        raise ValueError(f"Value needs {len(x.words)} words, total_words is only {total}")
    pairs = tuple((index, word) for index, word in enumerate(x.words) if word)
    return SparseWords(pairs=pairs, total_words=total, word_bits=x.word_bits)


def densify(s: SparseWords) -> BigUint:
    words = [0] * s.total_words
    for index, word in s.pairs:
        words[index] = word
    return BigUint(tuple(words), s.word_bits)
