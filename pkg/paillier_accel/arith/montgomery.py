"""Word-radix Montgomery multiplication and exponentiation.

The loop nest mirrors the hardware core one-to-one: an outer loop over the
words of Y, a quotient digit q taken from the low word only, and an inner
loop over the l/k + 1 words of X that writes the running sum back one word
lower (the division by 2^k). The trip counts recorded in ``OpCounter`` are
the same quantities the pipeline model schedules.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Union

from loguru import logger

from paillier_accel.arith.bigint import (
    DEFAULT_WORD_BITS,
    BigUint,
    bit_length,
    cmp,
    div_rem,
    iter_bits_msb,
    one,
    popcount,
    shl_bits,
    sub,
)
from paillier_accel.errors import EvenModulusError, InvalidModulusError, OperandNotReducedError

NEWTON_STEPS = 5


@dataclass
class OpCounter:
    """Instrumentation shared by the Montgomery operations."""
    mont_muls: int = 0
    inner_iterations: int = 0
    squarings: int = 0
    multiplies: int = 0
    conversions: int = 0

    def reset(self) -> None:
        self.mont_muls = 0
        self.inner_iterations = 0
        self.squarings = 0
        self.multiplies = 0
        self.conversions = 0

    def merge(self, other: "OpCounter") -> "OpCounter":
        self.mont_muls += other.mont_muls
        self.inner_iterations += other.inner_iterations
        self.squarings += other.squarings
        self.multiplies += other.multiplies
        self.conversions += other.conversions
        return self

    def to_dict(self) -> Dict[str, int]:
        return {
            "mont_muls": self.mont_muls,
            "inner_iterations": self.inner_iterations,
            "squarings": self.squarings,
            "multiplies": self.multiplies,
            "conversions": self.conversions,
        }


@dataclass(frozen=True)
class MontgomeryContext:
    """Modulus plus the precomputed constants of the reduction loop."""
    modulus: BigUint
    radix_bits: int
    word_count: int
    m_prime: int
    r2: BigUint
    r1: BigUint = field(repr=False)

    @property
    def l(self) -> int:
        return self.word_count * self.radix_bits

    @property
    def k(self) -> int:
        return self.radix_bits


@dataclass(frozen=True)
class MontForm:
    """Montgomery image a·2^l mod M of a logical value a."""
    value: BigUint


def word_inverse(m0: int, radix_bits: int) -> int:
    """M⁻¹ mod 2^k by Newton iteration; each step doubles the correct low bits."""
    if m0 % 2 == 0:
        raise EvenModulusError(f"Low word {m0} is even; no inverse mod 2^{radix_bits}")
    mask = (1 << radix_bits) - 1
    # m0 is its own inverse mod 8, so three bits are right before the first step
    inv = m0 & mask
    for _ in range(NEWTON_STEPS):
        inv = (inv * (2 - m0 * inv)) & mask
    assert (m0 * inv) & mask == 1
    return inv


def context_new(modulus: BigUint, radix_bits: int = DEFAULT_WORD_BITS) -> MontgomeryContext:
    """Precompute m′ = −M⁻¹ mod 2^k, R mod M and R² mod M for R = 2^l."""
    M = modulus.rebase(radix_bits)
    if not M.is_odd():
        raise EvenModulusError(f"Montgomery modulus must be odd, got 0x{M.to_hex()}")
    if cmp(M, BigUint._raw((3,), radix_bits)) < 0:
        raise InvalidModulusError(f"Montgomery modulus must be at least 3, got {M.to_int()}")

    n = len(M.words)
    total_bits = n * radix_bits
    inv = word_inverse(M.words[0], radix_bits)
    m_prime = ((1 << radix_bits) - inv) & ((1 << radix_bits) - 1)
    unit = one(radix_bits)
    r1 = div_rem(shl_bits(unit, total_bits), M)[1]
    r2 = div_rem(shl_bits(unit, 2 * total_bits), M)[1]
    logger.debug(f"Montgomery context: {bit_length(M)}-bit modulus, k={radix_bits}, {n} words")
    return MontgomeryContext(modulus=M, radix_bits=radix_bits, word_count=n, m_prime=m_prime, r2=r2, r1=r1)


def _operand_words(ctx: MontgomeryContext, value: BigUint, name: str) -> list:
    if value.word_bits != ctx.radix_bits:
        value = value.rebase(ctx.radix_bits)
    if cmp(value, ctx.modulus) >= 0:
        raise OperandNotReducedError(f"Operand {name} = 0x{value.to_hex()} is not below the modulus")
    words = list(value.words)
    words.extend([0] * (ctx.word_count - len(words)))
    return words


def mont_mul(ctx: MontgomeryContext, X: BigUint, Y: BigUint,
             counter: Optional[OpCounter] = None) -> BigUint:
    """X·Y·2^(−l) mod M for X, Y < M."""
    k = ctx.radix_bits
    mask = (1 << k) - 1
    n = ctx.word_count
    x = _operand_words(ctx, X, "X")
    y = _operand_words(ctx, Y, "Y")
    x.append(0)
    m = list(ctx.modulus.words)
    m.append(0)
    m_prime = ctx.m_prime
    x0, m0 = x[0], m[0]
    s = [0] * (n + 1)
    trips = 0

    for i in range(n):
        yi = y[i]
        # quotient digit from the low words only
        q = ((s[0] + x0 * yi) * m_prime) & mask
        t = s[0] + x0 * yi + q * m0
        assert t & mask == 0
        carry = t >> k
        trips += 1
        for j in range(1, n + 1):
            t = s[j] + x[j] * yi + q * m[j] + carry
            s[j - 1] = t & mask
            carry = t >> k
            trips += 1
        s[n] = carry

    result = BigUint._raw(s, k)
    assert cmp(result, shl_bits(ctx.modulus, 1)) < 0, "Montgomery sum escaped [0, 2M)"
    if cmp(result, ctx.modulus) >= 0:
        result = sub(result, ctx.modulus)

    if counter is not None:
        counter.mont_muls += 1
        counter.inner_iterations += trips
    return result


def to_mont(ctx: MontgomeryContext, a: BigUint, counter: Optional[OpCounter] = None) -> MontForm:
    value = mont_mul(ctx, a, ctx.r2, counter)
    if counter is not None:
        counter.conversions += 1
    return MontForm(value)


def from_mont(ctx: MontgomeryContext, x: Union[MontForm, BigUint],
              counter: Optional[OpCounter] = None) -> BigUint:
    value = x.value if isinstance(x, MontForm) else x
    result = mont_mul(ctx, value, one(ctx.radix_bits), counter)
    if counter is not None:
        counter.conversions += 1
    return result


def mod_exp(ctx: MontgomeryContext, base: BigUint, exponent: BigUint,
            counter: Optional[OpCounter] = None) -> BigUint:
    """Left-to-right binary exponentiation kept in the Montgomery domain."""
    acc = ctx.r1
    b = to_mont(ctx, base, counter).value
    for bit in iter_bits_msb(exponent):
        acc = mont_mul(ctx, acc, acc, counter)
        if counter is not None:
            counter.squarings += 1
        if bit:
            acc = mont_mul(ctx, acc, b, counter)
            if counter is not None:
                counter.multiplies += 1
    return from_mont(ctx, acc, counter)


def mod_exp_count(exponent: BigUint) -> int:
    """mont_mul calls made by ``mod_exp``: squarings, multiplies and two conversions."""
    return bit_length(exponent) + popcount(exponent) + 2


def mod_mul(ctx: MontgomeryContext, a: BigUint, b: BigUint,
            counter: Optional[OpCounter] = None) -> BigUint:
    am = to_mont(ctx, a, counter).value
    bm = to_mont(ctx, b, counter).value
    return from_mont(ctx, mont_mul(ctx, am, bm, counter), counter)


def reduce(ctx: MontgomeryContext, a: BigUint) -> BigUint:
    """a mod M for inputs of any size (plain division, outside the Montgomery loop)."""
    if a.word_bits != ctx.radix_bits:
        a = a.rebase(ctx.radix_bits)
    if cmp(a, ctx.modulus) < 0:
        return a
    return div_rem(a, ctx.modulus)[1]
