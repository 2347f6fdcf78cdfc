"""Prime generation: small-prime sieve plus Miller–Rabin on the Montgomery core."""

from typing import Optional, Tuple

from loguru import logger

from paillier_accel.arith.bigint import (
    DEFAULT_WORD_BITS,
    BigUint,
    bit_length,
    from_int,
    mod_word,
    random_below,
    random_bits,
    shr_bits,
    sub,
    trailing_zero_bits,
)
from paillier_accel.arith.montgomery import context_new, mod_exp, mont_mul, to_mont
from paillier_accel.errors import PrimeSearchExhaustedError

DEFAULT_ROUNDS = 40
SIEVE_LIMIT = 2000


def _sieve(limit: int) -> Tuple[int, ...]:
    flags = [True] * (limit + 1)
    flags[0] = flags[1] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if flags[p]:
            flags[p * p::p] = [False] * len(flags[p * p::p])
    return tuple(p for p, is_prime in enumerate(flags) if is_prime)


SMALL_PRIMES = _sieve(SIEVE_LIMIT)
_SMALL_PRIME_SET = frozenset(SMALL_PRIMES)


def is_probable_prime(candidate: BigUint, rng, rounds: int = DEFAULT_ROUNDS) -> bool:
    """Trial division by small primes, then ``rounds`` Miller–Rabin rounds with random bases."""
    if bit_length(candidate) <= SIEVE_LIMIT.bit_length():
        value = candidate.to_int()
        if value <= SIEVE_LIMIT:
            return value in _SMALL_PRIME_SET
    for p in SMALL_PRIMES:
        if mod_word(candidate, p) == 0:
            return False

    k = candidate.word_bits
    n_minus_1 = sub(candidate, BigUint._raw((1,), k))
    s = trailing_zero_bits(n_minus_1)
    d = shr_bits(n_minus_1, s)
    ctx = context_new(candidate, k)
    one_m = ctx.r1
    minus_one_m = to_mont(ctx, n_minus_1).value
    # bases drawn from [2, n - 2]
    span = sub(candidate, BigUint._raw((3,), k))

    for _ in range(rounds):
        a = random_below(rng, span) + 2
        x = to_mont(ctx, mod_exp(ctx, a, d)).value
        if x == one_m or x == minus_one_m:
            continue
        for _ in range(s - 1):
            x = mont_mul(ctx, x, x)
            if x == minus_one_m:
                break
        else:
            return False
    return True


def generate_prime(bits: int, rng, rounds: int = DEFAULT_ROUNDS,
                   max_attempts: Optional[int] = None,
                   word_bits: int = DEFAULT_WORD_BITS) -> BigUint:
    """Random prime with exactly ``bits`` bits and its top two bits set.

    Two set top bits make the product of two such primes exactly twice as long.
    """
    if bits < 3:
        raise ValueError(f"Prime size must be at least 3 bits, got {bits}")
    attempts = max_attempts if max_attempts is not None else 100 * bits
    top_bits = from_int(3 << (bits - 2), word_bits)
    for attempt in range(1, attempts + 1):
        candidate = random_bits(rng, bits - 2, word_bits) + top_bits
        if not candidate.is_odd():
            candidate = candidate + 1
        if is_probable_prime(candidate, rng, rounds):
            logger.debug(f"Found {bits}-bit prime after {attempt} candidates")
            return candidate
    logger.error(f"No {bits}-bit prime found in {attempts} candidates")
    raise PrimeSearchExhaustedError(f"No {bits}-bit prime found in {attempts} candidates")
