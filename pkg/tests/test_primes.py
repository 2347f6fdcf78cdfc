"""Prime generation on the Montgomery core."""

import random

import pytest

from paillier_accel.arith.bigint import bit_length, from_int
from paillier_accel.crypto.primes import SMALL_PRIMES, generate_prime, is_probable_prime
from paillier_accel.errors import PrimeSearchExhaustedError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class TestMillerRabin:

    def test_small_values(self, rng):
        for n in range(0, 3000):
            assert is_probable_prime(from_int(n), rng, rounds=8) == _is_prime(n), n

    def test_known_primes(self, rng):
        for p in (2 ** 61 - 1, 2 ** 89 - 1, 2 ** 127 - 1):
            assert is_probable_prime(from_int(p), rng)

    def test_composites(self, rng):
        carmichael = [561, 1105, 1729, 2465, 2821, 6601, 8911, 41041, 825265]
        for n in carmichael + [(2 ** 61 - 1) * (2 ** 31 - 1), 3215031751]:
            assert not is_probable_prime(from_int(n), rng)

    def test_sieve(self):
        assert SMALL_PRIMES[:5] == (2, 3, 5, 7, 11)
        assert all(_is_prime(p) for p in SMALL_PRIMES)


class TestGeneratePrime:

    @pytest.mark.parametrize("bits", [8, 16, 32, 64])
    def test_exact_size_and_top_bits(self, bits):
        p = generate_prime(bits, random.Random(bits))
        assert bit_length(p) == bits
        assert p.test_bit(bits - 1) and p.test_bit(bits - 2)
        assert p.is_odd()
        if bits <= 32:
            assert _is_prime(p.to_int())

    def test_deterministic_for_seed(self):
        assert generate_prime(48, random.Random(5)) == generate_prime(48, random.Random(5))

    def test_too_small(self, rng):
        with pytest.raises(ValueError):
            generate_prime(2, rng)

    def test_attempts_exhausted(self):
        with pytest.raises(PrimeSearchExhaustedError):
            generate_prime(64, random.Random(0), max_attempts=0)
