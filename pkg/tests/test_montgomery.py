"""Montgomery multiplication and exponentiation against pow()."""

import random

import pytest

from paillier_accel.arith.bigint import from_int, random_below
from paillier_accel.arith.montgomery import (
    OpCounter,
    context_new,
    from_mont,
    mod_exp,
    mod_exp_count,
    mod_mul,
    mont_mul,
    reduce,
    to_mont,
    word_inverse,
)
from paillier_accel.errors import EvenModulusError, InvalidModulusError, OperandNotReducedError


def _odd_modulus(rng: random.Random, bits: int) -> int:
    return rng.getrandbits(bits) | (1 << (bits - 1)) | 1


class TestContext:
    """Precomputed constants."""

    @pytest.mark.parametrize("k", [4, 8, 16, 32])
    def test_word_inverse(self, k):
        for m0 in range(1, 2 ** min(k, 10), 2):
            assert (m0 * word_inverse(m0, k)) % (2 ** k) == 1

    def test_constants(self):
        modulus = (1 << 200) + 235
        ctx = context_new(from_int(modulus), 32)
        assert ctx.word_count == 7
        assert ctx.l == 224
        assert ctx.r1.to_int() == (1 << 224) % modulus
        assert ctx.r2.to_int() == (1 << 448) % modulus
        assert (ctx.m_prime * modulus + 1) % (1 << 32) == 0

    def test_even_modulus(self):
        with pytest.raises(EvenModulusError):
            context_new(from_int(1 << 64))

    def test_modulus_too_small(self):
        with pytest.raises(InvalidModulusError):
            context_new(from_int(1))


class TestMontMul:
    """X·Y·2^(−l) mod M and its loop counts."""

    @pytest.mark.parametrize("k", [4, 8, 16, 32])
    @pytest.mark.parametrize("bits", [17, 64, 130, 256])
    def test_matches_oracle(self, k, bits):
        rng = random.Random(bits * 100 + k)
        M = _odd_modulus(rng, bits)
        ctx = context_new(from_int(M, k), k)
        r_inv = pow(2 ** ctx.l, -1, M)
        for _ in range(10):
            x, y = rng.randrange(M), rng.randrange(M)
            result = mont_mul(ctx, from_int(x, k), from_int(y, k))
            assert result.to_int() == x * y * r_inv % M

    def test_extremes(self):
        M = (1 << 128) - 159
        ctx = context_new(from_int(M))
        r_inv = pow(2 ** ctx.l, -1, M)
        top = from_int(M - 1)
        assert mont_mul(ctx, top, top).to_int() == (M - 1) ** 2 * r_inv % M
        assert mont_mul(ctx, from_int(0), top).is_zero()

    @pytest.mark.parametrize("words", [1, 2, 8, 32])
    def test_inner_iteration_count(self, words):
        rng = random.Random(words)
        M = _odd_modulus(rng, 32 * words)
        ctx = context_new(from_int(M))
        counter = OpCounter()
        mont_mul(ctx, random_below(rng, ctx.modulus), random_below(rng, ctx.modulus), counter)
        assert counter.mont_muls == 1
        assert counter.inner_iterations == words * (words + 1)

    def test_operand_not_reduced(self):
        ctx = context_new(from_int(1009))
        with pytest.raises(OperandNotReducedError):
            mont_mul(ctx, from_int(1009), from_int(5))

    def test_domain_round_trip(self):
        M = (1 << 255) - 19
        ctx = context_new(from_int(M), 16)
        a = from_int(123456789123456789, 16)
        image = to_mont(ctx, a)
        assert image.value.to_int() == a.to_int() * 2 ** ctx.l % M
        assert from_mont(ctx, image) == a


class TestExponentiation:
    """mod_exp, mod_mul and their operation counts."""

    @pytest.mark.parametrize("k", [8, 32])
    def test_mod_exp_matches_pow(self, k):
        rng = random.Random(k)
        for bits in (20, 100, 256):
            M = _odd_modulus(rng, bits)
            ctx = context_new(from_int(M, k), k)
            base, exponent = rng.randrange(M), rng.getrandbits(bits)
            assert mod_exp(ctx, from_int(base, k), from_int(exponent, k)).to_int() == pow(base, exponent, M)

    def test_zero_exponent(self):
        ctx = context_new(from_int(97))
        assert mod_exp(ctx, from_int(5), from_int(0)).to_int() == 1

    def test_zero_base(self):
        ctx = context_new(from_int(97))
        assert mod_exp(ctx, from_int(0), from_int(5)).is_zero()

    @pytest.mark.parametrize("exponent", [1, 2, 0b1011, 2 ** 64 - 1, 2 ** 100])
    def test_mod_exp_count(self, exponent):
        ctx = context_new(from_int((1 << 127) - 1))
        counter = OpCounter()
        e = from_int(exponent)
        mod_exp(ctx, from_int(3), e, counter)
        expected = exponent.bit_length() + bin(exponent).count("1") + 2
        assert counter.mont_muls == mod_exp_count(e) == expected
        assert counter.squarings == exponent.bit_length()
        assert counter.multiplies == bin(exponent).count("1")
        assert counter.conversions == 2

    def test_mod_mul(self):
        M = (1 << 89) - 1
        ctx = context_new(from_int(M))
        counter = OpCounter()
        a, b = 2 ** 80 + 12345, 3 ** 50
        assert mod_mul(ctx, from_int(a), from_int(b), counter).to_int() == a * b % M
        assert counter.mont_muls == 4

    def test_reduce(self):
        ctx = context_new(from_int(1009))
        assert reduce(ctx, from_int(10 ** 20)).to_int() == 10 ** 20 % 1009
        assert reduce(ctx, from_int(5)).to_int() == 5

    def test_counter_merge(self):
        a = OpCounter(mont_muls=2, inner_iterations=10)
        b = OpCounter(mont_muls=3, inner_iterations=5, squarings=1)
        a.merge(b)
        assert a.to_dict() == {"mont_muls": 5, "inner_iterations": 15, "squarings": 1,
                               "multiplies": 0, "conversions": 0}
        a.reset()
        assert a.mont_muls == 0


class TestKnownValues:
    """Small moduli worked by hand."""

    def test_modulus_97_radix_16(self):
        ctx = context_new(from_int(97, 4), 4)
        assert ctx.word_count == 2
        assert ctx.m_prime == 15
        assert mont_mul(ctx, from_int(5, 4), from_int(9, 4)).to_int() == 68
        assert to_mont(ctx, from_int(1, 4)).value.to_int() == 62
        assert from_mont(ctx, from_int(62, 4)).to_int() == 1

    def test_smallest_modulus(self):
        ctx = context_new(from_int(3, 4), 4)
        assert ctx.m_prime == 5

    @pytest.mark.parametrize("k", [4, 32])
    def test_toy_paillier_square_modulus(self, k):
        ctx = context_new(from_int(1225, k), k)
        assert mod_exp(ctx, from_int(2, k), from_int(35, k)).to_int() == 18
        assert mod_mul(ctx, from_int(106, k), from_int(18, k)).to_int() == 683


class TestAlgebraicProperties:
    """Identities that must hold for any odd modulus and radix."""

    @pytest.mark.parametrize("k", [4, 8, 16, 32])
    def test_product_through_domain(self, k):
        rng = random.Random(900 + k)
        for bits in (9, 61, 200):
            M = _odd_modulus(rng, bits)
            ctx = context_new(from_int(M, k), k)
            for _ in range(20):
                a, b = rng.randrange(M), rng.randrange(M)
                product = mont_mul(ctx, to_mont(ctx, from_int(a, k)).value, to_mont(ctx, from_int(b, k)).value)
                assert from_mont(ctx, product).to_int() == a * b % M

    @pytest.mark.parametrize("k", [8, 32])
    def test_exponents_add(self, k):
        rng = random.Random(1700 + k)
        for bits in (33, 128):
            M = _odd_modulus(rng, bits)
            ctx = context_new(from_int(M, k), k)
            for _ in range(10):
                x = from_int(rng.randrange(M), k)
                e1, e2 = rng.getrandbits(bits), rng.getrandbits(bits // 2)
                combined = mod_exp(ctx, x, from_int(e1 + e2, k))
                split = mod_mul(ctx, mod_exp(ctx, x, from_int(e1, k)), mod_exp(ctx, x, from_int(e2, k)))
                assert combined == split


@pytest.mark.slow
class TestOracleGrid:
    """Ten thousand random operand pairs per modulus size."""

    @pytest.mark.parametrize("bits", [256, 512, 1024, 2048])
    def test_random_instances(self, bits):
        rng = random.Random(bits)
        M = _odd_modulus(rng, bits)
        ctx = context_new(from_int(M))
        r_inv = pow(2 ** ctx.l, -1, M)
        for _ in range(10_000):
            x, y = rng.randrange(M), rng.randrange(M)
            assert mont_mul(ctx, from_int(x), from_int(y)).to_int() == x * y * r_inv % M
