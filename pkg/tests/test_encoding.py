"""Fixed-point encoding, encrypted arithmetic on encoded values, sparse storage."""

import math

import pytest

from paillier_accel.arith.bigint import BigUint, from_int, sub
from paillier_accel.crypto.encoding import (
    EncodedNumber,
    align,
    align_ciphertexts,
    decode,
    decrypt_value,
    densify,
    encode,
    encrypt_value,
    multiply_encoded,
    signed_mantissa,
    sparsify,
)
from paillier_accel.crypto.paillier import add_cipher
from paillier_accel.errors import EncodingOverflowError


class TestEncode:

    @pytest.mark.parametrize("value", [0, 1, -1, 123456, -987654321])
    def test_integers_are_exact(self, small_keypair, value):
        pk, _ = small_keypair
        encoded = encode(value, pk)
        assert encoded.exponent == 0
        assert decode(encoded, pk) == value

    @pytest.mark.parametrize("value", [0.5, -0.125, 3.14159, -2.718281828, 1e-6, 12345.678])
    def test_floats_round_trip(self, medium_keypair, value):
        pk, _ = medium_keypair
        assert decode(encode(value, pk), pk) == pytest.approx(value, rel=1e-12)

    def test_fixed_exponent_precision(self, small_keypair):
        pk, _ = small_keypair
        encoded = encode(1.0 / 3.0, pk, exponent=-8)
        assert encoded.exponent == -8
        assert abs(decode(encoded, pk) - 1.0 / 3.0) <= 16.0 ** -8

    def test_negative_uses_upper_third(self, toy_keypair):
        pk, _ = toy_keypair
        assert pk.max_int.to_int() == 35 // 3 - 1
        encoded = encode(-4, pk)
        assert encoded.mantissa.to_int() == 31
        assert signed_mantissa(encoded, pk) == -4

    def test_overflow(self, toy_keypair):
        pk, _ = toy_keypair
        encode(10, pk)
        with pytest.raises(EncodingOverflowError):
            encode(11, pk)
        with pytest.raises(EncodingOverflowError):
            encode(-11, pk)

    def test_dead_zone(self, toy_keypair):
        pk, _ = toy_keypair
        with pytest.raises(EncodingOverflowError):
            decode(EncodedNumber(from_int(17), 0), pk)

    def test_non_finite_rejected(self, small_keypair):
        pk, _ = small_keypair
        for value in (math.inf, -math.inf, math.nan):
            with pytest.raises(ValueError):
                encode(value, pk)

    def test_align(self, small_keypair):
        pk, _ = small_keypair
        a = encode(1.5, pk, exponent=-1)
        b = encode(-0.25, pk, exponent=-4)
        a2, b2 = align(a, b, pk)
        assert a2.exponent == b2.exponent == -4
        assert decode(a2, pk) == pytest.approx(1.5)
        assert decode(b2, pk) == pytest.approx(-0.25)


class TestEncryptedValues:

    def test_sum_of_signed_values(self, medium_keypair, rng):
        pk, sk = medium_keypair
        values = [1.25, -3.5, 0.015625, -0.5]
        total = encrypt_value(pk, values[0], exponent=-6, rng=rng)
        for v in values[1:]:
            total = add_cipher(pk, total, encrypt_value(pk, v, exponent=-6, rng=rng))
        assert decrypt_value(sk, pk, total) == pytest.approx(sum(values), abs=1e-9)

    def test_align_ciphertexts_then_add(self, medium_keypair, rng):
        pk, sk = medium_keypair
        c1 = encrypt_value(pk, 2.0, exponent=-1, rng=rng)
        c2 = encrypt_value(pk, -0.75, exponent=-3, rng=rng)
        c1, c2 = align_ciphertexts(pk, c1, c2)
        assert c1.exponent == c2.exponent == -3
        assert decrypt_value(sk, pk, add_cipher(pk, c1, c2)) == pytest.approx(1.25)

    def test_multiply_by_encoded_scalar(self, medium_keypair, rng):
        pk, sk = medium_keypair
        c = encrypt_value(pk, -1.5, exponent=-2, rng=rng)
        product = multiply_encoded(pk, c, encode(0.5, pk, exponent=-1))
        assert product.exponent == -3
        assert decrypt_value(sk, pk, product) == pytest.approx(-0.75)


class TestSparseWords:

    def test_round_trip_and_reduction(self):
        value = BigUint((7, 0, 0, 0, 9, 0, 0, 1), 8)
        sparse = sparsify(value, total_words=16)
        assert sparse.pairs == ((0, 7), (4, 9), (7, 1))
        assert sparse.memory_reduction == pytest.approx(1 - 3 / 16)
        assert densify(sparse) == value

    def test_zero(self):
        sparse = sparsify(from_int(0), total_words=4)
        assert sparse.pairs == ()
        assert densify(sparse).is_zero()

    def test_total_too_small(self):
        with pytest.raises(ValueError):
            sparsify(from_int(2 ** 70), total_words=1)

    def test_negative_mantissa_is_dense(self, small_keypair):
        pk, _ = small_keypair
        mantissa = encode(-1, pk).mantissa
        assert mantissa == sub(pk.n, from_int(1))
        assert densify(sparsify(mantissa)) == mantissa
