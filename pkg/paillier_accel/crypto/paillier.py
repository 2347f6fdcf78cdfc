"""Paillier cryptosystem on top of the Montgomery core.

Every modular exponentiation and multiplication goes through
``paillier_accel.arith.montgomery`` so operation counts match the modeled
hardware workload.
"""

import secrets
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Optional, Tuple

from loguru import logger

from paillier_accel.arith.bigint import (
    DEFAULT_WORD_BITS,
    BigUint,
    bit_length,
    cmp,
    div_rem,
    from_hex,
    gcd,
    lcm,
    mod_inverse,
    random_below,
    sub,
)
from paillier_accel.arith.montgomery import (
    MontgomeryContext,
    OpCounter,
    context_new,
    mod_exp,
    mod_mul,
)
from paillier_accel.crypto.primes import DEFAULT_ROUNDS, generate_prime
from paillier_accel.errors import (
    ExponentMismatchError,
    KeyValidationError,
    MalformedCiphertextError,
    MessageTooLargeError,
    NotCoprimeError,
    NotInvertibleError,
    PrimeSearchExhaustedError,
)

MAX_KEY_ATTEMPTS = 16
MAX_COPRIME_DRAWS = 1000


@dataclass(frozen=True)
class PublicKey:
    """Public key (n, g) with g = n + 1."""
    n: BigUint
    g: BigUint
    n_squared: BigUint
    bit_length: int

    @cached_property
    def n2_context(self) -> MontgomeryContext:
        return context_new(self.n_squared, self.n_squared.word_bits)

    @cached_property
    def n_context(self) -> MontgomeryContext:
        return context_new(self.n, self.n.word_bits)

    @cached_property
    def max_int(self) -> BigUint:
        """Largest magnitude kept out of the overflow dead zone: n // 3 - 1."""
        return sub(div_rem(self.n, BigUint._raw((3,), self.n.word_bits))[0], BigUint._raw((1,), self.n.word_bits))

    def to_dict(self) -> Dict[str, Any]:
        return {"key_bits": self.bit_length, "n": self.n.to_hex(), "g": self.g.to_hex()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], word_bits: int = DEFAULT_WORD_BITS) -> "PublicKey":
        try:
            n = from_hex(data["n"], word_bits)
            g = from_hex(data["g"], word_bits)
        except KeyError as e:
            raise KeyValidationError(f"Public key document missing field {e}") from e
        key = public_key_from_n(n)
        if key.g != g:
            raise KeyValidationError("Public key generator must be n + 1")
        if "key_bits" in data and int(data["key_bits"]) != key.bit_length:
            raise KeyValidationError(f"key_bits {data['key_bits']} does not match n ({key.bit_length} bits)")
        return key


@dataclass(frozen=True)
class PrivateKey:
    """Private key (λ, μ); p and q are kept for validation only."""
    lam: BigUint
    mu: BigUint
    p: BigUint
    q: BigUint

    def validate(self, public_key: PublicKey) -> None:
        """Check n = p·q, λ = lcm(p-1, q-1) and μ·L(g^λ mod n²) ≡ 1 (mod n)."""
        unit = BigUint._raw((1,), self.p.word_bits)
        if self.p * self.q != public_key.n:
            raise KeyValidationError("p·q does not match the public modulus")
        if lcm(sub(self.p, unit), sub(self.q, unit)) != self.lam:
            raise KeyValidationError("lambda is not lcm(p-1, q-1)")
        u = mod_exp(public_key.n2_context, public_key.g, self.lam)
        check = mod_mul(public_key.n_context, _l_function(u, public_key.n), self.mu)
        if check != unit:
            raise KeyValidationError("mu is not the inverse of L(g^lambda mod n^2)")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": self.lam.to_hex(),
            "mu": self.mu.to_hex(),
            "p": self.p.to_hex(),
            "q": self.q.to_hex(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], word_bits: int = DEFAULT_WORD_BITS) -> "PrivateKey":
        try:
            return cls(
                lam=from_hex(data["lambda"], word_bits),
                mu=from_hex(data["mu"], word_bits),
                p=from_hex(data["p"], word_bits),
                q=from_hex(data["q"], word_bits),
            )
        except KeyError as e:
            raise KeyValidationError(f"Private key document missing field {e}") from e


@dataclass(frozen=True)
class Ciphertext:
    """Encrypted value below n², tagged with the fixed-point exponent of its plaintext."""
    value: BigUint
    exponent: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value.to_hex(), "exponent": self.exponent}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], word_bits: int = DEFAULT_WORD_BITS) -> "Ciphertext":
        return cls(value=from_hex(data["value"], word_bits), exponent=int(data.get("exponent", 0)))


def _l_function(u: BigUint, n: BigUint) -> BigUint:
    """L(u) = (u - 1) / n, which must divide exactly."""
    if u.is_zero():
        raise MalformedCiphertextError("L-function input is zero")
    quotient, remainder = div_rem(sub(u, BigUint._raw((1,), u.word_bits)), n)
    if not remainder.is_zero():
        raise MalformedCiphertextError("L-function division left a nonzero remainder")
    return quotient


def public_key_from_n(n: BigUint) -> PublicKey:
    if not n.is_odd():
        raise KeyValidationError("Public modulus n must be odd")
    return PublicKey(n=n, g=n + 1, n_squared=n * n, bit_length=bit_length(n))


def keypair_from_primes(p: BigUint, q: BigUint) -> Tuple[PublicKey, PrivateKey]:
    """Build a keypair from known primes (primality is the caller's responsibility)."""
    if p == q:
        raise KeyValidationError("p and q must be distinct")
    if p.word_bits != q.word_bits:
        q = q.rebase(p.word_bits)
    unit = BigUint._raw((1,), p.word_bits)
    pk = public_key_from_n(p * q)
    lam = lcm(sub(p, unit), sub(q, unit))
    if gcd(lam, pk.n) != unit:
        raise KeyValidationError("gcd(lambda, n) != 1")
    u = mod_exp(pk.n2_context, pk.g, lam)
    try:
        mu = mod_inverse(div_rem(_l_function(u, pk.n), pk.n)[1], pk.n)
    except NotInvertibleError as e:
        raise KeyValidationError(f"L(g^lambda) is not invertible mod n: {e}") from e
    return pk, PrivateKey(lam=lam, mu=mu, p=p, q=q)


def keygen(bits: int, rng=None, *, rounds: int = DEFAULT_ROUNDS,
           max_prime_attempts: Optional[int] = None,
           word_bits: int = DEFAULT_WORD_BITS) -> Tuple[PublicKey, PrivateKey]:
    """Generate a keypair whose modulus n has exactly ``bits`` bits."""
    if bits < 16 or bits % 2:
        raise ValueError(f"Key size must be even and at least 16 bits, got {bits}")
    rng = rng if rng is not None else secrets.SystemRandom()
    half = bits // 2
    for attempt in range(1, MAX_KEY_ATTEMPTS + 1):
        p = generate_prime(half, rng, rounds, max_prime_attempts, word_bits)
        q = generate_prime(half, rng, rounds, max_prime_attempts, word_bits)
        if p == q:
            logger.warning(f"Drew identical primes on attempt {attempt}, retrying")
            continue
        try:
            pk, sk = keypair_from_primes(p, q)
        except KeyValidationError as e:
            logger.warning(f"Rejected prime pair on attempt {attempt}: {e}")
            continue
        if pk.bit_length != bits:
            logger.warning(f"Modulus has {pk.bit_length} bits instead of {bits}, retrying")
            continue
        unit = BigUint._raw((1,), word_bits)
        if decrypt(sk, pk, encrypt(pk, unit, rng=rng)) != unit:
            raise KeyValidationError("Generated key failed the encrypt/decrypt self-test")
        logger.info(f"Generated {bits}-bit Paillier key after {attempt} attempt(s)")
        return pk, sk
    raise PrimeSearchExhaustedError(f"Could not build a {bits}-bit key in {MAX_KEY_ATTEMPTS} attempts")


def random_coprime(pk: PublicKey, rng=None) -> BigUint:
    """Uniform r in [1, n) with gcd(r, n) = 1."""
    rng = rng if rng is not None else secrets.SystemRandom()
    unit = BigUint._raw((1,), pk.n.word_bits)
    for _ in range(MAX_COPRIME_DRAWS):
        r = random_below(rng, pk.n)
        if r.is_zero():
            continue
        if gcd(r, pk.n) == unit:
            return r
        logger.warning("Rejected randomness sharing a factor with n")
    raise NotCoprimeError(f"No coprime randomness found in {MAX_COPRIME_DRAWS} draws")


def _check_randomness(pk: PublicKey, r: BigUint) -> BigUint:
    if r.word_bits != pk.n.word_bits:
        r = r.rebase(pk.n.word_bits)
    if r.is_zero() or cmp(r, pk.n) >= 0:
        raise ValueError(f"Randomness must lie in [1, n), got 0x{r.to_hex()}")
    if gcd(r, pk.n) != BigUint._raw((1,), pk.n.word_bits):
        raise NotCoprimeError("Randomness shares a factor with n")
    return r


def _generator_power(pk: PublicKey, m: BigUint, fast: bool,
                     counter: Optional[OpCounter]) -> BigUint:
    if fast:
        # (n + 1)^m = 1 + m·n mod n²
        return div_rem(m * pk.n + 1, pk.n_squared)[1]
    return mod_exp(pk.n2_context, pk.g, m, counter)


def encrypt(pk: PublicKey, m: BigUint, r: Optional[BigUint] = None, rng=None, *,
            exponent: int = 0, fast_generator_power: bool = False,
            counter: Optional[OpCounter] = None) -> Ciphertext:
    """c = g^m · r^n mod n²."""
    if m.word_bits != pk.n.word_bits:
        m = m.rebase(pk.n.word_bits)
    if cmp(m, pk.n) >= 0:
        raise MessageTooLargeError(f"Plaintext of {bit_length(m)} bits is not below n")
    r = random_coprime(pk, rng) if r is None else _check_randomness(pk, r)
    ctx = pk.n2_context
    gm = _generator_power(pk, m, fast_generator_power, counter)
    rn = mod_exp(ctx, r, pk.n, counter)
    return Ciphertext(mod_mul(ctx, gm, rn, counter), exponent)


def decrypt(sk: PrivateKey, pk: PublicKey, c: Ciphertext,
            counter: Optional[OpCounter] = None) -> BigUint:
    """m = L(c^λ mod n²) · μ mod n."""
    value = c.value if c.value.word_bits == pk.n.word_bits else c.value.rebase(pk.n.word_bits)
    if cmp(value, pk.n_squared) >= 0:
        raise MalformedCiphertextError("Ciphertext is not below n^2")
    u = mod_exp(pk.n2_context, value, sk.lam, counter)
    return mod_mul(pk.n_context, _l_function(u, pk.n), sk.mu, counter)


def add_cipher(pk: PublicKey, c1: Ciphertext, c2: Ciphertext,
               counter: Optional[OpCounter] = None) -> Ciphertext:
    """Ciphertext of m1 + m2 mod n."""
    if c1.exponent != c2.exponent:
        raise ExponentMismatchError(f"Cannot add ciphertexts with exponents {c1.exponent} and {c2.exponent}")
    return Ciphertext(mod_mul(pk.n2_context, c1.value, c2.value, counter), c1.exponent)


def scalar_mul(pk: PublicKey, c: Ciphertext, s: BigUint,
               counter: Optional[OpCounter] = None) -> Ciphertext:
    """Ciphertext of s·m mod n; the exponent is left unchanged."""
    return Ciphertext(mod_exp(pk.n2_context, c.value, s, counter), c.exponent)


def rerandomize(pk: PublicKey, c: Ciphertext, rng=None,
                counter: Optional[OpCounter] = None) -> Ciphertext:
    """Multiply by a fresh r^n so the ciphertext is unlinkable to its source."""
    rn = mod_exp(pk.n2_context, random_coprime(pk, rng), pk.n, counter)
    return Ciphertext(mod_mul(pk.n2_context, c.value, rn, counter), c.exponent)
