"""Arbitrary-precision unsigned integers over k-bit words.

Values are little-endian tuples of words (index j holds the j-th radix digit).
All arithmetic happens word by word on machine-sized Python ints; no
big-integer shortcut is taken, because the word structure is what the
Montgomery core and the hardware model reason about.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from paillier_accel.errors import (
    BigIntUnderflowError,
    DivisionByZeroError,
    NotInvertibleError,
)

DEFAULT_WORD_BITS = 32
SUPPORTED_WORD_BITS = (4, 8, 16, 32)

# Operand size in words at or below which Karatsuba falls back to one base product.
_karatsuba_threshold = 1

IntLike = Union["BigUint", int]


def _trim(words: List[int]) -> List[int]:
    while words and words[-1] == 0:
        words.pop()
    return words


def _check_word_bits(word_bits: int) -> None:
    if word_bits not in SUPPORTED_WORD_BITS:
        raise ValueError(f"Unsupported word size {word_bits}; expected one of {SUPPORTED_WORD_BITS}")


@dataclass(frozen=True)
class BigUint:
    """Canonical unsigned integer: no most-significant zero words, zero is ``()``."""
    words: Tuple[int, ...] = ()
    word_bits: int = DEFAULT_WORD_BITS

    def __post_init__(self):
        """Validate words and normalize to canonical form."""
        _check_word_bits(self.word_bits)
        limit = 1 << self.word_bits
        words = [int(w) for w in self.words]
        for index, word in enumerate(words):
            if word < 0 or word >= limit:
                raise ValueError(f"Word {index} = {word} outside [0, 2^{self.word_bits})")
        object.__setattr__(self, "words", tuple(_trim(words)))

    @classmethod
    def _raw(cls, words: Sequence[int], word_bits: int) -> "BigUint":
        """Build from words already known to be valid, trimming only."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "words", tuple(_trim(list(words))))
        object.__setattr__(obj, "word_bits", word_bits)
        return obj

    # Conversions

    @classmethod
    def from_int(cls, value: int, word_bits: int = DEFAULT_WORD_BITS) -> "BigUint":
        return from_int(value, word_bits)

    @classmethod
    def from_hex(cls, text: str, word_bits: int = DEFAULT_WORD_BITS) -> "BigUint":
        return from_hex(text, word_bits)

    @classmethod
    def from_bytes(cls, data: bytes, word_bits: int = DEFAULT_WORD_BITS) -> "BigUint":
        return from_bytes(data, word_bits)

    def to_int(self) -> int:
        return to_int(self)

    def to_hex(self) -> str:
        return to_hex(self)

    def to_bytes(self, length: Optional[int] = None) -> bytes:
        return to_bytes(self, length)

    def rebase(self, word_bits: int) -> "BigUint":
        return rebase(self, word_bits)

    # Queries

    @property
    def mask(self) -> int:
        return (1 << self.word_bits) - 1

    def is_zero(self) -> bool:
        return not self.words

    def is_odd(self) -> bool:
        return bool(self.words) and (self.words[0] & 1) == 1

    def bit_length(self) -> int:
        return bit_length(self)

    def popcount(self) -> int:
        return popcount(self)

    def test_bit(self, index: int) -> bool:
        return test_bit(self, index)

    def __bool__(self) -> bool:
        return bool(self.words)

    def __int__(self) -> int:
        return to_int(self)

    def __repr__(self) -> str:
        return f"BigUint(0x{to_hex(self)}, k={self.word_bits})"

    # Operators delegate to the module functions

    def _coerce(self, other: IntLike) -> "BigUint":
        if isinstance(other, BigUint):
            if other.word_bits != self.word_bits:
                return other.rebase(self.word_bits)
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return from_int(other, self.word_bits)
        return NotImplemented

    def __add__(self, other: IntLike) -> "BigUint":
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, other)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "BigUint":
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(self, other)

    def __rsub__(self, other: IntLike) -> "BigUint":
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(other, self)

    def __mul__(self, other: IntLike) -> "BigUint":
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else mul_karatsuba(self, other)

    __rmul__ = __mul__

    def __floordiv__(self, other: IntLike) -> "BigUint":
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else div_rem(self, other)[0]

    def __mod__(self, other: IntLike) -> "BigUint":
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else div_rem(self, other)[1]

    def __divmod__(self, other: IntLike) -> Tuple["BigUint", "BigUint"]:
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else div_rem(self, other)

    def __lshift__(self, shift: int) -> "BigUint":
        return shl_bits(self, shift)

    def __rshift__(self, shift: int) -> "BigUint":
        return shr_bits(self, shift)

    def _compare(self, other: IntLike) -> int:
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            raise TypeError(f"Cannot compare BigUint with {type(other).__name__}")
        return cmp(self, coerced)

    def __lt__(self, other: IntLike) -> bool:
        return self._compare(other) < 0

    def __le__(self, other: IntLike) -> bool:
        return self._compare(other) <= 0

    def __gt__(self, other: IntLike) -> bool:
        return self._compare(other) > 0

    def __ge__(self, other: IntLike) -> bool:
        return self._compare(other) >= 0


def zero(word_bits: int = DEFAULT_WORD_BITS) -> BigUint:
    return BigUint._raw((), word_bits)


def one(word_bits: int = DEFAULT_WORD_BITS) -> BigUint:
    return BigUint._raw((1,), word_bits)


def _same_radix(a: BigUint, b: BigUint) -> int:
    if a.word_bits != b.word_bits:
        raise ValueError(f"Word size mismatch: {a.word_bits} vs {b.word_bits}")
    return a.word_bits


# Conversions

def from_int(value: int, word_bits: int = DEFAULT_WORD_BITS) -> BigUint:
    """Split a non-negative Python int into k-bit words."""
    _check_word_bits(word_bits)
    if value < 0:
        raise ValueError(f"BigUint cannot hold negative value {value}")
    mask = (1 << word_bits) - 1
    words = []
    while value:
        words.append(value & mask)
        value >>= word_bits
    return BigUint._raw(words, word_bits)


def to_int(a: BigUint) -> int:
    acc = 0
    for word in reversed(a.words):
        acc = (acc << a.word_bits) | word
    return acc


def to_hex(a: BigUint) -> str:
    """Big-endian hexadecimal text without prefix; zero is ``"0"``."""
    if not a.words:
        return "0"
    digits = a.word_bits // 4
    text = "".join(f"{word:0{digits}x}" for word in reversed(a.words))
    return text.lstrip("0") or "0"


def from_hex(text: str, word_bits: int = DEFAULT_WORD_BITS) -> BigUint:
    _check_word_bits(word_bits)
    cleaned = text.strip().lower()
    if cleaned.startswith("0x"):
        cleaned = cleaned[2:]
    if not cleaned or any(ch not in "0123456789abcdef" for ch in cleaned):
        raise ValueError(f"Invalid hex string: {text!r}")
    digits = word_bits // 4
    words = []
    end = len(cleaned)
    while end > 0:
        start = max(0, end - digits)
        words.append(int(cleaned[start:end], 16))
        end = start
    return BigUint._raw(words, word_bits)


def _restream(words: Iterable[int], in_bits: int, out_bits: int) -> List[int]:
    """Regroup a little-endian digit stream into digits of another width."""
    out_mask = (1 << out_bits) - 1
    out: List[int] = []
    acc = 0
    acc_bits = 0
    for word in words:
        acc |= word << acc_bits
        acc_bits += in_bits
        while acc_bits >= out_bits:
            out.append(acc & out_mask)
            acc >>= out_bits
            acc_bits -= out_bits
    if acc_bits > 0 and acc:
        out.append(acc)
    return out


def to_bytes(a: BigUint, length: Optional[int] = None) -> bytes:
    """Raw little-endian bytes; zero-padded to ``length`` when given."""
    data = _restream(a.words, a.word_bits, 8)
    _trim(data)
    if length is not None:
        if len(data) > length:
            raise OverflowError(f"Value needs {len(data)} bytes, only {length} allowed")
        data.extend([0] * (length - len(data)))
    return bytes(data)


def from_bytes(data: bytes, word_bits: int = DEFAULT_WORD_BITS) -> BigUint:
    _check_word_bits(word_bits)
    return BigUint._raw(_restream(data, 8, word_bits), word_bits)


def rebase(a: BigUint, word_bits: int) -> BigUint:
    """Same value expressed in a different word size."""
    _check_word_bits(word_bits)
    if word_bits == a.word_bits:
        return a
    return BigUint._raw(_restream(a.words, a.word_bits, word_bits), word_bits)


# Queries

def bit_length(a: BigUint) -> int:
    if not a.words:
        return 0
    return (len(a.words) - 1) * a.word_bits + a.words[-1].bit_length()


def popcount(a: BigUint) -> int:
    return sum(bin(word).count("1") for word in a.words)


def test_bit(a: BigUint, index: int) -> bool:
    word_index, bit = divmod(index, a.word_bits)
    if word_index >= len(a.words):
        return False
    return bool((a.words[word_index] >> bit) & 1)


def trailing_zero_bits(a: BigUint) -> int:
    if not a.words:
        return 0
    count = 0
    for word in a.words:
        if word == 0:
            count += a.word_bits
            continue
        return count + ((word & -word).bit_length() - 1)
    return count


def iter_bits_msb(a: BigUint) -> Iterator[int]:
    """Yield the bits of ``a`` from the most significant set bit down to bit 0."""
    top = bit_length(a)
    k = a.word_bits
    for index in range(top - 1, -1, -1):
        yield (a.words[index // k] >> (index % k)) & 1


def cmp(a: BigUint, b: BigUint) -> int:
    """Return -1, 0 or 1 as a is less than, equal to or greater than b."""
    _same_radix(a, b)
    return _cmp_words(a.words, b.words)


def _cmp_words(x: Sequence[int], y: Sequence[int]) -> int:
    lx, ly = len(x), len(y)
    while lx and x[lx - 1] == 0:
        lx -= 1
    while ly and y[ly - 1] == 0:
        ly -= 1
    if lx != ly:
        return -1 if lx < ly else 1
    for index in range(lx - 1, -1, -1):
        if x[index] != y[index]:
            return -1 if x[index] < y[index] else 1
    return 0


# Addition and subtraction

def _add_words(x: Sequence[int], y: Sequence[int], k: int) -> List[int]:
    if len(x) < len(y):
        x, y = y, x
    mask = (1 << k) - 1
    out = []
    carry = 0
    for index in range(len(x)):
        t = x[index] + (y[index] if index < len(y) else 0) + carry
        out.append(t & mask)
        carry = t >> k
    if carry:
        out.append(carry)
    return _trim(out)


def _sub_words(x: Sequence[int], y: Sequence[int], k: int) -> List[int]:
    """x - y for x >= y (caller guarantees the ordering)."""
    mask = (1 << k) - 1
    out = []
    borrow = 0
    for index in range(len(x)):
        t = x[index] - (y[index] if index < len(y) else 0) - borrow
        if t < 0:
            t += 1 << k
            borrow = 1
        else:
            borrow = 0
        out.append(t & mask)
    if borrow or any(y[index] for index in range(len(x), len(y))):
        raise BigIntUnderflowError("Subtraction underflow")
    return _trim(out)


def add(a: BigUint, b: BigUint) -> BigUint:
    k = _same_radix(a, b)
    return BigUint._raw(_add_words(a.words, b.words, k), k)


def sub(a: BigUint, b: BigUint) -> BigUint:
    k = _same_radix(a, b)
    if _cmp_words(a.words, b.words) < 0:
        raise BigIntUnderflowError(f"Cannot subtract {to_hex(b)} from smaller {to_hex(a)}")
    return BigUint._raw(_sub_words(a.words, b.words, k), k)


# Multiplication

class KaratsubaCounter:
    """Counts base-case word products issued by the Karatsuba recursion."""

    def __init__(self):
        self.base_multiplications = 0
        self.recursions = 0

    def reset(self) -> None:
        self.base_multiplications = 0
        self.recursions = 0


def _schoolbook_words(x: Sequence[int], y: Sequence[int], k: int) -> List[int]:
    if not x or not y:
        return []
    mask = (1 << k) - 1
    ny = len(y)
    out = [0] * (len(x) + ny)
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        carry = 0
        for j in range(ny):
            t = out[i + j] + xi * y[j] + carry
            out[i + j] = t & mask
            carry = t >> k
        out[i + ny] = carry
    return _trim(out)


def mul_schoolbook(a: BigUint, b: BigUint) -> BigUint:
    k = _same_radix(a, b)
    return BigUint._raw(_schoolbook_words(a.words, b.words, k), k)


def _shift_words(x: List[int], count: int) -> List[int]:
    return [0] * count + x if x else []


def _karatsuba_words(x: Sequence[int], y: Sequence[int], n: int, k: int,
                     threshold: int, counter: Optional[KaratsubaCounter]) -> List[int]:
    """Product of operands whose nominal length is ``n`` words.

    Halves are split at ceil(n/2) by nominal length so the recursion tree
    depends only on ``n``, not on the operand values.
    """
    if n <= threshold:
        if counter is not None:
            counter.base_multiplications += 1
        return _schoolbook_words(_trim(list(x)), _trim(list(y)), k)
    if counter is not None:
        counter.recursions += 1
    half = (n + 1) // 2
    xl, xh = list(x[:half]), list(x[half:])
    yl, yh = list(y[:half]), list(y[half:])
    hh = _karatsuba_words(xh, yh, n - half, k, threshold, counter)
    ll = _karatsuba_words(xl, yl, half, k, threshold, counter)
    hl = _karatsuba_words(_add_words(xl, xh, k), _add_words(yl, yh, k), half, k, threshold, counter)
    cross = _add_words(hh, ll, k)
    assert _cmp_words(hl, cross) >= 0, "Karatsuba middle term went negative"
    middle = _sub_words(hl, cross, k)
    out = _add_words(ll, _shift_words(middle, half), k)
    return _add_words(out, _shift_words(hh, 2 * half), k)


def set_karatsuba_threshold(words: int) -> int:
    """Set the default base-case size of ``mul_karatsuba``; returns the previous value."""
    global _karatsuba_threshold
    if words < 1:
        raise ValueError(f"Karatsuba threshold must be at least 1 word, got {words}")
    previous, _karatsuba_threshold = _karatsuba_threshold, words
    return previous


def get_karatsuba_threshold() -> int:
    return _karatsuba_threshold


def mul_karatsuba(a: BigUint, b: BigUint, threshold: Optional[int] = None,
                  counter: Optional[KaratsubaCounter] = None) -> BigUint:
    """Karatsuba product: S = HH·B^(2h) + (HL − HH − LL)·B^h + LL with h = ceil(n/2)."""
    k = _same_radix(a, b)
    if threshold is None:
        threshold = _karatsuba_threshold
    if threshold < 1:
        raise ValueError(f"Karatsuba threshold must be at least 1 word, got {threshold}")
    if not a.words or not b.words:
        return zero(k)
    n = max(len(a.words), len(b.words))
    return BigUint._raw(_karatsuba_words(a.words, b.words, n, k, threshold, counter), k)


# Division

def _div_word(x: Sequence[int], d: int, k: int) -> Tuple[List[int], int]:
    quotient = [0] * len(x)
    rem = 0
    for index in range(len(x) - 1, -1, -1):
        cur = (rem << k) | x[index]
        quotient[index] = cur // d
        rem = cur - quotient[index] * d
    return _trim(quotient), rem


def mod_word(a: BigUint, d: int) -> int:
    """Remainder of ``a`` by a single machine word (trial division helper)."""
    if d <= 0:
        raise DivisionByZeroError("Division by zero")
    rem = 0
    for word in reversed(a.words):
        rem = ((rem << a.word_bits) | word) % d
    return rem


def _shl_words_bits(x: Sequence[int], shift: int, k: int) -> List[int]:
    """Shift left by fewer than k bits, keeping the overflow word."""
    if shift == 0:
        return list(x)
    mask = (1 << k) - 1
    out = []
    carry = 0
    for word in x:
        out.append(((word << shift) & mask) | carry)
        carry = word >> (k - shift)
    out.append(carry)
    return out


def _shr_words_bits(x: Sequence[int], shift: int, k: int) -> List[int]:
    if shift == 0:
        return list(x)
    mask = (1 << k) - 1
    out = []
    for index, word in enumerate(x):
        upper = x[index + 1] if index + 1 < len(x) else 0
        out.append(((word >> shift) | (upper << (k - shift))) & mask)
    return out


def div_rem(a: BigUint, d: BigUint) -> Tuple[BigUint, BigUint]:
    """Normalized long division (Knuth Algorithm D)."""
    k = _same_radix(a, d)
    if not d.words:
        raise DivisionByZeroError("Division by zero")
    if _cmp_words(a.words, d.words) < 0:
        return zero(k), a
    if len(d.words) == 1:
        quotient, rem = _div_word(a.words, d.words[0], k)
        return BigUint._raw(quotient, k), BigUint._raw([rem], k)

    base = 1 << k
    mask = base - 1
    shift = k - d.words[-1].bit_length()
    v = _shl_words_bits(d.words, shift, k)[:len(d.words)]
    u = _shl_words_bits(a.words, shift, k)
    if len(u) == len(a.words):
        u.append(0)
    n = len(v)
    m = len(u) - n - 1
    quotient = [0] * (m + 1)
    v_top, v_next = v[-1], v[-2]

    for j in range(m, -1, -1):
        numerator = (u[j + n] << k) | u[j + n - 1]
        qhat, rhat = divmod(numerator, v_top)
        while qhat >= base or qhat * v_next > ((rhat << k) | u[j + n - 2]):
            qhat -= 1
            rhat += v_top
            if rhat >= base:
                break

        # u[j..j+n] -= qhat * v
        borrow = 0
        carry = 0
        for i in range(n):
            product = qhat * v[i] + carry
            carry = product >> k
            t = u[i + j] - (product & mask) - borrow
            borrow = 1 if t < 0 else 0
            u[i + j] = t & mask
        t = u[j + n] - carry - borrow
        borrow = 1 if t < 0 else 0
        u[j + n] = t & mask

        if borrow:
            # qhat was one too large; add v back
            qhat -= 1
            carry = 0
            for i in range(n):
                t = u[i + j] + v[i] + carry
                u[i + j] = t & mask
                carry = t >> k
            u[j + n] = (u[j + n] + carry) & mask
        quotient[j] = qhat

    remainder = _shr_words_bits(u[:n], shift, k)
    return BigUint._raw(quotient, k), BigUint._raw(remainder, k)


# Shifts

def shl_bits(a: BigUint, shift: int) -> BigUint:
    if shift < 0:
        raise ValueError(f"Negative shift {shift}")
    if not a.words:
        return a
    word_shift, bit_shift = divmod(shift, a.word_bits)
    shifted = _shl_words_bits(a.words, bit_shift, a.word_bits)
    return BigUint._raw([0] * word_shift + shifted, a.word_bits)


def shr_bits(a: BigUint, shift: int) -> BigUint:
    if shift < 0:
        raise ValueError(f"Negative shift {shift}")
    word_shift, bit_shift = divmod(shift, a.word_bits)
    if word_shift >= len(a.words):
        return zero(a.word_bits)
    return BigUint._raw(_shr_words_bits(a.words[word_shift:], bit_shift, a.word_bits), a.word_bits)


# Number theory

def gcd(a: BigUint, b: BigUint) -> BigUint:
    _same_radix(a, b)
    while b.words:
        a, b = b, div_rem(a, b)[1]
    return a


def lcm(a: BigUint, b: BigUint) -> BigUint:
    k = _same_radix(a, b)
    if not a.words or not b.words:
        return zero(k)
    return mul_karatsuba(div_rem(a, gcd(a, b))[0], b)


def mod_inverse(a: BigUint, m: BigUint) -> BigUint:
    """x with a·x ≡ 1 (mod m) and 0 < x < m.

    Extended Euclid with the Bezout coefficient of ``a`` kept reduced mod m,
    so no signed arithmetic is needed.
    """
    k = _same_radix(a, m)
    if not m.words:
        raise DivisionByZeroError("Inverse modulo zero")
    if m.words == (1,):
        raise NotInvertibleError("No inverse modulo 1 in (0, m)")
    r0, r1 = m, div_rem(a, m)[1]
    t0, t1 = zero(k), one(k)
    while r1.words:
        quotient, remainder = div_rem(r0, r1)
        # t0 - quotient * t1 (mod m)
        step = div_rem(mul_karatsuba(quotient, t1), m)[1]
        if _cmp_words(t0.words, step.words) >= 0:
            t_next = sub(t0, step)
        else:
            t_next = sub(add(t0, m), step)
        r0, r1 = r1, remainder
        t0, t1 = t1, t_next
    if r0.words != (1,):
        raise NotInvertibleError(f"{to_hex(a)} is not invertible modulo {to_hex(m)} (gcd = {to_hex(r0)})")
    return t0


# Randomness

def random_bits(rng, bits: int, word_bits: int = DEFAULT_WORD_BITS) -> BigUint:
    """Uniform value below 2^bits drawn from ``rng.getrandbits``."""
    _check_word_bits(word_bits)
    if bits <= 0:
        return zero(word_bits)
    full, extra = divmod(bits, word_bits)
    words = [rng.getrandbits(word_bits) for _ in range(full)]
    if extra:
        words.append(rng.getrandbits(extra))
    return BigUint._raw(words, word_bits)


def random_below(rng, bound: BigUint) -> BigUint:
    """Uniform value in [0, bound) by rejection sampling."""
    if not bound.words:
        raise ValueError("random_below needs a positive bound")
    bits = bit_length(bound)
    while True:
        candidate = random_bits(rng, bits, bound.word_bits)
        if _cmp_words(candidate.words, bound.words) < 0:
            return candidate
