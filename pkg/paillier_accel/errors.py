"""Exception hierarchy shared by every paillier_accel sub-package.

Each concrete error also derives from the closest builtin, so callers that
only care about the category (``ValueError``, ``ArithmeticError``...) can
keep catching builtins.
"""


class PaillierAccelError(Exception):
    """Root of all library errors."""


# Arithmetic

class BigIntUnderflowError(PaillierAccelError, ArithmeticError):
    """Unsigned subtraction would go below zero."""


class DivisionByZeroError(PaillierAccelError, ZeroDivisionError):
    """Division or reduction by a zero divisor."""


class NotInvertibleError(PaillierAccelError, ArithmeticError):
    """Modular inverse requested for a value that shares a factor with the modulus."""


class InvalidModulusError(PaillierAccelError, ValueError):
    """Modulus unusable for Montgomery arithmetic."""


class EvenModulusError(InvalidModulusError):
    """Montgomery reduction needs an odd modulus."""


class OperandNotReducedError(PaillierAccelError, ValueError):
    """Operand is not strictly below the modulus."""


# Cryptosystem

class MessageTooLargeError(PaillierAccelError, ValueError):
    """Plaintext is not below n."""


class NotCoprimeError(PaillierAccelError, ValueError):
    """Randomness shares a factor with n."""


class MalformedCiphertextError(PaillierAccelError, ValueError):
    """Ciphertext does not decrypt cleanly (out of range or non-exact L division)."""


class ExponentMismatchError(PaillierAccelError, ValueError):
    """Homomorphic addition of ciphertexts carrying different fixed-point exponents."""


class PrimeSearchExhaustedError(PaillierAccelError, RuntimeError):
    """Prime or key search gave up after its retry budget."""


class KeyValidationError(PaillierAccelError, ValueError):
    """Key material failed a consistency check."""


class EncodingOverflowError(PaillierAccelError, OverflowError):
    """Encoded value left the positive/negative thirds of [0, n)."""


# Hardware model

class InfeasibleScheduleError(PaillierAccelError, RuntimeError):
    """Pipeline schedule cannot sustain one inner iteration per cycle."""


class ResourceBudgetError(PaillierAccelError, ValueError):
    """Chip budget cannot host a single core."""


# Engine

class EngineShutdownError(PaillierAccelError, RuntimeError):
    """Engine no longer accepts work."""


class EngineConfigError(PaillierAccelError, ValueError):
    """Invalid engine construction or request for the engine's capabilities."""


# Inputs

class DatasetError(PaillierAccelError, ValueError):
    """Dataset could not be parsed or partitioned."""


class ConfigError(PaillierAccelError, ValueError):
    """Configuration document is invalid."""
