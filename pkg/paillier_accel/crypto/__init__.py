"""Paillier cryptosystem, fixed-point encoding and key files."""

from .encoding import (
    DEFAULT_BASE,
    EncodedNumber,
    SparseWords,
    align,
    align_ciphertexts,
    decode,
    decrypt_encoded,
    decrypt_value,
    densify,
    encode,
    encrypt_encoded,
    encrypt_value,
    multiply_encoded,
    sparsify,
)
from .keyfile import KeyFile, KeyFileData, load_ciphertexts, save_ciphertexts
from .paillier import (
    Ciphertext,
    PrivateKey,
    PublicKey,
    add_cipher,
    decrypt,
    encrypt,
    keygen,
    keypair_from_primes,
    public_key_from_n,
    random_coprime,
    rerandomize,
    scalar_mul,
)
from .primes import generate_prime, is_probable_prime

__all__ = [
    "DEFAULT_BASE",
    "EncodedNumber",
    "SparseWords",
    "align",
    "align_ciphertexts",
    "decode",
    "decrypt_encoded",
    "decrypt_value",
    "densify",
    "encode",
    "encrypt_encoded",
    "encrypt_value",
    "multiply_encoded",
    "sparsify",
    "KeyFile",
    "KeyFileData",
    "load_ciphertexts",
    "save_ciphertexts",
    "Ciphertext",
    "PrivateKey",
    "PublicKey",
    "add_cipher",
    "decrypt",
    "encrypt",
    "keygen",
    "keypair_from_primes",
    "public_key_from_n",
    "random_coprime",
    "rerandomize",
    "scalar_mul",
    "generate_prime",
    "is_probable_prime",
]
