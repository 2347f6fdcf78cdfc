"""Key and ciphertext files (JSON documents with hex integer fields)."""

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from loguru import logger

from paillier_accel.arith.bigint import DEFAULT_WORD_BITS
from paillier_accel.crypto.paillier import Ciphertext, PrivateKey, PublicKey
from paillier_accel.errors import KeyValidationError

KEY_FORMAT = "paillier-key/1"
CIPHERTEXT_FORMAT = "paillier-ciphertexts/1"


@dataclass
class KeyFileData:
    """Contents of a key file; the private half is optional."""
    public_key: PublicKey
    private_key: Optional[PrivateKey] = None
    created_at: datetime = field(default_factory=datetime.now)

    @property
    def key_bits(self) -> int:
        return self.public_key.bit_length

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        data = {
            "format": KEY_FORMAT,
            "key_bits": self.key_bits,
            "created_at": self.created_at.isoformat(),
            "public": self.public_key.to_dict(),
        }
        if self.private_key is not None:
            data["private"] = self.private_key.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], word_bits: int = DEFAULT_WORD_BITS) -> "KeyFileData":
        """Create from dictionary loaded from JSON."""
        if "public" not in data:
            raise KeyValidationError("Key document has no 'public' section")
        public = dict(data["public"])
        public.setdefault("key_bits", data.get("key_bits"))
        if public["key_bits"] is None:
            public.pop("key_bits")
        public_key = PublicKey.from_dict(public, word_bits)
        private_key = PrivateKey.from_dict(data["private"], word_bits) if "private" in data else None
        created = data.get("created_at")
        return cls(
            public_key=public_key,
            private_key=private_key,
            created_at=datetime.fromisoformat(created) if created else datetime.now(),
        )


class KeyFile:
    """Reads and writes one key file."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    def save(self, public_key: PublicKey, private_key: Optional[PrivateKey] = None) -> Path:
        """Write the key document, creating parent directories."""
        data = KeyFileData(public_key=public_key, private_key=private_key)
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "w", encoding="utf-8") as f:
                json.dump(data.to_dict(), f, indent=2)
            kind = "keypair" if private_key is not None else "public key"
            logger.info(f"Saved {data.key_bits}-bit {kind} to {self.path}")
            return self.path
        except Exception as e:
            logger.error(f"Failed to save key file {self.path}: {e}")
            raise

    def load(self, require_private: bool = False, validate: bool = True) -> KeyFileData:
        """Load and optionally validate the key document."""
        if not self.path.exists():
            raise FileNotFoundError(f"Key file not found: {self.path}")
        try:
            with open(self.path, "r", encoding="utf-8") as f:
                raw = json.load(f)
        except json.JSONDecodeError as e:
            logger.error(f"Key file {self.path} is not valid JSON: {e}")
            raise KeyValidationError(f"Key file {self.path} is not valid JSON: {e}") from e

        data = KeyFileData.from_dict(raw)
        if require_private and data.private_key is None:
            raise KeyValidationError(f"Key file {self.path} holds no private key")
        if validate and data.private_key is not None:
            data.private_key.validate(data.public_key)
        logger.info(f"Loaded {data.key_bits}-bit key from {self.path}")
        return data

    def exists(self) -> bool:
        return self.path.exists()

    @staticmethod
    def get_key_info(path: Union[str, Path]) -> Optional[Dict[str, Any]]:
        """Summary of a key file without parsing the integers."""
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            return {
                "key_bits": data.get("key_bits"),
                "created_at": data.get("created_at"),
                "has_private": "private" in data,
            }
        except Exception as e:
            logger.error(f"Failed to read key info: {e}")
            return None


def save_ciphertexts(path: Union[str, Path], ciphertexts: List[Ciphertext],
                     metadata: Optional[Dict[str, Any]] = None) -> Path:
    """Write a ciphertext document: hex values, decimal exponents, free-form metadata."""
    path = Path(path)
    document = {
        "format": CIPHERTEXT_FORMAT,
        "metadata": metadata or {},
        "ciphertexts": [c.to_dict() for c in ciphertexts],
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(document, f, indent=2)
        logger.info(f"Saved {len(ciphertexts)} ciphertexts to {path}")
        return path
    except Exception as e:
        logger.error(f"Failed to save ciphertexts to {path}: {e}")
        raise


def load_ciphertexts(path: Union[str, Path],
                     word_bits: int = DEFAULT_WORD_BITS) -> Tuple[List[Ciphertext], Dict[str, Any]]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Ciphertext file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Ciphertext file {path} is not valid JSON: {e}") from e
    if document.get("format") != CIPHERTEXT_FORMAT:
        raise ValueError(f"Unrecognized ciphertext document format: {document.get('format')!r}")
    ciphertexts = [Ciphertext.from_dict(item, word_bits) for item in document.get("ciphertexts", [])]
    return ciphertexts, document.get("metadata", {})
