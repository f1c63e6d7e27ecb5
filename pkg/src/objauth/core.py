"""Cryptographic pipeline shared by the text, object-hash, and object schemes.

The server-side computation is identical for all three: a password string
(either a literal text password or the 64-char hex digest of an object) is
concatenated with a per-account random salt and hashed with SHA-256. The
only scheme difference is *where* the object digest is computed.

Everything here is pure and stateless except `generate_salt`.
"""
from __future__ import annotations

import hashlib
import hmac
import secrets
from dataclasses import dataclass
from typing import BinaryIO, Union

DIGEST_SIZE = 32
SALT_SIZE = 16
HEX_DIGEST_LEN = DIGEST_SIZE * 2
MAX_USER_ID_BYTES = 64

_HEX_CHARS = frozenset("0123456789abcdefABCDEF")
_STREAM_CHUNK = 1024 * 1024

PasswordString = Union[str, bytes]


@dataclass(frozen=True)
class Digest:
    """A SHA-256 value; its hex encoding is the text form of an object."""

    value: bytes

    def __post_init__(self) -> None:
        if len(self.value) != DIGEST_SIZE:
            raise ValueError(f"digest must be {DIGEST_SIZE} bytes, got {len(self.value)}")

    def hex(self) -> str:
        return self.value.hex()


@dataclass(frozen=True)
class Salt:
    """128 random bits, generated once per account."""

    value: bytes

    def __post_init__(self) -> None:
        if len(self.value) != SALT_SIZE:
            raise ValueError(f"salt must be {SALT_SIZE} bytes, got {len(self.value)}")

    def hex(self) -> str:
        return self.value.hex()


def validate_user_id(user_id: str) -> str:
    """Enforce the protocol's user-id syntax: 1..64 UTF-8 bytes, no control chars."""
    if not user_id:
        raise ValueError("user id must not be empty")
    if len(user_id.encode("utf-8")) > MAX_USER_ID_BYTES:
        raise ValueError(f"user id exceeds {MAX_USER_ID_BYTES} bytes")
    if any(ord(ch) < 0x20 or ord(ch) == 0x7F for ch in user_id):
        raise ValueError("user id must not contain control characters")
    return user_id


@dataclass(frozen=True)
class AccountRecord:
    """Everything the server keeps per user: id, stored hash, salt."""

    user_id: str
    pwd_hash: Digest
    salt: Salt

    def __post_init__(self) -> None:
        validate_user_id(self.user_id)


def object_digest(data: bytes) -> Digest:
    """SHA-256 of the raw object bytes; file names and metadata never enter."""
    return Digest(hashlib.sha256(data).digest())


def digest_stream(stream: BinaryIO, chunk_size: int = _STREAM_CHUNK) -> Digest:
    """Digest a readable binary stream in fixed-size chunks (constant memory)."""
    h = hashlib.sha256()
    while True:
        chunk = stream.read(chunk_size)
        if not chunk:
            break
        h.update(chunk)
    return Digest(h.digest())


def digest_file(path) -> Digest:
    with open(path, "rb") as f:
        return digest_stream(f)


def generate_salt() -> Salt:
    """Fresh 16-byte salt from the OS CSPRNG; fails hard if none is available."""
    return Salt(secrets.token_bytes(SALT_SIZE))


def _password_bytes(password: PasswordString) -> bytes:
    data = password.encode("utf-8") if isinstance(password, str) else bytes(password)
    if not data:
        raise ValueError("password must not be empty")
    return data


def derive_stored_hash(password: PasswordString, salt: Salt) -> Digest:
    """SHA-256 over password bytes followed by salt bytes.

    The concatenation order (password first, then salt) is a protocol
    constant; both ends of the wire must agree on it.
    """
    return Digest(hashlib.sha256(_password_bytes(password) + salt.value).digest())


def verify_credentials(password: PasswordString, record: AccountRecord) -> bool:
    """True iff the password re-derives the stored hash; constant-time compare."""
    derived = derive_stored_hash(password, record.salt)
    return hmac.compare_digest(derived.value, record.pwd_hash.value)


def make_account(user_id: str, password: PasswordString) -> AccountRecord:
    """Build a fresh record: new salt plus the hash derived from the password."""
    salt = generate_salt()
    return AccountRecord(user_id=user_id, pwd_hash=derive_stored_hash(password, salt), salt=salt)


def digest_to_hex(digest: Digest) -> str:
    """Canonical lowercase 64-char hex; usable anywhere a text password is."""
    return digest.value.hex()


def hex_to_digest(text: str) -> Digest:
    """Decode 64 hex characters (either case) back into a digest."""
    if len(text) != HEX_DIGEST_LEN:
        raise ValueError(f"expected {HEX_DIGEST_LEN} hex characters, got {len(text)}")
    if not all(ch in _HEX_CHARS for ch in text):
        raise ValueError("not a valid hex string")
    return Digest(bytes.fromhex(text))
