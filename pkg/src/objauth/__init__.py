"""Object-based password authentication: digests, account storage, HTTP service, CLI, bench."""

from .core import (
    AccountRecord,
    Digest,
    Salt,
    derive_stored_hash,
    digest_file,
    digest_stream,
    digest_to_hex,
    generate_salt,
    hex_to_digest,
    make_account,
    object_digest,
    verify_credentials,
)
from .store import AccountStore, DuplicateUserError, StoreLoadError, UnknownUserError

__all__ = [
    "AccountRecord",
    "AccountStore",
    "Digest",
    "DuplicateUserError",
    "Salt",
    "StoreLoadError",
    "UnknownUserError",
    "derive_stored_hash",
    "digest_file",
    "digest_stream",
    "digest_to_hex",
    "generate_salt",
    "hex_to_digest",
    "make_account",
    "object_digest",
    "verify_credentials",
]
