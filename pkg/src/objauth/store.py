"""File-backed account storage.

One JSON object per line, exactly
``{"user_id":"<id>","pwd_hash":"<64 hex>","salt":"<32 hex>"}`` followed by
LF, UTF-8 encoded. Appends are flushed and fsynced before a create returns,
so a record that was acknowledged survives a crash or restart.
"""
from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from .core import AccountRecord, Digest, Salt


class StoreError(Exception):
    """Base class for account store failures."""


class DuplicateUserError(StoreError):
    def __init__(self, user_id: str):
        super().__init__(f"account already exists: {user_id!r}")
        self.user_id = user_id


class UnknownUserError(StoreError):
    def __init__(self, user_id: str):
        super().__init__(f"no such account: {user_id!r}")
        self.user_id = user_id


class StoreLoadError(StoreError):
    def __init__(self, path, line_no: int, reason: str):
        super().__init__(f"{path}: line {line_no}: {reason}")
        self.path = Path(path)
        self.line_no = line_no


_FIELDS = ("user_id", "pwd_hash", "salt")


def record_line(record: AccountRecord) -> str:
    # Key order and separators are part of the on-disk format.
    payload = {
        "user_id": record.user_id,
        "pwd_hash": record.pwd_hash.hex(),
        "salt": record.salt.hex(),
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":")) + "\n"


def _parse_line(path, line_no: int, line: str) -> AccountRecord:
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise StoreLoadError(path, line_no, f"invalid JSON ({exc.msg})") from None
    if not isinstance(payload, dict) or set(payload) != set(_FIELDS):
        raise StoreLoadError(path, line_no, "unexpected record fields")
    if not all(isinstance(payload[k], str) for k in _FIELDS):
        raise StoreLoadError(path, line_no, "record fields must be strings")
    try:
        return AccountRecord(
            user_id=payload["user_id"],
            pwd_hash=Digest(bytes.fromhex(payload["pwd_hash"])),
            salt=Salt(bytes.fromhex(payload["salt"])),
        )
    except ValueError as exc:
        raise StoreLoadError(path, line_no, str(exc)) from None


class AccountStore:
    """Keyed store of AccountRecords; one writer at a time, any number of readers.

    Opening loads every record into memory (and creates an empty file when
    the path does not exist); a malformed line aborts the open with the
    offending line number.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._records: dict[str, AccountRecord] = {}
        self._write_lock = threading.Lock()
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()
            return
        with open(self.path, encoding="utf-8") as f:
            for line_no, raw in enumerate(f, start=1):
                line = raw.rstrip("\n")
                if not line:
                    raise StoreLoadError(self.path, line_no, "blank line")
                record = _parse_line(self.path, line_no, line)
                if record.user_id in self._records:
                    raise StoreLoadError(self.path, line_no, f"duplicate user id {record.user_id!r}")
                self._records[record.user_id] = record

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, user_id: str) -> bool:
        return user_id in self._records

    def create_account(self, record: AccountRecord) -> None:
        """Persist a new record; refuses to overwrite an existing user id."""
        with self._write_lock:
            if record.user_id in self._records:
                raise DuplicateUserError(record.user_id)
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(record_line(record))
                f.flush()
                os.fsync(f.fileno())
            self._records[record.user_id] = record

    def get_account(self, user_id: str) -> AccountRecord:
        try:
            return self._records[user_id]
        except KeyError:
            raise UnknownUserError(user_id) from None
