"""Content-addressed fixture store: one JSON file per (command, canonical arguments)."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping


def canonical_json(doc: Any) -> str:
    """Byte-stable rendering: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def fixture_key(command: str, args: Mapping[str, Any]) -> str:
    blob = json.dumps({"command": command, "args": args}, sort_keys=True, separators=(",", ":"))
    return f"{command}-{hashlib.sha256(blob.encode()).hexdigest()[:16]}"


@dataclass
class VerifyResult:
    key: str
    ok: bool
    reason: str = ""

    def to_json(self) -> dict:
        return {"fixture": self.key, "ok": self.ok, "reason": self.reason}


class FixtureStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, command: str, args: Mapping[str, Any]) -> Path:
        return self.root / f"{fixture_key(command, args)}.json"

    def record(self, command: str, args: Mapping[str, Any], doc: Any) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.path(command, args)
        path.write_text(canonical_json(doc))
        return path

    def load(self, command: str, args: Mapping[str, Any]) -> Any:
        return json.loads(self.path(command, args).read_text())

    def verify(self, command: str, args: Mapping[str, Any], doc: Any) -> VerifyResult:
        path = self.path(command, args)
        key = path.stem
        if not path.exists():
            return VerifyResult(key, False, "no recorded fixture")
        if path.read_text() != canonical_json(doc):
            return VerifyResult(key, False, "output differs from the recorded fixture")
        return VerifyResult(key, True)
