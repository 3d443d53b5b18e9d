"""Verification records and the append-only JSONL result store."""

from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable

SCHEMA_VERSION = "1"
VERDICTS = ("pass", "fail", "report", "identically-zero", "cap")


def format_rational(x) -> str:
    """Canonical ``"num/den"`` string (reduced, positive denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


_FLOAT_TAG = "\u0001f:"
_FLOAT_RE = re.compile(r'"\\u0001f:([^"]*)"')


class _Float17(str):
    """Marker for floats that must be written as bare 17-significant-digit JSON numbers."""


def format_value(x):
    """Rationals become ``"num/den"``; floats keep 17 significant digits; None passes through."""
    if x is None:
        return None
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x} cannot be stored")
        return _Float17(_FLOAT_TAG + f"{x:.17g}")
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return format_rational(x)
    return format_rational(Fraction(x))


def parse_value(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


@dataclass
class VerificationRecord:
    command: str
    scenario: dict
    quantity: str
    value: object
    verdict: str
    seed: int = 0
    w: list | None = None
    elapsed_ms: int = 0
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict {self.verdict!r} not in {VERDICTS}")

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def to_dict(self) -> dict:
        out = asdict(self)
        out["value"] = format_value(self.value)
        if self.w is not None:
            out["w"] = [format_value(x) for x in self.w]
        out["scenario"] = {key: (list(v) if isinstance(v, tuple) else v) for key, v in self.scenario.items()}
        return out

    def to_json(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True)
        return _FLOAT_RE.sub(lambda m: m.group(1), text)

    @classmethod
    def from_json(cls, line: str) -> "VerificationRecord":
        data = json.loads(line)
        scenario = {key: (tuple(v) if isinstance(v, list) else v) for key, v in data["scenario"].items()}
        w = data.get("w")
        if w is not None:
            w = [parse_value(x) for x in w]
        return cls(
            command=data["command"],
            scenario=scenario,
            quantity=data["quantity"],
            value=parse_value(data["value"]),
            verdict=data["verdict"],
            seed=data["seed"],
            w=w,
            elapsed_ms=data["elapsed_ms"],
            schema_version=data["schema_version"],
        )

    def sort_key(self) -> tuple:
        s = self.scenario
        return (
            s.get("c", 0), s.get("b", 0), s.get("k", 0), s.get("p", 0), s.get("q", 0),
            tuple(s.get("superscript") or ()), tuple(s.get("h") or ()), self.quantity,
        )


def scenario_dict(c, b=None, k=None, p=None, q=None, superscript=None, h=None) -> dict:
    out = {"c": c, "b": b, "k": k, "p": p, "q": q,
           "superscript": tuple(superscript) if superscript is not None else None,
           "h": tuple(h) if h is not None else None}
    return {key: v for key, v in out.items() if v is not None}


def sort_records(records: Iterable[VerificationRecord]) -> list[VerificationRecord]:
    return sorted(records, key=lambda r: r.sort_key())


def append_records(records: Iterable[VerificationRecord], path: str | Path) -> None:
    """Append one JSON object per line, sorted deterministically within the batch."""
    lines = [r.to_json() + "\n" for r in sort_records(records)]
    with open(path, "a", encoding="utf-8") as fh:
        fh.writelines(lines)


def append_record(record: VerificationRecord, path: str | Path) -> None:
    append_records([record], path)


def read_records(path: str | Path) -> list[VerificationRecord]:
    with open(path, encoding="utf-8") as fh:
        return [VerificationRecord.from_json(line) for line in fh if line.strip()]
