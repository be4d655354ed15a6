"""Machine-checkable records of verified claims."""
from __future__ import annotations

import datetime as _dt
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from . import __version__

__all__ = ["Witness", "Certificate"]


@dataclass(frozen=True)
class Witness:
    i: int
    j: int
    k: int
    value: Optional[str]
    reason: str


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


@dataclass
class Certificate:
    claim: dict[str, Any]
    checked_count: int
    witnesses: list[Witness] = field(default_factory=list)
    verdict: str = ""
    produced_at: str = field(default_factory=_now)
    tool_version: str = __version__

    def __post_init__(self) -> None:
        expected = "fail" if self.witnesses else "pass"
        if not self.verdict:
            self.verdict = expected
        elif self.verdict != expected:
            raise ValueError(f"verdict {self.verdict!r} inconsistent with {len(self.witnesses)} witnesses")

    @classmethod
    def build(cls, prop: str, params: dict[str, Any], checked_count: int,
              witnesses: list[Witness]) -> "Certificate":
        return cls(claim={"property": prop, "params": params},
                   checked_count=checked_count,
                   witnesses=sorted(witnesses, key=lambda w: (w.i, w.j, w.k, w.reason)))

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim": self.claim,
            "verdict": self.verdict,
            "checked_count": self.checked_count,
            "witnesses": [asdict(w) for w in self.witnesses],
            "produced_at": self.produced_at,
            "tool_version": self.tool_version,
        }

    def to_json(self, *, with_timestamp: bool = True) -> str:
        data = self.to_dict()
        if not with_timestamp:
            del data["produced_at"]
        return json.dumps(data, indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Certificate":
        return cls(
            claim=data["claim"],
            checked_count=data["checked_count"],
            witnesses=[Witness(**w) for w in data["witnesses"]],
            verdict=data["verdict"],
            produced_at=data["produced_at"],
            tool_version=data["tool_version"],
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.claim.get("params", {}).items()
                          if not isinstance(v, (list, dict)))
        return (f"{self.verdict} {self.claim['property']} {params} "
                f"checked={self.checked_count} witnesses={len(self.witnesses)}").replace("  ", " ")
