"""Run configuration and the certificate a verification run produces."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .groups import DEFAULT_BSGS_DEGREE_CAP, DEFAULT_CLOSURE_CAP

SCHEMA_VERSION = 1
MAX_SEED = (1 << 64) - 1


@dataclass
class RunConfig:
    m_values: list[int] = field(default_factory=list)
    lemmas: list[str] | None = None  # None runs every applicable check
    seed: int = 1
    strategy: str = "auto"  # chain below the degree cap, jordan above
    bsgs_degree_cap: int = DEFAULT_BSGS_DEGREE_CAP
    closure_cap: int = DEFAULT_CLOSURE_CAP
    jordan_budget: int = 100_000
    ball_radius: int = 4
    ball_max_vertices: int = 200_000

    def __post_init__(self):
        self.m_values = [int(m) for m in self.m_values]
        for m in self.m_values:
            if m < 4:
                raise ValueError(f"m must be >= 4, got {m}")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.strategy not in ("auto", "chain", "jordan"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        for name in ("bsgs_degree_cap", "closure_cap", "jordan_budget", "ball_max_vertices"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.ball_radius < 0:
            raise ValueError("ball_radius must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Certificate:
    config: RunConfig
    instances: dict[int, list] = field(default_factory=dict)  # m -> [CheckResult]
    created: float = field(default_factory=time.time)
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @property
    def results(self) -> list:
        return [r for m in sorted(self.instances) for r in self.instances[m]]

    @property
    def status(self) -> str:
        return "fail" if any(r.status == "fail" for r in self.results) else "pass"

    def failures(self) -> list:
        return [r for r in self.results if r.status == "fail"]

    def to_dict(self, *, timing: bool = True) -> dict:
        out = {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "config": self.config.to_dict(),
            "status": self.status,
            "instances": [
                {"m": m, "checks": [r.to_dict(timing=False) for r in self.instances[m]]}
                for m in sorted(self.instances)
            ],
        }
        if timing:
            # Wall-clock data lives apart from the reproducible payload.
            out["timing"] = {
                "created": round(self.created, 3),
                "elapsed_s": [
                    {"m": r.m, "id": r.id, "seconds": round(r.elapsed_s, 6)} for r in self.results
                ],
            }
            out["canonical_sha256"] = self.digest()
        return out

    def canonical_json(self) -> bytes:
        """Sorted-key compact JSON without any timing information."""
        return json.dumps(self.to_dict(timing=False), sort_keys=True, separators=(",", ":"),
                          ensure_ascii=True).encode()

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json()).hexdigest()

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"

    def to_text(self) -> str:
        rows = [("m", "check", "status", "claim")]
        for r in self.results:
            rows.append((str(r.m), r.id, r.status, r.anchor))
        widths = [max(len(row[i]) for row in rows) for i in range(3)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row[:3], widths)) + "  " + row[3]
                 for row in rows]
        lines.append(f"overall: {self.status}  ({len(self.results)} checks, sha256 {self.digest()[:16]})")
        return "\n".join(lines) + "\n"
