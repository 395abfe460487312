"""Run configuration and the versioned report format shared by all commands."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = 1
CSV_COLUMNS = ("group", "n", "L", "r", "map", "predicted", "observed", "pass")


@dataclass(frozen=True)
class RunConfig:
    command: str
    group: str | None = None
    layers: int | None = None
    degree: int | None = None
    ring: str | None = None
    trials: int = 3
    seed: int = 0
    max_group_order: int | None = None
    max_monomials: int | None = None
    output: str | None = None
    format: str = "json"
    probe_samples: int = 0
    max_layers_override: int | None = None
    jobs: int = 1

    def __post_init__(self):
        for name in ("max_group_order", "max_monomials"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive, got {v}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        if self.probe_samples < 0:
            raise ValueError(f"probe samples must be >= 0, got {self.probe_samples}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.format!r}")

    def echo(self) -> dict:
        """Config as recorded in reports; the output path does not affect results."""
        d = asdict(self)
        d.pop("output")
        d.pop("format")
        d.pop("jobs")
        return d


@dataclass
class VerificationReport:
    config: RunConfig
    results: list[dict]
    csv_rows: list[tuple] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    info: list[str] = field(default_factory=list)
    wall_clock_seconds: float = 0.0
    budget_exceeded: bool = False

    @property
    def passed(self) -> bool:
        return all(r.get("passed", True) for r in self.results if not r.get("superseded"))

    def to_dict(self) -> dict:
        from . import __version__

        return {
            "schema_version": SCHEMA_VERSION,
            "tool": "pgcnn",
            "version": __version__,
            "config": self.config.echo(),
            "results": self.results,
            "warnings": self.warnings,
            "passed": self.passed,
            "wall_clock_seconds": self.wall_clock_seconds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(self.csv_rows)
        return buf.getvalue()

    def render(self, fmt: str = "json") -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()


def strip_wall_clock(obj):
    """Copy of a report dict without any ``wall_clock*`` keys."""
    if isinstance(obj, dict):
        return {k: strip_wall_clock(v) for k, v in obj.items() if not k.startswith("wall_clock")}
    if isinstance(obj, list):
        return [strip_wall_clock(v) for v in obj]
    return obj


def join_observed(values) -> str:
    """``"5"`` when all trials agree, ``"5;6"`` otherwise."""
    return ";".join(str(v) for v in sorted(set(values), key=lambda v: (str(type(v)), v)))
