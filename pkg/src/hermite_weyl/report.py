"""Run configuration and report serialization.

Config files are flat ``key = value`` text (keys exactly the RunConfig
field names, ``#`` comments allowed); CLI flags override file values.
CSV bodies use '.' decimals, no thousands separators and 17 significant
digits, so doubles round-trip exactly and reruns diff clean.  JSON
reports wrap the same records in an envelope carrying the tool version,
the config snapshot and a timestamp (the one field excluded from
determinism comparisons).
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "ConfigError",
    "RunConfig",
    "format_number",
    "records_to_csv",
    "write_report",
    "report_paths",
]

TOOL_VERSION = "0.1.0"


class ConfigError(ValueError):
    """Invalid configuration file or flag combination (CLI exit code 2)."""


@dataclass
class RunConfig:
    n: int = 1
    grid_L: float = 12.0
    grid_N: int = 512
    rel_tol: float = 1e-11
    abs_tol: float = 1e-14
    max_depth: int = 18
    base_nodes: int = 16
    spectral_K: int = 200
    output_dir: str = "reports"
    format: str = "csv"

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.grid_L <= 0:
            raise ConfigError(f"grid_L must be positive, got {self.grid_L}")
        if self.grid_N < 2 or self.grid_N % 2:
            raise ConfigError(f"grid_N must be even and >= 2, got {self.grid_N}")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ConfigError("tolerances must be positive")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if not 8 <= self.base_nodes <= 64:
            raise ConfigError(f"base_nodes must lie in [8, 64], got {self.base_nodes}")
        if self.spectral_K < 0:
            raise ConfigError(f"spectral_K must be >= 0, got {self.spectral_K}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        values: dict = {}
        fields = {f.name: f.type for f in dataclasses.fields(cls)}
        casts = {"n": int, "grid_N": int, "max_depth": int, "base_nodes": int, "spectral_K": int,
                 "grid_L": float, "rel_tol": float, "abs_tol": float,
                 "output_dir": str, "format": str}
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in fields:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = casts[key](val)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
        return cls(**values)

    def quadrature(self):
        from .quadrature import QuadratureSpec

        return QuadratureSpec(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_depth=self.max_depth,
            base_nodes=self.base_nodes,
        )

    def grid(self):
        from .quantize import GridSpec

        return GridSpec(L=self.grid_L, N=self.grid_N)

    def snapshot(self) -> dict:
        return dataclasses.asdict(self)


def format_number(value) -> str:
    """17-significant-digit text form, round-trip exact for doubles."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def records_to_csv(records: list[dict], header: list[str] | None = None) -> str:
    """Deterministic CSV body: header row plus one line per record."""
    if not records:
        return ""
    if header is None:
        header = list(records[0].keys())
    lines = [",".join(header)]
    for rec in records:
        lines.append(",".join(format_number(rec.get(col, "")) for col in header))
    return "\n".join(lines) + "\n"


def envelope(suite: str, config: RunConfig, records: list[dict], summary: dict, passed: bool) -> dict:
    return {
        "tool_version": TOOL_VERSION,
        "config": config.snapshot(),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "suite": suite,
        "passed": passed,
        "summary": summary,
        "records": records,
    }


def report_paths(config: RunConfig, suite: str, out: str | None) -> tuple[Path, Path]:
    """(report file, figure file) for a suite run."""
    if out:
        report = Path(out)
    else:
        report = Path(config.output_dir) / f"{suite}.{config.format}"
    return report, report.with_suffix(".png")


def write_report(
    path: Path,
    suite: str,
    config: RunConfig,
    records: list[dict],
    summary: dict,
    passed: bool,
    header: list[str] | None = None,
) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if config.format == "json":
        payload = envelope(suite, config, records, summary, passed)
        path.write_text(json.dumps(payload, indent=2, default=format_number) + "\n")
    else:
        path.write_text(records_to_csv(records, header))
