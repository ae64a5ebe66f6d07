"""Flat key=value run configuration.

One file drives every subcommand.  Keys are dotted strings; values are
plain strings parsed on access.  ``#`` starts a comment line.  The seed
of each stage defaults to a hash of (master_seed, stage name) and can be
overridden with ``seed.<stage>`` keys, so a single master seed pins the
whole pipeline while stages stay independently reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError
from .ingest import ColumnMap
from .seeds import stage_seed

_COLUMN_KEYS = {
    "col.cpc.patent_id": "cpc_patent_id",
    "col.cpc.symbol": "cpc_symbol",
    "col.cpc.assignment_type": "cpc_type",
    "col.applications.patent_id": "app_patent_id",
    "col.applications.filing_date": "app_filing_date",
    "col.patents.patent_id": "pat_patent_id",
    "col.patents.patent_type": "pat_type",
    "col.patents.abstract": "pat_abstract",
    "col.claims.patent_id": "claim_patent_id",
    "col.claims.sequence": "claim_sequence",
    "col.claims.text": "claim_text",
    "col.claims.dependency": "claim_dependency",
    "col.cases.interference_no": "case_interference_no",
    "col.cases.application_id": "case_application_id",
    "col.cases.filing_date": "case_filing_date",
    "ingest.utility_value": "utility_value",
}


@dataclass
class RunConfig:
    entries: dict[str, str] = field(default_factory=dict)
    path: str | None = None

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        entries: dict[str, str] = {}
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
            key, value = stripped.split("=", 1)
            entries[key.strip()] = value.strip()
        return cls(entries=entries, path=str(path))

    def to_file(self, path) -> None:
        lines = [f"{key} = {self.entries[key]}" for key in self.entries]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    # -- typed access -----------------------------------------------------

    def get(self, key: str, default: str | None = None) -> str | None:
        return self.entries.get(key, default)

    def require(self, key: str) -> str:
        if key not in self.entries:
            raise ConfigError(f"missing required config key {key!r}")
        return self.entries[key]

    def get_int(self, key: str, default: int) -> int:
        raw = self.entries.get(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r} must be an integer, got {raw!r}") from None

    def get_float(self, key: str, default: float) -> float:
        raw = self.entries.get(key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r} must be a number, got {raw!r}") from None

    def get_bool(self, key: str, default: bool) -> bool:
        raw = self.entries.get(key)
        if raw is None:
            return default
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ConfigError(f"config key {key!r} must be a boolean, got {raw!r}")

    def input_path(self, key: str) -> Path:
        """A required path that must already exist (fail-fast validation)."""
        path = Path(self.require(key))
        if not path.exists():
            raise ConfigError(f"config key {key!r}: input path {path} does not exist")
        return path

    def input_paths(self, key: str) -> list[Path]:
        """Comma-separated list of existing input paths."""
        raw = self.require(key)
        paths = [Path(p.strip()) for p in raw.split(",") if p.strip()]
        if not paths:
            raise ConfigError(f"config key {key!r} names no paths")
        for path in paths:
            if not path.exists():
                raise ConfigError(f"config key {key!r}: input path {path} does not exist")
        return paths

    def output_path(self, key: str) -> Path:
        path = Path(self.require(key))
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    # -- derived views -----------------------------------------------------

    @property
    def master_seed(self) -> int:
        return self.get_int("master_seed", 42)

    def seed_for(self, stage: str) -> int:
        """Per-stage seed: explicit ``seed.<stage>`` key or derived."""
        override = self.entries.get(f"seed.{stage}")
        if override is not None:
            try:
                return int(override)
            except ValueError:
                raise ConfigError(f"seed.{stage} must be an integer, got {override!r}") from None
        return stage_seed(self.master_seed, stage)

    @property
    def workers(self) -> int:
        if self.get_bool("deterministic", True):
            return 1
        return max(1, self.get_int("workers", 1))

    def column_map(self) -> ColumnMap:
        overrides = {}
        valid = {f.name for f in fields(ColumnMap)}
        for key, attr in _COLUMN_KEYS.items():
            if key in self.entries:
                assert attr in valid
                overrides[attr] = self.entries[key]
        return ColumnMap(**overrides)

    def model_roster(self) -> list[tuple[str, str, str]]:
        """Parse eval.models: comma-separated ``name=kind:arg`` entries."""
        raw = self.require("eval.models")
        roster: list[tuple[str, str, str]] = []
        for chunk in raw.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "=" not in chunk:
                raise ConfigError(f"eval.models entry {chunk!r} is not name=kind:arg")
            name, spec = chunk.split("=", 1)
            kind, _, arg = spec.partition(":")
            roster.append((name.strip(), kind.strip(), arg.strip()))
        if not roster:
            raise ConfigError("eval.models names no models")
        return roster
