"""Operator configuration: flat key=value file with LITVAR_* env overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .coords import load_chain, load_transcripts
from .errors import ConfigError
from .genes import HUMAN_TAXON, load_gene_dictionary
from .index import Resources

__all__ = ["Config", "load_config", "load_resources", "ENV_PREFIX"]

ENV_PREFIX = "LITVAR_"

_KNOWN_KEYS = (
    "gene_dictionary",
    "transcripts",
    "chains",
    "taxa",
    "assembly",
    "index_dir",
    "listen",
)


@dataclass
class Config:
    gene_dictionary: Path
    transcripts: Path
    chains: Path | None = None
    taxa: frozenset[int] = frozenset({HUMAN_TAXON})
    assembly: str = "default"
    index_dir: Path = Path("litvar-index")
    listen: str = "127.0.0.1:8080"

    @property
    def segment_path(self) -> Path:
        return self.index_dir / "index.seg"

    @property
    def lock_path(self) -> Path:
        return self.index_dir / ".writer.lock"


def _read_config_file(path: Path) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def load_config(path: str | Path | None, env: Mapping[str, str] | None = None) -> Config:
    """Assemble the configuration from a file plus LITVAR_* env overrides.

    Resource paths are resolved relative to the config file's directory
    and must exist; the taxa set must be non-empty.
    """
    env = os.environ if env is None else env
    values: dict[str, str] = {}
    base = Path.cwd()
    if path is not None:
        cfg_path = Path(path)
        values.update(_read_config_file(cfg_path))
        base = cfg_path.resolve().parent
    for key in _KNOWN_KEYS:
        override = env.get(ENV_PREFIX + key.upper())
        if override is not None:
            values[key] = override

    for required in ("gene_dictionary", "transcripts"):
        if not values.get(required):
            raise ConfigError(f"missing required config key {required!r}")

    def _resolve(value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else base / p

    taxa: frozenset[int] = Config.taxa
    if "taxa" in values:
        try:
            taxa = frozenset(int(part) for part in values["taxa"].split(",") if part.strip())
        except ValueError:
            raise ConfigError(f"taxa must be comma-separated integers, got {values['taxa']!r}") from None
    if not taxa:
        raise ConfigError("taxa set must be non-empty")

    config = Config(
        gene_dictionary=_resolve(values["gene_dictionary"]),
        transcripts=_resolve(values["transcripts"]),
        chains=_resolve(values["chains"]) if values.get("chains") else None,
        taxa=taxa,
        assembly=values.get("assembly", Config.assembly),
        index_dir=_resolve(values["index_dir"]) if values.get("index_dir") else Path("litvar-index"),
        listen=values.get("listen", Config.listen),
    )

    for label, resource in (
        ("gene_dictionary", config.gene_dictionary),
        ("transcripts", config.transcripts),
        ("chains", config.chains),
    ):
        if resource is not None and not resource.exists():
            raise ConfigError(f"{label} path does not exist: {resource}")
    return config


def load_resources(config: Config) -> Resources:
    """Open and parse every resource the config references."""
    with open(config.gene_dictionary, encoding="utf-8") as handle:
        gene_dict = load_gene_dictionary(handle, path=str(config.gene_dictionary))
    with open(config.transcripts, encoding="utf-8") as handle:
        transcripts = load_transcripts(handle, path=str(config.transcripts))
    chain = None
    if config.chains is not None:
        with open(config.chains, encoding="utf-8") as handle:
            chain = load_chain(handle, path=str(config.chains))
    return Resources(
        gene_dict=gene_dict,
        transcripts=transcripts,
        chain=chain,
        target_assembly=config.assembly,
        taxa=config.taxa,
    )
