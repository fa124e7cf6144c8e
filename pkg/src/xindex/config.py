"""Run configuration: defaults < config file < command-line flags.

The config file is flat ``key = value`` text (``#`` comments allowed). Keys
match the long CLI flags with dashes replaced by underscores.
"""

from __future__ import annotations

import configparser
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from xindex.citegraph import TraversalParams
from xindex.metrics import MetricParams
from xindex.provider.base import DEFAULT_BASE_URL, ProviderConfig

ENV_CONTACT = "XINDEX_CONTACT_EMAIL"
ENV_API_KEY = "XINDEX_API_KEY"

_FLOAT_KEYS = {
    "decay_base",
    "entropy_floor",
    "breadth_richness_weight",
    "max_requests_per_second",
    "timeout_seconds",
    "max_age_days",
}
_INT_KEYS = {"depth_cap", "max_retries", "per_node_citation_cap", "total_node_budget", "workers"}
_STR_KEYS = {
    "provider",
    "fixture_dir",
    "cache_dir",
    "out_dir",
    "manifest",
    "base_url",
    "contact_email",
    "depth_mode",
    "citation_form",
    "citation_mode",
}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS


class ConfigError(ValueError):
    pass


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    text = Path(path).read_text(encoding="utf-8")
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",), inline_comment_prefixes=("#",))
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    values = dict(parser["run"])
    unknown = sorted(set(values) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {', '.join(unknown)}")
    return values


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: cannot parse {value!r}") from exc
    return str(value)


@dataclass(frozen=True)
class RunConfig:
    provider_mode: str = "fixture"
    fixture_dir: Path | None = None
    cache_dir: Path = Path(".xindex-cache")
    out_dir: Path = Path("out")
    manifest: Path | None = None
    workers: int = 1
    metric: MetricParams = field(default_factory=MetricParams)
    traversal: TraversalParams = field(default_factory=TraversalParams)
    provider: ProviderConfig = field(default_factory=ProviderConfig)

    @classmethod
    def from_sources(
        cls,
        file_values: Mapping[str, Any] | None = None,
        flag_values: Mapping[str, Any] | None = None,
        env: Mapping[str, str] | None = None,
    ) -> RunConfig:
        env = os.environ if env is None else env
        merged: dict[str, Any] = {}
        for source in (file_values or {}, flag_values or {}):
            for key, value in source.items():
                if value is not None:
                    merged[key] = _coerce(key, value)

        mode = merged.get("provider", "fixture")
        if mode not in ("live", "fixture"):
            raise ConfigError(f"provider must be 'live' or 'fixture', got {mode!r}")
        try:
            metric = MetricParams(
                **{k: merged[k] for k in ("entropy_floor", "breadth_richness_weight", "depth_mode", "citation_form", "citation_mode") if k in merged}
            )
            traversal = TraversalParams(**{k: merged[k] for k in ("depth_cap", "decay_base") if k in merged})
            provider = ProviderConfig(
                base_url=merged.get("base_url", DEFAULT_BASE_URL),
                polite_contact=merged.get("contact_email") or env.get(ENV_CONTACT) or None,
                api_key=env.get(ENV_API_KEY) or None,
                **{
                    k: merged[k]
                    for k in (
                        "max_requests_per_second",
                        "timeout_seconds",
                        "max_retries",
                        "per_node_citation_cap",
                        "total_node_budget",
                        "max_age_days",
                    )
                    if k in merged
                },
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        workers = merged.get("workers", 1)
        if workers < 1:
            raise ConfigError("workers must be >= 1")
        fixture_dir = merged.get("fixture_dir")
        manifest = merged.get("manifest")
        return cls(
            provider_mode=mode,
            fixture_dir=Path(fixture_dir) if fixture_dir else None,
            cache_dir=Path(merged.get("cache_dir", ".xindex-cache")),
            out_dir=Path(merged.get("out_dir", "out")),
            manifest=Path(manifest) if manifest else None,
            workers=workers,
            metric=metric,
            traversal=traversal,
            provider=provider,
        )
