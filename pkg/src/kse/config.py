"""Service configuration: JSON file, environment overrides, defaults.

Precedence, lowest to highest: packaged defaults, config file, KSE_*
environment variables, explicit keyword overrides (CLI flags).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import data
from .errors import ConfigError
from .ontology import ExpansionConfig
from .ranking import RankingConfig

ENV_PREFIX = "KSE_"

_PATH_KEYS = ("index", "ontology", "lexicon", "stoplist", "static_dir")
_RANKING_KEYS = (
    "w_title",
    "w_body",
    "alpha_keyword",
    "beta_popularity",
    "recency_half_life_days",
    "top_n",
)


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    index: Path = Path("index")
    ontology: Path = Path(data.DEFAULT_ONTOLOGY)
    lexicon: Path = Path(data.DEFAULT_LEXICON)
    stoplist: Path = Path(data.DEFAULT_STOPWORDS)
    static_dir: Path | None = None
    ranking: RankingConfig = field(default_factory=RankingConfig)
    expansion: ExpansionConfig = field(default_factory=ExpansionConfig)
    defer_reindex: bool = False
    fetch_limit_bytes: int = 1024 * 1024

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port {self.port} outside [1, 65535]")

    def validate_paths(self, require_index: bool = True) -> None:
        for name in ("ontology", "lexicon", "stoplist"):
            path = getattr(self, name)
            if not Path(path).exists():
                raise ConfigError(f"{name} path does not exist: {path}")
        if require_index and not Path(self.index).exists():
            raise ConfigError(f"index path does not exist: {self.index}")

    @property
    def feedback_log(self) -> Path:
        return Path(self.index) / "feedback.jsonl"

    @property
    def feedback_state(self) -> Path:
        return Path(self.index) / "feedback_state.json"


def load_config(path: str | Path | None = None, env: dict | None = None, **overrides) -> ServiceConfig:
    """Assemble a ServiceConfig from file, KSE_* environment and overrides."""
    env = os.environ if env is None else env
    settings: dict = {}
    ranking: dict = {}

    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        ranking.update(raw.pop("ranking", {}))
        settings.update(raw)

    for key in ("host", "port", "index", "ontology", "lexicon", "stoplist", "static_dir", "defer_reindex"):
        env_val = env.get(ENV_PREFIX + key.upper())
        if env_val is not None:
            settings[key] = env_val
    for key in _RANKING_KEYS:
        env_val = env.get(ENV_PREFIX + key.upper())
        if env_val is not None:
            ranking[key] = env_val

    ranking.update({k: v for k, v in overrides.pop("ranking", {}).items() if v is not None})
    settings.update({k: v for k, v in overrides.items() if v is not None})

    if "port" in settings:
        settings["port"] = int(settings["port"])
    if "defer_reindex" in settings and isinstance(settings["defer_reindex"], str):
        settings["defer_reindex"] = settings["defer_reindex"].lower() in ("1", "true", "yes")
    for key in _PATH_KEYS:
        if settings.get(key) is not None:
            settings[key] = Path(settings[key])
    for key in ("w_title", "w_body", "alpha_keyword", "beta_popularity", "recency_half_life_days"):
        if key in ranking:
            ranking[key] = float(ranking[key])
    if "top_n" in ranking:
        ranking["top_n"] = int(ranking["top_n"])

    expansion_raw = settings.pop("expansion", None)
    try:
        if ranking:
            settings["ranking"] = RankingConfig(**ranking)
        if expansion_raw:
            settings["expansion"] = ExpansionConfig(
                weight=float(expansion_raw.get("weight", 0.5)),
                hyponym_levels=int(expansion_raw.get("hyponym_levels", 1)),
            )
        return ServiceConfig(**settings)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
