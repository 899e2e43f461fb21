"""
設定管理

YAML configuration for numeric cutoffs, conventions, tolerances and logging.
"""

from __future__ import annotations

import copy
import logging
import os
from typing import Any

import yaml

DEFAULT_CONFIG_PATH = os.path.join(
    os.path.dirname(__file__), "..", "config", "app_config.yaml"
)

_DEFAULTS: dict[str, Any] = {
    "logging": {
        "level": "WARNING",
        "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        "date_format": "%Y-%m-%d %H:%M:%S",
    },
    "output": {"format": "plain", "digits": 12},
    "threads": 1,
    "conventions": {"constant_term": "theorem2", "square_branch": "tabulated"},
    "cutoffs": {
        "zeta_terms": 1000,
        "l_direct": 1_000_000,
        "euler_primes": 10_000,
        "theta": 40,
        "multiplier_theta": 60,
        "series": {2.0: 20_000, 2.5: 20_000, 3.0: 5_000},
    },
    "tolerances": {
        "exact": 1e-10,
        "shadow": 1e-8,
        "hecke_half": 1e-7,
        "multiplier": 1e-8,
        "realness": 1e-10,
        "class_number_round": 1e-6,
        "class_number_ambiguous": 1e-3,
        "series_practical": 1e-3,
        "scale": 1.0,
    },
    "limits": {"max_unit_discriminant": 1_000_000},
}


class AppConfig:
    """アプリケーション設定 (dot-path アクセス)"""

    def __init__(self, config_path: str | None = None):
        self.logger = logging.getLogger(__name__)
        self.config_path = config_path or DEFAULT_CONFIG_PATH
        self._config: dict[str, Any] = {}
        self._load_config()

    def _load_config(self) -> None:
        try:
            with open(self.config_path, encoding="utf-8") as f:
                loaded = yaml.safe_load(f) or {}
            if not isinstance(loaded, dict):
                raise yaml.YAMLError(f"top level must be a mapping, got {type(loaded).__name__}")
            self._config = _merge(self._get_default_config(), loaded)
            self.logger.debug("Loaded configuration from %s", self.config_path)
        except (OSError, yaml.YAMLError) as e:
            self.logger.warning(
                "Failed to load config from %s: %s. Using defaults.",
                self.config_path,
                e,
            )
            self._config = self._get_default_config()

    def _get_default_config(self) -> dict[str, Any]:
        return copy.deepcopy(_DEFAULTS)

    def get(self, key_path: str, default: Any = None) -> Any:
        """Get configuration value by dot-separated key path."""
        value: Any = self._config
        try:
            for key in key_path.split("."):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key_path: str, value: Any) -> None:
        """Set configuration value by dot-separated key path."""
        keys = key_path.split(".")
        config = self._config
        for key in keys[:-1]:
            if not isinstance(config.get(key), dict):
                config[key] = {}
            config = config[key]
        config[keys[-1]] = value

    def series_cutoffs(self) -> dict[float, int]:
        """Series cutoff per s, keys normalized to float."""
        raw = self.get("cutoffs.series", {}) or {}
        return {float(s): int(c) for s, c in sorted(raw.items(), key=lambda kv: float(kv[0]))}

    def reload(self) -> None:
        self._load_config()
        self.logger.debug("Configuration reloaded")


# 表として丸ごと置き換えるキー
_REPLACED_TABLES = frozenset({"series"})


def _merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    for key, value in override.items():
        if key in _REPLACED_TABLES:
            base[key] = value
        elif isinstance(value, dict) and isinstance(base.get(key), dict):
            base[key] = _merge(base[key], value)
        else:
            base[key] = value
    return base
