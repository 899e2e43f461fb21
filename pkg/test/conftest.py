"""Test configuration for pytest."""

import os
import sys

import pytest

# リポジトリルートを path に追加 (from src.x import y)
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))


@pytest.fixture
def small_config(tmp_path):
    """Config with series cutoffs small enough for unit tests."""
    from src.config_manager import AppConfig

    path = tmp_path / "app_config.yaml"
    path.write_text(
        "cutoffs:\n"
        "    series:\n"
        "        2.0: 300\n"
        "        3.0: 300\n",
        encoding="utf-8",
    )
    return AppConfig(str(path))
