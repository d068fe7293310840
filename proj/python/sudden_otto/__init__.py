"""Sudden quantum Otto refrigerator with a coupled spin-pair working medium."""

import os
from pathlib import Path

_presets = Path(__file__).with_name("presets")
if _presets.is_dir() and not os.environ.get("OTTO_PRESET_DIR"):
    os.environ["OTTO_PRESET_DIR"] = str(_presets)

from ._core import *  # noqa: E402,F401,F403
from ._core import __doc__  # noqa: E402,F401

__version__ = "0.1.0"
