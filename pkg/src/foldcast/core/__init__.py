"""
foldcast - Core Package

Settings, logging setup and the shared error hierarchy.
"""

from foldcast.core.config import Settings, get_settings, settings
from foldcast.core.logging import setup_logging

__all__ = [
    "Settings",
    "get_settings",
    "settings",
    "setup_logging",
]
