"""
Pure storage layer for file operations.

This module provides low-level file operations without any business logic.
Relative paths are resolved against the base directory.
"""

import json
import os
from typing import Any, Optional, cast


class Storage:
    """Pure file operations without business logic."""

    def __init__(self, base_dir: str = "."):
        """Initialize with base directory."""
        self.base_dir = base_dir

    def resolve(self, path: str) -> str:
        """``path`` below the base directory; absolute paths pass through."""
        return os.path.join(self.base_dir, path)

    def ensure_directory(self, path: str) -> None:
        """Create directory if it doesn't exist."""
        os.makedirs(self.resolve(path), exist_ok=True)

    @staticmethod
    def _ensure_parent(full_path: str) -> None:
        directory = os.path.dirname(full_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

    def read_json(self, path: str) -> Optional[dict[str, Any]]:
        """Read JSON file, return None if file doesn't exist or is invalid."""
        full_path = self.resolve(path)
        if not os.path.exists(full_path):
            return None

        try:
            with open(full_path, "r", encoding="utf-8") as f:
                data = json.load(f)
                if isinstance(data, dict):
                    return cast(dict[str, Any], data)
                return None
        except (json.JSONDecodeError, FileNotFoundError, IOError):
            return None

    def write_json(self, path: str, data: dict[str, Any]) -> bool:
        """Write data to JSON file, return success status."""
        full_path = self.resolve(path)
        try:
            self._ensure_parent(full_path)
            with open(full_path, "w", encoding="utf-8") as f:
                json.dump(data, f, indent=2, sort_keys=True)
            return True
        except (IOError, TypeError):
            return False

    def read_text(self, path: str) -> Optional[str]:
        """Read a text file, return None if error."""
        try:
            with open(self.resolve(path), "r", encoding="utf-8") as f:
                return f.read()
        except (FileNotFoundError, IOError):
            return None

    def write_text(self, path: str, text: str) -> bool:
        """Write text to file, return success status."""
        full_path = self.resolve(path)
        try:
            self._ensure_parent(full_path)
            with open(full_path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            return True
        except IOError:
            return False

    def list_files(self, path: str, suffix: str = "") -> list[str]:
        """Sorted file names in ``path`` ending with ``suffix``."""
        full_path = self.resolve(path)
        if not os.path.isdir(full_path):
            return []
        return sorted(
            name
            for name in os.listdir(full_path)
            if name.endswith(suffix)
            and os.path.isfile(os.path.join(full_path, name))
        )

    def join_path(self, *parts: str) -> str:
        """Join path parts."""
        return os.path.join(*parts)
