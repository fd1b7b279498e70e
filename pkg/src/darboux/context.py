"""Run configuration discovery for darboux."""

import json
import os
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from .errors import ParameterError
from .log import LOG_ENV_VAR
from .models.config import RunConfig
from .storage import to_json, write_text


class RunContext:
    """Finds and loads the configuration that applies to the current run."""

    DARBOUX_DIR = ".darboux"
    CONFIG_FILE = "config.json"

    @staticmethod
    def find_config_root(start_path: Optional[Path] = None) -> Optional[Path]:
        """
        Find the directory holding .darboux/config.json by walking up.

        Args:
            start_path: Starting path (defaults to current directory)

        Returns:
            The directory, or None if no configuration exists above it
        """
        if start_path is None:
            start_path = Path.cwd()

        current = start_path.resolve()
        while True:
            config_file = current / RunContext.DARBOUX_DIR / RunContext.CONFIG_FILE
            if config_file.is_file():
                return current
            if current == current.parent:
                return None
            current = current.parent

    @staticmethod
    def load_config(start_path: Optional[Path] = None) -> RunConfig:
        """
        Load the configuration, falling back to defaults.

        DARBOUX_LOG_LEVEL overrides the file's log level.

        Raises:
            ParameterError: If the file exists but is not a valid configuration
        """
        data: dict[str, Any] = {}
        root = RunContext.find_config_root(start_path)
        if root is not None:
            config_file = root / RunContext.DARBOUX_DIR / RunContext.CONFIG_FILE
            try:
                with open(config_file, encoding="utf-8") as f:
                    data = json.load(f)
            except json.JSONDecodeError as e:
                raise ParameterError(f"{config_file} is not valid JSON: {e}") from None
            if not isinstance(data, dict):
                raise ParameterError(f"{config_file} must hold a JSON object")

        env_level = os.environ.get(LOG_ENV_VAR)
        if env_level:
            data["log_level"] = env_level
        try:
            return RunConfig.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first["loc"]) or "config"
            raise ParameterError(f"config {where}: {first['msg']}") from None

    @staticmethod
    def save_config(config: RunConfig, root: Path) -> Path:
        """Write the configuration under `root` and return the file path."""
        darboux_dir = root / RunContext.DARBOUX_DIR
        darboux_dir.mkdir(parents=True, exist_ok=True)
        config_file = darboux_dir / RunContext.CONFIG_FILE
        write_text(config_file, to_json(config))
        return config_file

    @staticmethod
    def resolve(
        start_path: Optional[Path] = None, **overrides: Optional[Any]
    ) -> RunConfig:
        """Configuration with explicit (non-None) command-line values applied."""
        config = RunContext.load_config(start_path)
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return config
        try:
            return RunConfig.model_validate({**config.model_dump(), **updates})
        except ValidationError as e:
            first = e.errors()[0]
            raise ParameterError(f"{first['loc'][0]}: {first['msg']}") from None
