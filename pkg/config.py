"""
Configuration module for toric-lines.

Loads and manages solver defaults from config.json.
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, Optional


@dataclass
class SolverConfig:
    """Search bounds and sampling for the straightening pipeline."""
    root_bound: int
    ext_bound: int
    max_retries: int
    sample_range: int
    seed: int
    height_bound: int


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str


class Config:
    """
    Configuration manager for toric-lines.

    Loads configuration from config.json and provides typed access.
    """

    DEFAULT_CONFIG = {
        "solver": {
            "root_bound": 2,
            "ext_bound": 16,
            "max_retries": 8,
            "sample_range": 97,
            "seed": 42,
            "height_bound": 2
        },
        "logging": {
            "level": "INFO"
        }
    }

    def __init__(self, config_path: str = None):
        """
        Initialize configuration.

        Args:
            config_path: Path to config.json. If None, uses default in same directory.
        """
        if config_path is None:
            config_path = Path(__file__).parent / "config.json"

        self.config_path = Path(config_path)
        self._config: Dict = {}
        self.load()

    def load(self) -> None:
        """Load configuration from file."""
        if self.config_path.exists():
            with open(self.config_path, 'r') as f:
                self._config = json.load(f)
        else:
            print(f"Config file not found at {self.config_path}, using defaults.")
            self._config = json.loads(json.dumps(self.DEFAULT_CONFIG))

    def save(self) -> None:
        """Save current configuration to file."""
        with open(self.config_path, 'w') as f:
            json.dump(self._config, f, indent=4)

    def create_default_config(self) -> None:
        """Create a default config.json file."""
        self._config = json.loads(json.dumps(self.DEFAULT_CONFIG))
        self.save()
        print(f"Created default config at {self.config_path}")

    @property
    def solver(self) -> SolverConfig:
        """Get solver configuration."""
        defaults = self.DEFAULT_CONFIG["solver"]
        s = self._config.get("solver", defaults)
        return SolverConfig(**{key: int(s.get(key, value)) for key, value in defaults.items()})

    @property
    def logging(self) -> LoggingConfig:
        """Get logging configuration."""
        lg = self._config.get("logging", self.DEFAULT_CONFIG["logging"])
        return LoggingConfig(level=str(lg.get("level", "INFO")).upper())

    def override(self, base: Optional[SolverConfig] = None, **flags) -> SolverConfig:
        """
        Solver configuration with every non-None flag applied on top.

        Args:
            base: starting point, the file configuration when None
            **flags: SolverConfig field names
        """
        base = base or self.solver
        return replace(base, **{k: v for k, v in flags.items() if v is not None})


# --- Usage Example ---
if __name__ == "__main__":
    config = Config()

    # Create default config if it doesn't exist
    if not config.config_path.exists():
        config.create_default_config()

    print(f"Solver: {config.solver}")
    print(f"Logging: {config.logging}")
