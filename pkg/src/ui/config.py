"""
Configuration management for the cosinelaw command line.
"""

import json
import os
from copy import deepcopy
from typing import Any, Dict, Optional

import toml

# Command -> config section holding its defaults.
COMMAND_SECTIONS = {
    "triangle_solve": "triangle",
    "triangle_orbit": "orbit",
    "tetra_solve": "tetra",
    "tetra_orbit": "orbit",
    "lattice_evolve": "lattice",
    "verify_all": "verify",
    "limit": "limit",
    "flow": "flow",
}


def get_default_config() -> Dict[str, Any]:
    """Return default configuration."""
    return {
        "logging": {
            "level": "WARNING",
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        },
        "verify": {"seed": 42, "samples": 1000, "workers": 1},
        "orbit": {"steps": 1000, "boundary_margin": 1e-3, "float_format": "%.17g"},
        "lattice": {
            "variant": "symmetric",
            "fill_order": "lexicographic",
            "tolerance": 1e-12,
        },
        "limit": {"eps_list": [1e-2, 5e-3, 2.5e-3], "slope_threshold": 1.9},
        "flow": {"h": 1e-3, "steps": 1000, "float_format": "%.17g"},
    }


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Load configuration from a TOML or JSON file merged over the defaults.

    Sections present in both are merged key by key; top-level scalar keys
    (a flat file mirroring flag names) are kept as they are.

    Raises
    ------
    FileNotFoundError
        If ``config_path`` does not exist.
    ValueError
        If the file is not valid TOML or JSON.
    """
    config = get_default_config()
    if config_path is None:
        return config
    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Configuration file not found: {config_path}")
    with open(config_path, "r") as f:
        try:
            if config_path.endswith(".json"):
                loaded = json.load(f)
            else:
                loaded = toml.load(f)
        except (json.JSONDecodeError, toml.TomlDecodeError) as e:
            raise ValueError(f"Invalid configuration file {config_path}: {e}") from e
    for key, value in loaded.items():
        if isinstance(value, dict) and isinstance(config.get(key), dict):
            config[key].update(value)
        else:
            config[key] = deepcopy(value)
    return config


def save_config(config: Dict[str, Any], config_path: str = "config.toml") -> bool:
    """Save configuration to TOML (or JSON when the path ends in ``.json``)."""
    try:
        with open(config_path, "w") as f:
            if config_path.endswith(".json"):
                json.dump(config, f, indent=2)
            else:
                toml.dump(config, f)
        return True
    except OSError as e:
        print(f"Error saving configuration: {e}")
        return False


def command_settings(config: Dict[str, Any], command: str) -> Dict[str, Any]:
    """Settings for ``command``: its section, then flat top-level keys on top."""
    section = COMMAND_SECTIONS[command]
    settings = dict(config.get(section, {}))
    settings.update({k: v for k, v in config.items() if not isinstance(v, dict)})
    return settings
