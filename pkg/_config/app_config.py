import functools
import json
import logging
import os

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.json")


class AppConfig:
    def __init__(self, config_file_path: str = None):
        """
        Initialize the AppConfig with the configuration file path.
        Falls back to the ELASTICA_CONFIG environment variable, then to the bundled config.json.
        """
        if config_file_path is None:
            config_file_path = os.getenv("ELASTICA_CONFIG") or DEFAULT_CONFIG_PATH

        self.config_file_path = config_file_path
        self.config = self.load_config(config_file_path)

    def load_config(self, file_path: str) -> dict:
        """
        Load and validate the configuration from a JSON file.

        :param file_path: Path to the configuration file.
        :return: Parsed configuration dictionary.
        """
        try:
            with open(file_path, "r") as file:
                config = json.load(file)
        except Exception as e:
            raise ValueError(f"Error loading configuration: {e}")

        required_keys = ["app", "numerics", "optimizer", "logging"]
        for key in required_keys:
            if key not in config:
                raise ValueError(f"Invalid configuration: '{key}' is missing.")

        return config

    def get_app_config(self) -> dict:
        return self.config["app"]

    def get_numerics_config(self) -> dict:
        return self.config["numerics"]

    def get_optimizer_config(self) -> dict:
        return self.config["optimizer"]

    def get_logging_config(self) -> dict:
        return self.config["logging"]

    def get_numeric(self, key: str) -> float:
        """
        Get a single numerical tolerance or limit.

        :param key: Name of the entry in the numerics section.
        :return: The configured value.
        """
        numerics = self.get_numerics_config()
        if key not in numerics:
            logging.error(f"Numerics entry '{key}' not found in {self.config_file_path}.")
            raise ValueError(f"Invalid configuration: numerics entry '{key}' is missing.")
        return numerics[key]

    def get_log_level(self) -> int:
        level_name = str(self.get_logging_config().get("level", "INFO")).upper()
        level = logging.getLevelName(level_name)
        if not isinstance(level, int):
            raise ValueError(f"Invalid configuration: unknown log level '{level_name}'.")
        return level


@functools.lru_cache(maxsize=None)
def get_config() -> AppConfig:
    """
    Shared configuration used for library defaults.
    """
    return AppConfig()
