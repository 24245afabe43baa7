from __future__ import annotations
from typing import Any
import os
import copy
import json
import tomlkit
from tomlkit.items import Item
from dynaconf import Validator, LazySettings
from .util import Singleton, validate_duration

from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from .Component import Component


class DotDict(dict[Any, Any]):
    """A read-only dictionary that allows dot notation access.
    Also handles unwrapping of tomlkit items."""

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__()
        for dict_arg in args:
            for k, v in dict_arg.items():
                if isinstance(v, dict) and not isinstance(v, DotDict):
                    v = DotDict(v)
                super().__setitem__(k, v)
        for k, v in kwargs.items():
            if isinstance(v, dict) and not isinstance(v, DotDict):
                v = DotDict(v)
            super().__setitem__(k, v)

    def __setitem__(self, key: Any, value: Any) -> None:
        raise AttributeError(f"This dictionary is read only. You cannot edit the key '{key}'.")

    def __delitem__(self, key: Any) -> None:
        raise AttributeError(f"This dictionary is read only. You cannot edit the key '{key}'.")

    def __getattr__(self, key: Any) -> Any:
        # Unwrap tomlkit items so numpy and math get plain floats/ints
        try:
            value = self.__getitem__(key)
        except KeyError:
            raise AttributeError(key) from None
        if isinstance(value, Item):
            return value.unwrap()
        return value

    def __setattr__(self, key: Any, value: Any) -> None:
        self.__setitem__(key, value)

    def __delattr__(self, key: Any) -> None:
        self.__delitem__(key)

    def to_plain(self) -> dict[str, Any]:
        """A mutable deep copy with tomlkit items unwrapped, e.g. for dumping the effective configuration."""
        return {k: v.to_plain() if isinstance(v, DotDict) else (v.unwrap() if isinstance(v, Item) else v) for k, v in self.items()}


class SettingsManager(Singleton):
    """optipac's settings manager."""

    SETTINGS_DIR = os.environ.get("OPTIPAC_SETTINGS_DIR", "settings")
    SETTINGS_FILENAME = 'settings.toml'
    DEFAULTS_FILEPATH = 'root_defaults.json'

    with open(os.path.join(os.path.dirname(__file__), DEFAULTS_FILEPATH), "r") as f:
        default_settings: dict[str, Any] = json.load(f)

    def __init__(self) -> None:
        """Instantiate the settings manager and load root settings.
        Unlike component settings, nothing is written back to disk; a missing settings directory just means defaults."""
        if self._initialized:
            return
        super().__init__()
        self.settings = self.process_settings(self)
        try:
            self.validate_settings(self.settings.to_plain())
        except Exception as e:
            raise ValueError(f"optipac found invalid global settings: {repr(e)}") from None

    def populate_settings(self, settings: dict[str, Any], default_settings: dict[str, Any], discard: bool = False) -> dict[str, Any]:
        """Pull in any relevant keys from the settings dict while initializing any missing keys with their default values.
        If "discard" is true, discards any irrelevant keys from settings (ones not present in default_settings)."""
        output: dict[str, Any] = {} if discard else copy.deepcopy(dict(settings))
        for k, v in default_settings.items():
            if isinstance(v, dict):
                output[k] = self.populate_settings(settings.get(k, {}), v, discard=discard)
            else:
                output[k] = settings.get(k, v)
        return output

    def process_settings(self, target: Component | SettingsManager, overrides: dict[str, Any] | None = None) -> DotDict:
        """
        Handle settings loading for a component or the SettingsManager itself.
        Read settings from disk (if present), fill in defaults, and apply any in-code overrides on top.
        Returns the loaded settings.
        """
        settings_dir = self.SETTINGS_DIR
        if not isinstance(target, SettingsManager):
            settings_dir = os.path.join(settings_dir, target.name)

        settings = self.read_file(os.path.join(settings_dir, self.SETTINGS_FILENAME))
        settings = self.populate_settings(settings, target.default_settings)
        if overrides:
            settings = self.merge_overrides(settings, overrides)
        return DotDict(settings)

    def merge_overrides(self, settings: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
        """Recursively lay overrides over settings. Keys unknown to the settings are rejected so typos fail loudly."""
        merged = copy.deepcopy(dict(settings))
        for k, v in overrides.items():
            if k not in merged:
                raise ValueError(f"Unknown setting '{k}'. Known settings: {', '.join(sorted(merged))}")
            if isinstance(v, dict) and isinstance(merged[k], dict):
                merged[k] = self.merge_overrides(merged[k], v)
            else:
                merged[k] = v
        return merged

    @staticmethod
    def validate_settings(values: dict[str, Any]) -> None:
        """
        Validates the root settings to make sure the user set them correctly.
        """

        # dynaconf parses values in place, so it gets its own mutable copy
        values = values.to_plain() if isinstance(values, DotDict) else copy.deepcopy(dict(values))
        settings = LazySettings()
        settings.update(values)  # type: ignore
        settings.validators.register(
            # Strings
            Validator('logging.log_path', 'config.output_dir', 'experiments.time_budget',
                      must_exist=True, is_type_of=str,
                      messages={"operations": "'{name}' must be a string, not '{value}'."}),
            # Bools
            Validator('logging.color', 'experiments.record_timing',
                      must_exist=True, is_type_of=bool,
                      messages={"operations": "'{name}' must be true or false"}),
            # Log levels
            Validator('logging.console_log_level', 'logging.file_log_level',
                      must_exist=True, is_type_of=str, is_in=["CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"],
                      messages={"operations": "{name} ({value}) must be one of the following: CRITICAL, ERROR, WARNING, INFO, DEBUG"}),
            # Probabilities
            Validator('learner.delta', must_exist=True, gt=0, lt=1,
                      messages={"operations": "{name} ({value}) must lie strictly between 0 and 1."}),
            Validator('boost.theta', 'boost.gamma', must_exist=True, gt=0, lt=1,
                      messages={"operations": "{name} ({value}) must lie strictly between 0 and 1."}),
            # Counts
            Validator('learner.jobs', 'boost.sample_factor', 'universe.threshold_points', 'universe.finite_points', 'experiments.schema_version',
                      must_exist=True, is_type_of=int, gte=1,
                      messages={"operations": "{name} ({value}) must be a positive integer."}),
            Validator('analysis.ramp_constant', must_exist=True, gte=1,
                      messages={"operations": "{name} ({value}) must be at least 1."}),
        )  # type: ignore
        settings.validators.validate()

        # The margin machinery needs theta < 2 gamma (otherwise the fixed step size is not positive)
        assert values["boost"]["theta"] < 2 * values["boost"]["gamma"], "boost.theta must be smaller than 2 * boost.gamma."
        validate_duration(values["experiments"]["time_budget"], key="experiments.time_budget", nonzero=True)
        for name, profile in values["profiles"].items():
            for key in ("s", "n", "t", "l"):
                assert 0 < profile[key] <= 1, f"profiles.{name}.{key} must be in (0, 1]."
            assert isinstance(profile["early_stop"], bool), f"profiles.{name}.early_stop must be true or false."

    def read_file(self, filepath: str) -> dict[str, Any]:
        """
        Read settings from a TOML file. If the file does not exist, this returns an empty dict.
        """
        if not os.path.isfile(filepath):
            return {}
        with open(filepath, 'r') as f:
            return tomlkit.load(f)


settings = SettingsManager().settings


def output_dir() -> str:
    """The directory CLI artifacts go to. OPTIPAC_OUTPUT_DIR wins over the settings file."""
    return os.environ.get("OPTIPAC_OUTPUT_DIR", settings.config.output_dir)


def profile(name: str) -> DotDict:
    """Look up a named scale profile ("full", "desk", or any user-defined one)."""
    if name not in settings.profiles:
        raise ValueError(f"Unknown scale profile '{name}'. Known profiles: {', '.join(sorted(settings.profiles))}")
    return settings.profiles[name]
