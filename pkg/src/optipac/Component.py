from __future__ import annotations
from typing import Any
from abc import ABC
from .log import log
from .settings import DotDict, SettingsManager


class Component(ABC):
    """A base class for ErmOracle and Learner's shared functionalities,
    particularly dealing with per-component settings and lookup by name from the CLI."""

    # Filled in by each concrete subclass that sets cli_name: {kind: {cli_name: class}}
    registry: dict[str, dict[str, type[Component]]] = {}

    # The component family, i.e. ERM or Learner. Set by the base classes.
    kind: str = "Component"

    # The name this component is selected by on the command line. Leave unset for abstract bases.
    cli_name: str | None = None

    # If you want your component to have settings, override this property and define its default settings.
    # WARNING: due to the limitations of TOML, this does not support None. Do not put None anywhere in here.
    default_settings: dict[str, Any] = {}

    def __init_subclass__(cls, **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        if "cli_name" in cls.__dict__ and cls.cli_name is not None:
            family = Component.registry.setdefault(cls.kind, {})
            if cls.cli_name in family and family[cls.cli_name] is not cls:
                raise ValueError(f"{cls.kind} with name '{cls.cli_name}' already exists ({family[cls.cli_name].__name__}).")
            family[cls.cli_name] = cls

    def __init__(self, name: str | None = None, overrides: dict[str, Any] | None = None) -> None:
        """Components are cheap to construct; settings are only read from disk the first time they are used.
        overrides are laid over the on-disk settings (unknown keys are rejected)."""
        self.__name = name or self.__class__.__name__
        self.__overrides = overrides or {}
        self.__settings: DotDict | None = None
        log.debug(f"{self} initialized.")

    @property
    def name(self) -> str:
        """The component's name, which also names its settings directory.
        Equal to the class name by default."""
        return self.__name

    def __str__(self) -> str:
        """A display name for the component, used for logging."""
        return f'{self.kind} "{self.name}" ({self.__class__.__name__})'

    @property
    def settings(self) -> DotDict:
        """This component's settings: settings/<name>/settings.toml over default_settings, with overrides on top."""
        if self.__settings is None:
            self.__settings = SettingsManager().process_settings(self, self.__overrides)
            try:
                self.validate_settings()
            except Exception as e:
                self.__settings = None
                raise ValueError(f"{self} found invalid settings: {repr(e)}") from None
        return self.__settings

    def __getstate__(self) -> dict[str, Any]:
        # DotDict is read-only, so it can't be unpickled; worker processes reload settings themselves
        state = self.__dict__.copy()
        state[f"_{Component.__name__}__settings"] = None
        return state

    def validate_settings(self) -> None:
        """
        Optionally, override this method with logic that validates self.settings.
        If a setting is invalid, raise a descriptive error.
        """
        pass

    @classmethod
    def lookup(cls, kind: str, cli_name: str) -> type[Component]:
        """Find a concrete component class by kind and CLI name."""
        family = Component.registry.get(kind, {})
        if cli_name not in family:
            raise ValueError(f"Unknown {kind} '{cli_name}'. Known: {', '.join(sorted(family)) or 'none'}")
        return family[cli_name]
