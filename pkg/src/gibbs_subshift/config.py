"""Configuration.

Library-wide settings are registered with :meth:`Settings.add_config_value`
and resolved from explicit overrides, then ``GIBBS_SUBSHIFT_*`` environment
variables, then the registered default. :class:`ExperimentConfig` is the
resolved configuration of one CLI run.
"""

from __future__ import annotations

import logging
import os
import threading
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .errors import ValidationError

if TYPE_CHECKING:
    from collections.abc import Iterator

logger = logging.getLogger(__name__)

ENV_PREFIX = "GIBBS_SUBSHIFT_"
PATH_FIELDS = ("sft", "source", "interaction", "potential", "output", "csv")


@dataclass(frozen=True)
class ConfigValue:
    """A registered configuration value."""

    name: str
    default: Any
    types: tuple[type, ...]
    description: str = ""

    def coerce(self, raw: str) -> Any:
        """Convert an environment string to the registered type."""
        for kind in self.types:
            try:
                if kind is bool:
                    return raw.strip().lower() in {"1", "true", "yes", "on"}
                return kind(raw)
            except ValueError:
                continue
        msg = f"Cannot interpret {ENV_PREFIX}{self.name.upper()}={raw!r}"
        raise ValidationError(
            msg, [{"path": f"env.{self.name}", "message": msg}]
        )


class Settings:
    """Registry of library settings."""

    def __init__(self) -> None:
        """Initialize an empty registry."""
        self._registry: dict[str, ConfigValue] = {}
        self._overrides: dict[str, Any] = {}
        self._lock = threading.Lock()

    def add_config_value(
        self,
        name: str,
        default: Any,
        types: type | tuple[type, ...],
        description: str = "",
    ) -> None:
        """Register a configuration value.

        Args:
        ----
            name: Attribute name of the value
            default: Value used when nothing overrides it
            types: Accepted type or types, also used to coerce env strings
            description: One line description for reports

        """
        kinds = types if isinstance(types, tuple) else (types,)
        self._registry[name] = ConfigValue(name, default, kinds, description)

    def __getattr__(self, name: str) -> Any:
        """Resolve a registered value."""
        registry = self.__dict__.get("_registry", {})
        if name not in registry:
            raise AttributeError(name)
        if name in self._overrides:
            return self._overrides[name]
        raw = os.environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            return registry[name].coerce(raw)
        return registry[name].default

    @contextmanager
    def override(self, **values: Any) -> Iterator[Settings]:
        """Temporarily override registered values."""
        unknown = sorted(set(values) - set(self._registry))
        if unknown:
            msg = f"Unknown settings: {', '.join(unknown)}"
            raise ValidationError(msg)
        with self._lock:
            previous = dict(self._overrides)
            self._overrides.update(values)
        try:
            yield self
        finally:
            with self._lock:
                self._overrides = previous

    def resolved(self) -> dict[str, Any]:
        """Return every registered value as currently resolved."""
        return {name: getattr(self, name) for name in sorted(self._registry)}


def _register_defaults(registry: Settings) -> None:
    registry.add_config_value(
        "max_elements", 2_000_000, int, "element budget for ball enumeration"
    )
    registry.add_config_value(
        "max_fillings", 1 << 20, int, "budget for |A|^|Λ| enumerations"
    )
    registry.add_config_value(
        "tolerance", 1e-9, float, "comparisons involving truncated tails"
    )
    registry.add_config_value(
        "exact_tolerance", 1e-10, float, "enumeration-exact identities"
    )
    registry.add_config_value(
        "kernel_tolerance", 1e-12, float, "kernel normalization checks"
    )
    registry.add_config_value(
        "tail_radius", 100, int, "default truncation radius of radial tails"
    )
    registry.add_config_value(
        "divergence_threshold", 10.0, float, "bound a minorant must exceed"
    )
    registry.add_config_value(
        "divergence_horizon", 200, int, "largest index searched for divergence"
    )
    registry.add_config_value(
        "sample_attempts", 200, int, "restarts for random admissible patterns"
    )


settings = Settings()
_register_defaults(settings)


@dataclass
class ExperimentConfig:
    """Resolved configuration of one experiment run."""

    command: str
    group: str | None = None
    sft: Path | None = None
    source: Path | None = None
    interaction: Path | None = None
    potential: Path | None = None
    window: str | None = None
    sub_window: str | None = None
    boundary: str | None = None
    scheme: str = "uniform"
    second_scheme: str = "dictator"
    mode: str | None = None
    semantics: str = "local"
    kmax: int = 20
    offset: int = 1
    start: int = 1
    radius: int = 10_000
    steps: int = 100_000
    burn_in: int | None = None
    trials: int = 200
    seed: int = 0
    tolerance: float | None = None
    output: Path | None = None
    csv: Path | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    COMMANDS = (
        "growth",
        "norms",
        "convert",
        "kernel",
        "verify",
        "sample",
        "counterexample",
    )
    MODES = (
        "conformal",
        "dlr",
        "tower",
        "same-cocycle",
        "ball-sum",
        "base-point",
    )
    SEMANTICS = ("local", "exact-1d")

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> ExperimentConfig:
        """Build a config from a JSON mapping, validating field names."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            diagnostics = [
                {"path": key, "message": "unknown configuration key"}
                for key in unknown
            ]
            msg = f"Unknown configuration keys: {', '.join(unknown)}"
            raise ValidationError(msg, diagnostics)
        if "command" not in data:
            msg = "Configuration needs a command"
            raise ValidationError(msg, [{"path": "command", "message": msg}])
        values = dict(data)
        for key in PATH_FIELDS:
            if values.get(key) is not None:
                values[key] = Path(values[key])
        return cls(**values)

    def validate(self) -> list[dict[str, str]]:
        """Return diagnostics; an empty list means the config is valid."""
        diagnostics: list[dict[str, str]] = []

        def problem(path: str, message: str) -> None:
            diagnostics.append({"path": path, "message": message})

        if self.command not in self.COMMANDS:
            problem("command", f"unknown command {self.command!r}")
        if self.command == "verify" and self.mode not in self.MODES:
            problem("mode", f"mode must be one of {', '.join(self.MODES)}")
        if self.semantics not in self.SEMANTICS:
            problem("semantics", "must be local or exact-1d")
        for name in ("kmax", "offset", "start", "radius", "trials"):
            if getattr(self, name) < 1:
                problem(name, "must be >= 1")
        if self.steps < 0:
            problem("steps", "must be >= 0")
        if self.command == "growth" and self.kmax < self.offset + self.start:
            problem("kmax", "must be >= offset + start")
        if self.command == "growth" and self.group is None:
            problem("group", "growth needs --group")
        needs_sft = {"kernel", "verify", "sample"}
        if self.command in needs_sft and self.sft is None:
            problem("sft", f"{self.command} needs --sft")
        if self.command in needs_sft and self.source is None:
            problem("source", f"{self.command} needs --source")
        windowless = self.command == "verify" and self.mode == "same-cocycle"
        if self.command in needs_sft and self.window is None and not windowless:
            problem("window", f"{self.command} needs --window")
        if self.mode in {"dlr", "tower"} and self.sub_window is None:
            problem("sub_window", f"mode {self.mode} needs --sub-window")
        if self.command == "convert" and self.interaction is None:
            problem("interaction", "convert needs --interaction")
        if self.command == "norms" and self.potential is None:
            problem("potential", "norms needs --potential")
        for name in ("sft", "source", "interaction", "potential"):
            path = getattr(self, name)
            if path is not None and not Path(path).is_file():
                problem(name, f"file not found: {path}")
        if self.tolerance is not None and self.tolerance <= 0:
            problem("tolerance", "must be positive")
        return diagnostics

    def to_dict(self) -> dict[str, Any]:
        """Serialize for embedding in reports."""
        data = asdict(self)
        for key, value in data.items():
            if isinstance(value, Path):
                data[key] = str(value)
        return data
