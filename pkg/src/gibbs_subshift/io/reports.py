"""Report Writers.

Deterministic JSON and CSV emission. Reports embed the resolved experiment
configuration, the library settings and the admissibility semantics, and
are written with sorted keys so identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, fields, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from gibbs_subshift.config import settings
from gibbs_subshift.groups import Element
from gibbs_subshift.shifts import Pattern

from .descriptors import DescriptorParser

if TYPE_CHECKING:
    from gibbs_subshift.config import ExperimentConfig
    from gibbs_subshift.dlr import SpecificationKernel
    from gibbs_subshift.energy import LocalPotential

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert library values into plain JSON data.

    Non-finite floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``;
    elements and patterns use their textual descriptors.
    """
    # Scalars
    if value is None or isinstance(value, bool | int | str):
        return value
    if isinstance(value, float | np.floating):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return number
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Enum):
        return to_jsonable(value.value)
    if isinstance(value, Path):
        return str(value)
    # Group elements and patterns
    if isinstance(value, Element):
        return value.describe()
    if isinstance(value, Pattern):
        return {g.describe(): to_jsonable(s) for g, s in sorted(value.items())}
    # Containers
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: to_jsonable(getattr(value, f.name)) for f in fields(value)
        }
    if isinstance(value, Mapping):
        return {_key(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, set | frozenset):
        return sorted((to_jsonable(v) for v in value), key=str)
    if isinstance(value, Iterable):
        return [to_jsonable(v) for v in value]
    return str(value)


def _key(key: Any) -> str:
    if isinstance(key, Element):
        return key.describe()
    if isinstance(key, tuple):
        return DescriptorParser.format_key(key)
    return str(key)


@dataclass
class Report:
    """A machine-readable experiment report."""

    command: str
    config: dict[str, Any]
    semantics: str
    tolerance: float | None
    results: dict[str, Any]
    passed: bool = True
    failures: list[str] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def check(self, invariant: str, deviation: float, tolerance: float) -> None:
        """Record whether ``deviation`` stays within ``tolerance``."""
        passed = deviation <= tolerance
        self.results.setdefault("checks", {})[invariant] = {
            "deviation": deviation,
            "tolerance": tolerance,
            "passed": passed,
        }
        if not passed:
            self.passed = False
            self.failures.append(invariant)
            logger.warning(
                "%s breached: %.3e > %.3e", invariant, deviation, tolerance
            )

    def as_dict(self) -> dict[str, Any]:
        """Return the JSON payload.

        Keys of ``extra`` are placed at the top level, which lets a report
        double as an input file.
        """
        return to_jsonable(self.extra) | {
            "command": self.command,
            "config": to_jsonable(self.config),
            "settings": to_jsonable(settings.resolved()),
            "semantics": self.semantics,
            "tolerance": to_jsonable(self.tolerance),
            "results": to_jsonable(self.results),
            "passed": self.passed,
            "failures": list(self.failures),
        }


def new_report(
    config: ExperimentConfig, semantics: str, tolerance: float | None = None
) -> Report:
    """Start a report for ``config``."""
    return Report(config.command, config.to_dict(), semantics, tolerance, {})


def dumps(payload: Any) -> str:
    """Serialize ``payload`` deterministically."""
    return (
        json.dumps(
            to_jsonable(payload),
            indent=2,
            sort_keys=True,
            ensure_ascii=False,
            allow_nan=False,
        )
        + "\n"
    )


def write_json(payload: Any, path: Path | None = None) -> str:
    """Write ``payload`` to ``path`` and return the text."""
    text = dumps(payload)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
        logger.info("Wrote %s", path)
    return text


def write_csv(
    header: Iterable[str],
    rows: Iterable[Iterable[Any]],
    path: Path | None = None,
) -> str:
    """Write a CSV table to ``path`` and return the text."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow(["" if v is None else to_jsonable(v) for v in row])
    text = buffer.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
        logger.info("Wrote %s", path)
    return text


def dump_potential(potential: LocalPotential) -> dict[str, Any]:
    """Return the JSON form of a local potential, readable by the loaders."""
    return {
        "kind": "local",
        "group": potential.group.describe(),
        "alphabet": list(potential.alphabet.symbols),
        "radius": potential.radius,
        "truncation_error": to_jsonable(potential.truncation_error),
        "terms": [
            {
                "support": [g.describe() for g in term.support],
                "table": {
                    DescriptorParser.format_key(key): value
                    for key, value in sorted(term.table.items(), key=str)
                },
                "weight": term.weight,
            }
            for term in potential.terms
        ],
    }


def dump_kernel(kernel: SpecificationKernel) -> dict[str, Any]:
    """Return the JSON form of a kernel as ``key -> probability`` rows."""
    return {
        "region": [g.describe() for g in kernel.region],
        "semantics": str(kernel.semantics),
        "error_bound": to_jsonable(kernel.error_bound),
        "probabilities": {
            DescriptorParser.format_key(
                pattern[g] for g in kernel.region
            ): to_jsonable(p)
            for pattern, p in kernel.items()
        },
    }
