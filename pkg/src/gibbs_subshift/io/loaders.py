"""JSON Loaders.

Read shifts of finite type, interactions, potentials, explicit weighting
schemes and experiment configurations from JSON files. Every problem is
reported as a ValidationError whose diagnostics carry a JSON path.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any

from gibbs_subshift.config import ExperimentConfig
from gibbs_subshift.dlr import InteractionSource, PotentialSource
from gibbs_subshift.energy import (
    Interaction,
    LocalPotential,
    LocalTerm,
    PotentialTerm,
    RadialTail,
    SchemeKind,
    SeriesPotential,
    WeightScheme,
)
from gibbs_subshift.errors import GibbsSubshiftError, ValidationError
from gibbs_subshift.groups import GroupSpec
from gibbs_subshift.shifts import SFT, Alphabet, Pattern

from .descriptors import DescriptorParser

if TYPE_CHECKING:
    from gibbs_subshift.dlr import CocycleSource
    from gibbs_subshift.energy import Potential
    from gibbs_subshift.groups import Element
    from gibbs_subshift.shifts import Symbol

logger = logging.getLogger(__name__)


def _fail(path: str, message: str) -> ValidationError:
    return ValidationError(
        f"{path}: {message}" if path else message,
        [{"path": path, "message": message}],
    )


def load_json(path: Path | str) -> dict[str, Any]:
    """Read a JSON object from ``path``.

    Raises:
    ------
        ValidationError: If the file is missing or is not a JSON object

    """
    file_path = Path(path)
    try:
        data = json.loads(file_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise _fail("", f"file not found: {file_path}") from None
    except json.JSONDecodeError as e:
        msg = f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}"
        raise _fail("", msg) from None
    if not isinstance(data, dict):
        raise _fail("", "top level must be a JSON object")
    logger.debug("Loaded %s", file_path)
    return data


def _require(data: dict[str, Any], key: str, path: str = "") -> Any:
    if key not in data:
        raise _fail(f"{path}{key}", "required field is missing")
    return data[key]


def _header(data: dict[str, Any]) -> tuple[GroupSpec, Alphabet]:
    try:
        spec = GroupSpec.parse(str(_require(data, "group")))
    except GibbsSubshiftError as e:
        raise _fail("group", e.message) from None
    symbols = _require(data, "alphabet")
    if not isinstance(symbols, list):
        raise _fail("alphabet", "must be a list of symbols")
    try:
        alphabet = Alphabet(tuple(symbols))
    except GibbsSubshiftError as e:
        raise _fail("alphabet", e.message) from None
    return spec, alphabet


def _elements(spec: GroupSpec, values: Any, path: str) -> tuple[Element, ...]:
    if not isinstance(values, list) or not values:
        raise _fail(path, "must be a nonempty list of elements")
    result = []
    for i, value in enumerate(values):
        try:
            result.append(DescriptorParser.parse_element(spec, value))
        except GibbsSubshiftError as e:
            raise _fail(f"{path}[{i}]", e.message) from None
    return tuple(result)


def _table(
    alphabet: Alphabet, values: Any, size: int, path: str
) -> dict[tuple[Symbol, ...], float]:
    if not isinstance(values, dict):
        raise _fail(path, "must map symbol keys to numbers")
    table = {}
    for key, value in values.items():
        try:
            symbols = DescriptorParser.parse_key(alphabet, key)
        except GibbsSubshiftError as e:
            raise _fail(f"{path}.{key}", e.message) from None
        if len(symbols) != size:
            msg = f"key has {len(symbols)} symbols, support has {size}"
            raise _fail(f"{path}.{key}", msg)
        if isinstance(value, bool) or not isinstance(value, int | float):
            raise _fail(f"{path}.{key}", "value must be a number")
        table[symbols] = float(value)
    return table


def parse_sft(data: dict[str, Any]) -> SFT:
    """Build a shift of finite type from its JSON mapping."""
    spec, alphabet = _header(data)
    forbidden = []
    for i, item in enumerate(data.get("forbidden", [])):
        path = f"forbidden[{i}]"
        sites = _elements(
            spec, _require(item, "sites", f"{path}."), f"{path}.sites"
        )
        symbols = _require(item, "symbols", f"{path}.")
        if not isinstance(symbols, list) or len(symbols) != len(sites):
            raise _fail(f"{path}.symbols", "must match sites in length")
        for j, symbol in enumerate(symbols):
            if symbol not in alphabet:
                msg = f"unknown symbol {symbol!r}"
                raise _fail(f"{path}.symbols[{j}]", msg)
        forbidden.append(Pattern(zip(sites, symbols, strict=True)))
    return SFT(spec, alphabet, tuple(forbidden))


def load_sft(path: Path | str) -> SFT:
    """Load a shift of finite type."""
    return parse_sft(load_json(path))


def _tail(alphabet: Alphabet, data: Any) -> RadialTail:
    if not isinstance(data, dict):
        raise _fail("tail", "must be an object")
    table = _table(alphabet, _require(data, "pair_table", "tail."), 2, "tail")
    try:
        return RadialTail(
            {(a, b): v for (a, b), v in table.items()},
            float(data.get("coefficient", 1.0)),
            float(data.get("exponent", 2.0)),
            str(data.get("tail_bound", "2/n")),
            str(data.get("profile", "inverse-square")),
        )
    except GibbsSubshiftError as e:
        raise _fail(e.diagnostics[0]["path"] or "tail", e.message) from None


def parse_interaction(data: dict[str, Any]) -> Interaction:
    """Build an interaction from its JSON mapping.

    An optional top-level ``scale`` multiplies every table (``β``).
    """
    spec, alphabet = _header(data)
    scale = float(data.get("scale", 1.0))
    terms = []
    for i, item in enumerate(data.get("terms", [])):
        path = f"terms[{i}]"
        support = _elements(
            spec, _require(item, "support", f"{path}."), f"{path}.support"
        )
        table = _table(
            alphabet, item.get("table", {}), len(support), f"{path}.table"
        )
        try:
            term = LocalTerm(support, table)
        except GibbsSubshiftError as e:
            raise _fail(f"{path}.support", e.message) from None
        terms.append(term.scaled(scale) if scale != 1.0 else term)
    tail = _tail(alphabet, data["tail"]) if "tail" in data else None
    return Interaction(spec, alphabet, tuple(terms), tail)


def load_interaction(path: Path | str) -> Interaction:
    """Load an interaction."""
    return parse_interaction(load_json(path))


def _local_terms(
    spec: GroupSpec, alphabet: Alphabet, data: dict[str, Any], prefix: str
) -> tuple[PotentialTerm, ...]:
    terms = []
    for i, item in enumerate(data.get("terms", [])):
        path = f"{prefix}terms[{i}]"
        support = _elements(
            spec, _require(item, "support", f"{path}."), f"{path}.support"
        )
        table = _table(
            alphabet, item.get("table", {}), len(support), f"{path}.table"
        )
        weight = item.get("weight", 1.0)
        if isinstance(weight, bool) or not isinstance(weight, int | float):
            raise _fail(f"{path}.weight", "must be a number")
        terms.append(PotentialTerm(support, table, float(weight)))
    return tuple(terms)


def _majorant(values: Any) -> tuple[float, ...]:
    if not isinstance(values, list) or not values:
        raise _fail("majorant", "must be a nonempty list of numbers")
    try:
        bounds = tuple(float(v) for v in values)
    except (TypeError, ValueError):
        raise _fail("majorant", "must be a list of numbers") from None
    if any(b < 0 for b in bounds):
        raise _fail("majorant", "bounds must be nonnegative")
    return bounds


def parse_potential(data: dict[str, Any]) -> Potential:
    """Build a potential from its JSON mapping.

    ``kind`` is ``local`` (or ``potential``) for a finite sum of terms and
    ``series`` for a list of local ``pieces`` with a ``majorant`` list
    bounding ``v_0, v_1, ...``; the last entry bounds every later index.
    """
    spec, alphabet = _header(data)
    kind = data.get("kind", "local")
    if kind in {"local", "potential"}:
        return LocalPotential(
            spec,
            alphabet,
            _local_terms(spec, alphabet, data, ""),
            float(data.get("truncation_error", 0.0)),
        )
    if kind != "series":
        raise _fail("kind", f"unknown potential kind {kind!r}")
    raw_pieces = _require(data, "pieces")
    if not isinstance(raw_pieces, list):
        raise _fail("pieces", "must be a list of term lists")
    pieces = tuple(
        LocalPotential(
            spec, alphabet, _local_terms(spec, alphabet, piece, f"pieces[{i}].")
        )
        for i, piece in enumerate(raw_pieces)
    )
    bounds = _majorant(_require(data, "majorant"))
    last = len(bounds) - 1
    return SeriesPotential(
        spec,
        alphabet,
        pieces,
        # The last bound covers every larger index
        lambda k: bounds[min(k, last)],
        remainder_sup=float(data.get("remainder_sup", 0.0)),
        remainder_shell=float(data.get("remainder_shell", 0.0)),
        constant_from=last,
    )


def load_potential(path: Path | str) -> Potential:
    """Load a local or series potential."""
    return parse_potential(load_json(path))


def load_source(path: Path | str, sft: SFT) -> CocycleSource:
    """Load an interaction or potential file as a cocycle source.

    The ``kind`` field selects the reader and defaults to ``interaction``.
    """
    data = load_json(path)
    kind = data.get("kind", "interaction")
    if kind == "interaction":
        return InteractionSource(parse_interaction(data), sft)
    if kind in {"local", "potential", "series"}:
        return PotentialSource(parse_potential(data), sft)
    raise _fail("kind", f"unknown source kind {kind!r}")


def load_weights(path: Path | str) -> WeightScheme:
    """Load an explicit weighting scheme.

    The file maps term indices to one weight per support element, written
    as numbers or fraction strings such as ``"1/3"``.
    """
    data = load_json(path)
    raw = _require(data, "weights")
    if not isinstance(raw, dict):
        raise _fail("weights", "must map term indices to weight lists")
    weights = {}
    for key, values in raw.items():
        try:
            index = int(key)
            weights[index] = tuple(Fraction(str(v)) for v in values)
        except (TypeError, ValueError, ZeroDivisionError):
            raise _fail(f"weights.{key}", "invalid weight list") from None
    return WeightScheme(SchemeKind.EXPLICIT, weights=weights)


def load_config(path: Path | str) -> ExperimentConfig:
    """Load an experiment configuration."""
    return ExperimentConfig.from_mapping(load_json(path))
