"""Tests for descriptors, JSON loaders and report writers."""

import json
import math
import shutil
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from gibbs_subshift.config import ExperimentConfig
from gibbs_subshift.dlr import (
    InteractionSource,
    PotentialSource,
    dlr_kernel,
    kernel_deviation,
)
from gibbs_subshift.energy import (
    SchemeKind,
    SeriesPotential,
    b_norm,
    shell_norm,
)
from gibbs_subshift.errors import ValidationError
from gibbs_subshift.fixtures import (
    SPINS,
    full_shift,
    golden_mean_shift,
    ising_interaction,
    product_potential,
)
from gibbs_subshift.groups import GroupSpec, ball
from gibbs_subshift.io import (
    DescriptorParser,
    Report,
    dump_kernel,
    dump_potential,
    dumps,
    load_config,
    load_interaction,
    load_json,
    load_potential,
    load_sft,
    load_source,
    load_weights,
    new_report,
    parse_interaction,
    parse_potential,
    parse_sft,
    to_jsonable,
    write_csv,
    write_json,
)
from gibbs_subshift.shifts import Pattern, is_locally_admissible

pytestmark = [pytest.mark.unit, pytest.mark.io]

FIXTURES = Path(__file__).parent / "fixtures"
Z = GroupSpec.parse("Z")


def line(values: dict[int, int]) -> Pattern:
    """Build a pattern on ``Z`` from ``{position: symbol}``."""
    return Pattern((Z.element((i,)), s) for i, s in values.items())


def path_of(error: pytest.ExceptionInfo[ValidationError]) -> str:
    """Return the JSON path of the first diagnostic."""
    return error.value.diagnostics[0]["path"]


class TestDescriptors:
    """Test element, window, boundary and key descriptors."""

    def test_parse_elements(self) -> None:
        """Test integers, tuples and free words."""
        assert DescriptorParser.parse_element(Z, "-3").form == (-3,)
        assert DescriptorParser.parse_element(Z, 4).form == (4,)
        lattice = GroupSpec.parse("Z^2")
        assert DescriptorParser.parse_element(lattice, "(1,-2)").form == (1, -2)
        assert DescriptorParser.parse_element(lattice, [0, 5]).form == (0, 5)
        free = GroupSpec.parse("F2")
        assert DescriptorParser.parse_element(free, "aB").form == (1, -2)
        assert DescriptorParser.parse_element(free, "e").is_identity

    def test_invalid_elements(self) -> None:
        """Test that malformed descriptors are rejected."""
        with pytest.raises(ValidationError):
            DescriptorParser.parse_element(Z, "x")
        with pytest.raises(ValidationError):
            DescriptorParser.parse_element(Z, True)
        with pytest.raises(ValidationError):
            DescriptorParser.parse_element(GroupSpec.parse("F2"), "ac")

    def test_parse_windows(self) -> None:
        """Test intervals, balls, boxes and explicit lists."""
        interval = DescriptorParser.parse_window(Z, "0..3")
        assert [g.form[0] for g in interval] == [0, 1, 2, 3]
        lattice = GroupSpec.parse("Z^2")
        assert len(DescriptorParser.parse_window(lattice, "ball:2")) == 5
        assert len(DescriptorParser.parse_window(lattice, "box:0..1,0..2")) == 6
        explicit = DescriptorParser.parse_window(Z, "3; 1; 1")
        assert [g.form[0] for g in explicit] == [1, 3]

    def test_invalid_windows(self) -> None:
        """Test that empty or inconsistent windows are rejected."""
        with pytest.raises(ValidationError):
            DescriptorParser.parse_window(Z, "2..1")
        with pytest.raises(ValidationError):
            DescriptorParser.parse_window(Z, " ")
        with pytest.raises(ValidationError):
            DescriptorParser.parse_window(GroupSpec.parse("Z^2"), "box:0..1")
        with pytest.raises(ValidationError):
            DescriptorParser.parse_window(Z, "ball:x")

    def test_parse_boundary(self) -> None:
        """Test constant collars and single-site overrides."""
        sft = golden_mean_shift()
        region = [Z.element((0,)), Z.element((1,))]
        constant = DescriptorParser.parse_boundary(sft, "const:0", region)
        assert constant == line({-1: 0, 2: 0})
        mixed = DescriptorParser.parse_boundary(sft, "const:0; 2=1", region)
        assert mixed == line({-1: 0, 2: 1})
        thick = DescriptorParser.parse_boundary(sft, "const:0", region, 3)
        assert len(thick) == 4

    def test_invalid_boundary(self) -> None:
        """Test that boundary sites stay outside the window."""
        sft = golden_mean_shift()
        region = [Z.identity]
        with pytest.raises(ValidationError):
            DescriptorParser.parse_boundary(sft, "0=1", region)
        with pytest.raises(ValidationError):
            DescriptorParser.parse_boundary(sft, "junk", region)
        with pytest.raises(ValidationError):
            DescriptorParser.parse_boundary(sft, "const:7", region)

    def test_keys(self) -> None:
        """Test table keys in both directions."""
        assert DescriptorParser.parse_key(SPINS, "1,-1") == (1, -1)
        assert DescriptorParser.parse_key(SPINS, ["-1", "1"]) == (-1, 1)
        assert DescriptorParser.format_key((1, -1)) == "1,-1"


class TestLoaders:
    """Test the JSON loaders."""

    def setup_method(self) -> None:
        """Set up a temporary directory."""
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self) -> None:
        """Clean up the temporary directory."""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def create_temp_file(self, filename: str, content: str) -> Path:
        """Create a temporary file with the given content."""
        file_path = Path(self.temp_dir) / filename
        with file_path.open("w", encoding="utf-8") as f:
            f.write(content)
        return file_path

    def test_load_json_diagnostics(self) -> None:
        """Test missing files, invalid JSON and non-object documents."""
        with pytest.raises(ValidationError) as info:
            load_json(Path(self.temp_dir) / "missing.json")
        assert path_of(info) == ""
        assert "file not found" in info.value.message
        broken = self.create_temp_file("broken.json", "{")
        with pytest.raises(ValidationError) as info:
            load_json(broken)
        assert info.value.message.startswith("invalid JSON")
        listing = self.create_temp_file("list.json", "[1, 2]")
        with pytest.raises(ValidationError):
            load_json(listing)

    def test_load_sft(self) -> None:
        """Test the golden-mean shift file."""
        sft = load_sft(FIXTURES / "golden_mean_sft.json")
        assert sft.range == 1
        assert len(sft.forbidden) == 1
        assert not is_locally_admissible(sft, line({3: 1, 4: 1}))
        assert is_locally_admissible(sft, line({3: 1, 4: 0}))

    def test_full_shift_file(self) -> None:
        """Test that a shift without forbidden patterns is full."""
        sft = load_sft(FIXTURES / "full_shift.json")
        assert sft.is_full_shift
        assert sft.alphabet == SPINS

    def test_sft_diagnostics(self) -> None:
        """Test JSON paths of shift errors."""
        with pytest.raises(ValidationError) as info:
            parse_sft({"group": "Z"})
        assert path_of(info) == "alphabet"
        with pytest.raises(ValidationError) as info:
            parse_sft({"group": "Q", "alphabet": [0, 1]})
        assert path_of(info) == "group"
        data = {
            "group": "Z",
            "alphabet": [0, 1],
            "forbidden": [{"sites": [0], "symbols": [7]}],
        }
        with pytest.raises(ValidationError) as info:
            parse_sft(data)
        assert path_of(info) == "forbidden[0].symbols[0]"
        data["forbidden"] = [{"symbols": [1]}]
        with pytest.raises(ValidationError) as info:
            parse_sft(data)
        assert path_of(info) == "forbidden[0].sites"

    def test_load_interaction(self) -> None:
        """Test that the scaled Ising file matches the built-in bonds."""
        interaction = load_interaction(FIXTURES / "ising_interaction.json")
        assert b_norm(interaction).value == pytest.approx(1.0)
        boundary = line({-1: 1, 2: -1})
        region = [Z.element((0,)), Z.element((1,))]
        loaded = dlr_kernel(InteractionSource(interaction), region, boundary)
        built = dlr_kernel(
            InteractionSource(ising_interaction(0.5)), region, boundary
        )
        assert kernel_deviation(loaded, built) < 1e-12

    def test_interaction_diagnostics(self) -> None:
        """Test JSON paths of table errors."""
        data = {
            "group": "Z",
            "alphabet": [-1, 1],
            "terms": [{"support": [0, 1], "table": {"1": 1}}],
        }
        with pytest.raises(ValidationError) as info:
            parse_interaction(data)
        assert path_of(info) == "terms[0].table.1"
        data["terms"] = [{"support": [0, 1], "table": {"1,1": "x"}}]
        with pytest.raises(ValidationError) as info:
            parse_interaction(data)
        assert path_of(info) == "terms[0].table.1,1"
        data["terms"] = [{"support": [], "table": {}}]
        with pytest.raises(ValidationError) as info:
            parse_interaction(data)
        assert path_of(info) == "terms[0].support"

    def test_interaction_tail(self) -> None:
        """Test reading a radial tail."""
        interaction = parse_interaction(
            {
                "group": "Z",
                "alphabet": [0, 1],
                "tail": {"pair_table": {"1,1": 1}},
            }
        )
        assert interaction.tail is not None
        assert interaction.tail.profile == "inverse-square"
        assert interaction.tail.exponent == 2.0

    def test_load_potential(self) -> None:
        """Test the product potential file."""
        potential = load_potential(FIXTURES / "product_potential.json")
        assert potential.kind == "local"
        assert potential.evaluate(line({0: 1, 1: -1})) == -1.0
        assert potential.evaluate(line({0: -1, 1: -1})) == 1.0

    def test_load_series(self) -> None:
        """Test pieces, majorant and remainder of a series file."""
        potential = load_potential(FIXTURES / "series_potential.json")
        assert isinstance(potential, SeriesPotential)
        assert len(potential.pieces) == 2
        assert potential.variation_bound(0) == 2.0
        assert potential.variation_bound(2) == 0.5
        # the last bound covers every later index
        assert potential.variation_bound(10) == 0.25
        assert potential.remainder_sup == 0.125
        assert potential.evaluate(line({0: 1, 1: 1})) == 1.5

    def test_series_majorant_tail(self) -> None:
        """Test that the last majorant entry decides the norm tail."""
        potential = load_potential(FIXTURES / "series_potential.json")
        assert isinstance(potential, SeriesPotential)
        assert potential.constant_from == 3
        assert math.isinf(shell_norm(potential, ball(Z, 1), 6).value)
        vanishing = parse_potential(
            {
                "kind": "series",
                "group": "Z",
                "alphabet": [-1, 1],
                "pieces": [],
                "majorant": [1.0, 0.5, 0.0],
            }
        )
        assert shell_norm(vanishing, ball(Z, 1), 4).value == 2.0

    def test_potential_diagnostics(self) -> None:
        """Test JSON paths of potential errors."""
        header = {"group": "Z", "alphabet": [-1, 1]}
        with pytest.raises(ValidationError) as info:
            parse_potential(header | {"kind": "spline"})
        assert path_of(info) == "kind"
        with pytest.raises(ValidationError) as info:
            parse_potential(header | {"kind": "series", "pieces": []})
        assert path_of(info) == "majorant"
        with pytest.raises(ValidationError) as info:
            parse_potential(
                header | {"kind": "series", "pieces": [], "majorant": [-1]}
            )
        assert path_of(info) == "majorant"
        term = {"support": [0], "table": {"1": 1}, "weight": "heavy"}
        with pytest.raises(ValidationError) as info:
            parse_potential(header | {"terms": [term]})
        assert path_of(info) == "terms[0].weight"

    def test_load_source(self) -> None:
        """Test that ``kind`` selects the cocycle source."""
        sft = full_shift()
        interaction = load_source(FIXTURES / "ising_interaction.json", sft)
        assert isinstance(interaction, InteractionSource)
        potential = load_source(FIXTURES / "product_potential.json", sft)
        assert isinstance(potential, PotentialSource)
        unknown = self.create_temp_file(
            "unknown.json", json.dumps({"kind": "table"})
        )
        with pytest.raises(ValidationError) as info:
            load_source(unknown, sft)
        assert path_of(info) == "kind"

    def test_load_weights(self) -> None:
        """Test explicit weights written as fractions."""
        scheme = load_weights(FIXTURES / "explicit_weights.json")
        assert scheme.kind is SchemeKind.EXPLICIT
        assert scheme.weights[0] == (Fraction(1, 3), Fraction(2, 3))
        bad = self.create_temp_file(
            "bad.json", json.dumps({"weights": {"x": [1]}})
        )
        with pytest.raises(ValidationError) as info:
            load_weights(bad)
        assert path_of(info) == "weights.x"

    def test_load_config(self) -> None:
        """Test reading an experiment configuration."""
        config = load_config(FIXTURES / "growth_config.json")
        assert config.command == "growth"
        assert config.group == "Z^2"
        assert config.kmax == 6
        assert config.validate() == []


class TestReports:
    """Test JSON and CSV emission."""

    def setup_method(self) -> None:
        """Set up a temporary directory."""
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self) -> None:
        """Clean up the temporary directory."""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_to_jsonable_scalars(self) -> None:
        """Test non-finite floats, fractions and numpy scalars."""
        assert to_jsonable(math.inf) == "inf"
        assert to_jsonable(-math.inf) == "-inf"
        assert to_jsonable(math.nan) == "nan"
        assert to_jsonable(Fraction(1, 3)) == "1/3"
        assert to_jsonable(np.float64(0.5)) == 0.5
        assert to_jsonable(np.int64(3)) == 3

    def test_to_jsonable_structures(self) -> None:
        """Test elements, patterns, arrays, sets and tuple keys."""
        assert to_jsonable(Z.element((-3,))) == "-3"
        assert to_jsonable(line({0: 1, -1: 0})) == {"-1": 0, "0": 1}
        assert to_jsonable(np.array([1.0, math.inf])) == [1.0, "inf"]
        assert to_jsonable({3, 1}) == [1, 3]
        assert to_jsonable({(1, -1): 0.5}) == {"1,-1": 0.5}

    def test_dumps_is_deterministic(self) -> None:
        """Test sorted keys and the trailing newline."""
        text = dumps({"b": 1, "a": [math.inf]})
        assert text.endswith("}\n")
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {"a": ["inf"], "b": 1}
        assert dumps({"a": 1, "b": 2}) == dumps({"b": 2, "a": 1})

    def test_write_csv(self) -> None:
        """Test CSV text with empty cells for missing values."""
        path = Path(self.temp_dir) / "table.csv"
        text = write_csv(("k", "ratio"), [(1, None), (2, 0.5)], path)
        assert text == "k,ratio\n1,\n2,0.5\n"
        assert path.read_text(encoding="utf-8") == text

    def test_report_checks(self) -> None:
        """Test that a breached tolerance fails the report."""
        report = Report("growth", {}, "n/a", None, {})
        report.check("within", 0.5, 1.0)
        assert report.passed
        report.check("breached", 2.0, 1.0)
        assert not report.passed
        assert report.failures == ["breached"]
        payload = report.as_dict()
        assert payload["results"]["checks"]["breached"]["passed"] is False
        assert payload["settings"]["max_elements"] == 2_000_000

    def test_new_report_embeds_config(self) -> None:
        """Test that reports carry the resolved configuration."""
        config = ExperimentConfig("growth", group="Z", output=Path("a.json"))
        report = new_report(config, "n/a", 1e-9)
        report.extra = {"kind": "local"}
        payload = report.as_dict()
        assert payload["config"]["group"] == "Z"
        assert payload["config"]["output"] == "a.json"
        assert payload["kind"] == "local"
        assert payload["tolerance"] == 1e-9

    def test_dump_potential_is_loadable(self) -> None:
        """Test that a dumped potential reads back as the same function."""
        original = product_potential()
        path = Path(self.temp_dir) / "potential.json"
        write_json(dump_potential(original), path)
        loaded = load_potential(path)
        for values in ({0: 1, 1: 1}, {0: 1, 1: -1}, {0: -1, 1: 1}):
            pattern = line(values)
            assert loaded.evaluate(pattern) == original.evaluate(pattern)

    def test_dump_kernel(self) -> None:
        """Test kernel rows keyed by the window symbols."""
        kernel = dlr_kernel(
            InteractionSource(ising_interaction(0.5)),
            [Z.identity],
            line({-1: 1, 1: 1}),
        )
        payload = dump_kernel(kernel)
        assert payload["region"] == ["0"]
        assert payload["semantics"] == "local"
        assert payload["probabilities"]["1"] == pytest.approx(0.880797, 1e-6)
        assert math.fsum(payload["probabilities"].values()) == pytest.approx(
            1.0
        )


if __name__ == "__main__":
    pytest.main([__file__])
