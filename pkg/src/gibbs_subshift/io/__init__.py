"""Input and Output Package.

Descriptor parsing, JSON loaders and deterministic report writers.
"""

from .descriptors import DescriptorParser
from .loaders import (
    load_config,
    load_interaction,
    load_json,
    load_potential,
    load_sft,
    load_source,
    load_weights,
    parse_interaction,
    parse_potential,
    parse_sft,
)
from .reports import (
    Report,
    dump_kernel,
    dump_potential,
    dumps,
    new_report,
    to_jsonable,
    write_csv,
    write_json,
)

__all__ = [
    "DescriptorParser",
    "Report",
    "dump_kernel",
    "dump_potential",
    "dumps",
    "load_config",
    "load_interaction",
    "load_json",
    "load_potential",
    "load_sft",
    "load_source",
    "load_weights",
    "new_report",
    "parse_interaction",
    "parse_potential",
    "parse_sft",
    "to_jsonable",
    "write_csv",
    "write_json",
]
