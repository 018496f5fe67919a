from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .kernel import DEFAULT_FUEL
from .lexicon import DEFAULT_MAX_DEPTH

FORMATS = ("pretty", "sexpr")


@dataclass(frozen=True)
class Config:
    lexicon_path: Path | None = None
    ontology_path: Path | None = None
    max_coercion_depth: int = DEFAULT_MAX_DEPTH
    fuel: int = DEFAULT_FUEL
    elide_inclusions: bool = False
    output_format: str = "pretty"

    def __post_init__(self):
        if self.max_coercion_depth < 0:
            raise ValueError("max_coercion_depth must be >= 0")
        if self.fuel < 1:
            raise ValueError("fuel must be >= 1")
        if self.output_format not in FORMATS:
            raise ValueError(f"output_format must be one of {', '.join(FORMATS)}")
