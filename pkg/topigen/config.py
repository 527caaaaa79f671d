# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from topigen.errors import ConfigError

################################################################################
# Generalization parameters
################################################################################

# Max number of broader edges followed after the subject edge
DEFAULT_M = 3

# Distances are stored as int8, so they must stay below 128
MAX_M = 128

# Tie penalty constant. Higher values favor coverage over the distance sum
DEFAULT_KAPPA = 1.0

################################################################################
# Layout parameters
################################################################################

LAYOUT_MODES = ("flat", "nested", "clustered")
OUTPUT_FORMATS = ("json", "html")

# Topics shown per cluster in the clustered layout
DEFAULT_K = 3

LAYOUT_VERSION = 1

# More-link texts of the clustered layout
MORE_TEMPLATE = "and {count} more topics in {category}"
SINGLE_TEMPLATE = "in category {category}"

################################################################################
# Annotation service parameters
################################################################################

ANNOTATOR_URL_ENV = "TOPIGEN_ANNOTATOR_URL"
DEFAULT_CONFIDENCE = 0.5

# Attempts per request, and the base of the exponential wait between them (seconds)
DEFAULT_ATTEMPTS = 3
DEFAULT_BACKOFF = 1.0

# Request timeout in seconds
DEFAULT_TIMEOUT = 30

################################################################################
# Graph index
################################################################################

INDEX_MAGIC = b"TOPIGEN1"
INDEX_FORMAT_VERSION = 1


@dataclass(frozen=True)
class GeneralizationConfig:
    m: int = DEFAULT_M
    kappa: float = DEFAULT_KAPPA

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise ConfigError(f"m must be a positive integer, got {self.m!r}")
        if self.m > MAX_M:
            raise ConfigError(f"m must be at most {MAX_M}, got {self.m}")
        if not self.kappa > 0:
            raise ConfigError(f"kappa must be positive, got {self.kappa!r}")
        object.__setattr__(self, "kappa", float(self.kappa))

    def to_dict(self):
        return {"m": self.m, "kappa": self.kappa}


@dataclass(frozen=True)
class LayoutConfig:
    mode: str = "flat"
    k: int = DEFAULT_K
    more_template: str = MORE_TEMPLATE
    single_template: str = SINGLE_TEMPLATE

    def __post_init__(self):
        if self.mode not in LAYOUT_MODES:
            raise ConfigError(f"unknown layout mode {self.mode!r}, expected one of {', '.join(LAYOUT_MODES)}")
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        # Both templates are formatted with count= and category=
        for template in (self.more_template, self.single_template):
            try:
                template.format(count=0, category="")
            except (KeyError, IndexError, ValueError) as err:
                raise ConfigError(f"invalid more-link template {template!r}: {err}") from err


@dataclass(frozen=True)
class PipelineConfig:
    """
    Settings of one command line run. Building one validates the generalization
    and layout settings before any work starts.
    """
    graph_index_path: Optional[Path] = None
    m: int = DEFAULT_M
    kappa: float = DEFAULT_KAPPA
    k: int = DEFAULT_K
    mode: str = "flat"
    output_format: str = "json"
    input_paths: tuple = ()
    output_path: Optional[Path] = None
    service_url: Optional[str] = None
    jobs: int = 1

    def __post_init__(self):
        # Raises on invalid values
        self.generalization()
        self.layout()
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format {self.output_format!r}, expected json or html")
        if isinstance(self.jobs, bool) or not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError(f"jobs must be a positive integer, got {self.jobs!r}")

    def generalization(self):
        return GeneralizationConfig(m=self.m, kappa=self.kappa)

    def layout(self, **templates):
        return LayoutConfig(mode=self.mode, k=self.k, **templates)
