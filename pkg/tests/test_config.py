# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

import pytest

from topigen.config import MAX_M, GeneralizationConfig, LayoutConfig, PipelineConfig
from topigen.errors import ConfigError, IndexVersionError, ParseError, ProtocolError, TopigenError, TransportError


@pytest.mark.parametrize("kwargs", [{"m": 0}, {"m": -1}, {"m": 2.5}, {"m": True}, {"m": 129}, {"kappa": 0},
                                    {"kappa": -1.0}])
def test_invalid_generalization_config(kwargs):
    with pytest.raises(ConfigError):
        GeneralizationConfig(**kwargs)


def test_generalization_defaults():
    assert GeneralizationConfig().to_dict() == {"m": 3, "kappa": 1.0}
    assert isinstance(GeneralizationConfig(kappa=2).kappa, float)


def test_largest_m_fits_the_stored_distances():
    assert GeneralizationConfig(m=MAX_M).m == 128


@pytest.mark.parametrize("kwargs", [
    {"mode": "tree"},
    {"k": 0},
    {"more_template": "and {total} more"},
    {"single_template": "in {category"},
])
def test_invalid_layout_config(kwargs):
    with pytest.raises(ConfigError):
        LayoutConfig(**kwargs)


@pytest.mark.parametrize("kwargs", [{"output_format": "pdf"}, {"jobs": 0}, {"mode": "tree"}, {"m": 0}])
def test_invalid_pipeline_config(kwargs):
    with pytest.raises(ConfigError):
        PipelineConfig(**kwargs)


def test_pipeline_config_parts():
    config = PipelineConfig(m=2, kappa=0.5, k=4, mode="clustered")

    assert config.generalization() == GeneralizationConfig(m=2, kappa=0.5)
    assert config.layout(more_template="+{count}") == LayoutConfig(mode="clustered", k=4, more_template="+{count}")


def test_exit_codes():
    assert ConfigError("x").exit_code == 1
    assert ParseError("a.tsv", 3, "bad").exit_code == 1
    assert IndexVersionError("x").exit_code == 3
    assert TransportError("x").exit_code == 4
    assert ProtocolError("x").exit_code == 4
    assert issubclass(TransportError, TopigenError)
