# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

from pathlib import Path

import pytest

from topigen.category_graph import GraphBuilder, ingest_tsv
from topigen.profile_builder import load_profiles

FIXTURES = Path(__file__).parent / "fixtures"


def make_graph(subject_edges=(), broader_edges=(), labels=None):
    builder = GraphBuilder()
    for article, category in subject_edges:
        builder.add_subject(article, category)
    for category, broader in broader_edges:
        builder.add_broader(category, broader)
    for node_id, label in (labels or {}).items():
        builder.add_label(node_id, label)
    return builder.build()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def pearl_graph():
    return ingest_tsv(FIXTURES / "pearl_subject.tsv", FIXTURES / "pearl_broader.tsv", FIXTURES / "pearl_labels.tsv")


@pytest.fixture
def fashion_graph():
    return ingest_tsv(FIXTURES / "fashion_subject.tsv", FIXTURES / "fashion_broader.tsv")


@pytest.fixture
def fashion_profile():
    (profile,) = load_profiles(FIXTURES / "fashion_profiles.jsonl")
    return profile
