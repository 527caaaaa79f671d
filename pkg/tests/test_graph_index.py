# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

import struct

import pytest

from topigen.config import INDEX_FORMAT_VERSION, INDEX_MAGIC
from topigen.errors import IndexFormatError, IndexVersionError
from topigen.graph_index import load_index, save_index

from .conftest import make_graph


def test_round_trip(tmp_path, pearl_graph):
    path = tmp_path / "graph.idx"
    save_index(pearl_graph, path)
    loaded = load_index(path)

    assert loaded == pearl_graph
    assert loaded.stats == pearl_graph.stats
    assert loaded.label("dbc:Gemstones") == "Gemstones"
    assert loaded.parents("dbr:Pearl") == {"dbc:Gemstones"}
    assert path.read_bytes().startswith(b"TOPIGEN1")


def test_round_trip_of_empty_graph(tmp_path):
    path = tmp_path / "graph.idx"
    save_index(make_graph(), path)

    assert len(load_index(path)) == 0


def test_no_temporary_files_are_left(tmp_path, pearl_graph):
    save_index(pearl_graph, tmp_path / "graph.idx")

    assert [p.name for p in tmp_path.iterdir()] == ["graph.idx"]


def test_not_an_index(tmp_path):
    path = tmp_path / "graph.idx"
    path.write_bytes(b"dbr:Pearl\tdbc:Gemstones\n")

    with pytest.raises(IndexFormatError):
        load_index(path)


def test_other_magic_version_is_rejected(tmp_path, pearl_graph):
    path = tmp_path / "graph.idx"
    save_index(pearl_graph, path)
    path.write_bytes(b"TOPIGEN2" + path.read_bytes()[len(INDEX_MAGIC):])

    with pytest.raises(IndexVersionError):
        load_index(path)


def test_other_format_version_is_rejected(tmp_path, pearl_graph):
    path = tmp_path / "graph.idx"
    save_index(pearl_graph, path)
    data = path.read_bytes()
    header_end = len(INDEX_MAGIC) + 2
    path.write_bytes(INDEX_MAGIC + struct.pack("<H", INDEX_FORMAT_VERSION + 1) + data[header_end:])

    with pytest.raises(IndexVersionError) as info:
        load_index(path)
    assert "re-run ingest" in str(info.value)


def test_corrupt_payload(tmp_path):
    path = tmp_path / "graph.idx"
    path.write_bytes(INDEX_MAGIC + struct.pack("<H", INDEX_FORMAT_VERSION) + b"not a numpy archive")

    with pytest.raises(IndexFormatError):
        load_index(path)


@pytest.mark.parametrize("data", [b"", b"TOPIGEN", b"TOPIGEN1", b"TOPIGEN1\x01"])
def test_truncated_header(tmp_path, data):
    path = tmp_path / "graph.idx"
    path.write_bytes(data)

    with pytest.raises(IndexFormatError):
        load_index(path)
