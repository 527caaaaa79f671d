# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
On-disk index of a category graph, so a dump is parsed once and reused.

Layout: the 8 byte magic "TOPIGEN1", a little-endian uint16 format version,
then a compressed numpy archive holding the interned node ids, the category
flags, both CSR adjacencies, the labels and the ingest counts.
"""

import io
import json
import logging
import struct
import zipfile

import numpy as np

from topigen.category_graph import CategoryGraph, IngestStats
from topigen.common_funcs import atomic_write
from topigen.config import INDEX_FORMAT_VERSION, INDEX_MAGIC
from topigen.errors import IndexFormatError, IndexVersionError

logger = logging.getLogger(__name__)

_VERSION = struct.Struct("<H")
_MAGIC_STEM = INDEX_MAGIC[:-1]


def _encode_strings(strings):
    # Node ids never contain whitespace, labels never contain newlines after TSV parsing
    return np.frombuffer("\n".join(strings).encode("utf-8"), dtype=np.uint8)


def _decode_strings(array):
    text = array.tobytes().decode("utf-8")
    return text.split("\n") if text else []


def save_index(graph, path):
    """
    Writes `graph` to `path` atomically.
    """
    label_ids = sorted(graph.labels)
    label_index = np.fromiter((graph.index_of(node_id) for node_id in label_ids), dtype=np.int32,
                              count=len(label_ids))
    label_values = [graph.labels[node_id].replace("\n", " ") for node_id in label_ids]

    payload = io.BytesIO()
    np.savez_compressed(
        payload,
        node_ids=_encode_strings(graph.node_ids),
        is_category=graph.is_category,
        subject_indptr=graph.subject_indptr,
        subject_indices=graph.subject_indices,
        broader_indptr=graph.broader_indptr,
        broader_indices=graph.broader_indices,
        label_index=label_index,
        label_values=_encode_strings(label_values),
        stats=_encode_strings([json.dumps(graph.stats.to_dict(), sort_keys=True)]),
    )

    with atomic_write(path, binary=True) as index_file:
        index_file.write(INDEX_MAGIC)
        index_file.write(_VERSION.pack(INDEX_FORMAT_VERSION))
        index_file.write(payload.getvalue())
    logger.info("Wrote graph index %s", path)


def load_index(path):
    """
    Reads a graph written by `save_index`.

    Raises:
        IndexFormatError: The file is not a topigen index or is corrupt.
        IndexVersionError: The index was written by an incompatible version.
    """
    with open(path, "rb") as index_file:
        header = index_file.read(len(INDEX_MAGIC) + _VERSION.size)
        payload = index_file.read()

    magic = header[:len(INDEX_MAGIC)]
    if magic != INDEX_MAGIC:
        # Only a complete magic with another last byte is a different format version
        if len(magic) == len(INDEX_MAGIC) and magic.startswith(_MAGIC_STEM):
            raise IndexVersionError(f"{path}: index magic {magic!r} does not match {INDEX_MAGIC!r}; re-run ingest")
        raise IndexFormatError(f"{path}: not a topigen graph index")
    if len(header) < len(INDEX_MAGIC) + _VERSION.size:
        raise IndexFormatError(f"{path}: truncated graph index")

    (version,) = _VERSION.unpack(header[len(INDEX_MAGIC):])
    if version != INDEX_FORMAT_VERSION:
        raise IndexVersionError(
            f"{path}: index format version {version}, this topigen reads version {INDEX_FORMAT_VERSION}; re-run ingest"
        )

    try:
        with np.load(io.BytesIO(payload), allow_pickle=False) as arrays:
            node_ids = _decode_strings(arrays["node_ids"])
            label_values = _decode_strings(arrays["label_values"])
            labels = {node_ids[i]: label for i, label in zip(arrays["label_index"].tolist(), label_values)}
            stats = IngestStats(**json.loads(_decode_strings(arrays["stats"])[0]))
            return CategoryGraph(
                node_ids,
                arrays["is_category"],
                (arrays["subject_indptr"], arrays["subject_indices"]),
                (arrays["broader_indptr"], arrays["broader_indices"]),
                labels=labels,
                stats=stats,
            )
    except (ValueError, KeyError, OSError, IndexError, zipfile.BadZipFile) as err:
        raise IndexFormatError(f"{path}: corrupt graph index ({err})") from err
