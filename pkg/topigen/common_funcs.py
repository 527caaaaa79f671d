# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
Helpers shared by the topigen modules and the scripts in `utils/`.
"""

import contextlib
import gzip
import json
import os
import re
import tempfile
from pathlib import Path

from topigen.errors import ParseError, SchemaError

_WHITESPACE = re.compile(r"\s")


def local_name(node_id):
    """
    Returns the display fallback of a node id: the part after the last "/" or ":",
    with underscores turned into spaces.

    Parameters:
        node_id (str): An IRI or a curie such as "dbc:Gemstones".

    Returns:
        str: The local name, or the id itself when the local name would be empty.
    """
    tail = re.split(r"[/:]", node_id)[-1]
    name = tail.replace("_", " ").strip()
    return name or node_id


def is_valid_node_id(node_id):
    return bool(node_id) and not _WHITESPACE.search(node_id)


def iter_lines(path, error=ParseError):
    """
    Iterates over the lines of a UTF-8 text file, transparently decompressing
    ".gz" files. Lines are decoded one at a time so that a bad byte is reported
    with its line number.

    Parameters:
        path (str or Path): The file to read.
        error (type): `ParseError` or `SchemaError`, raised for undecodable lines.

    Returns:
        iterator of (int, str): The 1-based line number and the line, newline included.
    """
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as in_file:
        for line_number, raw_line in enumerate(in_file, start=1):
            try:
                yield line_number, raw_line.decode("utf-8")
            except UnicodeDecodeError as err:
                raise error(path, line_number, f"invalid UTF-8 at byte {err.start}") from err


def iter_tsv(path, field_count):
    """
    Iterates over the rows of a tab separated file. Blank lines and lines starting
    with "#" are skipped.

    Parameters:
        path (str or Path): The file to read.
        field_count (int): The exact number of fields every row must have.

    Returns:
        iterator of (int, list): The 1-based line number and the fields of each row.

    Raises:
        ParseError: When a row is not valid UTF-8 or has the wrong number of fields.
    """
    for line_number, line in iter_lines(path, ParseError):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != field_count:
            raise ParseError(path, line_number, f"expected {field_count} tab separated fields, found {len(fields)}")
        yield line_number, fields


def iter_jsonl(path):
    """
    Iterates over the records of a JSON-lines file, skipping blank lines.

    Returns:
        iterator of (int, object): The 1-based line number and the decoded record.

    Raises:
        SchemaError: When a line is not valid UTF-8 or not valid JSON.
    """
    for line_number, line in iter_lines(path, SchemaError):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            raise SchemaError(path, line_number, f"invalid JSON: {err.msg}") from err
        yield line_number, record


def dumps_line(record, sort_keys=False):
    return json.dumps(record, ensure_ascii=False, sort_keys=sort_keys) + "\n"


@contextlib.contextmanager
def atomic_write(path, binary=False):
    """
    Opens a temporary file next to `path` for writing and moves it into place
    when the block finishes without an exception. On failure the temporary file
    is removed and `path` is left untouched. Missing parent directories are created.
    """
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    file_descriptor, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        if binary:
            with os.fdopen(file_descriptor, "wb") as out_file:
                yield out_file
        else:
            with os.fdopen(file_descriptor, "w", encoding="utf-8", newline="\n") as out_file:
                yield out_file
        os.replace(temp_name, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(temp_name)
        raise


def get_max_sizes(sizes):
    """
    Returns the largest and second largest sizes in a mapping of names to sizes,
    along with the names that have them.

    Parameters:
        sizes (dict): Maps a name (e.g. a user id) to a size (e.g. a topic count).

    Returns:
        tuple: A tuple containing:
        * the maximum size (int)
        * a list of names with the maximum size (list)
        * the second maximum size (int)
        * a list of names with the second maximum size (list)
    """
    max_size = 0
    second_max_size = 0
    max_size_names = []
    second_max_size_names = []

    # Sorted so that names come out in a stable order
    for name in sorted(sizes):
        size = sizes[name]
        if size > max_size:
            second_max_size = max_size
            second_max_size_names = max_size_names
            max_size = size
            max_size_names = [name]
        elif size == max_size:
            max_size_names.append(name)
        elif size > second_max_size:
            second_max_size = size
            second_max_size_names = [name]
        elif size == second_max_size:
            second_max_size_names.append(name)

    return max_size, max_size_names, second_max_size, second_max_size_names
