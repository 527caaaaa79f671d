# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
The category graph: articles linked to categories by subject edges, and
categories linked to broader categories. The broader relation is a folksonomy
and may contain cycles.

Node ids are interned to integers in lexicographic order and adjacency is kept
as sorted CSR arrays. The graph is immutable once built.
"""

import logging
from dataclasses import asdict, dataclass
from functools import cached_property

import numpy as np
from rdflib import Literal, URIRef
from rdflib.exceptions import ParserError as RdfParserError
from rdflib.plugins.parsers.ntriples import W3CNTriplesParser
from tqdm import tqdm

from topigen.common_funcs import is_valid_node_id, iter_lines, iter_tsv, local_name
from topigen.errors import ClassificationConflictError, ParseError

logger = logging.getLogger(__name__)

# Predicates consumed from N-Triples dumps, matched on the end of the IRI
SUBJECT_PREDICATE_SUFFIX = "/terms/subject"
BROADER_PREDICATE_SUFFIX = "/core#broader"
# rdfs:label and skos:prefLabel
LABEL_PREDICATE_SUFFIXES = ("#label", "#prefLabel")


@dataclass(frozen=True)
class IngestStats:
    nodes: int = 0
    articles: int = 0
    categories: int = 0
    subject_edges: int = 0
    broader_edges: int = 0
    labels: int = 0
    duplicates_dropped: int = 0
    skipped_triples: int = 0
    invalid_skipped: int = 0

    def to_dict(self):
        return asdict(self)


def _to_csr(pairs, index, size):
    # Sorted (source, target) arrays compressed by source
    indptr = np.zeros(size + 1, dtype=np.int64)
    if not pairs:
        return indptr, np.empty(0, dtype=np.int32)
    sources = np.fromiter((index[source] for source, _ in pairs), dtype=np.int32, count=len(pairs))
    targets = np.fromiter((index[target] for _, target in pairs), dtype=np.int32, count=len(pairs))
    order = np.lexsort((targets, sources))
    sources, targets = sources[order], targets[order]
    np.cumsum(np.bincount(sources, minlength=size), out=indptr[1:])
    return indptr, targets


class CategoryGraph:
    """
    Read-only category graph. Build one with `GraphBuilder`, `ingest_tsv`,
    `ingest_ntriples_subset` or `graph_index.load_index`.
    """

    def __init__(self, node_ids, is_category, subject_csr, broader_csr, labels=None, stats=None):
        self.node_ids = tuple(node_ids)
        self.is_category = np.asarray(is_category, dtype=bool)
        self.subject_indptr, self.subject_indices = subject_csr
        self.broader_indptr, self.broader_indices = broader_csr
        self._index = {node_id: i for i, node_id in enumerate(self.node_ids)}
        self._labels = dict(labels or {})
        self.stats = stats or IngestStats(
            nodes=len(self.node_ids),
            articles=int((~self.is_category).sum()),
            categories=int(self.is_category.sum()),
            subject_edges=len(self.subject_indices),
            broader_edges=len(self.broader_indices),
            labels=len(self._labels),
        )

    def __len__(self):
        return len(self.node_ids)

    def __contains__(self, node_id):
        return node_id in self._index

    def __eq__(self, other):
        if not isinstance(other, CategoryGraph):
            return NotImplemented
        return (
            self.node_ids == other.node_ids
            and np.array_equal(self.is_category, other.is_category)
            and np.array_equal(self.subject_indptr, other.subject_indptr)
            and np.array_equal(self.subject_indices, other.subject_indices)
            and np.array_equal(self.broader_indptr, other.broader_indptr)
            and np.array_equal(self.broader_indices, other.broader_indices)
            and self._labels == other._labels
        )

    __hash__ = None

    def __repr__(self):
        return (f"CategoryGraph(articles={self.stats.articles}, categories={self.stats.categories}, "
                f"subject_edges={self.stats.subject_edges}, broader_edges={self.stats.broader_edges})")

    def index_of(self, node_id):
        return self._index.get(node_id)

    def subject_targets(self, i):
        return self.subject_indices[self.subject_indptr[i]:self.subject_indptr[i + 1]]

    def broader_targets(self, i):
        return self.broader_indices[self.broader_indptr[i]:self.broader_indptr[i + 1]]

    @cached_property
    def articles(self):
        return frozenset(node_id for node_id, flag in zip(self.node_ids, self.is_category) if not flag)

    @cached_property
    def categories(self):
        return frozenset(node_id for node_id, flag in zip(self.node_ids, self.is_category) if flag)

    @cached_property
    def subject_edges(self):
        return self._adjacency(self.subject_indptr, self.subject_indices)

    @cached_property
    def broader_edges(self):
        return self._adjacency(self.broader_indptr, self.broader_indices)

    def _adjacency(self, indptr, indices):
        edges = {}
        for i, node_id in enumerate(self.node_ids):
            start, end = indptr[i], indptr[i + 1]
            if end > start:
                edges[node_id] = frozenset(self.node_ids[j] for j in indices[start:end])
        return edges

    @property
    def labels(self):
        """Explicit labels only; use `label()` for the display string with fallback."""
        return dict(self._labels)

    def label(self, node_id):
        return self._labels.get(node_id) or local_name(node_id)

    def parents(self, article):
        """
        Returns the categories an article is directly filed under. Unknown ids and
        categories have no parents.
        """
        i = self._index.get(article)
        if i is None:
            return frozenset()
        return frozenset(self.node_ids[j] for j in self.subject_targets(i))

    def broaders(self, category):
        i = self._index.get(category)
        if i is None:
            return frozenset()
        return frozenset(self.node_ids[j] for j in self.broader_targets(i))


class GraphBuilder:
    """
    Collects edges and labels, dropping duplicates, and builds a `CategoryGraph`.
    """

    def __init__(self):
        self._subject_pairs = set()
        self._broader_pairs = set()
        self._labels = {}
        self.duplicates_dropped = 0
        self.skipped_triples = 0
        self.invalid_skipped = 0

    def add_subject(self, article, category):
        self._add(self._subject_pairs, (article, category))

    def add_broader(self, category, broader):
        self._add(self._broader_pairs, (category, broader))

    def _add(self, pairs, pair):
        if pair in pairs:
            self.duplicates_dropped += 1
        else:
            pairs.add(pair)

    def add_label(self, node_id, label):
        if label:
            self._labels[node_id] = label

    def build(self):
        # Classification comes from edge position: subject edge sources are articles,
        # every other endpoint is a category
        articles = {article for article, _ in self._subject_pairs}
        categories = {category for _, category in self._subject_pairs}
        for category, broader in self._broader_pairs:
            categories.add(category)
            categories.add(broader)

        conflicts = articles & categories
        if conflicts:
            raise ClassificationConflictError(conflicts)

        node_ids = sorted(articles | categories)
        index = {node_id: i for i, node_id in enumerate(node_ids)}
        is_category = np.fromiter((node_id in categories for node_id in node_ids), dtype=bool, count=len(node_ids))

        labels = {node_id: label for node_id, label in self._labels.items() if node_id in index}
        if len(labels) < len(self._labels):
            logger.debug("Ignored %d labels of nodes without edges", len(self._labels) - len(labels))

        stats = IngestStats(
            nodes=len(node_ids),
            articles=len(articles),
            categories=len(categories),
            subject_edges=len(self._subject_pairs),
            broader_edges=len(self._broader_pairs),
            labels=len(labels),
            duplicates_dropped=self.duplicates_dropped,
            skipped_triples=self.skipped_triples,
            invalid_skipped=self.invalid_skipped,
        )
        return CategoryGraph(
            node_ids,
            is_category,
            _to_csr(self._subject_pairs, index, len(node_ids)),
            _to_csr(self._broader_pairs, index, len(node_ids)),
            labels=labels,
            stats=stats,
        )


def _read_edges(path, add_edge, progress):
    for line_number, (child, parent) in tqdm(iter_tsv(path, 2), desc=f"Reading {path}", unit=" lines",
                                             disable=not progress):
        for node_id in (child, parent):
            if not is_valid_node_id(node_id):
                raise ParseError(path, line_number, f"invalid node id {node_id!r}")
        add_edge(child, parent)


def ingest_tsv(subject_path, broader_path, labels_path=None, progress=False):
    """
    Builds a category graph from tab separated edge files.

    Parameters:
        subject_path (str or Path): Lines of "<article>\\t<category>".
        broader_path (str or Path): Lines of "<category>\\t<broader category>".
        labels_path (str or Path, optional): Lines of "<id>\\t<label>".
        progress (bool): Show a progress bar on standard error.

    Returns:
        CategoryGraph: The graph. Its `stats` holds the counts summary.

    Raises:
        ParseError: A line has the wrong number of fields or an invalid id.
        ClassificationConflictError: A node is used both as article and as category.
    """
    builder = GraphBuilder()
    _read_edges(subject_path, builder.add_subject, progress)
    _read_edges(broader_path, builder.add_broader, progress)

    if labels_path is not None:
        for line_number, (node_id, label) in iter_tsv(labels_path, 2):
            if not is_valid_node_id(node_id):
                raise ParseError(labels_path, line_number, f"invalid node id {node_id!r}")
            builder.add_label(node_id, label.strip())

    graph = builder.build()
    logger.info("Ingested %s", graph.stats.to_dict())
    return graph


class _LineSink:
    """
    Receives the triple that `W3CNTriplesParser` reads from a single line.
    """

    def __init__(self):
        self.parsed = None

    def triple(self, subject, predicate, obj):
        self.parsed = (subject, predicate, obj)


def _names_retained_predicate(line):
    # The predicate is the second term of a statement
    terms = line.split(None, 2)
    if len(terms) < 2 or not (terms[1].startswith("<") and terms[1].endswith(">")):
        return False
    return terms[1][1:-1].endswith((SUBJECT_PREDICATE_SUFFIX, BROADER_PREDICATE_SUFFIX))


def ingest_ntriples_subset(path, with_labels=False, progress=False):
    """
    Builds a category graph from an N-Triples dump. Only subject and broader
    triples are consumed (and English or untagged rdfs:label or skos:prefLabel
    literals when `with_labels` is set); every other line is counted as skipped.

    Lines are parsed one at a time with rdflib, so the dump is never held in
    memory and errors keep their line number.

    Parameters:
        path (str or Path): The dump, optionally gzip compressed.
        with_labels (bool): Read labels from label triples.
        progress (bool): Show a progress bar on standard error.

    Returns:
        CategoryGraph: The graph, IRIs kept verbatim as node ids.

    Raises:
        ParseError: A line is not valid UTF-8, or a subject or broader triple is malformed.
    """
    builder = GraphBuilder()
    sink = _LineSink()
    parser = W3CNTriplesParser(sink=sink)

    for line_number, line in tqdm(iter_lines(path, ParseError), desc=f"Reading {path}", unit=" lines",
                                  disable=not progress):
        line = line.strip()
        if not line or line.startswith("#"):
            continue

        sink.parsed = None
        try:
            parser.parsestring(line)
        except RdfParserError as err:
            if _names_retained_predicate(line):
                raise ParseError(path, line_number, "malformed subject or broader triple") from err
            builder.skipped_triples += 1
            builder.invalid_skipped += 1
            logger.warning("%s:%d: skipping malformed triple", path, line_number)
            continue

        subject, predicate, obj = sink.parsed
        predicate = str(predicate)
        if predicate.endswith((SUBJECT_PREDICATE_SUFFIX, BROADER_PREDICATE_SUFFIX)):
            if not (isinstance(subject, URIRef) and isinstance(obj, URIRef)):
                raise ParseError(path, line_number, "subject and broader triples must link two IRIs")
            if predicate.endswith(SUBJECT_PREDICATE_SUFFIX):
                builder.add_subject(str(subject), str(obj))
            else:
                builder.add_broader(str(subject), str(obj))
            continue

        builder.skipped_triples += 1
        if (with_labels and predicate.endswith(LABEL_PREDICATE_SUFFIXES) and isinstance(subject, URIRef)
                and isinstance(obj, Literal) and obj.language in (None, "en")):
            builder.add_label(str(subject), str(obj).strip())

    graph = builder.build()
    logger.info("Ingested %s", graph.stats.to_dict())
    return graph
