# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
Topical generalization: pairs groups of profile topics with broader categories
of the category graph.

1. traverse: for every topic, the categories reachable through one subject edge
   followed by at most m-1 broader edges, each at its minimum distance;
2. build_matrix: the sparse category x topic distance matrix of a profile;
3. rank_categories: rows ordered by adoption rank, lower is better;
4. cluster: greedy selection of ranked rows that cover at least two topics not
   assigned yet. Topics left over are orphans.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from topigen.common_funcs import atomic_write, dumps_line, iter_jsonl
from topigen.config import DEFAULT_KAPPA, DEFAULT_M, GeneralizationConfig
from topigen.errors import ConfigError, SchemaError

logger = logging.getLogger(__name__)


def _traverse_indices(graph, topic, m):
    # Breadth first by level; every category is kept at the first level it is seen
    start = graph.index_of(topic)
    if start is None:
        return {}
    distances = {}
    frontier = []
    for category in graph.subject_targets(start).tolist():
        if category not in distances:
            distances[category] = 0
            frontier.append(category)
    for level in range(1, m):
        next_frontier = []
        for category in frontier:
            for broader in graph.broader_targets(category).tolist():
                if broader not in distances:
                    distances[broader] = level
                    next_frontier.append(broader)
        if not next_frontier:
            break
        frontier = next_frontier
    return distances


def traverse(graph, topic, m):
    """
    Finds the categories of a topic and their broader categories.

    Parameters:
        graph (CategoryGraph): The category graph.
        topic (str): An article id. Unknown ids are allowed.
        m (int): Max number of edges, counting the subject edge.

    Returns:
        dict: Category id -> minimum number of broader edges on a path from the
        topic, always in [0, m).
    """
    if m < 1:
        raise ConfigError(f"m must be a positive integer, got {m!r}")
    return {graph.node_ids[i]: distance for i, distance in _traverse_indices(graph, topic, m).items()}


class DistanceMatrix:
    """
    Sparse |C| x |E| matrix of category-topic distances. Absent entries are null.

    Entries are held as parallel coordinate arrays sorted by (row, column);
    rows follow category id order and columns follow `topics`.
    """

    def __init__(self, topics, categories, rows, columns, distances, m):
        self.topics = tuple(topics)
        self.categories = tuple(categories)
        self.rows = np.asarray(rows, dtype=np.int32)
        self.columns = np.asarray(columns, dtype=np.int32)
        self.distances = np.asarray(distances, dtype=np.int8)
        self.m = m
        order = np.lexsort((self.columns, self.rows))
        self.rows, self.columns, self.distances = self.rows[order], self.columns[order], self.distances[order]
        self.row_index = {category: i for i, category in enumerate(self.categories)}
        self._row_bounds = np.searchsorted(self.rows, np.arange(len(self.categories) + 1))

    @classmethod
    def from_entries(cls, topics, entries, m):
        """
        Builds a matrix from a mapping (category, topic) -> distance.
        """
        topics = tuple(topics)
        column_of = {topic: j for j, topic in enumerate(topics)}
        categories = sorted({category for category, _ in entries})
        row_of = {category: i for i, category in enumerate(categories)}
        keys = list(entries)
        return cls(
            topics,
            categories,
            [row_of[category] for category, _ in keys],
            [column_of[topic] for _, topic in keys],
            [entries[key] for key in keys],
            m,
        )

    def __len__(self):
        return len(self.categories)

    @property
    def shape(self):
        return len(self.categories), len(self.topics)

    @cached_property
    def entries(self):
        return {
            (self.categories[i], self.topics[j]): int(d)
            for i, j, d in zip(self.rows.tolist(), self.columns.tolist(), self.distances.tolist())
        }

    def get(self, category, topic):
        return self.entries.get((category, topic))

    def row(self, category):
        """Topic id -> distance for the non-null entries of a row, in column order."""
        i = self.row_index[category]
        start, end = self._row_bounds[i], self._row_bounds[i + 1]
        return {self.topics[j]: int(d) for j, d in zip(self.columns[start:end].tolist(),
                                                        self.distances[start:end].tolist())}

    def row_topics(self, category):
        i = self.row_index[category]
        start, end = self._row_bounds[i], self._row_bounds[i + 1]
        return [self.topics[j] for j in self.columns[start:end].tolist()]

    def coverage(self):
        """Non-null entries per row."""
        return np.bincount(self.rows, minlength=len(self.categories)).astype(np.int64)

    def distance_sums(self):
        """Sum of the non-null entries per row."""
        return np.bincount(self.rows, weights=self.distances, minlength=len(self.categories)).astype(np.int64)


def build_matrix(graph, profile, config, jobs=1):
    """
    Builds the distance matrix of a profile.

    Columns are all profile topics in canonical order (weight desc, then id),
    including topics missing from the graph; rows are exactly the categories
    reached by at least one traversal.

    Parameters:
        graph (CategoryGraph): The category graph.
        profile (TopicProfile): The profile.
        config (GeneralizationConfig): Supplies m.
        jobs (int): Threads used for the per-topic traversals. The traversals are pure
            Python and hold the GIL, so threads give little speedup; `topigen generalize
            --jobs` runs whole profiles in worker processes instead.

    Returns:
        DistanceMatrix
    """
    topics = profile.ordered_topics()

    def column(topic):
        return _traverse_indices(graph, topic, config.m)

    if jobs > 1 and len(topics) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            columns = list(executor.map(column, topics))
    else:
        columns = [column(topic) for topic in topics]

    # Rows in category id order; node ids are interned in that order already
    reached = sorted(set().union(*columns)) if columns else []
    row_of = {node: i for i, node in enumerate(reached)}

    sizes = [len(distances) for distances in columns]
    rows = np.empty(sum(sizes), dtype=np.int32)
    column_numbers = np.repeat(np.arange(len(topics), dtype=np.int32), sizes)
    distances = np.empty(sum(sizes), dtype=np.int8)
    position = 0
    for distances_of_topic in columns:
        for node, distance in distances_of_topic.items():
            rows[position] = row_of[node]
            distances[position] = distance
            position += 1

    matrix = DistanceMatrix(topics, [graph.node_ids[node] for node in reached], rows, column_numbers, distances,
                            config.m)
    logger.debug("Profile %s: %d topics, %d categories, %d entries", profile.user_id, len(topics), len(reached),
                 len(rows))
    return matrix


def adoption_rank(distance_sum, coverage, kappa):
    """
    Returns kappa / coverage**2 + distance_sum / coverage. Lower values belong to
    categories that cover more topics and/or sit closer to them.

    Raises:
        ValueError: coverage is below 1 or kappa is not positive.
    """
    if coverage < 1:
        raise ValueError(f"coverage must be at least 1, got {coverage!r}")
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    return kappa / coverage ** 2 + distance_sum / coverage


@dataclass(frozen=True)
class RankedCategory:
    category: str
    rank: float
    coverage: int
    distance_sum: int


def rank_categories(matrix, config):
    """
    Orders the matrix rows by adoption rank, ascending. Exact ties go to the
    higher coverage first, then to the smaller category id.

    Returns:
        list of RankedCategory
    """
    coverage = matrix.coverage().tolist()
    sums = matrix.distance_sums().tolist()
    ranked = [
        RankedCategory(category, adoption_rank(sums[i], coverage[i], config.kappa), coverage[i], sums[i])
        for i, category in enumerate(matrix.categories)
    ]
    ranked.sort(key=lambda record: (record.rank, -record.coverage, record.category))
    return ranked


@dataclass(frozen=True)
class Cluster:
    category: str
    rank: float
    members: tuple
    newly_assigned: tuple


@dataclass(frozen=True)
class ClusterSet:
    clusters: tuple = ()
    orphans: tuple = ()
    user_id: Optional[str] = None
    config: Optional[GeneralizationConfig] = None

    def to_dict(self):
        config = self.config or GeneralizationConfig()
        return {
            "user_id": self.user_id,
            "config": config.to_dict(),
            "clusters": [
                {
                    "category": cluster.category,
                    "rank": cluster.rank,
                    "members": list(cluster.members),
                    "newly_assigned": list(cluster.newly_assigned),
                }
                for cluster in self.clusters
            ],
            "orphans": list(self.orphans),
        }


def cluster(ranked, matrix, topics):
    """
    Selects clusters from the ranked rows.

    Walks the ranked rows once. A row becomes a cluster when it covers at least
    two topics that no earlier cluster took; those topics are then assigned.
    The walk stops as soon as every topic is assigned.

    Parameters:
        ranked (list of RankedCategory): Rows of `matrix` in rank order.
        matrix (DistanceMatrix): The matrix the ranking was computed from.
        topics (iterable of str): The profile topic set E.

    Returns:
        ClusterSet: Cluster members are all topics of the row; newly_assigned are
        the ones the cluster took. Orphans are the topics never assigned.
    """
    order = {topic: j for j, topic in enumerate(matrix.topics)}

    def canonical(items):
        return tuple(sorted(items, key=lambda topic: (order.get(topic, len(order)), topic)))

    to_assign = set(topics)
    clusters = []
    for record in ranked:
        if not to_assign:
            break
        members = matrix.row_topics(record.category)
        in_both = to_assign.intersection(members)
        if len(in_both) > 1:
            clusters.append(Cluster(record.category, record.rank, canonical(members), canonical(in_both)))
            to_assign -= in_both

    return ClusterSet(clusters=tuple(clusters), orphans=canonical(to_assign))


def generalize(graph, profile, config=None, jobs=1):
    """
    Runs build_matrix, rank_categories and cluster for one profile.
    """
    config = config or GeneralizationConfig()
    matrix = build_matrix(graph, profile, config, jobs=jobs)
    ranked = rank_categories(matrix, config)
    result = cluster(ranked, matrix, profile.topics)
    logger.info("Profile %s: %d topics, %d candidate categories, %d clusters, %d orphans", profile.user_id,
                len(profile), len(matrix), len(result.clusters), len(result.orphans))
    return ClusterSet(result.clusters, result.orphans, user_id=profile.user_id, config=config)


def _topic_list(value, path, line_number, name):
    if not isinstance(value, list) or not all(isinstance(topic, str) and topic for topic in value):
        raise SchemaError(path, line_number, f"{name} must be a list of topic ids")
    return tuple(value)


def _parse_cluster_set(record, path, line_number):
    if not isinstance(record, dict) or not isinstance(record.get("clusters"), list):
        raise SchemaError(path, line_number, "cluster set record must be an object with a 'clusters' list")
    raw_config = record.get("config") or {}
    try:
        config = GeneralizationConfig(m=raw_config.get("m", DEFAULT_M), kappa=raw_config.get("kappa", DEFAULT_KAPPA))
    except (ConfigError, TypeError) as err:
        raise SchemaError(path, line_number, f"invalid config: {err}") from err

    clusters = []
    for entry in record["clusters"]:
        if not isinstance(entry, dict) or not isinstance(entry.get("category"), str):
            raise SchemaError(path, line_number, "cluster entries must be objects with a 'category'")
        rank = entry.get("rank")
        if isinstance(rank, bool) or not isinstance(rank, (int, float)):
            raise SchemaError(path, line_number, f"rank of {entry['category']} must be a number")
        members = _topic_list(entry.get("members"), path, line_number, "members")
        newly_assigned = _topic_list(entry.get("newly_assigned"), path, line_number, "newly_assigned")
        if len(newly_assigned) < 2 or not set(newly_assigned) <= set(members):
            raise SchemaError(path, line_number,
                              f"cluster {entry['category']} must assign at least two of its own members")
        clusters.append(Cluster(entry["category"], float(rank), members, newly_assigned))

    orphans = _topic_list(record.get("orphans", []), path, line_number, "orphans")
    user_id = record.get("user_id")
    if user_id is not None and not isinstance(user_id, str):
        raise SchemaError(path, line_number, "user_id must be a string")
    return ClusterSet(tuple(clusters), orphans, user_id=user_id, config=config)


def load_cluster_sets(path):
    return [_parse_cluster_set(record, path, line_number) for line_number, record in iter_jsonl(path)]


def save_cluster_sets(cluster_sets, path):
    with atomic_write(path) as out_file:
        for cluster_set in cluster_sets:
            out_file.write(dumps_line(cluster_set.to_dict()))
