# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
Topical user profiles: the topics found in a user's documents, each weighted by
the number of documents that mention it.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from topigen.common_funcs import atomic_write, dumps_line, is_valid_node_id, iter_jsonl
from topigen.errors import ProfileMergeError, SchemaError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RawDocument:
    doc_id: str
    user_id: str
    text: str


@dataclass(frozen=True)
class AnnotatedDocument:
    doc_id: str
    user_id: str
    topics: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "topics", frozenset(self.topics))

    def to_dict(self):
        return {"doc_id": self.doc_id, "user_id": self.user_id, "topics": sorted(self.topics)}


@dataclass(frozen=True)
class TopicProfile:
    """
    A user's topics E with their document inlink counts.

    `doc_ids` holds the ids of the distinct documents the profile was built from,
    when known. It is not serialized and does not take part in equality.
    """
    user_id: str
    weights: dict = field(default_factory=dict)
    display_name: Optional[str] = None
    doc_ids: Optional[frozenset] = field(default=None, compare=False)

    def __post_init__(self):
        weights = dict(self.weights)
        for topic, weight in weights.items():
            if isinstance(weight, bool) or not isinstance(weight, int) or weight < 1:
                raise ValueError(f"weight of {topic!r} must be a positive integer, got {weight!r}")
        if self.doc_ids is not None:
            object.__setattr__(self, "doc_ids", frozenset(self.doc_ids))
            if weights and max(weights.values()) > self.doc_count:
                raise ValueError(f"profile {self.user_id!r} has a weight above its document count {self.doc_count}")
        object.__setattr__(self, "weights", weights)

    @property
    def doc_count(self):
        """Number of distinct documents the profile was built from, or None when unknown."""
        return None if self.doc_ids is None else len(self.doc_ids)

    @property
    def topics(self):
        return frozenset(self.weights)

    def __len__(self):
        return len(self.weights)

    def ordered_topics(self):
        """Topic ids by weight, highest first, then by id."""
        return sorted(self.weights, key=lambda topic: (-self.weights[topic], topic))

    def to_dict(self):
        return {
            "user_id": self.user_id,
            "display_name": self.display_name,
            "topics": [{"id": topic, "weight": self.weights[topic]} for topic in self.ordered_topics()],
        }


def _dedupe_documents(docs, user_id):
    # Last occurrence of a doc_id wins
    latest = {}
    for doc in docs:
        if doc.user_id != user_id:
            continue
        previous = latest.get(doc.doc_id)
        if previous is not None and previous.topics != doc.topics:
            logger.warning("Document %r of user %r appears twice with different topics; keeping the last",
                           doc.doc_id, user_id)
        latest[doc.doc_id] = doc
    return latest


def build_profile(docs, user_id, display_name=None):
    """
    Aggregates annotated documents into the profile of one user.

    Parameters:
        docs (iterable of AnnotatedDocument): Documents of any users; others are ignored.
        user_id (str): The user to build the profile for.
        display_name (str, optional): Name shown on the profile page.

    Returns:
        TopicProfile: weights[e] is the number of distinct documents mentioning e.
    """
    latest = _dedupe_documents(docs, user_id)
    weights = Counter()
    for doc in latest.values():
        weights.update(doc.topics)
    return TopicProfile(user_id, dict(weights), display_name=display_name, doc_ids=frozenset(latest))


def build_profiles(docs, user_id=None):
    """
    Builds one profile per user found in `docs` (or only for `user_id`), ordered by user id.
    """
    docs = list(docs)
    user_ids = sorted({doc.user_id for doc in docs})
    if user_id is not None:
        user_ids = [user_id] if user_id in user_ids else []
    return [build_profile(docs, uid) for uid in user_ids]


def merge_profiles(a, b):
    """
    Sums two profiles of the same user built from disjoint document sets.

    Raises:
        ProfileMergeError: The user ids differ, or both profiles know their
        documents and share some of them.
    """
    if a.user_id != b.user_id:
        raise ProfileMergeError(f"cannot merge profiles of {a.user_id!r} and {b.user_id!r}")

    doc_ids = None
    if a.doc_ids is not None and b.doc_ids is not None:
        shared = a.doc_ids & b.doc_ids
        if shared:
            raise ProfileMergeError(f"profiles of {a.user_id!r} were both built from documents "
                                    f"{', '.join(sorted(shared)[:3])}")
        doc_ids = a.doc_ids | b.doc_ids

    weights = Counter(a.weights)
    weights.update(b.weights)
    return TopicProfile(a.user_id, dict(weights), display_name=a.display_name or b.display_name, doc_ids=doc_ids)


def _require(condition, path, line_number, reason):
    if not condition:
        raise SchemaError(path, line_number, reason)


def _parse_profile(record, path, line_number):
    _require(isinstance(record, dict), path, line_number, "profile record must be a JSON object")
    user_id = record.get("user_id")
    _require(isinstance(user_id, str) and user_id, path, line_number, "user_id must be a non-empty string")
    display_name = record.get("display_name")
    _require(display_name is None or isinstance(display_name, str), path, line_number,
             "display_name must be a string or null")
    topics = record.get("topics", [])
    _require(isinstance(topics, list), path, line_number, "topics must be a list")

    weights = {}
    for entry in topics:
        _require(isinstance(entry, dict), path, line_number, "topic entries must be objects")
        topic, weight = entry.get("id"), entry.get("weight")
        _require(isinstance(topic, str) and is_valid_node_id(topic), path, line_number, f"invalid topic id {topic!r}")
        _require(isinstance(weight, int) and not isinstance(weight, bool) and weight >= 1, path, line_number,
                 f"weight of {topic} must be a positive integer, got {weight!r}")
        _require(topic not in weights, path, line_number, f"topic {topic} listed twice")
        weights[topic] = weight
    return TopicProfile(user_id, weights, display_name=display_name)


def load_profiles(path):
    """
    Reads profiles from a JSON-lines file.

    Raises:
        SchemaError: A line is not valid JSON or violates the profile schema.
    """
    return [_parse_profile(record, path, line_number) for line_number, record in iter_jsonl(path)]


def save_profiles(profiles, path):
    with atomic_write(path) as out_file:
        for profile in profiles:
            out_file.write(dumps_line(profile.to_dict()))


def _parse_document(record, path, line_number, raw):
    _require(isinstance(record, dict), path, line_number, "document record must be a JSON object")
    for key in ("doc_id", "user_id"):
        _require(isinstance(record.get(key), str) and record[key], path, line_number,
                 f"{key} must be a non-empty string")
    if raw:
        text = record.get("text")
        _require(isinstance(text, str) and text.strip(), path, line_number, "text must be a non-empty string")
        return RawDocument(record["doc_id"], record["user_id"], text)

    topics = record.get("topics", [])
    _require(isinstance(topics, list) and all(isinstance(t, str) and is_valid_node_id(t) for t in topics),
             path, line_number, "topics must be a list of node ids")
    return AnnotatedDocument(record["doc_id"], record["user_id"], frozenset(topics))


def load_documents(path):
    """Reads annotated documents: {"doc_id", "user_id", "topics": [...]} per line."""
    return [_parse_document(record, path, line_number, raw=False) for line_number, record in iter_jsonl(path)]


def load_raw_documents(path):
    """Reads raw documents: {"doc_id", "user_id", "text"} per line."""
    return [_parse_document(record, path, line_number, raw=True) for line_number, record in iter_jsonl(path)]


def save_documents(docs, path):
    with atomic_write(path) as out_file:
        for doc in docs:
            out_file.write(dumps_line(doc.to_dict()))
