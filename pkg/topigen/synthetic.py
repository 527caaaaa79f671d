# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
Deterministic synthetic corpus for desk-scale runs of the whole pipeline.

The category graph has four levels of categories with a few cycles between
levels. Articles are grouped in themes, each theme filed under its own block
of leaf categories, and every user draws topics from a handful of themes and
spreads them over 3-5 documents.
"""

import logging
from pathlib import Path

import numpy as np

from topigen.common_funcs import atomic_write, dumps_line

logger = logging.getLogger(__name__)

DEFAULT_SEED = 2016

# Categories per level, from the leaf categories up
LEVEL_SIZES = (120, 40, 12, 4)

ARTICLE_COUNT = 600
THEME_SIZE = 50

# Topics per generated profile
PROFILE_SIZES = (5, 12, 30, 47, 66, 94)

# Backward edges added to make the broader relation cyclic
CYCLE_EDGES = 6


def _category_id(level, i):
    return f"dbc:Synthetic_L{level}_{i:03d}"


def _article_id(i):
    return f"dbr:Synthetic_topic_{i:04d}"


def generate_corpus(out_dir, seed=DEFAULT_SEED):
    """
    Writes subject.tsv, broader.tsv, labels.tsv and docs.jsonl to `out_dir`.

    Parameters:
        out_dir (str or Path): Directory to write to. Created when missing.
        seed (int): Seed of the random generator; equal seeds give equal files.

    Returns:
        dict: Paths of the written files by name ("subject", "broader", "labels", "docs").
    """
    rng = np.random.default_rng(seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    # Broader edges: every category points to one or two categories of the next level
    broader = set()
    for level in range(len(LEVEL_SIZES) - 1):
        upper = LEVEL_SIZES[level + 1]
        for i in range(LEVEL_SIZES[level]):
            block = i * upper // LEVEL_SIZES[level]
            broader.add((_category_id(level, i), _category_id(level + 1, block)))
            if rng.random() < 0.3:
                broader.add((_category_id(level, i), _category_id(level + 1, int(rng.integers(upper)))))
    for _ in range(CYCLE_EDGES):
        level = int(rng.integers(1, len(LEVEL_SIZES)))
        child = _category_id(level, int(rng.integers(LEVEL_SIZES[level])))
        parent = _category_id(level - 1, int(rng.integers(LEVEL_SIZES[level - 1])))
        broader.add((child, parent))

    # Subject edges: articles of a theme share a block of leaf categories
    subject = set()
    themes = ARTICLE_COUNT // THEME_SIZE
    leaves_per_theme = LEVEL_SIZES[0] // themes
    for i in range(ARTICLE_COUNT):
        first_leaf = (i // THEME_SIZE) * leaves_per_theme
        for leaf in rng.choice(leaves_per_theme, size=int(rng.integers(1, 4)), replace=False):
            subject.add((_article_id(i), _category_id(0, first_leaf + int(leaf))))

    labels = {_article_id(i): f"Synthetic topic {i}" for i in range(ARTICLE_COUNT)}
    for level, size in enumerate(LEVEL_SIZES):
        labels.update({_category_id(level, i): f"Theme {level}.{i}" for i in range(size)})

    # Documents: each topic of a user lands in at least one of the user's documents
    docs = []
    for number, size in enumerate(PROFILE_SIZES, start=1):
        user_id = f"user_{number:02d}"
        user_themes = rng.choice(themes, size=min(themes, 2 + size // 20), replace=False)
        pool = np.concatenate([np.arange(theme * THEME_SIZE, (theme + 1) * THEME_SIZE) for theme in user_themes])
        topics = sorted(rng.choice(pool, size=size, replace=False).tolist())
        doc_count = int(rng.integers(3, 6))
        doc_topics = [set() for _ in range(doc_count)]
        for topic in topics:
            doc_topics[int(rng.integers(doc_count))].add(_article_id(topic))
            for doc in range(doc_count):
                if rng.random() < 0.25:
                    doc_topics[doc].add(_article_id(topic))
        for doc, topic_set in enumerate(doc_topics):
            docs.append({"doc_id": f"{user_id}_doc_{doc}", "user_id": user_id, "topics": sorted(topic_set)})

    paths = {name: out_dir / file_name for name, file_name in
             (("subject", "subject.tsv"), ("broader", "broader.tsv"), ("labels", "labels.tsv"), ("docs", "docs.jsonl"))}
    _write_tsv(paths["subject"], "article\tcategory", sorted(subject))
    _write_tsv(paths["broader"], "category\tbroader category", sorted(broader))
    _write_tsv(paths["labels"], "id\tlabel", sorted(labels.items()))
    with atomic_write(paths["docs"]) as docs_file:
        for doc in docs:
            docs_file.write(dumps_line(doc))

    logger.info("Wrote synthetic corpus to %s: %d subject edges, %d broader edges, %d documents", out_dir,
                len(subject), len(broader), len(docs))
    return paths


def _write_tsv(path, header, rows):
    with atomic_write(path) as tsv_file:
        tsv_file.write(f"# {header}\n")
        for row in rows:
            tsv_file.write("\t".join(row) + "\n")
