# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

import json

import pytest

from topigen.config import DEFAULT_KAPPA, DEFAULT_M, MAX_M, GeneralizationConfig
from topigen.errors import ConfigError
from topigen.generalizer import (
    DistanceMatrix,
    RankedCategory,
    adoption_rank,
    build_matrix,
    cluster,
    generalize,
    load_cluster_sets,
    rank_categories,
    save_cluster_sets,
    traverse,
)
from topigen.profile_builder import TopicProfile

from .conftest import make_graph

CONFIG = GeneralizationConfig()


class TestTraverse:
    def test_pearl_distances(self, pearl_graph):
        distances = traverse(pearl_graph, "dbr:Pearl", 3)

        assert distances["dbc:Gemstones"] == 0
        assert distances["dbc:Materials"] == 2
        assert distances == {"dbc:Gemstones": 0, "dbc:Minerals": 1, "dbc:Jewellery": 1, "dbc:Materials": 2}

    def test_node_without_subject_edges(self, pearl_graph):
        assert traverse(pearl_graph, "dbc:Gemstones", 3) == {}
        assert traverse(pearl_graph, "dbr:Unknown", 3) == {}

    def test_diamond_reports_the_minimum_once(self):
        graph = make_graph([("e", "c0a"), ("e", "c0b")], [("c0a", "c1"), ("c0b", "c1")])

        assert traverse(graph, "e", 3) == {"c0a": 0, "c0b": 0, "c1": 1}

    def test_cycle_terminates(self):
        graph = make_graph([("e", "c0")], [("c0", "c1"), ("c1", "c0")])

        assert traverse(graph, "e", 3) == {"c0": 0, "c1": 1}

    def test_m_of_one_keeps_only_parents(self, pearl_graph):
        assert traverse(pearl_graph, "dbr:Pearl", 1) == {"dbc:Gemstones": 0}

    def test_m_must_be_positive(self, pearl_graph):
        with pytest.raises(ConfigError):
            traverse(pearl_graph, "dbr:Pearl", 0)


class TestBuildMatrix:
    def test_single_topic(self, pearl_graph):
        matrix = build_matrix(pearl_graph, TopicProfile("jane", {"dbr:Pearl": 1}), CONFIG)

        assert matrix.topics == ("dbr:Pearl",)
        assert set(matrix.categories) == set(traverse(pearl_graph, "dbr:Pearl", 3))
        assert matrix.get("dbc:Materials", "dbr:Pearl") == 2

    def test_empty_profile(self, pearl_graph):
        matrix = build_matrix(pearl_graph, TopicProfile("jane"), CONFIG)

        assert matrix.shape == (0, 0)
        assert rank_categories(matrix, CONFIG) == []

    def test_shared_category_at_two_distances(self):
        graph = make_graph([("e1", "c"), ("e2", "x")], [("x", "y"), ("y", "c")])
        matrix = build_matrix(graph, TopicProfile("jane", {"e1": 1, "e2": 1}), CONFIG)

        assert matrix.row("c") == {"e1": 0, "e2": 2}
        assert matrix.coverage()[matrix.row_index["c"]] == 2
        assert matrix.distance_sums()[matrix.row_index["c"]] == 2

    def test_topics_missing_from_the_graph_keep_their_column(self, pearl_graph):
        matrix = build_matrix(pearl_graph, TopicProfile("jane", {"dbr:Pearl": 1, "dbr:Society": 2}), CONFIG)

        assert matrix.topics == ("dbr:Society", "dbr:Pearl")
        assert all(topic == "dbr:Pearl" for _, topic in matrix.entries)

    def test_threads_give_the_same_matrix(self, fashion_graph, fashion_profile):
        single = build_matrix(fashion_graph, fashion_profile, CONFIG)
        threaded = build_matrix(fashion_graph, fashion_profile, CONFIG, jobs=4)

        assert threaded.topics == single.topics
        assert threaded.categories == single.categories
        assert threaded.entries == single.entries

    def test_longest_allowed_chain_fits_the_stored_distances(self):
        chain = [(f"c{level:03d}", f"c{level + 1:03d}") for level in range(140)]
        graph = make_graph([("e", "c000")], chain)
        matrix = build_matrix(graph, TopicProfile("jane", {"e": 1}), GeneralizationConfig(m=MAX_M))

        assert len(matrix) == MAX_M
        assert matrix.get("c127", "e") == MAX_M - 1
        assert matrix.distance_sums().max() == MAX_M - 1


class TestAdoptionRank:
    @pytest.mark.parametrize("distance_sum, coverage, expected", [(0, 1, 1.0), (1, 2, 0.75), (0, 3, 1 / 9)])
    def test_values(self, distance_sum, coverage, expected):
        assert adoption_rank(distance_sum, coverage, 1.0) == pytest.approx(expected, abs=1e-12)

    def test_zero_coverage(self):
        with pytest.raises(ValueError):
            adoption_rank(0, 0, 1.0)


class TestRankCategories:
    def test_higher_coverage_ranks_first(self):
        matrix = DistanceMatrix.from_entries(["e1", "e2", "e3"], {
            ("c1", "e1"): 0, ("c1", "e2"): 0, ("c1", "e3"): 0, ("c2", "e1"): 0,
        }, m=3)
        ranked = rank_categories(matrix, CONFIG)

        assert [record.category for record in ranked] == ["c1", "c2"]
        assert ranked[0].rank == pytest.approx(1 / 9)
        assert ranked[1].rank == 1.0
        assert (ranked[0].coverage, ranked[0].distance_sum) == (3, 0)

    def test_exact_tie_is_broken_by_category_id(self):
        entries = {("cb", "e1"): 0, ("cb", "e2"): 1, ("ca", "e2"): 1, ("ca", "e3"): 0}
        matrix = DistanceMatrix.from_entries(["e1", "e2", "e3"], entries, m=3)

        for _ in range(3):
            assert [record.category for record in rank_categories(matrix, CONFIG)] == ["ca", "cb"]

    def test_exact_tie_prefers_coverage(self):
        # kappa=2: 2/1 + 0/1 == 2/4 + 3/2
        entries = {("a", "e1"): 0, ("b", "e1"): 1, ("b", "e2"): 2}
        matrix = DistanceMatrix.from_entries(["e1", "e2"], entries, m=3)
        ranked = rank_categories(matrix, GeneralizationConfig(kappa=2))

        assert ranked[0].rank == ranked[1].rank == 2.0
        assert [record.category for record in ranked] == ["b", "a"]


def ranked_rows(*rows):
    """Ranked records and a matrix for rows given in rank order as (category, topics)."""
    entries = {(category, topic): 0 for category, topics in rows for topic in topics}
    topics = sorted({topic for _, row_topics in rows for topic in row_topics})
    ranked = [RankedCategory(category, float(i), len(row_topics), 0) for i, (category, row_topics) in enumerate(rows)]
    return ranked, DistanceMatrix.from_entries(topics, entries, m=3)


class TestCluster:
    def test_one_category_covering_everything(self):
        ranked, matrix = ranked_rows(("c", ["e1", "e2", "e3"]))
        result = cluster(ranked, matrix, {"e1", "e2", "e3"})

        assert [(c.category, set(c.members)) for c in result.clusters] == [("c", {"e1", "e2", "e3"})]
        assert result.orphans == ()

    def test_single_topic_is_always_an_orphan(self):
        ranked, matrix = ranked_rows(("c1", ["e1"]), ("c2", ["e1"]))
        result = cluster(ranked, matrix, {"e1"})

        assert result.clusters == ()
        assert result.orphans == ("e1",)

    def test_rows_with_one_new_topic_are_skipped(self):
        ranked, matrix = ranked_rows(("c1", ["e1", "e2"]), ("c2", ["e2", "e3"]), ("c3", ["e3", "e4"]))
        result = cluster(ranked, matrix, {"e1", "e2", "e3", "e4"})

        assert [c.category for c in result.clusters] == ["c1", "c3"]
        assert set(result.clusters[0].newly_assigned) == {"e1", "e2"}
        assert set(result.clusters[1].newly_assigned) == {"e3", "e4"}
        assert result.orphans == ()

    def test_members_are_the_whole_row(self):
        ranked, matrix = ranked_rows(("c1", ["e1", "e2"]), ("c2", ["e1", "e2", "e3", "e4"]))
        result = cluster(ranked, matrix, {"e1", "e2", "e3", "e4"})

        assert set(result.clusters[1].members) == {"e1", "e2", "e3", "e4"}
        assert set(result.clusters[1].newly_assigned) == {"e3", "e4"}

    def test_stops_once_everything_is_assigned(self):
        ranked, matrix = ranked_rows(("c1", ["e1", "e2"]), ("c2", ["e1", "e2"]))

        assert [c.category for c in cluster(ranked, matrix, {"e1", "e2"}).clusters] == ["c1"]


class TestGeneralize:
    def test_empty_profile(self, pearl_graph):
        result = generalize(pearl_graph, TopicProfile("jane"), CONFIG)

        assert result.clusters == ()
        assert result.orphans == ()

    def test_topics_outside_the_graph_are_orphans(self, pearl_graph):
        result = generalize(pearl_graph, TopicProfile("jane", {"dbr:Society": 1, "dbr:Art": 1}), CONFIG)

        assert result.clusters == ()
        assert set(result.orphans) == {"dbr:Society", "dbr:Art"}

    def test_jewellery(self, fashion_graph):
        profile = TopicProfile("jane", {"dbr:Necklace": 3, "dbr:Pearl": 2, "dbr:Emerald": 1})
        result = generalize(fashion_graph, profile, CONFIG)

        assert [c.category for c in result.clusters] == ["dbc:Jewellery"]
        assert result.clusters[0].members == ("dbr:Necklace", "dbr:Pearl", "dbr:Emerald")
        assert result.orphans == ()

    def test_fashion_profile(self, fashion_graph, fashion_profile):
        result = generalize(fashion_graph, fashion_profile, CONFIG)

        assert [c.category for c in result.clusters] == ["dbc:Fashion", "dbc:Materials", "dbc:Jewellery"]
        assert [len(c.members) for c in result.clusters] == [9, 5, 3]
        assert result.orphans == ("dbr:Glastonbury_Festival_2008", "dbr:Society")
        assert result.user_id == "journalist_fashion"

    def test_serialization_is_deterministic(self, fashion_graph, fashion_profile):
        first = json.dumps(generalize(fashion_graph, fashion_profile, CONFIG).to_dict())
        second = json.dumps(generalize(fashion_graph, fashion_profile, CONFIG).to_dict())

        assert first == second

    def test_cluster_set_file_round_trip(self, tmp_path, fashion_graph, fashion_profile):
        result = generalize(fashion_graph, fashion_profile, GeneralizationConfig(m=2, kappa=0.5))
        save_cluster_sets([result], tmp_path / "clusters.jsonl")

        assert load_cluster_sets(tmp_path / "clusters.jsonl") == [result]

    def test_json_shape(self, fashion_graph, fashion_profile):
        record = generalize(fashion_graph, fashion_profile, CONFIG).to_dict()

        assert record["config"] == {"m": 3, "kappa": 1.0}
        assert record["clusters"][2]["category"] == "dbc:Jewellery"
        assert record["clusters"][2]["rank"] == pytest.approx(1 / 9)
        assert record["clusters"][0]["members"][:3] == ["dbr:Fashion", "dbr:Knitting", "dbr:Catwalk"]

    def test_cluster_set_without_config_gets_the_defaults(self, tmp_path):
        path = tmp_path / "clusters.jsonl"
        path.write_text('{"user_id": "jane", "clusters": [], "orphans": ["dbr:Pearl"]}\n', encoding="utf-8")
        (cluster_set,) = load_cluster_sets(path)

        assert cluster_set.config == GeneralizationConfig(m=DEFAULT_M, kappa=DEFAULT_KAPPA)
        assert cluster_set.orphans == ("dbr:Pearl",)
