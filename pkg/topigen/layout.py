# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
Profile page layouts.

* flat: every topic, highest weight first, ties by label;
* nested: one collapsed section per cluster (heaviest cluster first) with its
  topics inside, orphans at the bottom;
* clustered: per cluster the k heaviest topics, followed by a more-link that
  names the category and reveals the whole cluster, orphans at the bottom.
"""

import json
from dataclasses import dataclass
from html import escape
from typing import Optional

from topigen.common_funcs import local_name
from topigen.config import DEFAULT_K, LAYOUT_VERSION, LayoutConfig
from topigen.errors import IntegrityError, SchemaError

TOPIC = "topic"
CATEGORY_HEADER = "category-header"
MORE_LINK = "more-link"
ITEM_KINDS = (TOPIC, CATEGORY_HEADER, MORE_LINK)


@dataclass(frozen=True)
class LayoutItem:
    label: str
    kind: str = TOPIC
    weight: Optional[int] = None
    node_id: Optional[str] = None
    children: tuple = ()

    def to_dict(self):
        return {
            "label": self.label,
            "kind": self.kind,
            "weight": self.weight,
            "id": self.node_id,
            "children": [child.to_dict() for child in self.children],
        }

    @classmethod
    def from_dict(cls, record):
        if not isinstance(record, dict) or record.get("kind") not in ITEM_KINDS:
            raise SchemaError("<layout>", 1, f"invalid layout item {record!r}")
        return cls(
            label=record["label"],
            kind=record["kind"],
            weight=record.get("weight"),
            node_id=record.get("id"),
            children=tuple(cls.from_dict(child) for child in record.get("children", [])),
        )


@dataclass(frozen=True)
class ProfileLayout:
    mode: str
    entries: tuple = ()
    user_id: Optional[str] = None
    display_name: Optional[str] = None

    def to_dict(self):
        return {
            "layout_version": LAYOUT_VERSION,
            "mode": self.mode,
            "user_id": self.user_id,
            "display_name": self.display_name,
            "entries": [entry.to_dict() for entry in self.entries],
        }


def flat_order_key(item):
    """Weight descending, then label case-insensitively in code point order."""
    return -(item.weight or 0), item.label.casefold(), item.label, item.node_id or ""


def _label_lookup(labels):
    if labels is None:
        return local_name
    if callable(labels):
        return labels
    return lambda node_id: labels.get(node_id) or local_name(node_id)


def _topic_items(profile, topic_ids, label_of):
    items = [LayoutItem(label_of(topic), TOPIC, profile.weights[topic], topic) for topic in topic_ids]
    return sorted(items, key=flat_order_key)


def render_flat(profile, labels=None):
    """
    Lays out all topics of a profile as a single list.

    Parameters:
        profile (TopicProfile): The profile.
        labels (dict or callable, optional): Display labels by id; local names otherwise.
    """
    label_of = _label_lookup(labels)
    return ProfileLayout("flat", tuple(_topic_items(profile, profile.weights, label_of)), profile.user_id,
                         profile.display_name)


def _ordered_clusters(profile, cluster_set):
    covered = set(cluster_set.orphans)
    for cluster in cluster_set.clusters:
        covered.update(cluster.members)
    missing = covered - profile.weights.keys()
    if missing:
        raise IntegrityError(f"cluster topics missing from profile {profile.user_id!r}: {', '.join(sorted(missing))}")
    uncovered = profile.weights.keys() - covered
    if uncovered:
        raise IntegrityError(f"profile {profile.user_id!r} topics missing from the clusters: "
                             f"{', '.join(sorted(uncovered))}")

    def member_weight(cluster):
        return sum(profile.weights[topic] for topic in cluster.members)

    return sorted(cluster_set.clusters, key=lambda cluster: (-member_weight(cluster), cluster.rank, cluster.category))


def render_nested(profile, cluster_set, labels=None):
    """
    Lays out a profile as category headers with their topics below, heaviest
    cluster first, followed by the orphans.

    Raises:
        IntegrityError: The cluster set does not belong to the profile.
    """
    label_of = _label_lookup(labels)
    entries = []
    for cluster in _ordered_clusters(profile, cluster_set):
        children = tuple(_topic_items(profile, cluster.members, label_of))
        weight = sum(child.weight for child in children)
        entries.append(LayoutItem(label_of(cluster.category), CATEGORY_HEADER, weight, cluster.category, children))
    entries.extend(_topic_items(profile, cluster_set.orphans, label_of))
    return ProfileLayout("nested", tuple(entries), profile.user_id, profile.display_name)


def render_clustered(profile, cluster_set, k=DEFAULT_K, labels=None, config=None):
    """
    Lays out the k heaviest topics of every cluster, each group closed by a
    more-link that carries the full member list, followed by the orphans.

    Parameters:
        profile (TopicProfile): The profile.
        cluster_set (ClusterSet): Clusters of the profile.
        k (int): Topics shown per cluster.
        labels (dict or callable, optional): Display labels by id.
        config (LayoutConfig, optional): Supplies the more-link templates.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    config = config or LayoutConfig(mode="clustered", k=k)
    label_of = _label_lookup(labels)

    entries = []
    for cluster in _ordered_clusters(profile, cluster_set):
        members = tuple(_topic_items(profile, cluster.members, label_of))
        category = label_of(cluster.category)
        if len(members) > k:
            text = config.more_template.format(count=len(members) - k, category=category)
        else:
            text = config.single_template.format(category=category)
        entries.extend(members[:k])
        entries.append(LayoutItem(text, MORE_LINK, None, cluster.category, members))
    entries.extend(_topic_items(profile, cluster_set.orphans, label_of))
    return ProfileLayout("clustered", tuple(entries), profile.user_id, profile.display_name)


def render(profile, cluster_set, config, labels=None):
    """Renders a profile in the mode of `config`. Flat mode ignores `cluster_set`."""
    if config.mode == "flat":
        return render_flat(profile, labels)
    if cluster_set is None:
        raise IntegrityError(f"{config.mode} layout of {profile.user_id!r} needs its clusters")
    if config.mode == "nested":
        return render_nested(profile, cluster_set, labels)
    return render_clustered(profile, cluster_set, config.k, labels, config)


def to_json(layout):
    """Canonical JSON: sorted keys, items in rendered order, UTF-8, trailing newline."""
    return (json.dumps(layout.to_dict(), sort_keys=True, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def from_json(data):
    record = json.loads(data)
    if not isinstance(record, dict):
        raise SchemaError("<layout>", 1, "layout must be a JSON object")
    if record.get("layout_version") != LAYOUT_VERSION:
        raise SchemaError("<layout>", 1, f"unsupported layout version {record.get('layout_version')!r}")
    return ProfileLayout(
        mode=record["mode"],
        entries=tuple(LayoutItem.from_dict(entry) for entry in record.get("entries", [])),
        user_id=record.get("user_id"),
        display_name=record.get("display_name"),
    )


################################################################################
# HTML
################################################################################

_LIST_STYLE = "list-style: none; padding-left: 0; margin: 0;"
_NESTED_LIST_STYLE = "list-style: none; padding-left: 1.5em; margin: 0.25em 0;"
_MORE_STYLE = "padding-left: 1.5em; color: #555555; font-style: italic;"
_SUMMARY_STYLE = "cursor: pointer;"


def _html_topic(item, indent):
    return f'{indent}<li class="topic">{escape(item.label)}</li>'


def _html_member_list(children, indent):
    lines = [f'{indent}<ul class="members" style="{_NESTED_LIST_STYLE}">']
    lines.extend(_html_topic(child, indent + "  ") for child in children)
    lines.append(f"{indent}</ul>")
    return lines


def _html_entry(item, indent):
    if item.kind == TOPIC:
        return [_html_topic(item, indent)]

    css_class = "cluster" if item.kind == CATEGORY_HEADER else "more-link"
    style = "" if item.kind == CATEGORY_HEADER else f' style="{_MORE_STYLE}"'
    # <details> without the open attribute starts collapsed
    lines = [
        f'{indent}<li class="{css_class}"{style}>',
        f"{indent}  <details>",
        f'{indent}    <summary style="{_SUMMARY_STYLE}">{escape(item.label)}</summary>',
    ]
    lines.extend(_html_member_list(item.children, indent + "    "))
    lines.extend([f"{indent}  </details>", f"{indent}</li>"])
    return lines


def to_html(layout):
    """
    Renders a self-contained HTML5 page without external assets. Weights are not shown.
    """
    title = escape(layout.display_name or layout.user_id or "Profile")
    lines = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{title}</title>",
        "</head>",
        '<body style="font-family: sans-serif;">',
        f"<h1>{title}</h1>",
        f'<ul class="profile profile-{escape(layout.mode)}" style="{_LIST_STYLE}">',
    ]
    for entry in layout.entries:
        lines.extend(_html_entry(entry, "  "))
    lines.extend(["</ul>", "</body>", "</html>"])
    return ("\n".join(lines) + "\n").encode("utf-8")
