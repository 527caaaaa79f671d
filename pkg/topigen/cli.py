# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
Command line entry point: ingest -> (annotate) -> profile -> generalize -> render.

Exit codes:
  0  success
  1  parse, schema, configuration or integrity error
  2  I/O error
  3  graph index written by an incompatible version
  4  annotation service unreachable or misbehaving
"""

import functools
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
from tqdm import tqdm

from topigen import __version__
from topigen.annotator_client import AnnotatorClient
from topigen.category_graph import ingest_ntriples_subset, ingest_tsv
from topigen.common_funcs import atomic_write, dumps_line
from topigen.config import (
    ANNOTATOR_URL_ENV,
    DEFAULT_ATTEMPTS,
    DEFAULT_BACKOFF,
    DEFAULT_CONFIDENCE,
    DEFAULT_K,
    DEFAULT_KAPPA,
    DEFAULT_M,
    DEFAULT_TIMEOUT,
    MORE_TEMPLATE,
    SINGLE_TEMPLATE,
    PipelineConfig,
)
from topigen.errors import ConfigError, TopigenError
from topigen.generalizer import (
    build_matrix,
    generalize,
    load_cluster_sets,
    rank_categories,
    save_cluster_sets,
)
from topigen.graph_index import load_index, save_index
from topigen.layout import render, to_html, to_json
from topigen.profile_builder import build_profiles, load_documents, load_profiles, load_raw_documents, save_profiles
from topigen.synthetic import DEFAULT_SEED, generate_corpus

logger = logging.getLogger(__name__)

EXIT_IO_ERROR = 2

FILE = click.Path(dir_okay=False, path_type=Path)
DIRECTORY = click.Path(file_okay=False, path_type=Path)


def handle_errors(command):
    """
    Turns topigen errors and I/O errors into a message on standard error and
    the documented exit code.
    """
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except TopigenError as err:
            click.echo(f"error: {err}", err=True)
            sys.exit(err.exit_code)
        except OSError as err:
            click.echo(f"error: {err}", err=True)
            sys.exit(EXIT_IO_ERROR)
    return wrapper


def _progress():
    return sys.stderr.isatty()


# Per process state of the generalize workers
_worker = {}


def _init_generalize_worker(graph_path, config):
    _worker["graph"] = load_index(graph_path)
    _worker["config"] = config


def _generalize_in_worker(profile):
    return generalize(_worker["graph"], profile, _worker["config"])


@click.group()
@click.version_option(__version__, prog_name="topigen")
@click.option("-v", "--verbose", is_flag=True, help="Log debug messages.")
@click.option("-q", "--quiet", is_flag=True, help="Only log warnings and errors.")
def main(verbose, quiet):
    """Generalize topical user profiles with a category graph and render them."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


@main.command("ingest")
@click.option("--subject", "subject_path", type=FILE, help="TSV file of article-category edges.")
@click.option("--broader", "broader_path", type=FILE, help="TSV file of category-broader category edges.")
@click.option("--labels", "labels_path", type=FILE, help="TSV file of node labels.")
@click.option("--ntriples", "ntriples_path", type=FILE, help="N-Triples dump to read instead of the TSV files.")
@click.option("--out", "out_path", type=FILE, required=True, help="Graph index to write.")
@handle_errors
def cmd_ingest(subject_path, broader_path, labels_path, ntriples_path, out_path):
    """Parse dump files once into a reusable graph index."""
    if ntriples_path is not None:
        if subject_path or broader_path:
            raise ConfigError("use either --ntriples or --subject/--broader")
        graph = ingest_ntriples_subset(ntriples_path, with_labels=labels_path is None, progress=_progress())
        if labels_path is not None:
            logger.warning("--labels is ignored with --ntriples; labels are read from the dump")
    else:
        if subject_path is None or broader_path is None:
            raise ConfigError("--subject and --broader are required unless --ntriples is given")
        graph = ingest_tsv(subject_path, broader_path, labels_path, progress=_progress())

    save_index(graph, out_path)
    click.echo(json.dumps(graph.stats.to_dict(), sort_keys=True))


@main.command("inspect")
@click.option("--graph", "graph_path", type=FILE, required=True, help="Graph index.")
@handle_errors
def cmd_inspect(graph_path):
    """Print the counts stored in a graph index."""
    click.echo(json.dumps(load_index(graph_path).stats.to_dict(), sort_keys=True))


@main.command("annotate")
@click.option("--docs", "docs_path", type=FILE, required=True, help="JSON-lines raw documents.")
@click.option("--out", "out_path", type=FILE, required=True, help="JSON-lines annotated documents to write.")
@click.option("--service-url", envvar=ANNOTATOR_URL_ENV, required=True, help="Annotation service endpoint.")
@click.option("--confidence", type=float, default=DEFAULT_CONFIDENCE, show_default=True)
@click.option("--compact/--no-compact", default=False,
              help="Shorten DBpedia IRIs to dbr:/dbc: curies, for graphs ingested from curie TSV files.")
@click.option("--attempts", type=int, default=DEFAULT_ATTEMPTS, show_default=True)
@click.option("--backoff", type=float, default=DEFAULT_BACKOFF, show_default=True,
              help="Seconds to wait after the first failed attempt; doubles afterwards.")
@click.option("--timeout", type=float, default=DEFAULT_TIMEOUT, show_default=True)
@handle_errors
def cmd_annotate(docs_path, out_path, service_url, confidence, compact, attempts, backoff, timeout):
    """Annotate raw documents with an entity annotation service."""
    try:
        client = AnnotatorClient(service_url, confidence=confidence, attempts=attempts, backoff=backoff,
                                 timeout=timeout, compact=compact)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    docs = load_raw_documents(docs_path)

    # Written line by line so progress survives a failing service
    with open(out_path, "w", encoding="utf-8", newline="\n") as out_file:
        for doc in tqdm(docs, desc="Annotating", unit=" docs", disable=not _progress()):
            out_file.write(dumps_line(client.annotate(doc).to_dict()))
            out_file.flush()
    logger.info("Annotated %d documents", len(docs))


@main.command("profile")
@click.option("--docs", "docs_path", type=FILE, required=True, help="JSON-lines annotated documents.")
@click.option("--out", "out_path", type=FILE, required=True, help="JSON-lines profiles to write.")
@click.option("--user", "user_id", help="Only build the profile of this user.")
@handle_errors
def cmd_profile(docs_path, out_path, user_id):
    """Aggregate annotated documents into weighted topic profiles."""
    profiles = build_profiles(load_documents(docs_path), user_id)
    save_profiles(profiles, out_path)
    logger.info("Wrote %d profiles to %s", len(profiles), out_path)


@main.command("generalize")
@click.option("--graph", "graph_path", type=FILE, required=True, help="Graph index.")
@click.option("--profiles", "profiles_path", type=FILE, required=True, help="JSON-lines profiles.")
@click.option("-m", "m", type=int, default=DEFAULT_M, show_default=True, help="Max traversal edges.")
@click.option("--kappa", type=float, default=DEFAULT_KAPPA, show_default=True, help="Tie penalty constant.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker processes generalizing profiles concurrently.")
@click.option("--out", "out_path", type=FILE, required=True, help="JSON-lines cluster sets to write.")
@handle_errors
def cmd_generalize(graph_path, profiles_path, m, kappa, jobs, out_path):
    """
    Cluster the topics of every profile under broader categories.

    With --jobs N each of the N worker processes loads the graph index once.
    """
    config = PipelineConfig(graph_index_path=graph_path, m=m, kappa=kappa, jobs=jobs,
                            input_paths=(profiles_path,), output_path=out_path)
    generalization = config.generalization()
    graph = load_index(graph_path)
    profiles = load_profiles(profiles_path)
    bar_options = {"total": len(profiles), "desc": "Generalizing", "unit": " profiles", "disable": not _progress()}

    if config.jobs == 1 or len(profiles) < 2:
        cluster_sets = [generalize(graph, profile, generalization) for profile in tqdm(profiles, **bar_options)]
    else:
        # executor.map keeps input order
        with ProcessPoolExecutor(max_workers=config.jobs, initializer=_init_generalize_worker,
                                 initargs=(graph_path, generalization)) as executor:
            cluster_sets = list(tqdm(executor.map(_generalize_in_worker, profiles), **bar_options))
    save_cluster_sets(cluster_sets, out_path)


@main.command("rank")
@click.option("--graph", "graph_path", type=FILE, required=True, help="Graph index.")
@click.option("--profiles", "profiles_path", type=FILE, required=True, help="JSON-lines profiles.")
@click.option("--user", "user_id", help="Only rank categories for this user.")
@click.option("-m", "m", type=int, default=DEFAULT_M, show_default=True, help="Max traversal edges.")
@click.option("--kappa", type=float, default=DEFAULT_KAPPA, show_default=True, help="Tie penalty constant.")
@click.option("--top", type=int, default=20, show_default=True, help="Categories printed per profile (0 for all).")
@handle_errors
def cmd_rank(graph_path, profiles_path, user_id, m, kappa, top):
    """Print the ranked candidate categories of profiles, before cluster selection."""
    generalization = PipelineConfig(graph_index_path=graph_path, m=m, kappa=kappa).generalization()
    graph = load_index(graph_path)
    for profile in load_profiles(profiles_path):
        if user_id is not None and profile.user_id != user_id:
            continue
        matrix = build_matrix(graph, profile, generalization)
        ranked = rank_categories(matrix, generalization)
        for record in ranked[:top] if top > 0 else ranked:
            click.echo(dumps_line({
                "user_id": profile.user_id,
                "category": record.category,
                "label": graph.label(record.category),
                "rank": record.rank,
                "coverage": record.coverage,
                "distance_sum": record.distance_sum,
                "topics": matrix.row_topics(record.category),
            }), nl=False)


@main.command("render")
@click.option("--profiles", "profiles_path", type=FILE, required=True, help="JSON-lines profiles.")
@click.option("--clusters", "clusters_path", type=FILE, help="JSON-lines cluster sets (nested and clustered modes).")
@click.option("--graph", "graph_path", type=FILE, help="Graph index to take display labels from.")
@click.option("--mode", default="flat", show_default=True, help="flat, nested or clustered.")
@click.option("--format", "output_format", default="json", show_default=True, help="json or html.")
@click.option("-k", "k", type=int, default=DEFAULT_K, show_default=True, help="Topics per cluster (clustered mode).")
@click.option("--more-template", default=MORE_TEMPLATE, show_default=True,
              help="More-link text for clusters larger than k.")
@click.option("--single-template", default=SINGLE_TEMPLATE, show_default=True,
              help="More-link text for clusters of at most k topics.")
@click.option("--out-dir", type=DIRECTORY, required=True, help="Directory for one file per profile.")
@handle_errors
def cmd_render(profiles_path, clusters_path, graph_path, mode, output_format, k, more_template, single_template,
               out_dir):
    """Render profiles as flat, nested or clustered layouts."""
    config = PipelineConfig(graph_index_path=graph_path, k=k, mode=mode, output_format=output_format,
                            input_paths=(profiles_path, clusters_path), output_path=out_dir)
    layout_config = config.layout(more_template=more_template, single_template=single_template)
    if mode != "flat" and clusters_path is None:
        raise ConfigError(f"--clusters is required for the {mode} layout")

    profiles = load_profiles(profiles_path)
    cluster_sets = {}
    if mode != "flat":
        cluster_sets = {cluster_set.user_id: cluster_set for cluster_set in load_cluster_sets(clusters_path)}
    labels = load_index(graph_path).label if graph_path is not None else None
    serialize = to_json if output_format == "json" else to_html

    # Everything is rendered before the first file is written
    outputs = []
    for profile in profiles:
        layout = render(profile, cluster_sets.get(profile.user_id), layout_config, labels)
        outputs.append((out_dir / f"{profile.user_id}.{output_format}", serialize(layout)))

    out_dir.mkdir(parents=True, exist_ok=True)
    for path, content in outputs:
        with atomic_write(path, binary=True) as out_file:
            out_file.write(content)
    logger.info("Rendered %d %s layouts to %s", len(outputs), mode, out_dir)


@main.command("synth")
@click.option("--out-dir", type=DIRECTORY, required=True, help="Directory to write the corpus to.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@handle_errors
def cmd_synth(out_dir, seed):
    """Write the deterministic synthetic corpus."""
    paths = generate_corpus(out_dir, seed=seed)
    click.echo(json.dumps({name: str(path) for name, path in paths.items()}, sort_keys=True))
