# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

"""
Client for a Spotlight-compatible entity annotation service. Turns raw
documents into annotated documents holding the distinct resources the service
linked. Mention offsets and surface forms are dropped.
"""

import logging
import time

import requests

from topigen.config import DEFAULT_ATTEMPTS, DEFAULT_BACKOFF, DEFAULT_CONFIDENCE, DEFAULT_TIMEOUT
from topigen.errors import ProtocolError, TransportError
from topigen.profile_builder import AnnotatedDocument

logger = logging.getLogger(__name__)

# Namespaces shortened by compact_iri
DBPEDIA_PREFIXES = (
    ("http://dbpedia.org/resource/Category:", "dbc:"),
    ("http://dbpedia.org/resource/", "dbr:"),
)


def compact_iri(iri):
    """
    Shortens a DBpedia resource or category IRI to its "dbr:"/"dbc:" curie.
    Other IRIs are returned unchanged.
    """
    for namespace, prefix in DBPEDIA_PREFIXES:
        if iri.startswith(namespace) and len(iri) > len(namespace):
            return prefix + iri[len(namespace):]
    return iri


class AnnotatorClient:
    """
    Annotates documents against one service URL.

    Parameters:
        service_url (str): The annotate endpoint, e.g. "http://localhost:2222/rest/annotate".
        confidence (float): Confidence threshold in [0, 1] sent with every request.
        attempts (int): Requests made before giving up on transport errors.
        backoff (float): Seconds waited after the first failure, doubled after each further one.
        timeout (float): Per-request timeout in seconds.
        compact (bool): Shorten DBpedia IRIs to curies.
        session (requests.Session, optional): Session to send requests with.
    """

    def __init__(self, service_url, confidence=DEFAULT_CONFIDENCE, attempts=DEFAULT_ATTEMPTS,
                 backoff=DEFAULT_BACKOFF, timeout=DEFAULT_TIMEOUT, compact=False, session=None, sleep=time.sleep):
        if not 0 <= confidence <= 1:
            raise ValueError(f"confidence must be within [0, 1], got {confidence!r}")
        if attempts < 1:
            raise ValueError(f"attempts must be at least 1, got {attempts!r}")
        self.service_url = service_url
        self.confidence = confidence
        self.attempts = attempts
        self.backoff = backoff
        self.timeout = timeout
        self.compact = compact
        self._sleep = sleep
        self.session = session or requests.Session()
        self.session.headers.update({"Accept": "application/json"})

    def _post(self, text):
        data = {"text": text, "confidence": self.confidence}
        last_error = None
        for attempt in range(self.attempts):
            if attempt:
                self._sleep(self.backoff * 2 ** (attempt - 1))
            try:
                response = self.session.post(self.service_url, data=data, timeout=self.timeout)
            except requests.RequestException as err:
                last_error = f"{type(err).__name__}: {err}"
            else:
                if 200 <= response.status_code < 300:
                    return response
                last_error = f"HTTP {response.status_code}"
            logger.warning("Annotation request %d/%d to %s failed: %s", attempt + 1, self.attempts,
                           self.service_url, last_error)
        raise TransportError(
            f"annotation service {self.service_url} failed after {self.attempts} attempts: {last_error}"
        )

    def _resources(self, response):
        try:
            body = response.json()
        except ValueError as err:
            raise ProtocolError(f"annotation service returned a body that is not JSON: {err}") from err
        if not isinstance(body, dict):
            raise ProtocolError("annotation service response must be a JSON object")

        resources = body.get("Resources") or []
        # Some services return a lone resource as an object
        if isinstance(resources, dict):
            resources = [resources]
        if not isinstance(resources, list):
            raise ProtocolError("annotation service field 'Resources' must be a list")

        uris = []
        for resource in resources:
            uri = resource.get("@URI") if isinstance(resource, dict) else None
            if not isinstance(uri, str) or not uri:
                raise ProtocolError(f"annotation resource without '@URI': {resource!r}")
            uris.append(uri)
        return uris

    def annotate(self, doc):
        """
        Returns the annotated version of a raw document.

        Raises:
            TransportError: Network failure or non-2xx status on every attempt.
            ProtocolError: The response body cannot be understood.
        """
        if not doc.text.strip():
            return AnnotatedDocument(doc.doc_id, doc.user_id, frozenset())
        uris = self._resources(self._post(doc.text))
        if self.compact:
            uris = [compact_iri(uri) for uri in uris]
        topics = frozenset(uris)
        logger.debug("Document %s: %d mentions, %d topics", doc.doc_id, len(uris), len(topics))
        return AnnotatedDocument(doc.doc_id, doc.user_id, topics)


def annotate(doc, service_url, confidence=DEFAULT_CONFIDENCE):
    """Annotates a single document with a one-off client."""
    return AnnotatorClient(service_url, confidence=confidence).annotate(doc)


def annotate_corpus(docs, client):
    for doc in docs:
        yield client.annotate(doc)
