"""Per-topic summaries: remote chat-completions call or extractive fallback.

The remote path speaks a generic chat-completions HTTP contract (endpoint,
model name, and credential env var all configurable) so any compatible
provider or a local stub works. The extractive path is deterministic and
offline: sentences scored by corpus-level TF-IDF, greedily packed under the
word limit, emitted in original order.
"""

from __future__ import annotations

import math
import os
import re
import time
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone

import httpx

from .embed import tokenize
from .errors import RemoteError, RemoteTimeout, Unauthorized

PROMPT_TEMPLATE_VERSION = "v1"
DEFAULT_WORD_LIMIT = 50
RETRY_DELAYS = (1.0, 4.0)  # two retries, exponential backoff

_SENTENCE_RE = re.compile(r"[^.!?]+[.!?]*", re.DOTALL)


@dataclass
class SummaryRequest:
    topic_index: int
    doc_texts: list[str]
    word_limit: int = DEFAULT_WORD_LIMIT
    model_name: str = "gpt-4o-mini"
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    api_key_env: str = "GEOLIT_LLM_API_KEY"

    def __post_init__(self):
        if self.word_limit < 10:
            raise ValueError("word_limit must be >= 10")
        if not self.doc_texts:
            raise ValueError("doc_texts must be non-empty")


@dataclass
class Summary:
    topic_index: int
    text: str
    source: str  # "remote" | "extractive"
    created_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )


def build_prompt(req: SummaryRequest) -> str:
    """Deterministic prompt: instruction with word limit, then numbered docs."""
    lines = [
        f"[template={PROMPT_TEMPLATE_VERSION}] You are given representative "
        f"research abstracts for one topic. Write a summary of at most "
        f"{req.word_limit} words capturing what these documents share.",
        "",
    ]
    for i, text in enumerate(req.doc_texts, 1):
        lines.append(f"Document {i}: {text}")
    return "\n".join(lines)


def summarize_remote(
    req: SummaryRequest,
    transport: httpx.BaseTransport | None = None,
    sleep=time.sleep,
) -> Summary:
    """Single chat-completions call with two retries on transient failure.

    Retries (1 s then 4 s backoff) cover timeouts and 5xx responses; 4xx
    responses fail immediately. A missing credential fails before any
    network activity.
    """
    api_key = os.environ.get(req.api_key_env, "")
    if not api_key:
        raise Unauthorized(f"environment variable {req.api_key_env} is not set")

    body = {
        "model": req.model_name,
        "messages": [{"role": "user", "content": build_prompt(req)}],
        "max_tokens": max(256, req.word_limit * 4),
    }
    headers = {"Authorization": f"Bearer {api_key}"}

    last_exc: Exception | None = None
    attempts = 1 + len(RETRY_DELAYS)
    with httpx.Client(transport=transport, timeout=30.0) as client:
        for attempt in range(attempts):
            if attempt > 0:
                sleep(RETRY_DELAYS[attempt - 1])
            try:
                resp = client.post(req.endpoint, json=body, headers=headers)
            except httpx.TimeoutException as exc:
                last_exc = RemoteTimeout(f"request to {req.endpoint} timed out")
                last_exc.__cause__ = exc
                continue
            if resp.status_code in (401, 403):
                raise Unauthorized(f"endpoint rejected credential ({resp.status_code})")
            if resp.status_code >= 500:
                last_exc = RemoteError(resp.status_code, resp.text[:200])
                continue
            if resp.status_code != 200:
                raise RemoteError(resp.status_code, resp.text[:200])
            payload = resp.json()
            try:
                text = payload["choices"][0]["message"]["content"].strip()
            except (KeyError, IndexError, TypeError, AttributeError) as exc:
                raise RemoteError(200, "malformed completion payload") from exc
            return Summary(topic_index=req.topic_index, text=text, source="remote")
    assert last_exc is not None
    raise last_exc


def split_sentences(text: str) -> list[str]:
    return [s.strip() for s in _SENTENCE_RE.findall(text) if s.strip()]


def summarize_extractive(
    doc_texts: list[str],
    word_limit: int = DEFAULT_WORD_LIMIT,
    topic_index: int = 0,
) -> Summary:
    """Deterministic extractive summary.

    Each sentence scores the sum of corpus-level TF-IDF over its terms,
    normalized by its term count; sentences are taken greedily by score until
    the next would exceed the word limit, then emitted in original order.
    Never returns empty output: if nothing fits, the single best sentence is
    used anyway.
    """
    if not doc_texts:
        raise ValueError("doc_texts must be non-empty")
    sentences: list[str] = []
    for text in doc_texts:
        sentences.extend(split_sentences(text))
    if not sentences:
        raise ValueError("no sentences found in doc_texts")

    n_docs = len(doc_texts)
    tf: Counter = Counter()
    df: Counter = Counter()
    for text in doc_texts:
        terms = tokenize(text)
        tf.update(terms)
        df.update(set(terms))
    weight = {
        t: tf[t] * math.log(1.0 + n_docs / (1.0 + df[t])) for t in tf
    }

    def score(sentence: str) -> float:
        terms = tokenize(sentence)
        if not terms:
            return 0.0
        return sum(weight.get(t, 0.0) for t in terms) / len(terms)

    ranked = sorted(
        range(len(sentences)), key=lambda i: (-score(sentences[i]), i)
    )
    chosen: list[int] = []
    used_words = 0
    for i in ranked:
        n_words = len(sentences[i].split())
        if used_words + n_words > word_limit:
            break
        chosen.append(i)
        used_words += n_words
    if not chosen:
        chosen = [ranked[0]]
    text = " ".join(sentences[i] for i in sorted(chosen))
    return Summary(topic_index=topic_index, text=text, source="extractive")
