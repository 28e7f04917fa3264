"""Two-stage geographic tagging.

Stage one spots candidate place mentions in abstract text by walking a token
trie built from gazetteer aliases (longest match wins, left to right, and a
mention must look like a proper noun — capitalized first token). Stage two
resolves each candidate to a single country/state/city entry with a fixed,
documented disambiguation order:

1. another span in the document supports exactly one candidate through the
   parent chain (in either direction: "Georgia" next to "United States", or
   "Georgia" next to "Atlanta");
2. kind order country > state > city;
3. highest population;
4. lowest entry id.

Confidence is 1.0 for single-candidate and context-resolved picks, 0.6 when
rules 2-4 decided.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .embed import STOPWORDS
from .errors import MalformedRecord

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Prepositions that let a common-word alias ("Nice", "Of") through the guard.
_PLACE_PREPOSITIONS = {"in", "near", "at", "from"}
# Articles skipped when looking back for one of the prepositions above.
_ARTICLES = {"the", "a", "an"}
# Aliases that are ordinary English words need extra context before they count.
_COMMON_WORD_ALIASES = STOPWORDS | {
    "nice", "mobile", "bath", "reading", "cork", "split", "male", "buffalo",
    "phoenix", "orange", "august",
}

_KIND_RANK = {"country": 0, "state": 1, "city": 2}


@dataclass(frozen=True)
class GeoEntry:
    entry_id: str
    kind: str  # country | state | city
    canonical_name: str
    parent_id: str | None
    population: int
    aliases: tuple[str, ...]


@dataclass(frozen=True)
class CandidateSpan:
    start: int
    end: int
    surface: str
    candidate_entry_ids: tuple[str, ...]


@dataclass(frozen=True)
class GeoTag:
    doc_id: str
    entry_id: str
    surface: str
    start: int
    end: int
    confidence: float


def _alias_tokens(alias: str) -> tuple[str, ...]:
    return tuple(t.lower() for t in _WORD_RE.findall(alias))


class Gazetteer:
    """Immutable place dictionary with a token-trie alias index."""

    def __init__(self, entries: list[GeoEntry]):
        self.entries: dict[str, GeoEntry] = {}
        for entry in entries:
            if entry.entry_id in self.entries:
                raise MalformedRecord(f"duplicate gazetteer entry id {entry.entry_id!r}")
            self.entries[entry.entry_id] = entry
        self._validate()
        # trie node: dict token -> child node; terminal ids under the None key
        self._trie: dict = {}
        for entry in entries:
            for alias in entry.aliases:
                tokens = _alias_tokens(alias)
                if not tokens:
                    continue
                node = self._trie
                for tok in tokens:
                    node = node.setdefault(tok, {})
                node.setdefault(None, set()).add(entry.entry_id)
        self._ancestor_cache: dict[str, tuple[str, ...]] = {}

    def _validate(self) -> None:
        for entry in self.entries.values():
            if entry.kind not in _KIND_RANK:
                raise MalformedRecord(f"{entry.entry_id}: unknown kind {entry.kind!r}")
            if entry.kind == "country" and entry.parent_id is not None:
                raise MalformedRecord(f"{entry.entry_id}: a country cannot have a parent")
            if entry.parent_id is not None:
                parent = self.entries.get(entry.parent_id)
                if parent is None:
                    raise MalformedRecord(f"{entry.entry_id}: unknown parent {entry.parent_id!r}")
                if entry.kind == "state" and parent.kind != "country":
                    raise MalformedRecord(f"{entry.entry_id}: state parent must be a country")
                if entry.kind == "city" and parent.kind == "city":
                    raise MalformedRecord(f"{entry.entry_id}: city parent must be state or country")
            if entry.canonical_name not in entry.aliases:
                raise MalformedRecord(f"{entry.entry_id}: canonical name missing from aliases")

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Gazetteer":
        """Load the tab-separated gazetteer file (bundled snapshot by default)."""
        if path is None:
            text = resources.files("geolit.data").joinpath("gazetteer.tsv").read_text("utf-8")
        else:
            text = Path(path).read_text("utf-8")
        entries: list[GeoEntry] = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 6:
                raise MalformedRecord(f"gazetteer line {lineno}: expected 6 fields, got {len(parts)}")
            entry_id, kind, name, parent, population, aliases = parts
            entries.append(GeoEntry(
                entry_id=entry_id,
                kind=kind,
                canonical_name=name,
                parent_id=None if parent == "-" else parent,
                population=int(population),
                aliases=tuple(a for a in aliases.split("|") if a),
            ))
        return cls(entries)

    def ancestors(self, entry_id: str) -> tuple[str, ...]:
        """Strict ancestor chain, nearest first (eg city -> state -> country)."""
        cached = self._ancestor_cache.get(entry_id)
        if cached is not None:
            return cached
        chain: list[str] = []
        cur = self.entries[entry_id].parent_id
        while cur is not None:
            chain.append(cur)
            cur = self.entries[cur].parent_id
        result = tuple(chain)
        self._ancestor_cache[entry_id] = result
        return result


def extract_mentions(text: str, gazetteer: Gazetteer) -> list[CandidateSpan]:
    """Candidate place spans: longest match wins, left to right, non-overlapping.

    A match must start at a token whose original-case form is capitalized.
    Aliases that are ordinary English words additionally need a nearby
    preposition ("in Nice") or an adjacent non-suspect place span, otherwise
    they are dropped.
    """
    tokens = [(m.group(), m.start(), m.end()) for m in _WORD_RE.finditer(text)]
    spans: list[CandidateSpan] = []
    suspect: list[bool] = []
    prev_token_idx: list[int] = []  # index of the token before each span
    span_token_range: list[tuple[int, int]] = []

    i = 0
    while i < len(tokens):
        word, start, _ = tokens[i]
        if not word[:1].isupper():
            i += 1
            continue
        node = gazetteer._trie.get(word.lower())
        best_len, best_ids = 0, None
        depth = 1
        while node is not None:
            ids = node.get(None)
            if ids:
                best_len, best_ids = depth, ids
            if i + depth < len(tokens):
                node = node.get(tokens[i + depth][0].lower())
                depth += 1
            else:
                node = None
        if best_ids is None:
            i += 1
            continue
        end = tokens[i + best_len - 1][2]
        surface = text[start:end]
        spans.append(CandidateSpan(
            start=start, end=end, surface=surface,
            candidate_entry_ids=tuple(sorted(best_ids)),
        ))
        matched = " ".join(t.lower() for t in _WORD_RE.findall(surface))
        suspect.append(matched in _COMMON_WORD_ALIASES)
        prev_token_idx.append(i - 1)
        span_token_range.append((i, i + best_len - 1))
        i += best_len

    if not any(suspect):
        return spans

    safe_token_ranges = [rng for s, rng in zip(suspect, span_token_range) if not s]
    kept: list[CandidateSpan] = []
    for span, is_suspect, prev_idx, (tok_a, tok_b) in zip(
        spans, suspect, prev_token_idx, span_token_range
    ):
        if not is_suspect:
            kept.append(span)
            continue
        # look back past articles for a place preposition
        j = prev_idx
        while j >= 0 and tokens[j][0].lower() in _ARTICLES:
            j -= 1
        has_preposition = j >= 0 and tokens[j][0].lower() in _PLACE_PREPOSITIONS
        has_neighbor = any(
            0 <= tok_a - b2 <= 3 or 0 <= a2 - tok_b <= 3
            for a2, b2 in safe_token_ranges
        )
        if has_preposition or has_neighbor:
            kept.append(span)
    return kept


def resolve(
    candidate: CandidateSpan,
    context: list[CandidateSpan],
    gazetteer: Gazetteer,
    doc_id: str = "",
) -> GeoTag | None:
    """Disambiguate one candidate span against the document's other spans."""
    ids = candidate.candidate_entry_ids
    if not ids:
        return None

    def _tag(entry_id: str, confidence: float) -> GeoTag:
        return GeoTag(
            doc_id=doc_id, entry_id=entry_id, surface=candidate.surface,
            start=candidate.start, end=candidate.end, confidence=confidence,
        )

    if len(ids) == 1:
        return _tag(ids[0], 1.0)

    context_ids = {
        eid
        for span in context
        if not (span.start == candidate.start and span.end == candidate.end)
        for eid in span.candidate_entry_ids
    }
    supported = [
        cid for cid in ids
        if any(
            ctx in gazetteer.ancestors(cid) or cid in gazetteer.ancestors(ctx)
            for ctx in context_ids
        )
    ]
    if len(supported) == 1:
        return _tag(supported[0], 1.0)

    best = min(
        ids,
        key=lambda cid: (
            _KIND_RANK[gazetteer.entries[cid].kind],
            -gazetteer.entries[cid].population,
            cid,
        ),
    )
    return _tag(best, 0.6)


def tag_document(doc, gazetteer: Gazetteer) -> list[GeoTag]:
    """Extract and resolve every mention in the abstract; update the record.

    Returns one GeoTag per span (the full mention record); the document's
    geo_tags field receives the deduplicated entry-id set used for counting.
    """
    spans = extract_mentions(doc.abstract, gazetteer) if doc.abstract else []
    tags: list[GeoTag] = []
    for span in spans:
        tag = resolve(span, spans, gazetteer, doc_id=doc.doc_id)
        if tag is not None:
            tags.append(tag)
    doc.geo_tags = {t.entry_id for t in tags}
    return tags
