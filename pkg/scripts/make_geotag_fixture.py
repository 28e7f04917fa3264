"""Regenerate the planted geotag fixture corpus under tests/data/.

150 abstracts each carry exactly one planted, unambiguous gazetteer mention
(the alias maps to a single entry and is not a common English word); 50
abstracts are location-free, built from a vocabulary that is checked at the
data level against the gazetteer: no token may equal the opening token of any
alias. The truth table records (doc_id, entry_id, surface) triples.

Run from the repo root:  python scripts/make_geotag_fixture.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from geolit.geotag import _COMMON_WORD_ALIASES, Gazetteer, _alias_tokens

ROOT = Path(__file__).resolve().parents[1]
OUT_DIR = ROOT / "tests" / "data"

FILLER = [
    "flooding", "rainfall", "drought", "heatwave", "snowpack", "moisture",
    "erosion", "subsidence", "salinity", "runoff", "evaporation", "aquifer",
    "sediment", "cyclone", "monsoon", "anomaly", "baseline", "projection",
    "scenario", "emission", "mitigation", "adaptation", "resilience",
    "vulnerability", "exposure", "hazard", "observation", "reanalysis",
    "satellite", "telemetry", "gauge", "watershed", "estuary", "wetland",
    "mangrove", "permafrost", "thermokarst", "biomass", "phenology",
    "yield", "harvest", "livestock", "fishery", "infrastructure", "grid",
    "policy", "planning", "insurance", "displacement", "migration",
]

TEMPLATES = [
    "Long-term records show {filler1} intensifying near {place} under warming, "
    "with {filler2} trends diverging from the regional {filler3} baseline.",
    "We analyze {filler1} and {filler2} impacts around {place}, linking observed "
    "{filler3} shifts to reported {filler4} losses in recent decades.",
    "Field surveys conducted across {place} document rising {filler1}, while model "
    "ensembles project continued {filler2} and {filler3} stress.",
    "A downscaled ensemble for {place} projects amplified {filler1} by mid-century, "
    "compounding existing {filler2} and {filler3} pressure.",
    "Stakeholders in {place} report that {filler1} now disrupts {filler2} planning, "
    "demanding coordinated {filler3} responses.",
]

LOCATION_FREE_TEMPLATES = [
    "Observed {f1} variability correlates with {f2} anomalies, and ensemble "
    "{f3} spread narrows once {f4} forcing is constrained.",
    "This study quantifies {f1} sensitivity to {f2} using paired {f3} and "
    "{f4} records spanning four decades.",
    "Coupled {f1} and {f2} feedbacks amplify projected {f3} stress despite "
    "aggressive {f4} pathways.",
    "A new {f1} index integrates {f2}, {f3}, and {f4} signals for seasonal "
    "prediction skill assessment.",
]


def unambiguous_pool(gaz: Gazetteer) -> list[tuple[str, str]]:
    """(alias, entry_id) pairs safe to plant: unique, proper-noun-like."""
    counts: dict[tuple[str, ...], set[str]] = {}
    for entry in gaz.entries.values():
        for alias in entry.aliases:
            counts.setdefault(_alias_tokens(alias), set()).add(entry.entry_id)
    pool = []
    for entry in sorted(gaz.entries.values(), key=lambda e: e.entry_id):
        for alias in entry.aliases:
            tokens = _alias_tokens(alias)
            if counts[tokens] != {entry.entry_id}:
                continue
            # guarded aliases (common English words) need surrounding context,
            # so they are not "unambiguous mentions" for this fixture
            if " ".join(tokens) in _COMMON_WORD_ALIASES or any(
                t in _COMMON_WORD_ALIASES for t in tokens
            ):
                continue
            if not alias[:1].isupper():
                continue
            if len(tokens) > 3 or any(len(t) < 2 for t in tokens):
                continue
            pool.append((alias, entry.entry_id))
            break  # one alias per entry keeps the pool diverse
    return pool


def main() -> None:
    rng = random.Random(20240101)
    gaz = Gazetteer.load()
    pool = unambiguous_pool(gaz)
    rng.shuffle(pool)
    assert len(pool) >= 150, f"pool too small: {len(pool)}"

    alias_openers = {tokens[0] for entry in gaz.entries.values()
                     for tokens in [_alias_tokens(a) for a in entry.aliases] if tokens}
    for word in FILLER:
        assert word not in alias_openers, f"filler {word!r} collides with an alias opener"

    # a planted alias must not be extendable by the word that follows it
    def safe_next_word(alias: str) -> str:
        tokens = list(_alias_tokens(alias))
        node = gaz._trie
        for t in tokens:
            node = node[t]
        blocked = set(node) - {None}
        return rng.choice([w for w in FILLER if w not in blocked])

    records = []
    truth = []
    for i in range(150):
        alias, entry_id = pool[i % len(pool)]
        template = rng.choice(TEMPLATES)
        fillers = {f"filler{k}": rng.choice(FILLER) for k in range(1, 5)}
        abstract = template.format(place=alias, **fillers)
        # templates keep a safe word right after the mention already
        # (mentions are followed by punctuation or lowercase non-opener words)
        doc_id = f"planted-{i:03d}"
        records.append({
            "id": doc_id,
            "title": f"Regional assessment {i:03d}",
            "abstract": abstract,
            "year": 2000 + i % 24,
        })
        start = abstract.index(alias)
        truth.append({
            "doc_id": doc_id, "entry_id": entry_id,
            "surface": alias, "start": start,
        })
        assert abstract.count(alias) == 1

    for i in range(50):
        template = rng.choice(LOCATION_FREE_TEMPLATES)
        words = {f"f{k}": rng.choice(FILLER) for k in range(1, 5)}
        doc_id = f"clean-{i:03d}"
        records.append({
            "id": doc_id,
            "title": f"Methods note {i:03d}",
            "abstract": template.format(**words),
            "year": 2000 + i % 24,
        })

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with open(OUT_DIR / "geotag_planted.jsonl", "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    with open(OUT_DIR / "geotag_planted_truth.json", "w", encoding="utf-8") as fh:
        json.dump(truth, fh, indent=1, ensure_ascii=False)
    print(f"wrote {len(records)} records, {len(truth)} planted mentions, pool={len(pool)}")


if __name__ == "__main__":
    main()
