"""Article corpus handling: ingestion, phrase canonicalization, prevalence.

The corpus file is JSON Lines, one article per line, with fields ``id``,
``date`` (YYYY-MM), ``abstract`` (free text) and ``keywords`` (array of
phrases). Normalization lowercases, splits on whitespace and strips
punctuation from token edges while keeping internal hyphens.

Canonicalization replaces variant phrases with their canonical form, and a
multiword canonical phrase becomes a single atomic stream token (spaces
preserved). Matching a topic against a token stream therefore sees
"somatosensory cortex" as one unit once it has been canonicalized: the
shorter topic "cortex" no longer matches inside it. A canonical sub-phrase
absorbed into a longer atomic token will shadow longer raw phrases, so
curated maps should list longer variants explicitly.
"""

from __future__ import annotations

import json
import logging
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import DataError
from .months import MonthRange, month_index

logger = logging.getLogger(__name__)

_STRIP_CHARS = string.punctuation + "‘’“”"


def tokenize(text: str) -> tuple[str, ...]:
    """Lowercase, split on whitespace, strip punctuation off token edges.

    Internal punctuation (hyphens in particular) is preserved; tokens that
    are pure punctuation vanish.
    """
    out = []
    for raw in text.lower().split():
        tok = raw.strip(_STRIP_CHARS)
        if tok:
            out.append(tok)
    return tuple(out)


def normalize_phrase(phrase: str) -> str:
    """Normalize a keyword or topic phrase to its canonical text form."""
    return " ".join(tokenize(phrase))


@dataclass(frozen=True)
class ArticleRecord:
    """One publication: immutable after ingestion."""

    id: str
    date: str
    month: int
    tokens: tuple[str, ...]
    keywords: tuple[str, ...]


class IngestResult(NamedTuple):
    records: list[ArticleRecord]
    n_rejected: int


class CanonicalizationMap:
    """Variant phrase -> canonical phrase map, case-insensitive.

    Invariants enforced on construction: variants are unique, and any
    canonical phrase that also appears as a variant must map to itself
    (fixed point), which rules out chains and cycles.
    """

    def __init__(self, entries: dict[str, str]):
        normalized: dict[str, str] = {}
        for variant, canonical in entries.items():
            v = normalize_phrase(variant)
            c = normalize_phrase(canonical)
            if not v or not c:
                raise DataError(
                    f"empty phrase in canonicalization entry {variant!r} -> {canonical!r}"
                )
            if v in normalized and normalized[v] != c:
                raise DataError(
                    f"variant {v!r} mapped to both {normalized[v]!r} and {c!r}"
                )
            normalized[v] = c
        for canonical in set(normalized.values()):
            if canonical in normalized and normalized[canonical] != canonical:
                raise DataError(
                    f"canonical phrase {canonical!r} is not a fixed point "
                    f"(maps to {normalized[canonical]!r})"
                )
        self.entries = normalized
        # Index variants by first token, longest first, for the scanner.
        by_first: dict[str, list[tuple[tuple[str, ...], str]]] = {}
        for variant, canonical in normalized.items():
            vt = tuple(variant.split(" "))
            by_first.setdefault(vt[0], []).append((vt, canonical))
        for options in by_first.values():
            options.sort(key=lambda vc: len(vc[0]), reverse=True)
        self._by_first = by_first

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "CanonicalizationMap":
        """Load a tab-separated variant<TAB>canonical file ('#' comments)."""
        entries: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected two tab-separated columns")
            variant, canonical = parts
            v = normalize_phrase(variant)
            if v in entries and entries[v] != normalize_phrase(canonical):
                raise DataError(f"{path}:{lineno}: duplicate variant {v!r}")
            entries[v] = canonical
        return cls(entries)

    def apply_tokens(self, tokens: Sequence[str]) -> tuple[str, ...]:
        """Longest-match-first, non-overlapping, left-to-right replacement.

        A matched variant is replaced by its canonical phrase as a single
        atomic token.
        """
        out: list[str] = []
        i = 0
        n = len(tokens)
        while i < n:
            matched = False
            for variant_tokens, canonical in self._by_first.get(tokens[i], ()):
                k = len(variant_tokens)
                if i + k <= n and tuple(tokens[i : i + k]) == variant_tokens:
                    out.append(canonical)
                    i += k
                    matched = True
                    break
            if not matched:
                out.append(tokens[i])
                i += 1
        return tuple(out)

    def apply_phrase(self, phrase: str) -> str:
        return " ".join(self.apply_tokens(phrase.split(" ")))


def _iter_lines(source: str | Path | Iterable[str]) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def ingest(source: str | Path | Iterable[str], date_range: MonthRange) -> IngestResult:
    """Parse a JSONL corpus into normalized article records.

    Malformed lines raise DataError with the 1-based line number; records
    dated outside ``date_range`` are dropped and counted.
    """
    records: list[ArticleRecord] = []
    rejected = 0
    for lineno, line in enumerate(_iter_lines(source), 1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        if not isinstance(raw, dict):
            raise DataError(f"line {lineno}: record is not an object")
        missing = {"id", "date", "abstract", "keywords"} - raw.keys()
        if missing:
            raise DataError(f"line {lineno}: missing fields {sorted(missing)}")
        if not isinstance(raw["keywords"], list):
            raise DataError(f"line {lineno}: keywords must be an array")
        try:
            month = month_index(str(raw["date"]))
        except DataError as exc:
            raise DataError(f"line {lineno}: {exc}") from exc
        if month not in date_range:
            rejected += 1
            continue
        tokens = tokenize(str(raw["abstract"]))
        if not tokens:
            raise DataError(f"line {lineno}: abstract empty after normalization")
        keywords = tuple(
            kw for kw in (normalize_phrase(str(k)) for k in raw["keywords"]) if kw
        )
        records.append(
            ArticleRecord(
                id=str(raw["id"]),
                date=str(raw["date"]).strip(),
                month=month,
                tokens=tokens,
                keywords=keywords,
            )
        )
    if rejected:
        logger.warning("ingest: rejected %d record(s) outside %s", rejected, date_range.label())
    return IngestResult(records, rejected)


def canonicalize(
    records: Sequence[ArticleRecord], cmap: CanonicalizationMap
) -> list[ArticleRecord]:
    """Apply the canonicalization map to abstracts and keyword lists."""
    if not len(cmap):
        return list(records)
    out = []
    for rec in records:
        out.append(
            ArticleRecord(
                id=rec.id,
                date=rec.date,
                month=rec.month,
                tokens=cmap.apply_tokens(rec.tokens),
                keywords=tuple(cmap.apply_phrase(kw) for kw in rec.keywords),
            )
        )
    return out


def _ngrams(tokens: Sequence[str], n: int) -> set[str]:
    if n == 1:
        return set(tokens)
    return {" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)}


def match_topics(records: Sequence[ArticleRecord], topics: Sequence[str]) -> np.ndarray:
    """Boolean matrix: records x topics, True where the article mentions it.

    A topic phrase matches an abstract if its token sequence occurs
    contiguously in the stream or a single (atomic) token equals the whole
    phrase; it matches the keyword section by whole-phrase equality.
    """
    by_len: dict[int, dict[str, list[int]]] = {}
    exact: dict[str, list[int]] = {}
    for j, topic in enumerate(topics):
        parts = topic.split(" ")
        by_len.setdefault(len(parts), {}).setdefault(topic, []).append(j)
        if len(parts) > 1:
            # a canonicalized multiword phrase can sit in the stream as one
            # atomic token equal to the whole phrase
            by_len.setdefault(1, {}).setdefault(topic, []).append(j)
        exact.setdefault(topic, []).append(j)
    hits = np.zeros((len(records), len(topics)), dtype=bool)
    for i, rec in enumerate(records):
        for n, group in by_len.items():
            for phrase in _ngrams(rec.tokens, n).intersection(group):
                hits[i, group[phrase]] = True
        for kw in rec.keywords:
            cols = exact.get(kw)
            if cols is not None:
                hits[i, cols] = True
    return hits


def in_window(records: Sequence[ArticleRecord], window: MonthRange) -> list[ArticleRecord]:
    return [rec for rec in records if rec.month in window]


def topic_prevalence(
    records: Sequence[ArticleRecord], topic: str, window: MonthRange
) -> float:
    """Fraction of in-window articles mentioning the topic (abstract or keywords)."""
    sub = in_window(records, window)
    if not sub:
        raise DataError(f"no articles in window {window.label()}")
    return float(match_topics(sub, [topic]).sum()) / len(sub)


@dataclass(frozen=True)
class TopicVocabulary:
    """Canonical topic phrases ordered by descending prevalence."""

    topics: tuple[str, ...]
    prevalence: dict[str, float]

    def __len__(self) -> int:
        return len(self.topics)


def select_top_k(
    records: Sequence[ArticleRecord], k: int, window: MonthRange
) -> TopicVocabulary:
    """Pick the k most prevalent keyword-section phrases over the window.

    Candidates are all canonical phrases appearing in any in-window keyword
    section; ties break lexicographically.
    """
    sub = in_window(records, window)
    if not sub:
        raise DataError(f"no articles in window {window.label()}")
    candidates = sorted({kw for rec in sub for kw in rec.keywords})
    if len(candidates) < k:
        raise DataError(
            f"only {len(candidates)} candidate topics found, need k={k}"
        )
    counts = match_topics(sub, candidates).sum(axis=0)
    prevalence = counts / len(sub)
    order = sorted(range(len(candidates)), key=lambda j: (-prevalence[j], candidates[j]))
    chosen = [candidates[j] for j in order[:k]]
    return TopicVocabulary(
        topics=tuple(chosen),
        prevalence={t: float(prevalence[candidates.index(t)]) for t in chosen},
    )


def write_normalized(records: Sequence[ArticleRecord], path: str | Path) -> None:
    """Write normalized records as JSONL (tokens and keywords arrays)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                json.dumps(
                    {
                        "id": rec.id,
                        "date": rec.date,
                        "tokens": list(rec.tokens),
                        "keywords": list(rec.keywords),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def read_normalized(path: str | Path) -> list[ArticleRecord]:
    """Read records written by :func:`write_normalized`."""
    records = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        raw = json.loads(line)
        records.append(
            ArticleRecord(
                id=raw["id"],
                date=raw["date"],
                month=month_index(raw["date"]),
                tokens=tuple(raw["tokens"]),
                keywords=tuple(raw["keywords"]),
            )
        )
    return records
