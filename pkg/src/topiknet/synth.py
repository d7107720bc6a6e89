"""Synthetic corpora with planted topic communities and trends.

Each article picks a home block uniformly at random, mentions home-block
topics with that block's within probability and other topics with their
block's between probability, with a per-topic logistic drift over months.
Mentioned phrases appear verbatim in the abstract (padded with filler
words) and as keywords, so generated corpora run through the standard
pipeline unchanged.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
import numpy as np

from .corpus import ArticleRecord, ingest
from .errors import ConfigError
from .months import MonthRange, month_label

_FILLERS = (
    "The", "study", "presents", "results", "for", "a", "cohort", "of",
    "subjects", "using", "novel", "analysis", "methods", "and", "shows",
    "robust", "effects", "across", "conditions", "with", "significant",
    "findings", "reported", "here", "alongside", "control", "measures",
    "that", "were", "collected", "during", "baseline", "sessions",
)


@dataclass(frozen=True)
class TopicBlock:
    """A group of topics with its mention probabilities."""

    topics: tuple[str, ...]
    within: float
    between: float


@dataclass(frozen=True)
class SynthSpec:
    blocks: tuple[TopicBlock, ...]
    n_articles: int
    months: MonthRange
    seed: int
    trends: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        seen: set[str] = set()
        for block in self.blocks:
            if not block.topics:
                raise ConfigError("empty topic block")
            if not (0.0 <= block.within <= 1.0 and 0.0 <= block.between <= 1.0):
                raise ConfigError("mention probabilities must lie in [0, 1]")
            overlap = seen.intersection(block.topics)
            if overlap:
                raise ConfigError(f"topics {sorted(overlap)} appear in two blocks")
            seen.update(block.topics)
        if self.n_articles < 1:
            raise ConfigError("n_articles must be positive")
        unknown = set(self.trends) - seen
        if unknown:
            raise ConfigError(f"trend topics not in any block: {sorted(unknown)}")

    @property
    def topics(self) -> tuple[str, ...]:
        return tuple(t for block in self.blocks for t in block.topics)


def load_spec(path: str | Path) -> SynthSpec:
    """Read a generator spec from its JSON document."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        blocks = tuple(
            TopicBlock(
                topics=tuple(b["topics"]),
                within=float(b["within"]),
                between=float(b["between"]),
            )
            for b in raw["blocks"]
        )
        return SynthSpec(
            blocks=blocks,
            n_articles=int(raw["n_articles"]),
            months=MonthRange.from_labels(raw["months"]["start"], raw["months"]["end"]),
            seed=int(raw["seed"]),
            trends={str(k): float(v) for k, v in raw.get("trends", {}).items()},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid synth spec {path}: {exc}") from exc


def _mention_probability(base: float, drift: float, months_in: int) -> float:
    if base <= 0.0:
        return 0.0
    if base >= 1.0:
        return 1.0
    logit = math.log(base / (1.0 - base)) + drift * months_in
    return 1.0 / (1.0 + math.exp(-logit))


def expected_prevalence(spec: SynthSpec, topic: str, month: int) -> float:
    """Closed-form mention probability for a topic in a given month."""
    block_of = {t: b for b in spec.blocks for t in b.topics}
    if topic not in block_of:
        raise ConfigError(f"unknown topic {topic!r}")
    home = block_of[topic]
    drift = spec.trends.get(topic, 0.0)
    months_in = month - spec.months.start
    acc = 0.0
    for block in spec.blocks:
        base = home.within if block is home else home.between
        acc += _mention_probability(base, drift, months_in)
    return acc / len(spec.blocks)


def generate_raw(spec: SynthSpec) -> list[dict]:
    """Article dicts in the corpus file schema, deterministic per seed."""
    block_of = {t: i for i, b in enumerate(spec.blocks) for t in b.topics}
    topics = spec.topics
    articles = []
    n_months = len(spec.months)
    for idx in range(spec.n_articles):
        rng = np.random.default_rng((spec.seed, idx))
        month = spec.months.start + int(rng.integers(0, n_months))
        home = int(rng.integers(0, len(spec.blocks)))
        mentioned = []
        for topic in topics:
            block = spec.blocks[block_of[topic]]
            base = block.within if block_of[topic] == home else block.between
            p = _mention_probability(base, spec.trends.get(topic, 0.0),
                                     month - spec.months.start)
            if rng.random() < p:
                mentioned.append(topic)
        words = list(rng.choice(_FILLERS, size=3))
        for topic in mentioned:
            words.extend(rng.choice(_FILLERS, size=int(rng.integers(1, 3))))
            words.append(topic)
        articles.append(
            {
                "id": f"S{idx:06d}",
                "date": month_label(month),
                "abstract": " ".join(words) + ".",
                "keywords": mentioned,
            }
        )
    return articles


def generate(spec: SynthSpec) -> list[ArticleRecord]:
    """Generate and normalize records through the standard ingestion path."""
    lines = (json.dumps(a, ensure_ascii=False) for a in generate_raw(spec))
    return ingest(lines, spec.months).records


def write_corpus(spec: SynthSpec, path: str | Path) -> int:
    """Write the generated corpus as JSONL; returns the article count."""
    articles = generate_raw(spec)
    with open(path, "w", encoding="utf-8") as fh:
        for article in articles:
            fh.write(json.dumps(article, ensure_ascii=False) + "\n")
    return len(articles)
