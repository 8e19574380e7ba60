"""Streaming parsers for Q&A data-dump tables and the mining procedures.

``Posts.xml`` and ``PostLinks.xml`` are sequences of attribute-only
``<row .../>`` elements; both parsers feed expat in fixed-size chunks, so
memory stays constant no matter how large the dump is.  On top of the
parsed records sit the two extraction procedures: annotation units (one
original question pooled with its duplicates' answers) and contrastive
title triplets mined from duplicate links and tag disjointness.
"""

from __future__ import annotations

import json
import random
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator
from xml.parsers import expat

from .corpus import (
    AnnotationUnit,
    Answer,
    TechnicalQuery,
    build_unit,
    clean_answer_sentences,
    is_textual,
)

DUPLICATE_LINK_TYPE = "3"

MIN_UNIT_ANSWERS = 10
MAX_UNIT_ANSWERS = 15

DEFAULT_LANGUAGES = frozenset({"java", "python"})

_CHUNK_SIZE = 1 << 16
_TAGS_RE = re.compile(r"<([^<>]+)>|\|([^|]+)(?=\|)")


class DumpParseError(Exception):
    """Malformed dump XML; ``byte_offset`` locates the failure."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


@dataclass(frozen=True)
class PostRecord:
    post_id: int
    post_type: str  # "question" or "answer"
    parent_id: int | None
    title: str | None
    body_html: str
    tags: frozenset[str]
    score: int

    def __post_init__(self):
        if self.post_type == "answer" and self.parent_id is None:
            raise ValueError(f"answer {self.post_id} has no parent_id")
        if self.post_type == "question" and not self.title:
            raise ValueError(f"question {self.post_id} has no title")


@dataclass(frozen=True)
class DuplicateLink:
    duplicate_post_id: int
    original_post_id: int

    def __post_init__(self):
        if self.duplicate_post_id == self.original_post_id:
            raise ValueError("a post cannot duplicate itself")


@dataclass(frozen=True)
class SentenceTriplet:
    anchor: str
    positive: str
    negative: str

    def __post_init__(self):
        if not (self.anchor and self.positive and self.negative):
            raise ValueError("triplet sentences must be non-empty")
        if self.anchor == self.negative:
            raise ValueError("anchor and negative must differ")

    def as_dict(self) -> dict:
        return {
            "anchor": self.anchor,
            "positive": self.positive,
            "negative": self.negative,
        }


def _iter_rows(stream: BinaryIO) -> Iterator[dict]:
    """Yield the attribute dict of each ``<row/>`` element, streaming."""
    parser = expat.ParserCreate()
    pending: list[dict] = []

    def start_element(name: str, attrs: dict) -> None:
        if name == "row":
            pending.append(attrs)

    parser.StartElementHandler = start_element
    while True:
        chunk = stream.read(_CHUNK_SIZE)
        try:
            parser.Parse(chunk, not chunk)
        except expat.ExpatError as exc:
            raise DumpParseError(
                expat.errors.messages[exc.code], parser.ErrorByteIndex
            ) from exc
        yield from pending
        pending.clear()
        if not chunk:
            return


def parse_tags(raw: str) -> frozenset[str]:
    """Parse the dump's ``<tag>`` (or pipe-delimited) tag encoding."""
    return frozenset(a or b for a, b in _TAGS_RE.findall(raw))


def parse_postlinks(
    stream: BinaryIO, counts: Counter | None = None
) -> Iterator[DuplicateLink]:
    """Yield duplicate links from a PostLinks XML stream, in order.

    Rows whose LinkTypeId is not the duplicate code are skipped and
    counted, as are rows missing ids or linking a post to itself.
    """
    counts = counts if counts is not None else Counter()
    for row in _iter_rows(stream):
        if row.get("LinkTypeId") != DUPLICATE_LINK_TYPE:
            counts["postlinks_skipped_link_type"] += 1
            continue
        try:
            link = DuplicateLink(
                duplicate_post_id=int(row["PostId"]),
                original_post_id=int(row["RelatedPostId"]),
            )
        except (KeyError, ValueError):
            counts["postlinks_skipped_malformed"] += 1
            continue
        counts["postlinks_duplicates"] += 1
        yield link


def parse_posts(
    stream: BinaryIO, counts: Counter | None = None
) -> Iterator[PostRecord]:
    """Yield question and answer records from a Posts XML stream, in order.

    Rows with other post types, or missing the fields their type requires
    (Body always; Title for questions, ParentId for answers), are skipped
    and counted.
    """
    counts = counts if counts is not None else Counter()
    for row in _iter_rows(stream):
        post_type_id = row.get("PostTypeId")
        if post_type_id not in ("1", "2"):
            counts["posts_skipped_type"] += 1
            continue
        if "Body" not in row:
            counts["posts_skipped_no_body"] += 1
            continue
        try:
            if post_type_id == "1":
                record = PostRecord(
                    post_id=int(row["Id"]),
                    post_type="question",
                    parent_id=None,
                    title=row["Title"],
                    body_html=row["Body"],
                    tags=parse_tags(row.get("Tags", "")),
                    score=int(row.get("Score", "0")),
                )
            else:
                record = PostRecord(
                    post_id=int(row["Id"]),
                    post_type="answer",
                    parent_id=int(row["ParentId"]),
                    title=None,
                    body_html=row["Body"],
                    tags=frozenset(),
                    score=int(row.get("Score", "0")),
                )
        except (KeyError, ValueError):
            counts["posts_skipped_malformed"] += 1
            continue
        counts[f"posts_{record.post_type}s"] += 1
        yield record


class PostStore:
    """In-memory post index supporting lookup by id and by parent."""

    def __init__(self):
        self._by_id: dict[int, PostRecord] = {}
        self._answers_by_parent: dict[int, list[PostRecord]] = {}

    @classmethod
    def from_records(cls, records: Iterable[PostRecord]) -> "PostStore":
        store = cls()
        for record in records:
            store.add(record)
        return store

    @classmethod
    def from_file(cls, path: str | Path, counts: Counter | None = None) -> "PostStore":
        with open(path, "rb") as stream:
            return cls.from_records(parse_posts(stream, counts))

    def add(self, record: PostRecord) -> None:
        self._by_id[record.post_id] = record
        if record.post_type == "answer":
            self._answers_by_parent.setdefault(record.parent_id, []).append(record)

    def get(self, post_id: int) -> PostRecord | None:
        return self._by_id.get(post_id)

    def answers_of(self, question_id: int) -> list[PostRecord]:
        return sorted(
            self._answers_by_parent.get(question_id, ()),
            key=lambda r: r.post_id,
        )

    def questions(self) -> list[PostRecord]:
        return sorted(
            (r for r in self._by_id.values() if r.post_type == "question"),
            key=lambda r: r.post_id,
        )

    def __len__(self) -> int:
        return len(self._by_id)


def _answer_survives(post: PostRecord, counts: Counter) -> bool:
    if post.score <= 0:
        counts["answers_dropped_no_vote"] += 1
        return False
    sentences = clean_answer_sentences(post.body_html)
    if not any(is_textual(s) for s in sentences):
        counts["answers_dropped_code_only"] += 1
        return False
    return True


def extract_annotation_units(
    links: Iterable[DuplicateLink],
    posts: PostStore,
    languages: frozenset[str] = DEFAULT_LANGUAGES,
    counts: Counter | None = None,
) -> list[AnnotationUnit]:
    """Build annotation units from duplicate links and a post store.

    For each original question tagged with a requested language, the
    answers of the original and all its duplicates are pooled; answers
    with no positive vote or with no textual sentence are dropped, and the
    unit is kept only when 10 to 15 answers survive.
    """
    counts = counts if counts is not None else Counter()
    languages = frozenset(lang.lower() for lang in languages)

    duplicates_of: dict[int, set[int]] = {}
    for link in links:
        duplicates_of.setdefault(link.original_post_id, set()).add(
            link.duplicate_post_id
        )

    units = []
    for original_id in sorted(duplicates_of):
        original = posts.get(original_id)
        if original is None or original.post_type != "question":
            counts["units_skipped_missing_original"] += 1
            continue
        if not (original.tags & languages):
            counts["units_skipped_language"] += 1
            continue

        answer_posts = list(posts.answers_of(original_id))
        for duplicate_id in sorted(duplicates_of[original_id]):
            if posts.get(duplicate_id) is None:
                counts["units_skipped_missing_duplicate"] += 1
                continue
            answer_posts.extend(posts.answers_of(duplicate_id))

        surviving = [p for p in answer_posts if _answer_survives(p, counts)]
        if not MIN_UNIT_ANSWERS <= len(surviving) <= MAX_UNIT_ANSWERS:
            counts["units_dropped_answer_count"] += 1
            continue

        answers = [
            Answer(
                answer_index=index,
                body_html=post.body_html,
                vote_score=post.score,
                source_post_id=post.post_id,
            )
            for index, post in enumerate(surviving)
        ]
        units.append(
            build_unit(
                TechnicalQuery(text=original.title, tags=original.tags), answers
            )
        )
        counts["units_kept"] += 1
    return units


def build_contrastive_triplets(
    links: Iterable[DuplicateLink],
    posts: PostStore,
    languages: frozenset[str] = DEFAULT_LANGUAGES,
    rng_seed: int = 0,
    negatives_from_all_languages: bool = False,
    counts: Counter | None = None,
) -> Iterator[SentenceTriplet]:
    """Yield (anchor, positive, negative) title triplets, one per link.

    The anchor is the original question's title, the positive its
    duplicate's title, and the negative the title of a question sampled
    uniformly (seeded) among questions sharing no tag with the anchor.  By
    default the negative pool is restricted to the requested languages;
    ``negatives_from_all_languages`` widens it to every question.
    """
    counts = counts if counts is not None else Counter()
    languages = frozenset(lang.lower() for lang in languages)
    rng = random.Random(rng_seed)

    pool = [
        q
        for q in posts.questions()
        if q.title and (negatives_from_all_languages or (q.tags & languages))
    ]

    for link in links:
        original = posts.get(link.original_post_id)
        duplicate = posts.get(link.duplicate_post_id)
        if (
            original is None
            or duplicate is None
            or original.post_type != "question"
            or duplicate.post_type != "question"
        ):
            counts["triplets_skipped_missing_post"] += 1
            continue
        if not (original.tags & languages):
            counts["triplets_skipped_language"] += 1
            continue

        candidates = [
            q
            for q in pool
            if not (q.tags & original.tags)
            and q.post_id not in (original.post_id, duplicate.post_id)
            and q.title != original.title
        ]
        if not candidates:
            counts["triplets_skipped_no_negative"] += 1
            continue
        negative = rng.choice(candidates)
        counts["triplets_emitted"] += 1
        yield SentenceTriplet(
            anchor=original.title,
            positive=duplicate.title,
            negative=negative.title,
        )


def write_triplets_jsonl(
    triplets: Iterable[SentenceTriplet], path: str | Path
) -> int:
    """Write triplets as JSON lines; returns the number written."""
    written = 0
    with open(path, "w", encoding="utf-8") as handle:
        for triplet in triplets:
            handle.write(json.dumps(triplet.as_dict(), ensure_ascii=False) + "\n")
            written += 1
    return written


def read_triplets_jsonl(path: str | Path) -> list[SentenceTriplet]:
    triplets = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            triplets.append(
                SentenceTriplet(
                    anchor=data["anchor"],
                    positive=data["positive"],
                    negative=data["negative"],
                )
            )
    return triplets
