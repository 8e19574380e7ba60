"""Domain model for technical queries, answers, and benchmark data.

An annotation unit pairs one technical query with the pooled answers of the
original question and its duplicates.  Answer bodies arrive as HTML; the
cleaning pipeline here turns them into plain candidate sentences in which
hyperlinks, code blocks, tables, and images are reduced to the placeholders
``[external-link]``, ``[code-snippet]``, ``[table]``, and ``[figure]``.
Inline code is kept verbatim in backticks.

Sentence identifiers follow the ``#AA_SS`` convention: zero-padded answer
index plus 1-based sentence position within the answer.
"""

from __future__ import annotations

import html
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

LINK_PLACEHOLDER = "[external-link]"
CODE_PLACEHOLDER = "[code-snippet]"
TABLE_PLACEHOLDER = "[table]"
FIGURE_PLACEHOLDER = "[figure]"

REFERENCE_SENTENCE_COUNT = 5

# Headings this long are usually summative statements, not section labels.
HEADING_SENTENCE_MIN_WORDS = 6


class BenchmarkFormatError(ValueError):
    """A benchmark file violates the schema or an entry invariant."""

    def __init__(self, message: str, entry_index: int | None = None):
        super().__init__(message)
        self.entry_index = entry_index


class UnitFormatError(ValueError):
    """An annotation-unit file violates the schema or unit invariants."""


def sentence_id(answer_index: int, sentence_index: int) -> str:
    """Render the ``#AA_SS`` identifier; indices past 99 widen naturally."""
    return f"#{answer_index:02d}_{sentence_index:02d}"


_SENTENCE_ID_RE = re.compile(r"#(\d{2,})_(\d{2,})$")


def parse_sentence_id(raw: str) -> tuple[int, int]:
    match = _SENTENCE_ID_RE.match(raw)
    if match is None:
        raise ValueError(f"malformed sentence id: {raw!r}")
    return int(match.group(1)), int(match.group(2))


@dataclass(frozen=True)
class TechnicalQuery:
    """The original question title plus its tags."""

    text: str
    tags: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("query text must be non-empty")
        object.__setattr__(self, "tags", frozenset(self.tags))


@dataclass(frozen=True)
class Answer:
    """One answer post, still carrying its raw HTML body."""

    answer_index: int
    body_html: str
    vote_score: int
    source_post_id: int

    def __post_init__(self):
        if self.answer_index < 0:
            raise ValueError("answer_index must be >= 0")


_RAW_MARKUP_RE = re.compile(r"<(a|pre|table|img)\b", re.IGNORECASE)


@dataclass(frozen=True)
class AnswerSentence:
    """One cleaned sentence with its positional identifier."""

    id: str
    text: str
    answer_index: int
    sentence_index: int

    def __post_init__(self):
        if self.id != sentence_id(self.answer_index, self.sentence_index):
            raise ValueError(
                f"id {self.id!r} does not match indices "
                f"({self.answer_index}, {self.sentence_index})"
            )
        if not self.text:
            raise ValueError(f"sentence {self.id} has empty text")
        if _RAW_MARKUP_RE.search(self.text):
            raise ValueError(f"sentence {self.id} still contains raw markup")


@dataclass(frozen=True)
class AnnotationUnit:
    """A technical query plus its pooled answers and candidate sentences."""

    query: TechnicalQuery
    answers: tuple[Answer, ...]
    sentences: tuple[AnswerSentence, ...]

    def __post_init__(self):
        object.__setattr__(self, "answers", tuple(self.answers))
        object.__setattr__(self, "sentences", tuple(self.sentences))
        indices = [a.answer_index for a in self.answers]
        if len(set(indices)) != len(indices):
            raise ValueError("answer_index values must be unique within a unit")
        ids = [s.id for s in self.sentences]
        if len(set(ids)) != len(ids):
            raise ValueError("sentence ids must be unique within a unit")


@dataclass(frozen=True)
class BenchmarkEntry:
    """One query, its candidate pool, and its reference summaries."""

    query: TechnicalQuery
    candidates: tuple[AnswerSentence, ...]
    references: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(
            self, "references", tuple(tuple(ref) for ref in self.references)
        )
        if not self.references:
            raise ValueError("entry must carry at least one reference summary")
        for i, ref in enumerate(self.references):
            if len(ref) != REFERENCE_SENTENCE_COUNT:
                raise ValueError(
                    f"reference {i} has {len(ref)} sentences "
                    f"(expected {REFERENCE_SENTENCE_COUNT})"
                )


# --------------------------------------------------------------------------
# Sentence splitting
# --------------------------------------------------------------------------

_PRE_RE = re.compile(r"<pre\b[^>]*>.*?</pre\s*>", re.IGNORECASE | re.DOTALL)
_TABLE_RE = re.compile(r"<table\b[^>]*>.*?</table\s*>", re.IGNORECASE | re.DOTALL)
_CODE_RE = re.compile(r"<code\b[^>]*>.*?</code\s*>", re.IGNORECASE | re.DOTALL)
_ANCHOR_RE = re.compile(r"<a\b[^>]*>.*?</a\s*>", re.IGNORECASE | re.DOTALL)
_IMG_RE = re.compile(r"<img\b[^>]*/?>", re.IGNORECASE)
_BACKTICK_RE = re.compile(r"`[^`]+`")

_HEADING_RE = re.compile(r"(<h[1-6]\b[^>]*>.*?</h[1-6]\s*>)", re.IGNORECASE | re.DOTALL)
_BLOCK_TAG_RE = re.compile(
    r"</?(?:p|div|ul|ol|li|blockquote|tr|td|th|thead|tbody|dl|dt|dd|hr|"
    r"section|article|figure|figcaption)\b[^>]*>|<br\s*/?>",
    re.IGNORECASE,
)
_ANY_TAG_RE = re.compile(r"</?[a-zA-Z][^>]*>")

_SENTINEL_RE = re.compile(r"\x00(\d+)\x01")

# Tokens after which a period does not end a sentence.
_ABBREVIATIONS = {
    "e.g", "i.e", "etc", "vs", "cf", "al", "mr", "mrs", "ms", "dr", "st",
    "no", "vol", "fig", "eq", "approx", "sec", "min", "max",
}

_BOUNDARY_RE = re.compile(r"[.!?]+[\"')\]]*(?=\s)")


def _protect(text: str) -> tuple[str, list[str]]:
    """Replace atomic regions with sentinels so splitting cannot cut them."""
    store: list[str] = []

    def stash(match: re.Match) -> str:
        store.append(match.group(0))
        return f"\x00{len(store) - 1}\x01"

    for pattern in (_PRE_RE, _TABLE_RE, _CODE_RE, _ANCHOR_RE, _IMG_RE, _BACKTICK_RE):
        text = pattern.sub(stash, text)
    return text, store


def _restore(text: str, store: list[str]) -> str:
    return _SENTINEL_RE.sub(lambda m: store[int(m.group(1))], text)


def _split_block(block: str) -> list[str]:
    """Split one text block on terminal punctuation with abbreviation guard."""
    sentences = []
    start = 0
    for match in _BOUNDARY_RE.finditer(block):
        prefix = block[: match.start()]
        last = re.search(r"[A-Za-z0-9.]+$", prefix)
        if last and last.group(0).rstrip(".").lower() in _ABBREVIATIONS:
            continue
        sentences.append(block[start : match.end()].strip())
        start = match.end()
    tail = block[start:].strip()
    if tail:
        sentences.append(tail)
    return [s for s in sentences if s]


def _visible_word_count(fragment: str, store: list[str]) -> int:
    text = _ANY_TAG_RE.sub(" ", _restore(fragment, store))
    return len(text.split())


def split_sentences(body_html: str) -> list[str]:
    """Break an HTML answer body into markup-bearing sentence strings.

    Block elements bound sentences; within a block, sentences split on
    terminal punctuation guarded by a small abbreviation list.  Headings of
    six or more words are emitted as standalone sentences; shorter headings
    are section labels and are dropped.  ``<pre>``, ``<table>``, ``<code>``,
    ``<a>``, and ``<img>`` regions pass through intact for
    :func:`clean_sentence` to handle.
    """
    if not body_html or not body_html.strip():
        return []
    protected, store = _protect(body_html)

    segments: list[tuple[str, str]] = []
    for part in _HEADING_RE.split(protected):
        if not part:
            continue
        if _HEADING_RE.fullmatch(part):
            inner = re.sub(r"</?h[1-6][^>]*>", "", part, flags=re.IGNORECASE)
            inner = html.unescape(_ANY_TAG_RE.sub(" ", inner))
            inner = " ".join(inner.split())
            if inner:
                segments.append(("heading", inner))
        else:
            text = _BLOCK_TAG_RE.sub("\n", part)
            text = _ANY_TAG_RE.sub("", text)
            text = html.unescape(text)
            for block in text.split("\n"):
                block = " ".join(block.split())
                if block:
                    segments.append(("text", block))

    sentences: list[str] = []
    for kind, segment in segments:
        if kind == "heading":
            if _visible_word_count(segment, store) >= HEADING_SENTENCE_MIN_WORDS:
                sentences.append(_restore(segment, store))
        else:
            sentences.extend(_restore(s, store) for s in _split_block(segment))
    return sentences


# --------------------------------------------------------------------------
# Sentence cleaning
# --------------------------------------------------------------------------

_URL_RE = re.compile(r"https?://[^\s<>\"')\]]+")
_CODE_INNER_RE = re.compile(r"<code\b[^>]*>(.*?)</code\s*>", re.IGNORECASE | re.DOTALL)


def _sub_outside_backticks(pattern: re.Pattern, repl: str, text: str) -> str:
    parts = re.split(r"(`[^`]+`)", text)
    return "".join(
        part if part.startswith("`") else pattern.sub(repl, part) for part in parts
    )


def clean_sentence(raw: str) -> str | None:
    """Clean one markup-bearing sentence, or drop it.

    Returns ``None`` when the sentence carries no content beyond external
    hyperlinks.  Otherwise hyperlinks, code blocks, tables, and images
    become their placeholders, inline code is kept verbatim in backticks,
    and whitespace is normalized.  Idempotent on its own output.
    """
    text = _PRE_RE.sub(CODE_PLACEHOLDER, raw)
    text = _TABLE_RE.sub(TABLE_PLACEHOLDER, text)
    text = _IMG_RE.sub(FIGURE_PLACEHOLDER, text)
    text = _ANCHOR_RE.sub(LINK_PLACEHOLDER, text)
    text = _CODE_INNER_RE.sub(lambda m: "`" + html.unescape(m.group(1)) + "`", text)
    text = _sub_outside_backticks(_URL_RE, LINK_PLACEHOLDER, text)
    text = _sub_outside_backticks(_ANY_TAG_RE, " ", text)
    text = " ".join(text.split())

    residue = text.replace(LINK_PLACEHOLDER, "")
    if not re.search(r"[A-Za-z0-9]", residue):
        return None
    return text


_PLACEHOLDER_RE = re.compile(
    r"\[(?:external-link|code-snippet|table|figure)\]"
)


def is_textual(cleaned: str) -> bool:
    """True when a cleaned sentence has content beyond placeholders."""
    return bool(re.search(r"[A-Za-z0-9]", _PLACEHOLDER_RE.sub("", cleaned)))


def clean_answer_sentences(body_html: str) -> list[str]:
    """Split and clean an answer body in one step."""
    cleaned = (clean_sentence(raw) for raw in split_sentences(body_html))
    return [text for text in cleaned if text is not None]


def build_unit(query: TechnicalQuery, answers: list[Answer]) -> AnnotationUnit:
    """Assemble an annotation unit from raw answers.

    Each answer's surviving sentences get ids ``#AA_SS`` where ``AA`` is the
    answer's index and ``SS`` the 1-based sentence position.
    """
    if not answers:
        raise ValueError("cannot build a unit from an empty answer list")
    sentences = []
    for answer in answers:
        for position, text in enumerate(clean_answer_sentences(answer.body_html), 1):
            sentences.append(
                AnswerSentence(
                    id=sentence_id(answer.answer_index, position),
                    text=text,
                    answer_index=answer.answer_index,
                    sentence_index=position,
                )
            )
    return AnnotationUnit(query=query, answers=tuple(answers), sentences=tuple(sentences))


# --------------------------------------------------------------------------
# Benchmark and unit files
# --------------------------------------------------------------------------


def _query_to_dict(query: TechnicalQuery) -> dict:
    return {"text": query.text, "tags": sorted(query.tags)}


def _query_from_dict(data: dict) -> TechnicalQuery:
    return TechnicalQuery(text=data["text"], tags=frozenset(data.get("tags", [])))


def _candidate_from_dict(data: dict) -> AnswerSentence:
    answer_index, sent_index = parse_sentence_id(data["id"])
    return AnswerSentence(
        id=data["id"],
        text=data["text"],
        answer_index=answer_index,
        sentence_index=sent_index,
    )


def load_benchmark(path: str | Path) -> list[BenchmarkEntry]:
    """Load a benchmark file, validating every entry's invariants."""
    with open(path, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise BenchmarkFormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "entries" not in payload:
        raise BenchmarkFormatError(f"{path}: missing top-level 'entries' list")

    entries = []
    for index, item in enumerate(payload["entries"]):
        try:
            entries.append(
                BenchmarkEntry(
                    query=_query_from_dict(item["query"]),
                    candidates=tuple(
                        _candidate_from_dict(c) for c in item["candidates"]
                    ),
                    references=tuple(tuple(ref) for ref in item["references"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BenchmarkFormatError(
                f"entry {index}: {exc}", entry_index=index
            ) from exc
    return entries


def save_benchmark(entries: list[BenchmarkEntry], path: str | Path) -> None:
    payload = {
        "entries": [
            {
                "query": _query_to_dict(entry.query),
                "candidates": [
                    {"id": c.id, "text": c.text} for c in entry.candidates
                ],
                "references": [list(ref) for ref in entry.references],
            }
            for entry in entries
        ]
    }
    Path(path).write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def unit_to_dict(unit: AnnotationUnit) -> dict:
    return {
        "query": _query_to_dict(unit.query),
        "answers": [
            {
                "answer_index": a.answer_index,
                "body_html": a.body_html,
                "vote_score": a.vote_score,
                "source_post_id": a.source_post_id,
            }
            for a in unit.answers
        ],
        "sentences": [
            {
                "id": s.id,
                "text": s.text,
                "answer_index": s.answer_index,
                "sentence_index": s.sentence_index,
            }
            for s in unit.sentences
        ],
    }


def unit_from_dict(data: dict) -> AnnotationUnit:
    """Rebuild a unit from its JSON form, re-running the cleaning pipeline.

    The stored sentences must match what the pipeline derives from the
    stored answers; a mismatch means the file was edited by hand or written
    by an incompatible version.
    """
    try:
        query = _query_from_dict(data["query"])
        answers = [
            Answer(
                answer_index=a["answer_index"],
                body_html=a["body_html"],
                vote_score=a["vote_score"],
                source_post_id=a["source_post_id"],
            )
            for a in data["answers"]
        ]
        stored = [
            AnswerSentence(
                id=s["id"],
                text=s["text"],
                answer_index=s["answer_index"],
                sentence_index=s["sentence_index"],
            )
            for s in data["sentences"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise UnitFormatError(f"malformed unit: {exc}") from exc

    unit = build_unit(query, answers)
    if list(unit.sentences) != stored:
        raise UnitFormatError(
            "stored sentences do not match the cleaning pipeline's output"
        )
    return unit


def load_unit(path: str | Path) -> AnnotationUnit:
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise UnitFormatError(f"{path}: not valid JSON: {exc}") from exc
    return unit_from_dict(data)


def save_unit(unit: AnnotationUnit, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(unit_to_dict(unit), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def save_units(units: list[AnnotationUnit], path: str | Path) -> None:
    payload = {"units": [unit_to_dict(u) for u in units]}
    Path(path).write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def load_units(path: str | Path) -> list[AnnotationUnit]:
    with open(path, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise UnitFormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "units" not in payload:
        raise UnitFormatError(f"{path}: missing top-level 'units' list")
    return [unit_from_dict(item) for item in payload["units"]]
