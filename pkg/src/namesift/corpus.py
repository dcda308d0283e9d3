"""Task data model, unigram tokenization, and the on-disk corpus format.

A disambiguation task bundles one ambiguous person name with the
knowledge-base entity profiles sharing that name, the web result documents
retrieved for that name, and a gold alignment of documents to entities.
Documents describing nobody in the entity set carry the reserved label
``__NOISE__``.

On disk a task is a directory::

    <task>/
        task.json     manifest: name, entity and document descriptors
        gold.tsv      one "doc_id<TAB>entity_id" row per document
        entities/     one UTF-8 plain-text profile body per entity
        documents/    one UTF-8 plain-text result body per document

``task.json`` lists entities as objects with ``id``, ``title`` and ``file``
keys and documents with ``id``, ``url``, ``rank`` and ``file`` keys; ``file``
paths are relative to the task directory.  Lines starting with ``#`` and
blank lines in ``gold.tsv`` are ignored.  A corpus root is any directory
whose immediate subdirectories are tasks.
"""

from __future__ import annotations

import html
import json
import re
from collections import Counter
from dataclasses import InitVar, dataclass, field
from pathlib import Path
from typing import Collection, Iterable, Mapping

__all__ = [
    "NOISE_LABEL",
    "CorpusFormatError",
    "CorpusIntegrityError",
    "EntityProfile",
    "ResultDocument",
    "GoldAlignment",
    "Task",
    "tokenize",
    "term_frequencies",
    "strip_html",
    "load_task",
    "write_task",
    "discover_tasks",
    "load_corpus",
]

# Reserved gold label for documents outside the entity set.
NOISE_LABEL = "__NOISE__"

# Maximal runs of letters or digits; underscore is a separator.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_TAG_RE = re.compile(r"<[^>]*>", re.DOTALL)
_SCRIPT_RE = re.compile(r"<(script|style)\b.*?</\1\s*>", re.DOTALL | re.IGNORECASE)
_COMMENT_RE = re.compile(r"<!--.*?-->", re.DOTALL)


class CorpusFormatError(ValueError):
    """A task directory or manifest does not follow the corpus format."""


class CorpusIntegrityError(ValueError):
    """Files parse but the task violates a consistency rule."""


def tokenize(text: str, stopwords: Collection[str] | None = None) -> list[str]:
    """Lowercase ``text`` and split it into unigram tokens.

    Tokens are maximal runs of alphanumeric characters; everything else,
    including underscores, separates tokens.  Digits are kept, empty tokens
    are dropped, and no stemming is applied.  When ``stopwords`` is given,
    tokens contained in it are removed after splitting.
    """
    tokens = _TOKEN_RE.findall(text.lower())
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    return tokens


def term_frequencies(tokens: Iterable[str]) -> Counter[str]:
    """Count occurrences per distinct token."""
    return Counter(tokens)


def strip_html(text: str) -> str:
    """Optional ingestion pre-pass: drop markup and decode entities."""
    text = _SCRIPT_RE.sub(" ", text)
    text = _COMMENT_RE.sub(" ", text)
    text = _TAG_RE.sub(" ", text)
    return html.unescape(text)


@dataclass
class EntityProfile:
    """Knowledge-base description of one candidate person."""

    id: str
    title: str
    text: str
    stopwords: InitVar[Collection[str] | None] = None
    tokens: tuple[str, ...] = field(init=False)

    def __post_init__(self, stopwords: Collection[str] | None) -> None:
        self.tokens = tuple(tokenize(self.text, stopwords))


@dataclass
class ResultDocument:
    """One web search result retrieved for the ambiguous name."""

    id: str
    url: str
    rank: int
    text: str
    stopwords: InitVar[Collection[str] | None] = None
    tokens: tuple[str, ...] = field(init=False)

    def __post_init__(self, stopwords: Collection[str] | None) -> None:
        if not isinstance(self.rank, int) or isinstance(self.rank, bool) or self.rank < 1:
            raise CorpusIntegrityError(f"document {self.id!r}: rank must be a positive integer, got {self.rank!r}")
        self.tokens = tuple(tokenize(self.text, stopwords))


@dataclass
class GoldAlignment:
    """Gold mapping from document id to entity id or ``__NOISE__``."""

    labels: dict[str, str]

    def label(self, doc_id: str) -> str:
        return self.labels[doc_id]


@dataclass
class Task:
    """One ambiguous name with its entities, documents, and gold labels."""

    name: str
    entities: list[EntityProfile]
    documents: list[ResultDocument]
    gold: GoldAlignment

    def __post_init__(self) -> None:
        self.validate()

    @property
    def entity_ids(self) -> list[str]:
        return [e.id for e in self.entities]

    @property
    def document_ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def validate(self) -> None:
        """Raise :class:`CorpusIntegrityError` on any broken invariant."""
        entity_ids: set[str] = set()
        for eid in self.entity_ids:
            if eid in entity_ids:
                raise CorpusIntegrityError(f"task {self.name!r}: duplicate entity id {eid!r}")
            entity_ids.add(eid)
        seen = set(entity_ids)
        for did in self.document_ids:
            if did in entity_ids:
                # Element ids key the feature index, so the two id spaces
                # must not overlap.
                raise CorpusIntegrityError(f"task {self.name!r}: id {did!r} used by both an entity and a document")
            if did in seen:
                raise CorpusIntegrityError(f"task {self.name!r}: duplicate document id {did!r}")
            seen.add(did)
        if NOISE_LABEL in seen:
            raise CorpusIntegrityError(f"task {self.name!r}: id {NOISE_LABEL!r} is reserved")
        doc_ids = set(self.document_ids)
        gold_ids = set(self.gold.labels)
        if gold_ids != doc_ids:
            missing = sorted(doc_ids - gold_ids)
            extra = sorted(gold_ids - doc_ids)
            raise CorpusIntegrityError(
                f"task {self.name!r}: gold alignment must cover documents exactly"
                f" (missing {missing!r}, unknown {extra!r})"
            )
        valid = set(self.entity_ids) | {NOISE_LABEL}
        for did, label in self.gold.labels.items():
            if label not in valid:
                raise CorpusIntegrityError(f"task {self.name!r}: gold label {label!r} for {did!r} is not an entity id")


def _require(mapping: Mapping, key: str, where: str):
    if key not in mapping:
        raise CorpusFormatError(f"{where}: missing key {key!r}")
    return mapping[key]


def _read_text(path: Path, where: str) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CorpusFormatError(f"{where}: referenced file {path} does not exist") from None
    except UnicodeDecodeError as exc:
        raise CorpusFormatError(f"{where}: {path} is not valid UTF-8 ({exc})") from None


def _parse_gold(path: Path) -> dict[str, str]:
    rows: dict[str, str] = {}
    text = _read_text(path, "gold.tsv")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorpusFormatError(f"gold.tsv line {lineno}: expected 2 tab-separated columns, got {len(parts)}")
        doc_id, label = parts
        if doc_id in rows:
            raise CorpusIntegrityError(f"gold.tsv line {lineno}: duplicate row for document {doc_id!r}")
        rows[doc_id] = label
    return rows


def load_task(
    path: str | Path,
    *,
    strip_markup: bool = False,
    stopwords: Collection[str] | None = None,
) -> Task:
    """Read one task directory into a fully validated :class:`Task`.

    Args:
        path: task directory containing ``task.json`` and ``gold.tsv``.
        strip_markup: apply :func:`strip_html` to every body before
            tokenization (for corpora stored as raw HTML).
        stopwords: optional token blacklist applied during tokenization.

    Raises:
        CorpusFormatError: missing or malformed files.
        CorpusIntegrityError: parseable but inconsistent task.
    """
    path = Path(path)
    manifest_path = path / "task.json"
    if not manifest_path.is_file():
        raise CorpusFormatError(f"{path}: no task.json manifest")
    try:
        manifest = json.loads(_read_text(manifest_path, "task.json"))
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"{manifest_path}: invalid JSON ({exc})") from None
    if not isinstance(manifest, dict):
        raise CorpusFormatError(f"{manifest_path}: manifest must be a JSON object")

    name = _require(manifest, "name", "task.json")
    if not isinstance(name, str) or not name:
        raise CorpusFormatError("task.json: name must be a non-empty string")

    def _body(rel: str) -> str:
        text = _read_text(path / rel, "task.json")
        return strip_html(text) if strip_markup else text

    entities = []
    for i, spec in enumerate(_require(manifest, "entities", "task.json")):
        where = f"task.json entities[{i}]"
        entities.append(
            EntityProfile(
                id=str(_require(spec, "id", where)),
                title=str(_require(spec, "title", where)),
                text=_body(str(_require(spec, "file", where))),
                stopwords=stopwords,
            )
        )
    documents = []
    for i, spec in enumerate(_require(manifest, "documents", "task.json")):
        where = f"task.json documents[{i}]"
        rank = _require(spec, "rank", where)
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise CorpusFormatError(f"{where}: rank must be an integer, got {rank!r}")
        documents.append(
            ResultDocument(
                id=str(_require(spec, "id", where)),
                url=str(_require(spec, "url", where)),
                rank=rank,
                text=_body(str(_require(spec, "file", where))),
                stopwords=stopwords,
            )
        )

    gold = GoldAlignment(_parse_gold(path / "gold.tsv"))
    return Task(name=name, entities=entities, documents=documents, gold=gold)


def write_task(task: Task, path: str | Path) -> Path:
    """Serialize ``task`` into a directory readable by :func:`load_task`.

    Bodies are written verbatim, so a write/load round trip reproduces the
    task exactly (under default tokenization).
    """
    path = Path(path)
    (path / "entities").mkdir(parents=True, exist_ok=True)
    (path / "documents").mkdir(parents=True, exist_ok=True)
    manifest: dict = {"name": task.name, "entities": [], "documents": []}
    for i, entity in enumerate(task.entities):
        rel = f"entities/e{i:03d}.txt"
        (path / rel).write_text(entity.text, encoding="utf-8")
        manifest["entities"].append({"id": entity.id, "title": entity.title, "file": rel})
    for i, doc in enumerate(task.documents):
        rel = f"documents/d{i:03d}.txt"
        (path / rel).write_text(doc.text, encoding="utf-8")
        manifest["documents"].append({"id": doc.id, "url": doc.url, "rank": doc.rank, "file": rel})
    (path / "task.json").write_text(json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    gold_lines = [f"{doc.id}\t{task.gold.labels[doc.id]}" for doc in task.documents]
    (path / "gold.tsv").write_text("\n".join(gold_lines) + "\n", encoding="utf-8")
    return path


def discover_tasks(root: str | Path) -> list[Path]:
    """Return task directories under ``root``, sorted by directory name."""
    root = Path(root)
    if not root.is_dir():
        raise CorpusFormatError(f"corpus root {root} is not a directory")
    return sorted(p for p in root.iterdir() if p.is_dir() and (p / "task.json").is_file())


def load_corpus(
    root: str | Path,
    *,
    strip_markup: bool = False,
    stopwords: Collection[str] | None = None,
) -> list[Task]:
    """Load every task under ``root``; raises on the first broken task."""
    return [
        load_task(p, strip_markup=strip_markup, stopwords=stopwords)
        for p in discover_tasks(root)
    ]
