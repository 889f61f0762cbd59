"""Corpus service: turning plain text into function-word count collections."""

import csv
import datetime as dt
import json
import logging
import re
from collections import Counter
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError as PydanticValidationError

from stylescope.config import settings
from stylescope.exceptions import (
    CountTableParseError,
    DocumentReadError,
    EmptyCollectionError,
    LexiconMismatchError,
    ManifestError,
    ValidationError,
)
from stylescope.schemas.corpus import (
    Collection,
    Document,
    DocumentKind,
    ExclusionLog,
    ExclusionRecord,
    FunctionWordLexicon,
    Manifest,
    ManifestEntry,
)
from stylescope.utils.parallel import ordered_map
from stylescope.utils.validation import require_positive

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Maximal runs of letters; digits, underscores, apostrophes and hyphens split.
_TOKEN_RE = re.compile(r"[^\W\d_]+")

_GUTENBERG_START = re.compile(
    r"^\*{3}\s*START OF (?:THE|THIS) PROJECT GUTENBERG E-?BOOK.*$",
    re.MULTILINE | re.IGNORECASE,
)
_GUTENBERG_END = re.compile(
    r"^\*{3}\s*END OF (?:THE|THIS) PROJECT GUTENBERG E-?BOOK",
    re.MULTILINE | re.IGNORECASE,
)

COUNT_TABLE_PREFIX = ["id", "author", "kind", "date", "w"]


class CorpusService:
    """Tokenizing, counting and persisting document collections."""

    def tokenize(self, text: str) -> List[str]:
        """Lowercased maximal alphabetic runs, in text order."""
        return [token.lower() for token in _TOKEN_RE.findall(text)]

    def strip_boilerplate(
        self,
        text: str,
        start_marker: Optional[str] = None,
        end_marker: Optional[str] = None,
    ) -> str:
        """Return the text strictly between the two markers.

        A marker that is not given or not found leaves that side at the text edge.
        """
        start = 0
        if start_marker:
            idx = text.find(start_marker)
            if idx >= 0:
                start = idx + len(start_marker)
        end = len(text)
        if end_marker:
            idx = text.find(end_marker, start)
            if idx >= 0:
                end = idx
        return text[start:end]

    def strip_gutenberg(self, text: str) -> str:
        """Drop the standard Project Gutenberg header and license footer lines."""
        start_match = _GUTENBERG_START.search(text)
        start = start_match.end() if start_match else 0
        end_match = _GUTENBERG_END.search(text, start)
        end = end_match.start() if end_match else len(text)
        if not start_match and not end_match:
            logger.debug("No Project Gutenberg markers found")
        return text[start:end]

    def split_sections(self, text: str, pattern: str) -> List[str]:
        """Split text at each line matching ``pattern``; preamble text is dropped."""
        try:
            heading = re.compile(pattern, re.MULTILINE)
        except re.error as e:
            raise ValidationError("section_pattern", pattern, str(e))
        starts = [m.start() for m in heading.finditer(text)]
        if not starts:
            logger.warning(f"Section pattern {pattern!r} matched nothing")
            return [text]
        bounds = starts + [len(text)]
        return [text[bounds[i] : bounds[i + 1]] for i in range(len(starts))]

    def chunk(self, tokens: Sequence[str], chunk_size: int) -> List[List[str]]:
        """Consecutive chunks of exactly ``chunk_size`` tokens; the remainder is dropped."""
        require_positive("chunk_size", chunk_size)
        n_chunks = len(tokens) // chunk_size
        return [
            list(tokens[k * chunk_size : (k + 1) * chunk_size]) for k in range(n_chunks)
        ]

    def count_document(
        self,
        tokens: Sequence[str],
        lexicon: FunctionWordLexicon,
        id: str,
        author: str = "",
        kind: DocumentKind = DocumentKind.other,
        date: Optional[dt.date] = None,
    ) -> Document:
        """Count every lexicon word in a token list."""
        counts = Counter(tokens)
        return Document(
            id=id,
            author=author,
            kind=kind,
            date=date,
            w=len(tokens),
            c=tuple(counts.get(word, 0) for word in lexicon.words),
        )

    def load_lexicon(self, path: Optional[PathLike] = None) -> FunctionWordLexicon:
        """Read a lexicon file (one word per line, ``#`` comments); None gives the default."""
        if path is None:
            return FunctionWordLexicon.default()
        text = self.read_text(path)
        words = []
        for raw in text.splitlines():
            word = raw.split("#", 1)[0].strip()
            if word:
                words.append(word)
        try:
            return FunctionWordLexicon(words=tuple(words))
        except PydanticValidationError as e:
            raise ValidationError("lexicon", str(path), _first_error(e))

    def read_text(self, path: PathLike) -> str:
        """Read a UTF-8 text file, naming the file in any failure."""
        path = Path(path)
        try:
            return path.read_text(encoding="utf-8-sig")
        except FileNotFoundError:
            raise DocumentReadError(str(path), "file not found")
        except UnicodeDecodeError as e:
            raise DocumentReadError(str(path), f"not valid UTF-8 ({e.reason})")
        except OSError as e:
            raise DocumentReadError(str(path), e.strerror or str(e))

    def load_text_units(
        self,
        path: PathLike,
        lexicon: FunctionWordLexicon,
        doc_id: Optional[str] = None,
        author: str = "",
        kind: DocumentKind = DocumentKind.other,
        date: Optional[dt.date] = None,
        chunk_size: Optional[int] = None,
        section_pattern: Optional[str] = None,
        start_marker: Optional[str] = None,
        end_marker: Optional[str] = None,
        gutenberg: bool = False,
    ) -> List[Document]:
        """Read one file and turn it into one or more counted documents.

        Pipeline: strip, split into sections, tokenize, chunk, count. Units
        produced by splitting or chunking get ids ``<id>-<k>``.
        """
        doc_id = doc_id or Path(path).stem
        text = self.read_text(path)
        if gutenberg:
            text = self.strip_gutenberg(text)
        if start_marker or end_marker:
            text = self.strip_boilerplate(text, start_marker, end_marker)

        parts = self.split_sections(text, section_pattern) if section_pattern else [text]
        units: List[List[str]] = []
        for part in parts:
            tokens = self.tokenize(part)
            if chunk_size:
                units.extend(self.chunk(tokens, chunk_size))
            else:
                units.append(tokens)

        if len(units) == 1 and not section_pattern and not chunk_size:
            ids = [doc_id]
        else:
            width = max(2, len(str(len(units))))
            ids = [f"{doc_id}-{k:0{width}d}" for k in range(1, len(units) + 1)]

        return [
            self.count_document(tokens, lexicon, uid, author, kind, date)
            for uid, tokens in zip(ids, units)
        ]

    def read_manifest(self, manifest_path: PathLike) -> Manifest:
        path = Path(manifest_path)
        text = self.read_text(path)
        try:
            return Manifest.model_validate(json.loads(text))
        except json.JSONDecodeError as e:
            raise ManifestError(str(path), f"invalid JSON at line {e.lineno}")
        except PydanticValidationError as e:
            raise ManifestError(str(path), _first_error(e))

    def load_collection(
        self,
        manifest_path: PathLike,
        lexicon: Optional[FunctionWordLexicon] = None,
        min_words: Optional[int] = None,
        chunk_size: Optional[int] = None,
        section_pattern: Optional[str] = None,
        start_marker: Optional[str] = None,
        end_marker: Optional[str] = None,
        gutenberg: bool = False,
        threads: Optional[int] = None,
    ) -> Tuple[Collection, ExclusionLog]:
        """Load every file a manifest lists and assemble a filtered collection.

        Files are read concurrently but documents keep manifest order.
        """
        manifest_path = Path(manifest_path)
        manifest = self.read_manifest(manifest_path)
        base = manifest_path.parent
        if lexicon is None:
            lexicon = self.load_lexicon(
                base / manifest.lexicon if manifest.lexicon else None
            )

        def load_entry(entry: ManifestEntry) -> List[Document]:
            return self.load_text_units(
                base / entry.path,
                lexicon,
                doc_id=entry.id,
                author=entry.author,
                kind=entry.kind,
                date=entry.date,
                chunk_size=entry.chunk_size or chunk_size,
                section_pattern=entry.section_pattern or section_pattern,
                start_marker=entry.start_marker or start_marker,
                end_marker=entry.end_marker or end_marker,
                gutenberg=gutenberg,
            )

        per_file = ordered_map(load_entry, manifest.documents, threads)
        docs = [doc for docs in per_file for doc in docs]
        return self.build_collection(manifest.label, docs, lexicon, min_words)

    def ingest_directory(
        self,
        directory: PathLike,
        lexicon: Optional[FunctionWordLexicon] = None,
        min_words: Optional[int] = None,
        label: Optional[str] = None,
        **options,
    ) -> Tuple[Collection, ExclusionLog]:
        """Treat every ``*.txt`` file in a directory (sorted by name) as a document."""
        directory = Path(directory)
        if not directory.is_dir():
            raise DocumentReadError(str(directory), "not a directory")
        lexicon = lexicon or FunctionWordLexicon.default()
        threads = options.pop("threads", None)
        paths = sorted(directory.glob("*.txt"))

        def load_path(path: Path) -> List[Document]:
            return self.load_text_units(path, lexicon, **options)

        per_file = ordered_map(load_path, paths, threads)
        docs = [doc for docs in per_file for doc in docs]
        return self.build_collection(label or directory.name, docs, lexicon, min_words)

    def build_collection(
        self,
        label: str,
        docs: Sequence[Document],
        lexicon: FunctionWordLexicon,
        min_words: Optional[int] = None,
    ) -> Tuple[Collection, ExclusionLog]:
        """Apply the minimum-length rule and assemble a collection."""
        min_words = settings.min_words if min_words is None else min_words
        log = ExclusionLog(label=label, min_words=min_words)
        kept = []
        for doc in docs:
            if doc.w < min_words:
                log.excluded.append(
                    ExclusionRecord(
                        id=doc.id, w=doc.w, reason=f"fewer than {min_words} words"
                    )
                )
                logger.info(
                    f"Excluded document {doc.id} ({doc.w} words)",
                    extra={"event": "document_excluded", "doc_id": doc.id, "w": doc.w},
                )
            else:
                kept.append(doc)
        if not kept:
            raise EmptyCollectionError(label)
        seen = set()
        for doc in kept:
            if doc.id in seen:
                raise ValidationError("id", doc.id, "document ids must be unique")
            seen.add(doc.id)
        return Collection(label=label, docs=tuple(kept), lexicon=lexicon), log

    def take(self, collection: Collection, n: int) -> Collection:
        """The first ``n`` documents, in collection order."""
        require_positive("n", n)
        if n >= collection.K:
            return collection
        return collection.model_copy(
            update={"docs": collection.docs[:n], "label": f"{collection.label}{n}"}
        )

    def save_counts(self, collection: Collection, path: PathLike) -> Path:
        """Write the integer count table as CSV (one row per document)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(COUNT_TABLE_PREFIX + list(collection.lexicon.words))
            for doc in collection.docs:
                writer.writerow(
                    [
                        doc.id,
                        doc.author,
                        doc.kind.value,
                        doc.date.isoformat() if doc.date else "",
                        doc.w,
                        *doc.c,
                    ]
                )
        return path

    def load_counts(
        self,
        path: PathLike,
        lexicon: Optional[FunctionWordLexicon] = None,
        label: Optional[str] = None,
    ) -> Collection:
        """Read a count table written by ``save_counts``.

        The header's words must equal the active lexicon (default lexicon when
        none is given). The label defaults to the file stem.
        """
        path = Path(path)
        lexicon = lexicon or FunctionWordLexicon.default()
        text = self.read_text(path)
        reader = csv.reader(text.splitlines())
        try:
            header = next(reader)
        except StopIteration:
            raise CountTableParseError(str(path), 1, "missing header row")
        if header[: len(COUNT_TABLE_PREFIX)] != COUNT_TABLE_PREFIX:
            raise CountTableParseError(
                str(path), 1, f"header must start with {','.join(COUNT_TABLE_PREFIX)}"
            )
        words = header[len(COUNT_TABLE_PREFIX) :]
        if tuple(words) != lexicon.words:
            raise LexiconMismatchError(lexicon.words, words, str(path))

        docs = []
        seen = set()
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            docs.append(self._parse_row(str(path), line_no, row, len(header)))
            if docs[-1].id in seen:
                raise CountTableParseError(
                    str(path), line_no, f"duplicate id '{docs[-1].id}'"
                )
            seen.add(docs[-1].id)

        label = label or path.stem
        if not docs:
            raise EmptyCollectionError(label)
        return Collection(label=label, docs=tuple(docs), lexicon=lexicon)

    def _parse_row(self, path: str, line_no: int, row: List[str], width: int) -> Document:
        if len(row) != width:
            raise CountTableParseError(
                path, line_no, f"expected {width} fields, found {len(row)}"
            )
        doc_id, author, kind, date_text, *numbers = row
        if not doc_id:
            raise CountTableParseError(path, line_no, "empty id")
        try:
            values = [int(x) for x in numbers]
        except ValueError:
            raise CountTableParseError(path, line_no, "counts must be integers")
        if any(x < 0 for x in values):
            raise CountTableParseError(path, line_no, "negative count")
        w, c = values[0], values[1:]
        if sum(c) > w:
            raise CountTableParseError(
                path, line_no, "function-word counts exceed total words"
            )
        try:
            doc_kind = DocumentKind(kind or DocumentKind.other.value)
        except ValueError:
            raise CountTableParseError(path, line_no, f"unknown kind '{kind}'")
        try:
            date = dt.date.fromisoformat(date_text) if date_text else None
        except ValueError:
            raise CountTableParseError(path, line_no, f"invalid date '{date_text}'")
        return Document(
            id=doc_id, author=author, kind=doc_kind, date=date, w=w, c=tuple(c)
        )

    def save_exclusions(self, log: ExclusionLog, path: PathLike) -> Path:
        path = Path(path)
        path.write_text(log.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path


def _first_error(exc: PydanticValidationError) -> str:
    errors = exc.errors()
    if not errors:
        return str(exc)
    err = errors[0]
    where = ".".join(str(p) for p in err.get("loc", ()))
    return f"{where}: {err.get('msg')}" if where else str(err.get("msg"))


# Global service instance
corpus_service = CorpusService()
