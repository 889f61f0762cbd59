"""Corpus schemas: lexicon, documents, collections and manifests."""

import datetime as dt
import hashlib
import re
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_validator,
    model_validator,
)

# Function words with frequency below 0.001 in the court corpus
# (every, my, shall, should, upon, will, your) are left out.
DEFAULT_FUNCTION_WORDS: Tuple[str, ...] = (
    "a", "all", "also", "an", "and", "any", "are", "as", "at", "be",
    "been", "but", "by", "can", "do", "down", "even", "for", "from", "had",
    "has", "have", "her", "his", "if", "in", "into", "is", "it", "its",
    "may", "more", "must", "no", "not", "now", "of", "on", "one", "only",
    "or", "our", "so", "some", "such", "than", "that", "the", "their", "then",
    "there", "things", "this", "to", "up", "was", "were", "what", "when", "which",
    "who", "with", "would",
)  # fmt: skip

_WORD_RE = re.compile(r"^[a-z]+$")


class DocumentKind(str, Enum):
    majority = "majority"
    dissent = "dissent"
    other = "other"


class FunctionWordLexicon(BaseModel):
    """Ordered function-word list; position j is the column identity everywhere."""

    model_config = ConfigDict(frozen=True)

    words: Tuple[str, ...]

    @field_validator("words")
    @classmethod
    def validate_words(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        seen = set()
        for word in v:
            if not _WORD_RE.match(word):
                raise ValueError(f"'{word}' is not a lowercase ASCII word")
            if word in seen:
                raise ValueError(f"duplicate word '{word}'")
            seen.add(word)
        if not v:
            raise ValueError("lexicon must contain at least one word")
        return v

    @property
    def J(self) -> int:
        return len(self.words)

    @property
    def lexicon_id(self) -> str:
        digest = hashlib.sha1(" ".join(self.words).encode("ascii")).hexdigest()
        return f"fw{self.J}-{digest[:10]}"

    @classmethod
    def default(cls) -> "FunctionWordLexicon":
        return cls(words=DEFAULT_FUNCTION_WORDS)


class Document(BaseModel):
    """One text unit and its function-word counts."""

    model_config = ConfigDict(frozen=True)

    id: str
    author: str = ""
    kind: DocumentKind = DocumentKind.other
    date: Optional[dt.date] = None
    w: int = Field(ge=0, description="Total token count")
    c: Tuple[int, ...] = Field(
        description="Count of each lexicon word, in lexicon order"
    )

    @model_validator(mode="after")
    def validate_counts(self) -> "Document":
        if any(x < 0 for x in self.c):
            raise ValueError(f"document '{self.id}' has a negative word count")
        if sum(self.c) > self.w:
            raise ValueError(
                f"document '{self.id}' has more function words than words"
            )
        return self

    @computed_field  # type: ignore[misc]
    @property
    def c0(self) -> int:
        """Number of tokens that are not lexicon words."""
        return self.w - sum(self.c)


class Collection(BaseModel):
    """K documents analysed together as one author's corpus."""

    model_config = ConfigDict(frozen=True)

    label: str
    docs: Tuple[Document, ...]
    lexicon: FunctionWordLexicon

    @model_validator(mode="after")
    def validate_docs(self) -> "Collection":
        if not self.docs:
            raise ValueError(f"collection '{self.label}' has no documents")
        ids = set()
        for doc in self.docs:
            if len(doc.c) != self.lexicon.J:
                raise ValueError(
                    f"document '{doc.id}' has {len(doc.c)} counts, "
                    f"lexicon has {self.lexicon.J} words"
                )
            if doc.id in ids:
                raise ValueError(f"duplicate document id '{doc.id}'")
            ids.add(doc.id)
        return self

    @property
    def K(self) -> int:
        return len(self.docs)

    @property
    def lexicon_id(self) -> str:
        return self.lexicon.lexicon_id


class ExclusionRecord(BaseModel):
    id: str
    w: int
    reason: str


class ExclusionLog(BaseModel):
    label: str
    min_words: int
    excluded: List[ExclusionRecord] = Field(default_factory=list)


class ManifestEntry(BaseModel):
    """One text file listed in a manifest."""

    path: str
    id: Optional[str] = None
    author: str = ""
    kind: DocumentKind = DocumentKind.other
    date: Optional[dt.date] = None
    # Per-file overrides of the command-line preparation flags
    chunk_size: Optional[int] = Field(default=None, ge=1)
    section_pattern: Optional[str] = None
    start_marker: Optional[str] = None
    end_marker: Optional[str] = None


class Manifest(BaseModel):
    label: str
    lexicon: Optional[str] = None
    documents: List[ManifestEntry] = Field(default_factory=list)
