"""Test configuration and fixtures."""
import datetime as dt

import pytest

from stylescope.schemas import (
    Collection,
    Document,
    FunctionWordLexicon,
    SynthParams,
)
from stylescope.services import corpus_service, synth_service


@pytest.fixture
def toy_lexicon():
    """Two-word lexicon (the, of)."""
    return FunctionWordLexicon(words=("the", "of"))


@pytest.fixture
def toy_collection(toy_lexicon):
    """The hand-worked two-document corpus: (w=5, c=(2,1)) and (w=4, c=(0,1))."""
    return Collection(
        label="toy",
        docs=(
            Document(id="doc1", author="x", w=5, c=(2, 1)),
            Document(id="doc2", author="x", w=4, c=(0, 1)),
        ),
        lexicon=toy_lexicon,
    )


@pytest.fixture
def toy_lexicon_file(tmp_path):
    """Lexicon file matching toy_lexicon."""
    path = tmp_path / "toy-lexicon.txt"
    path.write_text("# toy lexicon\nthe\nof\n", encoding="utf-8")
    return path


@pytest.fixture
def toy_table(tmp_path, toy_collection):
    """toy_collection written as a count table."""
    return corpus_service.save_counts(toy_collection, tmp_path / "toy.csv")


@pytest.fixture
def dated_collection(toy_lexicon):
    """Twelve dated documents, one per month of 1995 and 2005 alternately."""
    docs = []
    for k in range(12):
        year = 1995 if k % 2 == 0 else 2005
        docs.append(
            Document(
                id=f"d{k:02d}",
                author="court",
                date=dt.date(year, k + 1, 15),
                w=1000,
                c=(40 + 3 * k, 20 + (k * 7) % 11),
            )
        )
    return Collection(label="dated", docs=tuple(docs), lexicon=toy_lexicon)


def make_synthetic(label, propensities, n_docs=60, words=2000, seed=1):
    """Independent-word collection over a lexicon sized to the propensity vector."""
    words_list = ("the", "of", "and", "to", "in", "a", "that", "is")[: len(propensities)]
    params = SynthParams(
        n_docs=n_docs,
        words_per_doc=words,
        lexicon=FunctionWordLexicon(words=words_list),
        seed=seed,
        propensity_override=tuple(propensities),
    )
    return synth_service.gen_collection(params, label)


@pytest.fixture
def author_a():
    return make_synthetic("alpha", (0.06, 0.03, 0.02, 0.05, 0.04), seed=11)


@pytest.fixture
def author_b():
    return make_synthetic("beta", (0.03, 0.05, 0.04, 0.02, 0.06), seed=22)


@pytest.fixture
def synthetic():
    """Factory for independent-word collections with chosen propensities."""
    return make_synthetic


@pytest.fixture
def separated_a():
    """Uses only the first three words."""
    return make_synthetic("left", (0.08, 0.06, 0.05, 0.0, 0.0, 0.0), seed=31)


@pytest.fixture
def separated_b():
    """Uses only the last three words."""
    return make_synthetic("right", (0.0, 0.0, 0.0, 0.08, 0.06, 0.05), seed=32)
