"""Test the independent-word text generator and the null experiment."""
import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from stylescope.schemas import FunctionWordLexicon, SynthParams
from stylescope.services import corpus_service, synth_service

FIVE = FunctionWordLexicon(words=("the", "of", "and", "to", "in"))


class TestGenerator:
    """Test document generation."""

    def test_no_function_words(self):
        """p_function = 0 gives all-zero counts."""
        doc = synth_service.gen_document(SynthParams(p_function=0.0, seed=1), 0)
        assert doc.w == 2000
        assert sum(doc.c) == 0
        assert doc.c0 == 2000

    def test_only_function_words(self):
        """p_function = 1 with one word puts every token on it."""
        params = SynthParams(
            p_function=1.0, words_per_doc=500, lexicon=FunctionWordLexicon(words=("the",)), seed=1
        )
        assert synth_service.gen_document(params, 4).c == (500,)

    def test_default_expected_counts(self):
        """Each default word appears about 2000 * 0.30 / 63 times."""
        collection = synth_service.gen_collection(SynthParams(seed=42))
        assert collection.K == 200
        counts = np.array([d.c for d in collection.docs], dtype=float)
        mean = counts.mean(axis=0)
        assert mean.mean() == pytest.approx(2000 * 0.30 / 63, abs=0.1)
        assert np.all(np.abs(mean - 2000 * 0.30 / 63) < 1.5)

    def test_deterministic_per_document(self):
        """A document depends only on (seed, doc_index)."""
        params = SynthParams(seed=9, lexicon=FIVE)
        assert synth_service.gen_document(params, 3) == synth_service.gen_document(params, 3)
        assert synth_service.gen_document(params, 3).c != synth_service.gen_document(params, 4).c

    def test_parallel_generation_matches_serial(self):
        """Thread count does not change the corpus."""
        params = SynthParams(n_docs=30, seed=5, lexicon=FIVE)
        serial = synth_service.gen_collection(params, threads=1)
        parallel = synth_service.gen_collection(params, threads=4)
        assert serial == parallel

    def test_override_length_checked(self):
        """Propensities must match the lexicon size."""
        with pytest.raises(PydanticValidationError):
            SynthParams(seed=1, lexicon=FIVE, propensity_override=(0.1, 0.1))

    def test_override_sum_checked(self):
        """Propensities may not exceed probability one in total."""
        with pytest.raises(PydanticValidationError):
            SynthParams(seed=1, lexicon=FIVE, propensity_override=(0.5, 0.3, 0.3, 0.0, 0.0))


class TestNullExperiment:
    """Test the V4 calibration experiment."""

    @pytest.mark.slow
    def test_defaults_center_on_one(self):
        """Independent-word text has V4 close to 1."""
        report = synth_service.null_experiment(SynthParams(seed=2024), runs=10)
        assert len(report.per_run) == 10
        assert 0.97 <= report.mean_v4 <= 1.04
        assert 0 < report.sd_v4 < 0.05

    def test_deterministic_documents_have_zero_v4(self):
        """Every document identical means no variability."""
        params = SynthParams(
            n_docs=20,
            words_per_doc=300,
            p_function=1.0,
            lexicon=FunctionWordLexicon(words=("the",)),
            seed=3,
        )
        report = synth_service.null_experiment(params, runs=2)
        assert report.per_run == [0.0, 0.0]
        assert report.sd_v4 == 0.0

    def test_single_run_sd_zero(self):
        """One run has no spread."""
        report = synth_service.null_experiment(SynthParams(n_docs=20, seed=3, lexicon=FIVE), 1)
        assert report.sd_v4 == 0.0

    def test_runs_are_reproducible(self):
        """Same seed, same per-run values."""
        params = SynthParams(n_docs=40, seed=8, lexicon=FIVE)
        first = synth_service.null_experiment(params, runs=3)
        second = synth_service.null_experiment(params, runs=3)
        assert first.per_run == second.per_run
        assert len(set(first.per_run)) == 3

    def test_mixture_inflates_v4(self):
        """Half the documents from different propensities push V4 well above 1."""
        params = SynthParams(
            n_docs=100, seed=4, lexicon=FIVE, propensity_override=(0.06, 0.03, 0.02, 0.05, 0.04)
        )
        alternate = params.model_copy(
            update={"propensity_override": (0.03, 0.05, 0.04, 0.02, 0.06)}
        )
        pure = synth_service.null_experiment(params, runs=3)
        mixed = synth_service.null_experiment(params, runs=3, alternate=alternate)
        assert mixed.mean_v4 > 1.2
        assert mixed.mean_v4 > pure.mean_v4


class TestEmit:
    """Test writing a synthetic corpus to disk."""

    def test_ingesting_emitted_corpus_reproduces_counts(self, tmp_path):
        """The manifest and the count table describe the same documents."""
        params = SynthParams(n_docs=5, words_per_doc=200, lexicon=FIVE, seed=12)
        manifest, table = synth_service.emit_corpus(params, tmp_path, "fake")
        assert table.name == "fake.csv"
        ingested, log = corpus_service.load_collection(manifest, FIVE, min_words=0)
        stored = corpus_service.load_counts(table, FIVE)
        assert ingested.docs == stored.docs
        assert ingested.label == "fake"
        assert log.excluded == []
