"""Synthetic null text: documents whose words are drawn independently."""

import json
import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from stylescope.schemas.corpus import Collection, Document, DocumentKind
from stylescope.schemas.synth import NullExperimentReport, SynthParams
from stylescope.services.corpus import corpus_service
from stylescope.services.variability import count_matrix, v4_from_counts
from stylescope.utils.logging import analysis_logger
from stylescope.utils.parallel import ordered_map
from stylescope.utils.rng import child_rng, seed_sequence
from stylescope.utils.validation import require_positive

logger = logging.getLogger(__name__)

# Stand-in for every non-function word; only counts matter downstream.
PLACEHOLDER = "qqq"


class SynthService:
    """Random-text generator and the V4 null calibration experiment."""

    def word_probabilities(self, params: SynthParams) -> np.ndarray:
        """Per-word probabilities, lexicon order, with the placeholder last."""
        if params.propensity_override is not None:
            words = np.asarray(params.propensity_override, dtype=np.float64)
        else:
            words = np.full(params.lexicon.J, params.p_function / params.lexicon.J)
        rest = max(0.0, 1.0 - float(words.sum()))
        return np.append(words, rest)

    def gen_document(
        self, params: SynthParams, doc_index: int, label: str = "synth"
    ) -> Document:
        """One document; deterministic in (seed, doc_index)."""
        rng = child_rng(params.seed, "synth", doc_index)
        counts = rng.multinomial(params.words_per_doc, self.word_probabilities(params))
        return Document(
            id=f"{label}-{doc_index + 1:04d}",
            author=label,
            kind=DocumentKind.other,
            w=params.words_per_doc,
            c=tuple(int(x) for x in counts[:-1]),
        )

    def gen_collection(
        self,
        params: SynthParams,
        label: str = "synth",
        threads: Optional[int] = None,
    ) -> Collection:
        docs = ordered_map(
            lambda i: self.gen_document(params, i, label), range(params.n_docs), threads
        )
        return Collection(label=label, docs=tuple(docs), lexicon=params.lexicon)

    def _run_params(self, params: SynthParams, run: int, key: str) -> SynthParams:
        state = seed_sequence(params.seed, key, run).generate_state(2, dtype=np.uint64)
        return params.model_copy(update={"seed": int(state[0])})

    def null_experiment(
        self,
        params: SynthParams,
        runs: int = 10,
        alternate: Optional[SynthParams] = None,
        threads: Optional[int] = None,
    ) -> NullExperimentReport:
        """V4 of ``runs`` independently generated collections.

        With ``alternate``, the second half of each collection is drawn from it
        instead (a two-author mixture).
        """
        require_positive("runs", runs)
        if alternate is not None and alternate.lexicon.words != params.lexicon.words:
            raise ValueError("alternate parameters must use the same lexicon")

        def one_run(run: int) -> float:
            run_params = self._run_params(params, run, "run")
            if alternate is None:
                collection = self.gen_collection(run_params, threads=1)
            else:
                n_alt = params.n_docs // 2
                first = run_params.model_copy(update={"n_docs": params.n_docs - n_alt})
                second = self._run_params(alternate, run, "alternate").model_copy(
                    update={"n_docs": n_alt}
                )
                docs = self.gen_collection(first, "mix-a", threads=1).docs
                docs += self.gen_collection(second, "mix-b", threads=1).docs
                collection = Collection(label="mix", docs=docs, lexicon=params.lexicon)
            w, c = count_matrix(collection)
            return v4_from_counts(w, c)

        with analysis_logger.timed(
            "null_experiment", runs=runs, n_docs=params.n_docs, mixture=alternate is not None
        ) as fields:
            per_run = ordered_map(one_run, range(runs), threads)
            values = np.asarray(per_run)
            sd = float(values.std(ddof=1)) if runs > 1 else 0.0
            fields.update(mean_v4=float(values.mean()), sd_v4=sd)
        return NullExperimentReport(mean_v4=float(values.mean()), sd_v4=sd, per_run=per_run)

    def emit_corpus(
        self,
        params: SynthParams,
        directory: Union[str, Path],
        label: str = "synth",
    ) -> List[Path]:
        """Write text files, a manifest and a count table for a synthetic corpus.

        Ingesting the manifest reproduces the count table exactly.
        """
        if PLACEHOLDER in params.lexicon.words:
            raise ValueError(f"lexicon must not contain the placeholder '{PLACEHOLDER}'")
        directory = Path(directory)
        text_dir = directory / "texts"
        text_dir.mkdir(parents=True, exist_ok=True)
        collection = self.gen_collection(params, label)

        entries = []
        for k, doc in enumerate(collection.docs):
            tokens = [PLACEHOLDER] * doc.c0
            for word, count in zip(params.lexicon.words, doc.c):
                tokens.extend([word] * count)
            order = child_rng(params.seed, "emit", k).permutation(len(tokens))
            shuffled = [tokens[i] for i in order]
            lines = [" ".join(shuffled[i : i + 20]) for i in range(0, len(shuffled), 20)]
            path = text_dir / f"{doc.id}.txt"
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            entries.append(
                {"path": f"texts/{path.name}", "id": doc.id, "author": doc.author, "kind": "other"}
            )

        manifest_path = directory / "manifest.json"
        manifest_path.write_text(
            json.dumps({"label": label, "documents": entries}, indent=2) + "\n",
            encoding="utf-8",
        )
        table_path = corpus_service.save_counts(collection, directory / f"{label}.csv")
        logger.info(
            f"Wrote synthetic corpus of {collection.K} documents to {directory}",
            extra={"event": "synth_emitted", "label": label, "K": collection.K},
        )
        return [manifest_path, table_path]


# Global service instance
synth_service = SynthService()
