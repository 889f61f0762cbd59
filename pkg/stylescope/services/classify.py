"""Classify service: two-author attribution and outlier detection."""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from stylescope.config import settings
from stylescope.exceptions import ModelMismatchError, ValidationError
from stylescope.schemas.classify import (
    AsymmetryReport,
    ClassifierMethod,
    CrossValReport,
    LinearModel,
    NbModel,
    OutlierEntry,
    OutlierReport,
    PlantedOutlierReport,
    PlantedScore,
    Prediction,
)
from stylescope.schemas.corpus import Collection, Document, FunctionWordLexicon
from stylescope.services.variability import variability_service
from stylescope.utils.logging import analysis_logger
from stylescope.utils.parallel import ordered_map
from stylescope.utils.rng import child_rng
from stylescope.utils.validation import require_documents

logger = logging.getLogger(__name__)

DocLike = Union[Document, Sequence[float], np.ndarray]


def _as_fractions(doc: DocLike) -> np.ndarray:
    if isinstance(doc, Document):
        if doc.w == 0:
            return np.zeros(len(doc.c))
        return np.asarray(doc.c, dtype=np.float64) / doc.w
    return np.asarray(doc, dtype=np.float64).ravel()


def _design(f: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(f.shape[0]), f])


class ClassifyService:
    """Naive-Bayes and least-squares authorship classifiers."""

    # Naive Bayes

    def nb_fit(
        self, label: str, f: np.ndarray, variance_floor: Optional[float] = None
    ) -> NbModel:
        """Gaussian model from a fraction matrix (rows are documents)."""
        require_documents(f"nb_train({label})", f.shape[0], 2)
        floor = settings.variance_floor if variance_floor is None else variance_floor
        m = f.mean(axis=0)
        v = np.maximum(f.var(axis=0, ddof=1), floor)
        return NbModel(
            label=label,
            m=tuple(float(x) for x in m),
            v=tuple(float(x) for x in v),
            n_train=int(f.shape[0]),
        )

    def nb_train(
        self, collection: Collection, variance_floor: Optional[float] = None
    ) -> NbModel:
        """Per-word sample mean and floored (K-1)-denominator variance."""
        require_documents(f"nb_train({collection.label})", collection.K, 2)
        f = variability_service.fractions(collection)
        return self.nb_fit(collection.label, f, variance_floor)

    def nb_loglike(self, model: NbModel, doc_fractions: DocLike) -> float:
        """-sum_j (log(v_j)/2 + (f_j - m_j)^2 / (2 v_j)); the constant is 0."""
        f = _as_fractions(doc_fractions)
        if f.size != model.J:
            raise ModelMismatchError(model.J, f.size)
        m = np.asarray(model.m)
        v = np.asarray(model.v)
        return float(-np.sum(0.5 * np.log(v) + (f - m) ** 2 / (2 * v)))

    def nb_classify(self, model_a: NbModel, model_b: NbModel, doc: DocLike) -> str:
        """model_a's label iff its log-likelihood is strictly larger; ties go to B."""
        if model_a.J != model_b.J:
            raise ModelMismatchError(model_a.J, model_b.J)
        if self.nb_loglike(model_a, doc) > self.nb_loglike(model_b, doc):
            return model_a.label
        return model_b.label

    # Linear least squares

    def _lin_solve(self, f_a: np.ndarray, f_b: np.ndarray) -> Tuple[np.ndarray, int]:
        """Minimum-norm least-squares coefficients and the design rank."""
        if f_a.shape[0] == 0 or f_b.shape[0] == 0:
            raise ValidationError("training set", 0, "both classes need documents")
        x = _design(np.vstack([f_a, f_b]))
        y = np.concatenate([-np.ones(f_a.shape[0]), np.ones(f_b.shape[0])])
        beta, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
        return beta, int(rank)

    def lin_fit(
        self,
        f_a: np.ndarray,
        f_b: np.ndarray,
        label_neg: str = "A",
        label_pos: str = "B",
    ) -> LinearModel:
        """Regress -1 (rows of f_a) / +1 (rows of f_b) on [1, fractions].

        Uses an SVD least-squares solver; rank-deficient designs get the
        minimum-norm solution.
        """
        beta, rank = self._lin_solve(f_a, f_b)
        columns = f_a.shape[1] + 1
        if rank < columns:
            logger.warning(
                f"Rank-deficient design ({rank} < {columns}); using minimum-norm fit",
                extra={"rank": rank, "columns": columns, "rows": f_a.shape[0] + f_b.shape[0]},
            )
        return LinearModel(
            beta=tuple(float(b) for b in beta),
            n_train=f_a.shape[0] + f_b.shape[0],
            label_neg=label_neg,
            label_pos=label_pos,
        )

    def lin_train(self, collection_a: Collection, collection_b: Collection) -> LinearModel:
        """Least-squares linear classifier; A is the -1 class, B the +1 class."""
        if collection_a.lexicon.J != collection_b.lexicon.J:
            raise ModelMismatchError(collection_a.lexicon.J, collection_b.lexicon.J)
        return self.lin_fit(
            variability_service.fractions(collection_a),
            variability_service.fractions(collection_b),
            collection_a.label,
            collection_b.label,
        )

    def lin_score(self, model: LinearModel, doc_fractions: DocLike) -> float:
        g = _as_fractions(doc_fractions)
        if g.size != model.J:
            raise ModelMismatchError(model.J, g.size)
        beta = np.asarray(model.beta)
        return float(beta[0] + g @ beta[1:])

    def lin_classify(self, model: LinearModel, doc_fractions: DocLike) -> str:
        """label_neg iff the fitted value is negative; zero goes to label_pos."""
        return model.label_neg if self.lin_score(model, doc_fractions) < 0 else model.label_pos

    def lin_top_words(
        self, model: LinearModel, lexicon: FunctionWordLexicon, k: int = 10
    ) -> List[Tuple[str, float]]:
        """The k function words with the largest absolute coefficients."""
        if model.J != lexicon.J:
            raise ModelMismatchError(model.J, lexicon.J)
        coef = np.asarray(model.beta[1:])
        order = sorted(range(lexicon.J), key=lambda j: (-abs(coef[j]), j))
        return [(lexicon.words[j], float(coef[j])) for j in order[:k]]

    # Evaluation

    def _classify_side(
        self,
        method: ClassifierMethod,
        f_a: np.ndarray,
        f_b: np.ndarray,
        g: np.ndarray,
    ) -> Tuple[str, bool]:
        """'A' or 'B' for one held-out vector, plus a rank-deficiency flag."""
        if method == ClassifierMethod.naive_bayes:
            model_a = self.nb_fit("A", f_a)
            model_b = self.nb_fit("B", f_b)
            return self.nb_classify(model_a, model_b, g), False
        beta, rank = self._lin_solve(f_a, f_b)
        model = LinearModel(beta=tuple(float(b) for b in beta), n_train=len(f_a) + len(f_b))
        return self.lin_classify(model, g), rank < beta.size

    def loo_crossval(
        self,
        collection_a: Collection,
        collection_b: Collection,
        classifier: Union[ClassifierMethod, str] = ClassifierMethod.naive_bayes,
        threads: Optional[int] = None,
    ) -> CrossValReport:
        """Leave each document out, retrain on all others, and tally per side."""
        method = ClassifierMethod(classifier)
        if collection_a.lexicon.J != collection_b.lexicon.J:
            raise ModelMismatchError(collection_a.lexicon.J, collection_b.lexicon.J)
        if method == ClassifierMethod.naive_bayes:
            require_documents(f"loo_crossval({collection_a.label})", collection_a.K, 3)
            require_documents(f"loo_crossval({collection_b.label})", collection_b.K, 3)
        else:
            require_documents(f"loo_crossval({collection_a.label})", collection_a.K, 2)
            require_documents(f"loo_crossval({collection_b.label})", collection_b.K, 2)

        f_a = variability_service.fractions(collection_a)
        f_b = variability_service.fractions(collection_b)
        tasks = [("A", i) for i in range(f_a.shape[0])] + [
            ("B", i) for i in range(f_b.shape[0])
        ]

        def held_out(task: Tuple[str, int]) -> Tuple[bool, bool]:
            side, i = task
            if side == "A":
                predicted, deficient = self._classify_side(
                    method, np.delete(f_a, i, axis=0), f_b, f_a[i]
                )
            else:
                predicted, deficient = self._classify_side(
                    method, f_a, np.delete(f_b, i, axis=0), f_b[i]
                )
            return predicted == side, deficient

        with analysis_logger.timed(
            "loo_crossval",
            method=method.value,
            label_a=collection_a.label,
            label_b=collection_b.label,
        ) as fields:
            outcomes = ordered_map(held_out, tasks, threads)
            correct = [ok for ok, _ in outcomes]
            deficient = sum(flag for _, flag in outcomes)
            if deficient:
                logger.warning(
                    f"{deficient} of {len(tasks)} folds had a rank-deficient design; "
                    "used minimum-norm fits",
                    extra={"deficient_folds": deficient, "folds": len(tasks)},
                )
            n_a = f_a.shape[0]
            report = CrossValReport(
                classifier=method,
                success_a=int(sum(correct[:n_a])),
                total_a=n_a,
                success_b=int(sum(correct[n_a:])),
                total_b=f_b.shape[0],
            )
            fields.update(success_a=report.success_a, success_b=report.success_b)
        return report

    def outlier_score(self, n: int, rank: int) -> float:
        """100 (n - i) / (n - 1): 100 when the true outlier ranks first, 0 when last."""
        if n < 2:
            raise ValidationError("n", n, "need at least 2 documents to score")
        if not 1 <= rank <= n:
            raise ValidationError("rank", rank, f"must lie between 1 and {n}")
        return (n - rank) / (n - 1) * 100.0

    def _loo_loglikes(self, f: np.ndarray) -> np.ndarray:
        """Log-likelihood of each row under the model fitted to all other rows."""
        out = np.empty(f.shape[0])
        for i in range(f.shape[0]):
            model = self.nb_fit("rest", np.delete(f, i, axis=0))
            out[i] = self.nb_loglike(model, f[i])
        return out

    def _rank(self, ids: Sequence[str], loglikes: np.ndarray) -> List[OutlierEntry]:
        order = sorted(range(len(ids)), key=lambda i: (loglikes[i], ids[i]))
        ranks = [0] * len(ids)
        for position, i in enumerate(order, start=1):
            ranks[i] = position
        return [
            OutlierEntry(id=ids[i], loglike=float(loglikes[i]), rank=ranks[i])
            for i in range(len(ids))
        ]

    def outlier_rank(
        self, collection: Collection, truth_id: Optional[str] = None
    ) -> OutlierReport:
        """Rank documents from least (rank 1) to most typical of the rest.

        Ties in log-likelihood are broken by ascending document id.
        """
        require_documents("outlier_rank", collection.K, 3)
        ids = [doc.id for doc in collection.docs]
        if truth_id is not None and truth_id not in ids:
            raise ValidationError("truth", truth_id, "not a document in the collection")
        f = variability_service.fractions(collection)
        entries = self._rank(ids, self._loo_loglikes(f))
        report = OutlierReport(per_doc=entries)
        if truth_id is not None:
            rank = next(e.rank for e in entries if e.id == truth_id)
            report.outlier_id = truth_id
            report.score = self.outlier_score(collection.K, rank)
        return report

    def planted_outlier_experiment(
        self,
        test_collection: Collection,
        decoy_collection: Collection,
        plantings: Optional[int] = None,
        threads: Optional[int] = None,
    ) -> PlantedOutlierReport:
        """Plant each test document among all decoys in turn and average the scores."""
        require_documents("planted_outlier_experiment", decoy_collection.K, 2)
        if test_collection.lexicon.J != decoy_collection.lexicon.J:
            raise ModelMismatchError(decoy_collection.lexicon.J, test_collection.lexicon.J)
        tests = test_collection.docs[:plantings] if plantings else test_collection.docs
        f_decoy = variability_service.fractions(decoy_collection)
        decoy_ids = [f"decoy/{doc.id}" for doc in decoy_collection.docs]
        n = decoy_collection.K + 1

        def plant(doc: Document) -> PlantedScore:
            planted_id = f"planted/{doc.id}"
            f = np.vstack([f_decoy, _as_fractions(doc)])
            entries = self._rank(decoy_ids + [planted_id], self._loo_loglikes(f))
            rank = entries[-1].rank
            return PlantedScore(id=doc.id, rank=rank, score=self.outlier_score(n, rank))

        with analysis_logger.timed(
            "planted_outlier_experiment",
            test_label=test_collection.label,
            decoy_label=decoy_collection.label,
        ) as fields:
            scores = ordered_map(plant, tests, threads)
            mean_score = float(np.mean([s.score for s in scores]))
            fields["mean_score"] = mean_score
        return PlantedOutlierReport(
            test_label=test_collection.label,
            decoy_label=decoy_collection.label,
            n=n,
            mean_score=mean_score,
            scores=scores,
        )

    def predict(
        self,
        collection: Collection,
        nb_models: Optional[Tuple[NbModel, NbModel]] = None,
        linear_model: Optional[LinearModel] = None,
    ) -> List[Prediction]:
        """Label every document of a collection with a trained classifier."""
        if (nb_models is None) == (linear_model is None):
            raise ValidationError("model", None, "give exactly one classifier")
        predictions = []
        for doc in collection.docs:
            if nb_models is not None:
                label = self.nb_classify(nb_models[0], nb_models[1], doc)
            else:
                label = self.lin_classify(linear_model, doc)
            predictions.append(Prediction(id=doc.id, label=label))
        return predictions

    def gaussian_asymmetry(
        self,
        mean: float = 5.0,
        sd_a: float = 1.0,
        sd_b: float = 1.1,
        n_samples: int = 100_000,
        seed: int = 0,
    ) -> AsymmetryReport:
        """Share of draws from each of two 1-D Gaussians that the A model claims.

        With equal means and a slightly wider B, A wins most draws from either
        source.
        """
        model_a = NbModel(label="A", m=(mean,), v=(sd_a**2,), n_train=0)
        model_b = NbModel(label="B", m=(mean,), v=(sd_b**2,), n_train=0)

        def share_a(draws: np.ndarray) -> float:
            ll_a = -(0.5 * np.log(model_a.v[0]) + (draws - mean) ** 2 / (2 * model_a.v[0]))
            ll_b = -(0.5 * np.log(model_b.v[0]) + (draws - mean) ** 2 / (2 * model_b.v[0]))
            return float(np.mean(ll_a > ll_b))

        from_a = share_a(child_rng(seed, "asymmetry", "A").normal(mean, sd_a, n_samples))
        from_b = share_a(child_rng(seed, "asymmetry", "B").normal(mean, sd_b, n_samples))
        return AsymmetryReport(
            from_a=from_a, from_b=from_b, pooled=(from_a + from_b) / 2, n_samples=n_samples
        )


# Global service instance
classify_service = ClassifyService()
