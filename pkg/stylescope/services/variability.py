"""Variability service: V1-V4, contingency tables, merging and trends."""

import logging
from collections import defaultdict
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from stylescope.config import settings
from stylescope.exceptions import (
    DegenerateTrendError,
    EmptyCollectionError,
    LexiconMismatchError,
    ValidationError,
    ZeroLengthDocumentError,
)
from stylescope.schemas.corpus import Collection
from stylescope.schemas.variability import (
    CellStats,
    DecadePoint,
    DecadeSeries,
    TrendFit,
    VariabilityReport,
)
from stylescope.utils.validation import require_documents

logger = logging.getLogger(__name__)


def count_matrix(collection: Collection) -> Tuple[np.ndarray, np.ndarray]:
    """Word totals (length K) and lexicon counts (K x J) as float arrays."""
    w = np.array([doc.w for doc in collection.docs], dtype=np.float64)
    c = np.array([doc.c for doc in collection.docs], dtype=np.float64)
    return w, c.reshape(len(collection.docs), collection.lexicon.J)


def observed_table(w: np.ndarray, c: np.ndarray) -> np.ndarray:
    """K x (J+1) table whose column 0 is the non-function-word remainder."""
    return np.column_stack([w - c.sum(axis=1), c])


def expected_table(obs: np.ndarray) -> np.ndarray:
    """e_ij = w_i * (column total j) / (grand total)."""
    w = obs.sum(axis=1)
    total = w.sum()
    if total <= 0:
        return np.zeros_like(obs)
    return np.outer(w, obs.sum(axis=0)) / total


def chisq_from_counts(
    w: np.ndarray, c: np.ndarray, min_expected: float = 0.0
) -> Tuple[float, int]:
    """Pearson statistic over the (J+1)-column table and the number of skipped cells.

    Cells with zero expected count, or expected count below ``min_expected``,
    are left out.
    """
    obs = observed_table(w, c)
    exp = expected_table(obs)
    keep = exp > 0
    if min_expected > 0:
        keep &= exp >= min_expected
    diff = obs[keep] - exp[keep]
    return float(np.sum(diff * diff / exp[keep])), int(keep.size - keep.sum())


def v4_from_counts(w: np.ndarray, c: np.ndarray, min_expected: float = 0.0) -> float:
    """V4 = chisq / (J (K-1)) for raw count arrays; K must be at least 2."""
    k, j = c.shape
    chisq, _ = chisq_from_counts(w, c, min_expected)
    return chisq / (j * (k - 1))


class VariabilityService:
    """Writing-style variability statistics of document collections."""

    def fractions(self, collection: Collection) -> np.ndarray:
        """f_ij = c_ij / w_i."""
        for doc in collection.docs:
            if doc.w == 0:
                raise ZeroLengthDocumentError(doc.id)
        w, c = count_matrix(collection)
        return c / w[:, None]

    def pooled_rates(self, collection: Collection) -> np.ndarray:
        """mu_j = (sum_i c_ij) / (sum_i w_i)."""
        if collection.K == 0:
            raise EmptyCollectionError(collection.label)
        w, c = count_matrix(collection)
        total = w.sum()
        if total <= 0:
            raise ValidationError("w", 0, f"collection '{collection.label}' has no words")
        return c.sum(axis=0) / total

    def classic_variability(self, collection: Collection) -> Tuple[float, float, float, int]:
        """V1, V2, V3 and the number of columns left out of V3.

        Columns with pooled rate 0 (or 1) have no defined q_ij and are skipped
        in V3; they contribute zero spread to V1 and V2.
        """
        require_documents("classic_variability", collection.K, 2)
        f = self.fractions(collection)
        mu = self.pooled_rates(collection)
        w, _ = count_matrix(collection)

        v1 = float(np.sum(np.std(f, axis=0, ddof=1)))
        r = np.sqrt(w)[:, None] * (f - mu)
        v2 = float(np.sum(np.std(r, axis=0, ddof=1)))

        usable = (mu > 0) & (mu < 1)
        q = r[:, usable] / np.sqrt(mu[usable] * (1 - mu[usable]))
        v3 = float(np.sum(np.std(q, axis=0, ddof=1))) if q.shape[1] else 0.0
        omitted = int((~usable).sum())
        if omitted:
            logger.debug(
                f"V3 omitted {omitted} function words with pooled rate 0",
                extra={"label": collection.label, "v3_omitted_terms": omitted},
            )
        return v1, v2, v3, omitted

    def expected_counts(self, collection: Collection) -> np.ndarray:
        """K x (J+1) expected counts; column 0 is the non-function-word remainder."""
        require_documents("expected_counts", collection.K, 2)
        w, c = count_matrix(collection)
        return expected_table(observed_table(w, c))

    def observed_counts(self, collection: Collection) -> np.ndarray:
        w, c = count_matrix(collection)
        return observed_table(w, c)

    def chisq_v4(
        self, collection: Collection, min_expected: Optional[float] = None
    ) -> VariabilityReport:
        """Full variability report; V4 is chi-squared over its null mean J (K-1)."""
        require_documents("chisq_v4", collection.K, 2)
        min_expected = settings.min_expected if min_expected is None else min_expected
        w, c = count_matrix(collection)
        chisq, omitted = chisq_from_counts(w, c, min_expected)
        df = collection.lexicon.J * (collection.K - 1)
        v1, v2, v3, v3_omitted = self.classic_variability(collection)
        return VariabilityReport(
            label=collection.label,
            K=collection.K,
            J=collection.lexicon.J,
            mean_words_per_doc=float(w.mean()),
            V1=v1,
            V2=v2,
            V3=v3,
            chisq=chisq,
            df=df,
            V4=chisq / df,
            v3_omitted_terms=v3_omitted,
            chisq_omitted_cells=omitted,
        )

    def cell_stats(self, collection: Collection) -> CellStats:
        """Share of expected and observed cells below one, with means and medians."""
        require_documents("cell_stats", collection.K, 2)
        obs = self.observed_counts(collection)
        exp = expected_table(obs)
        return CellStats(
            n_cells=int(obs.size),
            frac_expected_below_1=float(np.mean(exp < 1)),
            frac_observed_below_1=float(np.mean(obs < 1)),
            mean_expected=float(np.mean(exp)),
            median_expected=float(np.median(exp)),
            mean_observed=float(np.mean(obs)),
            median_observed=float(np.median(obs)),
        )

    def merge(
        self, collections: Sequence[Collection], label: Optional[str] = None
    ) -> Collection:
        """Concatenate collections, prefixing ids with their source label."""
        if not collections:
            raise ValidationError("collections", 0, "nothing to merge")
        first = collections[0]
        for other in collections[1:]:
            if other.lexicon.words != first.lexicon.words:
                raise LexiconMismatchError(
                    first.lexicon.words, other.lexicon.words, other.label
                )
        if len(collections) == 1:
            return first if label is None else first.model_copy(update={"label": label})

        labels = [coll.label for coll in collections]
        unique = len(set(labels)) == len(labels)
        docs = []
        for k, coll in enumerate(collections):
            prefix = coll.label if unique else f"{coll.label}#{k + 1}"
            docs.extend(
                doc.model_copy(update={"id": f"{prefix}/{doc.id}"}) for doc in coll.docs
            )
        return Collection(
            label=label or " + ".join(labels), docs=tuple(docs), lexicon=first.lexicon
        )

    def trend_fit(self, points: Iterable[Tuple[float, float]]) -> TrendFit:
        """Least-squares line with a two-sided t-test on the slope (n-2 df)."""
        pts = list(points)
        if len(pts) < 3:
            raise DegenerateTrendError(f"at least 3 points required, got {len(pts)}")
        x = np.array([p[0] for p in pts], dtype=np.float64)
        y = np.array([p[1] for p in pts], dtype=np.float64)
        if np.ptp(x) == 0:
            raise DegenerateTrendError("all x values are equal")

        n = len(pts)
        x_mean, y_mean = x.mean(), y.mean()
        sxx = float(np.sum((x - x_mean) ** 2))
        if np.ptp(y) == 0:
            return TrendFit(slope=0.0, intercept=float(y[0]), p_value=1.0, n_points=n)

        slope = float(np.sum((x - x_mean) * (y - y_mean)) / sxx)
        intercept = float(y_mean - slope * x_mean)
        residuals = y - (intercept + slope * x)
        sse = float(np.sum(residuals**2))
        se = np.sqrt(sse / (n - 2) / sxx)
        if se == 0:
            p_value = 0.0 if slope != 0 else 1.0
        else:
            t_stat = slope / se
            p_value = float(2 * stats.t.sf(abs(t_stat), n - 2))
        return TrendFit(
            slope=slope,
            intercept=intercept,
            p_value=min(1.0, max(0.0, p_value)),
            n_points=n,
        )

    def decade_series(
        self,
        collection: Collection,
        since: Optional[int] = None,
        min_expected: Optional[float] = None,
    ) -> DecadeSeries:
        """V4 of each decade's dated documents; decades with fewer than 2 are skipped."""
        groups = defaultdict(list)
        undated = 0
        for doc in collection.docs:
            if doc.date is None:
                undated += 1
                continue
            if since is not None and doc.date.year < since:
                continue
            groups[doc.date.year // 10 * 10].append(doc)
        if undated:
            logger.warning(
                f"Skipped {undated} undated documents in decade series",
                extra={"label": collection.label, "undated": undated},
            )

        points: List[DecadePoint] = []
        for decade in sorted(groups):
            docs = groups[decade]
            if len(docs) < 2:
                continue
            sub = collection.model_copy(
                update={"docs": tuple(docs), "label": f"{collection.label} {decade}s"}
            )
            report = self.chisq_v4(sub, min_expected)
            points.append(
                DecadePoint(decade=decade, midpoint=decade + 5.0, K=len(docs), V4=report.V4)
            )
        return DecadeSeries(label=collection.label, points=points)


# Global service instance
variability_service = VariabilityService()
