"""Bootstrap service: resampled V4 distributions and pairwise comparisons."""

import datetime as dt
import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from stylescope.config import settings
from stylescope.exceptions import EmptyCollectionError, ValidationError
from stylescope.schemas.bootstrap import BootstrapComparison, BootstrapParams
from stylescope.schemas.corpus import Collection, Document
from stylescope.services.variability import count_matrix, v4_from_counts
from stylescope.utils.logging import analysis_logger
from stylescope.utils.parallel import ordered_map
from stylescope.utils.rng import child_rng

logger = logging.getLogger(__name__)

DateRange = Tuple[dt.date, dt.date]


def _nearest_rank_bounds(n: int) -> Tuple[int, int]:
    """1-based ranks of the 2.5% and 97.5% points.

    The upper rank mirrors the lower one (n + 1 - lo) so that swapping the two
    sides negates and reverses the interval exactly.
    """
    lo = max(1, -(-n * 25 // 1000))
    return lo, n + 1 - lo


def _count_le(a: np.ndarray, b_sorted: np.ndarray, t: float) -> int:
    """Number of pairs (r, s) with a_r - b_s <= t, without forming the pairs.

    For fixed a_r the computed difference is non-increasing in b_s, so the
    qualifying s form a suffix of b_sorted; its start is found by a vectorized
    binary search on the exact predicate.
    """
    n_b = len(b_sorted)
    lo = np.zeros(len(a), dtype=np.int64)
    hi = np.full(len(a), n_b, dtype=np.int64)
    while True:
        active = lo < hi
        if not active.any():
            break
        mid = (lo + hi) // 2
        pred = (a - b_sorted[np.minimum(mid, n_b - 1)]) <= t
        hi = np.where(active & pred, mid, hi)
        lo = np.where(active & ~pred, mid + 1, lo)
    return int(np.sum(n_b - lo))


def _kth_difference(a: np.ndarray, b_sorted: np.ndarray, k: int) -> float:
    """k-th smallest (1-based) of the cross differences a_r - b_s."""
    hi = float(a.max() - b_sorted[0])
    lo = float(np.nextafter(a.min() - b_sorted[-1], -np.inf))
    while True:
        mid = lo + (hi - lo) / 2
        if mid <= lo or mid >= hi:
            return hi
        if _count_le(a, b_sorted, mid) >= k:
            hi = mid
        else:
            lo = mid


class BootstrapService:
    """Seeded resampling of collections and V4 bootstrap comparisons."""

    def _indices(
        self, k: int, params: BootstrapParams, stream: str, replicate_index: int
    ) -> np.ndarray:
        if not params.with_replacement and params.sample_size > k:
            raise ValidationError(
                "sample_size",
                params.sample_size,
                f"cannot draw {params.sample_size} of {k} documents without replacement",
            )
        rng = child_rng(params.seed, stream, replicate_index)
        if params.with_replacement:
            return rng.integers(0, k, size=params.sample_size)
        return rng.permutation(k)[: params.sample_size]

    def resample(
        self,
        collection: Collection,
        params: BootstrapParams,
        replicate_index: int,
        stream: Optional[str] = None,
    ) -> Collection:
        """Draw ``sample_size`` documents; deterministic in (seed, stream, index).

        The stream key defaults to the collection label. Draws with replacement
        get ids ``<id>@<position>`` so repeated documents stay distinct.
        """
        idx = self._indices(
            collection.K, params, stream or collection.label, replicate_index
        )
        if params.with_replacement:
            docs = tuple(
                collection.docs[i].model_copy(
                    update={"id": f"{collection.docs[i].id}@{pos + 1}"}
                )
                for pos, i in enumerate(idx)
            )
        else:
            docs = tuple(collection.docs[i] for i in idx)
        return collection.model_copy(update={"docs": docs})

    def v4_distribution(
        self,
        collection: Collection,
        params: BootstrapParams,
        stream: Optional[str] = None,
        min_expected: Optional[float] = None,
        threads: Optional[int] = None,
    ) -> np.ndarray:
        """V4 of every replicate resample, indexed by replicate number."""
        stream = stream or collection.label
        min_expected = settings.min_expected if min_expected is None else min_expected
        w, c = count_matrix(collection)

        def replicate(r: int) -> float:
            idx = self._indices(collection.K, params, stream, r)
            return v4_from_counts(w[idx], c[idx], min_expected)

        with analysis_logger.timed(
            "v4_distribution",
            label=collection.label,
            replicates=params.replicates,
            sample_size=params.sample_size,
        ) as fields:
            values = np.array(
                ordered_map(replicate, range(params.replicates), threads),
                dtype=np.float64,
            )
            fields["mean_v4"] = float(values.mean())
        return values

    def compare(
        self,
        dist_a: Sequence[float],
        dist_b: Sequence[float],
        params: Optional[BootstrapParams] = None,
        pair_cap: Optional[int] = None,
    ) -> BootstrapComparison:
        """Exceedance probability and 95% interval over all cross pairs.

        Ties count toward neither side. Up to ``pair_cap`` pairs the differences
        are formed directly; beyond it only the two sorted vectors are kept.
        """
        a = np.asarray(dist_a, dtype=np.float64).ravel()
        b = np.asarray(dist_b, dtype=np.float64).ravel()
        if a.size == 0 or b.size == 0:
            raise ValidationError("dist", 0, "bootstrap distributions must be nonempty")
        pair_cap = settings.pair_cap if pair_cap is None else pair_cap
        n_pairs = a.size * b.size
        lo_rank, hi_rank = _nearest_rank_bounds(n_pairs)

        if n_pairs <= pair_cap:
            diffs = np.subtract.outer(a, b).ravel()
            greater = int(np.count_nonzero(diffs > 0))
            ties = int(np.count_nonzero(diffs == 0))
            diffs.sort(kind="stable")
            ci_lo, ci_hi = float(diffs[lo_rank - 1]), float(diffs[hi_rank - 1])
        else:
            b_sorted = np.sort(b, kind="stable")
            left = np.searchsorted(b_sorted, a, side="left")
            right = np.searchsorted(b_sorted, a, side="right")
            greater = int(left.sum())
            ties = int((right - left).sum())
            ci_lo = _kth_difference(a, b_sorted, lo_rank)
            ci_hi = _kth_difference(a, b_sorted, hi_rank)

        return BootstrapComparison(
            params=params,
            mean_a=float(a.mean()),
            mean_b=float(b.mean()),
            prob_a_gt_b=greater / n_pairs,
            prob_tie=ties / n_pairs,
            ci_lo=ci_lo,
            ci_hi=ci_hi,
            n_pairs=n_pairs,
        )

    def compare_collections(
        self,
        collection_a: Collection,
        collection_b: Collection,
        params: BootstrapParams,
        min_expected: Optional[float] = None,
        threads: Optional[int] = None,
    ) -> BootstrapComparison:
        """Bootstrap both collections and compare; equal labels get distinct streams."""
        stream_a = collection_a.label
        stream_b = collection_b.label
        if stream_a == stream_b:
            stream_b = f"{stream_b}#b"
        dist_a = self.v4_distribution(
            collection_a, params, stream_a, min_expected, threads
        )
        dist_b = self.v4_distribution(
            collection_b, params, stream_b, min_expected, threads
        )
        return self.compare(dist_a, dist_b, params)

    def split_collection(
        self,
        collection: Collection,
        assign: Callable[[Document], Optional[int]],
        labels: Tuple[str, str],
    ) -> Tuple[Collection, Collection]:
        """Partition documents by ``assign`` (0, 1, or None to drop)."""
        groups: Tuple[list, list] = ([], [])
        dropped = 0
        for doc in collection.docs:
            side = assign(doc)
            if side is None:
                dropped += 1
            else:
                groups[side].append(doc)
        if dropped:
            logger.warning(
                f"{dropped} documents fell outside both groups",
                extra={"label": collection.label, "dropped": dropped},
            )
        out = []
        for docs, label in zip(groups, labels):
            if not docs:
                raise EmptyCollectionError(label)
            out.append(collection.model_copy(update={"docs": tuple(docs), "label": label}))
        return out[0], out[1]

    def split_session_halves(self, collection: Collection) -> Tuple[Collection, Collection]:
        """September-March versus April-August, by document date."""

        def assign(doc: Document) -> Optional[int]:
            if doc.date is None:
                return None
            return 1 if 4 <= doc.date.month <= 8 else 0

        return self.split_collection(
            collection, assign, (f"{collection.label} first", f"{collection.label} second")
        )

    def split_decades(
        self, collection: Collection, decade_a: int, decade_b: int
    ) -> Tuple[Collection, Collection]:
        """Documents dated in decade_a versus decade_b (e.g. 1990 and 2000)."""
        if decade_a == decade_b:
            raise ValidationError("decades", decade_a, "the two decades must differ")

        def assign(doc: Document) -> Optional[int]:
            if doc.date is None:
                return None
            decade = doc.date.year // 10 * 10
            if decade == decade_a:
                return 0
            if decade == decade_b:
                return 1
            return None

        return self.split_collection(
            collection,
            assign,
            (f"{collection.label} {decade_a}s", f"{collection.label} {decade_b}s"),
        )

    def split_date_ranges(
        self, collection: Collection, range_a: DateRange, range_b: DateRange
    ) -> Tuple[Collection, Collection]:
        """Documents dated within range_a versus range_b (inclusive bounds)."""

        def assign(doc: Document) -> Optional[int]:
            if doc.date is None:
                return None
            if range_a[0] <= doc.date <= range_a[1]:
                return 0
            if range_b[0] <= doc.date <= range_b[1]:
                return 1
            return None

        return self.split_collection(
            collection,
            assign,
            (
                f"{collection.label} {range_a[0]}..{range_a[1]}",
                f"{collection.label} {range_b[0]}..{range_b[1]}",
            ),
        )


# Global service instance
bootstrap_service = BootstrapService()
