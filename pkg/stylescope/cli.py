"""Command-line front end: ``python -m stylescope <command> [options]``.

Reports go to standard output (or ``--output``) as JSON by default, or as
aligned text tables with ``--format table``. Logs go to standard error.
Exit codes: 0 success, 1 data error, 2 usage error.
"""

import argparse
import csv
import datetime as dt
import itertools
import json
import sys
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from stylescope import __version__
from stylescope.config import settings
from stylescope.exceptions import (
    LexiconMismatchError,
    ValidationError,
    handle_cli_exception,
)
from stylescope.schemas import (
    BootstrapParams,
    ClassifierMethod,
    Collection,
    IngestSummary,
    PairedCrossVal,
    SavedModel,
    SynthParams,
    TrendReport,
)
from stylescope.services import (
    bootstrap_service,
    classify_service,
    corpus_service,
    synth_service,
    variability_service,
)
from stylescope.utils.logging import app_logger, configure_logging
from stylescope.utils.tables import render_table
from stylescope.utils.validation import parse_seed

Handler = Callable[[argparse.Namespace], None]


# Output


def _to_json(payload: Any) -> str:
    if isinstance(payload, BaseModel):
        return payload.model_dump_json(indent=2)
    if isinstance(payload, list):
        items = [p.model_dump(mode="json") if isinstance(p, BaseModel) else p for p in payload]
        return json.dumps(items, indent=2)
    return json.dumps(payload, indent=2)


def _emit(args: argparse.Namespace, payload: Any, table: Callable[[], str]) -> None:
    text = table() if args.format == "table" else _to_json(payload)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _one_or_many(items: List[Any]) -> Any:
    return items[0] if len(items) == 1 else items


def _build_model(model: type, field: str, **values: Any) -> Any:
    """Instantiate a pydantic model, surfacing bad values as domain errors."""
    try:
        return model(**values)
    except PydanticValidationError as e:
        err = e.errors()[0]
        loc = ".".join(str(p) for p in err.get("loc", ())) or field
        raise ValidationError(loc, err.get("input"), str(err.get("msg")))


def _load(args: argparse.Namespace, path: str) -> Collection:
    return corpus_service.load_counts(path, args.lexicon_obj)


def _variability_table(reports: Sequence[Any]) -> str:
    return render_table(
        ["collection", "docs", "words/doc", "V1", "V2", "V3", "V4"],
        [
            [r.label, r.K, round(r.mean_words_per_doc), r.V1, r.V2, r.V3, r.V4]
            for r in reports
        ],
    )


# Commands


def cmd_ingest(args: argparse.Namespace) -> None:
    lexicon = args.lexicon_obj
    options = dict(
        chunk_size=args.chunk_size or settings.chunk_size,
        section_pattern=args.section_pattern,
        start_marker=args.strip_start,
        end_marker=args.strip_end,
        gutenberg=args.gutenberg,
    )
    inputs = [Path(p) for p in args.inputs]
    if len(inputs) == 1 and inputs[0].is_dir():
        collection, log = corpus_service.ingest_directory(
            inputs[0], lexicon, args.min_words, args.label, **options
        )
    elif len(inputs) == 1 and inputs[0].suffix.lower() == ".json":
        collection, log = corpus_service.load_collection(
            inputs[0], lexicon if args.lexicon else None, args.min_words, **options
        )
        if args.label:
            collection = collection.model_copy(update={"label": args.label})
            log = log.model_copy(update={"label": args.label})
    else:
        docs = []
        for path in inputs:
            docs.extend(corpus_service.load_text_units(path, lexicon, **options))
        collection, log = corpus_service.build_collection(
            args.label or inputs[0].stem, docs, lexicon, args.min_words
        )

    table_path = Path(args.out) if args.out else Path(f"{collection.label}.csv")
    corpus_service.save_counts(collection, table_path)
    log_path = corpus_service.save_exclusions(
        log, table_path.with_name(f"{table_path.stem}.exclusions.json")
    )
    summary = IngestSummary(
        label=collection.label,
        K=collection.K,
        J=collection.lexicon.J,
        lexicon_id=collection.lexicon_id,
        excluded=len(log.excluded),
        table=str(table_path),
        exclusions=str(log_path),
    )
    _emit(
        args,
        summary,
        lambda: render_table(
            ["collection", "docs", "excluded", "table"],
            [[summary.label, summary.K, summary.excluded, summary.table]],
        ),
    )


def cmd_stats(args: argparse.Namespace) -> None:
    reports = []
    for path in args.collection:
        collection = _load(args, path)
        if args.first:
            collection = corpus_service.take(collection, args.first)
        reports.append(variability_service.chisq_v4(collection, args.min_expected))
    _emit(args, _one_or_many(reports), lambda: _variability_table(reports))


def cmd_cells(args: argparse.Namespace) -> None:
    labels, cells = [], []
    for path in args.collection:
        collection = _load(args, path)
        labels.append(collection.label)
        cells.append(variability_service.cell_stats(collection))

    def table() -> str:
        return render_table(
            ["collection", "cells", "E<1", "O<1", "mean E", "median E", "mean O", "median O"],
            [
                [
                    label,
                    s.n_cells,
                    s.frac_expected_below_1,
                    s.frac_observed_below_1,
                    s.mean_expected,
                    s.median_expected,
                    s.mean_observed,
                    s.median_observed,
                ]
                for label, s in zip(labels, cells)
            ],
        )

    _emit(args, _one_or_many(cells), table)


def cmd_merge(args: argparse.Namespace) -> None:
    collections = [_load(args, path) for path in args.collection]
    # A count table does not store its label; reloading names it after the file.
    label = args.label or (Path(args.out).stem if args.out else None)
    merged = variability_service.merge(collections, label)
    if args.out:
        corpus_service.save_counts(merged, args.out)
    reports = [variability_service.chisq_v4(c, args.min_expected) for c in collections]
    reports.append(variability_service.chisq_v4(merged, args.min_expected))
    _emit(args, reports, lambda: _variability_table(reports))


def _bootstrap_sides(args: argparse.Namespace) -> Tuple[Collection, Collection]:
    if args.within:
        if not args.collection:
            args.parser.error("--within requires --collection")
        collection = _load(args, args.collection)
        if args.within == "session":
            return bootstrap_service.split_session_halves(collection)
        if args.within == "decade":
            if not args.decades:
                args.parser.error("--within decade requires --decades")
            return bootstrap_service.split_decades(collection, *args.decades)
        if not args.ranges:
            args.parser.error("--within range requires --ranges")
        r = args.ranges
        return bootstrap_service.split_date_ranges(collection, (r[0], r[1]), (r[2], r[3]))
    if not (args.a and args.b):
        args.parser.error("give --a and --b, or --within with --collection")
    return _load(args, args.a), _load(args, args.b)


def cmd_bootstrap(args: argparse.Namespace) -> None:
    params = _build_model(
        BootstrapParams,
        "bootstrap",
        sample_size=args.sample_size or settings.bootstrap_sample_size,
        replicates=args.replicates or settings.bootstrap_replicates,
        with_replacement=not args.no_replacement,
        seed=parse_seed(args.seed),
    )
    side_a, side_b = _bootstrap_sides(args)
    comparison = bootstrap_service.compare_collections(
        side_a, side_b, params, args.min_expected
    )
    _emit(
        args,
        comparison,
        lambda: render_table(
            ["quantity", "value"],
            [
                [f"mean({side_a.label})", comparison.mean_a],
                [f"mean({side_b.label})", comparison.mean_b],
                [f"P({side_a.label} > {side_b.label})", comparison.prob_a_gt_b],
                [f"P({side_b.label} > {side_a.label})", comparison.prob_b_gt_a],
                ["P(tie)", comparison.prob_tie],
                ["95% CI low", comparison.ci_lo],
                ["95% CI high", comparison.ci_hi],
            ],
            digits=5,
        ),
    )


def cmd_crossval(args: argparse.Namespace) -> None:
    if args.pairs:
        collections = [_load(args, path) for path in args.pairs]
        if len(collections) < 2:
            args.parser.error("--pairs needs at least two count tables")
        results = [
            PairedCrossVal(
                a=a.label,
                b=b.label,
                report=classify_service.loo_crossval(a, b, args.method),
            )
            for a, b in itertools.combinations(collections, 2)
        ]
        payload: Any = results
    else:
        if not (args.a and args.b):
            args.parser.error("give --a and --b, or --pairs")
        a, b = _load(args, args.a), _load(args, args.b)
        results = [
            PairedCrossVal(
                a=a.label, b=b.label, report=classify_service.loo_crossval(a, b, args.method)
            )
        ]
        payload = results[0].report

    _emit(
        args,
        payload,
        lambda: render_table(
            ["A", "B", "A correct", "B correct"],
            [
                [p.a, p.b, p.report.ratio_a, p.report.ratio_b] for p in results
            ],
        ),
    )


def _trained_model(args: argparse.Namespace) -> SavedModel:
    lexicon = args.lexicon_obj
    if args.model:
        try:
            saved = SavedModel.model_validate_json(corpus_service.read_text(args.model))
        except PydanticValidationError as e:
            raise ValidationError("model", args.model, str(e.errors()[0].get("msg")))
        if tuple(saved.lexicon) != lexicon.words:
            raise LexiconMismatchError(lexicon.words, saved.lexicon, args.model)
        return saved
    if not (args.a and args.b):
        args.parser.error("give --a and --b to train, or --model")
    a, b = _load(args, args.a), _load(args, args.b)
    method = ClassifierMethod(args.method)
    if method == ClassifierMethod.naive_bayes:
        return SavedModel(
            method=method,
            lexicon=lexicon.words,
            nb_models=(classify_service.nb_train(a), classify_service.nb_train(b)),
        )
    model = classify_service.lin_train(a, b)
    return SavedModel(
        method=method,
        lexicon=lexicon.words,
        linear_model=model,
        top_words=classify_service.lin_top_words(model, lexicon, args.top_words),
    )


def cmd_predict(args: argparse.Namespace) -> None:
    saved = _trained_model(args)
    if args.save_model:
        Path(args.save_model).write_text(saved.model_dump_json(indent=2) + "\n", encoding="utf-8")
    target = _load(args, args.collection)
    predictions = classify_service.predict(target, saved.nb_models, saved.linear_model)
    _emit(
        args,
        predictions,
        lambda: render_table(["id", "label"], [[p.id, p.label] for p in predictions]),
    )


def cmd_outlier(args: argparse.Namespace) -> None:
    report = classify_service.outlier_rank(_load(args, args.collection), args.truth)

    def table() -> str:
        rows = sorted(report.per_doc, key=lambda e: e.rank)
        text = render_table(["rank", "id", "loglike"], [[e.rank, e.id, e.loglike] for e in rows])
        if report.score is not None:
            text += f"\nscore({report.outlier_id}) = {report.score:.1f}"
        return text

    _emit(args, report, table)


def cmd_planted(args: argparse.Namespace) -> None:
    report = classify_service.planted_outlier_experiment(
        _load(args, args.test), _load(args, args.decoy), args.plantings
    )
    _emit(
        args,
        report,
        lambda: render_table(
            ["test", "decoy", "n", "plantings", "average score"],
            [[
                report.test_label, report.decoy_label, report.n,
                len(report.scores), report.mean_score,
            ]],
            digits=1,
        ),
    )


def cmd_asymmetry(args: argparse.Namespace) -> None:
    report = classify_service.gaussian_asymmetry(
        args.mean, args.sd_a, args.sd_b, args.samples, parse_seed(args.seed)
    )
    _emit(
        args,
        report,
        lambda: render_table(
            ["source", "classified as A"],
            [["A", report.from_a], ["B", report.from_b], ["pooled", report.pooled]],
        ),
    )


def cmd_synth(args: argparse.Namespace) -> None:
    seed = parse_seed(args.seed)
    params = _build_model(
        SynthParams,
        "synth",
        n_docs=settings.synth_docs if args.docs is None else args.docs,
        words_per_doc=settings.synth_words if args.words is None else args.words,
        p_function=settings.synth_p_function if args.p_fn is None else args.p_fn,
        lexicon=args.lexicon_obj,
        seed=seed,
    )
    alternate = None
    if args.mix_p_fn is not None:
        alternate = _build_model(
            SynthParams, "synth", **{**params.model_dump(), "p_function": args.mix_p_fn}
        )
    if args.emit:
        synth_service.emit_corpus(params, args.emit, args.label)
    report = synth_service.null_experiment(params, args.runs, alternate)
    _emit(
        args,
        report,
        lambda: render_table(
            ["run", "V4"],
            [[k + 1, v] for k, v in enumerate(report.per_run)]
            + [["mean", report.mean_v4], ["sd", report.sd_v4]],
            digits=6,
        ),
    )


def _read_points(path: str) -> List[Tuple[float, float]]:
    text = corpus_service.read_text(path)
    reader = csv.DictReader(text.splitlines())
    if not reader.fieldnames or not {"x", "y"} <= set(reader.fieldnames):
        raise ValidationError("points", path, "CSV header must contain columns x and y")
    points = []
    for line_no, row in enumerate(reader, start=2):
        try:
            points.append((float(row["x"]), float(row["y"])))
        except (TypeError, ValueError):
            raise ValidationError("points", path, f"line {line_no}: x and y must be numbers")
    return points


def cmd_trend(args: argparse.Namespace) -> None:
    series = None
    if args.points:
        points = _read_points(args.points)
    elif args.collection:
        series = variability_service.decade_series(
            _load(args, args.collection), args.since, args.min_expected
        )
        points = [(p.midpoint, p.V4) for p in series.points]
    else:
        args.parser.error("give --points or --collection")
    fit = variability_service.trend_fit(points)
    report = TrendReport(fit=fit, slope_per_decade=fit.slope_per_decade, series=series)

    def table() -> str:
        rows: List[List[Any]] = []
        if series is not None:
            rows = [[f"{p.decade}s", p.K, p.V4] for p in series.points]
        text = render_table(["decade", "docs", "V4"], rows) if rows else ""
        summary = (
            f"slope = {fit.slope_per_decade:.5f} per decade, "
            f"p = {fit.p_value:.4f}, n = {fit.n_points}"
        )
        return f"{text}\n{summary}" if text else summary

    _emit(args, report, table)


# Parser


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicon", help="function-word list, one word per line")
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
    )
    return common


def _add_command(
    subparsers: Any,
    name: str,
    handler: Handler,
    common: argparse.ArgumentParser,
    help_text: str,
) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(name, parents=[common], help=help_text, description=help_text)
    parser.set_defaults(handler=handler, command_name=name, parser=parser)
    return parser


def _min_expected(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--min-expected",
        type=float,
        default=None,
        help="also omit chi-squared cells with expected count below this",
    )


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="stylescope",
        description="Function-word stylometry: variability statistics and authorship tests.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    p = _add_command(commands, "ingest", cmd_ingest, common, "count function words in texts")
    p.add_argument(
        "inputs", nargs="+", help="directory of .txt files, a manifest .json, or text files"
    )
    p.add_argument("--out", help="count table path (default <label>.csv)")
    p.add_argument("--label")
    p.add_argument("--min-words", type=int, default=None)
    p.add_argument("--chunk-size", type=int, default=None)
    p.add_argument("--section-pattern", help="regular expression matching section headings")
    p.add_argument("--strip-start", help="keep only text after this marker")
    p.add_argument("--strip-end", help="keep only text before this marker")
    p.add_argument(
        "--gutenberg", action="store_true", help="remove Project Gutenberg header/footer"
    )

    p = _add_command(commands, "stats", cmd_stats, common, "V1-V4 of count tables")
    p.add_argument("--collection", nargs="+", required=True)
    p.add_argument("--first", type=int, help="use only the first N documents")
    _min_expected(p)

    p = _add_command(commands, "cells", cmd_cells, common, "small-cell statistics")
    p.add_argument("--collection", nargs="+", required=True)

    p = _add_command(commands, "merge", cmd_merge, common, "combine collections")
    p.add_argument("--collection", nargs="+", required=True)
    p.add_argument("--label")
    p.add_argument("--out", help="write the merged count table here")
    _min_expected(p)

    p = _add_command(commands, "bootstrap", cmd_bootstrap, common, "compare V4 by resampling")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--collection", help="single collection split by --within")
    p.add_argument("--within", choices=["session", "decade", "range"])
    p.add_argument("--decades", type=int, nargs=2, metavar=("DECADE_A", "DECADE_B"))
    p.add_argument(
        "--ranges",
        type=dt.date.fromisoformat,
        nargs=4,
        metavar=("A_START", "A_END", "B_START", "B_END"),
    )
    p.add_argument("--sample-size", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--no-replacement", action="store_true")
    p.add_argument("--seed", required=True)
    _min_expected(p)

    classify = commands.add_parser("classify", help="authorship classifiers")
    tasks = classify.add_subparsers(dest="task", metavar="task")
    tasks.required = True
    methods = [m.value for m in ClassifierMethod]

    p = _add_command(tasks, "crossval", cmd_crossval, common, "leave-one-out cross-validation")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--pairs", nargs="+", help="run every pairing of these count tables")
    p.add_argument("--method", choices=methods, default=ClassifierMethod.naive_bayes.value)

    p = _add_command(tasks, "predict", cmd_predict, common, "label documents with a classifier")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--model", help="previously saved model JSON")
    p.add_argument("--collection", required=True)
    p.add_argument("--method", choices=methods, default=ClassifierMethod.naive_bayes.value)
    p.add_argument("--save-model")
    p.add_argument("--top-words", type=int, default=10)

    p = _add_command(tasks, "outlier", cmd_outlier, common, "rank documents by typicality")
    p.add_argument("--collection", required=True)
    p.add_argument("--truth", help="id of the known outlier to score")

    p = _add_command(tasks, "planted", cmd_planted, common, "planted-outlier experiment")
    p.add_argument("--test", required=True)
    p.add_argument("--decoy", required=True)
    p.add_argument("--plantings", type=int)

    p = _add_command(tasks, "asymmetry", cmd_asymmetry, common, "equal-mean Gaussian asymmetry")
    p.add_argument("--mean", type=float, default=5.0)
    p.add_argument("--sd-a", type=float, default=1.0)
    p.add_argument("--sd-b", type=float, default=1.1)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", required=True)

    p = _add_command(commands, "synth", cmd_synth, common, "null-text calibration of V4")
    p.add_argument("--docs", type=int, default=None)
    p.add_argument("--words", type=int, default=None)
    p.add_argument("--p-fn", type=float, default=None)
    p.add_argument("--mix-p-fn", type=float, default=None, help="second half of each run uses this")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", required=True)
    p.add_argument("--emit", help="also write one synthetic corpus to this directory")
    p.add_argument("--label", default="synth")

    p = _add_command(commands, "trend", cmd_trend, common, "least-squares trend of V4")
    p.add_argument("--points", help="CSV with columns x,y")
    p.add_argument("--collection", help="count table with dated documents")
    p.add_argument("--since", type=int, help="ignore documents before this year")
    _min_expected(p)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(args.log_level)
    command = args.command_name
    app_logger.info(f"Running {command}", extra={"event": "command_start", "command": command})
    try:
        args.lexicon_obj = corpus_service.load_lexicon(args.lexicon)
        args.handler(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except Exception as exc:
        return handle_cli_exception(exc, command)
    return 0
