"""Command-line entry point.

Subcommands: extract, index, verify, translate, evaluate, serve.
Exit codes: 0 success/verified, 1 unverified/fallback, 2 error — so the tool
can be scripted inside translator pipelines.  A JSON config file (--config)
supplies defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import logging
import shlex
import sys
from pathlib import Path

from . import __version__
from .baselines import Strategy, run_strategy
from .candidates import ExternalGeneratorConfig
from .corpus import GOLD_COLUMNS, TermPair, load_documents, load_gold_corpus
from .errors import AcroverifyError
from .evaluation import evaluate, render_report
from .extraction import extract_corpus, read_records_tsv, write_records_tsv
from .index import build_index, load_index, save_index
from .mt import DictionaryBackend, EchoBackend, HttpBackend
from .pipeline import PipelineConfig, PipelinePath, run_batch, translate_term, write_predictions_tsv
from .service import create_app

EXIT_OK = 0
EXIT_UNVERIFIED = 1
EXIT_ERROR = 2

STRATEGY_NAMES = ("identity", "reverse", "mt", "pipeline", "gold")


def _add_backend_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("MT backend")
    group.add_argument("--backend", choices=("dictionary", "echo", "http"),
                       default="dictionary", help="MT backend to use")
    group.add_argument("--dict", dest="dict_path", metavar="TSV",
                       help="dictionary backend: source\\ttarget file")
    group.add_argument("--dict-from-gold", metavar="TSV",
                       help="seed the dictionary backend from a gold corpus TSV")
    group.add_argument("--overlay", action="append", default=[], metavar="TSV",
                       help="error-overlay dictionary file (repeatable; later wins)")
    group.add_argument("--endpoint", help="http backend: POST endpoint URL")
    group.add_argument("--auth-header", help="http backend: header name for MT_API_KEY")
    group.add_argument("--timeout", type=float, default=10.0, help="http backend timeout (s)")
    group.add_argument("--retries", type=int, default=2,
                       help="retries for retryable MT errors")
    group.add_argument("--max-in-flight", type=int, default=4,
                       help="http backend concurrent request cap")


def _add_generator_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("candidate generator")
    group.add_argument("--max-candidates", type=int, default=50,
                       help="n-best list size")
    group.add_argument("--max-interior", type=int, default=3,
                       help="max interior letters added to an initialism")
    group.add_argument("--external-cmd", metavar="CMD",
                       help="external generator command line (line protocol)")
    group.add_argument("--external-timeout", type=float, default=10.0,
                       help="external generator timeout (s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acroverify",
        description="Verify machine-translated acronym pairs against attested usage.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", metavar="JSON",
                        help="JSON config file; explicit flags win over it")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    subparsers = []

    p = sub.add_parser("extract", help="mine (LF, SF) records from documents")
    subparsers.append(p)
    p.add_argument("docs", help="directory of *.txt files or a JSONL file")
    p.add_argument("--out", required=True, help="output records TSV")
    p.add_argument("--relaxed", action="store_true",
                   help="also emit relaxed records for unaligned SFs")

    p = sub.add_parser("index", help="build and save a retrieval index")
    subparsers.append(p)
    p.add_argument("records", help="extraction records TSV")
    p.add_argument("--out", required=True, help="output index file")
    p.add_argument("--include-relaxed", action="store_true",
                   help="admit relaxed records into the index")

    p = sub.add_parser("verify", help="check one (LF, SF) pair against an index")
    subparsers.append(p)
    p.add_argument("--index", required=True, help="index file")
    p.add_argument("--lf", required=True, help="long form")
    p.add_argument("--sf", required=True, help="short form")
    p.add_argument("--k", type=int, default=2, help="verification threshold")

    p = sub.add_parser("translate", help="run the four-step pipeline on one term")
    subparsers.append(p)
    p.add_argument("--index", required=True, help="index file")
    p.add_argument("--fr-lf", required=True, help="French long form")
    p.add_argument("--fr-sf", required=True, help="French short form")
    p.add_argument("--k", type=int, default=2, help="verification threshold")
    p.add_argument("--format", choices=("json", "table"), default="table")
    _add_backend_flags(p)
    _add_generator_flags(p)

    p = sub.add_parser("evaluate", help="score strategies over a gold corpus")
    subparsers.append(p)
    p.add_argument("--gold", required=True, help="gold corpus TSV")
    p.add_argument("--index", required=True, help="index file")
    p.add_argument("--strategies", default="identity,reverse,mt,pipeline,gold",
                   help=f"comma-separated subset of {','.join(STRATEGY_NAMES)}")
    p.add_argument("--columns", help="gold column order, comma-separated "
                                     f"permutation of {','.join(GOLD_COLUMNS)}")
    p.add_argument("--k", type=int, default=2, help="verification threshold")
    p.add_argument("--format", choices=("table", "json", "tsv"), default="table")
    p.add_argument("--predictions-out", help="also write the prediction TSV here")
    _add_backend_flags(p)
    _add_generator_flags(p)

    p = sub.add_parser("serve", help="run the local HTTP service")
    subparsers.append(p)
    p.add_argument("--index", required=True, help="index file")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--k", type=int, default=2, help="verification threshold")
    p.add_argument("--static-dir", default="frontend/dist",
                   help="directory of built UI assets to serve under /")
    p.add_argument("--cors", action="store_true", help="enable localhost CORS (dev)")
    _add_backend_flags(p)
    _add_generator_flags(p)

    parser.all_parsers = [parser, *subparsers]
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    if "--config" not in argv:
        return
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        return  # argparse reports the missing value
    config = json.loads(Path(argv[idx + 1]).read_text(encoding="utf-8"))
    if not isinstance(config, dict):
        raise ValueError("config file must hold a JSON object")
    known = {action.dest for p in parser.all_parsers for action in p._actions}
    unknown = set(config) - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    # subparsers re-parse into a fresh namespace, so defaults must land on each
    for p in parser.all_parsers:
        p.set_defaults(**config)


def make_backend(args: argparse.Namespace, gold_path=None):
    if args.backend == "echo":
        return EchoBackend()
    if args.backend == "http":
        if not args.endpoint:
            raise AcroverifyError("http backend needs --endpoint")
        return HttpBackend(endpoint=args.endpoint, auth_header=args.auth_header,
                           timeout=args.timeout, max_in_flight=args.max_in_flight)
    gold_seed = args.dict_from_gold or gold_path
    if args.dict_path:
        return DictionaryBackend.from_tsv(args.dict_path, overlays=args.overlay)
    if gold_seed:
        return DictionaryBackend.from_gold(load_gold_corpus(gold_seed), overlays=args.overlay)
    raise AcroverifyError("dictionary backend needs --dict or --dict-from-gold")


def _pipeline_config(args: argparse.Namespace, backend) -> PipelineConfig:
    external = None
    if getattr(args, "external_cmd", None):
        external = ExternalGeneratorConfig(
            command=tuple(shlex.split(args.external_cmd)),
            timeout=args.external_timeout,
        )
    return PipelineConfig(
        backend=backend, k=args.k,
        max_candidates=args.max_candidates, max_interior=args.max_interior,
        use_external_generator=external is not None, external=external,
        retries=args.retries,
    )


def cmd_extract(args) -> int:
    docs = load_documents(args.docs)
    records = extract_corpus(docs, relaxed=args.relaxed)
    write_records_tsv(records, args.out)
    print(f"{len(records)} records from {len(docs)} documents -> {args.out}")
    return EXIT_OK


def cmd_index(args) -> int:
    records = read_records_tsv(args.records)
    index = build_index(records, include_relaxed=args.include_relaxed,
                        built_from=f"records from {args.records}")
    save_index(index, args.out)
    print(f"indexed {index.pair_count()} pairs over {index.doc_count} documents -> {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    index = load_index(args.index)
    result = index.verify(args.lf, args.sf, args.k)
    print(f"{result.status.value} (threshold {result.threshold}, "
          f"{len(result.sources)} source(s))")
    for doc_id in result.sources:
        print(f"  {doc_id}")
    return EXIT_OK if result.verified else EXIT_UNVERIFIED


def cmd_translate(args) -> int:
    index = load_index(args.index)
    backend = make_backend(args)
    config = _pipeline_config(args, backend)
    output = translate_term(TermPair(args.fr_lf, args.fr_sf, "fr"), index, config)
    if args.format == "json":
        from .service import _output_json

        print(json.dumps(_output_json(output), indent=2, sort_keys=True))
    else:
        badge = output.verification.status.value
        print(f"{output.en_lf} ({output.chosen_sf or '?'})  [{output.path.value}, {badge}]")
        if output.verification.sources:
            print("sources: " + ", ".join(output.verification.sources))
        for hyp, res in output.n_best:
            print(f"  {hyp.sf:<12} score={hyp.score:<5g} {hyp.origin.value:<18} "
                  f"{res.status.value} ({len(res.sources)})")
    return EXIT_OK if output.path is not PipelinePath.FALLBACK else EXIT_UNVERIFIED


def cmd_evaluate(args) -> int:
    names = [s.strip() for s in args.strategies.split(",") if s.strip()]
    unknown = [s for s in names if s not in STRATEGY_NAMES]
    if unknown:
        print(f"unknown strategy: {', '.join(unknown)}", file=sys.stderr)
        print(f"usage: --strategies with a comma-separated subset of "
              f"{','.join(STRATEGY_NAMES)}", file=sys.stderr)
        return EXIT_ERROR
    columns = tuple(args.columns.split(",")) if args.columns else GOLD_COLUMNS
    gold = load_gold_corpus(args.gold, columns=columns)
    index = load_index(args.index)
    needs_backend = {"mt", "pipeline"} & set(names)
    backend = make_backend(args, gold_path=args.gold) if needs_backend else None

    predictions = []
    batch_results = []
    for name in names:
        if name == "pipeline":
            results = run_batch(gold, index, _pipeline_config(args, backend))
            batch_results.extend(results)
            predictions.extend(r.prediction for r in results)
        else:
            predictions.extend(
                run_strategy(Strategy(name), gold, backend=backend, retries=args.retries)
            )
    report = evaluate(predictions, gold, index, k=args.k)
    print(render_report(report, args.format))
    if args.predictions_out:
        rows = [p for p in predictions if p.strategy is not Strategy.PIPELINE]
        write_predictions_tsv(args.predictions_out, rows + batch_results)
        print(f"predictions -> {args.predictions_out}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    index = load_index(args.index)
    backend = None
    try:
        backend = make_backend(args)
    except AcroverifyError:
        pass  # service still answers verify/sf lookups without a backend
    static_dir = Path(args.static_dir) if args.static_dir else None
    app = create_app(index, backend=backend, k=args.k,
                     max_candidates=args.max_candidates, max_interior=args.max_interior,
                     static_dir=static_dir, cors_localhost=args.cors)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except KeyboardInterrupt:
        return EXIT_OK
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


_COMMANDS = {
    "extract": cmd_extract,
    "index": cmd_index,
    "verify": cmd_verify,
    "translate": cmd_translate,
    "evaluate": cmd_evaluate,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad --config file: {exc}", file=sys.stderr)
        return EXIT_ERROR
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return _COMMANDS[args.command](args)
    except AcroverifyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
