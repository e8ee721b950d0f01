"""Command-line surface tying the pipeline together.

Subcommands: index, search, eval, stem, stopwords, pool, judge-serve,
and grid (the ablation runner over preprocessing strategies x fields x
models).  Every subcommand writes deterministic artifacts: identical
inputs and flags give byte-identical outputs, with wall-clock times
confined to a sidecar log.

Exit codes: 0 success, 2 validation/usage error, 1 internal error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import io
import json
import sys
import traceback
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import corpus as corpus_mod
from . import ireval, pool as pool_mod, stopwords as stopwords_mod
from .index import InvertedIndex, icf
from .rank import MODEL_CHOICES, RankParams, search, search_topics
from .stemmer import SuffixTable, VARIANTS, stem
from .textnorm import NormConfig, STEMMER_CHOICES, normalize

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

STRATEGY_FLAGS = {
    "no_apostrophes": {"strip_apostrophes": True},
    "no_accents": {"fold_accents": True},
    "no_hyphens": {"split_hyphens": True},
    "no_stopwords": {"remove_stopwords": True},
    "stem_light": {"stemmer": "light"},
    "stem_moderate": {"stemmer": "moderate"},
    "stem_heavy": {"stemmer": "heavy"},
}


def strategy_config(strategy: str, max_token_len: int = 60) -> NormConfig:
    """Translate a strategy token like ``no_hyphens+no_stopwords``."""
    fields: Dict[str, object] = {"max_token_len": max_token_len}
    if strategy != "baseline":
        for part in strategy.split("+"):
            if part == "baseline":
                continue
            if part not in STRATEGY_FLAGS:
                raise ValueError(
                    f"unknown strategy part {part!r}; valid parts: "
                    f"baseline, {', '.join(sorted(STRATEGY_FLAGS))}"
                )
            fields.update(STRATEGY_FLAGS[part])
    return NormConfig(**fields)


def _add_norm_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("preprocessing")
    group.add_argument("--norm-config", metavar="FILE",
                       help="key=value preprocessing config; flags override")
    group.add_argument("--strip-apostrophes", action="store_true", default=None)
    group.add_argument("--fold-accents", action="store_true", default=None)
    group.add_argument("--split-hyphens", action="store_true", default=None)
    group.add_argument("--remove-stopwords", action="store_true", default=None)
    group.add_argument("--stem", choices=STEMMER_CHOICES, default=None)
    group.add_argument("--max-token-len", type=int, default=None)


def _norm_config_from_args(args: argparse.Namespace) -> NormConfig:
    base = NormConfig.from_file(args.norm_config) if args.norm_config else NormConfig()
    fields = base.to_dict()
    overrides = {
        "strip_apostrophes": args.strip_apostrophes,
        "fold_accents": args.fold_accents,
        "split_hyphens": args.split_hyphens,
        "remove_stopwords": args.remove_stopwords,
        "stemmer": args.stem,
        "max_token_len": args.max_token_len,
    }
    for key, value in overrides.items():
        if value is not None:
            fields[key] = value
    return NormConfig.from_dict(fields)


def _add_rank_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("ranking")
    group.add_argument("--model", choices=MODEL_CHOICES, default="bm25")
    group.add_argument("--k1", type=float, default=1.2)
    group.add_argument("--b", type=float, default=0.75)
    group.add_argument("--mu", type=float, default=2500.0)
    group.add_argument("--lambda", dest="lambda_", type=float, default=0.15)


def _rank_params(args: argparse.Namespace, model: Optional[str] = None) -> RankParams:
    return RankParams(
        model=model or args.model, k1=args.k1, b=args.b, mu=args.mu, lambda_=args.lambda_
    )


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_stem(args) -> int:
    table = SuffixTable.load(args.suffix_table) if args.suffix_table else None
    for word in args.words:
        print(stem(word.lower(), args.variant, table))
    return EXIT_OK


def cmd_index(args) -> int:
    config = _norm_config_from_args(args)
    docs = corpus_mod.parse_documents(args.docs)
    index = InvertedIndex.build(docs, args.field, config)
    index.save(args.out)
    stats = index.stats()
    print(
        f"indexed {stats.n_docs} documents, field={args.field}, "
        f"config={config.label()}: {stats.vocab_size} distinct terms, "
        f"{stats.total_tokens} tokens"
    )
    if args.baseline_terms:
        print(f"icf vs baseline: {icf(args.baseline_terms, stats.vocab_size):.2f}%")
    return EXIT_OK


def cmd_search(args) -> int:
    index = InvertedIndex.load(args.index)
    params = _rank_params(args)
    if args.query is not None:
        ranked = search(index, args.query, params, args.k, topic_id=args.topic_id)
        if ranked.empty_query:
            print("warning: query is empty after preprocessing", file=sys.stderr)
        entries = ranked.to_run_entries(args.run_tag)
    else:
        topics = corpus_mod.parse_topics(args.topics)
        entries = search_topics(index, topics, params, args.k, args.run_tag)
    buf = io.StringIO()
    corpus_mod.write_run(entries, buf)
    _write_or_print(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    run = corpus_mod.parse_run(args.run)
    qrels = corpus_mod.parse_qrels(args.qrels)
    cutoffs = tuple(int(c) for c in args.cutoffs.split(","))
    report = ireval.evaluate_run(
        run,
        qrels,
        cutoffs=cutoffs,
        gain=args.gain,
        run_tag=Path(args.run).name,
        qrels_tag=Path(args.qrels).name,
    )
    if args.out_csv:
        Path(args.out_csv).write_text(ireval.render_csv(report), encoding="utf-8")
    text = ireval.render_text(report)
    _write_or_print(text, args.out_txt)
    if args.out_txt:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_stopwords(args) -> int:
    config = _norm_config_from_args(args)
    documents = corpus_mod.parse_documents(args.docs)
    token_streams = []
    for doc in documents:
        tokens = normalize(doc.field(args.field), config)
        if not args.keep_numbers:
            tokens = [t for t in tokens if any(ch.isalpha() for ch in t)]
        token_streams.append(tokens)
    detector = stopwords_mod.StopwordDetector(token_streams)
    candidates = detector.rank(args.method, args.top)
    lines = [f"{term}\n" for term in candidates]
    _write_or_print("".join(lines), args.out)
    if args.truth:
        truth = stopwords_mod.StopwordList.load(args.truth, args.variants)
        cutoffs = tuple(int(c) for c in args.cutoffs.split(","))
        cutoffs = tuple(c for c in cutoffs if c <= args.top)
        table = stopwords_mod.precision_at(candidates, truth, cutoffs)
        print(f"method={args.method}")
        for cutoff in cutoffs:
            print(f"P@{cutoff} = {table[cutoff]:.4f}")
    return EXIT_OK


def cmd_pool(args) -> int:
    index = InvertedIndex.load(args.index)
    topics = corpus_mod.parse_topics(args.topics)
    pools = pool_mod.build_pools(
        topics,
        index,
        params_a=_rank_params(args, args.model_a),
        params_b=_rank_params(args, args.model_b),
        depth=args.depth,
    )
    pool_mod.save_pools(pools, args.out, source_tags=(args.model_a, args.model_b))
    for p in pools:
        flag = "  [empty pool]" if p.empty else ""
        print(f"topic {p.topic_id}: {len(p.docnos)} documents{flag}")
    return EXIT_OK


def cmd_judge_serve(args) -> int:
    import uvicorn

    from .judge import JudgmentStore
    from .judgeapp import JudgeConfig, JudgeService, create_app

    topics = corpus_mod.parse_topics(args.topics)
    pools = pool_mod.load_pools(args.pools)
    documents = None
    if args.docs:
        documents = {d.docno: d for d in corpus_mod.parse_documents(args.docs)}
    service = JudgeService(
        topics, pools, JudgmentStore(args.state), JudgeConfig.load(args.config), documents
    )
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


# ---------------------------------------------------------------------------
# the ablation grid
# ---------------------------------------------------------------------------

def _load_grid_config(path: str) -> dict:
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    if raw.get("version") != 1:
        raise ValueError(f"grid config version must be 1, got {raw.get('version')!r}")
    for key in ("docs", "topics", "qrels"):
        if key not in raw:
            raise ValueError(f"grid config is missing {key!r}")
    base = Path(path).parent
    cfg = {
        "docs": str((base / raw["docs"]).resolve()),
        "topics": str((base / raw["topics"]).resolve()),
        "qrels": str((base / raw["qrels"]).resolve()),
        "fields": list(raw.get("fields", ["title"])),
        "models": list(raw.get("models", list(MODEL_CHOICES))),
        "strategies": list(raw.get("strategies", ["baseline"])),
        "cutoffs": [int(c) for c in raw.get("cutoffs", [5, 10, 20])],
        "k": int(raw.get("k", 100)),
        "gain": raw.get("gain", "linear"),
    }
    for model in cfg["models"]:
        if model not in MODEL_CHOICES:
            raise ValueError(f"unknown model {model!r} in grid config")
    for strategy in cfg["strategies"]:
        strategy_config(strategy)  # validates
    if "baseline" not in cfg["strategies"]:
        cfg["strategies"].insert(0, "baseline")
    return cfg


def _file_sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _cell_id(cfg: dict, inputs_hash: str, field: str, strategy: str, model: str) -> str:
    payload = json.dumps(
        {
            "inputs": inputs_hash,
            "field": field,
            "strategy": strategy,
            "model": model,
            "k": cfg["k"],
            "cutoffs": cfg["cutoffs"],
            "gain": cfg["gain"],
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _run_strategy(
    cfg: dict,
    documents: List[corpus_mod.Document],
    topics,
    qrels,
    field: str,
    strategy: str,
    inputs_hash: str,
    out_dir: Path,
    force: bool,
) -> List[dict]:
    """Index once per (field, strategy), then run and score every model."""
    results = []
    pending = []
    for model in cfg["models"]:
        cell = _cell_id(cfg, inputs_hash, field, strategy, model)
        cell_path = out_dir / "cells" / f"{cell}.json"
        if cell_path.exists() and not force:
            results.append(json.loads(cell_path.read_text(encoding="utf-8")))
        else:
            pending.append((model, cell, cell_path))
    if not pending:
        return results

    config = strategy_config(strategy)
    index = InvertedIndex.build(documents, field, config)
    for model, cell, cell_path in pending:
        params = RankParams(model=model)
        tag = f"{field}.{strategy}.{model}"
        entries = search_topics(index, topics, params, cfg["k"], tag)
        run_path = out_dir / "runs" / f"{tag}.run"
        run_path.parent.mkdir(parents=True, exist_ok=True)
        corpus_mod.write_run(entries, run_path)
        report = ireval.evaluate_run(
            entries, qrels, cutoffs=cfg["cutoffs"], gain=cfg["gain"], run_tag=tag
        )
        payload = {
            "cell": cell,
            "field": field,
            "strategy": strategy,
            "model": model,
            "metrics": {name: report.means[name] for name in report.metric_names},
            "skipped_topics": report.skipped_topics,
            "vocab_size": index.vocab_size,
        }
        cell_path.parent.mkdir(parents=True, exist_ok=True)
        cell_path.write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        results.append(payload)
    return results


def _render_grid_report(cfg: dict, cells: List[dict]) -> Tuple[str, str]:
    """Aligned-text and CSV reports; '-' marks cells below the baseline."""
    metric_names = (
        [f"P@{k}" for k in cfg["cutoffs"]]
        + [f"MAP@{k}" for k in cfg["cutoffs"]]
        + [f"NDCG@{k}" for k in cfg["cutoffs"]]
        + ["MAP", "NDCG"]
    )
    by_key = {(c["field"], c["strategy"], c["model"]): c for c in cells}

    text_lines: List[str] = []
    csv_lines = ["field,strategy,model," + ",".join(metric_names) + ",below_baseline"]
    width = 11
    for field in cfg["fields"]:
        header = (
            f"{'strategy':<28}{'model':<14}"
            + "".join(n.rjust(width) for n in metric_names)
        )
        text_lines.append(f"== field: {field} (k={cfg['k']}, gain={cfg['gain']}; "
                          f"'-' marks scores below baseline) ==")
        text_lines.append(header)
        text_lines.append("-" * len(header))
        for strategy in cfg["strategies"]:
            for model in cfg["models"]:
                cell = by_key[(field, strategy, model)]
                base = by_key[(field, "baseline", model)]
                row = f"{strategy:<28}{model:<14}"
                below = []
                for name in metric_names:
                    value = cell["metrics"][name]
                    flag = "-" if value < base["metrics"][name] - 1e-12 else ""
                    row += (format(value, ".4f") + flag).rjust(width)
                    if flag:
                        below.append(name)
                text_lines.append(row)
                csv_lines.append(
                    f"{field},{strategy},{model},"
                    + ",".join(format(cell["metrics"][n], ".4f") for n in metric_names)
                    + ","
                    + ";".join(below)
                )
            text_lines.append("")

        # baseline-relative deltas of each strategy's best value per metric
        text_lines.append(f"-- best-model gain over baseline (%), field: {field} --")
        delta_header = f"{'strategy':<28}" + "".join(n.rjust(width) for n in metric_names)
        text_lines.append(delta_header)
        for strategy in cfg["strategies"]:
            if strategy == "baseline":
                continue
            row = f"{strategy:<28}"
            for name in metric_names:
                best = max(
                    by_key[(field, strategy, m)]["metrics"][name] for m in cfg["models"]
                )
                base_best = max(
                    by_key[(field, "baseline", m)]["metrics"][name] for m in cfg["models"]
                )
                delta = 100.0 * (best - base_best) / base_best if base_best else 0.0
                row += format(delta, "+.2f").rjust(width)
            text_lines.append(row)
        text_lines.append("")

        # index compression factors per strategy (distinct-term reduction)
        text_lines.append(f"-- index compression vs baseline (%), field: {field} --")
        base_vocab = by_key[(field, "baseline", cfg["models"][0])]["vocab_size"]
        for strategy in cfg["strategies"]:
            vocab = by_key[(field, strategy, cfg["models"][0])]["vocab_size"]
            text_lines.append(
                f"{strategy:<28}{vocab:>8} terms   icf={icf(base_vocab, vocab):6.2f}%"
            )
        text_lines.append("")
    return "\n".join(text_lines) + "\n", "\n".join(csv_lines) + "\n"


def cmd_grid(args) -> int:
    cfg = _load_grid_config(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "cells").mkdir(exist_ok=True)

    inputs_hash = hashlib.sha256(
        (
            _file_sha256(cfg["docs"])
            + _file_sha256(cfg["topics"])
            + _file_sha256(cfg["qrels"])
        ).encode("ascii")
    ).hexdigest()

    documents = list(corpus_mod.parse_documents(cfg["docs"]))
    topics = corpus_mod.parse_topics(cfg["topics"])
    qrels = corpus_mod.parse_qrels(cfg["qrels"])

    tasks = [(field, strategy) for field in cfg["fields"] for strategy in cfg["strategies"]]
    cells: List[dict] = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=args.workers) as executor:
        futures = [
            executor.submit(
                _run_strategy, cfg, documents, topics, qrels, field, strategy,
                inputs_hash, out_dir, args.force,
            )
            for field, strategy in tasks
        ]
        for future in concurrent.futures.as_completed(futures):
            cells.extend(future.result())

    cells.sort(key=lambda c: (c["field"], c["strategy"], c["model"]))
    text, csv_text = _render_grid_report(cfg, cells)
    (out_dir / "report.txt").write_text(text, encoding="utf-8")
    (out_dir / "report.csv").write_text(csv_text, encoding="utf-8")
    print(text, end="")
    print(f"grid complete: {len(cells)} cells -> {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tetunir",
        description="Tetun ad-hoc retrieval workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stem", help="stem words with a chosen variant")
    p.add_argument("--variant", choices=VARIANTS, default="light")
    p.add_argument("--suffix-table", help="custom suffix table file")
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_stem)

    p = sub.add_parser("index", help="build an inverted index")
    p.add_argument("--docs", required=True)
    p.add_argument("--field", choices=("title", "content"), default="title")
    p.add_argument("--out", required=True)
    p.add_argument("--baseline-terms", type=int, default=None,
                   help="report the compression factor against this term count")
    _add_norm_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="run queries against an index")
    p.add_argument("--index", required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--query")
    source.add_argument("--topics")
    p.add_argument("--topic-id", type=int, default=0)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--run-tag", default="tetunir")
    p.add_argument("--out")
    _add_rank_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("eval", help="evaluate a run against qrels")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--cutoffs", default="5,10,20")
    p.add_argument("--gain", choices=ireval.GAIN_CHOICES, default="linear")
    p.add_argument("--out-csv")
    p.add_argument("--out-txt")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stopwords", help="detect stopword candidates")
    p.add_argument("--docs", required=True)
    p.add_argument("--field", choices=("title", "content"), default="content")
    p.add_argument("--method", choices=stopwords_mod.RANK_METHODS, default="in_degree")
    p.add_argument("--top", type=int, default=1000)
    p.add_argument("--out")
    p.add_argument("--truth", help="ground-truth stopword list for P@n scoring")
    p.add_argument("--variants", help="variant map for the ground-truth list")
    p.add_argument("--cutoffs", default="10,25,50,75,100,250,500,750,1000")
    p.add_argument("--keep-numbers", action="store_true",
                   help="keep wholly numeric tokens (dropped by default here)")
    _add_norm_flags(p)
    p.set_defaults(func=cmd_stopwords)

    p = sub.add_parser("pool", help="build assessment pools by interleaving two models")
    p.add_argument("--index", required=True)
    p.add_argument("--topics", required=True)
    p.add_argument("--depth", type=int, default=100)
    p.add_argument("--out", required=True)
    p.add_argument("--model-a", choices=MODEL_CHOICES, default="bm25")
    p.add_argument("--model-b", choices=MODEL_CHOICES, default="dirichlet_lm")
    _add_rank_flags(p)
    p.set_defaults(func=cmd_pool)

    p = sub.add_parser("judge-serve", help="run the relevance-judgment service")
    p.add_argument("--topics", required=True)
    p.add_argument("--pools", required=True)
    p.add_argument("--docs", help="document collection for pool display")
    p.add_argument("--state", required=True, help="journal/state directory")
    p.add_argument("--config", required=True, help="assessor token config (JSON)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8099)
    p.set_defaults(func=cmd_judge_serve)

    p = sub.add_parser("grid", help="run the preprocessing/model ablation grid")
    p.add_argument("--config", required=True, help="grid config (TOML)")
    p.add_argument("--out", default="grid-out")
    p.add_argument("--workers", type=int, default=2)
    p.add_argument("--force", action="store_true", help="recompute cached cells")
    p.set_defaults(func=cmd_grid)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (corpus_mod.ParseError, corpus_mod.ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
