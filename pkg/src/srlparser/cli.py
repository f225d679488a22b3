"""Command-line interface: train, predict, eval, oracle-check, analyze.

Exit codes: 0 on success, 1 on runtime failure, 2 on usage or input
format errors.
"""
from __future__ import annotations

import argparse
import sys

from .analyzer import analyze, bound_check, to_csv
from .config import build_run_config, parse_config_file
from .conll import (ConllFormatError, ConllSerializationError, read_conll_file,
                    write_conll_file)
from .graph import from_graph, to_graph
from .model import PointerNetwork, mode_for_sentence
from .scorer import EvalAlignmentError, score
from .training import predict_sentences, train
from .transitions import oracle, run as run_actions, serialize_actions
from .vectors import VectorFileError, load_context_vectors

USAGE_ERRORS = (ConllFormatError, ConllSerializationError, EvalAlignmentError,
                VectorFileError)


def _add_set_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override any config key (repeatable)")


def _collect_overrides(args: argparse.Namespace, keys: list[str]) -> dict:
    overrides: dict[str, object] = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    for item in getattr(args, "set", []):
        if "=" not in item:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, raw = item.partition("=")
        overrides[key.strip()] = raw.strip()
    return overrides


def _run_config(args: argparse.Namespace, keys: list[str]):
    file_values = parse_config_file(args.config) if getattr(args, "config", None) else {}
    overrides = _collect_overrides(args, keys)
    # --set values arrive as strings; route them through the file-value parser
    string_overrides = {k: v for k, v in overrides.items() if isinstance(v, str)}
    typed_overrides = {k: v for k, v in overrides.items() if not isinstance(v, str)}
    merged_strings = dict(file_values)
    merged_strings.update(string_overrides)
    return build_run_config(merged_strings, typed_overrides)


def cmd_train(args: argparse.Namespace) -> int:
    run = _run_config(args, ["train_path", "dev_path", "model_path", "vector_file",
                             "train_context", "dev_context", "log_path",
                             "seed", "epochs", "batch", "patience", "jobs"])
    if args.mode:
        run.mode = args.mode
    if not run.train_path or not run.dev_path:
        print("train: --train and --dev are required", file=sys.stderr)
        return 2
    train_sentences = read_conll_file(run.train_path)
    dev_sentences = read_conll_file(run.dev_path)
    log_handle = open(run.log_path, "w", encoding="utf-8") if run.log_path else None

    def log(line: str) -> None:
        print(line)
        if log_handle:
            log_handle.write(line + "\n")
            log_handle.flush()

    try:
        result = train(run, train_sentences, dev_sentences, log=log)
    finally:
        if log_handle:
            log_handle.close()
    print(f"best_epoch={result.best_epoch} best_dev_f1={result.best_f1:.2f}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    model = PointerNetwork.load(args.model)
    sentences = read_conll_file(args.input)
    contexts = None
    if args.context:
        contexts = load_context_vectors(args.context, sentences)
    repairs: dict[str, int] = {}
    predictions = predict_sentences(model, sentences, beam=args.beam,
                                    contexts=contexts, jobs=args.jobs,
                                    repairs=repairs)
    write_conll_file(args.output, predictions)
    if repairs.get("added_root_arcs"):
        print(f"repaired_root_arcs={repairs['added_root_arcs']}", file=sys.stderr)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    gold = read_conll_file(args.gold)
    pred = read_conll_file(args.pred)
    report = score(gold, pred)
    print(report.as_text())
    print()
    print(report.as_keyvalues())
    return 0


def cmd_oracle_check(args: argparse.Namespace) -> int:
    sentences = read_conll_file(args.data)
    failures = 0
    total_transitions = 0
    max_transitions = 0
    law_holds = True
    for index, sentence in enumerate(sentences):
        graph = to_graph(sentence)
        actions = oracle(graph)
        rebuilt = run_actions(actions, len(sentence))
        recovered = from_graph(rebuilt, sentence)
        total_transitions += len(actions)
        max_transitions = max(max_transitions, len(actions))
        if len(actions) != len(sentence) + graph.arc_count():
            law_holds = False
        original = [(f.predicate, f.sense, f.args) for f in sentence.frames]
        roundtrip = [(f.predicate, f.sense, f.args) for f in recovered.frames]
        if rebuilt != graph or original != roundtrip:
            failures += 1
            print(f"sentence {index}: round trip failed")
        if args.print_actions:
            print(f"# sentence {index}")
            sys.stdout.write(serialize_actions(actions))
    n_sent = len(sentences)
    mean = total_transitions / n_sent if n_sent else 0.0
    print(f"sentences={n_sent} failures={failures}")
    print(f"transitions_total={total_transitions} transitions_mean={mean:.2f} "
          f"transitions_max={max_transitions}")
    print(f"length_law_holds={'true' if law_holds else 'false'}")
    return 0 if failures == 0 else 1


def cmd_analyze(args: argparse.Namespace) -> int:
    sentences = read_conll_file(args.input)
    if args.model:
        model = PointerNetwork.load(args.model)
        predictions = predict_sentences(model, sentences, beam=args.beam, jobs=args.jobs)
        graphs = [to_graph(s) for s in predictions]
    else:
        graphs = [to_graph(s) for s in sentences]
    records, stats = analyze(graphs)
    csv_text = to_csv(records, stats)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    print(f"ratio={stats.ratio:.4f} slope={stats.slope:.4f} "
          f"max_transitions={stats.max_transitions}", file=sys.stderr)
    if args.bound is not None:
        ok = bound_check(records, args.bound)
        print(f"bound_{args.bound:g}n={'holds' if ok else 'violated'}", file=sys.stderr)
        if not ok:
            return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srlparser",
        description="Transition-based semantic role labeler with a pointer-network decoder")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a model")
    p_train.add_argument("--config", help="key = value configuration file")
    p_train.add_argument("--train", dest="train_path")
    p_train.add_argument("--dev", dest="dev_path")
    p_train.add_argument("--model", dest="model_path", help="checkpoint output path")
    p_train.add_argument("--mode", choices=["full", "gold-predicates"])
    p_train.add_argument("--vectors", dest="vector_file")
    p_train.add_argument("--train-context", dest="train_context")
    p_train.add_argument("--dev-context", dest="dev_context")
    p_train.add_argument("--log", dest="log_path")
    p_train.add_argument("--seed", type=int)
    p_train.add_argument("--epochs", type=int)
    p_train.add_argument("--batch", type=int)
    p_train.add_argument("--patience", type=int)
    p_train.add_argument("--jobs", type=int)
    _add_set_option(p_train)
    p_train.set_defaults(func=cmd_train)

    p_predict = sub.add_parser("predict", help="parse a file with a trained model")
    p_predict.add_argument("--model", required=True)
    p_predict.add_argument("--input", required=True)
    p_predict.add_argument("--output", required=True)
    p_predict.add_argument("--context", help="token-aligned context vector file")
    p_predict.add_argument("--beam", type=int)
    p_predict.add_argument("--jobs", type=int, default=1)
    p_predict.set_defaults(func=cmd_predict)

    p_eval = sub.add_parser("eval", help="score predictions against gold")
    p_eval.add_argument("gold")
    p_eval.add_argument("pred")
    p_eval.set_defaults(func=cmd_eval)

    p_oracle = sub.add_parser("oracle-check", help="verify the oracle round trip on a corpus")
    p_oracle.add_argument("data")
    p_oracle.add_argument("--print-actions", action="store_true")
    p_oracle.set_defaults(func=cmd_oracle_check)

    p_analyze = sub.add_parser("analyze", help="emit transition-count statistics")
    p_analyze.add_argument("--input", required=True)
    p_analyze.add_argument("--model", help="decode with this checkpoint instead of using gold")
    p_analyze.add_argument("--beam", type=int)
    p_analyze.add_argument("--jobs", type=int, default=1)
    p_analyze.add_argument("--csv", help="write records here instead of stdout")
    p_analyze.add_argument("--bound", type=float, help="check transitions <= bound * n")
    p_analyze.set_defaults(func=cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
