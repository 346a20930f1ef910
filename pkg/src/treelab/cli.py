"""Command-line workbench.

Subcommands::

    treelab gen   --seed S --n N --out data.arff
    treelab bin   --in marks.arff --out graded.arff [--columns A,B]
    treelab train --algo {id3,c45,cart} --in data.arff --model model.json
    treelab rules --model model.json
    treelab eval  --algo {id3,c45,cart} --in data.arff --k 10 --seed S [--json]

Exit status is 0 on success, 1 for usage errors and 2 for data errors.
The default seed is 1, or ``$TREELAB_SEED`` when set.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .dataset import bin_numeric_attributes, generate_synthetic, read_arff, write_arff
from .errors import TreelabError
from .evaluation import cross_validate, induce, make_config, render_report
from .tree import Algorithm, from_json, render_rules, to_json

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_seed() -> int:
    raw = os.environ.get("TREELAB_SEED")
    if raw is None or raw == "":
        return 1
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TREELAB_SEED must be an integer, got {raw!r}") from None


def _class_arg(value):
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        return value


def _add_algo_options(p):
    p.add_argument("--algo", required=True, type=str.lower, choices=["id3", "c45", "cart"])
    p.add_argument("--cf", type=float, help="C4.5 pruning confidence factor (default 0.25)")
    p.add_argument("--min-leaf", type=float, help="minimum leaf weight (default 2.0)")
    p.add_argument("--folds-internal", type=int, help="CART pruning folds (default 5)")
    p.add_argument("--no-1se", action="store_true", help="CART: pick the minimum-CV-error subtree")
    p.add_argument("--no-prune", action="store_true", help="skip post-pruning (C4.5, CART)")


def build_parser() -> _Parser:
    parser = _Parser(prog="treelab", description="ID3 / C4.5 / CART decision-tree workbench")
    parser.add_argument("--version", action="version", version=f"treelab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gen", help="write a synthetic student dataset")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int, default=90)
    p.add_argument("--out", required=True)

    p = sub.add_parser("bin", help="convert numeric mark columns to grade bands")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--columns", help="comma-separated attribute names (default: all numeric)")
    p.add_argument("--class", dest="class_attr", help="class attribute name or index (default: last)")

    p = sub.add_parser("train", help="induce a tree and save it as JSON")
    _add_algo_options(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--class", dest="class_attr")

    p = sub.add_parser("rules", help="print a saved model as indented rules")
    p.add_argument("--model", required=True)

    p = sub.add_parser("eval", help="k-fold cross-validation report")
    _add_algo_options(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--no-stratify", action="store_true")
    p.add_argument("--class", dest="class_attr")
    return parser


def _config(args, seed):
    algorithm = Algorithm.parse(args.algo)
    return algorithm, make_config(
        algorithm,
        confidence_factor=args.cf,
        min_leaf_weight=args.min_leaf,
        internal_folds=args.folds_internal,
        one_se_rule=False if args.no_1se else None,
        prune=False if args.no_prune else None,
        seed=seed,
    )


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        seed = args.seed if getattr(args, "seed", None) is not None else _default_seed()
        if args.command == "gen":
            if args.n < 1:
                raise UsageError("gen: --n must be at least 1")
            write_arff(generate_synthetic(seed, args.n), args.out)
        elif args.command == "bin":
            d = read_arff(args.input, _class_arg(args.class_attr))
            cols = args.columns.split(",") if args.columns else None
            write_arff(bin_numeric_attributes(d, cols), args.out)
        elif args.command == "train":
            algorithm, cfg = _config(args, seed)
            d = read_arff(args.input, _class_arg(args.class_attr))
            _write(args.model, to_json(induce(algorithm, d, cfg)))
        elif args.command == "rules":
            with open(args.model, encoding="utf-8") as fh:
                tree = from_json(fh.read())
            out.write(render_rules(tree))
        elif args.command == "eval":
            algorithm, cfg = _config(args, seed)
            d = read_arff(args.input, _class_arg(args.class_attr))
            if not 2 <= args.k <= len(d):
                raise UsageError(f"eval: --k must lie in [2, {len(d)}]")
            report = cross_validate(algorithm, d, args.k, seed, cfg, stratify=not args.no_stratify)
            out.write(report.to_json() if args.json else render_report(report))
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (TreelabError, ValueError) as exc:
        err.write(f"treelab: error: {exc}\n")
        return EXIT_DATA
    except OSError as exc:
        err.write(f"treelab: error: {exc.filename or ''}: {exc.strerror or exc}\n")
        return EXIT_DATA
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
