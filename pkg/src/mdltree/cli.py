"""Command-line entry point: ``mdltree grow | cv | discretize``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .data import DataFormatError, Dataset, load_csv, load_stem, serialize_data, serialize_names
from .datasets import resolve
from .discretize import apply_rules, fit_rules, format_rules, parse_rules
from .experiments import CvParams, FoldError, augment_irrelevant, compare_policies, discretization_experiment
from .metrics import Policy
from .reports import report_csv, report_markdown, scatter_csv
from .serialize import to_json, to_text
from .tree import GrowParams, error_percent, induce, n_leaves, tree_size


class Outputs:
    """Collect output files and publish them together.

    Files are written to temporaries next to their targets and renamed only
    once the run has finished; on failure the temporaries are removed.
    """

    def __init__(self):
        self._pending: list[tuple[str, str]] = []

    def add(self, path: str | os.PathLike, text: str):
        path = str(path)
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=".partial-", dir=os.path.dirname(os.path.abspath(path)))
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        self._pending.append((tmp, path))

    def commit(self):
        for tmp, path in self._pending:
            os.replace(tmp, path)
        self._pending = []

    def discard(self):
        for tmp, _ in self._pending:
            try:
                os.remove(tmp)
            except FileNotFoundError:
                pass
        self._pending = []

    @property
    def paths(self) -> list[str]:
        return [p for _, p in self._pending]


def _config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _header_lines(args) -> list[str]:
    return [f"mdltree {__version__}", f"command: {args.command}", "config: " + json.dumps(_config(args), sort_keys=True)]


def _load(args) -> tuple[Dataset, str]:
    if args.csv:
        if not args.class_column:
            raise SystemExit("error: --csv needs --class-column")
        return load_csv(args.csv, args.class_column), Path(args.csv).stem
    if not args.data:
        raise SystemExit("error: give --data STEM or --csv PATH")
    return resolve(args.data, seed=args.seed), Path(args.data.split(":")[-1]).name


def _grow_params(args, policy=None) -> GrowParams:
    return GrowParams(
        policy=policy or Policy.parse(args.policy),
        min_split_weight=args.min_split,
        prune_confidence=args.cf,
        pruning=not args.no_prune,
    )


def _policy_arg(text: str) -> str:
    try:
        return Policy.parse(text).value
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _policies_arg(text: str) -> list[str]:
    return [_policy_arg(t) for t in text.split(",") if t.strip()]


def _augment_arg(text: str) -> list[int]:
    parts = [int(t) for t in text.split(",")]
    if len(parts) not in (2, 3) or any(p < 0 for p in parts):
        raise argparse.ArgumentTypeError("expected NCONT,NDISC[,CARD]")
    return parts if len(parts) == 3 else parts + [10]


def cmd_grow(args, out: Outputs) -> int:
    D, name = _load(args)
    params = _grow_params(args)
    tree = induce(D, params)
    header = _header_lines(args)
    path = args.out or f"{name}.tree.json"
    out.add(path, to_json(tree, D.schema, {"lines": header}))
    if args.text:
        out.add(args.text, "".join(f"| {h}\n" for h in header) + to_text(tree, D.schema))
    print(to_text(tree, D.schema), end="")
    print(f"size={tree_size(tree)} leaves={n_leaves(tree)} "
          f"resubstitution_error={error_percent(tree, D):.2f}% policy={params.policy.value}")
    return 0


def cmd_cv(args, out: Outputs) -> int:
    D, name = _load(args)
    notes = []
    if args.augment:
        nc, nd, card = args.augment
        D = augment_irrelevant(D, nc, nd, card, seed=args.seed)
        name += "+"
        notes.append(f"augmented with {nc} irrelevant continuous and {nd} irrelevant "
                     f"{card}-valued discrete attributes ({nc + nd} in all)")
    cv = CvParams(args.folds, args.repeats, args.seed)
    policies = args.policies or [args.policy]
    report = compare_policies(D, policies, cv, _grow_params(args, Policy.REL8), name, notes)
    header = _header_lines(args)
    prefix = args.out or f"{name}.cv"
    md = report_markdown([report], header)
    out.add(f"{prefix}.csv", report_csv([report], header))
    out.add(f"{prefix}.md", md)
    print(md, end="")
    return 0


def cmd_discretize(args, out: Outputs) -> int:
    D, name = _load(args)
    header = _header_lines(args)
    if args.eval:
        cv = CvParams(args.folds, args.repeats, args.seed)
        trial = discretization_experiment(D, cv, _grow_params(args, Policy.REL8), name)
        prefix = args.out or f"{name}.discr"
        md = report_markdown([trial.report], header)
        out.add(f"{prefix}.csv", report_csv([trial.report], header))
        out.add(f"{prefix}.md", md)
        out.add(f"{prefix}.audit.txt", "".join(f"# {h}\n" for h in header) + "\n".join(trial.audit) + "\n")
        out.add(f"{prefix}.scatter.csv", scatter_csv([(name, len(D), trial.error_ratio)], header))
        print(md, end="")
        for line in trial.audit:
            print("audit:", line)
        print(f"discretized/local error ratio={trial.error_ratio:.4f}")
        return 0
    if args.rules:
        with open(args.rules) as f:
            rules = parse_rules(f.read(), D.schema)
    else:
        rules = fit_rules(D)
    text = format_rules(D.schema, rules, header)
    if args.rules_out:
        out.add(args.rules_out, text)
    print(text, end="")
    if args.out_stem:
        R = apply_rules(D, rules)
        out.add(f"{args.out_stem}.names", serialize_names(R.schema, header))
        out.add(f"{args.out_stem}.data", serialize_data(R, header))
    return 0


def _common(p: argparse.ArgumentParser):
    src = p.add_argument_group("data")
    src.add_argument("--data", help="dataset stem (reads STEM.names and STEM.data), a bundled "
                     "name such as iris, or synth:diabetes / synth:mixed / synth:flip-N")
    src.add_argument("--csv", help="CSV file with a header row (overrides --data)")
    src.add_argument("--class-column", help="class column name for --csv")
    p.add_argument("--seed", type=int, default=1, help="seed for every random choice (default 1)")
    p.add_argument("--min-split", type=float, default=2.0, help="minimum outcome weight (default 2)")
    p.add_argument("--cf", type=float, default=0.25, help="pruning confidence level (default 0.25)")
    p.add_argument("--no-prune", action="store_true", help="keep the unpruned tree")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdltree", description=__doc__)
    ap.add_argument("--version", action="version", version=f"mdltree {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("grow", help="induce one tree and write it out")
    _common(g)
    g.add_argument("--policy", type=_policy_arg, default="rel8", help="rel7, 7g, 7gs or rel8 (default rel8)")
    g.add_argument("--out", help="JSON tree file (default NAME.tree.json)")
    g.add_argument("--text", help="also write the indented text rendering here")
    g.set_defaults(func=cmd_grow)

    c = sub.add_parser("cv", help="repeated stratified cross-validation of one or more policies")
    _common(c)
    c.add_argument("--policy", type=_policy_arg, default="rel8")
    c.add_argument("--policies", type=_policies_arg, help="comma list; the first is the baseline")
    c.add_argument("--folds", type=int, default=10)
    c.add_argument("--repeats", type=int, default=10)
    c.add_argument("--augment", type=_augment_arg, metavar="NCONT,NDISC[,CARD]",
                   help="add irrelevant attributes before the trials")
    c.add_argument("--out", help="output prefix (writes PREFIX.csv and PREFIX.md)")
    c.set_defaults(func=cmd_cv)

    d = sub.add_parser("discretize", help="fit or apply global discretization rules")
    _common(d)
    d.add_argument("--rules", help="apply this rules file instead of fitting")
    d.add_argument("--rules-out", help="write fitted rules here")
    d.add_argument("--out-stem", help="write the rewritten dataset as STEM.names / STEM.data")
    d.add_argument("--eval", action="store_true", help="cross-validate discretized against local thresholds")
    d.add_argument("--folds", type=int, default=10)
    d.add_argument("--repeats", type=int, default=10)
    d.add_argument("--out", help="output prefix for --eval")
    d.set_defaults(func=cmd_discretize)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Outputs()
    try:
        status = args.func(args, out)
    except (DataFormatError, FoldError, OSError, ValueError) as e:
        out.discard()
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BaseException:
        out.discard()
        raise
    out.commit()
    return status


if __name__ == "__main__":
    sys.exit(main())
