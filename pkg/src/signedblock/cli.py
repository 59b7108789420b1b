"""Command-line entry point.

Subcommands: ``sample``, ``spectrum``, ``detect``, ``check``, ``experiment``
and ``summarize``. Each reads at most one input file and writes at most one
output file; the fully resolved configuration is echoed at the top of every
output file as ``# key=value`` lines. ``--config FILE`` supplies the same
keys as flat ``key=value`` lines; explicit flags win.

Exit codes: 0 success, 1 validation error / refusal / failed check, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

import numpy as np

from .errors import SizeLimitError, ValidationError
from .experiments import (
    DESK_K_GRID,
    DESK_TRIALS,
    PAPER_K_GRID,
    PAPER_TRIALS,
    ExperimentConfig,
    fmt_float,
    format_records,
    format_summary,
    read_records,
    run_sweep,
    summarize,
)
from .frustration import (
    eta1_balance_bruteforce,
    eta1_cheeger_report,
    eta2_index_bruteforce,
    sign_estimator,
)
from .graphcore import (
    adjacency,
    format_edgelist,
    normalized_laplacian,
    read_edgelist,
    unnormalized_laplacian,
)
from .models import BisectionSpec
from .sampler import Seed, sample_bisection
from .spectra import eigendecompose, eigenvalues

# keys that never change file contents
_NOT_ECHOED = {"config", "jobs"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text):
    return [int(x) for x in str(text).split(",") if x.strip()]


def _float_list(text):
    return [float(x) for x in str(text).split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="signedblock", description="Random signed graphs and their spectra.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="sample a two-community signed graph to an edge-list file")
    p.add_argument("--setting", choices=("dense", "sparse"))
    p.add_argument("--k", type=int)
    p.add_argument("--gamma1", type=float)
    p.add_argument("--gamma2", type=float)
    p.add_argument("--p", type=float, help="within-community probability (instead of --setting)")
    p.add_argument("--q", type=float, help="between-community probability (instead of --setting)")
    p.add_argument("--s", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("spectrum", help="write all eigenvalues of a graph matrix")
    p.add_argument("--in", dest="input")
    p.add_argument("--matrix", choices=("adjacency", "laplacian", "normalized"), default="normalized")
    p.add_argument("--out")

    p = sub.add_parser("detect", help="label nodes by the signs of the lowest Laplacian eigenvector")
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    p.add_argument("--allow-degenerate", action="store_true",
                   help="write labels even when the lowest eigenvalue is not simple")

    p = sub.add_parser("check", help="exhaustive frustration oracles and Cheeger inequalities")
    p.add_argument("--in", dest="input")
    p.add_argument("--oracle", choices=("all", "eta2", "eta1"), default="all")

    p = sub.add_parser("experiment", help="Monte Carlo sweep over community sizes and sign noise")
    p.add_argument("--setting", choices=("dense", "sparse"))
    p.add_argument("--k", type=_int_list, help="comma-separated community sizes")
    p.add_argument("--s", type=_float_list, default=[0.1], help="comma-separated sign-noise levels")
    p.add_argument("--gamma1", type=float, default=10.0)
    p.add_argument("--gamma2", type=float, default=1.0)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-nodes", type=int, default=5000)
    p.add_argument("--full-scale", action="store_true",
                   help="default to k = 50..2500 and 1000 trials instead of the desk-scale grid")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("summarize", help="per-cell statistics of a results CSV")
    p.add_argument("--in", dest="input")
    p.add_argument("--out")

    for sp in sub.choices.values():
        sp.add_argument("--config", help="flat key=value file supplying defaults for these flags")
    return parser


def _read_config(path) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(f"{path}: line {lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _apply_config(parser, argv):
    args = parser.parse_args(argv)
    if not args.config:
        return args
    values = _read_config(args.config)
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in values.items():
        if key in ("in", "input"):
            key = "input"
        if key not in actions or key in ("help", "config"):
            raise ValidationError(f"{args.config}: unknown key {key!r} for '{args.command}'")
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            low = value.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValidationError(f"{args.config}: {key} must be true or false, got {value!r}")
            defaults[key] = low in ("true", "1", "yes")
        else:
            try:
                defaults[key] = action.type(value) if action.type else value
            except (TypeError, ValueError):
                raise ValidationError(f"{args.config}: bad value for {key}: {value!r}") from None
            if action.choices and defaults[key] not in action.choices:
                raise ValidationError(f"{args.config}: {key} must be one of {list(action.choices)}")
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _render(value):
    if isinstance(value, (list, tuple)):
        return ",".join(_render(v) for v in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _echo(args) -> List[str]:
    items = sorted((k, v) for k, v in vars(args).items() if k not in _NOT_ECHOED)
    return [f"{k}={_render(v)}" for k, v in items]


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + ("in" if n == "input" else n.replace("_", "-")) for n in missing)
        raise ValidationError(f"missing required option(s): {flags}")


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _cmd_sample(args):
    _require(args, "k", "s", "seed", "out")
    if args.p is not None or args.q is not None:
        _require(args, "p", "q")
        if args.setting is not None:
            raise ValidationError("give either --setting with --gamma1/--gamma2, or --p/--q, not both")
        spec = BisectionSpec(args.k, args.p, args.q, args.s)
    else:
        _require(args, "setting", "gamma1", "gamma2")
        spec = BisectionSpec.from_setting(args.setting, args.k, args.gamma1, args.gamma2, args.s)
    args.p, args.q = spec.p, spec.q
    g, _ = sample_bisection(spec, Seed(args.seed, args.trial))
    _write(args.out, format_edgelist(g, _echo(args)))
    print(f"sampled n={g.n} nodes, {g.num_edges} edges -> {args.out}")
    return 0


_MATRICES = {"adjacency": adjacency, "laplacian": unnormalized_laplacian, "normalized": normalized_laplacian}


def _cmd_spectrum(args):
    _require(args, "input", "out")
    g = read_edgelist(args.input)
    w = eigenvalues(_MATRICES[args.matrix](g))
    lines = [f"# {c}" for c in _echo(args)] + ["index,eigenvalue"]
    lines += [f"{i + 1},{fmt_float(float(x))}" for i, x in enumerate(w)]
    _write(args.out, "\n".join(lines) + "\n")
    print(f"{args.matrix}: {w.size} eigenvalues in [{w[0]:.6g}, {w[-1]:.6g}] -> {args.out}")
    return 0


def _cmd_detect(args):
    _require(args, "input", "out")
    g = read_edgelist(args.input)
    summary = eigendecompose(normalized_laplacian(g))
    if not summary.simple and not args.allow_degenerate:
        raise ValidationError(
            f"lowest eigenvalue {summary.lambda1:.6g} is not simple (gap {summary.gap:.3g}); "
            "sgn(u1) is not well defined (use --allow-degenerate to write labels anyway)"
        )
    labels = sign_estimator(summary.u1)
    lines = [f"# {c}" for c in _echo(args)]
    lines.append(f"# lambda1={fmt_float(summary.lambda1)}")
    lines.append(f"# simple={'true' if summary.simple else 'false'}")
    lines += [f"{i},{int(lab)}" for i, lab in enumerate(labels)]
    _write(args.out, "\n".join(lines) + "\n")
    print(f"lambda1={summary.lambda1:.10g}; {int(np.sum(labels > 0))} nodes labeled +1 -> {args.out}")
    return 0


def _verdict(ok):
    return "pass" if ok else "FAIL"


def _cmd_check(args):
    _require(args, "input")
    g = read_edgelist(args.input)
    ok = True
    lam_norm = float(eigenvalues(normalized_laplacian(g))[0])
    lam_un = float(eigenvalues(unnormalized_laplacian(g))[0])
    print(f"n={g.n} edges={g.num_edges}")
    print(f"lambda1(normalized Laplacian)={lam_norm:.10g}")
    print(f"lambda1(Laplacian)={lam_un:.10g}")
    if args.oracle in ("all", "eta2"):
        rep = eta2_index_bruteforce(g)
        print(f"eta2(sigma)={rep.eta2_value:.10g}")
        print(f"[{_verdict(rep.holds[0])}] lambda1(normalized) <= eta2(sigma)")
        print(f"[{_verdict(rep.holds[1])}] eta2(sigma) <= sqrt(8 lambda1(normalized)) = {rep.cheeger_upper:.10g}")
        ok &= all(rep.holds)
    if args.oracle in ("all", "eta1"):
        deletions, balanced = eta1_balance_bruteforce(g)
        print(f"eta1 deletions={deletions} balanced={'yes' if balanced else 'no'}")
        rep1 = eta1_cheeger_report(g)
        print(f"eta1(sigma)={rep1.eta1_value:.10g}")
        print(f"[{_verdict(rep1.holds[0])}] lambda1(Laplacian)/2 = {rep1.lower:.10g} <= eta1(sigma)")
        print(f"[{_verdict(rep1.holds[1])}] eta1(sigma) <= sqrt(8 Delta lambda1(Laplacian)) = {rep1.upper:.10g}")
        ok &= all(rep1.holds)
    print("all inequalities hold" if ok else "some inequality failed")
    return 0 if ok else 1


def _cmd_experiment(args):
    _require(args, "setting", "seed", "out")
    k_grid = args.k or list(PAPER_K_GRID if args.full_scale else DESK_K_GRID)
    trials = args.trials or (PAPER_TRIALS if args.full_scale else DESK_TRIALS)
    args.k, args.trials = k_grid, trials
    if args.jobs < 1:
        raise ValidationError("--jobs must be at least 1")
    config = ExperimentConfig(
        setting=args.setting,
        k_grid=tuple(k_grid),
        gamma1=args.gamma1,
        gamma2=args.gamma2,
        s_grid=tuple(args.s),
        trials=trials,
        master_seed=args.seed,
        max_nodes=args.max_nodes,
    )
    records = run_sweep(config, jobs=args.jobs)
    _write(args.out, format_records(records, _echo(args)))
    print(f"{len(records)} trials -> {args.out}")
    return 0


def _cmd_summarize(args):
    _require(args, "input", "out")
    rows = summarize(read_records(args.input))
    _write(args.out, format_summary(rows, _echo(args)))
    print(f"{len(rows)} cells -> {args.out}")
    return 0


_COMMANDS = {
    "sample": _cmd_sample,
    "spectrum": _cmd_spectrum,
    "detect": _cmd_detect,
    "check": _cmd_check,
    "experiment": _cmd_experiment,
    "summarize": _cmd_summarize,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SizeLimitError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


def check(argv: Optional[List[str]] = None) -> int:
    """Shortcut for ``main(["check", *argv])``."""
    return main(["check", *(argv or [])])


if __name__ == "__main__":
    sys.exit(main())
