"""Command-line front end.

Every subcommand builds one report dictionary. ``--json`` prints it as JSON;
otherwise it is flattened to ``key = value`` lines, so both renderings carry
the same values. Exit status: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .engine import (RULES, check_schedule, execute_schedule, format_schedule, parse_schedule,
                     parse_strategy, plan_schedule)
from .exceptions import CliqueCapExceeded, CompletionError, ParseError
from .graph import DEFAULT_CLIQUE_CAP, format_graph, is_chordal, maximal_cliques, parse_graph
from .linalg import ABS_TOL, REL_TOL, Tolerance
from .partial import (check_partial_positive, clique_inertia_profile, format_dense,
                      format_entry, format_partial_matrix, parse_partial_matrix)
from .witnesses import (DEFAULT_PHASES, DEFAULT_RESOLUTION, completion_number_lower_bound,
                        family_Gn, make_certificate, verify_witness_lower_bound)

PROG = "completion-number"

OK, FAILED, INPUT_ERROR = 0, 1, 2

_GLOBAL_DEFAULTS = {
    "tol": ABS_TOL,
    "rel_tol": REL_TOL,
    "seed": 0,
    "json": False,
    "clique_cap": DEFAULT_CLIQUE_CAP,
    "rule": "distance",
    "timing": False,
}


class _InputError(Exception):
    pass


def _global_options() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help=f"absolute zero-eigenvalue threshold (default {ABS_TOL:g})")
    g.add_argument("--rel-tol", type=float, default=argparse.SUPPRESS,
                   help=f"threshold relative to the Gershgorin bound (default {REL_TOL:g})")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help="seed for randomized search; all current strategies are deterministic")
    g.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="print the report as JSON")
    g.add_argument("--clique-cap", type=int, default=argparse.SUPPRESS,
                   help=f"maximal clique limit (default {DEFAULT_CLIQUE_CAP})")
    g.add_argument("--rule", choices=RULES, default=argparse.SUPPRESS,
                   help="ledger rule for schedules (default distance)")
    g.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                   help="add wall-clock time to the report (breaks byte-identity)")
    return p


def _strategy(text):
    try:
        parse_strategy(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _placement(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"placement {text!r} is not a comma list") from None


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(prog=PROG, parents=[common],
                                     description="Completion numbers of partial Hermitian "
                                                 "matrix patterns.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, description=help_)

    p = add("chordal", "chordality test with a PEO or a chordless cycle")
    p.add_argument("graph")
    p = add("cliques", "list the maximal cliques")
    p.add_argument("graph")
    p = add("check", "check partial positivity")
    p.add_argument("matrix")
    p.add_argument("--mode", default="psd", choices=["pd", "psd"])
    p = add("profile", "inertia of every maximal-clique submatrix")
    p.add_argument("matrix")
    p = add("plan", "plan an edge-insertion schedule")
    p.add_argument("graph")
    p.add_argument("--strategy", type=_strategy, default="auto",
                   help="auto, exhaustive, greedy or beam=N")
    p.add_argument("--output", help="write the schedule text to this file")
    p = add("complete", "complete a partial matrix along a schedule")
    p.add_argument("matrix")
    p.add_argument("--schedule", help="schedule file; planned when omitted")
    p.add_argument("--strategy", type=_strategy, default="auto")
    p.add_argument("--output", help="write the completed matrix to this file")
    p = add("bound", "bracket the completion number of a graph")
    p.add_argument("graph")
    p.add_argument("--strategy", type=_strategy, default="auto")
    p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    p.add_argument("--phases", type=int, default=DEFAULT_PHASES)
    p = add("witness", "emit witness instances")
    p.add_argument("family", choices=["gn"])
    p.add_argument("n", type=int)
    p.add_argument("--output-dir", default=".")
    p = add("verify", "verify a gadget lower-bound certificate")
    p.add_argument("matrix")
    p.add_argument("--placements", type=_placement, nargs="+", required=True,
                   metavar="A,B,C,D")
    p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    p.add_argument("--phases", type=int, default=DEFAULT_PHASES)
    return parser


# -- helpers -------------------------------------------------------------------


class _Inputs:
    """Reads input files and records their digests in order."""

    def __init__(self):
        self.digests = []

    def read(self, path) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise _InputError(f"{path}: {exc.strerror or exc}") from None
        self.digests.append({"path": str(path), "sha256": hashlib.sha256(data).hexdigest()})
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            raise _InputError(f"{path}: not UTF-8 text") from None

    def parse(self, path, parser):
        text = self.read(path)
        try:
            return parser(text)
        except ParseError as exc:
            raise _InputError(f"{path}: {exc}") from None
        except CompletionError as exc:
            raise _InputError(f"{path}: {exc}") from None


def _write(path, text) -> dict:
    data = text.encode("utf-8")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_bytes(data)
    return {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _matrix_rows(m) -> list[list[str]]:
    n = m.shape[0]
    return [[format_entry(complex(m[i, j].real, 0.0) if i == j else complex(m[i, j]))
             for j in range(n)] for i in range(n)]


# -- subcommands -----------------------------------------------------------------


def _cmd_chordal(args, inputs, tol):
    g = inputs.parse(args.graph, parse_graph)
    r = is_chordal(g)
    return OK, {"n": g.n, "chordal": r.is_chordal,
                "peo": list(r.peo) if r.peo else None,
                "hole": list(r.hole) if r.hole else None}


def _cmd_cliques(args, inputs, tol):
    g = inputs.parse(args.graph, parse_graph)
    cs = maximal_cliques(g, args.clique_cap)
    return OK, {"n": g.n, "count": len(cs), "cliques": cs.as_lists()}


def _cmd_check(args, inputs, tol):
    a = inputs.parse(args.matrix, parse_partial_matrix)
    r = check_partial_positive(a, args.mode, tol, args.clique_cap)
    return (OK if r.ok else FAILED), {
        "mode": r.mode,
        "partial_positive": r.ok,
        "failing_clique": list(r.failing_clique) if r.failing_clique else None,
        "failing_inertia": r.failing_inertia.to_dict() if r.failing_inertia else None,
    }


def _cmd_profile(args, inputs, tol):
    a = inputs.parse(args.matrix, parse_partial_matrix)
    return OK, clique_inertia_profile(a, tol, args.clique_cap).to_dict()


def _cmd_plan(args, inputs, tol):
    g = inputs.parse(args.graph, parse_graph)
    s = plan_schedule(g, args.strategy, args.clique_cap, args.rule)
    results = {"predicted_bound": s.final_bound, "schedule": s.to_dict()}
    if args.output:
        results["output"] = _write(args.output, format_schedule(s))
    return OK, results


def _cmd_complete(args, inputs, tol):
    a = inputs.parse(args.matrix, parse_partial_matrix)
    if args.schedule:
        s = inputs.parse(args.schedule, parse_schedule)
        try:
            s = check_schedule(a.pattern, s, args.clique_cap)
        except CompletionError as exc:
            raise _InputError(f"{args.schedule}: {exc}") from None
    else:
        s = plan_schedule(a.pattern, args.strategy, args.clique_cap, args.rule)
    try:
        res = execute_schedule(a, s, tol, args.clique_cap)
    except CompletionError as exc:
        raise _InputError(f"{args.matrix}: {exc}") from None
    lam = np.linalg.eigvalsh(res.matrix)
    within = res.inertia.minus <= res.predicted_bound
    results = {
        "predicted_minus": res.predicted_bound,
        "achieved_minus": res.inertia.minus,
        "achieved_inertia": res.inertia.to_dict(),
        "within_prediction": within,
        "certified": res.certified,
        "smallest_eigenvalue": float(lam[0]),
        "schedule_strategy": s.strategy,
        "steps": [c.to_dict() for c in res.certificates],
        "completion": _matrix_rows(res.matrix),
    }
    if args.output:
        results["output"] = _write(args.output, format_dense(res.matrix))
    return (OK if within and res.certified else FAILED), results


def _cmd_bound(args, inputs, tol):
    g = inputs.parse(args.graph, parse_graph)
    s = plan_schedule(g, args.strategy, args.clique_cap, args.rule)
    lower, cert = completion_number_lower_bound(g, args.resolution, tol, args.phases)
    upper = s.final_bound
    consistent = lower <= upper
    placed_but_unverified = bool(cert.placements) and not cert.verified
    results = {
        "bracket": [lower, upper],
        "lower": lower,
        "upper": upper,
        "exact": lower == upper,
        "consistent": consistent,
        "schedule": s.to_dict(),
        "witness": cert.to_dict(),
    }
    return (OK if consistent and not placed_but_unverified else FAILED), results


def _cmd_witness(args, inputs, tol):
    if args.n < 1:
        raise _InputError("n must be positive")
    g, a = family_Gn(args.n)
    out = Path(args.output_dir)
    return OK, {
        "family": "gn",
        "n": args.n,
        "vertices": g.n,
        "placements": [list(range(4 * k + 1, 4 * k + 5)) for k in range(args.n)],
        "graph_file": _write(out / f"G{args.n}.graph", format_graph(g)),
        "matrix_file": _write(out / f"G{args.n}.matrix", format_partial_matrix(a)),
    }


def _cmd_verify(args, inputs, tol):
    a = inputs.parse(args.matrix, parse_partial_matrix)
    try:
        cert = make_certificate(a, args.placements)
    except CompletionError as exc:
        raise _InputError(str(exc)) from None
    cert = verify_witness_lower_bound(cert, args.resolution, tol, args.phases)
    return (OK if cert.verified else FAILED), cert.to_dict()


_COMMANDS = {
    "chordal": _cmd_chordal,
    "cliques": _cmd_cliques,
    "check": _cmd_check,
    "profile": _cmd_profile,
    "plan": _cmd_plan,
    "complete": _cmd_complete,
    "bound": _cmd_bound,
    "witness": _cmd_witness,
    "verify": _cmd_verify,
}


# -- rendering ---------------------------------------------------------------------


def _is_leaf(value) -> bool:
    # scalars, flat lists and lists of flat lists print on one line
    if isinstance(value, dict):
        return False
    if isinstance(value, list):
        return all(not isinstance(v, dict) and (not isinstance(v, list) or
                                                 all(not isinstance(w, (dict, list)) for w in v))
                   for v in value)
    return True


def _flatten(value, prefix=""):
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif not _is_leaf(value):
        for k, v in enumerate(value):
            yield from _flatten(v, f"{prefix}.{k}")
    else:
        yield prefix, json.dumps(value, allow_nan=False, separators=(",", ":"))


def render_text(report: dict) -> str:
    return "".join(f"{k} = {v}\n" for k, v in _flatten(report))


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    """Run the command line on ``argv``; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    for k, v in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)

    if args.tol < 0 or args.rel_tol < 0:
        print(f"{PROG}: error: tolerances must be nonnegative", file=stderr)
        return INPUT_ERROR
    if args.clique_cap < 1:
        print(f"{PROG}: error: --clique-cap must be positive", file=stderr)
        return INPUT_ERROR
    tol = Tolerance(args.tol, args.rel_tol)
    inputs = _Inputs()
    start = time.perf_counter()
    try:
        status, results = _COMMANDS[args.command](args, inputs, tol)
    except _InputError as exc:
        print(f"{PROG}: error: {exc}", file=stderr)
        return INPUT_ERROR
    except CliqueCapExceeded as exc:
        print(f"{PROG}: error: {exc}", file=stderr)
        return INPUT_ERROR
    except OSError as exc:
        print(f"{PROG}: error: {exc}", file=stderr)
        return INPUT_ERROR

    report = {
        "tool": PROG,
        "version": __version__,
        "command": [PROG, *argv],
        "subcommand": args.command,
        "inputs": inputs.digests,
        "settings": {"tol": args.tol, "rel_tol": args.rel_tol, "seed": args.seed,
                     "clique_cap": args.clique_cap, "rule": args.rule},
        "status": {OK: "ok", FAILED: "verification-failed"}[status],
        "results": results,
    }
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    stdout.write(render_json(report) if args.json else render_text(report))
    return status


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
