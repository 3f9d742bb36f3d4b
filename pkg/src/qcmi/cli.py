"""Command line interface.

Exit codes: 0 on success, 1 on usage or validation errors, 2 when a
proven inequality fails beyond tolerance (a diagnostic artifact is
written in that case).
"""

from __future__ import annotations

import argparse
import math
import sys

from .bounds import bound_report
from .entropy import cmi
from .errors import InequalityViolationError, QcmiError, SingularMatrixError
from .harness import (
    CONJECTURES,
    CORPORA,
    ScanConfig,
    channel_gap_scan,
    run_conjecture,
    scan,
)
from .recovery import classify, modular_residual, ruskai_residual, zhang_gaps
from .states import markov_state, regularize
from .stateio import fmt17, read_markov_spec, read_state, write_state


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; route that to exit code 1
    # instead, since 2 is reserved for inequality violations.
    def error(self, message):
        raise _UsageError(message)


def _dims(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected dA,dB,dC, got {text!r}")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be integers, got {text!r}")
    if any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"dims must be positive, got {text!r}")
    return dims


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcmi", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="bounds, classification, and residuals of one state")
    p_info.add_argument("state", help="state JSON file")
    p_info.add_argument("--tol", type=float, default=1e-8, help="classification tolerance")
    p_info.add_argument("--json", action="store_true", help="print a JSON object")
    p_info.add_argument(
        "--regularize",
        action="store_true",
        help="mix with 1e-9 of the maximally mixed state before analysis",
    )

    p_scan = sub.add_parser("scan", help="evaluate bounds on a random corpus")
    p_scan.add_argument("--dims", type=_dims, required=True, help="subsystem dims dA,dB,dC")
    p_scan.add_argument("--samples", type=int, required=True)
    p_scan.add_argument("--seed", type=int, default=0)
    p_scan.add_argument("--corpus", choices=CORPORA, default="hs-random")
    p_scan.add_argument("--tol", type=float, default=1e-8)
    p_scan.add_argument("--out", required=True, help="report file to write")
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")

    p_conj = sub.add_parser("conjecture", help="stress-test a conjectured bound")
    p_conj.add_argument("--which", choices=CONJECTURES, required=True)
    p_conj.add_argument("--dims", type=_dims, required=True, help="subsystem dims dA,dB,dC")
    p_conj.add_argument("--samples", type=int, required=True)
    p_conj.add_argument(
        "--unitary-samples",
        type=int,
        default=10,
        help="unitary triples per state for the rotated bound",
    )
    p_conj.add_argument("--seed", type=int, default=0)
    p_conj.add_argument("--corpus", choices=CORPORA, default="hs-random")
    p_conj.add_argument("--tol", type=float, default=1e-8)
    p_conj.add_argument("--out", required=True, help="report file to write")

    p_markov = sub.add_parser("markov", help="assemble a Markov state from a block spec")
    p_markov.add_argument("--spec", required=True, help="Markov spec JSON file")
    p_markov.add_argument("--out", required=True, help="state JSON file to write")

    p_cls = sub.add_parser("classify", help="commutation/reconstruction class of one state")
    p_cls.add_argument("state", help="state JSON file")
    p_cls.add_argument("--tol", type=float, default=1e-8)
    p_cls.add_argument("--json", action="store_true", help="print a JSON object")

    p_gap = sub.add_parser("channel-gap", help="check the channel gap bound on random triples")
    p_gap.add_argument("--dim", type=int, required=True, help="Hilbert space dimension")
    p_gap.add_argument("--kraus", type=int, required=True, help="Kraus operators per channel")
    p_gap.add_argument("--samples", type=int, required=True)
    p_gap.add_argument("--seed", type=int, default=0)
    p_gap.add_argument("--tol", type=float, default=1e-8)
    p_gap.add_argument(
        "--out", default="channel-gap", help="base name for violation artifacts"
    )
    return parser


def _fmt_value(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return fmt17(x)
    return str(x)


def _json_field(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, float):
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return fmt17(x)
    if isinstance(x, int):
        return str(x)
    return '"' + str(x) + '"'


def _cmd_info(args) -> int:
    state = read_state(args.state)
    if args.regularize:
        state = regularize(state)
    rep = bound_report(state)
    ent = cmi(state)
    cls = classify(state, tol=args.tol)
    gap_m, gap_mp = zhang_gaps(state)
    ruskai = ruskai_residual(state)
    try:
        modular = modular_residual(state)
    except SingularMatrixError:
        modular = None
    fields = [
        ("dims", f"{state.dims[0]},{state.dims[1]},{state.dims[2]}"),
        ("cmi", rep.cmi),
        ("s_abc", ent.s_abc),
        ("s_ab", ent.s_ab),
        ("s_bc", ent.s_bc),
        ("s_b", ent.s_b),
        ("sigma_star_trace", rep.sigma_star_trace),
        ("log_overlap_bound", rep.log_overlap_bound),
        ("thm1_bound", rep.thm1_bound),
        ("corollary_bound", rep.corollary_bound),
        ("slack_thm1", rep.slack_thm1),
        ("slack_corollary", rep.slack_corollary),
        ("support_restricted", rep.support_restricted),
        ("label", cls.label),
        ("commutator_trace_norm", cls.commutator_norm),
        ("reconstruction_gap", cls.reconstruction_gap),
        ("recovery_gap_M", gap_m),
        ("recovery_gap_Mprime", gap_mp),
        ("ruskai_residual", ruskai),
        ("modular_residual", modular),
    ]
    if args.json:
        body = ",".join(
            f'"{k}":{_json_field(v)}' for k, v in fields if k != "dims"
        )
        dims = ",".join(str(d) for d in state.dims)
        print('{"dims":[' + dims + "]," + body + "}")
    else:
        for k, v in fields:
            print(f"{k}: {'n/a' if v is None else _fmt_value(v)}")
    slacks = [
        ("ssa-cmi-nonnegative", rep.cmi),
        ("slack_thm1", rep.slack_thm1),
        ("slack_corollary", rep.slack_corollary),
        ("trace-exp-at-most-one", 1.0 - rep.sigma_star_trace),
    ]
    bad = [(name, s) for name, s in slacks if not s >= -args.tol]
    if bad:
        name, s = bad[0]
        print(
            f"proven inequality {name!r} violated: slack {s:.6e} below -{args.tol:.1e}",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_scan(args) -> int:
    cfg = ScanConfig(
        dims=args.dims,
        samples=args.samples,
        seed=args.seed,
        corpus=args.corpus,
        tol=args.tol,
        out=args.out,
        fmt=args.format,
    )
    rows = scan(cfg)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_conjecture(args) -> int:
    cfg = ScanConfig(
        dims=args.dims,
        samples=args.samples,
        seed=args.seed,
        corpus=args.corpus,
        tol=args.tol,
        out=args.out,
        fmt="json",
    )
    results = run_conjecture(cfg, args.which, unitary_samples=args.unitary_samples)
    for r in results:
        print(
            f"{r.conjecture_id}: samples={r.samples} min_slack={fmt17(r.min_slack)} "
            f"argmin_sample={r.argmin_sample} violations={r.violations}"
        )
    print(f"wrote report to {args.out}")
    return 0


def _cmd_markov(args) -> int:
    spec = read_markov_spec(args.spec)
    state = markov_state(spec)
    write_state(state, args.out)
    print(f"wrote state of dims {state.dims} to {args.out} (cmi={fmt17(cmi(state).cmi)})")
    return 0


def _cmd_classify(args) -> int:
    state = read_state(args.state)
    cls = classify(state, tol=args.tol)
    if args.json:
        print(
            '{"label":' + _json_field(cls.label)
            + ',"commutator_trace_norm":' + _json_field(cls.commutator_norm)
            + ',"reconstruction_gap":' + _json_field(cls.reconstruction_gap)
            + ',"tol":' + _json_field(cls.tol) + "}"
        )
    else:
        print(f"label: {cls.label}")
        print(f"commutator_trace_norm: {fmt17(cls.commutator_norm)}")
        print(f"reconstruction_gap: {fmt17(cls.reconstruction_gap)}")
        print(f"tol: {fmt17(cls.tol)}")
    return 0


def _cmd_channel_gap(args) -> int:
    summary = channel_gap_scan(
        dim=args.dim,
        kraus=args.kraus,
        samples=args.samples,
        seed=args.seed,
        tol=args.tol,
        out=args.out,
    )
    print(
        f"channel-gap: samples={summary.samples} dim={summary.dim} kraus={summary.kraus} "
        f"min_gap_slack={fmt17(summary.min_gap_slack)} min_lhs={fmt17(summary.min_lhs)} "
        f"violations={summary.violations}"
    )
    return 0


_COMMANDS = {
    "info": _cmd_info,
    "scan": _cmd_scan,
    "conjecture": _cmd_conjecture,
    "markov": _cmd_markov,
    "classify": _cmd_classify,
    "channel-gap": _cmd_channel_gap,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except InequalityViolationError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return 2
    except QcmiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())
