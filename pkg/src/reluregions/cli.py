"""Command-line interface.

Every subcommand prints a JSON run report on standard output (sorted keys,
so identical inputs give identical bytes) and a short summary on standard
error.  Exit codes: 0 success or "yes", 1 "no" for ``decide``/``equiv``,
2 usage or invalid parameters, 3 unreadable or malformed input file,
4 dimension or depth mismatch, 5 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import __version__, lp
from .census import (
    Limits,
    ResourceLimitExceeded,
    count_regions,
    k_region_decision,
    networks_equivalent,
)
from .gadgets import (
    DimacsError,
    GadgetError,
    amplify,
    brute_force_models,
    build_arrangement_network,
    build_fig2,
    build_N_phi,
    build_N_phi_KL,
    build_N_phi_star,
    build_T,
    build_T_eps,
    build_zanotti,
    parse_dimacs,
    subtract,
)
from .model import DimensionError, as_rational
from .netio import NetworkFormatError, dump_rational, parse_network, serialize_network
from .oracle import line_census, sample_lower_bounds
from .shallow import (
    DepthError,
    EffectiveArrangement,
    class_cancels,
    count_arrangement_cells,
    group_hyperplanes,
    shallow_census,
)

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_INPUT, EXIT_SHAPE, EXIT_LIMIT = 0, 1, 2, 3, 4, 5

GEN_KINDS = ("nphi", "nphi-kl", "nphi-star", "t", "t-eps", "amplify", "arrangement", "zanotti", "fig2", "subtract")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


# -- helpers ---------------------------------------------------------------

def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class _Inputs:
    """Loaded files with their digests, echoed in the report."""

    def __init__(self):
        self.files = {}

    def network(self, path):
        data = _read(path)
        self.files[path] = _digest(data)
        return parse_network(data)

    def cnf(self, path):
        data = _read(path)
        self.files[path] = _digest(data)
        return parse_dimacs(data.decode("utf-8", errors="replace"))


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _vector(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _defs(text: str) -> list[int]:
    try:
        defs = sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise UsageError(f"bad definition list {text!r}") from None
    if not defs or any(d not in range(1, 7) for d in defs):
        raise UsageError("definitions must be drawn from 1..6")
    return defs


def _limits(args) -> Limits:
    return Limits(max_patterns=args.max_patterns, max_lps=args.max_lps)


def _summary_lines(report) -> list[str]:
    out = []
    for d, entry in report.entries.items():
        if entry.computed:
            out.append(f"R{d} = {entry.value} ({'exact' if entry.exact else 'bound'}, {entry.method})")
        else:
            out.append(f"R{d}: {entry.note}")
    return out


# -- subcommands -----------------------------------------------------------

def cmd_count(args, inputs):
    net = inputs.network(args.network)
    report = count_regions(net, _defs(args.defs), workers=args.workers, limits=_limits(args))
    return EXIT_YES, {"census": report.to_dict()}, _summary_lines(report)


def cmd_decide(args, inputs):
    if args.k < 1:
        raise UsageError("--k must be a positive integer")
    if args.definition not in (1, 2, 4, 6):
        raise UsageError("--def must be one of 1, 2, 4, 6")
    net = inputs.network(args.network)
    dec = k_region_decision(net, args.k, args.definition, limits=_limits(args))
    result = {
        "definition": args.definition,
        "k": args.k,
        "more_than_k": dec.answer,
        "certificate": {
            "kind": "lower bound" if dec.answer else "exact count",
            "value": dec.bound,
            "method": dec.method,
        },
    }
    verdict = f"more than {args.k}" if dec.answer else f"at most {args.k}"
    line = f"Definition {args.definition}: {verdict} (certified {'>=' if dec.answer else '='} {dec.bound})"
    return (EXIT_YES if dec.answer else EXIT_NO), {"decision": result}, [line]


def cmd_equiv(args, inputs):
    a = inputs.network(args.first)
    b = inputs.network(args.second)
    same = networks_equivalent(a, b)
    return (EXIT_YES if same else EXIT_NO), {"equivalent": same}, ["equivalent" if same else "not equivalent"]


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"gen {args.kind} needs --{name.replace('_', '-')}")
    return value


def _prediction(definitions, value, formula, **params):
    return {
        "status": "prediction",
        "definitions": definitions,
        "value": value,
        "formula": formula,
        "parameters": {k: (dump_rational(v) if isinstance(v, Fraction) else v) for k, v in params.items()},
    }


def _generate(args, inputs):
    kind = args.kind
    if kind in ("nphi", "nphi-kl", "nphi-star"):
        cnf = inputs.cnf(_need(args, "cnf"))
        sat = brute_force_models(cnf)
        if kind == "nphi":
            pred = _prediction([4], sat > 0, "more than one region iff satisfiable", models=sat)
            return build_N_phi(cnf), pred
        if kind == "nphi-kl":
            k = args.k if args.k is not None else 1
            L = args.l if args.l is not None else 2
            pred = _prediction([4], sat > 0, "more than K regions iff satisfiable", models=sat, K=k, L=L)
            return build_N_phi_KL(cnf, k, L), pred
        L = args.l if args.l is not None else 3
        n = cnf.num_vars
        pred = _prediction([4], 1 + sat * 2 ** n, "1 + k 2^n", k=sat, n=n)
        return build_N_phi_star(cnf, L), pred
    if kind == "t":
        n = _need(args, "n")
        return build_T(n), _prediction([3, 4, 5], 4 ** n, "4^n (four pieces per coordinate)", n=n)
    if kind == "t-eps":
        n = _need(args, "n")
        eps = _rational(args.eps)
        return build_T_eps(n, eps), _prediction([4, 5], 1 + 2 ** (2 * n), "1 + 2^(2n)", n=n, eps=eps)
    if kind == "amplify":
        if len(args.net or []) != 1:
            raise UsageError("gen amplify needs exactly one --net")
        k = _need(args, "k")
        base = inputs.network(args.net[0])
        m = count_regions(base, (6,))[6]
        return amplify(base, k), _prediction([6], m ** k, "m^k", m=m, k=k)
    if kind == "arrangement":
        if not args.hyperplane or args.point is None:
            raise UsageError("gen arrangement needs --hyperplane (repeatable) and --point")
        hyps = [_vector(h) for h in args.hyperplane]
        point = _vector(args.point)
        net = build_arrangement_network(hyps, point)
        arr = EffectiveArrangement(len(point), tuple((tuple(h), Fraction(0)) for h in hyps))
        cells = count_arrangement_cells(arr)
        return net, _prediction([1, 2, 3, 4, 5, 6], cells, "cells of the arrangement", m=len(hyps))
    if kind == "zanotti":
        return build_zanotti(), None
    if kind == "fig2":
        return build_fig2(), None
    if kind == "subtract":
        if len(args.net or []) != 2:
            raise UsageError("gen subtract needs exactly two --net")
        a = inputs.network(args.net[0])
        b = inputs.network(args.net[1])
        return subtract(a, b), None
    raise UsageError(f"unknown kind {kind!r}")


def cmd_gen(args, inputs):
    try:
        net, pred = _generate(args, inputs)
    except GadgetError as exc:
        raise UsageError(str(exc)) from None
    doc = serialize_network(net)
    result = {"kind": args.kind, "network_sha256": _digest(doc), "hidden_widths": list(net.widths[1:-1])}
    if pred is not None:
        result["prediction"] = pred
    if args.output:
        try:
            with open(args.output, "wb") as fh:
                fh.write(doc)
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror}") from None
        result["output"] = args.output
        lines = [f"wrote {args.output}"]
    else:
        # the network itself takes standard output
        sys.stdout.write(doc.decode())
        lines = []
    if pred is not None:
        value = pred["value"]
        if isinstance(value, bool):
            value = "yes" if value else "no"
        lines.append(f"predicted: {value} ({pred['formula']})")
    return EXIT_YES, {"generated": result}, lines, args.output is None


def cmd_shallow(args, inputs):
    net = inputs.network(args.network)
    classes, degenerate = group_hyperplanes(net)
    report = shallow_census(net, workers=args.workers, limits=_limits(args))
    affine = all(class_cancels(c) for c in classes)
    result = {
        "affine": affine,
        "classes": [
            {
                "weights": [dump_rational(v) for v in c.weights],
                "bias": dump_rational(c.bias),
                "members": [
                    {"neuron": m.neuron, "scale": dump_rational(m.scale), "out_weight": dump_rational(m.out_weight)}
                    for m in c.members
                ],
                "cancels": class_cancels(c),
            }
            for c in classes
        ],
        "degenerate_neurons": degenerate,
        "effective_hyperplanes": [
            {"weights": [dump_rational(v) for v in c.weights], "bias": dump_rational(c.bias)}
            for c in classes
            if not class_cancels(c)
        ],
    }
    n_eff = len(result["effective_hyperplanes"])
    lines = [f"{'affine' if affine else 'not affine'}; {n_eff} effective hyperplane{'s' if n_eff != 1 else ''}"]
    return EXIT_YES, {"shallow": result, "census": report.to_dict()}, lines + _summary_lines(report)


def cmd_oracle(args, inputs):
    net = inputs.network(args.network)
    if args.mode == "line":
        report = line_census(net)
        return EXIT_YES, {"oracle": {"mode": "line", "soundness": "exact"}, "census": report.to_dict()}, _summary_lines(report)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    r1, r6 = sample_lower_bounds(net, args.trials, seed=args.seed)
    result = {
        "mode": "sample",
        "soundness": "lower bound",
        "trials": args.trials,
        "seed": args.seed,
        "bounds": {"1": r1, "6": r6},
    }
    return EXIT_YES, {"oracle": result}, [f"R1 >= {r1}", f"R6 >= {r6}"]


# -- parser ----------------------------------------------------------------

def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reluregions", description="Exact linear-region counting for ReLU networks.")
    p.add_argument("--version", action="version", version=f"reluregions {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, limits=True):
        sp.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
        if limits:
            sp.add_argument("--workers", type=_positive, default=1)
            sp.add_argument("--max-patterns", type=_positive, default=None)
            sp.add_argument("--max-lps", type=_positive, default=None)

    sp = sub.add_parser("count", help="count linear regions")
    sp.add_argument("network")
    sp.add_argument("--defs", default="1,2,4,6", help="comma-separated definition ids")
    common(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("decide", help="more than K regions?")
    sp.add_argument("network")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--def", dest="definition", type=int, default=4)
    common(sp)
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("equiv", help="do two networks compute the same function?")
    sp.add_argument("first")
    sp.add_argument("second")
    common(sp, limits=False)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("gen", help="generate a gadget or example network")
    sp.add_argument("kind", choices=GEN_KINDS)
    sp.add_argument("--cnf")
    sp.add_argument("--n", type=_positive)
    sp.add_argument("--eps", default="1/3")
    sp.add_argument("--k", type=_positive)
    sp.add_argument("--l", type=int)
    sp.add_argument("--net", action="append")
    sp.add_argument("--hyperplane", action="append", help="normal vector, e.g. 1,-2")
    sp.add_argument("--point", help="orienting point, e.g. 1,1")
    sp.add_argument("-o", "--output")
    common(sp, limits=False)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("shallow", help="analyze a one-hidden-layer network")
    sp.add_argument("network")
    common(sp)
    sp.set_defaults(func=cmd_shallow)

    sp = sub.add_parser("oracle", help="independent checks")
    sp.add_argument("mode", choices=("line", "sample"))
    sp.add_argument("network")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    common(sp, limits=False)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    argv = list(sys.argv[1:] if argv is None else argv)
    inputs = _Inputs()
    start = time.perf_counter()
    lp_start = lp.counter.calls
    try:
        out = args.func(args, inputs)
    except UsageError as exc:
        parser.error(str(exc))
    except (InputError, NetworkFormatError, DimacsError) as exc:
        print(f"reluregions: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionError, DepthError) as exc:
        print(f"reluregions: error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except ResourceLimitExceeded as exc:
        print(f"reluregions: resource limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    code, body, lines = out[:3]
    report_to_stderr = len(out) > 3 and out[3]
    report = {
        "command": argv,
        "inputs": {path: {"sha256": digest} for path, digest in inputs.files.items()},
        "version": __version__,
        **body,
    }
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6), "lp_calls": lp.counter.calls - lp_start}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    (sys.stderr if report_to_stderr else sys.stdout).write(text)
    for line in lines:
        print(line, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
