"""Command-line front end.

Exit codes of ``check`` (and of ``examples`` without ``--sweep``):
0 dominating density found, 1 none exists (certificate printed),
2 arbitrage detected, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .cone import Mode, TruncationKind, TruncationSpec, no_arbitrage_check
from .domination import (
    duality_check,
    find_dominating_density,
    sup_over_truncation,
    truncation_sweep,
)
from .examples import DENSITY_RULES, build_example1, build_example2, build_example3
from .marketfile import Market, MarketFileError, dump_market, load_market, parse_nfunction
from .orlicz import NFunction, eps_to_nfunction, evaluate, luxemburg_norm, nfunction_to_eps
from .prob import FiniteProbSpace, RandomVariable, as_fraction, negative_part, pairing, tail_probability

EXIT_FOUND, EXIT_NOT_FOUND, EXIT_ARBITRAGE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def dec(q: Optional[Fraction]) -> str:
    return "unbounded" if q is None else f"{float(q):.6g}"


def exact(q: Optional[Fraction]) -> str:
    return "unbounded" if q is None else str(q)


def both(q: Optional[Fraction]) -> str:
    return "unbounded" if q is None else f"{q} ({dec(q)})"


def vec(x: Optional[RandomVariable]) -> Optional[list[str]]:
    return None if x is None else [str(v) for v in x.values]


def analyse(market: Market) -> tuple[dict, int]:
    """Run the full battery on a market; returns (result record, exit code)."""
    cone, f = market.cone, market.f
    na = no_arbitrage_check(cone)
    report = find_dominating_density(cone, f)
    record: dict = {
        "atoms": len(market.space),
        "generators": len(cone.generators),
        "mode": cone.mode.value,
        "no_arbitrage": na.no_arbitrage,
        "arbitrage_witness": vec(na.witness),
        "sup_c1": exact(report.sup_c1),
        "dominating_g": vec(report.dominating_g),
        "min_l1_norm": None if report.min_l1_norm is None else str(report.min_l1_norm),
        "certificate": vec(report.certificate),
        "certificate_pairing": None if report.certificate_pairing is None else str(report.certificate_pairing),
        "duality_check": duality_check(cone, f),
        "truncation": market.truncation.kind.value,
    }
    if market.truncation.kind is not TruncationKind.UNIT_BALL:
        pool = list(cone.generators)
        if cone.mode is Mode.SUBSPACE:
            pool += [-g for g in cone.generators]
        res = sup_over_truncation(cone, f, market.truncation, pool)
        record["truncation_sup_lower_bound"] = exact(res.value)
        record["truncation_argmax"] = vec(res.argmax)
    if not na.no_arbitrage:
        code = EXIT_ARBITRAGE
    elif report.feasible:
        code = EXIT_FOUND
    else:
        code = EXIT_NOT_FOUND
    record["exit_code"] = code
    return record, code


def render_text(record: dict) -> str:
    def q(s):
        return "unbounded" if s == "unbounded" else both(Fraction(s))

    lines = [
        f"market: {record['atoms']} atoms, {record['generators']} generators, mode={record['mode']}",
        f"no-arbitrage: {'yes' if record['no_arbitrage'] else 'NO'}",
    ]
    if record["arbitrage_witness"] is not None:
        lines.append(f"arbitrage witness: [{', '.join(record['arbitrage_witness'])}]")
    lines.append(f"sup over C_1 of <x,f>: {q(record['sup_c1'])}")
    if record["dominating_g"] is not None:
        lines.append(f"dominating g: [{', '.join(record['dominating_g'])}]")
        lines.append(f"min E|g|: {q(record['min_l1_norm'])}")
    else:
        lines.append("dominating g: none")
        lines.append(f"certificate x in C, x >= 0: [{', '.join(record['certificate'])}]")
        lines.append(f"<x,f> of certificate: {q(record['certificate_pairing'])}")
    lines.append(f"duality check (sup finite <=> g exists): {'ok' if record['duality_check'] else 'FAILED'}")
    if "truncation_sup_lower_bound" in record:
        lines.append(
            f"sup over {record['truncation']} truncation (witness lower bound): "
            f"{q(record['truncation_sup_lower_bound'])}"
        )
    return "\n".join(lines) + "\n"


def emit(record: dict, fmt: str, text: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(record, indent=1) + "\n")
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    try:
        market = load_market(args.path)
    except OSError as exc:
        raise InputError(f"cannot read {args.path}: {exc.strerror}") from None
    except MarketFileError as exc:
        raise InputError(f"{args.path}: {exc}") from None
    record, code = analyse(market)
    emit(record, args.format, render_text(record))
    return code


def _example1(args) -> int:
    data = build_example1(args.level)
    rows = []
    for n, x in enumerate(data.witnesses, start=1):
        e = data.eps[n - 1]
        neg = negative_part(x)
        tails = [str(tail_probability(neg, k)) for k in range(1, args.level + 2)]
        rows.append(
            {
                "n": n,
                "eps_n": str(e),
                "pairing_with_1": str(pairing(x, data.space.constant(1))),
                "n_times_1_minus_2eps": str(n * (1 - 2 * e)),
                "tail_probs_k=1..": tails,
            }
        )
    if args.dump:
        cone = data.standin_cone()
        Path(args.dump).write_text(
            dump_market(cone, data.space.constant(1), TruncationSpec.eps_sequence(data.eps))
        )
    if args.format == "json":
        sys.stdout.write(json.dumps({"example1": rows}, indent=1) + "\n")
    else:
        out = [f"{'n':>3} {'eps_n':>10} {'<x_n,1>':>14} {'n(1-2eps_n)':>14}  P(x_n^- >= k), k=1..{args.level + 1}"]
        for r in rows:
            out.append(
                f"{r['n']:>3} {r['eps_n']:>10} {r['pairing_with_1']:>14} {r['n_times_1_minus_2eps']:>14}  "
                + " ".join(r["tail_probs_k=1.."])
            )
        sys.stdout.write("\n".join(out) + "\n")
    return 0


def _sweep(args) -> int:
    lo, hi = args.sweep
    if lo < 1 or hi < lo:
        raise InputError("--sweep needs 1 <= L1 <= L2")
    trunc = None
    quantity = "min_l1_norm"
    if args.kind == "example1":
        trunc = TruncationSpec.eps_sequence([Fraction(1, 2**k) for k in range(1, hi + 1)])
        quantity = "sup"
    try:
        threshold = None if args.threshold is None else as_fraction(args.threshold)
    except ValueError:
        raise InputError(f"--threshold: not a rational number: {args.threshold!r}") from None
    res = truncation_sweep(
        args.kind,
        list(range(lo, hi + 1)),
        f_rule=DENSITY_RULES[args.f],
        trunc=trunc,
        threshold=threshold,
        quantity=quantity,
    )
    if args.format == "json":
        record = {
            "kind": res.kind,
            "quantity": res.quantity,
            "rows": [{"level": r.level, "sup": exact(r.sup), "min_l1_norm": exact(r.min_l1_norm)} for r in res.rows],
            "diverging": res.diverging,
        }
        sys.stdout.write(json.dumps(record, indent=1) + "\n")
    else:
        out = [f"{'level':>5} {'sup':>24} {'min E|g|':>24}"]
        for r in res.rows:
            out.append(f"{r.level:>5} {both(r.sup):>24} {both(r.min_l1_norm):>24}")
        out.append(f"verdict ({res.quantity}): {'diverging' if res.diverging else 'not diverging'}")
        sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_examples(args) -> int:
    if args.level < 1:
        raise InputError("--level must be >= 1")
    if args.sweep:
        return _sweep(args)
    if args.kind == "example1":
        return _example1(args)
    if args.kind == "example2":
        m2 = build_example2(args.level)
        market = Market(m2.space, m2.cone, m2.density(DENSITY_RULES[args.f]), TruncationSpec.unit_ball())
    else:
        m3 = build_example3(args.level)
        market = Market(m3.space, m3.cone, m3.f, TruncationSpec.unit_ball())
    if args.dump:
        Path(args.dump).write_text(dump_market(market.cone, market.f, market.truncation))
    record, code = analyse(market)
    emit(record, args.format, render_text(record))
    return code


def _load_phi(args) -> NFunction:
    if args.phi_from_eps:
        return eps_to_nfunction([as_fraction(e) for e in args.phi_from_eps])
    if args.phi:
        text = args.phi
        try:
            if text.startswith("@"):
                text = Path(text[1:]).read_text()
            return parse_nfunction(json.loads(text), "phi")
        except (OSError, json.JSONDecodeError, MarketFileError) as exc:
            raise InputError(f"bad --phi: {exc}") from None
    raise InputError("give --phi JSON or --phi-from-eps E1 E2 ...")


def _phi_table(phi: NFunction) -> list[str]:
    out = ["knots (t, phi(t)): " + ", ".join(f"({t}, {v})" for t, v in phi.knots)]
    out.append(f"tail: phi(t) = {phi.knots[-1][1]} + {phi.tail_slope}(t - {phi.knots[-1][0]}) + {phi.tail_quad}(t - {phi.knots[-1][0]})^2")
    return out


def cmd_orlicz(args) -> int:
    try:
        if args.action == "eps-to-phi":
            eps = [as_fraction(e) for e in args.eps]
            phi = eps_to_nfunction(eps)
            running = Fraction(0)
            checks = []
            for k, e in enumerate(eps, start=1):
                running = max(running, 1 / e)
                checks.append({"k": k, "phi(k)": str(evaluate(phi, k)), "required": str(running)})
            if args.format == "json":
                record = {
                    "knots": [[str(t), str(v)] for t, v in phi.knots],
                    "tail_slope": str(phi.tail_slope),
                    "tail_quad": str(phi.tail_quad),
                    "checks": checks,
                }
                sys.stdout.write(json.dumps(record, indent=1) + "\n")
            else:
                out = _phi_table(phi)
                out += [f"phi({c['k']}) = {c['phi(k)']} >= {c['required']}" for c in checks]
                sys.stdout.write("\n".join(out) + "\n")
        elif args.action == "phi-to-eps":
            phi = _load_phi(args)
            seq = nfunction_to_eps(phi, args.K)
            if args.format == "json":
                sys.stdout.write(json.dumps({"eps": [str(e) for e in seq.eps]}, indent=1) + "\n")
            else:
                out = _phi_table(phi)
                out += [f"eps_{k} = {both(e)}" for k, e in enumerate(seq.eps, start=1)]
                sys.stdout.write("\n".join(out) + "\n")
        else:
            phi = _load_phi(args)
            values = [as_fraction(v) for v in args.values]
            probs = [as_fraction(p) for p in args.probs] if args.probs else [Fraction(1, len(values))] * len(values)
            space = FiniteProbSpace([f"w{i}" for i in range(len(values))], probs)
            x = RandomVariable(space, values)
            br = luxemburg_norm(x, phi, as_fraction(args.tol))
            if args.format == "json":
                sys.stdout.write(json.dumps({"lo": str(br.lo), "hi": str(br.hi)}, indent=1) + "\n")
            else:
                sys.stdout.write(f"||x||_phi in [{both(br.lo)}, {both(br.hi)}]\n")
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polarfloor", description="Martingale densities bounded below, by exact LP.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--debug-lp", action="store_true", help="dump simplex tableaus to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="analyse a market file")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("examples", help="build and analyse a truncated example market")
    p.add_argument("kind", choices=("example1", "example2", "example3"))
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--f", choices=sorted(DENSITY_RULES), default="ones-odd", help="density floor for example2")
    p.add_argument("--sweep", type=int, nargs=2, metavar=("L1", "L2"))
    p.add_argument("--threshold", help="divergence threshold for --sweep")
    p.add_argument("--dump", metavar="PATH", help="write the market file")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("orlicz", help="N-function constructions and Luxemburg norms")
    osub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = osub.add_parser("eps-to-phi")
    q.add_argument("eps", nargs="+")
    q = osub.add_parser("phi-to-eps")
    q.add_argument("--K", type=int, required=True)
    q.add_argument("--phi", help="N-function JSON (or @file)")
    q.add_argument("--phi-from-eps", nargs="+")
    q = osub.add_parser("norm")
    q.add_argument("values", nargs="+")
    q.add_argument("--probs", nargs="+")
    q.add_argument("--tol", default="1/1000000")
    q.add_argument("--phi", help="N-function JSON (or @file)")
    q.add_argument("--phi-from-eps", nargs="+")
    p.set_defaults(func=cmd_orlicz)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.debug_lp:
        handler = logging.StreamHandler(sys.stderr)
        lp_log = logging.getLogger("polarfloor.lp")
        if not lp_log.handlers:
            lp_log.addHandler(handler)
        lp_log.setLevel(logging.DEBUG)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
