"""JSON market files.

Layout (all rationals are ``"p/q"`` strings; JSON integers are tolerated,
floats are rejected; unknown keys are errors)::

    {
      "atoms": [{"label": "w1", "prob": "1/2"}, ...],
      "generators": [["1", "-1"], ...],
      "mode": "cone" | "subspace" | "cone_minus_positives",
      "f": ["1", "1"],
      "truncation": {"kind": "unit_ball"}
                  | {"kind": "eps", "eps": ["1/2", "1/4"]}
                  | {"kind": "orlicz", "phi": {"knots": [["0", "0"], ["1/2", "0"], ...],
                                               "tail_slope": "4", "tail_quad": "1"}}
    }

``truncation`` is optional and defaults to the unit ball.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .cone import MarketCone, Mode, TruncationKind, TruncationSpec
from .orlicz import NFunction
from .prob import FiniteProbSpace, RandomVariable


class MarketFileError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass(frozen=True)
class Market:
    space: FiniteProbSpace
    cone: MarketCone
    f: RandomVariable
    truncation: TruncationSpec


def fraction_str(q: Fraction) -> str:
    return str(q)


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise MarketFileError(where, f"expected a 'p/q' string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise MarketFileError(where, f"expected a 'p/q' string, got {type(value).__name__}")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise MarketFileError(where, f"not a rational number: {value!r}") from None


def _obj(value: Any, where: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(value, dict):
        raise MarketFileError(where, "expected an object")
    unknown = set(value) - required - optional
    if unknown:
        raise MarketFileError(where, f"unknown field(s) {sorted(unknown)}")
    missing = required - set(value)
    if missing:
        raise MarketFileError(where, f"missing field(s) {sorted(missing)}")
    return value


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise MarketFileError(where, "expected a list")
    return value


def _vector(value: Any, where: str, n: int) -> list[Fraction]:
    items = _list(value, where)
    if len(items) != n:
        raise MarketFileError(where, f"expected {n} entries, got {len(items)}")
    return [_rational(v, f"{where}[{i}]") for i, v in enumerate(items)]


def parse_nfunction(value: Any, where: str) -> NFunction:
    d = _obj(value, where, {"knots", "tail_slope", "tail_quad"})
    knots = []
    for i, k in enumerate(_list(d["knots"], f"{where}.knots")):
        pair = _list(k, f"{where}.knots[{i}]")
        if len(pair) != 2:
            raise MarketFileError(f"{where}.knots[{i}]", "expected [t, phi(t)]")
        knots.append((_rational(pair[0], f"{where}.knots[{i}][0]"), _rational(pair[1], f"{where}.knots[{i}][1]")))
    try:
        return NFunction(
            knots,
            _rational(d["tail_slope"], f"{where}.tail_slope"),
            _rational(d["tail_quad"], f"{where}.tail_quad"),
        )
    except ValueError as exc:
        raise MarketFileError(where, str(exc)) from None


def _truncation(value: Any, where: str) -> TruncationSpec:
    if not isinstance(value, dict) or "kind" not in value:
        raise MarketFileError(where, "expected an object with a 'kind' field")
    kind = value["kind"]
    if kind == "unit_ball":
        _obj(value, where, {"kind"})
        return TruncationSpec.unit_ball()
    if kind == "eps":
        d = _obj(value, where, {"kind", "eps"})
        eps = [_rational(v, f"{where}.eps[{i}]") for i, v in enumerate(_list(d["eps"], f"{where}.eps"))]
        try:
            return TruncationSpec.eps_sequence(eps)
        except ValueError as exc:
            raise MarketFileError(f"{where}.eps", str(exc)) from None
    if kind == "orlicz":
        d = _obj(value, where, {"kind", "phi"})
        return TruncationSpec.orlicz(parse_nfunction(d["phi"], f"{where}.phi"))
    raise MarketFileError(f"{where}.kind", f"unknown truncation kind {kind!r}")


def parse_market(text: str) -> Market:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MarketFileError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    d = _obj(data, "market", {"atoms", "generators", "mode", "f"}, {"truncation"})
    labels, probs = [], []
    for i, a in enumerate(_list(d["atoms"], "atoms")):
        atom = _obj(a, f"atoms[{i}]", {"label", "prob"})
        if not isinstance(atom["label"], str):
            raise MarketFileError(f"atoms[{i}].label", "expected a string")
        labels.append(atom["label"])
        probs.append(_rational(atom["prob"], f"atoms[{i}].prob"))
    try:
        space = FiniteProbSpace(labels, probs)
    except ValueError as exc:
        raise MarketFileError("atoms", str(exc)) from None
    n = len(space)
    gens = [
        RandomVariable(space, _vector(g, f"generators[{j}]", n))
        for j, g in enumerate(_list(d["generators"], "generators"))
    ]
    try:
        mode = Mode(d["mode"])
    except ValueError:
        raise MarketFileError("mode", f"unknown mode {d['mode']!r}") from None
    f = RandomVariable(space, _vector(d["f"], "f", n))
    trunc = _truncation(d["truncation"], "truncation") if "truncation" in d else TruncationSpec.unit_ball()
    return Market(space, MarketCone(space, gens, mode), f, trunc)


def load_market(path: str | Path) -> Market:
    return parse_market(Path(path).read_text())


def _truncation_json(trunc: TruncationSpec) -> dict:
    if trunc.kind is TruncationKind.UNIT_BALL:
        return {"kind": "unit_ball"}
    if trunc.kind is TruncationKind.EPS_SEQUENCE:
        return {"kind": "eps", "eps": [fraction_str(e) for e in trunc.eps]}
    phi = trunc.phi
    return {
        "kind": "orlicz",
        "phi": {
            "knots": [[fraction_str(t), fraction_str(v)] for t, v in phi.knots],
            "tail_slope": fraction_str(phi.tail_slope),
            "tail_quad": fraction_str(phi.tail_quad),
        },
    }


def dump_market(cone: MarketCone, f: RandomVariable, truncation: Optional[TruncationSpec] = None) -> str:
    space = cone.space
    data = {
        "atoms": [{"label": a, "prob": fraction_str(p)} for a, p in zip(space.atoms, space.probs)],
        "generators": [[fraction_str(v) for v in g.values] for g in cone.generators],
        "mode": cone.mode.value,
        "f": [fraction_str(v) for v in f.values],
    }
    if truncation is not None:
        data["truncation"] = _truncation_json(truncation)
    return json.dumps(data, indent=1) + "\n"
