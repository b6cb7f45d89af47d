import dataclasses
import logging
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import vertex_max
from polarfloor import lp
from polarfloor.lp import EQ, GE, LE, DimensionError, LinearProgram, solve, verify_outcome


def _random_lp(rng, n_max=4, m_max=5, with_eq=True, with_bounds=True):
    n = rng.randint(1, n_max)
    m = rng.randint(0, m_max)
    rels = [LE, GE] + ([EQ] if with_eq else [])
    cons = [
        ([F(rng.randint(-4, 4)) for _ in range(n)], rng.choice(rels), F(rng.randint(-6, 6), rng.choice((1, 2))))
        for _ in range(m)
    ]
    bounds = None
    if with_bounds:
        bounds = []
        for _ in range(n):
            lo = rng.choice([None, F(0), F(rng.randint(-3, 1))])
            hi = rng.choice([None, None, F(rng.randint(0, 4))])
            bounds.append((lo, hi))
    return LinearProgram([F(rng.randint(-3, 3)) for _ in range(n)], cons, bounds)


class TestSmall:
    def test_bounded_max(self):
        out = solve(LinearProgram([1], [([1], LE, 3)]))
        assert out.status == lp.OPTIMAL and out.objective_value == 3 and out.primal == (3,)

    def test_unbounded_ray(self):
        out = solve(LinearProgram([1], []))
        assert out.status == lp.UNBOUNDED and out.ray[0] > 0

    def test_infeasible(self):
        prog = LinearProgram([1], [([1], LE, 0), ([1], GE, 1)])
        out = solve(prog)
        assert out.status == lp.INFEASIBLE and verify_outcome(prog, out)

    def test_free_variable_and_equality(self):
        # max -x - y s.t. x + y = 1, x - y = 3, both free -> x=2, y=-1
        prog = LinearProgram([-1, -1], [([1, 1], EQ, 1), ([1, -1], EQ, 3)], [(None, None)] * 2)
        out = solve(prog)
        assert out.primal == (2, -1) and out.objective_value == -1

    def test_upper_only_bound(self):
        out = solve(LinearProgram([1], [], [(None, F(-2))]))
        assert out.objective_value == -2
        out = solve(LinearProgram([-1], [], [(None, F(-2))]))
        assert out.status == lp.UNBOUNDED and out.ray == (-1,)

    def test_empty_bound_interval(self):
        out = solve(LinearProgram([0], [], [(F(1), F(0))]))
        assert out.status == lp.INFEASIBLE

    def test_degenerate_cycling_example(self):
        # Beale's classic cycling instance; Bland's rule must terminate
        c = [F(3, 4), F(-150), F(1, 50), F(-6)]
        A = [
            [F(1, 4), F(-60), F(-1, 25), F(9)],
            [F(1, 2), F(-90), F(-1, 50), F(3)],
            [F(0), F(0), F(1), F(0)],
        ]
        b = [0, 0, 1]
        prog = LinearProgram(c, [(a, LE, bi) for a, bi in zip(A, b)])
        out = solve(prog)
        assert out.objective_value == F(1, 20)

    def test_dimension_error(self):
        with pytest.raises(DimensionError):
            LinearProgram([1, 2], [([1], LE, 0)])
        with pytest.raises(DimensionError):
            LinearProgram([1, 2], [], [(0, None)])

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            LinearProgram([0.5], [])

    def test_unknown_relation(self):
        with pytest.raises(ValueError):
            LinearProgram([1], [([1], "!=", 0)])

    def test_deterministic(self):
        rng = random.Random(3)
        for _ in range(20):
            prog = _random_lp(rng)
            assert solve(prog) == solve(prog)

    def test_debug_logging_dumps_tableaus(self, caplog):
        with caplog.at_level(logging.DEBUG, logger="polarfloor.lp"):
            solve(LinearProgram([1, 1], [([1, 2], LE, 4), ([3, 1], LE, 6)]))
        assert any("tableau" in r.getMessage().lower() for r in caplog.records)


class TestTamper:
    def _optimal(self):
        prog = LinearProgram([1, 1], [([1, 2], LE, 4), ([3, 1], LE, 6)])
        out = solve(prog)
        assert out.objective_value == F(14, 5)
        return prog, out

    def test_solve_output_verifies(self):
        prog, out = self._optimal()
        assert verify_outcome(prog, out)

    def test_objective_value(self):
        prog, out = self._optimal()
        assert not verify_outcome(prog, dataclasses.replace(out, objective_value=out.objective_value + 1))

    def test_primal(self):
        prog, out = self._optimal()
        assert not verify_outcome(prog, dataclasses.replace(out, primal=(F(5), F(0))))

    def test_dual(self):
        prog, out = self._optimal()
        bad = tuple(v + 1 for v in out.dual)
        assert not verify_outcome(prog, dataclasses.replace(out, dual=bad))

    def test_ray_sign(self):
        prog = LinearProgram([1, 0], [([0, 1], LE, 1)])
        out = solve(prog)
        assert out.status == lp.UNBOUNDED and verify_outcome(prog, out)
        flipped = tuple(-v for v in out.ray)
        assert not verify_outcome(prog, dataclasses.replace(out, ray=flipped))

    def test_farkas(self):
        prog = LinearProgram([1], [([1], LE, 0), ([1], GE, 1)])
        out = solve(prog)
        bad = tuple(v * 2 for v in out.farkas)
        assert not verify_outcome(prog, dataclasses.replace(out, farkas=bad))

    def test_status(self):
        prog, out = self._optimal()
        assert not verify_outcome(prog, dataclasses.replace(out, status="bogus"))


class TestOracles:
    def test_random_against_scipy(self):
        linprog = pytest.importorskip("scipy.optimize").linprog
        rng = random.Random(2024)
        seen = set()
        for _ in range(300):
            prog = _random_lp(rng)
            out = solve(prog)
            assert verify_outcome(prog, out)
            seen.add(out.status)
            A_ub, b_ub, A_eq, b_eq = [], [], [], []
            for c in prog.constraints:
                row = [float(a) for a in c.coeffs]
                if c.relation == LE:
                    A_ub.append(row), b_ub.append(float(c.rhs))
                elif c.relation == GE:
                    A_ub.append([-a for a in row]), b_ub.append(-float(c.rhs))
                else:
                    A_eq.append(row), b_eq.append(float(c.rhs))
            bounds = [(None if lo is None else float(lo), None if hi is None else float(hi)) for lo, hi in prog.bounds]
            ref = linprog(
                [-float(c) for c in prog.objective],
                A_ub=A_ub or None,
                b_ub=b_ub or None,
                A_eq=A_eq or None,
                b_eq=b_eq or None,
                bounds=bounds,
                method="highs",
            )
            expected = {0: lp.OPTIMAL, 2: lp.INFEASIBLE, 3: lp.UNBOUNDED}[ref.status]
            assert out.status == expected
            if expected == lp.OPTIMAL:
                assert float(out.objective_value) == pytest.approx(-ref.fun, abs=1e-7)
        assert seen == {lp.OPTIMAL, lp.UNBOUNDED, lp.INFEASIBLE}

    def test_random_against_vertex_enumeration(self):
        # box-bounded programs: the optimum is attained at a vertex
        rng = random.Random(7)
        for _ in range(60):
            n = rng.randint(1, 3)
            cons = [([F(rng.randint(-3, 3)) for _ in range(n)], LE, F(rng.randint(-2, 6))) for _ in range(rng.randint(0, 3))]
            c = [F(rng.randint(-3, 3)) for _ in range(n)]
            prog = LinearProgram(c, cons, [(F(0), F(3))] * n)
            out = solve(prog)
            rows = prog.canonical_rows()
            ref = vertex_max(c, [list(a) for a, _ in rows], [b for _, b in rows])
            if ref is None:
                assert out.status == lp.INFEASIBLE
            else:
                assert out.status == lp.OPTIMAL and out.objective_value == ref[0]

    @given(st.integers(0, 10**6))
    def test_weak_duality(self, seed):
        # max c.x, Ax <= b, x >= 0 with A >= 0, b > 0; y = large multiple of 1 is dual feasible
        rng = random.Random(seed)
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        A = [[F(rng.randint(1, 5)) for _ in range(n)] for _ in range(m)]
        b = [F(rng.randint(1, 9)) for _ in range(m)]
        c = [F(rng.randint(-3, 3)) for _ in range(n)]
        out = solve(LinearProgram(c, [(a, LE, bi) for a, bi in zip(A, b)]))
        assert out.status == lp.OPTIMAL
        t = max(max(abs(ci) for ci in c), F(1))
        y = [t] * m  # A^T y >= c since each column of A has an entry >= 1
        assert all(sum(A[i][j] * y[i] for i in range(m)) >= c[j] for j in range(n))
        assert out.objective_value <= sum(bi * yi for bi, yi in zip(b, y))
        # the returned dual closes the gap exactly
        rows = LinearProgram(c, [(a, LE, bi) for a, bi in zip(A, b)]).canonical_rows()
        assert sum(yi * bi for yi, (_, bi) in zip(out.dual, rows)) == out.objective_value

    @given(st.integers(0, 10**6))
    def test_every_outcome_verifies(self, seed):
        prog = _random_lp(random.Random(seed))
        assert verify_outcome(prog, solve(prog))
