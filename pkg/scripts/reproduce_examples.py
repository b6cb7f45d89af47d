"""Print the exact numbers behind the three truncated example markets."""

from fractions import Fraction

from polarfloor.cone import TruncationSpec, no_arbitrage_check
from polarfloor.domination import divergence_witness_eps, sup_over_truncation
from polarfloor.examples import build_example1, build_example3
from polarfloor.config import SweepConfig
from polarfloor.prob import negative_part, pairing, tail_probability


def example1(M=10):
    print(f"Example 1 (eps_n = 2^-n, n <= {M})")
    d = build_example1(M)
    one = d.space.constant(1)
    for n, x in enumerate(d.witnesses, start=1):
        tails = [tail_probability(negative_part(x), k) for k in (1, n, n + 1)]
        print(f"  n={n:2d}  <x_n,1> = {pairing(x, one)!s:>12}  P(x_n^- >= 1, n, n+1) = {', '.join(map(str, tails))}")


def example2():
    for rule in ("ones-odd", "dyadic-odd"):
        res = SweepConfig(f_rule=rule).run()
        print(f"Example 2, f = {rule}: min E|g| by level")
        for r in res.rows:
            print(f"  N={r.level:2d}  {r.min_l1_norm!s:>18}  ~ {float(r.min_l1_norm):.6f}")


def example3(max_level=8):
    print("Example 3: sup of <x,f> over C_1 (bound 4/3)")
    for N in range(1, max_level + 1):
        m = build_example3(N)
        sup = sup_over_truncation(m.cone, m.f, TruncationSpec.unit_ball()).value
        na = no_arbitrage_check(m.cone).no_arbitrage
        print(f"  N={N}  sup = {sup!s:>10} ~ {float(sup):.6f}  no-arbitrage = {na}")
    m = build_example3(12)
    eps = [Fraction(1, 2**k) for k in range(1, 13)]
    print("Example 3: eps-witnesses at level 12, eps_k = 2^-k")
    for beta in range(0, 6):
        x = divergence_witness_eps(m.cone, m.f, eps, beta)
        shown = "none (level too small)" if x is None else str(pairing(x, m.f))
        print(f"  beta={beta}  <x,f> = {shown}")


if __name__ == "__main__":
    example1()
    print()
    example2()
    print()
    example3()
