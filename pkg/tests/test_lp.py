"""Exact simplex solver: hand-checked programs plus a vertex-enumeration
oracle on random bounded 2-D instances."""

import random
from fractions import Fraction

from polybisim import lp


def F(v):
    return Fraction(v)


def test_single_variable_optimum():
    res = lp.maximize([F(1)], [[F(1)]], [F(3)])
    assert res.status == lp.OPTIMAL
    assert res.value == 3
    assert res.point == (F(3),)


def test_box_optimum():
    rows = [[F(1), F(0)], [F(-1), F(0)], [F(0), F(1)], [F(0), F(-1)]]
    rhs = [F(2), F(1), F(3), F(1)]
    res = lp.maximize([F(1), F(1)], rows, rhs)
    assert res.status == lp.OPTIMAL
    assert res.value == 5
    assert res.point == (F(2), F(3))


def test_negative_rhs_feasible():
    # x >= 1, x <= 4, maximize -x: needs the phase-1 artificial path
    res = lp.maximize([F(-1)], [[F(-1)], [F(1)]], [F(-1), F(4)])
    assert res.status == lp.OPTIMAL
    assert res.value == -1
    assert res.point == (F(1),)


def test_infeasible():
    res = lp.maximize([F(1)], [[F(1)], [F(-1)]], [F(0), F(-1)])
    assert res.status == lp.INFEASIBLE
    assert res.value is None
    assert res.point is None
    assert not res.is_feasible


def test_unbounded():
    res = lp.maximize([F(1)], [[F(-1)]], [F(0)])
    assert res.status == lp.UNBOUNDED


def test_exact_rational_answer():
    # maximize x subject to 3x <= 1: the answer is exactly 1/3
    res = lp.maximize([F(1)], [[F(3)]], [F(1)])
    assert res.value == Fraction(1, 3)


def test_degenerate_vertex():
    # three constraints meeting at the optimum must not cycle
    rows = [[F(1), F(1)], [F(1), F(0)], [F(0), F(1)], [F(-1), F(0)], [F(0), F(-1)]]
    rhs = [F(2), F(1), F(1), F(0), F(0)]
    res = lp.maximize([F(1), F(1)], rows, rhs)
    assert res.status == lp.OPTIMAL
    assert res.value == 2


def _vertex_oracle(obj, rows, rhs):
    """Best objective over all feasible pairwise intersection points.

    Valid for bounded 2-D feasible sets (the caller includes a box), where
    a nonempty set always has an optimal vertex.
    """
    best = None
    m = len(rows)
    for i in range(m):
        for j in range(i + 1, m):
            det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0]
            if det == 0:
                continue
            x = (rhs[i] * rows[j][1] - rows[i][1] * rhs[j]) / det
            y = (rows[i][0] * rhs[j] - rhs[i] * rows[j][0]) / det
            if all(r[0] * x + r[1] * y <= b for r, b in zip(rows, rhs)):
                v = obj[0] * x + obj[1] * y
                if best is None or v > best:
                    best = v
    return best


def test_random_bounded_instances_match_vertex_oracle():
    rng = random.Random(20260823)
    box_rows = [[F(1), F(0)], [F(-1), F(0)], [F(0), F(1)], [F(0), F(-1)]]
    box_rhs = [F(5)] * 4
    for _ in range(200):
        rows = list(box_rows)
        rhs = list(box_rhs)
        for _ in range(rng.randrange(1, 6)):
            a = F(rng.randrange(-3, 4))
            b = F(rng.randrange(-3, 4))
            if a == 0 and b == 0:
                a = F(1)
            rows.append([a, b])
            rhs.append(F(rng.randrange(-4, 7)))
        obj = [F(rng.randrange(-3, 4)), F(rng.randrange(-3, 4))]
        res = lp.maximize(obj, rows, rhs)
        expected = _vertex_oracle(obj, rows, rhs)
        if expected is None:
            assert res.status == lp.INFEASIBLE
        else:
            assert res.status == lp.OPTIMAL
            assert res.value == expected
