"""Smoke test for the Python bindings. Run after `maturin develop`."""

from fractions import Fraction

import symplectic_embed as se


def main():
    assert se.cap_seq(1, 4, 8) == [0, 1, 2, 3, 4, 4, 5, 5, 6]
    assert se.weight_sequence(12, 5) == [5, 5, 2, 2, 1, 1]
    assert se.continued_fraction(12, 5) == [2, 2, 2]
    assert se.cap_of_ball_list([1, 1, 1, 1], 10) == se.cap_seq(1, 4, 10)
    assert se.sharp([0, 1, 1], [0, 1, 1]) == [0, 1, 2]
    assert se.dominance_violation([0, 2], [0, 1]) == 1

    e14 = se.Ellipsoid(1, 4)
    yes = se.decide([e14], se.Ellipsoid(2))
    assert yes and yes.verdict == "yes"
    assert se.capacity_check([e14], se.Ellipsoid(2), 1000) is None
    no = se.decide([e14], se.Ellipsoid("199/100"))
    assert not no and no.certificate_kind == "volume_violation"

    alpha = se.ConeClass(1, [Fraction(41, 100)] * 5)
    assert not se.in_cone_closure(alpha)
    d, m, pairing = se.constraint_scan(alpha)
    assert (d, m, pairing) == (2, [1, 1, 1, 1, 1], Fraction(-1, 20))
    assert se.ConeClass(2, [1, 1, 1]).cremona() == se.ConeClass(1, [0, 0, 0])

    assert se.ball_packing(["1/2"] * 4, 1)
    lo, hi = se.staircase_point(4, "0.001")
    assert lo <= 2 <= hi and hi - lo <= Fraction(1, 1000)
    lo, hi = se.squeeze(se.Ellipsoid(1, 2), se.Ellipsoid(1), Fraction(1, 100))
    assert lo <= Fraction(1, 2) <= hi
    print("python smoke test passed")


if __name__ == "__main__":
    main()
