from fractions import Fraction

from toprec.dvv import dvv_intersection

F = Fraction


def test_dimension_constraint_gives_zero():
    assert dvv_intersection((1, 1), 0) == 0
    assert dvv_intersection((5,), 1) == 0


def test_genus_zero():
    assert dvv_intersection((0, 0, 0), 0) == 1
    assert dvv_intersection((1, 0, 0, 0), 0) == 1
    assert dvv_intersection((2, 0, 0, 0, 0), 0) == 1
    assert dvv_intersection((1, 1, 0, 0, 0), 0) == 2


def test_genus_one():
    assert dvv_intersection((1,), 1) == F(1, 24)
    assert dvv_intersection((0, 2), 1) == F(1, 24)
    assert dvv_intersection((1, 1), 1) == F(1, 24)
    assert dvv_intersection((2, 1, 0), 1) == F(1, 12)
    assert dvv_intersection((1, 1, 1), 1) == F(1, 12)


def test_genus_two_and_three():
    assert dvv_intersection((4,), 2) == F(1, 1152)
    assert dvv_intersection((5, 0), 2) == F(1, 1152)
    assert dvv_intersection((4, 1), 2) == F(1, 384)
    assert dvv_intersection((3, 2), 2) == F(29, 5760)
    assert dvv_intersection((7,), 3) == F(1, 82944)
