"""Smoke test for the positroidal Python module.

Build and install first:  pip install --no-build-isolation -e crates/python
Then run:  python python/smoke_test.py   (or pytest python/smoke_test.py)
"""

from fractions import Fraction

import positroidal


def test_weight_and_split():
    t = positroidal.Tableau("1;4", 2, 5)
    assert t.columns == [[1, 4]]
    assert positroidal.wt(t) == [0, 0, 0, 0, 1, 1, 0, 1, 0, 0]

    sub = positroidal.subdivide(t)
    assert len(sub) == 2
    c = sub.classification
    assert c["isSplit"] and c["isPositroidal"] and c["isCoarsest"]
    assert c["affineDim"] == 6


def test_union_is_additive():
    t1 = positroidal.Tableau.column(3, 7, [3, 4, 7])
    t2 = positroidal.Tableau.column(3, 7, [4, 6, 7])
    u = t1.union(t2)
    assert u.quotient(t1) == t2
    w = [a + b for a, b in zip(t1.weight(), t2.weight())]
    assert u.weight() == w
    assert w[-1] == 3


def test_weight_input_and_shift():
    base = positroidal.regular_subdivision(2, 5, [0, 0, 0, 0, 1, 0, 0, 0, 0, 0])
    halved = positroidal.regular_subdivision(2, 5, [0, 0, 0, 0, Fraction(1, 2), 0, 0, 0, 0, "0/1"])
    assert base.canonical_key() == halved.canonical_key()
    assert halved.weight[4] == Fraction(1, 2)


def test_reports():
    census = positroidal.split_census(2, 6, compatibility=False)
    assert census["splitCount"] == census["formula"] == 9
    report = positroidal.verify("fixtures")
    assert report["verdict"] == "pass"
    tree = positroidal.tree_split(7, 2, 5)
    assert tree["left"] == [3, 4, 5] and tree["right"] == [6, 7, 1, 2]
    assert tree["dot"].startswith("graph")


def test_errors():
    for bad in (lambda: positroidal.Tableau("2;1", 2, 4), lambda: positroidal.tree_split(4, 1, 2)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        positroidal.split_census(3, 9)
    except RuntimeError as e:
        assert "84" in str(e)
    else:
        raise AssertionError("expected the source budget to trip")


def test_matroids():
    assert positroidal.is_matroid([[1, 2], [1, 3], [2, 3]])
    assert not positroidal.is_matroid([[1, 2], [3, 4]])
    assert positroidal.is_positroid([[1, 2], [1, 3], [2, 3]], 3)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
