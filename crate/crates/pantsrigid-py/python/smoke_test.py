"""Quick check of the Python bindings. Build first with
`maturin develop --release` (or `pip install .`) from crates/pantsrigid-py.
"""

import json

import pantsrigid as pr


def main():
    gamma = pr.gamma_curves(8)
    assert len(gamma) == 20

    a = pr.Curve.round(5, [1, 2])
    b = pr.Curve.round(5, [2, 3])
    assert a.i(b) == 2
    assert a.i(pr.Curve.round(5, [3, 4])) == 0
    assert pr.Curve(5, a.crossings()) == a

    # Triangle identity for the half-twists.
    lhs = pr.Word.half_twist(b, 1).apply(a)
    rhs = pr.Word.half_twist(a, -1).apply(b)
    assert lhs == rhs

    w = pr.Word(5, [["sigma", 2, 1], ["reflect"]])
    c = w.apply(b)
    assert w.inverse().apply(c) == b
    assert w.to_list() == [["sigma", 2, 1], ["reflect"]]

    core = pr.Pants.core_pentagon()
    assert len(core) == 5 and len(core[0].curves()) == 2

    z6 = pr.Graph.z(6)
    assert (z6.vertex_count(), z6.edge_count()) == (14, 21)
    x5 = pr.Graph.x5()
    assert (x5.vertex_count(), x5.edge_count()) == (25, 45)
    assert x5.index(core[0]) is not None
    again = pr.Graph.from_json(x5.to_json())
    assert again.to_json() == x5.to_json()
    assert x5.to_dot().count(" -- ") == 45

    small = pr.Graph.ball(core[0], 1, 1)
    assert small.vertex_count() == 7

    rep = pr.verify("sym")
    assert rep["summary"] == {"verified": 1, "violated": 0, "skipped": 0}

    res = pr.search(radius=2, twist_bound=2)
    assert res["falsified"] == 0
    print(json.dumps({"ok": True, "x5": [x5.vertex_count(), x5.edge_count()]}))


if __name__ == "__main__":
    main()
