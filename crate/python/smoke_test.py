"""Smoke test for the matsep_py extension module.

Build the extension first, then run this file:

    cargo build --release -p matsep-py
    cp target/release/libmatsep_py.so python/matsep_py.so   # .dylib on macOS
    python python/smoke_test.py
"""

import json
import sys

sys.path.insert(0, "python")

import matsep_py as m


def scalar(re="0/1", im="0/1"):
    return {"re": re, "im": im}


def tuple_doc(mats):
    return json.dumps({"n": len(mats), "matrices": mats})


E12 = tuple_doc([[[scalar(), scalar("1/1")], [scalar(), scalar()]]])
ZERO = tuple_doc([[[scalar(), scalar()], [scalar(), scalar()]]])
IDENT = tuple_doc([[[scalar("1/1"), scalar()], [scalar(), scalar("1/1")]]])


def main():
    e12 = m.Tuple.from_json(E12)
    zero = m.Tuple.from_json(ZERO)
    ident = m.Tuple.from_json(IDENT)

    assert e12.n == 1
    assert json.loads(e12.to_json()) == json.loads(E12), "round trip"
    assert e12.is_trace_zero() and not ident.is_trace_zero()

    prof = m.invariants_conj(e12)
    assert prof == [("tr(1)", "0/1", "0/1"), ("det(1)", "0/1", "0/1")], prof

    equiv, witness = m.separate_conj_full(e12, zero)
    assert equiv and witness is None, "E12 vs 0 must be inseparable"
    assert m.separate_conj_reduced(e12, zero)

    equiv, witness = m.separate_conj_full(e12, ident)
    assert not equiv and witness == "tr(1)", (equiv, witness)

    equiv, _ = m.separate_leftright(e12, zero)
    assert equiv, "det(E12) = det(0) = 0: inseparable under the two-sided action"
    equiv, witness = m.separate_leftright(e12, ident)
    assert not equiv and witness == "det(1)", (equiv, witness)

    assert m.triangularizable(e12)

    sizes = json.loads(m.sizes(5))
    assert sizes["S_n"] == 30 and sizes["S_prime"] == 27 and sizes["dim_conj"] == 17
    assert sizes["H_set"] == 20 and sizes["dim_H"] == 14

    rset = json.loads(m.reduced_set(4))
    assert rset["n"] == 4 and len(rset["combinations"]) == 4

    # the two-component example pair
    def tz(b, c):
        mats = [
            [[scalar(f"{bi}/1"), scalar(f"{ci}/1")], [scalar(), scalar(f"{-bi}/1")]]
            for bi, ci in zip(b, c)
        ]
        return m.Tuple.from_json(tuple_doc(mats))

    a = tz([1, 1, 1], [0, 1, 1])
    b = tz([1, 1, 1], [0, 0, 1])
    assert m.classify(a, b) == "ExtraComponentOnly"

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
