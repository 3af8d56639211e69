#!/usr/bin/env python3
"""Smoke test for the Python extension module.

Builds nothing itself: expects `cargo build -p symtensor-py` (or --release)
to have produced libsymtensor_py.so. Copies the shared object to an
importable name, then exercises each binding once against known values.

Run from anywhere: paths resolve relative to the repository root.
"""

import json
import math
import shutil
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libsymtensor_py.so",
        ROOT / "target" / "debug" / "libsymtensor_py.so",
    ]
    built = [c for c in candidates if c.exists()]
    if not built:
        sys.exit("libsymtensor_py.so not found; run `cargo build -p symtensor-py` first")
    stage = Path(tempfile.mkdtemp(prefix="symtensor-py-"))
    shutil.copy(built[0], stage / "symtensor_py.so")
    sys.path.insert(0, str(stage))
    import symtensor_py

    return symtensor_py


def frac(s):
    return Fraction(s)


def check_diagonalizer(st):
    bd = st.Diagonalizer(4, 2)
    assert bd.shapes() == [[4], [3, 1], [2, 2]], bd.shapes()
    assert bd.block_sizes() == [5, 3, 1]
    assert bd.algebra_dimension() == "35"
    assert sum(s * s for s in bd.block_sizes()) == 35

    ident = st.Element.identity(4, 2)
    for block in bd.apply(ident):
        size = len(block)
        for r in range(size):
            for c in range(size):
                want = 1.0 if r == c else 0.0
                assert abs(block[r][c] - want) < 1e-10, (r, c, block[r][c])

    # Summing every diagonal profile gives the element whose exact image is
    # the Gram matrix of each block.
    total = st.Element.zero(2, 2)
    for d in ([[2, 0], [0, 0]], [[1, 0], [0, 1]], [[0, 0], [0, 2]]):
        total = total.add(st.Element.basis(d))
    bd2 = st.Diagonalizer(2, 2)
    assert bd2.apply_exact(total) == [bd2.gram(0), bd2.gram(1)]

    dump = json.loads(bd2.tables_json(False))
    assert dump["kind"] == "blockdiag-full"
    assert dump["normalization"] == "exact"
    print("diagonalizer bindings ok")


def check_element_algebra(st):
    a = st.Element.basis([[1, 1], [0, 1]])
    b = a.adjoint()
    assert b.terms() == [([[1, 0], [1, 1]], "1")]
    prod = a.multiply(b)
    assert prod.n == 3 and prod.p == 2
    assert prod.coeff([[2, 0], [0, 1]]) == "2", prod.terms()
    try:
        a.multiply(st.Element.identity(2, 2))
    except ValueError:
        pass
    else:
        raise AssertionError("mismatched degrees should be rejected")
    print("element bindings ok")


def check_binary(st):
    for n in range(1, 8):
        for (i, j, t, k, _row, _col, beta, normalized) in st.binary_block_entries(n):
            assert st.binary_beta(i, j, k, t, n) == beta
            assert st.binary_beta_schrijver(i, j, k, t, n) == beta
            if i == j == t:
                assert frac(beta) == math.comb(n - 2 * k, i - k)
            ci = math.comb(n - 2 * k, i - k)
            cj = math.comb(n - 2 * k, j - k)
            assert abs(normalized - float(frac(beta)) / math.sqrt(ci * cj)) < 1e-12
    print("binary closed-form bindings ok")


def check_nonbinary(st):
    # An odd number of off-diagonal base matrices carries sqrt(q - 1).
    sectors = st.nonbinary_sectors([1, 1, 0, 0, 0], 2, 3)
    assert sectors, "expected at least one sector"
    for (_w, _profile, coeff) in sectors:
        assert "sqrt(2)" in coeff, coeff
    # An even number does not.
    for (_w, _profile, coeff) in st.nonbinary_sectors([0, 1, 1, 0, 0], 2, 3):
        assert "sqrt" not in coeff, coeff
    print("nonbinary closed-form bindings ok")


def check_general(st, scratch):
    base = st.Base.nonbinary(3)
    assert base.m == 3 and base.s == 5
    assert base.factor_sizes() == [2, 1]
    assert base.validate() == []

    path = scratch / "base.json"
    base.dump(path)
    again = st.Base.load(path)
    assert (again.m, again.s) == (base.m, base.s)

    ident = st.GenElement.identity(base, 2)
    for block in st.compose_numeric(ident, base):
        for r, row in enumerate(block):
            for c, x in enumerate(row):
                assert abs(x - (1.0 if r == c else 0.0)) < 1e-10

    # Degree-3 cube: the k-th distance class acts on the weight-w sector by
    # the linear Krawtchouk value n - 2w.
    cube = st.Base.binary_tfold(1)
    a1 = st.GenElement.basis([2, 1], 3)
    sectors = st.compose_exact(a1, cube)
    values = {tuple(mu): tuples[0][1][0][0] for mu, tuples in sectors}
    assert values == {(3, 0): "3", (2, 1): "1", (1, 2): "-1", (0, 3): "-3"}, values

    print("general construction bindings ok")
    return path


def check_schemas(st, scratch, base_path):
    from jsonschema import Draft7Validator
    from referencing import Registry, Resource

    schemas = {}
    for name in ("base-algebra", "sdp-program", "table-dump"):
        schemas[name] = json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values()
    )

    def validate(schema_name, doc):
        schema = schemas[schema_name]
        errors = list(Draft7Validator(schema, registry=registry).iter_errors(doc))
        assert not errors, (schema_name, [e.message for e in errors[:3]])

    validate("base-algebra", json.loads(base_path.read_text()))
    validate("table-dump", json.loads(st.Diagonalizer(3, 2).tables_json(True)))

    program = {
        "format_version": 1,
        "kind": "sdp-program",
        "algebra": {"type": "general", "base": "base.json", "n": 2},
        "objective": {"terms": [{"nu": [2, 0, 0, 0, 0], "coeff": "1"}]},
        "constraints": [
            {"terms": [{"nu": [0, 0, 0, 2, 0], "coeff": "1"}], "relation": ">=", "rhs": "1"}
        ],
    }
    validate("sdp-program", program)
    program_path = scratch / "program.json"
    program_path.write_text(json.dumps(program))
    out_path = scratch / "problem.dat-s"
    st.export_sdpa(program_path, out_path)
    text = out_path.read_text()
    assert text.startswith("*"), text[:80]
    assert text.splitlines()[1].strip() == "1"
    print("schema and export bindings ok")


def main():
    st = load_module()
    scratch = Path(tempfile.mkdtemp(prefix="symtensor-smoke-"))
    check_diagonalizer(st)
    check_element_algebra(st)
    check_binary(st)
    check_nonbinary(st)
    base_path = check_general(st, scratch)
    check_schemas(st, scratch, base_path)
    print("smoke test passed")


if __name__ == "__main__":
    main()
