"""Smoke test for the pygdet extension.

Build with `cargo build -p gdet-python` (or `maturin develop -m crates/python/Cargo.toml`)
and run `python3 python/smoke_test.py [path/to/libpygdet.so]`.
"""

import importlib
import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("pygdet")
    except ImportError:
        pass
    if len(sys.argv) > 1:
        candidates = [pathlib.Path(sys.argv[1])]
    else:
        candidates = [ROOT / "target" / p / "libpygdet.so" for p in ("release", "debug")]
    lib = next((c for c in candidates if c.exists()), None)
    if lib is None:
        sys.exit("libpygdet.so not found; run `cargo build -p gdet-python` first")
    tmp = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "pygdet.so")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("pygdet")


def circulant_det(a):
    # independent determinant, if sympy is installed
    try:
        import sympy
    except ImportError:
        return None
    n = len(a)
    return int(sympy.Matrix(n, n, lambda i, j: a[(i - j) % n]).det())


def main():
    g = load()

    assert g.dihedral_measure([1, 1], [1], 5) == 3
    assert g.cyclic_measure([2], 4) == 16
    assert g.dihedral_measure([0, 1, 1], [1, 1, 1], 3) == -5
    assert g.abelian_measure([1, 1, 1, 0], [2, 2]) == -3
    assert g.group_determinant("dihedral:3", [0, 1, 1, 1, 1, 1]) == -5
    assert g.cayley_determinant([[0, 1], [1, 0]], [3, 1]) == 8
    assert g.log_measure(0, 4) is None

    a = [3, -1, 4, 1, -5, 9, 2]
    want = circulant_det(a)
    if want is not None:
        assert g.cyclic_measure(a, 7) == want

    assert g.cyclotomic(12) == [1, 0, -1, 0, 1]
    assert g.resultant([-1, 1], [1, 1]) == 2
    assert g.cyclo_resultant(1, 9) == 3

    ok, reasons = g.admissible(3, 6)
    assert not ok and reasons[0]["prime"] == 3
    assert g.admissible(5, 6) == (True, [])
    assert g.lambda_lower_bound(6) == 5

    for n, want in [(6, 5), (2310, 13), ("2^1*3^1*5^1*7^1*11^1*13^1", 16)]:
        cert = g.certified_lambda(n)
        assert cert["status"] == "exact" and cert["lambda"] == want, cert

    value, fa, fb = g.exhaustive_min(3, -1, 1)
    assert abs(value) == g.certified_lambda(3)["lambda"]
    assert g.dihedral_measure(fa, fb, 3) == value

    scan = g.value_scan("dihedral:2", -1, 1, max_abs=10)
    assert all(abs(v) <= 10 for v, _, _ in scan)
    assert sum(c for _, c, _ in scan) <= 3**4

    w = g.odd_coprime(7, 10)
    assert w.verify() and w.claimed == w.measure()
    three = g.odd_coprime(3, 10)
    both = w.compose(three)
    assert both.verify() and both.claimed == w.claimed * three.claimed
    assert g.two_power(12).verify()
    assert g.odd_prime_power(3, 18).verify()
    assert g.d2p2(5).claimed == 5**5

    round_trip = g.Witness.from_json(w.to_json())
    assert json.loads(round_trip.to_json()) == json.loads(w.to_json())
    assert not g.Witness(3, [2], [], 5).verify()

    try:
        g.exhaustive_min(12, -3, 3)
    except OverflowError:
        pass
    else:
        raise AssertionError("expected OverflowError")

    print("pygdet smoke test: ok")


if __name__ == "__main__":
    main()
