"""Smoke test for the `lmt` extension module.

Build and install first:  pip install --no-build-isolation -e crates/lmt-py
Then run:                 python3 python/smoke_test.py
"""

from pathlib import Path

import lmt

ROOT = Path(__file__).resolve().parent.parent
EXAMPLES = ROOT / "crates" / "lmt-cli" / "examples"


def main_term(name):
    decls = dict(lmt.load_program((EXAMPLES / name).read_text()))
    return decls["main"]


def test_parse_and_print():
    t = lmt.parse("\\x:N. S x")
    assert str(t) == "\\x:N. S x"
    assert str(t.type_of()) == "N -> N"
    assert lmt.parse("catch 'a (throw 0 'a)") == lmt.parse("catch 'b (throw 0 'b)")
    assert str(lmt.numeral(4)) == "4"


def test_type_errors_raise():
    try:
        lmt.parse("S (\\x:N. x)").type_of()
    except TypeError as e:
        assert "expected N" in str(e)
    else:
        raise AssertionError("ill-typed term accepted")


def test_product_program():
    nf, steps = lmt.normalize(main_term("f_product.lmt"), trace=True)
    assert nf.as_int() == 0
    assert steps and all(rule for rule, _, _ in steps)


def test_restricted_successor():
    t = main_term("suc_restricted.lmt")
    assert [str(u) for u in lmt.normal_forms(t)] == ["4"]
    forms = sorted(u.as_int() for u in lmt.normal_forms(t, unsafe_suc_prime=True))
    assert forms == [2, 4]


def test_development_and_cps():
    t = lmt.parse("(mu 'a:N -> N. ['a] mu 'g:N -> N. ['a] x) y")
    assert lmt.classify(t) == "eta-wrapped-mu"
    dev = lmt.complete_dev(t)
    assert str(dev) == "catch 'a (x y)"
    assert all(dev in lmt.par_reducts(r) for _, r in lmt.reducts(t))
    u = lmt.parse("catch 'a (S (throw 2 'a))")
    c = lmt.cps(u)
    assert c.is_mu_free()
    assert c.type_of() == lmt.cps_type(lmt.Type("N"))
    assert lmt.cps_run(u) == 2


def test_fuzz():
    r = lmt.fuzz("subject-reduction", cases=20, seed=3)
    assert r["cases"] == 20 and r["violations"] == []


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok  {name}")
