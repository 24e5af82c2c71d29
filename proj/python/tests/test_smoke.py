import json

import numpy as np
import pytest
import sympy as sp

import rmono


def real_labels(doc):
    return [entry["x"] for entry in doc["labels"]]


def test_version_and_builtins():
    assert rmono.__version__ == "0.1.0"
    assert set(rmono.builtins()) >= {"ex21", "univariate", "modified34", "kuramoto3", "rpr3"}


def test_solve_ex21_against_closed_form():
    doc = rmono.solve("ex21")
    assert doc["schema"] == 1
    assert doc["command"] == "solve"
    # x1^2 - x2^2 = 1, 2 x1 x2 = 0: real solutions (+-1, 0).
    assert doc["degree"] == 4
    reals = [tuple(round(v, 9) for v in x) for x in real_labels(doc)]
    assert reals == [(-1.0, 0.0), (1.0, 0.0)]


def rpr3_real_solutions(c1, c2):
    """Independent oracle: half-angle substitution, linear solve for p, exact real roots."""
    a2, a3, b3, A2, A3, B3, c3 = 14, 7, 10, 16, 9, 6, 100
    p1, p2, t = sp.symbols("p1 p2 t")
    f1 = (1 - t**2) / (1 + t**2)
    f2 = 2 * t / (1 + t**2)
    pp = p1**2 + p2**2
    e2 = pp - 2 * (a3 * p1 + b3 * p2) * f1 + 2 * (b3 * p1 - a3 * p2) * f2 + a3**2 + b3**2 - c1
    e3 = (pp - 2 * A2 * p1 + 2 * ((a2 - a3) * p1 - b3 * p2 + A2 * a3 - A2 * a2) * f1
          + 2 * (b3 * p1 + (a2 - a3) * p2 - A2 * b3) * f2 + (a2 - a3) ** 2 + b3**2 + A2**2 - c2)
    e4 = pp - 2 * (A3 * p1 + B3 * p2) + A3**2 + B3**2 - c3
    sol = sp.solve([sp.expand(e2 - e4), sp.expand(e3 - e4)], [p1, p2], dict=True)[0]
    poly = sp.Poly(sp.numer(sp.together(e4.subs(sol))), t)
    out = []
    for r in sp.real_roots(poly):
        tv = float(r)
        vals = {t: tv}
        out.append((float(sol[p1].subs(vals)), float(sol[p2].subs(vals)),
                    float(f1.subs(vals)), float(f2.subs(vals))))
    return out


def test_rpr3_home_position_against_elimination():
    doc = rmono.solve("rpr3")
    ours = np.array(real_labels(doc), dtype=float)
    oracle = np.array(rpr3_real_solutions(75, 70))
    assert len(ours) == 6
    assert len(oracle) == 6
    for x in oracle:
        assert np.min(np.linalg.norm(ours - x, axis=1)) < 1e-6


def test_evaluate_matches_hand_computation():
    v = rmono.evaluate("ex21", [1 + 1j, 2], [0.5, 0])
    # x1^2 - x2^2 - p1 and 2 x1 x2 - p2
    assert v[0] == pytest.approx((1 + 1j) ** 2 - 4 - 0.5)
    assert v[1] == pytest.approx(2 * (1 + 1j) * 2)


def test_print_system_and_parse_error():
    text = rmono.print_system("var x; par p; eq x^2 + 1 - p^2;")
    assert "x" in text and "p" in text
    with pytest.raises(rmono.ParseError):
        rmono.print_system("var x; par p; eq x + * 2;")


def test_invalid_configuration_raises_value_error():
    with pytest.raises(ValueError):
        rmono.Session("ex21", res=5)
    with pytest.raises(ValueError):
        rmono.Session("no-such-system")


def test_cgroup_ex21_is_klein():
    doc = rmono.cgroup("ex21")
    assert doc["order"] == 4


def test_ex21_pipeline_and_determinism():
    a = rmono.Session("ex21", res=61)
    b = rmono.Session("ex21", res=61)
    ra, rb = a.rstruct(), b.rstruct()
    assert rmono.strip_timing(ra) == rmono.strip_timing(rb)
    assert ra["R"] == 2
    assert ra["real_monodromy_group"]["order"] == 2
    assert a.regions_svg().startswith("<svg")
    assert "G_2" in a.rstruct_text()


def test_modified34_partition():
    doc = rmono.rstruct("modified34", res=101)
    assert doc["partition"] == [[1, 2], [3, 4]]
