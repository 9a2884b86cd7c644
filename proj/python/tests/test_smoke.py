import json
import math

import pytest

import lcmoment


def test_invert_sqrt_two():
    r = lcmoment.invert("-", [1.0], [1.0])
    assert r["status"] == "Converged"
    assert r["solution"]["knots"][0] == pytest.approx(math.sqrt(2.0), rel=1e-10)


def test_moments_round_trip():
    r = lcmoment.invert("+", [0.0, 2.0, 0.5], [1.0, 1.2, 0.81])
    m = lcmoment.moments(r["solution"], [0.0, 2.0, 0.5])
    assert m == pytest.approx([1.0, 1.2, 0.81], rel=1e-10)


def test_exponential_moments():
    m = lcmoment.moments({"order": 1, "sign": "+", "slopes": [1.0], "knots": []}, [0.0, 1.0, 2.0, 3.0])
    assert m == pytest.approx([1.0, 1.0, 2.0, 6.0], rel=1e-13)
    assert lcmoment.moments({"order": 0, "sign": "+", "slopes": [], "knots": [math.inf]}, [1.0]) == [math.inf]


def test_envelope_closed_form():
    e = lcmoment.envelope([0.0, 2.0], [1.0])
    assert e["lo"] == pytest.approx(1.0 / 3.0, rel=1e-9)
    assert e["hi"] == pytest.approx(2.0, rel=1e-9)
    assert e["parity"] == "MAX_IS_PLUS"


def test_khintchine():
    k = lcmoment.constants(4.0, 3.0)
    assert k["B"] == pytest.approx(3.0 ** 0.25, rel=1e-12)
    assert k["A"] == pytest.approx(math.sqrt(3.0) / 5.0 ** 0.25, rel=1e-12)
    assert lcmoment.constants(2.0, 3.0, 7)["A"] == 1.0
    assert lcmoment.gamma_p(2.0) == pytest.approx(1.0)


def test_errors():
    with pytest.raises(lcmoment.DomainError):
        lcmoment.invert("x", [1.0], [1.0])
    with pytest.raises(lcmoment.Error):
        lcmoment.envelope([0.0, 1.0, 2.0], [1.0, 3.0])
    assert lcmoment.invert("+", [0.0, 2.0], [1.0, 3.0])["status"] == "Infeasible"


def test_cli_in_process():
    code, out, _ = lcmoment.run("invert", "--sign", "-", "--exponents", 1, "--targets", 1)
    assert code == 0
    assert json.loads(out)["status"] == "Converged"
    assert lcmoment.run("bogus")[0] == 4
