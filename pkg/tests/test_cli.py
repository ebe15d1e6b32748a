import io
import json
import math
from fractions import Fraction

import pytest

from cmseq.cli import decode_scalar, run


CATALAN_30 = ",".join(str(math.comb(2 * n, n) // (n + 1)) for n in range(31))


def call(*argv, env=None):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_fc():
    code, out = call("fc", "--p", "2", "--r", "1", "--count", "6")
    assert code == 0 and json.loads(out) == ["1", "1", "2", "5", "14", "42"]


def test_check_cm_violation():
    code, out = call("check-cm", "--terms", "1,0,1")
    assert code == 1
    assert json.loads(out)["witness"] == {"j": 1, "k": 1, "value": "-1"}


def test_check_cm_ok():
    code, out = call("check-cm", "--terms", "1,1/2,1/3,1/4")
    assert code == 0 and json.loads(out)["max_order"] == 3


def test_wp():
    code, out = call("wp", "--p", "2", "--t", "2")
    assert code == 0 and float(out) == pytest.approx(0.25)


def test_irrational_refused(capsys):
    code, _ = call("fc", "--p", "sqrt(2)")
    assert code == 2
    assert "exact mode" in capsys.readouterr().err


def test_float_mode():
    code, out = call("fc", "--p", "2.5", "--count", "3", "--precision", "float")
    assert code == 0 and isinstance(json.loads(out)[2], float)


def test_env_precision(monkeypatch):
    monkeypatch.setenv("CMSEQ_PRECISION", "float")
    code, out = call("check-cm", "--terms", "1,0.5,0.25")
    assert code == 0
    monkeypatch.setenv("CMSEQ_PRECISION", "bogus")
    assert call("fc", "--p", "2")[0] == 2


def test_unknown_flag():
    assert call("fc", "--p", "2", "--bogus")[0] == 2
    assert call("nosuch")[0] == 2


def test_numeric_failure():
    assert call("canonical", "--terms", "2,1")[0] == 2


def test_file_input(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("# uniform\n1\n1/2\n1/3\n")
    code, out = call("leading-diff", "--file", str(path))
    assert code == 0 and json.loads(out) == ["1", "1/2", "1/3"]


@pytest.mark.parametrize("argv,expected_code", [
    (["check-alt", "--terms", "0,1,2,3"], 0),
    (["check-dilated", "--terms", CATALAN_30, "--tau", "3"], 1),
    (["check-dilated", "--terms", CATALAN_30, "--tau", "4"], 0),
    (["convex", "--terms", "1,2/3,1/2,2/5"], 0),
    (["concave", "--terms", "1,2/3,1/2,2/5"], 1),
    (["dilate", "--terms", "1,1/2,1/4", "--p", "1/2", "--decay", "0"], 0),
    (["compound", "--terms", "0,1,0", "--outer", "1/2,1/4,1/8"], 0),
    (["binomial", "--p", "2", "--count", "4"], 0),
    (["fc-canonical", "--p", "3", "--count", "4"], 0),
    (["canonical", "--terms", "1,1,2,5"], 0),
    (["convpow", "--terms", "1,1,1,1", "--r", "1/2"], 0),
    (["grouplaw", "--terms", "1,1/2,1/4,1/8", "--r", "1/3", "--s", "2"], 0),
    (["bp-eval", "--p", "2", "--z", "0.1+0.2j"], 0),
    (["epr-eval", "--p", "2", "--r", "2", "--z", "-1"], 0),
    (["pick-scan", "--p", "2", "--nx", "8", "--ny", "8"], 0),
    (["pick-scan", "--kind", "zBpr", "--p", "2", "--r", "5", "--arc", "1", "--nx", "400"], 1),
    (["atom-mass", "--p", "2", "--side", "left"], 0),
    (["density-moment", "--n", "3", "--all"], 0),
    (["w2", "--t", "1"], 0),
    (["binom-integral", "--r", "5", "--k", "2"], 0),
    (["reconstruct", "--terms", "1,1/2,1/3,1/4", "--format", "csv"], 0),
    (["reconstruct", "--terms", "1,0,1"], 1),
    (["spectra", "--N", "40", "--trials", "4", "--n-max", "2", "--rel-tol", "0.2"], 0),
])
def test_exit_codes(argv, expected_code):
    assert call(*argv)[0] == expected_code


def test_json_round_trip():
    _, out = call("convpow", "--terms", "1,1,1,1", "--r", "1/2")
    assert [decode_scalar(v) for v in json.loads(out)] == [1, Fraction(1, 2), Fraction(3, 8),
                                                           Fraction(5, 16)]
    _, out = call("bp-eval", "--p", "2", "--z", "-1")
    val = decode_scalar(json.loads(out)["value"])
    assert isinstance(val, complex) and val.real == pytest.approx(0.618034, abs=1e-6)


def test_plain_and_csv_formats():
    assert call("fc", "--p", "2", "--count", "4", "--format", "plain")[1] == "1 1 2 5\n"
    assert call("fc", "--p", "2", "--count", "3", "--format", "csv")[1] == "1\n1\n2\n"
