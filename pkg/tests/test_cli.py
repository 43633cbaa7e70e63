import json
import subprocess
import sys
from fractions import Fraction

import pytest

from shift_entropy.algebraic import PLASTIC, is_exact
from shift_entropy.cli import Config, main, parse_real

from conftest import PLASTIC_ROOT


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_config_validation():
    assert Config().tol == 1e-12
    for bad in ({"precision_bits": 32}, {"tol": 0}, {"max_iter": 0}, {"output": "xml"}):
        with pytest.raises(ValueError):
            Config(**bad)


def test_parse_real_keeps_exact_values_exact():
    r = parse_real("1/(1+plastic)")
    assert r.exact and is_exact(r.value) and r.value == 1 / (1 + PLASTIC)
    assert parse_real("3/4").value == Fraction(3, 4)
    assert parse_real("-2 + 5").value == 3


def test_parse_real_treats_decimals_as_approximate():
    r = parse_real("1.32471795724")
    assert not r.exact and r.hit_tol == pytest.approx(1e-8)
    assert float(r.value) == pytest.approx(1.32471795724)


@pytest.mark.parametrize("text", ["", "2**3", "foo", "1/"])
def test_parse_real_rejects_junk(text):
    with pytest.raises(ValueError):
        parse_real(text)


def test_code_examples(capsys):
    code, out, _ = run(capsys, "code", "--alpha", "0", "--beta", "2", "--len", "8", "--json")
    data = json.loads(out)
    assert code == 0 and data["u"]["string"] == "(0)" and data["v"]["string"] == "(1)"
    assert data["u"]["exactness"] == "exact"
    code, out, _ = run(capsys, "code", "--alpha", "0", "--beta", "golden", "--len", "8", "--json")
    assert json.loads(out)["v"]["string"] == "(10)"
    code, out, _ = run(capsys, "code", "--alpha", "0.43015970905", "--beta", "1.32471795724", "--len", "12", "--json")
    data = json.loads(out)
    assert data["u"]["prefix"] == "010101010101" and data["v"]["prefix"] == "110110110110"


def test_code_rejects_bad_params(capsys):
    code, _, err = run(capsys, "code", "--alpha", "0.5", "--beta", "0.5")
    assert code == 1 and "BadParams" in err


def test_entropy_examples(capsys):
    code, out, _ = run(capsys, "entropy", "--u", "(01)", "--v", "(110)", "--json")
    data = json.loads(out)
    assert code == 0 and data["beta_bar"] == pytest.approx(PLASTIC_ROOT, abs=1e-9)
    code, out, _ = run(capsys, "entropy", "--u", "(0)", "--v", "(1)")
    assert code == 0 and "h         = 1.0" in out


def test_entropy_reversed_pair_warns_and_reports_zero(capsys, caplog):
    code, out, _ = run(capsys, "entropy", "--u", "(01)", "--v", "(10)", "--json")
    data = json.loads(out)
    assert code == 0 and data["entropy_log2"] == 0.0 and "k2_reversed" in data["flags"]
    assert "strict condition fails" in caplog.text


def test_entropy_inadmissible_exits_two(capsys):
    code, _, err = run(capsys, "entropy", "--u", "(10)", "--v", "(110)")
    assert code == 2 and "condition violation" in err


def test_graph_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "graph", "--u", "(0)", "--v", "(10)", "--mode", "collapse", "--format", "dot")
    assert code == 0 and out.startswith("digraph") and out.count("->") == 3
    code, out, _ = run(capsys, "graph", "--u", "(0)", "--v", "(1)", "--mode", "truncate", "--K", "4", "--format", "json")
    assert code == 0 and json.loads(out)["truncation_level"] == 4
    target = tmp_path / "g.json"
    code, out, _ = run(capsys, "graph", "--u", "(01)", "--v", "(110)", "--format", "json", "--out", str(target))
    assert code == 0 and "wrote 4 vertices" in out
    assert len(json.loads(target.read_text())["adjacency"]) == 4


def test_invert_examples(capsys):
    code, out, _ = run(capsys, "invert", "--u", "(01)", "--v", "(110)", "--json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "matched"
    assert data["alpha_bar"] == pytest.approx(0.4301597, abs=1e-7)
    code, out, _ = run(capsys, "invert", "--u", "(0)", "--v", "(1)", "--json")
    assert code == 0 and (json.loads(out)["alpha_bar"], json.loads(out)["beta_bar"]) == (0.0, 2.0)
    code, out, _ = run(capsys, "invert", "--u", "(00110111)", "--v", "(11100110)")
    assert code == 3 and "not_representable" in out


def test_invert_undetermined_exit_code(capsys):
    code, out, _ = run(capsys, "invert", "--u", "(01)", "--v", "(10)")
    assert code == 4 and "undetermined" in out


def test_check_examples(capsys):
    code, out, _ = run(capsys, "check", "--u", "(01)", "--v", "(110)")
    assert code == 0 and "strict condition holds" in out
    code, out, _ = run(capsys, "check", "--u", "(0)", "--v", "(1)", "--json")
    assert code == 0 and json.loads(out)["weak"]
    code, out, _ = run(capsys, "check", "--u", "(10)", "--v", "(110)", "--json")
    data = json.loads(out)
    assert code == 2 and not data["u_starts_zero"]


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as e:
        main(["entropy", "--u", "(01)"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 1


def test_global_flags_before_or_after_subcommand(capsys):
    _, a, _ = run(capsys, "--json", "--tol", "1e-10", "entropy", "--u", "(0)", "--v", "(10)")
    _, b, _ = run(capsys, "entropy", "--u", "(0)", "--v", "(10)", "--json", "--tol", "1e-10")
    assert json.loads(a) == json.loads(b)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "shift_entropy", "check", "--u", "(01)", "--v", "(110)"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0 and "strict condition holds" in proc.stdout
