import json
import subprocess
import sys

import pytest

from ncourant.cli import main

KRON = """\
vertices: 1 2
arrow a: 1 -> 2
arrow b: 1 -> 2 weight 0
double weight 2
"""

COMMANDS = [
    ["parse", "a.star * a.hat", "--quiver", "jordan", "--standard"],
    ["mul", "a", "a*a", "--quiver", "jordan"],
    ["d", "a*d(a)", "--quiver", "jordan"],
    ["d", "a*a", "--dr", "--quiver", "jordan"],
    ["bracket", "a", "a.star", "--quiver", "jordan", "--standard", "--assoc"],
    ["bracket", "D(a)", "a*a", "--quiver", "jordan"],
    ["contract", "D(a)", "d(a)*d(a.star)", "--quiver", "jordan", "--standard", "--reduced"],
    ["hamiltonian", "a.star*a.hat", "--quiver", "jordan", "--standard"],
    ["pairing", "a^", "a^*", "--quiver", "jordan", "--standard"],
    ["standard", "--quiver", "kronecker"],
    ["twist", "x*d(x)*d(y)*d(y)", "--quiver", "two-loops"],
    ["check", "courant", "--quiver", "jordan"],
    ["check", "casimir", "--quiver", "jordan", "--standard", "--json"],
]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_and_render(capsys):
    code, out, _ = run(capsys, ["parse", "a.star * a.hat", "--quiver", "jordan", "--standard"])
    assert code == 0
    assert out.splitlines()[0] == "a**a^"


def test_flags_before_command(capsys):
    code, out, _ = run(capsys, ["--quiver", "jordan", "--json", "mul", "a", "a"])
    assert code == 0
    data = json.loads(out)
    assert data == {"command": "mul", "result": "a*a", "schema": 1}


def test_quiver_file(tmp_path, capsys):
    f = tmp_path / "k.quiver"
    f.write_text(KRON)
    code, out, _ = run(capsys, ["check", "double-poisson", "--quiver", str(f), "--weight-bound", "2"])
    assert code == 0
    assert out.startswith("PASS double-poisson")


def test_check_failure_exit_code(capsys):
    code, out, _ = run(capsys, ["check", "master", "--form", "x*d(x)*d(y)*d(y)", "--quiver", "two-loops"])
    assert code == 1
    assert out.startswith("FAIL master")


def test_json_report(capsys):
    code, out, _ = run(capsys, ["check", "master", "--quiver", "two-loops", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1 and data["passed"] is True


@pytest.mark.parametrize("argv", [
    ["parse", "zz", "--quiver", "jordan"],
    ["parse", "a", "--quiver", "no-such-quiver"],
    ["parse", "a"],
    ["hamiltonian", "a", "--quiver", "jordan"],
    ["standard", "--quiver", "jordan", "--standard"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, argv)
    assert code == 2
    assert "error" in err


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "no-such-suite", "--quiver", "jordan"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", COMMANDS, ids=[" ".join(c[:2]) for c in COMMANDS])
def test_byte_deterministic(argv):
    cmd = [sys.executable, "-m", "ncourant.cli", *argv]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False, env={"PYTHONHASHSEED": "123", "PATH": ""})
    assert first.returncode in (0, 1)
    assert first.stdout == second.stdout
    assert first.stdout
