import io
import json
import subprocess
import sys

import pytest

from hoperads.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_tree_tips():
    assert run("tree", "tips", "[[*,*],[*]]") == (0, "3\n", "")


def test_tree_parse_and_prune():
    code, out, _ = run("tree", "parse", "[[],[*]]")
    assert code == 0 and out == "[[],[*]]\nlevels 1 2 1\n"
    assert run("tree", "prune", "[[],[*]]")[1] == "[[*]]\n"
    assert run("tree", "parse", "[]", "--height", "2")[1].endswith("levels 1 0 0\n")


def test_tree_compose_and_enumerate():
    assert run("tree", "compose", "[[*],[*]]", "[[*],[*,*]]", "1")[1] == "[[*,*],[*,*,*]]\n"
    assert run("tree", "enumerate", "1", "2")[1] == "[*,*]\n[*]\n[]\n"
    assert run("tree", "enumerate", "2", "4", "--pruned", "--count")[1] == "15\n"


def test_hom_counts():
    assert run("hom", "[[*],[*]]", "[[*,*]]", "--count")[1] == "2\n"
    assert run("hom", "[[*],[*]]", "[[*,*]]", "--all", "--count")[1] == "4\n"
    code, out, _ = run("hom", "[[*],[*]]", "[[*,*]]", "--json")
    assert code == 0 and len(json.loads(out)) == 2


def test_fibers_of_switch():
    code, out, _ = run("fibers", "[[*],[*]]", "[[*,*]]", "--index", "1")
    assert code == 0
    assert out.splitlines()[1:] == ["tip 1: [[],[*]]", "tip 2: [[*],[]]", "permutation 2 1"]


def test_chains_and_nerve():
    assert run("chains", "[*,*,*,*]", "--count")[1] == "13\n"
    code, out, _ = run("nerve", "[*,*,*]", "--json")
    data = json.loads(out)
    assert code == 0 and data["euler_characteristic"] == 1 and data["has_terminal"]
    assert run("chains", "[*,*,*]", "--dot")[1].startswith("digraph chains {")


def test_polytopes():
    code, out, _ = run("polytope", "assoc", "4", "--json")
    assert code == 0 and json.loads(out)["f_vector"] == [5, 5, 1]
    assert run("polytope", "perm", "4")[1] == "f-vector 6 6 1\n"
    assert run("polytope", "braid", "[[*,*],[*]]", "--strict")[1] == "f-vector 3 3 1\n"
    tonks = json.loads(run("polytope", "tonks", "4", "--json")[1])
    assert tonks["collapsed_by_rank"] == {"0": 2, "1": 1}
    assert run("polytope", "assoc", "5", "--count")[1] == "45\n"


def test_cubes():
    code, out, _ = run("cubes", "realize", "[*,*,*]")
    assert out == "1: [0,1/3]\n2: [1/3,2/3]\n3: [2/3,1]\n"
    data = json.loads(run("cubes", "endpoints", "[[*],[*]]", "[[*,*]]", "--index", "1",
                          "--json")[1])
    assert len(data["start"]["boxes"]) == len(data["end"]["boxes"]) == 2
    assert run("cubes", "realize", "[[*],[*]]", "--svg")[1].startswith("<svg")


def test_tree_from_file(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("[[*,*],[*]]\n")
    assert run("tree", "tips", f"@{path}")[1] == "3\n"


@pytest.mark.parametrize("argv,code,kind", [
    (("tree", "tips", "[[*]"), 2, "parse_error"),
    (("polytope", "assoc", "9"), 3, "bounds"),
    (("polytope", "braid", "[[*],[]]"), 4, "invariant_violation"),
    (("tree", "compose", "[[*]]", "[[*],[*]]", "1"), 4, "invariant_violation"),
    (("frobnicate",), 1, "usage"),
    (("cubes", "endpoints", "[*]"), 1, "usage"),
    (("polytope", "perm", "3", "--svg"), 1, "usage"),
])
def test_error_exit_codes(argv, code, kind):
    got, out, err = run(*argv)
    assert got == code and out == ""
    assert json.loads(err)["error"] == kind


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hoperads", "tree", "tips", "[*,*]"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "2\n"
