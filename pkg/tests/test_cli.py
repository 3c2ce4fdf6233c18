import json
import subprocess
import sys
from pathlib import Path

import pytest

from pointfree.cli import COMMANDS, run
from pointfree.workspace import Workspace

SAMPLES = Path(__file__).resolve().parents[1] / "samples"
DEMO = str(SAMPLES / "demo.json")


def cli(*argv):
    return run(list(argv))


def write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


# -- documented examples ------------------------------------------------------------

def test_sheafcheck_product_presheaf():
    code, out = cli("sheafcheck", "SQUARE_PRODUCT")
    assert code == 0
    assert "oracle: sheaf; fast: sheaf; agree: yes" in out


def test_cidem_luk3():
    code, out = cli("cidem", "LUK3")
    assert code == 0 and "{0, 1}" in out


def test_points_sierp():
    code, out = cli("points", "SIERP")
    assert code == 0
    assert "2 points" in out and out.count("  p") == 2


def test_every_subcommand_has_a_handler():
    assert set(COMMANDS) == {
        "validate", "classify", "points", "spatial", "birkhoff", "pushout", "cidem", "idem",
        "cidem-lattice", "iota", "adjoint-slat", "adjoint-frm", "sheafcheck", "sheafify",
        "subterminals", "dayprod", "catloc-check", "catloc-embed", "suite"}


@pytest.mark.parametrize("argv, needle", [
    (["classify", "M3"], "witness: ('x', ('y', 'z'))"),
    (["spatial", "SQUARE"], "iso: yes"),
    (["birkhoff", "SIERP"], "u<top"),
    (["pushout", "SIERP", "SIERP"], "6 elements, 4 points"),
    (["idem", "NONTOP3"], "{1, t}"),
    (["cidem-lattice", "LUK3_SQ"], "(0,0), (0,1), (1,0), (1,1)"),
    (["iota", "TWO"], "unit = top"),
    (["adjoint-slat", "TWO", "LUK3"], "= 2"),
    (["adjoint-frm", "SIERP", "LUK3"], "round trips: identity"),
    (["sheafify", "SQUARE_CONST2"], "{'bot': 1, 'a': 2, 'b': 2, 'top': 4}"),
    (["subterminals", "SQUARE"], "4 subterminal sheaves"),
    (["dayprod", "SQUARE_PRODUCT", "SQUARE_PRODUCT"], "sheaf: yes"),
    (["catloc-check", "SIERP_LUK3"], "round trip: identity"),
    (["catloc-embed", "ID_TWO", "ID_TWO"], "morphisms ID_TWO -> ID_TWO: 1"),
    (["--only", "idem-cidem", "suite"], "PASS idem-cidem"),
])
def test_subcommands(argv, needle):
    code, out = cli(*argv)
    assert code == 0, out
    assert needle in out


def test_catloc_display_flips_direction():
    _, out = cli("catloc-check", "SIERP_LUK3")
    assert "locale map Sm(LUK3) -> SIERP" in out


# -- exit codes and witnesses ------------------------------------------------------------

def test_unknown_reference_exit_2():
    code, out = cli("points", "NOPE")
    assert code == 2 and "UnknownReference" in out


def test_bad_json_exit_2(tmp_path):
    code, out = cli("--input", write(tmp_path, "{not json"), "validate")
    assert code == 2 and "ParseError" in out


def test_missing_file_exit_2(tmp_path):
    code, _ = cli("--input", str(tmp_path / "absent.json"), "validate")
    assert code == 2


def test_wrong_arity_exit_2():
    assert cli("points")[0] == 2


def test_size_limit(tmp_path):
    doc = {"posets": {"C": {"elements": [str(i) for i in range(6)],
                            "leq": [[str(i), str(i + 1)] for i in range(5)]}}}
    path = write(tmp_path, doc)
    code, out = cli("--max-size", "5", "--input", path, "validate")
    assert code == 2 and "SizeLimitExceeded" in out
    assert cli("--input", path, "validate")[0] == 0


def test_duplicate_declaration(tmp_path):
    path = write(tmp_path, {"posets": {"P": {"elements": ["a"]}}})
    code, out = cli("--input", path, "--input", path, "validate")
    assert code == 2 and "duplicate" in out


def test_non_distributive_frame_exit_1_with_witness():
    code, out = cli("points", "M3")
    assert code == 1
    assert "witness: ('x', ('y', 'z'))" in out


def test_law_failure_on_load_exit_1(tmp_path):
    doc = {"quantales": {"Q": {"elements": ["0", "1"], "leq": [["0", "1"]],
                               "tensor": [["0", "0"], ["0", "0"]], "unit": "1"}}}
    code, out = cli("--report", "json", "--input", write(tmp_path, doc), "validate")
    assert code == 1
    rep = json.loads(out)["report"]
    assert rep["error"] == "LawViolation" and rep["law"] == "unit" and rep["witness"] == "1"


def test_cycle_exit_1(tmp_path):
    doc = {"posets": {"P": {"elements": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]}}}
    code, out = cli("--input", write(tmp_path, doc), "validate")
    assert code == 1 and "CycleError" in out


def test_bad_qlocale_structure_exit_1(tmp_path):
    doc = {"qlocales": {"X": {"space": "SQUARE", "cat": "LUK3",
                              "structure": {"bot": "0", "a": "1", "b": "1", "top": "1"}}}}
    code, out = cli("--input", write(tmp_path, doc), "catloc-check", "X")
    assert code == 1
    assert "LawViolation" in out and "witness: ('a', 'b')" in out


def test_not_a_sheaf_reports_failing_sieve(tmp_path):
    doc = {"presheaves": {"F": {"site": "SIERP", "sections": {
        "bot": ["p", "q"], "u": ["p", "q"], "top": ["p", "q"]},
        "restrictions": {"u>bot": {"p": "p", "q": "q"}, "top>u": {"p": "p", "q": "q"}}}}}
    code, out = cli("--input", write(tmp_path, doc), "sheafcheck", "F")
    assert code == 0
    assert "oracle: not a sheaf; fast: not a sheaf; agree: yes" in out
    assert "'sieve': []" in out and "bottom" in out


def test_pushout_needs_common_source():
    code, out = cli("--input", DEMO, "pushout", "pick_l", "SIERP")
    assert code == 1 and "('SIERP', 'TWO')" in out


def test_unknown_suite_criterion():
    assert cli("--only", "nope", "suite")[0] == 2


# -- json reports --------------------------------------------------------------------

ROUND_TRIP = [
    ["validate"], ["spatial", "V3"], ["birkhoff", "V3"], ["pushout", "pick_l", "pick_r"],
    ["pushout", "SIERP", "SIERP"], ["cidem-lattice", "CH3"], ["iota", "V3"],
    ["sheafify", "SQUARE_CONST2"], ["subterminals", "V3"],
    ["dayprod", "SQUARE_PRODUCT", "SQUARE_CONST2"], ["catloc-check", "V3_CH3"],
    ["catloc-check", "SIERP_LUK3"], ["sheafcheck", "ONE_SECTION"],
]


@pytest.mark.parametrize("argv", ROUND_TRIP, ids=lambda a: a[0])
def test_json_round_trip(tmp_path, argv):
    code, out = cli("--input", DEMO, "--report", "json", *argv)
    assert code == 0, out
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["report"]["ok"]
    path = write(tmp_path, out)
    code, again = cli("--input", path, "--report", "json", "validate")
    assert code == 0, again
    ws = Workspace().load(doc)
    for section in ("posets", "lattices", "quantales", "morphisms", "presheaves", "qlocales"):
        assert set(doc.get(section, {})) == set(getattr(ws, section))


def test_validate_is_a_fixed_point(tmp_path):
    _, first = cli("--input", DEMO, "--report", "json", "validate")
    path = write(tmp_path, first)
    _, second = cli("--input", path, "--report", "json", "validate")
    a, b = json.loads(first), json.loads(second)
    for section in ("lattices", "quantales", "morphisms", "presheaves", "qlocales"):
        assert a[section] == b[section]


def test_reports_are_deterministic():
    for argv in (["--input", DEMO, "--report", "json", "pushout", "pick_l", "pick_r"],
                 ["--seed", "5", "--only", "sheaf-criterion", "suite"]):
        assert cli(*argv) == cli(*argv)


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "pointfree.cli", "cidem", "LUK3"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "{0, 1}" in out.stdout
