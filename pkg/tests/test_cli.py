"""Problem parsing, command dispatch, report determinism, exit codes."""

import json
from pathlib import Path

import pytest

from toricwall.cli import (Problem, build_parser, dispatch, main,
                           parse_problem, serialize_report)
from toricwall.errors import ParseError, UnknownCommand, ValidationError

PROBLEMS = Path(__file__).resolve().parents[1] / "src/toricwall/problems"


def flags(**kw):
    base = ["wall", str(PROBLEMS / "flop.json")]
    args = build_parser().parse_args(base)
    args.y = kw.pop("y", [0.25, 0.5])
    args.seed = kw.pop("seed", 7)
    for k, v in kw.items():
        setattr(args, k, v)
    return args


def test_parse_bundled_flop():
    p = parse_problem(str(PROBLEMS / "flop.json"))
    assert p.git.D == ((1,), (1,), (-1,), (-1,))
    assert p.omega_plus == [1]
    assert p.omega_minus == [-1]
    assert p.seed == 20260823


def test_parse_all_bundled_files():
    for name in ("flop", "c3z3", "p1", "gerbe", "rank2flop"):
        p = parse_problem(str(PROBLEMS / f"{name}.json"))
        assert p.git.m >= 1


def test_parse_rejects_bad_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        parse_problem(str(bad))


def test_parse_rejects_missing_file():
    with pytest.raises(ParseError):
        parse_problem("/nonexistent/problem.json")


def test_validation_noninteger_character():
    doc = {"schema": 1, "rank": 1, "characters": [[1], [0.5]],
           "omega_plus": [1]}
    with pytest.raises(ValidationError) as exc:
        Problem(doc)
    assert "characters[1][0]" in str(exc.value)


def test_validation_wrong_schema():
    with pytest.raises(ValidationError) as exc:
        Problem({"schema": 2, "rank": 1, "characters": [[1]],
                 "omega_plus": [1]})
    assert "schema" in str(exc.value)


def test_validation_omega_length():
    doc = {"schema": 1, "rank": 2, "characters": [[1, 0]],
           "omega_plus": [1]}
    with pytest.raises(ValidationError) as exc:
        Problem(doc)
    assert "omega_plus" in str(exc.value)


def test_rational_omega_accepted():
    doc = {"schema": 1, "rank": 1, "characters": [[1], [1], [-1], [-1]],
           "omega_plus": ["1/2"], "omega_minus": ["-3/2"]}
    p = Problem(doc)
    assert p.wall().e == (1,)


def test_dispatch_wall_flop():
    p = parse_problem(str(PROBLEMS / "flop.json"))
    rep = dispatch("wall", p, flags())
    assert rep["pass"]
    body = rep["results"]["wall"]
    assert body["e"] == [1]
    assert body["w"] == 1
    assert body["conifold"] == "1"
    assert body["j_minus"] == [3, 4]


def test_dispatch_wall_c3z3():
    p = parse_problem(str(PROBLEMS / "c3z3.json"))
    rep = dispatch("wall", p, flags())
    body = rep["results"]["wall"]
    assert body["w"] == 2
    assert body["conifold"] == "-1/27"
    assert body["l_list"] == [0, 0, 0, 3]


def test_dispatch_unknown_command():
    p = parse_problem(str(PROBLEMS / "flop.json"))
    with pytest.raises(UnknownCommand):
        dispatch("frobnicate", p, flags())


def test_degenerate_stability_surfaces():
    doc = {"schema": 1, "rank": 1, "characters": [[1], [1], [-1], [-1]],
           "omega_plus": [0], "omega_minus": [-1]}
    rep = dispatch("chambers", Problem(doc), flags())
    assert not rep["pass"]
    assert rep["error"]["code"] == "degenerate-stability"


def test_wall_required_for_single_chamber():
    p = parse_problem(str(PROBLEMS / "p1.json"))
    rep = dispatch("wall", p, flags())
    assert not rep["pass"]
    assert rep["error"]["code"] == "validation-error"


def test_report_determinism():
    p1 = parse_problem(str(PROBLEMS / "flop.json"))
    p2 = parse_problem(str(PROBLEMS / "flop.json"))
    a = dispatch("coeffs", p1, flags(seed=11))
    b = dispatch("coeffs", p2, flags(seed=11))
    a.pop("runtime_seconds")
    b.pop("runtime_seconds")
    assert serialize_report(a) == serialize_report(b)
    c = dispatch("coeffs", parse_problem(str(PROBLEMS / "flop.json")),
                 flags(seed=12))
    c.pop("runtime_seconds")
    assert serialize_report(a) != serialize_report(c)


def test_main_exit_codes(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["wall", str(PROBLEMS / "flop.json"), "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["pass"] is True
    rc = main(["wall", str(PROBLEMS / "p1.json"), "--out", str(out)])
    assert rc == 1


def test_main_verify_ih_p1(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["verify-ih", str(PROBLEMS / "p1.json"), "--trunc-y", "1",
               "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["results"]["relation"]["pass"]


def test_mb_verify_rejects_rank2(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["mb-verify", str(PROBLEMS / "rank2flop.json"),
               "--out", str(out)])
    assert rc == 1
    report = json.loads(out.read_text())
    assert report["error"]["code"] == "validation-error"
