import json
from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from epscns import cli, cns
from epscns.cli import EXIT_INCONCLUSIVE, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_cns_check_example(capsys):
    code, body = run(capsys, "cns", "check", "--poly", "x^2+2x+2", "--eps", "0/1")
    assert code == EXIT_OK and body["is_cns"] is True and body["schema"] == "epscns.cns/1"


def test_srs_decide_example(capsys):
    code, body = run(capsys, "srs", "decide", "--r", "1/2,1", "--eps", "1/2")
    assert code == EXIT_OK and body["verdict"] == "point_in_D0"


def test_cns_expand_example(capsys):
    code, body = run(capsys, "cns", "expand", "--poly", "x^2+2x+2", "--eps", "0/1", "--value", "-1,0")
    assert code == EXIT_OK and body["digits"] == [1, 0, 1, 1, 1]


def test_srs_orbit_negative_vectors(capsys):
    code, body = run(capsys, "srs", "orbit", "--r", "-1/4,1/4", "--eps", "1/4", "--z", "-1,1")
    assert code == EXIT_OK and body["schema"] == "epscns.orbit/1"


def test_cns_check_algorithmic_agrees(capsys):
    code, body = run(capsys, "cns", "check", "--poly", "x^2-2x+2", "--eps", "0/1", "--algorithmic")
    assert code == EXIT_OK and body["agree"] is True and body["is_cns"] is False
    assert body["algorithmic"]["evidence"]["failure_cycle"]


def test_cns_check_cubic_routes_algorithmically(capsys):
    code, body = run(capsys, "cns", "check", "--poly", "x^3+x^2+x+2", "--eps", "0/1", "--box-radius", "3")
    assert code in (EXIT_OK, EXIT_INCONCLUSIVE)
    assert "closed_form" not in body.get("route", "")


@pytest.mark.parametrize("argv", [
    ["cns", "check", "--poly", "x^2+2x+2", "--eps", "0.5"],
    ["srs", "decide", "--r", "1/2,x", "--eps", "1/2"],
    ["srs", "decide", "--r", "1/2,1", "--eps", "3/2"],
    ["cns", "expand", "--poly", "x^2+2x+2", "--eps", "0/1", "--value", "1"],
    ["cns", "check", "--poly", "2x^2+1", "--eps", "0/1"],
    ["harness", "lemmas", "--which", "nope", "--eps", "1/4"],
    ["harness", "lemmas", "--which", "delta1", "--eps", "3/4"],
    ["region", "sample", "--eps", "1/4", "--grid", "1"],
    ["srs", "orbit", "--r", "1/2,1/2", "--eps", "0/1", "--z", "1,1", "--orbit-steps", "0"],
    ["bogus"],
    [],
])
def test_usage_errors(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == EXIT_USAGE


def test_orbit_cap_is_inconclusive(capsys):
    code, body = run(capsys, "srs", "orbit", "--r", "1/2,1/2", "--eps", "0/1", "--z", "5,7", "--orbit-steps", "1")
    assert code == EXIT_INCONCLUSIVE and body["outcome"]["kind"] == "cap_exceeded"


def test_expand_cap_is_inconclusive(capsys):
    code, body = run(capsys, "cns", "expand", "--poly", "x^2+2x+2", "--eps", "0/1", "--value", "-1,0",
                     "--orbit-steps", "2")
    assert code == EXIT_INCONCLUSIVE and body["cap_exceeded"] == 2


def test_decide_cap_is_inconclusive(capsys):
    code, body = run(capsys, "srs", "decide", "--r", "1/2,1/2", "--eps", "1/4", "--witness-cap", "2",
                     "--depth", "1", "--search-radius", "1")
    assert code == EXIT_INCONCLUSIVE and body["verdict"] == "inconclusive"


# --- forced mismatches ------------------------------------------------------------


def test_forced_mismatch_check(capsys, monkeypatch):
    monkeypatch.setattr(cns, "is_eps_cns_closed_form", lambda p0, p1, eps: False)
    code, body = run(capsys, "cns", "check", "--poly", "x^2+2x+2", "--eps", "0/1", "--algorithmic",
                     "--box-radius", "5")
    assert code == EXIT_MISMATCH and body["agree"] is False


def test_forced_route_disagreement(capsys, monkeypatch):
    def boom(*a, **k):
        raise cns.RouteDisagreement("forced")
    monkeypatch.setattr(cns, "is_eps_cns_algorithmic", boom)
    code, body = run(capsys, "cns", "check", "--poly", "x^2+2x+2", "--eps", "0/1", "--algorithmic")
    assert code == EXIT_MISMATCH and body["agree"] is False


@settings(max_examples=25, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(case=st.integers(2, 6).flatmap(lambda a: st.tuples(st.sampled_from([a, -a]), st.integers(-a - 2, a + 2))),
       eps=st.sampled_from([F(0), F(1, 4), F(1, 2), F(3, 4)]), flip=st.booleans())
def test_exit_code_contract(case, eps, flip, capsys, monkeypatch):
    p0, p1 = case
    truth = cns.is_eps_cns_closed_form(p0, p1, eps)
    with monkeypatch.context() as m:
        if flip:
            m.setattr(cns, "is_eps_cns_closed_form", lambda a, b, e: not truth)
        poly = str(cns.MonicPolynomial((p0, p1)))
        code = main(["cns", "check", "--poly", poly, "--eps", f"{eps.numerator}/{eps.denominator}",
                     "--algorithmic", "--box-radius", "5"])
        body = json.loads(capsys.readouterr().out)
    if body.get("algorithmic", {}).get("is_cns") is None and "error" not in body:
        assert code == EXIT_INCONCLUSIVE
    elif flip:
        assert code == EXIT_MISMATCH
    else:
        assert code == EXIT_OK


def test_forced_mismatch_characterize(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr(cns, "is_eps_cns_closed_form", lambda p0, p1, eps: p1 == 0)
    code, body = run(capsys, "harness", "characterize", "--p0-max", "2", "--out", str(tmp_path))
    assert code == EXIT_MISMATCH and body["disagreements"]


def test_forced_mismatch_region_sample(capsys, monkeypatch, tmp_path):
    from epscns import atlas
    monkeypatch.setattr(atlas, "srs_pola", lambda x, y: False)
    code, body = run(capsys, "region", "sample", "--eps", "1/2", "--grid", "3", "--out", str(tmp_path))
    assert code == EXIT_MISMATCH and body["mismatches"]


def test_lemma_mismatch_exit(capsys, tmp_path):
    code, body = run(capsys, "harness", "lemmas", "--which", "delta18", "--eps", "1/8", "--out", str(tmp_path))
    assert code == EXIT_MISMATCH and body["reports"][0]["ok"] is False


# --- artifacts --------------------------------------------------------------------


def test_region_sample_files_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        code, body = run(capsys, "region", "sample", "--eps", "1/2", "--grid", "4", "--out", str(d))
        assert code == EXIT_OK and not body["mismatches"]
    for name in ("sample-eps-1_2-grid-4.csv", "sample-eps-1_2-grid-4.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    svg = (a / "sample-eps-1_2-grid-4.svg").read_text()
    assert svg.startswith("<?xml") or "<svg" in svg
    assert "generator: epscns-svg" in svg
    rows = (a / "sample-eps-1_2-grid-4.csv").read_text().splitlines()
    assert rows[0] == "x,y,verdict" and "0/1,0/1,in" in rows


def test_region_sample_parallel_identical(capsys, tmp_path):
    for d, jobs in ((tmp_path / "s", "1"), (tmp_path / "p", "2")):
        assert run(capsys, "region", "sample", "--eps", "1/3", "--grid", "3", "--jobs", jobs, "--out", str(d))[0] == EXIT_OK
    name = "sample-eps-1_3-grid-3.csv"
    assert (tmp_path / "s" / name).read_bytes() == (tmp_path / "p" / name).read_bytes()


def test_region_sample_conjecture_block(capsys, tmp_path):
    code, body = run(capsys, "region", "sample", "--eps", "1/4", "--grid", "3", "--conjecture", "--out", str(tmp_path))
    assert code in (EXIT_OK, EXIT_INCONCLUSIVE)
    assert body["conjecture"]["points"] > 0


def test_lemma_files_deterministic(capsys, tmp_path):
    for d in ("a", "b"):
        code, body = run(capsys, "harness", "lemmas", "--which", "delta1,deltaC", "--eps", "1/4",
                         "--out", str(tmp_path / d))
        assert code == EXIT_OK
    for name in ("lemma-delta1-eps-1_4.json", "lemma-deltaC-eps-1_4.json"):
        raw = (tmp_path / "a" / name).read_bytes()
        assert raw == (tmp_path / "b" / name).read_bytes()
        assert json.loads(raw)["schema"] == "epscns.lemma/1"


def test_lemma_appendix_file_name(capsys, tmp_path):
    code, _ = run(capsys, "harness", "lemmas", "--which", "delta18s", "--n", "4", "--s", "5", "--eps", "2/25",
                  "--out", str(tmp_path))
    assert code == EXIT_OK
    assert (tmp_path / "lemma-delta18s-n4-eps-2_25.json").exists()


def test_characterize_small(capsys, tmp_path):
    code, body = run(capsys, "harness", "characterize", "--p0-max", "3", "--out", str(tmp_path))
    assert code == EXIT_OK and body["disagreements"] == [] and body["cases"] == 2 * (11 * 8 + 13 * 12)
    first = (tmp_path / "characterize-p0max-3.csv").read_bytes()
    run(capsys, "harness", "characterize", "--p0-max", "3", "--out", str(tmp_path))
    assert (tmp_path / "characterize-p0max-3.csv").read_bytes() == first


# --- configuration ----------------------------------------------------------------


def test_config_precedence(tmp_path, monkeypatch):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("# caps\norbit_steps = 7\nbox-radius=9\nout = from-file\n")
    parser = cli.build_parser()

    def cfg(*extra):
        return cli.build_config(parser.parse_args(["srs", "decide", "--r", "1/2,1", "--eps", "1/2",
                                                   "--config", str(cfg_file), *extra]))

    monkeypatch.delenv(cli.OUT_ENV, raising=False)
    c = cfg()
    assert (c.orbit_steps, c.box_radius, c.out, c.depth) == (7, 9, "from-file", 12)
    monkeypatch.setenv(cli.OUT_ENV, "from-env")
    assert cfg().out == "from-env"
    c = cfg("--out", "from-flag", "--orbit-steps", "11")
    assert (c.out, c.orbit_steps) == ("from-flag", 11)


def test_env_out_directory(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "envout"))
    code, _ = run(capsys, "region", "sample", "--eps", "1/2", "--grid", "2")
    assert code == EXIT_OK
    assert (tmp_path / "envout" / "sample-eps-1_2-grid-2.csv").exists()


def test_bad_config_line(tmp_path, capsys):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("colour = blue\n")
    code = main(["srs", "decide", "--r", "1/2,1", "--eps", "1/2", "--config", str(cfg_file)])
    assert code == EXIT_USAGE
