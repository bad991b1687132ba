import math
import os

import pytest

from mprlab.scenario import (
    Scenario,
    ScenarioError,
    parse_scenario,
    render_scenario,
    run_scenario,
)

MINIMAL = """\
# smallest useful scenario
name = demo
mode = analyze
n = 10
m = 2
"""


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


def assert_finite_cells(path):
    header, rows = read_csv(path)
    assert rows
    for row in rows:
        assert len(row) == len(header)
        for cell in row:
            try:
                assert math.isfinite(float(cell))
            except ValueError:
                assert cell  # non-numeric columns must be non-empty


def test_parse_minimal():
    s = parse_scenario(MINIMAL)
    assert s.name == "demo"
    assert s.mode == "analyze"
    assert s.params == {"n": 10, "m": 2}
    assert s.output_path == "."


def test_parse_ignores_comments_and_blanks():
    s = parse_scenario("mode = fixpoint\n\n# note\nn = 5  # trailing\nm = 1\n")
    assert s.params["n"] == 5


def test_parse_requires_mode():
    with pytest.raises(ScenarioError, match="mode"):
        parse_scenario("n = 10\nm = 1\n")


def test_parse_rejects_unknown_mode():
    with pytest.raises(ScenarioError, match="line 1"):
        parse_scenario("mode = dance\n")


def test_parse_rejects_unknown_key():
    with pytest.raises(ScenarioError, match="line 2: unknown key 'bogus'"):
        parse_scenario("mode = analyze\nbogus = 3\n")


def test_parse_rejects_bad_value_with_line_number():
    with pytest.raises(ScenarioError,
                       match=r"line 2: 'm' must be an integer >= 1"):
        parse_scenario("mode = analyze\nm = -1\n")
    with pytest.raises(ScenarioError, match="line 3"):
        parse_scenario("mode = analyze\nm = 2\nr = 0.5\n")
    with pytest.raises(ScenarioError, match="expects int"):
        parse_scenario("mode = analyze\nm = two\n")


def test_parse_rejects_malformed_lines():
    with pytest.raises(ScenarioError, match="line 1"):
        parse_scenario("just some words\n")
    with pytest.raises(ScenarioError, match="empty value"):
        parse_scenario("mode =\n")


def test_render_parse_round_trip():
    s = parse_scenario("mode = simulate\nname = x\nn = 20\nm = 2\nr = 2.5\n"
                       "access_mode = basic\nseed = 9\n")
    assert parse_scenario(render_scenario(s)) == s


def test_run_analyze_asymptotic(tmp_path):
    s = Scenario(name="a", mode="analyze", params={"m": 1, "lam": 1.0})
    (path,) = run_scenario(s, out_dir=str(tmp_path))
    header, rows = read_csv(path)
    assert header[-1] == "s_bits_per_sec"
    s_over_r = float(rows[0][-1]) / 54e6
    assert s_over_r == pytest.approx(math.exp(-1), rel=1e-9)
    assert_finite_cells(path)


def test_run_analyze_finite_fixed_point(tmp_path):
    s = Scenario(name="a", mode="analyze",
                 params={"n": 50, "m": 4, "w0": 16, "r": 2.0})
    (path,) = run_scenario(s, out_dir=str(tmp_path))
    header, rows = read_csv(path)
    p_t = float(rows[0][header.index("p_t")])
    assert p_t == pytest.approx(0.0597862963316, abs=1e-9)


def test_run_fixpoint_frozen_row(tmp_path):
    s = Scenario(name="f", mode="fixpoint",
                 params={"n": 50, "m": 4, "w0": 16, "r": 2.0})
    (path,) = run_scenario(s, out_dir=str(tmp_path))
    header, rows = read_csv(path)
    got = dict(zip(header, rows[0]))
    assert float(got["p_t"]) == pytest.approx(0.0597862963316, abs=1e-9)
    assert float(got["n_p_t"]) == pytest.approx(2.98931481658, abs=1e-7)
    assert float(got["residual"]) < 1e-12


def test_run_scan_matches_anchors(tmp_path):
    s = Scenario(name="s", mode="scan", params={"m_max": 2})
    (path,) = run_scenario(s, out_dir=str(tmp_path))
    _, rows = read_csv(path)
    per_m = {int(r[0]): float(r[2]) for r in rows}
    assert per_m[1] == pytest.approx(0.367879, abs=1e-6)
    assert per_m[2] == pytest.approx(0.4200, abs=1e-3)


def test_run_optimal_r_single_m(tmp_path):
    s = Scenario(name="o", mode="optimal-r", params={"m": 1})
    (path,) = run_scenario(s, out_dir=str(tmp_path))
    _, rows = read_csv(path)
    assert float(rows[0][2]) == pytest.approx(1 / (1 - math.exp(-1)),
                                              abs=1e-3)


def test_run_simulate_deterministic(tmp_path):
    params = {"n": 8, "m": 2, "w0": 16, "r": 2.0, "seed": 3,
              "warmup_slots": 100, "measure_slots": 5000}
    s = Scenario(name="sim", mode="simulate", params=params)
    (p1,) = run_scenario(s, out_dir=str(tmp_path / "a"))
    (p2,) = run_scenario(s, out_dir=str(tmp_path / "b"))
    with open(p1, "rb") as f1, open(p2, "rb") as f2:
        assert f1.read() == f2.read()
    assert_finite_cells(p1)


def test_run_simulate_seed_override_changes_output(tmp_path):
    params = {"n": 8, "m": 2, "warmup_slots": 100, "measure_slots": 5000}
    s = Scenario(name="sim", mode="simulate", params=params)
    (p1,) = run_scenario(s, out_dir=str(tmp_path / "a"), seed=1)
    (p2,) = run_scenario(s, out_dir=str(tmp_path / "b"), seed=2)
    with open(p1) as f1, open(p2) as f2:
        assert f1.read() != f2.read()


def test_run_phy_writes_report_and_matrices(tmp_path):
    s = Scenario(name="p", mode="phy",
                 params={"k": 2, "m_rx": 4, "n_sym": 16, "trials": 20,
                         "snr_db": 25.0})
    paths = run_scenario(s, out_dir=str(tmp_path))
    names = {os.path.basename(p) for p in paths}
    assert names == {"phy.csv", "phy_last_y.txt", "phy_last_h.txt",
                     "phy_last_x_hat.txt"}
    header, rows = read_csv(os.path.join(str(tmp_path), "phy.csv"))
    got = dict(zip(header, rows[0]))
    assert float(got["detect_rate"]) >= 0.9
    assert float(got["source_count_rate"]) >= 0.9
    from mprlab.matio import load_matrix
    y = load_matrix(os.path.join(str(tmp_path), "phy_last_y.txt"))
    assert y.shape == (4, 16)


def test_run_reproduce_figure1(tmp_path):
    s = Scenario(name="r", mode="reproduce", params={"figure": 1})
    (path,) = run_scenario(s, out_dir=str(tmp_path))
    _, rows = read_csv(path)
    ratios = [float(r[1]) for r in rows]
    assert len(ratios) == 30
    assert ratios[0] == pytest.approx(0.367879, abs=1e-6)
    assert all(b >= a for a, b in zip(ratios, ratios[1:]))


def test_run_reproduce_needs_known_figure(tmp_path):
    s = Scenario(name="r", mode="reproduce", params={"figure": 99})
    with pytest.raises(ScenarioError, match="figure 99"):
        run_scenario(s, out_dir=str(tmp_path))
    s2 = Scenario(name="r", mode="reproduce", params={})
    with pytest.raises(ScenarioError, match="figure"):
        run_scenario(s2, out_dir=str(tmp_path))


def test_run_reproduce_figure_override(tmp_path):
    s = Scenario(name="r", mode="reproduce", params={})
    (path,) = run_scenario(s, out_dir=str(tmp_path), figure=10)
    header, rows = read_csv(path)
    assert os.path.basename(path) == "figure10.csv"
    effs = {(r[1], int(r[0])): float(r[2]) for r in rows}
    assert effs[("aloha", 10)] == pytest.approx(0.80, abs=0.05)
    for m in range(1, 11):
        assert effs[("rtscts", m)] >= 0.95


def test_missing_required_key_is_reported():
    s = Scenario(name="a", mode="analyze", params={})
    with pytest.raises(ScenarioError, match="missing required key"):
        run_scenario(s, out_dir=".")


def test_refuses_non_finite_cells(tmp_path):
    from mprlab.scenario import _write_csv
    with pytest.raises(ScenarioError, match="non-finite"):
        _write_csv(str(tmp_path / "bad.csv"), ["x"], [(math.nan,)])
    with pytest.raises(ScenarioError, match="non-finite"):
        _write_csv(str(tmp_path / "bad.csv"), ["x"], [(math.inf,)])


def test_row_width_must_match_header(tmp_path):
    from mprlab.scenario import _write_csv
    with pytest.raises(ScenarioError, match="row width"):
        _write_csv(str(tmp_path / "bad.csv"), ["a", "b"], [(1.0,)])


def test_thread_fanout_matches_serial(tmp_path, monkeypatch):
    s = Scenario(name="o", mode="optimal-r", params={"m_max": 4})
    (serial,) = run_scenario(s, out_dir=str(tmp_path / "serial"))
    monkeypatch.setenv("MPRLAB_THREADS", "4")
    (fanned,) = run_scenario(s, out_dir=str(tmp_path / "fanned"))
    with open(serial) as f1, open(fanned) as f2:
        assert f1.read() == f2.read()
