"""Config parsing and the sweep front end: CSV schema, determinism, errors."""

import pytest

from dcfsim.cli import (
    CSV_COLUMNS,
    ConfigError,
    main,
    parse_config,
)

HEADER = (
    "config,name,d_s_m,seed,plr,mu_d_us,sigma_d_us,d_min_us,p99_us,p999_us,"
    "mu_a,mu_r_mbps,mu_p_uw,"
    "f_6,f_9,f_12,f_18,f_24,f_36,f_48,f_54,"
    "s_6,s_9,s_12,s_18,s_24,s_36,s_48,s_54"
)


def write(tmp_path, text, name="sweep.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_csv_schema_is_frozen():
    assert ",".join(CSV_COLUMNS) == HEADER


def test_minimal_config_fills_defaults(tmp_path):
    sweeps = parse_config(write(tmp_path, "scenarios = NO_INT\n"))
    assert len(sweeps) == 1
    sw = sweeps[0]
    assert sw.label == "sweep"
    assert sw.scenario == "NO_INT"
    assert sw.positions_m == tuple(float(d) for d in range(1, 51))
    assert sw.duration_s == 2000.0
    assert sw.error_model == "threshold"
    assert sw.mac.retry_limit == 13
    assert sw.radio.tx_power_dbm == pytest.approx(16.0206)


def test_full_config_roundtrip(tmp_path):
    text = """
scenarios = NO_INT, HIDDEN
positions_m = 1, 5, 10:12
base_seed = 7
duration_s = 25
error_model = analytic

[mac]
retry_limit = 4
cw_max = 255

[traffic_int]
idle_mean_s = 0.5
"""
    sweeps = parse_config(write(tmp_path, text))
    assert [s.scenario for s in sweeps] == ["NO_INT", "HIDDEN"]
    for sw in sweeps:
        assert sw.positions_m == (1.0, 5.0, 10.0, 11.0, 12.0)
        assert sw.base_seed == 7
        assert sw.duration_s == 25.0
        assert sw.error_model == "analytic"
        assert sw.mac.retry_limit == 4
        assert sw.mac.cw_max == 255
        assert sw.mac.cw_min == 15
        assert sw.int_traffic.idle_mean_s == 0.5


def test_position_range_with_step(tmp_path):
    sweeps = parse_config(write(tmp_path, "scenarios = NO_INT\npositions_m = 1:2:0.5\n"))
    assert sweeps[0].positions_m == (1.0, 1.5, 2.0)


@pytest.mark.parametrize(
    "text,lineno,fragment",
    [
        ("scenarios = NO_INT\nbogus_key = 1\n", 2, "bogus_key"),
        ("scenarios = NO_INT\n[warp_drive]\n", 2, "unknown section"),
        ("scenarios = NO_INT\n[mac]\nwarp = 9\n", 3, "warp"),
        ("scenarios = NO_INT\n[mac]\nretry_limit = soon\n", 3, "retry_limit"),
        ("scenarios = MAYBE_INT\n", 1, "MAYBE_INT"),
        ("scenarios = NO_INT\npositions_m = 0\n", 2, "minimum"),
        ("scenarios = NO_INT\nduration_s = -5\n", 2, "positive"),
        ("scenarios = NO_INT\njust some words\n", 2, "key = value"),
        ("error_model = psychic\n", 1, "psychic"),
    ],
)
def test_malformed_config_names_line(tmp_path, text, lineno, fragment):
    path = write(tmp_path, text)
    with pytest.raises(ConfigError) as err:
        parse_config(path)
    assert f"{path}:{lineno}:" in str(err.value)
    assert fragment in str(err.value)


TINY = """
scenarios = NO_INT
positions_m = 1, 10
base_seed = 3
duration_s = 5
"""


def test_tiny_run_writes_csv_and_manifest(tmp_path):
    cfg = write(tmp_path, TINY, "tiny.cfg")
    out = tmp_path / "out"
    assert main(["--config", str(cfg), "--out", str(out)]) == 0
    csv = (out / "tiny_NO_INT.csv").read_text().splitlines()
    assert csv[0] == HEADER
    assert len(csv) == 3
    first = csv[1].split(",")
    assert first[0] == "tiny"
    assert first[1] == "NO_INT"
    assert first[2] == "1"
    assert float(first[4]) == 0.0  # plr
    assert 100.0 < float(first[5]) < 300.0  # mu_d_us
    manifest = (out / "manifest.txt").read_text()
    assert "tool: dcfsim" in manifest
    assert manifest.count("point d=") == 2
    assert "wall_s=" in manifest


def test_rerun_is_bit_identical(tmp_path):
    cfg = write(tmp_path, TINY, "tiny.cfg")
    assert main(["--config", str(cfg), "--out", str(tmp_path / "a")]) == 0
    assert main(["--config", str(cfg), "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "tiny_NO_INT.csv").read_bytes()
    b = (tmp_path / "b" / "tiny_NO_INT.csv").read_bytes()
    assert a == b


def test_parallel_matches_serial(tmp_path):
    cfg = write(tmp_path, TINY, "tiny.cfg")
    assert main(["--config", str(cfg), "--out", str(tmp_path / "ser")]) == 0
    assert main(["--config", str(cfg), "--out", str(tmp_path / "par"),
                 "--parallel", "2"]) == 0
    ser = (tmp_path / "ser" / "tiny_NO_INT.csv").read_bytes()
    par = (tmp_path / "par" / "tiny_NO_INT.csv").read_bytes()
    assert ser == par


def test_flag_overrides_reach_the_rows(tmp_path):
    cfg = write(tmp_path, TINY, "tiny.cfg")
    out = tmp_path / "out"
    assert main(["--config", str(cfg), "--out", str(out),
                 "--positions", "5", "--seed", "9", "--duration-s", "4"]) == 0
    rows = (out / "tiny_NO_INT.csv").read_text().splitlines()
    assert len(rows) == 2
    assert rows[1].split(",")[2] == "5"


def test_bad_inputs_exit_nonzero(tmp_path):
    cfg = write(tmp_path, "scenarios = NO_INT\nnope = 1\n")
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert main(["--config", str(tmp_path / "missing.cfg"),
                 "--out", str(tmp_path / "o")]) == 2
    good = write(tmp_path, TINY, "tiny.cfg")
    assert main(["--config", str(good), "--out", str(tmp_path / "o"),
                 "--positions", "0"]) == 2
    assert main(["--config", str(good), "--out", str(tmp_path / "o"),
                 "--duration-s", "-1"]) == 2
    assert main(["--config", str(good), "--out", str(tmp_path / "o"),
                 "--parallel", "0"]) == 2
