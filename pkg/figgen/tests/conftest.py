"""Reference CSV fixtures matching the sweep output schema."""

import pytest

HEADER = (
    "config,name,d_s_m,seed,plr,mu_d_us,sigma_d_us,d_min_us,p99_us,p999_us,"
    "mu_a,mu_r_mbps,mu_p_uw,"
    "f_6,f_9,f_12,f_18,f_24,f_36,f_48,f_54,"
    "s_6,s_9,s_12,s_18,s_24,s_36,s_48,s_54"
)


def _row(name, d, plr, mu_d, p99, p999, mu_a, mu_p):
    fixed = (
        f"desk,{name},{d},42,{plr},{mu_d},12.5,114.006,{p99},{p999},"
        f"{mu_a},48.2,{mu_p}"
    )
    f_cols = ",".join("0.02" if r != 54 else "0.86" for r in (6, 9, 12, 18, 24, 36, 48, 54))
    s_cols = ",".join("0.9" for _ in range(8))
    return f"{fixed},{f_cols},{s_cols}"


def _sweep_csv(name, rows):
    return HEADER + "\n" + "\n".join(rows) + "\n"


@pytest.fixture
def csv_dir(tmp_path):
    """no-interferer, visible, and hidden sweeps plus degenerate variants"""
    positions = (1, 10, 25, 40, 50)
    no_int = [
        _row("NO_INT", d, 0.0, 117.0 + d, 160 + d, 200 + d, 1.01, 2.9 + d / 20)
        for d in positions
    ]
    visible = [
        _row("VISIBLE", d, 0.0, 130.0 + d, 400 + d, 1500 + d, 1.05, 2.9 + d / 15)
        for d in positions
    ]
    hidden = [
        _row("HIDDEN", d, 0.012, 600.0 + d, 9000 + d, 48000 + d, 1.5, 4.8 + d / 15)
        for d in positions
    ]
    (tmp_path / "desk_NO_INT.csv").write_text(_sweep_csv("NO_INT", no_int))
    (tmp_path / "desk_VISIBLE.csv").write_text(_sweep_csv("VISIBLE", visible))
    (tmp_path / "desk_HIDDEN.csv").write_text(_sweep_csv("HIDDEN", hidden))
    (tmp_path / "empty.csv").write_text(HEADER + "\n")
    broken_header = HEADER.replace(",mu_a,", ",attempts,")
    (tmp_path / "renamed.csv").write_text(
        broken_header + "\n" + ",".join(["x"] * len(HEADER.split(","))) + "\n"
    )
    return tmp_path
