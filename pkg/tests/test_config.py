"""INI configuration parsing: defaults, strictness, channel grammar."""

import numpy as np
import pytest

from dirac1d import ConfigError, Dirac1DError, parse_config

MINIMAL = """\
[grid]
x_min = -5.0
x_max = 5.0
n_points = 64

[mass]
family = constant
"""


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_minimal_config_gets_documented_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, MINIMAL))
    assert cfg["solver"]["scheme"] == "central_wilson"
    assert cfg["solver"]["wilson_r"] == 1.0
    assert cfg["solver"]["tol"] == 1e-9
    assert cfg["solver"]["max_pairs"] == 12
    assert cfg["grid"]["boundary"] == "dirichlet"
    assert cfg["mass"]["m0"] == 1.0
    assert all(cfg["potential"][c] == "zero"
               for c in ("v_t", "v_sp", "v_s", "v_p"))
    assert cfg["diagnostics"]["identity_tol"] == "auto"
    assert cfg["output"]["formats"] == "csv"
    # the raw echo carries the defaults too, so a config can be rebuilt
    assert cfg.raw["solver"]["wilson_r"] == "1.0"


def test_coarse_grid_rejected_at_parse_time(tmp_path):
    bad = MINIMAL.replace("n_points = 64", "n_points = 4")
    with pytest.raises(Dirac1DError, match="at least 8"):
        parse_config(write(tmp_path, bad))


def test_unknown_key_suggests_nearest(tmp_path):
    text = MINIMAL + "\n[solver]\nwilsonr = 1.0\n"
    with pytest.raises(ConfigError, match="wilsonr") as err:
        parse_config(write(tmp_path, text))
    assert "wilson_r" in str(err.value)


def test_unknown_section_suggests_nearest(tmp_path):
    text = MINIMAL + "\n[masss]\nfamily = constant\n"
    with pytest.raises(ConfigError, match="masss") as err:
        parse_config(write(tmp_path, text))
    assert "mass" in str(err.value)


def test_missing_required_keys_listed_together(tmp_path):
    text = "[mass]\nfamily = constant\n"
    with pytest.raises(ConfigError) as err:
        parse_config(write(tmp_path, text))
    msg = str(err.value)
    for missing in ("grid.x_min", "grid.x_max", "grid.n_points"):
        assert missing in msg


def test_invalid_choice_value(tmp_path):
    bad = MINIMAL + "\n[solver]\nscheme = upwind\n"
    with pytest.raises(ConfigError, match="upwind"):
        parse_config(write(tmp_path, bad))
    bad = MINIMAL.replace("family = constant", "family = constnt")
    with pytest.raises(ConfigError, match="constant"):
        parse_config(write(tmp_path, bad))


def test_unparseable_number(tmp_path):
    bad = MINIMAL.replace("x_min = -5.0", "x_min = left")
    with pytest.raises(ConfigError, match="x_min"):
        parse_config(write(tmp_path, bad))


def test_channel_grammar(tmp_path):
    text = MINIMAL + """
[potential]
v_t = constant:0.5j
v_sp = linear:2.0
v_s = abs:1.5
v_p = quadratic:-0.25
"""
    cfg = parse_config(write(tmp_path, text))
    grid = cfg.build_grid()
    pot = cfg.build_potential(grid, cfg.build_mass_profile())
    x = grid.nodes
    assert np.allclose(pot.v_t.values, 0.5j)
    assert np.allclose(pot.v_sp.values, 2.0 * x)
    assert np.allclose(pot.v_s.values, 1.5 * np.abs(x))
    assert np.allclose(pot.v_p.values, -0.25 * x * x)


def test_pt_channel_builds_mass_induced_potential(tmp_path):
    text = MINIMAL.replace("family = constant",
                           "family = quadratic_even\nalpha = 0.3") + """
[potential]
v_t = pt_from_mass
"""
    cfg = parse_config(write(tmp_path, text))
    assert cfg.pt_channels() == ["v_t"]
    grid = cfg.build_grid()
    pot = cfg.build_potential(grid, cfg.build_mass_profile())
    x = grid.nodes
    assert np.allclose(pot.v_t.values, 0.3j * x / (1.0 + 0.3 * x * x))


def test_pt_channel_restricted_to_time_component(tmp_path):
    text = MINIMAL + "\n[potential]\nv_s = pt_from_mass\n"
    with pytest.raises(ConfigError, match="v_t"):
        parse_config(write(tmp_path, text))


def test_unknown_channel_spec(tmp_path):
    text = MINIMAL + "\n[potential]\nv_s = gaussian:1.0\n"
    with pytest.raises(ConfigError, match="gaussian"):
        parse_config(write(tmp_path, text))


def test_tabulated_channel_roundtrip(tmp_path):
    vals = np.linspace(-1.0, 1.0, 64)
    imag = 0.1 * np.ones(64)
    np.savetxt(tmp_path / "chan.txt", np.column_stack([vals, imag]))
    text = MINIMAL + "\n[potential]\nv_t = file:chan.txt\n"
    cfg = parse_config(write(tmp_path, text))
    pot = cfg.build_potential(cfg.build_grid(), cfg.build_mass_profile())
    assert np.allclose(pot.v_t.values, vals + 0.1j, atol=1e-12)


def test_tabulated_channel_size_mismatch(tmp_path):
    np.savetxt(tmp_path / "short.txt", np.arange(10.0))
    text = MINIMAL + "\n[potential]\nv_s = file:short.txt\n"
    with pytest.raises(ConfigError, match="shape"):
        parse_config(write(tmp_path, text))


def test_tabulated_channel_missing_file(tmp_path):
    text = MINIMAL + "\n[potential]\nv_s = file:nope.txt\n"
    with pytest.raises(ConfigError, match="not found"):
        parse_config(write(tmp_path, text))


def test_window_and_pairs_parsing(tmp_path):
    text = MINIMAL + """
[diagnostics]
window = -2.0:2.0
balance_pairs = 1:0, 3:2
"""
    cfg = parse_config(write(tmp_path, text))
    assert cfg["diagnostics"]["window"] == (-2.0, 2.0)
    assert cfg["diagnostics"]["balance_pairs"] == ((1, 0), (3, 2))


def test_window_validation(tmp_path):
    bad = MINIMAL + "\n[diagnostics]\nwindow = 2.0:-2.0\n"
    with pytest.raises(ConfigError, match="window"):
        parse_config(write(tmp_path, bad))
    outside = MINIMAL + "\n[diagnostics]\nwindow = -2.0:9.0\n"
    with pytest.raises(ConfigError, match="domain"):
        parse_config(write(tmp_path, outside))
    malformed = MINIMAL + "\n[diagnostics]\nbalance_pairs = 1-0\n"
    with pytest.raises(ConfigError, match="pair"):
        parse_config(write(tmp_path, malformed))


def test_solver_bounds(tmp_path):
    bad = MINIMAL + "\n[solver]\ntol = -1e-9\n"
    with pytest.raises(ConfigError, match="tol"):
        parse_config(write(tmp_path, bad))
    bad = MINIMAL + "\n[solver]\nmax_pairs = 0\n"
    with pytest.raises(ConfigError, match="max_pairs"):
        parse_config(write(tmp_path, bad))
    bad = MINIMAL + "\n[solver]\nwilson_r = -1.0\n"
    with pytest.raises(ConfigError, match="wilson_r"):
        parse_config(write(tmp_path, bad))


def test_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        parse_config("/nonexistent/run.ini")


def test_as_dict_is_json_friendly(tmp_path):
    import json
    text = MINIMAL + "\n[diagnostics]\nbalance_pairs = 1:0\nwindow = -1.0:1.0\n"
    cfg = parse_config(write(tmp_path, text))
    echo = cfg.as_dict()
    json.dumps(echo)  # must not raise
    assert echo["grid"]["n_points"] == 64
    assert echo["diagnostics"]["balance_pairs"] == [[1, 0]]
