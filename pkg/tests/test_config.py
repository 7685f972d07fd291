import pytest

from serrezeros.config import PRECISION_ENV, RunConfig, load_config, parse_config_text


def test_documented_defaults():
    c = RunConfig()
    assert (c.precision_bits, c.truncation, c.grid_size, c.refine_tol, c.minima_threshold) == \
        (192, 1024, 2048, 1e-12, "adaptive")
    s = c.scan_settings()
    assert s.grid_size == 2048 and s.minima_threshold == 1e-8


def test_file_env_and_override_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ntruncation = 300\ngrid-size = 512\nminima_threshold = 1e-6\n")
    c = load_config(str(cfg), environ={PRECISION_ENV: "256"}, grid_size=128)
    assert c.precision_bits == 256 and c.truncation == 300 and c.grid_size == 128
    assert c.scan_settings().minima_threshold == 1e-6


@pytest.mark.parametrize("text", ["nonsense", "colour = red", "truncation = x"])
def test_bad_config_lines(text):
    with pytest.raises(ValueError):
        parse_config_text(text)


@pytest.mark.parametrize("kw", [dict(precision_bits=32), dict(truncation=2), dict(grid_size=4),
                                dict(refine_tol=2.0), dict(minima_threshold=-1.0)])
def test_invalid_values(kw):
    with pytest.raises(ValueError):
        RunConfig(**kw)
