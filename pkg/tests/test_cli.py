import io
import json

import pytest

from weylscope import __version__
from weylscope.cli import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_OK,
    EXIT_PRECONDITION,
    ConfigError,
    main,
    parse_config,
    run,
)


def _run(text, **over):
    buf = io.StringIO()
    code = run(parse_config(text, over), stdout=buf)
    return code, buf.getvalue()


def test_parse_gb_example():
    cfg = parse_config("command=gb ambient=2,1 target=sphere:1")
    assert cfg.command == "gb" and cfg.ambient == (2, 1) and cfg.target == "sphere:1"
    assert cfg.grid is None and cfg.seed == 0 and cfg.format == "json"


def test_parse_bad_ambient_names_key():
    with pytest.raises(ConfigError) as exc:
        parse_config("command=gb ambient=2,x")
    assert exc.value.key == "ambient"
    with pytest.raises(ConfigError) as exc:
        parse_config("ambient=2,x")
    assert exc.value.key in ("ambient", "command")


def test_parse_tube_example():
    cfg = parse_config("command=tube target=segment:timelike,2 r=0.1 seed=42")
    assert cfg.seed == 42 and cfg.r == 0.1 and cfg.target == "segment:timelike,2"


def test_parse_comments_and_lines():
    cfg = parse_config("# header\ncommand=j-suite   # trailing\n\ntsamples=32 seed=3\n")
    assert cfg.command == "j-suite" and cfg.tsamples == 32 and cfg.seed == 3


def test_parse_error_location():
    with pytest.raises(ConfigError) as exc:
        parse_config("command=gb\n  target=sphere:1 oops\n")
    assert (exc.value.line, exc.value.column) == (2, 19)


def test_duplicate_and_unknown_keys():
    with pytest.raises(ConfigError) as exc:
        parse_config("command=gb command=tube")
    assert exc.value.key == "command"
    with pytest.raises(ConfigError) as exc:
        parse_config("command=gb colour=red")
    assert exc.value.key == "colour"


@pytest.mark.parametrize("text, key", [
    ("command=gb grid=-4", "grid"),
    ("command=gb tol=0", "tol"),
    ("command=gb target=blob:1", "target"),
    ("command=gb format=xml", "format"),
    ("command=m11 perturb=-0.1", "perturb"),
    ("command=frobnicate", "command"),
])
def test_validation_names_key(text, key):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.key == key


def test_overrides_beat_file():
    cfg = parse_config("command=gb target=sphere:1 seed=1", {"seed": "7", "target": None})
    assert cfg.seed == 7 and cfg.target == "sphere:1"


def test_gb_sphere_low_resolution():
    code, text = _run("command=gb ambient=2,1 target=sphere:1 grid=512 tsamples=256 tol=2e-2")
    doc = json.loads(text)
    assert code == EXIT_OK and doc["status"] == "pass"
    assert doc["report"]["chi_re"] == pytest.approx(2.0, abs=2e-2)
    assert doc["version"] == __version__ and doc["config"]["ambient"] == [2, 1]


def test_gb_non_transversal_is_precondition():
    code, text = _run("command=gb target=graph:lightband grid=256 tsamples=128")
    doc = json.loads(text)
    assert code == EXIT_PRECONDITION
    assert "failing_margin" in doc["report"]


def test_lc_check_exit_codes():
    assert _run("command=lc-check target=metric:lcreg grid=48")[0] == EXIT_OK
    assert _run("command=lc-check target=metric:lcsing grid=48")[0] == EXIT_FAIL


def test_j_suite_contract():
    code, text = _run("command=j-suite")
    doc = json.loads(text)
    assert code == EXIT_OK
    assert len(doc["cases"]) >= 12 and all(c["pass"] for c in doc["cases"])


def test_report_is_deterministic():
    cfg = "command=tube target=segment:timelike,2 r=0.1 seed=42 samples=20000"
    a, b = _run(cfg)[1], _run(cfg)[1]
    assert a == b
    c = _run(cfg.replace("seed=42", "seed=43"))[1]
    assert c != a


def test_csv_output():
    code, text = _run("command=m11 target=disc:1 format=csv grid=1024")
    lines = text.splitlines()
    assert code == EXIT_OK and lines[0] == "key,value"
    assert "report.chi,1" in lines


def test_out_path(tmp_path):
    out = tmp_path / "r.json"
    code, text = _run(f"command=m11 target=annulus:1,2 grid=1024 out={out}")
    assert code == EXIT_OK and text == ""
    assert json.loads(out.read_text())["report"]["chi_value"] == 0.0


def test_main_config_file_and_flags(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("command=m11\ntarget=disc:1  # unit disc\ngrid=1024\n")
    assert main(["--config", str(cfg), "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["report"]["n_crossings"] == 4
    assert main(["gb", "--ambient", "2,x"]) == EXIT_CONFIG
    assert main(["--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG
    assert "ambient" in capsys.readouterr().err
