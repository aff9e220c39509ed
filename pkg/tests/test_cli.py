import subprocess
import sys

import pytest

from sgl.cli import main


@pytest.fixture
def project_cfg(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("spectrum = [0, 0.3; 1.5, 1.6]\na = 1.0\n")
    return cfg


def _artifacts(path):
    return sorted(path.glob("*.csv"))


def test_success_writes_artifact(tmp_path, project_cfg, capsys):
    out = tmp_path / "artifacts"
    rc = main(["project", "--config", str(project_cfg), "--out", str(out)])
    assert rc == 0
    (csv,) = _artifacts(out)
    assert csv.name.startswith("project-")
    assert csv.read_text().splitlines()[0] == "lo,hi"
    stdout = capsys.readouterr().out
    assert stdout.strip().endswith(str(csv))


def test_rerun_is_byte_identical(tmp_path, project_cfg):
    out = tmp_path / "a"
    main(["project", "--config", str(project_cfg), "--out", str(out)])
    (first,) = _artifacts(out)
    blob = first.read_bytes()
    main(["project", "--config", str(project_cfg), "--out", str(out)])
    assert _artifacts(out) == [first]
    assert first.read_bytes() == blob


def test_seed_flag_changes_artifact(tmp_path):
    cfg = tmp_path / "mc.cfg"
    cfg.write_text("q = 3.5\nn = 1\nj = 2\ntrials = 100\n")
    out = tmp_path / "out"
    main(["random-mc", "--config", str(cfg), "--out", str(out)])
    main(["random-mc", "--config", str(cfg), "--out", str(out), "--seed", "9"])
    assert len(_artifacts(out)) == 2


def test_bad_key_reports_line(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("spectrum = [0, 0.3]\nwat = 1\n")
    rc = main(["project", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 1
    err = capsys.readouterr().err
    assert "wat" in err and "line 2" in err
    assert not _artifacts(tmp_path)


def test_missing_config_file(tmp_path, capsys):
    rc = main(["project", "--config", str(tmp_path / "nope.cfg")])
    assert rc == 1
    assert "cannot read config" in capsys.readouterr().err


def test_failed_claim_still_writes_csv(tmp_path):
    cfg = tmp_path / "frame.cfg"
    cfg.write_text(
        "spectrum = [0, 0.9]\nlam_range = 0..7\nclaimed = 100.0\n"
    )
    out = tmp_path / "out"
    rc = main(["frame", "--config", str(cfg), "--out", str(out)])
    assert rc == 2
    (csv,) = _artifacts(out)
    assert csv.read_text().strip().endswith("false")


def test_threads_env_must_be_integer(tmp_path, project_cfg, monkeypatch, capsys):
    monkeypatch.setenv("SGL_THREADS", "lots")
    rc = main(["project", "--config", str(project_cfg), "--out", str(tmp_path)])
    assert rc == 1
    assert "SGL_THREADS" in capsys.readouterr().err


def test_threads_flag_beats_env(tmp_path, project_cfg, monkeypatch):
    monkeypatch.setenv("SGL_THREADS", "junk")
    rc = main(["project", "--config", str(project_cfg), "--out", str(tmp_path),
               "--threads", "1"])
    assert rc == 0


def test_unknown_subcommand_rejected_by_parser(project_cfg):
    with pytest.raises(SystemExit) as exc:
        main(["nope", "--config", str(project_cfg)])
    assert exc.value.code == 2


def test_console_script_smoke(tmp_path, project_cfg):
    out = tmp_path / "out"
    proc = subprocess.run(
        [sys.executable, "-m", "sgl.cli", "project",
         "--config", str(project_cfg), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert _artifacts(out)
