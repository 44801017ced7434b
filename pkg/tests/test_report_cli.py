"""Report serialization, JSON codecs, and the CLI surface."""

import json

import numpy as np
import pytest

from torusdiff.cli import main
from torusdiff.diffeo import compose_function, invert, make_diffeo
from torusdiff.grid import GridFunction, GridSpec, Spectrum, forward_transform, random_field
from torusdiff.norms import hs_norm, hs_norm_derivative
from torusdiff.report import (
    SuiteReport,
    diffeo_from_dict,
    diffeo_to_dict,
    dump_json,
    load_diffeo,
    spectrum_from_dict,
    spectrum_to_dict,
    strip_timing,
)
from torusdiff.suites import normalize_params, parse_config, run_suite

TWO_PI = 2.0 * np.pi


def sine_diffeo(spec, amp):
    coeffs = np.zeros((1,) + spec.shape, dtype=np.complex128)
    coeffs[0, 1] = amp / 2j
    coeffs[0, -1] = -amp / 2j
    return make_diffeo(Spectrum(spec, coeffs))


def write_json(path, payload):
    path.write_text(dump_json(payload))
    return str(path)


# ---------------------------------------------------------------------------
# reports


def test_suite_report_round_trip():
    rep = SuiteReport(
        suite="demo",
        params={"size": 32, "seed": 7},
        trials=[{"trial": 0, "defect": 1.5e-12}],
        aggregate={"max_defect": 1.5e-12},
        passed=True,
        wall_time_s=0.25,
    )
    payload = rep.to_dict()
    assert payload["pass"] is True
    assert payload["schema_version"] == "1.0"
    back = SuiteReport.from_dict(payload)
    assert back == rep


def test_comparison_bytes_ignores_timing_only():
    a = SuiteReport("demo", {"seed": 1}, aggregate={"x": 1.0}, passed=True, wall_time_s=0.1)
    b = SuiteReport("demo", {"seed": 1}, aggregate={"x": 1.0}, passed=True, wall_time_s=9.9)
    c = SuiteReport("demo", {"seed": 1}, aggregate={"x": 2.0}, passed=True, wall_time_s=0.1)
    assert a.comparison_bytes() == b.comparison_bytes()
    assert a.comparison_bytes() != c.comparison_bytes()
    assert "wall_time_s" not in strip_timing(a.to_dict())


def test_dump_json_handles_numpy_scalars():
    payload = {
        "f": np.float64(0.5),
        "i": np.int64(3),
        "b": np.bool_(True),
        "arr": np.arange(3.0),
    }
    text = dump_json(payload)
    assert json.loads(text) == {"f": 0.5, "i": 3, "b": True, "arr": [0.0, 1.0, 2.0]}
    # keys come out sorted, so equal payloads give equal bytes
    assert text == dump_json(dict(reversed(list(payload.items()))))


def test_dump_json_rejects_unknown_types():
    with pytest.raises(TypeError):
        dump_json({"bad": object()})


# ---------------------------------------------------------------------------
# field / diffeo codecs


def test_spectrum_codec_round_trip():
    F = random_field(GridSpec(2, 16), 2.0, seed=11, components=2)
    G = spectrum_from_dict(json.loads(dump_json(spectrum_to_dict(F))))
    assert G.spec == F.spec
    assert np.array_equal(G.coeffs, F.coeffs)


def test_spectrum_codec_rejects_wrong_kind():
    with pytest.raises(ValueError):
        spectrum_from_dict({"kind": "diffeo"})


def test_diffeo_codec_round_trip():
    phi = sine_diffeo(GridSpec(1, 64), 0.1)
    back = diffeo_from_dict(json.loads(dump_json(diffeo_to_dict(phi))))
    assert np.array_equal(back.displacement.coeffs, phi.displacement.coeffs)
    assert back.min_det == pytest.approx(phi.min_det, rel=1e-12)
    assert back.contraction_certified


def test_serialized_inverse_reloads_without_certificate():
    # the inverse of a certified map typically fails the contraction bound;
    # its stored report must reload without tripping certification
    psi = invert(sine_diffeo(GridSpec(1, 64), 0.1))
    assert not psi.contraction_certified
    back = diffeo_from_dict(json.loads(dump_json(diffeo_to_dict(psi))))
    assert not back.contraction_certified
    assert back.max_grad > 1.0


# ---------------------------------------------------------------------------
# suite runner plumbing


def test_param_aliases_normalize():
    assert normalize_params({"N": 64, "seed": 3}) == {"size": 64, "seed": 3}
    assert normalize_params({"grid": 32}) == {"size": 32}


def test_parse_config_validation():
    with pytest.raises(ValueError):
        parse_config({})
    with pytest.raises(ValueError):
        parse_config({"suites": [{"trials": 3}]})
    with pytest.raises(ValueError):
        parse_config({"suites": [{"suite": "no-such-suite"}]})


def test_run_suite_unknown_name():
    with pytest.raises(ValueError):
        run_suite("no-such-suite")


def test_run_suite_drops_execution_mode_from_params():
    rep = run_suite("norm-equivalence", {"trials": 3, "size": 32, "serial": True})
    assert rep.passed
    assert "serial" not in rep.params


# ---------------------------------------------------------------------------
# CLI: verify


def test_cli_verify_writes_report(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", {"trials": 4, "size": 32})
    out = tmp_path / "rep.json"
    code = main(["verify", "norm-equivalence", "--config", cfg, "--out", str(out)])
    assert code == 0
    assert "norm-equivalence: PASS" in capsys.readouterr().out
    payload = json.loads(out.read_text())
    assert payload["pass"] is True
    assert payload["params"]["trials"] == 4


def test_cli_verify_rejects_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "no-such-suite"])
    assert exc.value.code == 2


def test_cli_verify_overrides_win(tmp_path):
    cfg = write_json(tmp_path / "cfg.json", {"trials": 3, "size": 64, "seed": 1})
    out = tmp_path / "rep.json"
    code = main(
        ["verify", "norm-equivalence", "--config", cfg, "--seed", "7", "--grid", "32", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["params"]["seed"] == 7
    assert payload["params"]["size"] == 32


def test_cli_verify_serial_matches_threaded(tmp_path):
    cfg = write_json(tmp_path / "cfg.json", {"trials": 6, "size": 32, "seed": 2})
    out_a, out_b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "norm-equivalence", "--config", cfg, "--out", str(out_a)]) == 0
    assert main(["verify", "norm-equivalence", "--config", cfg, "--serial", "--out", str(out_b)]) == 0
    rep_a = SuiteReport.from_dict(json.loads(out_a.read_text()))
    rep_b = SuiteReport.from_dict(json.loads(out_b.read_text()))
    assert rep_a.comparison_bytes() == rep_b.comparison_bytes()


# ---------------------------------------------------------------------------
# CLI: verify-all


def fast_config(**overrides):
    entries = [
        {"suite": "norm-equivalence", "trials": 3, "size": 32},
        {"suite": "embedding", "trials": 3, "size": 32},
    ]
    cfg = {"suites": entries}
    cfg.update(overrides)
    return cfg


def test_cli_verify_all_writes_reports(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", fast_config())
    out_dir = tmp_path / "reports"
    code = main(["verify-all", "--config", cfg, "--out-dir", str(out_dir)])
    captured = capsys.readouterr()
    assert code == 0
    assert "overall: PASS" in captured.out
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["pass"] is True
    assert {e["suite"] for e in summary["suites"]} == {"norm-equivalence", "embedding"}
    for name in ("norm-equivalence", "embedding"):
        rep = json.loads((out_dir / f"{name}.json").read_text())
        assert rep["pass"] is True


def test_cli_verify_all_forced_failure(tmp_path, capsys):
    bad = {
        "suites": [
            {"suite": "norm-equivalence", "trials": 3, "size": 32},
            {"suite": "algebra", "sizes": [32, 64], "trials": 10, "k_max": 0},
        ]
    }
    cfg = write_json(tmp_path / "cfg.json", bad)
    code = main(["verify-all", "--config", cfg])
    captured = capsys.readouterr()
    assert code == 1
    assert "algebra: FAIL" in captured.out
    assert "norm-equivalence: PASS" in captured.out
    assert "overall: FAIL" in captured.out


def test_cli_verify_all_empty_config_is_vacuous(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", {"suites": []})
    code = main(["verify-all", "--config", cfg])
    captured = capsys.readouterr()
    assert code == 0
    assert "overall: PASS" in captured.out
    assert "vacuous" in captured.err


def test_cli_verify_all_bad_config_exits_2(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", {"suites": [{"suite": "nope"}]})
    code = main(["verify-all", "--config", cfg])
    assert code == 2
    assert "unknown suite" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# CLI: norm / compose / invert


def test_cli_norm_matches_direct_value(tmp_path, capsys):
    spec = GridSpec(1, 64)
    x = spec.axis_coordinates()
    F = forward_transform(GridFunction(spec, np.sin(TWO_PI * x)[None]))
    field = write_json(tmp_path / "f.json", spectrum_to_dict(F))

    assert main(["norm", field, "--s", "1.5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["norm_value"] == pytest.approx(hs_norm(F, 1.5), rel=1e-12)
    assert payload["method"] == "fourier"

    assert main(["norm", field, "--s", "2", "--kind", "derivative"]) == 0
    payload = json.loads(capsys.readouterr().out)
    want = hs_norm_derivative(GridFunction(spec, np.sin(TWO_PI * x)[None]), 2)
    assert payload["norm_value"] == pytest.approx(want, rel=1e-12)


def test_cli_compose_round_trip(tmp_path):
    spec = GridSpec(1, 64)
    x = spec.axis_coordinates()
    F = forward_transform(GridFunction(spec, np.sin(TWO_PI * x)[None]))
    phi = sine_diffeo(spec, 0.05)
    field = write_json(tmp_path / "f.json", spectrum_to_dict(F))
    phi_path = write_json(tmp_path / "phi.json", diffeo_to_dict(phi))
    out = tmp_path / "composed.json"

    assert main(["compose", field, phi_path, "--out", str(out)]) == 0
    got = spectrum_from_dict(json.loads(out.read_text()))
    want = forward_transform(compose_function(F, phi))
    assert np.allclose(got.coeffs, want.coeffs, atol=1e-14)


def test_cli_bad_input_is_a_clean_error(tmp_path, capsys):
    missing = main(["norm", str(tmp_path / "nope.json"), "--s", "1.0"])
    assert missing == 1
    assert "error:" in capsys.readouterr().err

    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "spectrum"}')
    assert main(["norm", str(bad), "--s", "1.0"]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_invert_flags_uncertified_inverse(tmp_path):
    phi = sine_diffeo(GridSpec(1, 64), 0.1)
    phi_path = write_json(tmp_path / "phi.json", diffeo_to_dict(phi))
    out = tmp_path / "psi.json"

    assert main(["invert", phi_path, "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["certificate"]["contraction_certified"] is False
    # and the written inverse is itself loadable
    psi = load_diffeo(out)
    assert psi.max_grad > 1.0
