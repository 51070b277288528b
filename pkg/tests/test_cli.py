import json

import pytest

from omegatruth.cli import main

CERT_KEYS = {"formula", "theory", "omega_count", "samples_checked", "proof_size"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_demo_mcgee_gamma(capsys):
    code, out, err = run(capsys, "demo", "mcgee", "--theory", "gamma", "--json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc["positive"]) == CERT_KEYS
    assert doc["positive"]["omega_count"] == 1
    assert doc["negative"]["omega_count"] == 0
    assert [e["label"] for e in doc["narrative"]] == ["1", "2", "3", "4", "5", "6", "7", "omega"]


def test_demo_mcgee_sigma_fails(capsys):
    code, out, err = run(capsys, "demo", "mcgee", "--theory", "sigma")
    assert code == 1
    assert "MissingSchema(CONS)" in err


def test_demo_via_loeb_sigma_fails(capsys):
    code, out, err = run(capsys, "demo", "mcgee-via-loeb", "--theory", "sigma")
    assert code == 1
    assert "MissingSchema(CONS)" in err


def test_demo_witness_samples(capsys):
    code, out, err = run(capsys, "demo", "witness", "--samples", "3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["instances"]) == 3
    assert doc["universal_negation"]["omega_count"] == 0
    assert all(c["omega_count"] == 0 for c in doc["instances"])


def test_demo_loeb_sigma(capsys):
    code, out, err = run(capsys, "demo", "loeb", "--theory", "sigma", "--json")
    assert code == 0
    doc = json.loads(out)
    for key in ("m1", "m2", "m3", "a1", "a2", "formalized_loeb"):
        assert set(doc[key]) == CERT_KEYS
        assert doc[key]["theory"] == "sigma"


def test_check_script(tmp_path, capsys):
    path = tmp_path / "tiny.proof"
    path.write_text('(theory sigma)\n(prove (axiom EQ1 "0 = 0"))\n')
    code, out, err = run(capsys, "check", str(path), "--json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == CERT_KEYS
    assert doc["formula"] == "0 = 0"
    assert doc["theory"] == "sigma"


def test_check_respects_sample_counts(tmp_path, capsys):
    path = tmp_path / "gen.proof"
    path.write_text(
        '(theory gamma)\n(samples 3)\n'
        '(prove (omega (family y "x = x") (base (axiom EQ1 "x = x")) (step)))\n'
    )
    _, out, _ = run(capsys, "check", str(path), "--json")
    assert json.loads(out)["samples_checked"] == 3
    _, out, _ = run(capsys, "check", str(path), "--samples", "5", "--json")
    assert json.loads(out)["samples_checked"] == 5


def test_check_script_failure(tmp_path, capsys):
    path = tmp_path / "bad.proof"
    path.write_text('(theory sigma)\n(prove (axiom CONS "0 = 0"))\n')
    code, out, err = run(capsys, "check", str(path))
    assert code == 1
    assert "check failure" in err


def test_check_script_syntax_error(tmp_path, capsys):
    path = tmp_path / "broken.proof"
    path.write_text("(prove (axiom EQ1")
    code, out, err = run(capsys, "check", str(path))
    assert code == 2


def test_check_missing_file(capsys):
    code, out, err = run(capsys, "check", "/nonexistent/file.proof")
    assert code == 2


def test_code_decode_round_trip(capsys):
    code, out, err = run(capsys, "code", "forall y. T(iter(y, x))", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "formula"
    code2, out2, err2 = run(capsys, "decode", doc["code_dec"], "--json")
    assert code2 == 0
    doc2 = json.loads(out2)
    assert doc2["text"] == doc["text"]
    # hex input is accepted as well
    code3, out3, _ = run(capsys, "decode", doc["code_hex"], "--json")
    assert json.loads(out3)["text"] == doc["text"]


def test_code_parse_error_exit_2(capsys):
    code, out, err = run(capsys, "code", "T(0,")
    assert code == 2
    assert "input error" in err


def test_decode_rejects_non_image(capsys):
    code, out, err = run(capsys, "decode", "7")
    assert code == 2


def test_diag_command(capsys):
    code, out, err = run(capsys, "diag", "~forall y. T(iter(y, v))", "v", "--json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"theta", "gamma", "certificate"}
    assert doc["certificate"]["omega_count"] == 0


def test_eval_command(capsys):
    code, out, err = run(capsys, "eval", "(S(#3) * #2)", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "8"
    assert doc["certificate"]["omega_count"] == 0


def test_eval_open_term_exit_2(capsys):
    code, out, err = run(capsys, "eval", "S(x)")
    assert code == 2


def test_certificate_schema_stable(capsys):
    _, out, _ = run(capsys, "demo", "mcgee", "--json")
    doc = json.loads(out)
    for side in ("positive", "negative"):
        cert = doc[side]
        assert set(cert) == CERT_KEYS
        assert isinstance(cert["formula"], str)
        assert cert["theory"] in ("gamma", "sigma")
        for k in ("omega_count", "samples_checked", "proof_size"):
            assert isinstance(cert[k], int)
