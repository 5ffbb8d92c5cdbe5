"""End-to-end tests of the command-line pipeline."""

import numpy as np
import pytest

from alaskit import cli, read_las_file, read_wav, write_las_file, write_wav


@pytest.fixture(scope="module")
def utterance_wav(tmp_path_factory, vowel_corpus):
    path = tmp_path_factory.mktemp("cli") / "utt.wav"
    write_wav(path, vowel_corpus[0])
    return path


def test_full_chain(tmp_path, utterance_wav):
    feat = tmp_path / "utt.aftk"
    nat = tmp_path / "nat.lask"
    rec = tmp_path / "rec.lask"
    model = tmp_path / "model.alrf"
    refined = tmp_path / "refined.lask"
    report = tmp_path / "report.txt"
    wav_out = tmp_path / "resynth.wav"
    image = tmp_path / "spec.pgm"

    assert cli.main(["analyze", str(utterance_wav), "-o", str(feat), "--las", str(nat)]) == 0
    assert cli.main(["recover", str(feat), "-o", str(rec)]) == 0

    manifest = tmp_path / "pairs.txt"
    manifest.write_text(f"{rec}\t{nat}\n")
    assert cli.main(["refine-fit", str(manifest), "-o", str(model)]) == 0
    assert cli.main(["refine-apply", str(model), str(rec), "-o", str(refined)]) == 0
    assert cli.main(
        ["evaluate", "--ref", str(nat), "--test", str(refined), "--las", "-o", str(report)]
    ) == 0
    assert cli.main(["resynth", str(refined), "-o", str(wav_out), "--iters", "5"]) == 0
    assert cli.main(["plot", str(refined), "-o", str(image)]) == 0

    # all artifacts parse back
    assert read_las_file(rec)[0].shape == read_las_file(nat)[0].shape
    assert len(read_wav(wav_out)) > 0
    assert image.read_bytes().startswith(b"P5\n")
    text = report.read_text()
    assert "las_rmse_db\t" in text

    # refinement brings the recovered spectra toward the natural ones
    raw_line = [l for l in text.splitlines() if l.startswith("las_rmse_db")][0]
    assert float(raw_line.split("\t")[1]) < 10.0


def test_recover_rejects_contradictory_sample_rate(tmp_path, utterance_wav):
    feat = tmp_path / "utt.aftk"
    assert cli.main(["analyze", str(utterance_wav), "-o", str(feat)]) == 0
    code = cli.main(["recover", str(feat), "-o", str(tmp_path / "x.lask"),
                     "--sample-rate", "8000"])
    assert code == 2


def test_analyze_rejects_contradictory_sample_rate(tmp_path, utterance_wav):
    code = cli.main(["analyze", str(utterance_wav), "-o", str(tmp_path / "x.aftk"),
                     "--sample-rate", "22050"])
    assert code == 2


def test_evaluate_self_reports_zero_distance(tmp_path, utterance_wav):
    report = tmp_path / "self.txt"
    assert cli.main(["evaluate", "--ref", str(utterance_wav), "--test", str(utterance_wav),
                     "-o", str(report)]) == 0
    values = dict(
        line.split("\t") for line in report.read_text().strip().splitlines()
    )
    assert values["snr_db"] == "inf"
    assert float(values["las_rmse_db"]) == 0.0
    assert float(values["mcd_v_db"]) == 0.0
    assert float(values["f0_rmse_cent"]) == 0.0
    assert float(values["vuv_error_pct"]) == 0.0


def test_evaluate_feature_mode(tmp_path, utterance_wav):
    feat = tmp_path / "utt.aftk"
    report = tmp_path / "feat_report.txt"
    assert cli.main(["analyze", str(utterance_wav), "-o", str(feat)]) == 0
    assert cli.main(["evaluate", "--ref", str(feat), "--test", str(feat),
                     "-o", str(report)]) == 0
    values = dict(line.split("\t") for line in report.read_text().strip().splitlines())
    assert float(values["mcd_v_db"]) == 0.0
    assert float(values["f0_rmse_cent"]) == 0.0
    assert float(values["vuv_error_pct"]) == 0.0
    assert "snr_db" not in values


def test_evaluate_unknown_extension_exits_two(tmp_path):
    mystery = tmp_path / "data.bin"
    mystery.write_bytes(b"\x00")
    assert cli.main(["evaluate", "--ref", str(mystery), "--test", str(mystery)]) == 2


def test_usage_error_exits_one():
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["no-such-command"])
    assert excinfo.value.code == 1


def test_missing_file_exits_two(tmp_path):
    assert cli.main(["recover", str(tmp_path / "absent.aftk"),
                     "-o", str(tmp_path / "out.lask")]) == 2


def test_resynth_rejects_wrong_bin_count(tmp_path):
    path = tmp_path / "narrow.lask"
    write_las_file(path, np.zeros((5, 100)), 80, 16000)
    assert cli.main(["resynth", str(path), "-o", str(tmp_path / "o.wav")]) == 2
