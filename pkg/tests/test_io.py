"""Tests for WAV, feature-file, LAS-file and PGM output round trips."""

import struct
import wave as wave_module

import numpy as np
import pytest

from alaskit import (
    Waveform,
    emit_spectrogram_image,
    read_feature_file,
    read_las_file,
    read_wav,
    write_feature_file,
    write_las_file,
    write_wav,
)
from alaskit.features import FeatureTrack


class TestWav:
    def test_round_trip_within_quantization(self, tmp_path):
        rng = np.random.default_rng(36)
        original = Waveform(rng.uniform(-0.9, 0.9, 2000), 16000)
        path = tmp_path / "a.wav"
        write_wav(path, original)
        loaded = read_wav(path)
        assert loaded.sample_rate == 16000
        assert np.max(np.abs(loaded.samples - original.samples)) <= 1.0 / 32768.0

    def test_extreme_sample_round_trips_exactly(self, tmp_path):
        value = 32767.0 / 32768.0
        path = tmp_path / "b.wav"
        write_wav(path, Waveform(np.array([value, -1.0, 0.0]), 16000))
        loaded = read_wav(path)
        assert loaded.samples[0] == value
        assert loaded.samples[1] == -1.0
        assert loaded.samples[2] == 0.0

    def test_saturating_clamp(self, tmp_path):
        path = tmp_path / "c.wav"
        write_wav(path, Waveform(np.array([2.0, -2.0]), 16000))
        loaded = read_wav(path)
        assert loaded.samples[0] == 32767.0 / 32768.0
        assert loaded.samples[1] == -1.0

    def test_stereo_rejected(self, tmp_path):
        path = tmp_path / "stereo.wav"
        with wave_module.open(str(path), "wb") as writer:
            writer.setnchannels(2)
            writer.setsampwidth(2)
            writer.setframerate(16000)
            writer.writeframes(b"\x00\x00" * 400)
        with pytest.raises(ValueError, match="mono required"):
            read_wav(path)

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "junk.wav"
        path.write_bytes(b"this is not RIFF data")
        with pytest.raises(ValueError, match="malformed WAV"):
            read_wav(path)


def _track(n=7, seed=37):
    rng = np.random.default_rng(seed)
    f0 = np.where(rng.uniform(size=n) > 0.4, rng.uniform(80, 300, n), 0.0)
    return FeatureTrack(
        f0=f0,
        vuv=f0 > 0,
        mcep=rng.standard_normal((n, 41)),
        frame_shift=80,
        sample_rate=16000,
    )


class TestFeatureFile:
    def test_round_trip_at_float32(self, tmp_path):
        track = _track()
        path = tmp_path / "t.aftk"
        write_feature_file(path, track)
        loaded = read_feature_file(path)
        assert loaded.frame_shift == 80
        assert loaded.sample_rate == 16000
        np.testing.assert_array_equal(loaded.f0, track.f0.astype(np.float32))
        np.testing.assert_array_equal(loaded.mcep, track.mcep.astype(np.float32))
        np.testing.assert_array_equal(loaded.vuv, track.vuv)

    def test_bad_magic_names_expected(self, tmp_path):
        path = tmp_path / "bad.aftk"
        path.write_bytes(b"JUNK" + b"\x00" * 40)
        with pytest.raises(ValueError, match="AFTK"):
            read_feature_file(path)

    def test_truncated_payload(self, tmp_path):
        track = _track()
        path = tmp_path / "cut.aftk"
        write_feature_file(path, track)
        data = path.read_bytes()
        path.write_bytes(data[:-8])
        with pytest.raises(ValueError, match="truncated payload"):
            read_feature_file(path)

    def test_inconsistent_frame_count(self, tmp_path):
        track = _track()
        path = tmp_path / "grown.aftk"
        write_feature_file(path, track)
        header = bytearray(path.read_bytes())
        struct.pack_into("<I", header, 8, len(track) + 2)  # claim more frames
        path.write_bytes(bytes(header))
        with pytest.raises(ValueError, match="truncated payload"):
            read_feature_file(path)


class TestLasFile:
    def test_round_trip_at_float32(self, tmp_path):
        las = np.random.default_rng(38).standard_normal((9, 257))
        path = tmp_path / "x.lask"
        write_las_file(path, las, 80, 16000)
        loaded, shift, rate = read_las_file(path)
        assert (shift, rate) == (80, 16000)
        np.testing.assert_array_equal(loaded, las.astype(np.float32))

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.lask"
        path.write_bytes(b"WHAT" + b"\x00" * 40)
        with pytest.raises(ValueError, match="LASK"):
            read_las_file(path)

    def test_oversized_payload_rejected(self, tmp_path):
        las = np.zeros((3, 8))
        path = tmp_path / "big.lask"
        write_las_file(path, las, 80, 16000)
        path.write_bytes(path.read_bytes() + b"\x00\x00\x00\x00")
        with pytest.raises(ValueError, match="inconsistent"):
            read_las_file(path)


class TestSpectrogramImage:
    def _read_pgm(self, path):
        data = path.read_bytes()
        magic, dims, maxval, rest = data.split(b"\n", 3)
        width, height = (int(v) for v in dims.split())
        assert magic == b"P5" and int(maxval) == 255
        return width, height, np.frombuffer(rest, dtype=np.uint8).reshape(height, width)

    def test_constant_matrix_is_mid_gray(self, tmp_path):
        path = tmp_path / "flat.pgm"
        emit_spectrogram_image(np.full((12, 9), 3.3), path)
        width, height, pixels = self._read_pgm(path)
        assert (width, height) == (12, 9)
        assert np.all(pixels == pixels[0, 0])
        assert 120 <= int(pixels[0, 0]) <= 135

    def test_dimensions_match_matrix(self, tmp_path):
        path = tmp_path / "dims.pgm"
        emit_spectrogram_image(np.random.default_rng(39).standard_normal((31, 17)), path)
        width, height, _ = self._read_pgm(path)
        assert (width, height) == (31, 17)

    def test_harmonic_striping_visible(self, tmp_path, params):
        from alaskit import excitation_spectrum, recover_alas_frame
        from alaskit.features import AcousticFrame

        frame = AcousticFrame(f0=250.0, vuv=True, energy=0.0, mcep=np.zeros(40))
        row = recover_alas_frame(frame, params)
        las = np.tile(row, (40, 1))
        path = tmp_path / "comb.pgm"
        emit_spectrogram_image(las, path)
        _, height, pixels = self._read_pgm(path)
        k0 = int(np.nonzero(excitation_spectrum(250.0, params))[0][0])
        for i in range(2, 20):
            harmonic_row = height - 1 - i * k0
            midpoint_row = height - 1 - (i * k0 - k0 // 2)
            assert pixels[harmonic_row, 0] > pixels[midpoint_row, 0]
