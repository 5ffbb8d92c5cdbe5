"""Acoustic feature extraction: F0 with voicing decision, and mel-cepstra.

One frame carries F0, a voiced/unvoiced flag, an energy coefficient and 40
mel-cepstral coefficients, extracted on the same frame grid as the log
amplitude spectra.
"""

from dataclasses import dataclass

import numpy as np

from .dsp import AnalysisParams, Waveform, extract_las, num_frames

F0_MIN = 50.0
F0_MAX = 500.0
VOICING_THRESHOLD = 0.3
RMS_GATE = 1e-4
MCEP_ORDER = 40


@dataclass(frozen=True, eq=False)
class AcousticFrame:
    """Per-frame features: F0 (0 when unvoiced), voicing flag, energy and
    mel-cepstra."""

    f0: float
    vuv: bool
    energy: float
    mcep: np.ndarray


@dataclass(frozen=True, eq=False)
class FeatureTrack:
    """Frame-synchronous feature arrays.

    ``mcep`` has shape (N, order+1) with the energy coefficient in column 0.
    The voicing flag and F0 are consistent: f0 > 0 exactly on voiced frames.
    """

    f0: np.ndarray
    vuv: np.ndarray
    mcep: np.ndarray
    frame_shift: int
    sample_rate: int

    def __post_init__(self):
        if self.f0.ndim != 1 or self.f0.size == 0:
            raise ValueError("feature track must be non-empty")
        if self.vuv.shape != self.f0.shape or self.mcep.shape[0] != self.f0.size:
            raise ValueError("inconsistent feature array lengths")

    def __len__(self):
        return self.f0.size

    def frame(self, i: int) -> AcousticFrame:
        return AcousticFrame(
            f0=float(self.f0[i]),
            vuv=bool(self.vuv[i]),
            energy=float(self.mcep[i, 0]),
            mcep=self.mcep[i, 1:],
        )


def estimate_f0(wave: Waveform, params: AnalysisParams) -> tuple[np.ndarray, np.ndarray]:
    """Per-frame F0 and voicing by normalized autocorrelation.

    For each frame the lag range [sample_rate/F0_MAX, sample_rate/F0_MIN]
    is searched; a frame is voiced when the peak normalized autocorrelation
    reaches VOICING_THRESHOLD and the frame RMS clears RMS_GATE. The peak
    lag is refined by parabolic interpolation, preferring the shortest lag
    among near-ties to avoid octave errors. Unvoiced frames get f0 = 0.
    """
    samples = wave.samples
    if samples.size == 0:
        raise ValueError("empty input")
    fs, shift, length = params.sample_rate, params.frame_shift, params.frame_len
    lag_min = int(fs / F0_MAX)
    lag_max = int(np.ceil(fs / F0_MIN))
    n = num_frames(samples.size, shift)
    padded = np.zeros((n - 1) * shift + length + lag_max)
    padded[: samples.size] = samples

    f0 = np.zeros(n)
    vuv = np.zeros(n, dtype=bool)
    for i in range(n):
        seg = padded[i * shift : i * shift + length + lag_max]
        base = seg[:length]
        base_energy = float(base @ base)
        if np.sqrt(base_energy / length) < RMS_GATE:
            continue
        corr = np.correlate(seg, base, mode="valid")  # lag 0..lag_max
        sq = np.concatenate(([0.0], np.cumsum(seg * seg)))
        energies = sq[length:] - sq[: lag_max + 1]
        r = corr / np.sqrt(base_energy * energies + 1e-300)
        span = r[lag_min : lag_max + 1]
        peak = float(span.max())
        if peak < VOICING_THRESHOLD:
            continue
        lag = lag_min + _pick_peak_lag(span, peak)
        lag_f = lag + _parabolic_offset(r, lag)
        f0[i] = float(np.clip(fs / lag_f, F0_MIN, F0_MAX))
        vuv[i] = True
    return f0, vuv


def _pick_peak_lag(span: np.ndarray, peak: float) -> int:
    """Shortest local maximum within 3% of the peak, to dodge period multiples."""
    local_max = np.zeros(span.size, dtype=bool)
    local_max[1:-1] = (span[1:-1] >= span[:-2]) & (span[1:-1] >= span[2:])
    local_max[0] = span[0] >= span[1]
    local_max[-1] = span[-1] >= span[-2]
    candidates = np.nonzero(local_max & (span >= 0.97 * peak))[0]
    if candidates.size == 0:
        return int(np.argmax(span))
    return int(candidates[0])


def _parabolic_offset(r: np.ndarray, lag: int) -> float:
    """Sub-sample peak offset from a 3-point parabolic fit, in (-0.5, 0.5)."""
    if lag <= 0 or lag >= r.size - 1:
        return 0.0
    denom = r[lag - 1] - 2.0 * r[lag] + r[lag + 1]
    if abs(denom) < 1e-12:
        return 0.0
    return float(np.clip(0.5 * (r[lag - 1] - r[lag + 1]) / denom, -0.5, 0.5))


def mcep_analysis(las_frame: np.ndarray, params: AnalysisParams, order: int = MCEP_ORDER) -> np.ndarray:
    """Warped cepstral coefficients (energy first) of one log spectrum frame.

    Inverse of the synthesis path: the mirrored log spectrum is inverse
    Fourier transformed to a length-K cepstrum, warped with -alpha, and
    truncated to order+1 coefficients.
    """
    from .alas import warp_cepstrum  # local import; alas builds on this module

    las_frame = np.asarray(las_frame, dtype=np.float64)
    k = params.num_bins
    if las_frame.ndim != 1 or las_frame.size != k:
        raise ValueError(f"expected a length-{k} log spectrum, got {las_frame.shape}")
    if order < 1 or order + 1 > k:
        raise ValueError("order must be in [1, num_bins-1]")
    cepstrum = np.fft.irfft(las_frame, n=params.fft_size)[:k]
    warped = warp_cepstrum(cepstrum, -params.warp_alpha)
    return warped[: order + 1]


def extract_features(wave: Waveform, params: AnalysisParams, order: int = MCEP_ORDER) -> FeatureTrack:
    """Full acoustic feature track: F0/voicing plus per-frame mel-cepstra."""
    las = extract_las(wave, params)
    f0, vuv = estimate_f0(wave, params)
    mcep = np.stack([mcep_analysis(row, params, order) for row in las])
    return FeatureTrack(
        f0=f0, vuv=vuv, mcep=mcep, frame_shift=params.frame_shift, sample_rate=params.sample_rate
    )
