"""Core STFT utilities: framing, windowing, log amplitude spectra, Griffin-Lim.

A log amplitude spectrum (LAS) matrix is a plain float64 ndarray of shape
(num_frames, num_bins) holding natural-log magnitudes, floored at
``log(params.log_floor)``.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AnalysisParams:
    """Frame/FFT geometry and warping constant shared by all stages.

    Defaults give 20 ms frames with 5 ms shift at 16 kHz, a 512-point FFT
    (257 bins) and warp coefficient 0.42.
    """

    sample_rate: int = 16000
    frame_len: int = 320
    frame_shift: int = 80
    fft_size: int = 512
    warp_alpha: float = 0.42
    log_floor: float = 1e-10

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if self.frame_len < 2:
            raise ValueError("frame_len must be >= 2")
        if self.frame_len % 2 != 0:
            raise ValueError("frame_len must be even (zero-phase window centering)")
        if self.frame_shift < 1 or self.frame_shift > self.frame_len:
            raise ValueError("frame_shift must be in [1, frame_len]")
        if self.fft_size < self.frame_len:
            raise ValueError("fft_size must be >= frame_len")
        if self.fft_size & (self.fft_size - 1) != 0:
            raise ValueError("fft_size must be a power of two")
        if not 0.0 <= self.warp_alpha < 1.0:
            raise ValueError("warp_alpha must be in [0, 1)")
        if self.log_floor <= 0.0:
            raise ValueError("log_floor must be positive")

    @property
    def num_bins(self) -> int:
        return self.fft_size // 2 + 1


@dataclass(frozen=True, eq=False)
class Waveform:
    """Mono PCM samples (float, nominally in [-1, 1]) with a sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if self.samples.size and not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    def __len__(self):
        return self.samples.size


def hann_window(length: int) -> np.ndarray:
    """Periodic Hann window: w[j] = 0.5 - 0.5*cos(2*pi*j/length)."""
    if length < 2:
        raise ValueError("window length must be >= 2")
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(length) / length)


def num_frames(n_samples: int, frame_shift: int) -> int:
    """Frame count for a signal: one frame per started shift interval."""
    return -(-n_samples // frame_shift)


def frame_signal(wave: Waveform, params: AnalysisParams) -> np.ndarray:
    """Cut a waveform into overlapping frames of length ``params.frame_len``.

    Frame n starts at n*frame_shift; the tail is zero-padded so every frame
    has full length. Returns an (N, frame_len) array.
    """
    samples = wave.samples
    if samples.size == 0:
        raise ValueError("empty input")
    shift, length = params.frame_shift, params.frame_len
    n = num_frames(samples.size, shift)
    padded = np.zeros((n - 1) * shift + length)
    padded[: samples.size] = samples
    starts = shift * np.arange(n)
    return padded[starts[:, None] + np.arange(length)[None, :]]


def extract_las(wave: Waveform, params: AnalysisParams) -> np.ndarray:
    """Log amplitude spectra of a waveform: per frame, log|FFT(frame * hann)|.

    Magnitudes are floored at ``params.log_floor`` before the log, so the
    result is finite everywhere and >= log(log_floor).
    """
    frames = frame_signal(wave, params)
    window = hann_window(params.frame_len)
    spectra = np.fft.rfft(frames * window, n=params.fft_size, axis=1)
    return np.log(np.maximum(np.abs(spectra), params.log_floor))


def mirror_full_spectrum(half: np.ndarray, fft_size: int) -> np.ndarray:
    """Expand a length-K half spectrum to the even-symmetric full spectrum.

    out[k] = half[k] for k < K and out[fft_size-k] = half[k] for
    k = 1..K-2, so the result is real-even over the fft_size-point circle.
    """
    half = np.asarray(half, dtype=np.float64)
    k = fft_size // 2 + 1
    if half.ndim != 1 or half.size != k:
        raise ValueError(f"expected a length-{k} half spectrum, got {half.shape}")
    full = np.empty(fft_size)
    full[:k] = half
    full[k:] = half[-2:0:-1]
    return full


def _frames_fixed(samples: np.ndarray, params: AnalysisParams, n: int) -> np.ndarray:
    """Frame a signal into exactly n frames (signal already long enough)."""
    starts = params.frame_shift * np.arange(n)
    return samples[starts[:, None] + np.arange(params.frame_len)[None, :]]


def _overlap_add(spectra: np.ndarray, params: AnalysisParams, window: np.ndarray) -> np.ndarray:
    """Least-squares inverse STFT: windowed overlap-add, squared-window norm.

    Samples with window coverage below 1% of the interior level are left
    unnormalized; dividing there would amplify edge samples by up to the
    inverse squared window value.
    """
    n, length, shift = spectra.shape[0], params.frame_len, params.frame_shift
    frames = np.fft.irfft(spectra, n=params.fft_size, axis=1)[:, :length]
    out = np.zeros((n - 1) * shift + length)
    norm = np.zeros_like(out)
    wsq = window * window
    for i in range(n):
        start = i * shift
        out[start : start + length] += frames[i] * window
        norm[start : start + length] += wsq
    covered = norm > 0.01 * norm.max()
    out[covered] /= norm[covered]
    return out


def griffin_lim(las: np.ndarray, params: AnalysisParams, iters: int = 60) -> Waveform:
    """Reconstruct a waveform whose STFT magnitude matches exp(las).

    Classic alternating projection: overlap-add synthesis from the current
    magnitude/phase estimate, then re-analysis to update the phase. The
    start is deterministic: a linear phase placing each frame's energy at
    the window center. If the result peaks above 1 it is scaled down to
    unit peak.
    """
    las = np.asarray(las, dtype=np.float64)
    if las.ndim != 2 or las.shape[1] != params.num_bins:
        raise ValueError(f"expected (frames, {params.num_bins}) log spectra, got {las.shape}")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    magnitudes = np.exp(las)
    window = hann_window(params.frame_len)
    bins = np.arange(params.num_bins)
    phase = np.broadcast_to(
        -2.0 * np.pi * bins * (params.frame_len // 2) / params.fft_size, magnitudes.shape
    ).copy()
    signal = None
    for _ in range(iters):
        signal = _overlap_add(magnitudes * np.exp(1j * phase), params, window)
        spectra = np.fft.rfft(
            _frames_fixed(signal, params, las.shape[0]) * window, n=params.fft_size, axis=1
        )
        phase = np.angle(spectra)
    peak = np.max(np.abs(signal)) if signal.size else 0.0
    if peak > 1.0:
        signal = signal / peak
    return Waveform(signal, params.sample_rate)


def magnitude_error(signal: Waveform, las: np.ndarray, params: AnalysisParams) -> float:
    """Frobenius distance between |STFT(signal)| and the target exp(las)."""
    window = hann_window(params.frame_len)
    frames = _frames_fixed(signal.samples, params, las.shape[0])
    got = np.abs(np.fft.rfft(frames * window, n=params.fft_size, axis=1))
    return float(math.sqrt(np.sum((got - np.exp(las)) ** 2)))
