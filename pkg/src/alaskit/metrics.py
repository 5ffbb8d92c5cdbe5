"""Objective evaluation: SNR, LAS-RMSE, MCD over voiced frames, F0 RMSE in
cents, and V/UV error rate."""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dsp import Waveform
from .features import FeatureTrack

# natural-log amplitude -> dB
DB_PER_LOG = 20.0 / math.log(10.0)
_MCD_SCALE = 10.0 / math.log(10.0)


@dataclass(frozen=True)
class EvalReport:
    """Metric values for one comparison; absent metrics are None.

    snr_db may be math.inf (the identical-signals sentinel); every other
    present value must be finite.
    """

    frames_compared: int
    snr_db: float | None = None
    las_rmse_db: float | None = None
    mcd_v_db: float | None = None
    f0_rmse_cent: float | None = None
    vuv_error_pct: float | None = None

    def __post_init__(self):
        if self.frames_compared <= 0:
            raise ValueError("frames_compared must be positive")
        for name in ("las_rmse_db", "mcd_v_db", "f0_rmse_cent", "vuv_error_pct"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
        if self.vuv_error_pct is not None and not 0.0 <= self.vuv_error_pct <= 100.0:
            raise ValueError("vuv_error_pct must be in [0, 100]")

    def _items(self):
        for name in ("snr_db", "las_rmse_db", "mcd_v_db", "f0_rmse_cent", "vuv_error_pct"):
            value = getattr(self, name)
            if value is not None:
                yield name, (f"{value:.6f}" if math.isfinite(value) else "inf")
        yield "frames_compared", str(self.frames_compared)

    def lines(self) -> list[str]:
        """Machine-readable metric<TAB>value lines."""
        return [f"{name}\t{value}" for name, value in self._items()]

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def block(self) -> str:
        """Human-readable flat key-value block."""
        return "\n".join(f"{name} = {value}" for name, value in self._items()) + "\n"


def snr_db(ref: Waveform, test: Waveform) -> float:
    """Signal-to-noise ratio 10*log10(sum ref^2 / sum (ref-test)^2), in dB.

    Signals are truncated to the shorter length; identical signals report
    math.inf.
    """
    if ref.sample_rate != test.sample_rate:
        raise ValueError("sample rate mismatch")
    n = min(len(ref), len(test))
    if n == 0:
        raise ValueError("empty signal")
    r = ref.samples[:n]
    t = test.samples[:n]
    signal = float(r @ r)
    if signal <= 0.0:
        raise ValueError("zero reference energy")
    noise = float((r - t) @ (r - t))
    if noise == 0.0:
        return math.inf
    return 10.0 * math.log10(signal / noise)


def las_rmse_db(ref: np.ndarray, test: np.ndarray) -> float:
    """RMSE between two log spectra matrices, measured in dB."""
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    if ref.shape[1:] != test.shape[1:]:
        raise ValueError(f"bin count mismatch: {ref.shape} vs {test.shape}")
    ref, test = _truncate_rows(ref, test)
    diff = DB_PER_LOG * (ref - test)
    return float(np.sqrt(np.mean(diff * diff)))


def mcd_v_db(ref: FeatureTrack, test: FeatureTrack) -> float:
    """Mel-cepstral distortion over commonly voiced frames, energy excluded."""
    ref_c, test_c, both = _common_voiced(ref, test)
    diff = ref_c.mcep[both, 1:] - test_c.mcep[both, 1:]
    per_frame = _MCD_SCALE * np.sqrt(2.0 * np.sum(diff * diff, axis=1))
    return float(per_frame.mean())


def f0_rmse_cent(ref: FeatureTrack, test: FeatureTrack) -> float:
    """RMSE of the F0 ratio in cents over commonly voiced frames."""
    ref_c, test_c, both = _common_voiced(ref, test)
    cents = 1200.0 * np.log2(test_c.f0[both] / ref_c.f0[both])
    return float(np.sqrt(np.mean(cents * cents)))


def vuv_error_pct(ref: FeatureTrack, test: FeatureTrack) -> float:
    """Percentage of frames whose voicing flags disagree."""
    ref_v, test_v = _truncate_rows(ref.vuv, test.vuv)
    if ref_v.size == 0:
        raise ValueError("empty tracks")
    return 100.0 * float(np.mean(ref_v != test_v))


def _truncate_rows(a, b):
    """Clip both inputs to the shorter frame count, warning when they differ."""
    if a.shape[0] != b.shape[0]:
        n = min(a.shape[0], b.shape[0])
        warnings.warn(
            f"frame count mismatch ({a.shape[0]} vs {b.shape[0]}); comparing first {n}",
            stacklevel=3,
        )
        return a[:n], b[:n]
    return a, b


def _common_voiced(ref: FeatureTrack, test: FeatureTrack):
    n = min(len(ref), len(test))
    if len(ref) != len(test):
        warnings.warn(
            f"frame count mismatch ({len(ref)} vs {len(test)}); comparing first {n}",
            stacklevel=3,
        )
    both = ref.vuv[:n] & test.vuv[:n]
    if not np.any(both):
        raise ValueError("no commonly voiced frames")
    return _TrackView(ref, n), _TrackView(test, n), both


class _TrackView:
    """Cheap row-truncated view of a feature track."""

    def __init__(self, track: FeatureTrack, n: int):
        self.f0 = track.f0[:n]
        self.vuv = track.vuv[:n]
        self.mcep = track.mcep[:n]
