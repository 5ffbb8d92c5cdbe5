"""Data-driven refinement of recovered log spectra.

A per-bin affine correction (gain and bias per frequency bin) fitted by
ordinary least squares on paired (recovered, natural) matrices, with an
optional moving-average context window over frames.
"""

import struct
from dataclasses import dataclass

import numpy as np

_MAGIC = b"ALRF"
_VERSION = 1


@dataclass(frozen=True, eq=False)
class RefinerModel:
    """Per-bin gain/bias in log units, plus a temporal smoothing radius."""

    gain: np.ndarray
    bias: np.ndarray
    context_radius: int = 0

    def __post_init__(self):
        if self.gain.shape != self.bias.shape or self.gain.ndim != 1:
            raise ValueError("gain and bias must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(self.gain)) and np.all(np.isfinite(self.bias))):
            raise ValueError("model parameters must be finite")
        if self.context_radius < 0:
            raise ValueError("context_radius must be >= 0")

    @property
    def num_bins(self) -> int:
        return self.gain.size


def fit_refiner(pairs, context_radius: int = 0) -> RefinerModel:
    """Least-squares per-bin affine fit of natural LAS against recovered LAS.

    ``pairs`` is a sequence of (recovered, natural) matrices with matching
    shapes. Bins whose recovered values are (numerically) constant get
    gain 1 and the mean residual as bias.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no training pairs")
    for recovered, natural in pairs:
        if np.shape(recovered) != np.shape(natural):
            raise ValueError(
                f"pair shape mismatch: {np.shape(recovered)} vs {np.shape(natural)}"
            )
    x = np.vstack([np.asarray(r, dtype=np.float64) for r, _ in pairs])
    y = np.vstack([np.asarray(n, dtype=np.float64) for _, n in pairs])
    x_mean = x.mean(axis=0)
    y_mean = y.mean(axis=0)
    x_var = ((x - x_mean) ** 2).mean(axis=0)
    covariance = ((x - x_mean) * (y - y_mean)).mean(axis=0)
    degenerate = x_var < 1e-12
    safe_var = np.where(degenerate, 1.0, x_var)
    gain = np.where(degenerate, 1.0, covariance / safe_var)
    bias = np.where(degenerate, (y - x).mean(axis=0), y_mean - gain * x_mean)
    return RefinerModel(gain=gain, bias=bias, context_radius=context_radius)


def apply_refiner(model: RefinerModel, alas: np.ndarray) -> np.ndarray:
    """Apply the per-bin correction, then the optional frame smoothing."""
    alas = np.asarray(alas, dtype=np.float64)
    if alas.ndim != 2 or alas.shape[1] != model.num_bins:
        raise ValueError(f"expected (frames, {model.num_bins}) input, got {alas.shape}")
    out = alas * model.gain + model.bias
    if model.context_radius > 0:
        out = _moving_average(out, model.context_radius)
    return out


def _moving_average(values: np.ndarray, radius: int) -> np.ndarray:
    """Mean over +-radius frames, truncated at the matrix edges."""
    n = values.shape[0]
    csum = np.vstack([np.zeros((1, values.shape[1])), np.cumsum(values, axis=0)])
    idx = np.arange(n)
    lo = np.maximum(idx - radius, 0)
    hi = np.minimum(idx + radius, n - 1) + 1
    return (csum[hi] - csum[lo]) / (hi - lo)[:, None]


def save_refiner(model: RefinerModel, path) -> None:
    """Write the model in the versioned binary layout (magic ALRF)."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIII", _MAGIC, _VERSION, model.num_bins, model.context_radius))
        fh.write(np.asarray(model.gain, dtype="<f8").tobytes())
        fh.write(np.asarray(model.bias, dtype="<f8").tobytes())


def load_refiner(path) -> RefinerModel:
    """Read a model written by :func:`save_refiner`, validating the header."""
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) < 16:
            raise ValueError("truncated model file")
        magic, version, bins, radius = struct.unpack("<4sIII", header)
        if magic != _MAGIC:
            raise ValueError(f"bad magic {magic!r} (expected {_MAGIC!r})")
        if version != _VERSION:
            raise ValueError(f"unsupported model version {version}")
        payload = fh.read()
    expected = 2 * bins * 8
    if len(payload) != expected:
        raise ValueError(f"model payload is {len(payload)} bytes, expected {expected}")
    gain = np.frombuffer(payload[: bins * 8], dtype="<f8").copy()
    bias = np.frombuffer(payload[bins * 8 :], dtype="<f8").copy()
    return RefinerModel(gain=gain, bias=bias, context_radius=radius)
