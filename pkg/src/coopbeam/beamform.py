"""Random beamforming weights, effective channel, received SNR, and MRC."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Below this total gain the matched filter divides by ~0 and the channel is
# treated as degenerate rather than returning garbage.
DEGENERATE_GAIN = 1e-15

GAIN_MODES = ("frobenius", "vector")


class DegenerateChannelError(ValueError):
    """Raised when MRC is asked to invert an (effectively) zero channel."""


@dataclass(frozen=True)
class BeamformingWeights:
    """Per-node complex weights a_i * exp(j*theta_i).

    Amplitudes are normalized to unit total power, sum(a_i^2) = 1, so the
    transmit power enters the link budget exactly once (through P2).  Phases
    live on the half-open interval [0, 2*pi).
    """

    amplitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=float)
        th = np.asarray(self.phases, dtype=float)
        if a.ndim != 1 or th.shape != a.shape:
            raise ValueError("amplitudes and phases must be 1-d and same length")
        if a.size == 0:
            raise ValueError("weights must have k >= 1 entries")
        if np.any(a < 0):
            raise ValueError("amplitudes must be nonnegative")
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "phases", th)

    @property
    def k(self) -> int:
        return self.amplitudes.size

    @property
    def vector(self) -> np.ndarray:
        """The complex weight vector a_i * exp(j*theta_i)."""
        return self.amplitudes * np.exp(1j * self.phases)


def draw_weights(k: int, rng: np.random.Generator) -> BeamformingWeights:
    """Draw random beamforming weights for k nodes.

    Amplitudes are U(0,1) rescaled so sum(a_i^2) = 1 (for k = 1 the
    normalization forces a_1 = 1); phases are U[0, 2*pi).  Draw order is
    amplitudes first, then phases.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    u = rng.random(k)
    if k == 1:
        a = np.ones(1)  # normalization is exact for a singleton
    else:
        a = u / np.sqrt(np.sum(u * u))
    theta = rng.random(k) * (2.0 * np.pi)
    return BeamformingWeights(a, theta)


def effective_channel(H: np.ndarray, w: BeamformingWeights) -> np.ndarray:
    """Column-scale H by the complex weights: H @ diag(a_i * exp(j*theta_i))."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[1] != w.k:
        raise ValueError(
            f"H has shape {H.shape}, expected {w.k} columns to match weights"
        )
    return H * w.vector[None, :]


def channel_gain(H: np.ndarray, w: BeamformingWeights, mode: str = "frobenius") -> float:
    """Gain statistic of the weighted channel.

    ``frobenius`` (default): squared Frobenius norm of H @ V_b, i.e.
    sum_i a_i^2 * ||column i||^2 — the M*K degrees-of-freedom reading.
    ``vector``: all nodes carry one common symbol and the gain is the squared
    norm of the single effective vector H @ v.
    """
    if mode not in GAIN_MODES:
        raise ValueError(f"unknown gain mode {mode!r}")
    if mode == "vector":
        H = np.asarray(H)
        if H.shape[1] != w.k:
            raise ValueError(
                f"H has shape {H.shape}, expected {w.k} columns to match weights"
            )
        return float(np.sum(np.abs(H @ w.vector) ** 2))
    He = effective_channel(H, w)
    return float(np.sum(np.abs(He) ** 2))


def received_snr(gain: float, p2: float, sigma_n2: float) -> float:
    """Post-combining SNR: (P2 / sigma_n^2) * gain."""
    if p2 <= 0 or sigma_n2 <= 0:
        raise ValueError("p2 and sigma_n2 must be positive")
    if gain < 0:
        raise ValueError("gain must be nonnegative")
    return (p2 / sigma_n2) * gain


def transmit(x, H: np.ndarray, w: BeamformingWeights, noise) -> np.ndarray:
    """Received vector y = H @ V_b @ x + n."""
    x = np.asarray(x)
    noise = np.asarray(noise)
    He = effective_channel(H, w)
    if x.shape != (He.shape[1],):
        raise ValueError(f"x has shape {x.shape}, expected ({He.shape[1]},)")
    if noise.shape != (He.shape[0],):
        raise ValueError(f"noise has shape {noise.shape}, expected ({He.shape[0]},)")
    return He @ x + noise


def mrc_reconstruct(y, H: np.ndarray, w: BeamformingWeights) -> np.ndarray:
    """Matched-filter reconstruction x_hat = (H V_b)^H y / ||H V_b||^2.

    Exact for a single stream (K = 1, noiseless); for K > 1 this is the
    literal matched-filter value with no further equalization.
    """
    y = np.asarray(y)
    He = effective_channel(H, w)
    gain = float(np.sum(np.abs(He) ** 2))
    if gain <= DEGENERATE_GAIN:
        raise DegenerateChannelError(
            f"total channel gain {gain:.3e} too small for MRC"
        )
    return He.conj().T @ y / gain
