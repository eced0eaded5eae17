"""Optical point-to-point link budget, SNR, rate, and hop latency.

The link loss decomposes as ``L = Lg + La + L_align`` (all dB):

* ``Lg`` — geometric diffusion loss: the transmit beam spreads as a
  cone; once the spot outgrows the detector, the captured fraction of
  power falls with the square of distance.
* ``La`` — atmospheric absorption, a constant dB-per-kilometre term.
* ``L_align`` — alignment loss from the angular deviation between
  transmitter boresight and receiver: zero when perfectly aligned,
  ramping linearly to a maximum penalty at the edge of the receiver
  field of view, beyond which the link is unavailable.

Detection is square-law: the photodetector converts received optical
power to a current ``I = responsivity * P_rx``, compared against the
root-sum-square of the dark-noise and ambient-light currents, so
``SNR = (I / sigma)**2``.  The achievable rate is Shannon capacity over
the narrower of the modulation and receiver bandwidths.  The link is
dedicated point-to-point: no contention, no scheduling delay — hop
latency is serialization + propagation + a configurable processing
delay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT_M_S = 299_792_458.0


class LinkUnavailable(ValueError):
    """Raised when the optical link is blocked (deviation outside FOV)."""


@dataclass(frozen=True)
class LifiParams:
    """Optical link parameters.

    Attributes:
        wavelength_m: Laser wavelength; recorded for provenance only (no
            implemented formula consumes it).
        optical_power_w: Transmit optical power, watts.
        modulation_bandwidth_hz: Transmitter modulation bandwidth.
        receiver_bandwidth_hz: Receiver front-end bandwidth.
        detector_area_m2: Photodetector aperture area.
        responsivity_a_per_w: Photodetector responsivity.
        beam_divergence_deg: Transmit beam divergence angle, degrees.
        receiver_fov_deg: Receiver field of view, degrees.
        angles_are_full: If True (default), the two angles above are
            full cone angles (half-angles are half of them); if False
            they are already half-angles.
        noise_current_a: Receiver dark/thermal noise current (std).
        ambient_light_current_a: Ambient-light-induced current (std).
        atmospheric_loss_db_per_km: Absorption coefficient.
        alignment_max_loss_db: Alignment penalty at the FOV edge.
        processing_delay_s: Fixed per-hop processing time.
    """

    wavelength_m: float = 905e-9
    optical_power_w: float = 0.45
    modulation_bandwidth_hz: float = 2.5e9
    receiver_bandwidth_hz: float = 1.4e9
    detector_area_m2: float = 1e-4
    responsivity_a_per_w: float = 0.5
    beam_divergence_deg: float = 5.0
    receiver_fov_deg: float = 30.0
    angles_are_full: bool = True
    noise_current_a: float = 1e-8
    ambient_light_current_a: float = 1e-7
    atmospheric_loss_db_per_km: float = 0.1
    alignment_max_loss_db: float = 20.0
    processing_delay_s: float = 0.0

    def __post_init__(self) -> None:
        positive = (
            "wavelength_m",
            "optical_power_w",
            "modulation_bandwidth_hz",
            "receiver_bandwidth_hz",
            "detector_area_m2",
            "responsivity_a_per_w",
            "beam_divergence_deg",
            "receiver_fov_deg",
            "noise_current_a",
            "ambient_light_current_a",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ValueError(
                    f"{name} must be > 0, got {getattr(self, name)}"
                )
        for name in (
            "atmospheric_loss_db_per_km",
            "alignment_max_loss_db",
            "processing_delay_s",
        ):
            if getattr(self, name) < 0:
                raise ValueError(
                    f"{name} must be >= 0, got {getattr(self, name)}"
                )
        if self.beam_divergence_deg >= self.receiver_fov_deg:
            raise ValueError(
                "beam_divergence_deg must be smaller than receiver_fov_deg, "
                f"got {self.beam_divergence_deg} >= {self.receiver_fov_deg}"
            )

    @property
    def divergence_half_angle_deg(self) -> float:
        return self.beam_divergence_deg / 2 if self.angles_are_full else self.beam_divergence_deg

    @property
    def fov_half_angle_deg(self) -> float:
        return self.receiver_fov_deg / 2 if self.angles_are_full else self.receiver_fov_deg


@dataclass(frozen=True)
class LifiLossBreakdown:
    """Loss components in dB; components always sum to ``total_db``.

    ``available`` is False when the angular deviation exceeds the
    receiver half-FOV; the alignment and total components are then
    infinite.
    """

    geometric_db: float
    atmospheric_db: float
    alignment_db: float
    total_db: float
    available: bool


def geometric_loss_db(params: LifiParams, distance_m: float) -> float:
    """Beam-spreading loss ``Lg = max(0, 10*log10(spot_area / detector_area))``.

    The spot radius at distance d is ``d * tan(half_divergence)``;
    distances small enough that the spot fits inside the detector lose
    nothing.  For larger d the linear capture fraction decays as 1/d².

    Raises:
        ValueError: If ``distance_m < 0``.
    """
    if distance_m < 0:
        raise ValueError(f"distance must be >= 0 m, got {distance_m}")
    radius_m = distance_m * math.tan(
        math.radians(params.divergence_half_angle_deg)
    )
    spot_area_m2 = math.pi * radius_m * radius_m
    if spot_area_m2 <= params.detector_area_m2:
        return 0.0
    return 10.0 * math.log10(spot_area_m2 / params.detector_area_m2)


def alignment_loss_db(
    params: LifiParams, angular_deviation_deg: float
) -> float | None:
    """Pointing penalty in dB, or None when the link is blocked.

    0 dB at perfect alignment, rising linearly to
    ``alignment_max_loss_db`` at the receiver half-FOV; deviations
    beyond the half-FOV return None (link unavailable).

    Raises:
        ValueError: If ``angular_deviation_deg < 0``.
    """
    if angular_deviation_deg < 0:
        raise ValueError(
            f"angular deviation must be >= 0 deg, got {angular_deviation_deg}"
        )
    half_fov = params.fov_half_angle_deg
    if angular_deviation_deg > half_fov:
        return None
    return params.alignment_max_loss_db * (angular_deviation_deg / half_fov)


def atmospheric_loss_db(params: LifiParams, distance_m: float) -> float:
    """Absorption loss: ``atmospheric_loss_db_per_km * d_km``."""
    if distance_m < 0:
        raise ValueError(f"distance must be >= 0 m, got {distance_m}")
    return params.atmospheric_loss_db_per_km * (distance_m / 1000.0)


def total_loss(
    params: LifiParams, distance_m: float, angular_deviation_deg: float = 0.0
) -> LifiLossBreakdown:
    """Full loss breakdown at ``distance_m`` and the given deviation.

    Raises:
        ValueError: If ``distance_m <= 0`` or the deviation is negative.
    """
    if distance_m <= 0:
        raise ValueError(f"distance must be > 0 m, got {distance_m}")
    geometric = geometric_loss_db(params, distance_m)
    atmospheric = atmospheric_loss_db(params, distance_m)
    alignment = alignment_loss_db(params, angular_deviation_deg)
    if alignment is None:
        return LifiLossBreakdown(
            geometric_db=geometric,
            atmospheric_db=atmospheric,
            alignment_db=math.inf,
            total_db=math.inf,
            available=False,
        )
    return LifiLossBreakdown(
        geometric_db=geometric,
        atmospheric_db=atmospheric,
        alignment_db=alignment,
        total_db=geometric + atmospheric + alignment,
        available=True,
    )


def snr_linear(
    params: LifiParams, distance_m: float, angular_deviation_deg: float = 0.0
) -> float:
    """Electrical SNR (linear ratio, not dB) after square-law detection.

    ``P_rx = optical_power * 10^(-L/10)``; signal current
    ``I = responsivity * P_rx``; noise current
    ``sigma = sqrt(noise² + ambient²)``; ``SNR = (I/sigma)²``.

    Raises:
        LinkUnavailable: If the deviation is outside the receiver FOV.
        ValueError: If ``distance_m <= 0`` or the deviation is negative.
    """
    breakdown = total_loss(params, distance_m, angular_deviation_deg)
    if not breakdown.available:
        raise LinkUnavailable(
            f"optical link blocked: deviation {angular_deviation_deg} deg "
            f"exceeds half-FOV {params.fov_half_angle_deg} deg"
        )
    rx_power_w = params.optical_power_w * 10.0 ** (-breakdown.total_db / 10.0)
    signal_current_a = params.responsivity_a_per_w * rx_power_w
    noise_current_a = math.hypot(
        params.noise_current_a, params.ambient_light_current_a
    )
    return (signal_current_a / noise_current_a) ** 2


def achievable_rate_bps(params: LifiParams, snr: float) -> float:
    """Shannon rate over the narrower bandwidth: ``B_eff * log2(1+snr)``.

    Raises:
        ValueError: If ``snr < 0``.
    """
    if snr < 0:
        raise ValueError(f"snr must be >= 0, got {snr}")
    bandwidth_hz = min(params.modulation_bandwidth_hz, params.receiver_bandwidth_hz)
    return bandwidth_hz * math.log2(1.0 + snr)


def hop_latency_s(
    params: LifiParams,
    distance_m: float,
    packet_bits: int,
    angular_deviation_deg: float = 0.0,
) -> float:
    """One-hop delivery time: serialization + propagation + processing.

    Raises:
        LinkUnavailable: If the link is blocked or the achievable rate
            is zero.
        ValueError: If ``packet_bits <= 0`` or geometry arguments are
            out of range.
    """
    if packet_bits <= 0:
        raise ValueError(f"packet_bits must be > 0, got {packet_bits}")
    rate_bps = achievable_rate_bps(
        params, snr_linear(params, distance_m, angular_deviation_deg)
    )
    if rate_bps <= 0:
        raise LinkUnavailable(
            f"optical link outage: achievable rate is 0 bps at "
            f"{distance_m} m"
        )
    return (
        packet_bits / rate_bps
        + distance_m / SPEED_OF_LIGHT_M_S
        + params.processing_delay_s
    )
