"""Radio-frequency link math: log-distance path loss, SINR, decoding.

The channel is deterministic: a log-distance path-loss law
``PL(d) = slope * log10(d) + intercept`` (d in metres by default, a
config switch selects kilometres), fixed transmit and noise powers, and
an inclusive SINR decode threshold.  All randomness in the simulator
lives in the MAC layer; an optional log-normal shadowing hook exists for
sensitivity studies and defaults off.

All power arithmetic is done in the linear domain (milliwatts) and
converted at the edges; helper converters are exported for reuse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


def dbm_to_mw(dbm: float) -> float:
    """Convert a power in dBm to milliwatts."""
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw: float) -> float:
    """Convert a power in milliwatts to dBm; requires ``mw > 0``."""
    if mw <= 0:
        raise ValueError(f"power must be > 0 mW, got {mw}")
    return 10.0 * math.log10(mw)


@dataclass(frozen=True)
class Cv2xParams:
    """Radio parameters.

    Attributes:
        tx_power_dbm: Transmit power (per message, per vehicle).
        noise_power_dbm: Receiver noise floor.
        carrier_frequency_hz: Carrier frequency; recorded for provenance
            only — the path-loss intercept already encodes the band.
        pathloss_intercept_db: Additive constant of the path-loss law.
        pathloss_slope_db: Slope per decade of distance (> 0).
        sinr_threshold_db: Decode threshold, inclusive; ``-inf`` makes
            every non-half-duplex reception succeed.
        pathloss_distance_unit: "m" or "km" — unit of d inside
            ``log10(d)``.
        shadowing_sigma_db: Standard deviation of the optional
            log-normal shadowing term; 0 disables it (default).
    """

    tx_power_dbm: float = 23.0
    noise_power_dbm: float = -114.0
    carrier_frequency_hz: float = 5.9e9
    pathloss_intercept_db: float = 11.82
    pathloss_slope_db: float = 40.0
    sinr_threshold_db: float = 5.0
    pathloss_distance_unit: str = "m"
    shadowing_sigma_db: float = 0.0

    def __post_init__(self) -> None:
        if self.pathloss_slope_db <= 0:
            raise ValueError(
                f"pathloss_slope_db must be > 0, got {self.pathloss_slope_db}"
            )
        if self.tx_power_dbm <= self.noise_power_dbm:
            raise ValueError(
                "tx_power_dbm must exceed noise_power_dbm, got "
                f"{self.tx_power_dbm} <= {self.noise_power_dbm}"
            )
        if self.pathloss_distance_unit not in ("m", "km"):
            raise ValueError(
                "pathloss_distance_unit must be 'm' or 'km', "
                f"got {self.pathloss_distance_unit!r}"
            )
        if self.shadowing_sigma_db < 0:
            raise ValueError(
                f"shadowing_sigma_db must be >= 0, got {self.shadowing_sigma_db}"
            )


@dataclass(frozen=True)
class RxAttempt:
    """One reception to adjudicate.

    Attributes:
        signal_dbm: Received power of the wanted transmission.
        interferer_dbms: Received powers of all simultaneous
            same-subchannel transmissions (may be empty).
        noise_dbm: Noise floor.
    """

    signal_dbm: float
    interferer_dbms: tuple[float, ...] = field(default_factory=tuple)
    noise_dbm: float = -114.0


def pathloss_db(params: Cv2xParams, distance_m: float) -> float:
    """Path loss ``slope * log10(d) + intercept`` in dB.

    ``distance_m`` is always given in metres; ``params.pathloss_distance_unit``
    selects the unit of d inside the logarithm.

    Raises:
        ValueError: If ``distance_m <= 0``.
    """
    if distance_m <= 0:
        raise ValueError(f"distance must be > 0 m, got {distance_m}")
    d = distance_m if params.pathloss_distance_unit == "m" else distance_m / 1000.0
    return params.pathloss_slope_db * math.log10(d) + params.pathloss_intercept_db


def rx_power_dbm(
    params: Cv2xParams, distance_m: float, shadowing_db: float = 0.0
) -> float:
    """Received power at ``distance_m``: tx power minus path loss.

    ``shadowing_db`` is an externally drawn shadowing realization
    (positive values weaken the link); callers pass 0 for the default
    deterministic channel.
    """
    return params.tx_power_dbm - pathloss_db(params, distance_m) - shadowing_db


def sinr_db(attempt: RxAttempt) -> float:
    """Signal-to-interference-plus-noise ratio in dB.

    Computed in the linear domain:
    ``10*log10(S / (N + sum(I)))``.  With no interferers this equals
    ``signal_dbm - noise_dbm`` exactly.
    """
    signal_mw = dbm_to_mw(attempt.signal_dbm)
    denom_mw = dbm_to_mw(attempt.noise_dbm) + sum(
        dbm_to_mw(i) for i in attempt.interferer_dbms
    )
    return 10.0 * math.log10(signal_mw / denom_mw)


def decode_success(params: Cv2xParams, attempt: RxAttempt) -> bool:
    """True iff the attempt's SINR meets the threshold (inclusive)."""
    return sinr_db(attempt) >= params.sinr_threshold_db
