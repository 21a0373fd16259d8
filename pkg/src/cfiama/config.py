"""Simulation configuration: defaults, validation, and the key=value file format."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields


def dbm_to_watt(dbm):
    return 10.0 ** (dbm / 10.0) * 1e-3


@dataclass
class SimulationConfig:
    """All tunable parameters of one simulation campaign.

    Defaults reproduce the urban microcell setup used throughout the test
    suite: a 0.5 km x 0.5 km wrap-around area, 50 four-antenna APs and
    fractional downlink power allocation.
    """

    L: int = 50                  # number of access points
    K: int = 50                  # number of user equipments
    N: int = 4                   # antennas per AP (half-wavelength ULA)
    tau_p: int = 5               # orthogonal pilots per coherence block
    tau_c: int = 200             # coherence block length (samples)
    area_side: float = 500.0     # side of the square deployment area [m]
    rho_p: float = 0.1           # UL pilot transmit power [W]
    rho_dl: float = 1.0          # per-AP DL power budget [W]
    noise_power: float = field(default_factory=lambda: dbm_to_watt(-94.0))  # noise power [W]
    kappa: float = 10.0          # reward weight in the interference-aware reward
    mu: float = 1.8              # reward exponent, 1 <= mu <= 2
    nu: float = 0.5              # fractional power allocation exponent
    asd_deg: float = 15.0        # angular standard deviation of local scattering [deg]
    shadow_std_db: float = 4.0   # log-normal shadow fading std [dB]
    n_setups: int = 30           # independent network realizations
    n_channel_reals: int = 200   # channel realizations per setup
    seed: int = 1                # 64-bit master seed

    def __post_init__(self):
        self.validate()

    def validate(self):
        """Raise ValueError naming the offending key and the violated constraint."""
        def require(ok, key, constraint):
            if not ok:
                raise ValueError(f"config key '{key}' violates: {constraint}")

        require(self.L >= 1, "L", "L >= 1")
        require(self.K >= 1, "K", "K >= 1")
        require(self.N >= 1, "N", "N >= 1")
        require(self.tau_p >= 1, "tau_p", "tau_p >= 1")
        require(self.tau_p < self.tau_c, "tau_p", "tau_p < tau_c")
        require(self.K <= self.L * self.tau_p, "K",
                "K <= L * tau_p (feasibility of master assignment)")
        require(self.area_side > 0, "area_side", "area_side > 0")
        require(self.rho_p > 0, "rho_p", "rho_p > 0")
        require(self.rho_dl > 0, "rho_dl", "rho_dl > 0")
        require(self.noise_power > 0, "noise_power", "noise_power > 0")
        require(self.kappa >= 1, "kappa", "kappa >= 1")
        require(1.0 <= self.mu <= 2.0, "mu", "1 <= mu <= 2")
        require(self.asd_deg > 0, "asd_deg", "asd_deg > 0")
        require(self.shadow_std_db >= 0, "shadow_std_db", "shadow_std_db >= 0")
        require(self.n_setups >= 1, "n_setups", "n_setups >= 1")
        require(self.n_channel_reals >= 2, "n_channel_reals",
                "n_channel_reals >= 2 (precoder normalization needs >= 2 samples)")
        require(0 <= self.seed < 2 ** 64, "seed", "0 <= seed < 2^64")
        for key in ("area_side", "rho_p", "rho_dl", "noise_power", "kappa",
                    "mu", "nu", "asd_deg", "shadow_std_db"):
            require(math.isfinite(getattr(self, key)), key, "finite value")

    @property
    def prelog(self):
        """Fraction of the coherence block left for DL data."""
        return 1.0 - self.tau_p / self.tau_c


_INT_KEYS = {"L", "K", "N", "tau_p", "tau_c", "n_setups", "n_channel_reals", "seed"}
_FIELD_NAMES = tuple(f.name for f in fields(SimulationConfig))


def parse_config(path):
    """Parse a flat key=value config file into a SimulationConfig.

    Lines are `key = value`, blank lines and `#` comments ignored; keys must
    match SimulationConfig field names. Unknown keys, malformed lines and
    out-of-range values are rejected with a diagnostic naming the key.
    """
    overrides = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _FIELD_NAMES:
                raise ValueError(f"{path}:{lineno}: unknown config key '{key}'")
            if key in overrides:
                raise ValueError(f"{path}:{lineno}: duplicate config key '{key}'")
            try:
                overrides[key] = int(value) if key in _INT_KEYS else float(value)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for '{key}': {value!r}") from exc
    return SimulationConfig(**overrides)
