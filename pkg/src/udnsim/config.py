"""Scenario configuration: defaults, validation, flat-file parsing, presets."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields


class ConfigError(ValueError):
    """Raised for invalid, out-of-range, or unknown configuration input."""


RB_BANDWIDTH_HZ = 180e3  # one resource block: 12 x 15 kHz subcarriers

SCHEDULERS = ("pf", "rr1", "rr2", "rr3", "rr4")
FADING_MODELS = ("rician", "rayleigh")
SWEEP_AXES = {
    "isd": "isd_m",
    "n_ue": "n_ue",
    "scheduler": "scheduler",
    "fading_model": "fading_model",
    "n_tiers": "n_tiers",
}


@dataclass(frozen=True)
class ScenarioConfig:
    """All tunable parameters of one simulation campaign.

    Defaults follow the standard dense small-cell setup: 2 GHz carrier,
    10 MHz / 50 RBs, 100 subframes per drop, T_c = 4, alpha = 8.045 deg,
    h_UE = 1.5 m, 4 dB shadowing with d_cor = 20 m, N_max = N_UE/2.
    """

    isd_m: float = 40.0            # inter-site distance between neighboring BSs
    n_tiers: int = 1               # interfering tiers around the serving cell
    n_ue: int = 4                  # UEs dropped in the serving cell
    scheduler: str = "pf"          # pf | rr1 | rr2 | rr3 | rr4
    fading_model: str = "rician"   # rician | rayleigh (K forced to 0)
    n_subframes: int = 100         # scheduling intervals per drop (1 ms each)
    n_drops: int = 500             # Monte-Carlo drops per campaign
    t_c: float = 4.0               # moving-average window of the rate tracker
    n_max_rule: str = "half"       # "half" (ceil(n_ue/2), min 1), "all", or an integer
    carrier_ghz: float = 2.0
    bandwidth_mhz: float = 10.0
    n_rb: int = 50
    alpha_deg: float = 8.045       # depression angle of the -3 dB beam edge
    h_ue_m: float = 1.5
    shadow_sigma_db: float = 4.0
    d_cor_m: float = 20.0          # shadowing decorrelation distance
    tx_power_dbm: float = 30.0     # total BS power, split evenly across RBs
    noise_figure_db: float = 9.0
    eta_max: float = 5.55          # spectral-efficiency ceiling, bps/Hz
    master_seed: int = 12345
    min_ue_bs_dist_m: float = 1.0  # exclusion radius around the serving BS
    # Path-loss coefficients, a*log10(d) + b + c*log10(fc_GHz) (urban micro)
    pl_los_coeffs: tuple[float, float, float] = (22.0, 28.0, 20.0)
    pl_nlos_coeffs: tuple[float, float, float] = (36.7, 22.7, 26.0)
    # Antenna pattern overrides; None derives both from alpha_deg
    ant_gain_max_dbi: float = 5.0
    ant_sla_db: float = 20.0
    ant_tilt_deg: float | None = None
    ant_beamwidth_deg: float | None = None

    def n_max(self) -> int:
        """Candidate-set size handed from the time- to the frequency-domain stage."""
        if self.n_max_rule == "half":
            return max(1, math.ceil(self.n_ue / 2))
        if self.n_max_rule == "all":
            return self.n_ue
        return int(self.n_max_rule)

    def validate(self) -> "ScenarioConfig":
        _require(self.isd_m > 0, "isd_m", "must be > 0")
        _require(0 <= self.n_tiers <= 10, "n_tiers", "must be in [0, 10]")
        _require(self.n_ue >= 1, "n_ue", "must be >= 1")
        _require(self.scheduler in SCHEDULERS, "scheduler",
                 f"must be one of {SCHEDULERS}")
        _require(self.fading_model in FADING_MODELS, "fading_model",
                 f"must be one of {FADING_MODELS}")
        _require(self.n_subframes >= 1, "n_subframes", "must be >= 1")
        _require(self.n_drops >= 1, "n_drops", "must be >= 1")
        _require(self.t_c >= 1, "t_c", "must be >= 1")
        if self.n_max_rule not in ("half", "all"):
            try:
                rule = int(self.n_max_rule)
            except ValueError:
                raise ConfigError(
                    "n_max_rule: must be 'half', 'all', or a positive integer")
            _require(rule >= 1, "n_max_rule", "integer rule must be >= 1")
        _require(self.carrier_ghz > 0, "carrier_ghz", "must be > 0")
        _require(self.bandwidth_mhz > 0, "bandwidth_mhz", "must be > 0")
        _require(self.n_rb >= 1, "n_rb", "must be >= 1")
        _require(self.n_rb * RB_BANDWIDTH_HZ <= self.bandwidth_mhz * 1e6 + 1e-6,
                 "n_rb", "n_rb * 180 kHz must fit inside bandwidth_mhz")
        _require(0 < self.alpha_deg < 90, "alpha_deg", "must be in (0, 90)")
        _require(self.h_ue_m > 0, "h_ue_m", "must be > 0")
        _require(self.shadow_sigma_db >= 0, "shadow_sigma_db", "must be >= 0")
        _require(self.d_cor_m > 0, "d_cor_m", "must be > 0")
        _require(-50 <= self.tx_power_dbm <= 80, "tx_power_dbm",
                 "must be in [-50, 80] dBm")
        _require(self.noise_figure_db >= 0, "noise_figure_db", "must be >= 0")
        _require(self.eta_max > 0, "eta_max", "must be > 0")
        _require(self.master_seed >= 0, "master_seed", "must be >= 0")
        _require(self.min_ue_bs_dist_m >= 0, "min_ue_bs_dist_m", "must be >= 0")
        _require(self.min_ue_bs_dist_m < self.isd_m / math.sqrt(3),
                 "min_ue_bs_dist_m", "exclusion radius must fit inside the cell")
        for name in ("pl_los_coeffs", "pl_nlos_coeffs"):
            coeffs = getattr(self, name)
            _require(len(coeffs) == 3, name, "needs exactly 3 coefficients")
        _require(self.ant_sla_db >= 0, "ant_sla_db", "must be >= 0")
        if self.ant_beamwidth_deg is not None:
            _require(self.ant_beamwidth_deg > 0, "ant_beamwidth_deg", "must be > 0")
        return self

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes).validate()


def _require(cond: bool, field_name: str, message: str) -> None:
    if not cond:
        raise ConfigError(f"{field_name}: {message}")


# --- flat key=value config files -------------------------------------------

_TUPLE_FIELDS = {"pl_los_coeffs", "pl_nlos_coeffs"}
_OPTIONAL_FLOAT_FIELDS = {"ant_tilt_deg", "ant_beamwidth_deg"}
_STR_FIELDS = {"scheduler", "fading_model", "n_max_rule"}


def parse_config_text(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse a flat ``key = value`` config (one pair per line, # comments)."""
    cfg = base if base is not None else ScenarioConfig()
    known = {f.name: f for f in fields(ScenarioConfig)}
    overrides: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        overrides[key] = _coerce(key, value)
    return dataclasses.replace(cfg, **overrides).validate()


def parse_config_file(path, base: ScenarioConfig | None = None) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), base=base)


def _coerce(key: str, value: str):
    if key in _STR_FIELDS:
        return value
    if key in _TUPLE_FIELDS:
        parts = [p for p in value.replace(",", " ").split() if p]
        return tuple(float(p) for p in parts)
    if key in _OPTIONAL_FLOAT_FIELDS:
        if value.lower() in ("none", ""):
            return None
        return float(value)
    hints = {f.name: f.type for f in fields(ScenarioConfig)}
    hint = hints[key]
    try:
        if hint == "int":
            return int(value)
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r}")


def serialize_config(cfg: ScenarioConfig) -> str:
    """Render a config as the same flat text format parse_config_text reads."""
    lines = []
    for f in fields(ScenarioConfig):
        value = getattr(cfg, f.name)
        if f.name in _TUPLE_FIELDS:
            rendered = " ".join(repr(v) for v in value)
        elif value is None:
            rendered = "none"
        elif isinstance(value, float):
            rendered = repr(value)
        else:
            rendered = str(value)
        lines.append(f"{f.name} = {rendered}")
    return "\n".join(lines) + "\n"


# --- experiment presets -----------------------------------------------------

ISD_GRID = (20.0, 40.0, 70.0, 150.0, 200.0)


@dataclass(frozen=True)
class GainSpec:
    """Pairing rule for a two-valued axis inside a preset sweep."""
    axis: str            # config field name that distinguishes the pair
    baseline: str | float
    comparison: str | float
    metric: str = "mean_cell_tput_bps"


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    axes: tuple[tuple[str, tuple], ...]  # (config field, values), cross product
    gain: GainSpec | None = None


PRESETS: dict[str, Preset] = {
    "fig3": Preset(
        name="fig3",
        description="UE SINR distribution vs densification: ISD sweep at 4 UEs, PF.",
        axes=(("isd_m", ISD_GRID),),
    ),
    "fig4": Preset(
        name="fig4",
        description="Rayleigh-over-Rician cell-throughput gain, PF, dense ISDs.",
        axes=(
            ("isd_m", (20.0, 40.0, 70.0)),
            ("n_ue", (5, 10)),
            ("fading_model", ("rician", "rayleigh")),
        ),
        gain=GainSpec(axis="fading_model", baseline="rician",
                      comparison="rayleigh", metric="mean_cell_tput_bps"),
    ),
    "fig5": Preset(
        name="fig5",
        description="Mean cell throughput vs served UEs for PF and RR4 across ISDs.",
        axes=(
            ("isd_m", ISD_GRID),
            ("n_ue", tuple(range(1, 11))),
            ("scheduler", ("rr4", "pf")),
        ),
        gain=GainSpec(axis="scheduler", baseline="rr4", comparison="pf",
                      metric="mean_cell_tput_bps"),
    ),
    "fig6": Preset(
        name="fig6",
        description="Mean UE throughput vs served UEs under PF across ISDs.",
        axes=(
            ("isd_m", ISD_GRID),
            ("n_ue", tuple(range(1, 11))),
        ),
    ),
    "fig7": Preset(
        name="fig7",
        description="UE throughput distribution and 5%-tile: PF vs RR4 at 4 UEs.",
        axes=(
            ("isd_m", (20.0, 40.0, 200.0)),
            ("scheduler", ("rr4", "pf")),
        ),
        gain=GainSpec(axis="scheduler", baseline="rr4", comparison="pf",
                      metric="p05_ue_tput_bps"),
    ),
}


def expand_preset(name: str, base: ScenarioConfig) -> list[tuple[str, ScenarioConfig]]:
    """Expand a preset into (label, config) pairs, in deterministic order."""
    if name not in PRESETS:
        raise ConfigError(f"preset: unknown preset {name!r}, "
                          f"choose from {sorted(PRESETS)}")
    preset = PRESETS[name]
    combos: list[tuple[str, ScenarioConfig]] = [("", base)]
    for field_name, values in preset.axes:
        nxt = []
        for label, cfg in combos:
            for value in values:
                part = f"{_axis_tag(field_name)}{value:g}" if isinstance(value, (int, float)) \
                    else str(value)
                nxt.append((f"{label}_{part}" if label else part,
                            cfg.replace(**{field_name: value})))
        combos = nxt
    return combos


def _axis_tag(field_name: str) -> str:
    return {"isd_m": "isd", "n_ue": "ue", "n_tiers": "tiers"}.get(field_name, field_name)


def campaign_label(cfg: ScenarioConfig) -> str:
    return (f"isd{cfg.isd_m:g}_ue{cfg.n_ue}_{cfg.scheduler}_{cfg.fading_model}"
            f"_tiers{cfg.n_tiers}")
