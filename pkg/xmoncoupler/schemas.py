"""
Data schemas for xmoncoupler.

This module defines Pydantic models for circuit parameters, grids, sweep
configuration and sweep output rows. Internal computations use SI units
(farads, henries, webers, radians, rad/s); the JSON configuration encodes its
units in the key names (C1_fF, Lj1_nH, L01_pH, ...).
"""

import math
import re
from typing import ClassVar, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import constants

# Superconducting flux quantum h/2e and reduced Planck constant
PHI0 = constants.physical_constants["mag. flux quantum"][0]
HBAR = constants.hbar

PathName = Literal["weak", "linear", "perturbative", "exact"]
ALL_PATHS: List[str] = ["weak", "linear", "perturbative", "exact"]

_FLUX_PATTERN = re.compile(
    r"^\s*([+-])?\s*(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)?\s*\*?\s*(pi|π)\s*$"
)


def parse_flux(value: Union[str, float, int]) -> float:
    """
    Parse a flux value into radians.

    Accepts plain numbers (radians) or strings such as "0.598pi", "0.598π",
    "pi", "-0.5pi" and "1.2".

    Raises:
        ValueError: if the string is not a recognised flux value
    """
    if isinstance(value, bool):
        raise ValueError(f"not a flux value: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ValueError(f"not a flux value: {value!r}")
    text = value.strip()
    match = _FLUX_PATTERN.match(text)
    if match:
        sign = -1.0 if match.group(1) == "-" else 1.0
        factor = float(match.group(2)) if match.group(2) else 1.0
        return sign * factor * math.pi
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"not a flux value: {value!r}") from None


class CircuitParams(BaseModel):
    """
    Lumped-element parameters of two Xmon qubits joined by a tunable coupler (SI).
    """
    C1: float = Field(..., gt=0, description="Qubit 1 shunt capacitance (F)")
    C2: float = Field(..., gt=0, description="Qubit 2 shunt capacitance (F)")
    Lj1: float = Field(..., gt=0, description="Qubit 1 junction inductance (H)")
    Lj2: float = Field(..., gt=0, description="Qubit 2 junction inductance (H)")
    L01: float = Field(..., gt=0, description="Qubit 1 grounding inductance (H)")
    L02: float = Field(..., gt=0, description="Qubit 2 grounding inductance (H)")
    LT: float = Field(..., gt=0, description="Coupler junction inductance (H)")
    Phi0: float = Field(PHI0, gt=0, description="Flux quantum h/2e (Wb)")
    hbar: float = Field(HBAR, gt=0, description="Reduced Planck constant (J s)")

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={
            "example": {
                "C1": 91e-15, "C2": 91e-15,
                "Lj1": 8.6e-9, "Lj2": 8.6e-9,
                "L01": 200e-12, "L02": 200e-12,
                "LT": 1.3e-9,
            }
        }
    )

    @property
    def screening_ratio(self) -> float:
        """r = (L01 + L02) / LT."""
        return (self.L01 + self.L02) / self.LT

    @property
    def phi0_reduced(self) -> float:
        """Reduced flux quantum Phi0 / 2pi."""
        return self.Phi0 / (2.0 * math.pi)

    def inductances_symmetric(self, rel_tol: float = 1e-12) -> bool:
        return (math.isclose(self.Lj1, self.Lj2, rel_tol=rel_tol)
                and math.isclose(self.L01, self.L02, rel_tol=rel_tol))

    def is_symmetric(self, rel_tol: float = 1e-12) -> bool:
        """True when both qubits carry identical parameters."""
        return self.inductances_symmetric(rel_tol) and math.isclose(self.C1, self.C2, rel_tol=rel_tol)

    def with_updates(self, **changes: float) -> "CircuitParams":
        """Return a validated copy with some parameters replaced."""
        return CircuitParams.model_validate({**self.model_dump(), **changes})

    def swapped(self) -> "CircuitParams":
        """Parameters with the qubit labels exchanged."""
        return self.with_updates(
            C1=self.C2, C2=self.C1, Lj1=self.Lj2, Lj2=self.Lj1, L01=self.L02, L02=self.L01
        )


class GridSpec(BaseModel):
    """
    Uniform phase grid on [-span, span] with an odd number of points.

    The grid contains 0 and is exactly antisymmetric: point i and point
    n-1-i are negatives of each other.
    """
    n_points: int = Field(61, ge=3, description="Points per axis (odd)")
    span: float = Field(math.pi, gt=0, description="Half-width of the grid (radians)")
    kinetic: Literal["tight_binding", "fourier"] = Field(
        "fourier", description="Kinetic operator discretisation"
    )

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        json_schema_extra={"example": {"n_points": 61, "span": "1pi", "kinetic": "fourier"}}
    )

    @field_validator("span", mode="before")
    @classmethod
    def parse_span(cls, v):
        return parse_flux(v)

    @field_validator("n_points")
    @classmethod
    def check_odd(cls, v: int) -> int:
        if v % 2 == 0:
            raise ValueError("n_points must be odd so that the grid contains zero")
        return v

    @property
    def half_count(self) -> int:
        return (self.n_points - 1) // 2

    @property
    def d_phi(self) -> float:
        return self.span / self.half_count

    @property
    def points(self) -> np.ndarray:
        return self.d_phi * (np.arange(self.n_points) - self.half_count)

    @property
    def dimension(self) -> int:
        return self.n_points * self.n_points


class CircuitConfig(BaseModel):
    """
    Circuit parameters as written in a JSON configuration (units in key names).
    """
    C1_fF: float = Field(..., gt=0, description="Qubit 1 capacitance (fF)")
    C2_fF: float = Field(..., gt=0, description="Qubit 2 capacitance (fF)")
    Lj1_nH: float = Field(..., gt=0, description="Qubit 1 junction inductance (nH)")
    Lj2_nH: float = Field(..., gt=0, description="Qubit 2 junction inductance (nH)")
    L01_pH: float = Field(..., gt=0, description="Qubit 1 grounding inductance (pH)")
    L02_pH: float = Field(..., gt=0, description="Qubit 2 grounding inductance (pH)")
    LT_nH: float = Field(..., gt=0, description="Coupler junction inductance (nH)")
    Phi0_Wb: Optional[float] = Field(None, gt=0, description="Override of the flux quantum (Wb)")
    hbar_Js: Optional[float] = Field(None, gt=0, description="Override of hbar (J s)")

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "C1_fF": 91, "C2_fF": 91, "Lj1_nH": 8.6, "Lj2_nH": 8.6,
                "L01_pH": 200, "L02_pH": 200, "LT_nH": 1.3,
            }
        }
    )

    def to_params(self) -> CircuitParams:
        """Convert to SI CircuitParams."""
        values = {
            "C1": self.C1_fF * 1e-15, "C2": self.C2_fF * 1e-15,
            "Lj1": self.Lj1_nH * 1e-9, "Lj2": self.Lj2_nH * 1e-9,
            "L01": self.L01_pH * 1e-12, "L02": self.L02_pH * 1e-12,
            "LT": self.LT_nH * 1e-9,
        }
        if self.Phi0_Wb is not None:
            values["Phi0"] = self.Phi0_Wb
        if self.hbar_Js is not None:
            values["hbar"] = self.hbar_Js
        return CircuitParams(**values)


class SweepConfig(BaseModel):
    """
    Complete configuration of a flux sweep. Unknown keys are rejected.
    """
    circuit: CircuitConfig
    flux_start: float = Field(0.0, description="First flux point (radians or 'Xpi')")
    flux_stop: float = Field(2 * math.pi, description="Last flux point (radians or 'Xpi')")
    n_flux: int = Field(241, ge=2, description="Number of flux points, endpoints included")
    paths: List[PathName] = Field(default_factory=lambda: list(ALL_PATHS))
    grid: GridSpec = Field(default_factory=GridSpec, description="2D grid of the exact path")
    eta_grid: GridSpec = Field(
        default_factory=lambda: GridSpec(n_points=801, kinetic="tight_binding"),
        description="1D grid of the single-qubit anharmonicity"
    )
    eta_bias: Literal["zero_coupling", "open"] = Field(
        "zero_coupling", description="Bias used for the single-qubit anharmonicity"
    )
    eta_override_MHz: Optional[float] = Field(None, gt=0, description="Fixed eta/2pi (MHz)")
    omega_q_weak_GHz: float = Field(5.62, gt=0, description="Qubit frequency of the weak-coupling formula (GHz)")
    n_eigen: int = Field(6, ge=6, description="Eigenpairs requested per exact point")
    workers: Optional[int] = Field(None, ge=1, description="Worker threads for the sweep")
    output_prefix: str = Field("sweep", min_length=1, description="Prefix of the CSV and plot script")

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "circuit": CircuitConfig.model_config["json_schema_extra"]["example"],
                "flux_start": "0pi",
                "flux_stop": "2pi",
                "n_flux": 241,
                "paths": ["weak", "linear", "perturbative", "exact"],
                "grid": {"n_points": 61},
            }
        }
    )

    @field_validator("flux_start", "flux_stop", mode="before")
    @classmethod
    def parse_flux_field(cls, v):
        return parse_flux(v)

    @field_validator("paths")
    @classmethod
    def check_paths(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("at least one path is required")
        if len(set(v)) != len(v):
            raise ValueError("paths must not repeat")
        return [p for p in ALL_PATHS if p in v]

    @field_validator("grid")
    @classmethod
    def check_production_grid(cls, v: GridSpec) -> GridSpec:
        if v.n_points < 31:
            raise ValueError("exact-path grid needs n_points >= 31")
        return v

    @model_validator(mode="after")
    def check_flux_range(self) -> "SweepConfig":
        if self.flux_stop <= self.flux_start:
            raise ValueError("flux_stop must exceed flux_start")
        return self

    @property
    def circuit_params(self) -> CircuitParams:
        return self.circuit.to_params()

    @property
    def flux_values(self) -> np.ndarray:
        return np.linspace(self.flux_start, self.flux_stop, self.n_flux)

    @property
    def eta_override(self) -> Optional[float]:
        """Override of eta in rad/s, or None."""
        if self.eta_override_MHz is None:
            return None
        return 2 * math.pi * self.eta_override_MHz * 1e6

    @property
    def omega_q_weak(self) -> float:
        """Weak-coupling qubit frequency in rad/s."""
        return 2 * math.pi * self.omega_q_weak_GHz * 1e9


class SweepRow(BaseModel):
    """
    One flux point of a sweep. Absent values belong to disabled or failed paths.
    """
    COLUMNS: ClassVar[List[str]] = [
        "phi_ext_over_pi", "delta_rad", "L_eff_nH", "omega_q_GHz",
        "g_weak_MHz", "g_linear_MHz", "dg_MHz", "g_tot_MHz", "zeta",
        "splitting_ED_MHz", "J_approx_kHz", "J_sub_Hz", "J_ED_kHz", "eta_MHz",
        "error",
    ]

    phi_ext_over_pi: float = Field(..., description="External flux in units of pi")
    delta_rad: Optional[float] = Field(None, description="Coupler junction phase (rad)")
    L_eff_nH: Optional[float] = Field(None, description="Effective coupler inductance (nH); absent when open")
    omega_q_GHz: Optional[float] = Field(None, description="Linear-network qubit frequency / 2pi (GHz)")
    g_weak_MHz: Optional[float] = Field(None, description="Weak-coupling g / 2pi (MHz)")
    g_linear_MHz: Optional[float] = Field(None, description="Linear-network g / 2pi (MHz)")
    dg_MHz: Optional[float] = Field(None, description="Nonlinear correction / 2pi (MHz)")
    g_tot_MHz: Optional[float] = Field(None, description="g + dg over 2pi (MHz)")
    zeta: Optional[Union[float, Literal["undefined"]]] = Field(
        None, description="g_tot / g_linear, 'undefined' near the coupling zero"
    )
    splitting_ED_MHz: Optional[float] = Field(None, description="Exact 1-excitation splitting / 2pi (MHz)")
    J_approx_kHz: Optional[float] = Field(None, description="g_tot^2/eta over 2pi (kHz)")
    J_sub_Hz: Optional[float] = Field(None, description="Direct ZZ term / 2pi (Hz)")
    J_ED_kHz: Optional[float] = Field(None, description="Exact ZZ shift / 2pi (kHz)")
    eta_MHz: Optional[float] = Field(None, description="Anharmonicity used for J_approx / 2pi (MHz)")
    error: Optional[str] = Field(None, description="Diagnostic of a failed path")

    model_config = ConfigDict(extra="forbid")
