"""Device-design calculator: level splittings, suppression factors, scalings.

A torus trapping n_x flux quanta behaves as a giant atom with discrete
energy levels; the level spacing fixes the read/write wavelength. Other
entries here are the solid-torus Boltzmann suppression, the four winding
parity classes, the loop-current scale, and the logarithmic anyon
prefactor. Every "~" relation carries coefficient 1 and an "estimate"
label; nothing here pretends to more accuracy than that.
"""

import math
from dataclasses import dataclass

FINE_STRUCTURE = 7.2973525693e-3
HBAR_SI = 1.054571817e-34        # J s
C_LIGHT_SI = 2.99792458e8        # m / s
HBAR_C_SI = HBAR_SI * C_LIGHT_SI  # J m


@dataclass(frozen=True)
class DeviceSpec:
    """Geometry and operating point of a candidate memory device.

    r_eff        effective electromagnetic size R (length)
    n1, n2       winding levels, n2 > n1 >= 0
    l_x, l_y     torus dimensions (length), l_x >= l_y
    epsilon_line flux-line energy per unit length (user supplied)
    temperature  operating temperature
    """

    r_eff: float
    n1: int
    n2: int
    l_x: float
    l_y: float
    epsilon_line: float
    temperature: float

    def __post_init__(self):
        if self.r_eff <= 0.0:
            raise ValueError("r_eff must be positive")
        if not (self.n2 > self.n1 >= 0):
            raise ValueError(f"need n2 > n1 >= 0, got n1={self.n1}, "
                             f"n2={self.n2}")
        if self.epsilon_line < 0.0:
            raise ValueError("epsilon_line must be >= 0")
        if self.l_x <= 0.0 or self.l_y <= 0.0:
            raise ValueError("torus dimensions must be positive")


@dataclass(frozen=True)
class LevelSplitting:
    """Transition energy and wavelength between two winding levels.

    Natural units take hbar = c = 1 with lengths in units of r_eff's
    unit, so energy_natural = 2*pi/wavelength. SI values assume r_eff
    was given in multiples of r_unit_m meters.
    """

    energy_natural: float      # 1/length units
    wavelength: float          # same length unit as r_eff
    energy_si_joule: float
    wavelength_si_m: float
    label: str = "estimate"


def level_splitting(spec: DeviceSpec, r_unit_m: float = 1.0) -> LevelSplitting:
    """Energy splitting hbar*omega = hbar^2 c^2 (n2^2-n1^2)/(e^2 R) and its wavelength.

    With e^2 = alpha_EM * hbar * c this is hbar*c*(n2^2-n1^2)/(alpha_EM R),
    giving lambda = 2 pi alpha_EM R / (n2^2 - n1^2).
    """
    dn2 = spec.n2**2 - spec.n1**2
    if dn2 == 0:
        raise ValueError("degenerate levels: n2 == n1 gives zero splitting")
    wavelength = 2.0 * math.pi * FINE_STRUCTURE * spec.r_eff / dn2
    energy_natural = 2.0 * math.pi / wavelength
    r_m = spec.r_eff * r_unit_m
    wavelength_si = 2.0 * math.pi * FINE_STRUCTURE * r_m / dn2
    energy_si = HBAR_C_SI * dn2 / (FINE_STRUCTURE * r_m)
    return LevelSplitting(energy_natural=energy_natural,
                          wavelength=wavelength,
                          energy_si_joule=energy_si,
                          wavelength_si_m=wavelength_si)


def solid_torus_suppression(spec: DeviceSpec) -> float:
    """Boltzmann factor exp(-E0/T) of the critical flux line, E0 = eps_line * l_y.

    The barrier top is a flux line across the torus cross-section, so the
    rate falls exponentially with the short circumference.
    """
    if spec.temperature <= 0.0:
        raise ValueError("suppression factor requires T > 0")
    return math.exp(-spec.epsilon_line * spec.l_y / spec.temperature)


def anyon_prefactor_log(l_prime: float, rho_min: float) -> float:
    """Logarithmic prefactor ln(L'/rho_min) from integrating d rho / rho."""
    if not (l_prime > rho_min > 0.0):
        raise ValueError(f"need l_prime > rho_min > 0, got "
                         f"({l_prime}, {rho_min})")
    return math.log(l_prime / rho_min)


_PARITY = {0: "even", 1: "odd"}


def equivalence_class(n_x: int, n_y: int) -> str:
    """Which of the four parity classes (n_x, n_y) belongs to.

    Ground states differing by two units of winding are indistinguishable
    to any local probe, so only the parities matter.
    """
    return f"{_PARITY[n_x % 2]}-{_PARITY[n_y % 2]}"


@dataclass(frozen=True)
class CurrentScale:
    """Loop-current estimate c*Phi0/L with L ~ l_x ln(l_x/l_y)."""

    inductance: float
    current: float
    label: str = "estimate"


def loop_current_scale(l_x: float, l_y: float, flux_quantum: float,
                       c_light: float = 1.0) -> CurrentScale:
    """Supercurrent scale of a one-flux-quantum ground state.

    The self-inductance estimate is l_x * ln(l_x/l_y), clamped to l_x
    when the logarithm drops below 1 (it is assumed of order one).
    """
    if not (l_x > l_y > 0.0):
        raise ValueError(f"need l_x > l_y > 0, got ({l_x}, {l_y})")
    log = math.log(l_x / l_y)
    inductance = l_x * log if log > 1.0 else l_x
    return CurrentScale(inductance=inductance,
                        current=c_light * flux_quantum / inductance)
