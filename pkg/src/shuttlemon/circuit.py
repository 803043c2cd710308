"""Closed-form circuit coefficients for the shuttle-transmon.

The device is a superconducting island that oscillates between two electrodes;
each contact is a Josephson junction whose energy depends exponentially on the
gap, and whose capacitance follows a parallel-plate law. This module evaluates
every lumped-element coefficient of the qubit-mechanics Hamiltonian: Josephson
and charging energies versus shuttle displacement, qubit zero-point
fluctuations, the full coupling-coefficient ledger at a given flux bias, the
two-level reductions g1/g2, and the second-order flux-drive expansion.

All functions are pure; see ``constants`` for the Grad/s + ns unit convention.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple

from .constants import (
    GRAD,
    HBAR,
    R_K,
    capacitance_from_charging_energy,
    charging_energy_from_capacitance,
)
from .errors import ConfigError, DomainError

__all__ = [
    "CircuitParams",
    "CouplingSet",
    "FluxDrive",
    "DriveExpansion",
    "xi_from_tunneling",
    "josephson_energy_pair",
    "charging_energy",
    "qubit_zpf",
    "coupling_set",
    "x_zpf_from_mass",
    "mass_from_x_zpf",
    "modulated_coefficients",
    "approx_drive_params",
    "drive_amplitude_variant",
    "symmetric_g1_variant",
    "flux_sweep",
    "coupling_crossover",
    "reference_params",
]


def xi_from_tunneling(x0: float, delta_gap: float, e_j: float, r_n0: float) -> float:
    """Tunneling length from the gap parameter and normal-state resistance.

    Combines the Ambegaokar-Baratoff relation with a Landauer estimate of the
    contact resistance: xi = x0 / ln(delta_gap * R_K / (8 e_j r_n0)).

    Args:
        x0: equilibrium electrode gap, meters.
        delta_gap: superconducting gap, Grad/s.
        e_j: equilibrium Josephson energy, Grad/s.
        r_n0: single-channel normal-state resistance scale, ohms.
    """
    if min(x0, delta_gap, e_j, r_n0) <= 0:
        raise ValueError("all arguments must be positive")
    arg = delta_gap * R_K / (8.0 * e_j * r_n0)
    if arg <= 1.0:
        raise DomainError("junction transparency too high")
    return x0 / math.log(arg)


def x_zpf_from_mass(mass: float, omega_m: float) -> float:
    """Zero-point displacement sqrt(hbar / (2 m omega)) in meters.

    ``omega_m`` is in Grad/s, so the SI angular frequency is omega_m * 1e9.
    """
    if mass <= 0 or omega_m <= 0:
        raise ValueError("mass and omega_m must be positive")
    return math.sqrt(HBAR / (2.0 * mass * omega_m * GRAD))


def mass_from_x_zpf(x_zpf: float, omega_m: float) -> float:
    """Inverse of :func:`x_zpf_from_mass`."""
    if x_zpf <= 0 or omega_m <= 0:
        raise ValueError("x_zpf and omega_m must be positive")
    return HBAR / (2.0 * x_zpf**2 * omega_m * GRAD)


@dataclass(frozen=True)
class CircuitParams:
    """Immutable record of the physical device parameters.

    Energies and rates in Grad/s, lengths and mass in SI, temperature in
    kelvin. Either ``e_c`` or the capacitance triple (``c_j``, ``c_b``,
    ``c_g``) must be supplied; when both are present the capacitances win and
    the equilibrium charging energy is recomputed from them. ``x_zpf`` is
    derived from ``mass`` and ``omega_m0`` when absent (and vice versa).
    """

    e_j1: float
    e_j2: float
    x0: float
    xi: float
    omega_m0: float
    e_c: float | None = None
    c_j: float = 0.0
    c_b: float | None = None
    c_g: float | None = None
    mass: float | None = None
    x_zpf: float | None = None
    n_g: float = 0.0
    gamma_m: float = 0.0
    gamma_q: float = 0.0
    temperature: float = 0.0

    def __post_init__(self):
        for name in ("e_j1", "e_j2", "x0", "xi", "omega_m0"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("c_j", "gamma_m", "gamma_q", "temperature"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

        if self.c_b is not None or self.c_g is not None:
            if self.c_b is None or self.c_g is None:
                raise ValueError("c_b and c_g must be given together")
            if self.c_b <= 0 or self.c_g <= 0:
                raise ValueError("c_b and c_g must be positive")
            c_total = 2.0 * self.c_j + self.c_b + self.c_g
            object.__setattr__(self, "e_c", charging_energy_from_capacitance(c_total))
        elif self.e_c is None:
            raise ValueError("either e_c or the capacitances c_b, c_g are required")
        elif self.e_c <= 0:
            raise ValueError("e_c must be positive")
        elif self.c_j > 0:
            # e_c fixes the total capacitance; c_j must fit inside it
            if 2.0 * self.c_j >= self.c_sigma0:
                raise ValueError("c_j inconsistent with e_c: 2 c_j exceeds the total capacitance")

        if self.x_zpf is None and self.mass is None:
            raise ValueError("either x_zpf or mass is required")
        if self.x_zpf is None:
            object.__setattr__(self, "x_zpf", x_zpf_from_mass(self.mass, self.omega_m0))
        elif self.x_zpf <= 0:
            raise ValueError("x_zpf must be positive")
        if self.mass is None:
            object.__setattr__(self, "mass", mass_from_x_zpf(self.x_zpf, self.omega_m0))
        elif self.mass <= 0:
            raise ValueError("mass must be positive")

        if not (self.x_zpf < self.xi < self.x0):
            warnings.warn(
                "expected x_zpf < xi < x0; coefficients remain well defined but the "
                "second-order displacement expansion may be inaccurate",
                stacklevel=2,
            )

    @property
    def c_sigma0(self) -> float:
        """Equilibrium total capacitance in farads, implied by e_c."""
        return capacitance_from_charging_energy(self.e_c)

    @property
    def is_symmetric(self) -> bool:
        return self.e_j1 == self.e_j2

    def with_(self, **changes) -> "CircuitParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)


def reference_params(**overrides) -> CircuitParams:
    """Device parameters used throughout the tests and demos.

    Symmetric 20 Grad/s junctions, 1 Grad/s charging energy, 1 nm gap,
    tunneling length from :func:`xi_from_tunneling` at a 4500 Grad/s gap
    parameter and 50 ohm contact, x_zpf/xi held at exactly 3e-3, a 1 Grad/s
    mechanical mode, 1 kHz/100 kHz mechanical/qubit damping, 10 mK bath.
    """
    xi = xi_from_tunneling(1e-9, 4500.0, 20.0, 50.0)
    base = dict(
        e_j1=20.0,
        e_j2=20.0,
        e_c=1.0,
        x0=1e-9,
        xi=xi,
        omega_m0=1.0,
        x_zpf=3e-3 * xi,
        gamma_m=1e-6,
        gamma_q=1e-4,
        temperature=0.010,
    )
    base.update(overrides)
    return CircuitParams(**base)


@dataclass(frozen=True)
class FluxDrive:
    """Static flux bias plus cosine modulation.

    phi_b(t) = phi_b_static + phi_b0 * cos(omega_bar * t). ``omega_bar`` may
    be None, meaning "resolve from the sideband-resonance condition" (done by
    the protocol layer before any evaluation).
    """

    phi_b_static: float = 0.0
    phi_b0: float = 0.0
    omega_bar: float | None = None

    def __post_init__(self):
        if self.phi_b0 < 0:
            raise ValueError("phi_b0 must be non-negative")
        if abs(self.phi_b_static) + abs(self.phi_b0) >= math.pi:
            raise DomainError("flux excursion reaches pi: plasma frequency would turn imaginary")
        if self.omega_bar is not None and self.omega_bar <= 0:
            raise ValueError("omega_bar must be positive")

    def phi_b(self, t: float) -> float:
        """Instantaneous flux phase at time ``t`` (ns)."""
        if self.phi_b0 == 0.0:
            return self.phi_b_static
        if self.omega_bar is None:
            raise ConfigError("omega_bar unresolved: pass an explicit value or resolve it first")
        return self.phi_b_static + self.phi_b0 * math.cos(self.omega_bar * t)


@dataclass(frozen=True)
class CouplingSet:
    """Evaluated coefficient ledger at one flux bias, all in Grad/s.

    Index convention g_{qm}: q counts qubit-operator powers in the expansion
    ((a+a^dag) for odd, number-like for 2, quartic for 4), m counts powers of
    the mechanical displacement (b + b^dag). ``g1``/``g2`` are the two-level
    reductions; ``omega_q``/``omega_m`` the renormalized frequencies.
    """

    phi_b: float
    omega_p0: float
    g21: float
    g22: float
    g42: float
    g01: float
    g02: float
    g10: float
    g11: float
    g12: float
    g30: float
    g31: float
    g32: float
    omega_q: float
    omega_m: float
    g1: float
    g2: float

    @property
    def drive_sz_linear(self) -> float:
        """Residual linear sigma_z coupling (nonzero only for asymmetric junctions)."""
        return self.g21

    @property
    def force_const(self) -> float:
        """Qubit-independent mechanical drive term."""
        return self.g01


def josephson_energy_pair(params: CircuitParams, delta: float) -> tuple[float, float]:
    """Displacement-dependent Josephson energies (E_J1 e^{-d/xi}, E_J2 e^{+d/xi})."""
    r = delta / params.xi
    return params.e_j1 * math.exp(-r), params.e_j2 * math.exp(r)


def charging_energy(params: CircuitParams, delta: float) -> float:
    """Charging energy at shuttle displacement ``delta`` (meters), Grad/s.

    Parallel-plate junction capacitors: C(delta) = C_J/(1 + d/x0)
    + C_J/(1 - d/x0) + C_b + C_g. With c_j = 0 the result is the constant
    equilibrium value.
    """
    if abs(delta) >= params.x0:
        raise DomainError("shuttle contacts electrode")
    if params.c_j == 0.0:
        return params.e_c
    u = delta / params.x0
    c_bg = params.c_sigma0 - 2.0 * params.c_j
    c_total = params.c_j / (1.0 + u) + params.c_j / (1.0 - u) + c_bg
    return charging_energy_from_capacitance(c_total)


def _cos_half_checked(phi_b: float) -> float:
    """cos(phi_b/2) with the closed-domain guard.

    The explicit |phi_b| >= pi test matters: in floats cos(pi/2) is a tiny
    positive number, so the cosine alone would let the boundary through.
    """
    cos_half = math.cos(phi_b / 2.0)
    if cos_half <= 0.0 or abs(phi_b) >= math.pi:
        raise DomainError("flux bias at or beyond pi")
    return cos_half


def qubit_zpf(e_c: float, e_j_sum: float, phi_b: float) -> tuple[float, float]:
    """Qubit charge and phase zero-point fluctuations (n_zpf, phi_zpf).

    n_zpf = [E_Jsum cos(phi_b/2) / (32 E_C)]^{1/4} and phi_zpf its reciprocal
    scaled so that n_zpf * phi_zpf = 1/2 identically.
    """
    if e_c <= 0 or e_j_sum <= 0:
        raise ValueError("e_c and e_j_sum must be positive")
    cos_half = _cos_half_checked(phi_b)
    n_zpf = (e_j_sum * cos_half / (32.0 * e_c)) ** 0.25
    phi_zpf = (2.0 * e_c / (e_j_sum * cos_half)) ** 0.25
    return n_zpf, phi_zpf


def coupling_set(params: CircuitParams, phi_b: float) -> CouplingSet:
    """Evaluate the full coefficient ledger at flux bias ``phi_b``.

    The entries are the Taylor coefficients, in the mechanical displacement,
    of the exact gap-dependent prefactor functions of the phase-expanded
    circuit Hamiltonian. g22 and g42 include the junction-capacitance and
    junction-asymmetry corrections of the exact expansion (they reduce to the
    common symmetric, zero-C_J forms). The qubit transition frequency follows
    the convention omega_q = omega_p0 - E_C; the mechanical frequency is
    renormalized as omega_m0 + 2 g02 + g22 + 6 g42. Two-level reductions:
    g1 = g11 + 3 g31 and g2 = g22 + 12 g42.
    """
    e1, e2 = params.e_j1, params.e_j2
    e_sum = e1 + e2
    e_diff = e2 - e1
    d0 = e_diff / e_sum
    e_c = params.e_c
    xi = params.xi
    x = params.x_zpf
    ratio = x / xi

    cos_half = _cos_half_checked(phi_b)
    tan_half = math.tan(phi_b / 2.0)

    omega_p0 = math.sqrt(8.0 * e_c * e_sum * cos_half)

    # parallel-plate capacitance curvature; zero in the c_j = 0 limit
    cap_term = params.c_j / (params.c_sigma0 * params.x0**2)

    g21 = 0.5 * d0 * ratio * omega_p0
    g22 = omega_p0 * (0.25 / xi**2 - cap_term - d0**2 / (8.0 * xi**2)) * x**2
    g42 = e_c * cap_term * x**2 / 6.0
    g01 = -e_diff * cos_half * ratio
    g02 = -0.5 * e_sum * cos_half * ratio**2

    # odd-coupling prefactors carry tan(phi_b/2): all vanish at zero bias
    pref1 = (2.0 * e_c / e_sum) ** 0.25 * tan_half * cos_half**0.75
    pref3 = (2.0 * e_c / e_sum) ** 0.75 * tan_half * cos_half**0.25
    g10 = -e_diff * pref1
    g11 = -(3.0 * e1 + e2) * (e1 + 3.0 * e2) / (4.0 * e_sum) * pref1 * ratio
    g12 = -e_diff / (32.0 * e_sum**2) * (9.0 * e1**2 - 2.0 * e1 * e2 + 9.0 * e2**2) * pref1 * ratio**2
    g30 = e_diff / 6.0 * pref3
    g31 = (e1**2 + 14.0 * e1 * e2 + e2**2) / (24.0 * e_sum) * pref3 * ratio
    g32 = e_diff / (192.0 * e_sum**2) * (e1**2 - 82.0 * e1 * e2 + e2**2) * pref3 * ratio**2

    return CouplingSet(
        phi_b=phi_b,
        omega_p0=omega_p0,
        g21=g21,
        g22=g22,
        g42=g42,
        g01=g01,
        g02=g02,
        g10=g10,
        g11=g11,
        g12=g12,
        g30=g30,
        g31=g31,
        g32=g32,
        omega_q=omega_p0 - e_c,
        omega_m=params.omega_m0 + 2.0 * g02 + g22 + 6.0 * g42,
        g1=g11 + 3.0 * g31,
        g2=g22 + 12.0 * g42,
    )


def modulated_coefficients(params: CircuitParams, drive: FluxDrive, t: float) -> CouplingSet:
    """Exact lab-frame ledger at the instantaneous flux phase of ``drive``.

    No small-amplitude expansion: this simply re-evaluates the closed forms at
    phi_b(t) = phi_b_static + phi_b0 cos(omega_bar t).
    """
    return coupling_set(params, drive.phi_b(t))


class DriveExpansion(NamedTuple):
    """Second-order drive expansion: averaged qubit frequency, Stark depth, linear amplitude."""

    omega_q_bar: float
    delta_q: float
    g1_bar: float


def approx_drive_params(params: CircuitParams, phi_b0: float) -> DriveExpansion:
    """Second-order expansion of the modulated coefficients, symmetric junctions.

    For phi_b(t) = phi_b0 cos(omega_bar t):
      delta_q      full Stark-modulation depth phi_b0^2 omega_p0 / 16; the
                   drive-averaged qubit frequency sits delta_q/2 below the
                   undriven one in this omega_q = omega_p0 - E_C convention,
      omega_q_bar  drive-averaged qubit frequency omega_q(0) - delta_q/2,
      g1_bar       amplitude of g1(t) ~ g1_bar cos(omega_bar t), obtained by
                   linearizing the ledger g1 = g11 + 3 g31 in phi_b0.

    A compact closed-form variant of the linear amplitude that differs in the
    (E_C/E_J)^{3/4} term is available as :func:`drive_amplitude_variant`; the
    ledger value is the one consistent with the exact modulated coefficients
    (0.3% from the exact Fourier component at phi_b0 = 0.5).
    """
    if not params.is_symmetric:
        raise ConfigError("drive expansion requires symmetric junctions (e_j1 == e_j2)")
    if phi_b0 < 0 or phi_b0 >= math.pi:
        raise ValueError("phi_b0 must lie in [0, pi)")
    e_j = params.e_j1
    e_c = params.e_c
    ratio = params.x_zpf / params.xi
    omega_p0 = math.sqrt(16.0 * e_c * e_j)
    delta_q = phi_b0**2 * omega_p0 / 16.0
    omega_q_bar = (omega_p0 - e_c) - 0.5 * delta_q
    r = e_c / e_j
    g1_bar = e_j * ratio * (phi_b0 / 2.0) * (r**0.75 - 2.0 * r**0.25)
    return DriveExpansion(omega_q_bar, delta_q, g1_bar)


def drive_amplitude_variant(params: CircuitParams, phi_b0: float) -> float:
    """Compact closed-form variant of the linear drive amplitude.

    E_J (E_C/E_J)^{1/4} (sqrt(E_C/E_J) - 1) (x_zpf/xi) phi_b0. Kept for
    comparison against :func:`approx_drive_params`; the two differ in the
    coefficient of the (E_C/E_J)^{3/4} term (ratio 1.144 at E_J/E_C = 20).
    Validation reports show both rather than reconciling them.
    """
    if not params.is_symmetric:
        raise ConfigError("drive expansion requires symmetric junctions (e_j1 == e_j2)")
    r = params.e_c / params.e_j1
    return params.e_j1 * r**0.25 * (math.sqrt(r) - 1.0) * (params.x_zpf / params.xi) * phi_b0


def symmetric_g1_variant(params: CircuitParams, phi_b: float) -> float:
    """Compact closed-form variant of the static linear coupling g1(phi_b).

    2 E_J (x_zpf/xi) tan(phi_b/2) [ -(E_C/E_J)^{1/4} cos^{3/4}(phi_b/2)
    + (E_C/E_J)^{3/4} cos^{1/4}(phi_b/2) ]. Differs from the ledger reduction
    g11 + 3 g31 in the coefficient of the second term; exposed so callers can
    report the discrepancy. The ledger value is authoritative everywhere else
    in the package.
    """
    if not params.is_symmetric:
        raise ConfigError("closed form requires symmetric junctions (e_j1 == e_j2)")
    cos_half = _cos_half_checked(phi_b)
    r = params.e_c / params.e_j1
    return (
        2.0
        * params.e_j1
        * (params.x_zpf / params.xi)
        * math.tan(phi_b / 2.0)
        * (-(r**0.25) * cos_half**0.75 + r**0.75 * cos_half**0.25)
    )


def flux_sweep(params: CircuitParams, phi_grid) -> list[dict]:
    """Evaluate the ledger across a flux grid.

    Returns one dict per grid point with keys phi_b, g1, g2, omega_q, omega_m,
    omega_p0. Points outside the validity domain produce a dict with keys
    phi_b and error instead of silently skipping.
    """
    rows = []
    for phi_b in phi_grid:
        try:
            cs = coupling_set(params, phi_b)
        except DomainError as exc:
            rows.append({"phi_b": float(phi_b), "error": str(exc)})
            continue
        rows.append(
            {
                "phi_b": float(phi_b),
                "g1": cs.g1,
                "g2": cs.g2,
                "omega_q": cs.omega_q,
                "omega_m": cs.omega_m,
                "omega_p0": cs.omega_p0,
            }
        )
    return rows


def coupling_crossover(
    params: CircuitParams,
    phi_lo: float = 1e-9,
    phi_hi: float = 0.05,
    tol: float = 1e-6,
) -> float:
    """Flux bias where |g1| first equals |g2|, by bisection.

    For symmetric junctions g1 grows linearly from zero while g2 is nearly
    flat, so the crossover sits at small positive bias. Raises if the bracket
    does not straddle a sign change of |g1| - |g2|.
    """

    def gap(phi_b: float) -> float:
        cs = coupling_set(params, phi_b)
        return abs(cs.g1) - abs(cs.g2)

    lo, hi = phi_lo, phi_hi
    f_lo = gap(lo)
    if f_lo * gap(hi) > 0:
        raise ValueError("no |g1| = |g2| crossover inside the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = gap(mid)
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)
