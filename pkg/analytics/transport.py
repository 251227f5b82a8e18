"""Transport relations for diffusing information molecules.

Stokes-Einstein diffusivity, the peak time of the free-diffusion impulse
response, and the Smoluchowski binding radius used by the particle simulator.
"""

from __future__ import annotations

import math

from scipy import constants

from errors import DomainError

BOLTZMANN = constants.k  # 1.380649e-23 J/K (exact)


def diffusion_coefficient(temperature: float, viscosity: float, radius: float) -> float:
    """Stokes-Einstein diffusion coefficient of a spherical molecule.

    D = k_B * T / (6 * pi * eta * R)

    Args:
        temperature: Absolute temperature in kelvin.
        viscosity: Dynamic viscosity of the medium in kg/(m*s).
        radius: Hydrodynamic radius of the molecule in meters.

    Returns:
        Diffusion coefficient in m^2/s.

    Raises:
        DomainError: If any input is not strictly positive.
    """
    for name, value in (("temperature", temperature), ("viscosity", viscosity), ("radius", radius)):
        if not value > 0:
            raise DomainError(name, f"must be > 0, got {value!r}")
    return BOLTZMANN * temperature / (6.0 * math.pi * viscosity * radius)


def optimal_light_time(distance: float, diffusion: float) -> float:
    """Time at which the free-diffusion impulse response peaks.

    T_op = d^2 / (6 * D)

    Args:
        distance: Transmitter to receiver-center distance in meters.
        diffusion: Diffusion coefficient in m^2/s.

    Returns:
        Optimal light-activation time in seconds.

    Raises:
        DomainError: If distance < 0 or diffusion <= 0.
    """
    if not diffusion > 0:
        raise DomainError("diffusion", f"must be > 0, got {diffusion!r}")
    if distance < 0:
        raise DomainError("distance", f"must be >= 0, got {distance!r}")
    return distance * distance / (6.0 * diffusion)


def binding_radius(k1: float, diffusion_substrate: float, diffusion_enzyme: float) -> float:
    """Invert the Smoluchowski rate k1 = 4 * pi * (D_S + D_E) * r_b.

    Args:
        k1: Bimolecular binding rate in m^3/s.
        diffusion_substrate: Diffusivity of information molecules in m^2/s.
        diffusion_enzyme: Diffusivity of enzymes in m^2/s.

    Returns:
        Binding radius in meters.

    Raises:
        DomainError: If k1 < 0 or the diffusivity sum is not positive.
    """
    total = diffusion_substrate + diffusion_enzyme
    if not total > 0:
        raise DomainError("diffusion", f"D_S + D_E must be > 0, got {total!r}")
    if k1 < 0:
        raise DomainError("k1", f"must be >= 0, got {k1!r}")
    return k1 / (4.0 * math.pi * total)
