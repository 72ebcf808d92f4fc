"""Altitude- and weather-dependent atmosphere quantities.

All temperatures are in degrees Celsius unless the argument name ends in
``_k``. Pressures are in pascal. Altitudes ``h`` are ground-relative; the
terrain offset of the site turns them into absolute altitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, PositiveFloat, NonNegativeFloat

from .errors import DomainError

ZERO_CELSIUS = 273.15


class AtmoConstants(BaseModel):
    """Physical constants used by the barometric and density formulas."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    R_d: PositiveFloat = 287.058
    R_v: PositiveFloat = 461.495
    R_u: PositiveFloat = 8.31432
    m_air: PositiveFloat = 0.0289644
    g_0: PositiveFloat = 9.80665
    r_e: PositiveFloat = 6371009.0
    h_0: float = 0.0
    lapse_rate: PositiveFloat = 0.0065


class SitePosition(BaseModel):
    """Terrain (``h_T``) and weather-station (``h_WS``) absolute altitudes, m."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    h_T: NonNegativeFloat = 54.44
    h_WS: NonNegativeFloat = 90.0


@dataclass(frozen=True)
class AtmosphereState:
    T_a: float
    p: float
    p_v: float
    p_d: float
    rho: float
    g: float


DEFAULT_CONSTANTS = AtmoConstants()
DEFAULT_SITE = SitePosition()


def gravity_at(h, site=DEFAULT_SITE, c=DEFAULT_CONSTANTS):
    """Gravitational acceleration at ground-relative altitude ``h``."""
    h_abs = h + site.h_T
    if c.r_e + h_abs <= 0:
        raise DomainError(f"altitude {h_abs} m is below the Earth's centre")
    return c.g_0 * c.r_e**2 / (c.r_e + h_abs) ** 2


def temperature_at(T_ws, h, site=DEFAULT_SITE, c=DEFAULT_CONSTANTS):
    """Lapse-rate extrapolation of the station temperature to altitude ``h``."""
    return T_ws - c.lapse_rate * (h + site.h_T - site.h_WS)


def vapor_pressure(T_a):
    """Saturation water-vapour pressure (Magnus form) in Pa."""
    if T_a <= -237.3:
        raise DomainError(f"vapour pressure undefined for T_a={T_a} degC")
    # Magnus form yields hPa
    return 6.1078 * 10.0 ** (7.5 * T_a / (T_a + 237.3)) * 100.0


def pressure_at(p_0, h, T_a_k, site=DEFAULT_SITE, c=DEFAULT_CONSTANTS):
    """Barometric pressure at ``h`` from the reference-level pressure ``p_0``.

    ``T_a_k`` is the ambient temperature at the target altitude in kelvin.
    """
    if T_a_k <= 0:
        raise DomainError(f"non-positive absolute temperature {T_a_k} K")
    if p_0 <= 0:
        raise DomainError(f"non-positive reference pressure {p_0} Pa")
    g = gravity_at(h, site, c)
    return p_0 * math.exp(-g * c.m_air * (h + site.h_T - c.h_0) / (c.R_u * T_a_k))


def air_density(p, T_a, c=DEFAULT_CONSTANTS):
    """Moist-air density from total pressure and temperature.

    Raises
    ------
    DomainError
        If the vapour pressure at ``T_a`` exceeds ``p``.
    """
    if T_a <= -ZERO_CELSIUS:
        raise DomainError(f"temperature {T_a} degC below absolute zero")
    p_v = vapor_pressure(T_a)
    if p_v > p:
        raise DomainError(f"vapour pressure {p_v:.1f} Pa exceeds air pressure {p:.1f} Pa")
    T_k = T_a + ZERO_CELSIUS
    return (p - p_v) / (c.R_d * T_k) + p_v / (c.R_v * T_k)


def atmosphere_state(w, h, site=DEFAULT_SITE, c=DEFAULT_CONSTANTS):
    """Chain the atmosphere formulas for one weather sample at altitude ``h``.

    ``w`` needs ``T_ws`` (degC) and ``p_0`` (Pa) attributes.
    """
    T_a = temperature_at(w.T_ws, h, site, c)
    p = pressure_at(w.p_0, h, T_a + ZERO_CELSIUS, site, c)
    p_v = vapor_pressure(T_a)
    rho = air_density(p, T_a, c)
    return AtmosphereState(T_a=T_a, p=p, p_v=p_v, p_d=p - p_v, rho=rho, g=gravity_at(h, site, c))
