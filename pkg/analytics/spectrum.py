"""Photolysis rate integral over a tabulated spectrum.

J = integral of phi(lambda) * sigma(lambda) * F(theta, lambda) d lambda

Tables are supplied by the caller (inline in a scenario file or as CSV);
there is no built-in spectra database.
"""

from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd
from scipy import integrate

from errors import DomainError
from scenario.models import SpectrumRow, SpectrumTable

logger = logging.getLogger(__name__)

EXPECTED_COLUMNS = ["wavelength_nm", "quantum_yield", "cross_section_m2", "actinic_flux"]

# Width given to a single-row table, in nm
SINGLE_BIN_WIDTH_NM = 1.0


def photolysis_rate(table: SpectrumTable) -> float:
    """First-order photolysis rate J from a tabulated spectrum.

    Trapezoidal quadrature of phi * sigma * F over the tabulated wavelength
    range. A single-row table is treated as a 1 nm wide bin.

    Args:
        table: Spectrum with wavelengths in nm and flux per nm.

    Returns:
        Rate J in s^-1.

    Raises:
        DomainError: If the table has no rows.
    """
    if not table.rows:
        raise DomainError("spectrum.rows", "spectrum table is empty")
    integrand = table.integrand()
    if len(integrand) == 1:
        return float(integrand[0] * SINGLE_BIN_WIDTH_NM)
    return float(integrate.trapezoid(integrand, table.wavelengths))


def load_spectrum_csv(path: Path, zenith_angle: float = 0.0) -> SpectrumTable:
    """Load a spectrum table from CSV.

    Args:
        path: CSV file with columns wavelength_nm, quantum_yield,
            cross_section_m2, actinic_flux.
        zenith_angle: Zenith angle theta (radians) the flux column refers to.

    Returns:
        SpectrumTable with one row per CSV line, in file order.

    Raises:
        FileNotFoundError: If the CSV file doesn't exist.
        ValueError: If expected columns are missing.
    """
    if not path.exists():
        raise FileNotFoundError(f"Spectrum table not found: {path}")

    df = pd.read_csv(path)
    missing = set(EXPECTED_COLUMNS) - set(df.columns)
    if missing:
        raise ValueError(f"Missing columns in {path.name}: {sorted(missing)}")

    rows = tuple(
        SpectrumRow(
            wavelength_nm=float(rec.wavelength_nm),
            quantum_yield_phi=float(rec.quantum_yield),
            cross_section_sigma=float(rec.cross_section_m2),
            actinic_flux_F=float(rec.actinic_flux),
        )
        for rec in df.itertuples(index=False)
    )
    logger.info("Loaded spectrum table %s: %d wavelengths", path.name, len(rows))
    return SpectrumTable(rows=rows, zenith_angle_theta=zenith_angle)
