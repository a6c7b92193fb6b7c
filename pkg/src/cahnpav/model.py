"""Free energy, double-well potential and chemical potential.

The solver works with the shifted free energy

    E[phi] = int( beta/2 |grad phi|^2 + lam/2 phi^2 + a/4 (phi^2 - 1)^2 ) dx + c0

whose well amplitude ``a`` unifies the theory form (a = 1, beta = 1) and the
applied form (a = beta / eta^2).  The chemical potential is the variational
derivative  mu = -beta lap phi + lam phi + a (phi^3 - phi),  and the energy
decays along solutions at the rate  dE/dt = -m0 int |grad mu|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveEnergy
from .grid import RealField, grad_sq_integral, integrate


def sigma_to_beta(sigma: float, eta: float) -> float:
    """Mixing-energy coefficient from surface tension: beta = 3/(2 sqrt 2) sigma eta."""
    return 3.0 / (2.0 * math.sqrt(2.0)) * sigma * eta


@dataclass(frozen=True)
class PhysicalParams:
    """Physical and model constants.

    Parameters
    ----------
    m0 : float
        Interface mobility, > 0.
    beta : float
        Mixing energy density coefficient, > 0.
    eta : float
        Characteristic interfacial thickness, > 0.
    well_amp : float, optional
        Amplitude ``a`` of the double-well a/4 (phi^2-1)^2.  Defaults to
        beta / eta^2 (the applied form); pass 1.0 for the theory form.
    lam : float
        Coefficient of the linear phi term, >= 0 (0 in applied runs).
    c0 : float
        Energy shift chosen so the total energy stays positive.
    """

    m0: float
    beta: float
    eta: float
    well_amp: float | None = None
    lam: float = 0.0
    c0: float = 1.0

    def __post_init__(self) -> None:
        if not self.m0 > 0:
            raise ValueError(f"m0 must be positive, got {self.m0}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.well_amp is None:
            object.__setattr__(self, "well_amp", self.beta / self.eta**2)
        if self.well_amp < 0:
            raise ValueError(f"well_amp must be nonnegative, got {self.well_amp}")
        if self.lam < 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")

    @classmethod
    def from_surface_tension(
        cls, m0: float, sigma: float, eta: float, lam: float = 0.0, c0: float = 1.0
    ) -> "PhysicalParams":
        return cls(m0=m0, beta=sigma_to_beta(sigma, eta), eta=eta, lam=lam, c0=c0)


def potential_h(phi: RealField, p: PhysicalParams) -> RealField:
    """Derivative of the double well: a (phi^3 - phi), pointwise."""
    v = phi.values
    return RealField(phi.grid, p.well_amp * (v**3 - v))


def potential_integral(phi: RealField, p: PhysicalParams) -> float:
    """Integral of the double-well density a/4 (phi^2 - 1)^2 over the domain."""
    v = phi.values
    return integrate(RealField(phi.grid, 0.25 * p.well_amp * (v**2 - 1.0) ** 2))


def energy_total(phi: RealField, p: PhysicalParams) -> float:
    """Shifted total free energy E[phi]; must come out positive.

    Raises
    ------
    NonPositiveEnergy
        If E <= 0, which signals a bad choice of the shift c0.
    """
    v = phi.values
    quad = 0.5 * p.lam * integrate(RealField(phi.grid, v**2)) if p.lam != 0.0 else 0.0
    e = 0.5 * p.beta * grad_sq_integral(phi) + quad + potential_integral(phi, p) + p.c0
    if not e > 0:
        raise NonPositiveEnergy(f"total energy {e} is not positive; increase c0")
    return e


def dissipation(mu: RealField, p: PhysicalParams) -> float:
    """Energy dissipation rate m0 int |grad mu|^2, always >= 0."""
    return p.m0 * grad_sq_integral(mu)


def chemical_potential_exact(phi: RealField, p: PhysicalParams) -> RealField:
    """Continuous-form chemical potential -beta lap phi + lam phi + a (phi^3 - phi).

    Used to initialize mu at step 0 and to evaluate manufactured source terms;
    the Laplacian is applied spectrally.
    """
    grid = phi.grid
    lap = grid.ifft(-grid.k2 * grid.fft(phi.values))
    v = phi.values
    return RealField(grid, -p.beta * lap + p.lam * v + p.well_amp * (v**3 - v))
