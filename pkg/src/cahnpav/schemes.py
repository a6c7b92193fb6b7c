"""Energy-stable time steppers for the Cahn-Hilliard equation.

Four schemes evolve an auxiliary scalar R tracking sqrt(E) alongside the
phase field, with the nonlinear term scaled by xi^2 where xi = R / sqrt(E):

* ``1a`` / ``2a`` update (xi, R) by a closed-form positive expression first,
  then solve the field equation (BDF1 / BDF2 with extrapolated nonlinearity).
* ``1b`` / ``2b`` solve the field equation first (with a lagged or
  extrapolated xi), then update (xi, R) from the new fields.

This ordering asymmetry is the defining difference between the A and B
variants and must not be rearranged.  All four guarantee 0 < R^{n+1} <= R^n
for every time step size, and conserve the mean of phi exactly.

Two baselines are provided for contrast: ``semi`` (BDF2 with the nonlinear
term fully explicit, conditionally stable) and ``sav`` (BDF2 scalar auxiliary
variable built on the potential energy only, stable but with no positivity
guarantee on its auxiliary variable).

Every step requires one constant-coefficient spectral solve (two for SAV).

When a manufactured source f is present, the auxiliary updates subtract the
work int(f mu) from the dissipation so that R keeps tracking sqrt(E); with
f = 0 this reduces exactly to the plain formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import Diverged, InvalidState, NonPositiveEnergy
from .grid import GridSpec, RealField, grad_sq_integral, integrate
from .model import (
    PhysicalParams,
    chemical_potential_exact,
    dissipation,
    energy_total,
    potential_h,
    potential_integral,
)

OVERFLOW_GUARD = 1e6


class SchemeKind(str, Enum):
    """Identifiers for the available time steppers."""

    PAV_1A = "1a"
    PAV_1B = "1b"
    PAV_2A = "2a"
    PAV_2B = "2b"
    SEMI_IMPLICIT = "semi"
    SAV = "sav"

    @property
    def is_pav(self) -> bool:
        return self in (SchemeKind.PAV_1A, SchemeKind.PAV_1B, SchemeKind.PAV_2A, SchemeKind.PAV_2B)

    @property
    def is_baseline(self) -> bool:
        return not self.is_pav


@dataclass(frozen=True)
class SchemeState:
    """Two time levels of the discrete solution plus the auxiliary variables.

    At step 0 the previous slots equal the current ones (cold start); the
    second-order schemes read them as phi^{-1} = phi^0 etc.
    """

    phi_cur: RealField
    phi_prev: RealField
    mu_cur: RealField
    mu_prev: RealField
    r_cur: float
    r_prev: float
    step: int = 0
    xi_cur: float = 1.0  # lagged xi consumed by scheme 1b
    sav_r_cur: float = 0.0
    sav_r_prev: float = 0.0

    @property
    def grid(self) -> GridSpec:
        return self.phi_cur.grid


@dataclass(frozen=True)
class StepReport:
    """Diagnostics from a single step; xi and r_new are None for baselines."""

    xi: float | None
    r_new: float | None
    energy: float
    dissipation: float
    dt: float


def init_state(phi0: RealField, p: PhysicalParams) -> SchemeState:
    """Initialize from phi^0: mu^0 continuous-form, R^0 = sqrt(E[phi^0]).

    The SAV auxiliary starts at sqrt(int H(phi^0) + c0).  Raises
    NonPositiveEnergy when either square root is undefined.
    """
    mu0 = chemical_potential_exact(phi0, p)
    r0 = math.sqrt(energy_total(phi0, p))
    e1 = potential_integral(phi0, p) + p.c0
    if not e1 > 0:
        raise NonPositiveEnergy(f"potential energy + c0 = {e1} is not positive")
    sav_r = math.sqrt(e1)
    return SchemeState(
        phi_cur=phi0,
        phi_prev=phi0,
        mu_cur=mu0,
        mu_prev=mu0,
        r_cur=r0,
        r_prev=r0,
        step=0,
        xi_cur=1.0,
        sav_r_cur=sav_r,
        sav_r_prev=sav_r,
    )


def solve_linear_step(
    sigma: float, g: RealField, s: RealField, dt: float, p: PhysicalParams
) -> tuple[RealField, RealField]:
    """Solve the constant-coefficient implicit system for one time step.

    Finds (phi, mu) satisfying, per Fourier mode,

        (sigma/dt) phi = m0 lap(-beta lap phi + lam phi + s) + g/dt
        mu = -beta lap phi + lam phi + s

    i.e.  phi_hat = (g_hat - dt m0 |k|^2 s_hat) / (sigma + dt m0 |k|^2 (beta |k|^2 + lam)).
    sigma = 1 with g = phi^n for BDF1; sigma = 3/2 with g = 2 phi^n - phi^{n-1}/2
    for BDF2.  The denominator is >= sigma > 0, so the solve is total.
    """
    grid = g.grid
    g_hat = grid.fft(g.values)
    s_hat = grid.fft(s.values)
    m0k2 = dt * p.m0 * grid.k2
    phi_hat = (g_hat - m0k2 * s_hat) / (sigma + m0k2 * (p.beta * grid.k2 + p.lam))
    mu_hat = (p.beta * grid.k2 + p.lam) * phi_hat + s_hat
    return RealField(grid, grid.ifft(phi_hat)), RealField(grid, grid.ifft(mu_hat))


def compute_xi_1a(r_n: float, e_n: float, diss_n: float, dt: float) -> float:
    """Closed-form xi update: r / (sqrt(e) + dt * diss / (2 sqrt(e))).

    With r > 0 and diss >= 0 the result satisfies 0 < xi <= r / sqrt(e).
    Shared by all four schemes with scheme-specific (e, diss) arguments via
    the two-energy generalization below.
    """
    return _xi_update(r_n, e_n, e_n, diss_n, dt)


def _xi_update(r_n: float, e_num: float, e_den: float, drain: float, dt: float) -> float:
    # e_num sits under R in xi = R/sqrt(e_num); e_den scales the drain term.
    # drain = dissipation - source work; may be negative only in manufactured runs.
    if not e_num > 0 or not e_den > 0:
        raise InvalidState(f"energy must be positive in xi update, got {e_num}, {e_den}")
    denom = math.sqrt(e_num) + dt * drain / (2.0 * math.sqrt(e_den))
    if not denom > 0:
        raise InvalidState(f"xi update denominator {denom} is not positive")
    return r_n / denom


def _dealias(field: RealField, enabled: bool) -> RealField:
    if not enabled:
        return field
    grid = field.grid
    return RealField(grid, grid.ifft(grid.fft(field.values) * grid.dealias_mask))


def _lin(*pairs: tuple[float, RealField]) -> RealField:
    """Linear combination of fields on a shared grid."""
    grid = pairs[0][1].grid
    out = np.zeros(grid.shape)
    for coeff, field in pairs:
        out += coeff * field.values
    return RealField(grid, out)


def _work(f_src: RealField | None, mu: RealField) -> float:
    """Energy input rate int(f mu) of a source term; 0 when absent."""
    if f_src is None:
        return 0.0
    return integrate(RealField(mu.grid, f_src.values * mu.values))


def _bdf1_g(state: SchemeState, dt: float, f_src: RealField | None) -> RealField:
    if f_src is None:
        return state.phi_cur
    return _lin((1.0, state.phi_cur), (dt, f_src))


def _bdf2_g(state: SchemeState, dt: float, f_src: RealField | None) -> RealField:
    pairs = [(2.0, state.phi_cur), (-0.5, state.phi_prev)]
    if f_src is not None:
        pairs.append((dt, f_src))
    return _lin(*pairs)


def _advance(
    state: SchemeState,
    phi_new: RealField,
    mu_new: RealField,
    r_new: float,
    xi: float,
    p: PhysicalParams,
    dt: float,
    sav_r_new: float | None = None,
) -> tuple[SchemeState, StepReport]:
    new_state = replace(
        state,
        phi_cur=phi_new,
        phi_prev=state.phi_cur,
        mu_cur=mu_new,
        mu_prev=state.mu_cur,
        r_cur=r_new,
        r_prev=state.r_cur,
        step=state.step + 1,
        xi_cur=xi,
        sav_r_cur=sav_r_new if sav_r_new is not None else state.sav_r_cur,
        sav_r_prev=state.sav_r_cur,
    )
    report = StepReport(
        xi=xi,
        r_new=r_new,
        energy=energy_total(phi_new, p),
        dissipation=dissipation(mu_new, p),
        dt=dt,
    )
    return new_state, report


def step_1a(
    state: SchemeState,
    dt: float,
    p: PhysicalParams,
    f_src: RealField | None = None,
    *,
    f_src_mid: RealField | None = None,
    dealias: bool = False,
) -> tuple[SchemeState, StepReport]:
    """First-order scheme, auxiliary-first ordering.

    Computes xi and R^{n+1} from the step-n energy and dissipation, then does
    one BDF1 solve with the nonlinear term xi^2 h(phi^n).
    """
    if f_src_mid is None:
        f_src_mid = f_src
    e_n = energy_total(state.phi_cur, p)
    drain = dissipation(state.mu_cur, p) - _work(f_src_mid, state.mu_cur)
    xi = _xi_update(state.r_cur, e_n, e_n, drain, dt)
    r_new = xi * math.sqrt(e_n)
    s = _dealias(potential_h(state.phi_cur, p), dealias)
    s = RealField(s.grid, xi**2 * s.values)
    phi_new, mu_new = solve_linear_step(1.0, _bdf1_g(state, dt, f_src), s, dt, p)
    return _advance(state, phi_new, mu_new, r_new, xi, p, dt)


def step_1b(
    state: SchemeState,
    dt: float,
    p: PhysicalParams,
    f_src: RealField | None = None,
    *,
    f_src_mid: RealField | None = None,
    dealias: bool = False,
) -> tuple[SchemeState, StepReport]:
    """First-order scheme, field-first ordering.

    Solves the BDF1 field equation with the lagged xi^n, then updates xi and
    R^{n+1} from the step-(n+1) energy and dissipation.  xi^0 = 1.
    """
    if f_src_mid is None:
        f_src_mid = f_src
    s = _dealias(potential_h(state.phi_cur, p), dealias)
    s = RealField(s.grid, state.xi_cur**2 * s.values)
    phi_new, mu_new = solve_linear_step(1.0, _bdf1_g(state, dt, f_src), s, dt, p)
    e_new = energy_total(phi_new, p)
    drain = dissipation(mu_new, p) - _work(f_src_mid, mu_new)
    xi = _xi_update(state.r_cur, e_new, e_new, drain, dt)
    r_new = xi * math.sqrt(e_new)
    return _advance(state, phi_new, mu_new, r_new, xi, p, dt)


def step_2a(
    state: SchemeState,
    dt: float,
    p: PhysicalParams,
    f_src: RealField | None = None,
    *,
    f_src_mid: RealField | None = None,
    dealias: bool = False,
) -> tuple[SchemeState, StepReport]:
    """Second-order scheme, auxiliary-first ordering (BDF2 field, CN2 auxiliary).

    xi uses the extrapolants phi_bar = 2 phi^n - phi^{n-1} (under R) and
    phi_tilde, mu_tilde at step n+1/2 (in the drain term); the two energy
    denominators are deliberately different.  The field solve uses
    xi^2 h(phi_bar).  f_src_mid, when given, is the source at t^{n+1/2}.
    """
    if f_src_mid is None:
        f_src_mid = f_src
    phi_bar = _lin((2.0, state.phi_cur), (-1.0, state.phi_prev))
    phi_tilde = _lin((1.5, state.phi_cur), (-0.5, state.phi_prev))
    mu_tilde = _lin((1.5, state.mu_cur), (-0.5, state.mu_prev))
    e_bar = energy_total(phi_bar, p)
    e_tilde = energy_total(phi_tilde, p)
    drain = dissipation(mu_tilde, p) - _work(f_src_mid, mu_tilde)
    xi = _xi_update(state.r_cur, e_bar, e_tilde, drain, dt)
    r_new = xi * math.sqrt(e_bar)
    s = _dealias(potential_h(phi_bar, p), dealias)
    s = RealField(s.grid, xi**2 * s.values)
    phi_new, mu_new = solve_linear_step(1.5, _bdf2_g(state, dt, f_src), s, dt, p)
    return _advance(state, phi_new, mu_new, r_new, xi, p, dt)


def step_2b(
    state: SchemeState,
    dt: float,
    p: PhysicalParams,
    f_src: RealField | None = None,
    *,
    f_src_mid: RealField | None = None,
    dealias: bool = False,
) -> tuple[SchemeState, StepReport]:
    """Second-order scheme, field-first ordering.

    The field solve uses the extrapolated xi_hat = (2 R^n - R^{n-1}) /
    sqrt(E[phi_bar]); afterwards xi^{n+1} and R^{n+1} follow from E[phi^{n+1}]
    and the Crank-Nicolson dissipation of mu^{n+1/2} = (mu^{n+1} + mu^n)/2.
    """
    if f_src_mid is None:
        f_src_mid = f_src
    phi_bar = _lin((2.0, state.phi_cur), (-1.0, state.phi_prev))
    phi_tilde = _lin((1.5, state.phi_cur), (-0.5, state.phi_prev))
    e_bar = energy_total(phi_bar, p)
    xi_hat = (2.0 * state.r_cur - state.r_prev) / math.sqrt(e_bar)
    s = _dealias(potential_h(phi_bar, p), dealias)
    s = RealField(s.grid, xi_hat**2 * s.values)
    phi_new, mu_new = solve_linear_step(1.5, _bdf2_g(state, dt, f_src), s, dt, p)
    mu_half = _lin((0.5, mu_new), (0.5, state.mu_cur))
    e_new = energy_total(phi_new, p)
    e_tilde = energy_total(phi_tilde, p)
    drain = dissipation(mu_half, p) - _work(f_src_mid, mu_half)
    xi = _xi_update(state.r_cur, e_new, e_tilde, drain, dt)
    r_new = xi * math.sqrt(e_new)
    return _advance(state, phi_new, mu_new, r_new, xi, p, dt)


def _guard(phi: RealField, step: int) -> None:
    values = phi.values
    if not np.all(np.isfinite(values)) or np.max(np.abs(values)) > OVERFLOW_GUARD:
        raise Diverged(f"field blew up at step {step}", step=step)


def step_semi_implicit2(
    state: SchemeState,
    dt: float,
    p: PhysicalParams,
    f_src: RealField | None = None,
    *,
    f_src_mid: RealField | None = None,
    dealias: bool = False,
) -> tuple[SchemeState, StepReport]:
    """Baseline: BDF2 with h(phi_bar) fully explicit and no auxiliary variable.

    Only conditionally stable; raises Diverged when the new field is
    non-finite or exceeds the overflow guard.
    """
    phi_bar = _lin((2.0, state.phi_cur), (-1.0, state.phi_prev))
    s = _dealias(potential_h(phi_bar, p), dealias)
    phi_new, mu_new = solve_linear_step(1.5, _bdf2_g(state, dt, f_src), s, dt, p)
    _guard(phi_new, state.step + 1)
    new_state = replace(
        state,
        phi_cur=phi_new,
        phi_prev=state.phi_cur,
        mu_cur=mu_new,
        mu_prev=state.mu_cur,
        step=state.step + 1,
    )
    report = StepReport(
        xi=None,
        r_new=None,
        energy=energy_total(phi_new, p),
        dissipation=dissipation(mu_new, p),
        dt=dt,
    )
    return new_state, report


def step_sav2(
    state: SchemeState,
    dt: float,
    p: PhysicalParams,
    f_src: RealField | None = None,
    *,
    f_src_mid: RealField | None = None,
    dealias: bool = False,
) -> tuple[SchemeState, StepReport]:
    """Baseline: BDF2 scalar-auxiliary-variable scheme.

    The auxiliary r1 tracks sqrt(int H(phi) + c0) (potential energy only) and
    couples linearly to the field through b(phi_bar) = h(phi_bar) /
    sqrt(int H(phi_bar) + c0):

        (3 phi^{n+1} - 4 phi^n + phi^{n-1}) / (2 dt) = m0 lap mu^{n+1} + f
        mu^{n+1} = -beta lap phi^{n+1} + lam phi^{n+1} + r1^{n+1} b
        3 r1^{n+1} - 4 r1^n + r1^{n-1} = int b (3 phi^{n+1} - 4 phi^n + phi^{n-1}) / 2

    The coupled linear system is resolved by superposition with two spectral
    solves (phi^{n+1} = phi_1 + r1^{n+1} phi_2).  r1 carries no positivity
    guarantee and may go negative.
    """
    grid = state.grid
    phi_bar = _lin((2.0, state.phi_cur), (-1.0, state.phi_prev))
    e1_bar = potential_integral(phi_bar, p) + p.c0
    b = _dealias(potential_h(phi_bar, p), dealias)
    b = RealField(grid, b.values / math.sqrt(e1_bar))
    zero = RealField.constant(grid, 0.0)
    phi_1, mu_1 = solve_linear_step(1.5, _bdf2_g(state, dt, f_src), zero, dt, p)
    phi_2, mu_2 = solve_linear_step(1.5, zero, b, dt, p)
    ib_1 = integrate(RealField(grid, b.values * phi_1.values))
    ib_2 = integrate(RealField(grid, b.values * phi_2.values))
    ib_n = integrate(RealField(grid, b.values * state.phi_cur.values))
    ib_p = integrate(RealField(grid, b.values * state.phi_prev.values))
    # int(b phi_2) <= 0, hence the denominator stays >= 3.
    r1_new = (4.0 * state.sav_r_cur - state.sav_r_prev + 1.5 * ib_1 - 2.0 * ib_n + 0.5 * ib_p) / (
        3.0 - 1.5 * ib_2
    )
    phi_new = _lin((1.0, phi_1), (r1_new, phi_2))
    mu_new = _lin((1.0, mu_1), (r1_new, mu_2))
    _guard(phi_new, state.step + 1)
    new_state = replace(
        state,
        phi_cur=phi_new,
        phi_prev=state.phi_cur,
        mu_cur=mu_new,
        mu_prev=state.mu_cur,
        step=state.step + 1,
        sav_r_cur=r1_new,
        sav_r_prev=state.sav_r_cur,
    )
    report = StepReport(
        xi=None,
        r_new=None,
        energy=energy_total(phi_new, p),
        dissipation=dissipation(mu_new, p),
        dt=dt,
    )
    return new_state, report


STEPPERS = {
    SchemeKind.PAV_1A: step_1a,
    SchemeKind.PAV_1B: step_1b,
    SchemeKind.PAV_2A: step_2a,
    SchemeKind.PAV_2B: step_2b,
    SchemeKind.SEMI_IMPLICIT: step_semi_implicit2,
    SchemeKind.SAV: step_sav2,
}


def sav_modified_energy(state: SchemeState, p: PhysicalParams) -> float:
    """SAV modified energy beta/2 ||grad phi||^2 + lam/2 ||phi||^2 + r1^2 - c0."""
    phi = state.phi_cur
    quad = 0.5 * p.lam * integrate(RealField(phi.grid, phi.values**2)) if p.lam != 0.0 else 0.0
    return 0.5 * p.beta * grad_sq_integral(phi) + quad + state.sav_r_cur**2 - p.c0
