"""2-D electrostatic cross-section solver.

Solves div(eps grad V) = 0 on a rectangular box of nx x ny cells with
piecewise-constant permittivity, by successive over-relaxation of the
flux-conserving five-point stencil.  Unknowns sit at cell centers;
faces between cells of different permittivity carry the harmonic mean,
which is the exact series composition for interfaces aligned with the
grid.  Conductors are either blocks of fixed cells or zero-thickness
horizontal strips pinned on a face line; in both cases the Dirichlet
surface sits on a face, at half a cell from the neighbouring unknown.

From a converged solution the module extracts per-unit-length
capacitance via the discrete field energy (C = 2U/V^2), the effective
permittivity and characteristic impedance of a transmission-line
section via a paired all-vacuum solve, and the fraction of the energy
stored in each dielectric region.

The box walls are grounded by default.  Tests and idealized parallel
plate sections may instead ask for insulated (zero normal flux) walls
or a periodic x-direction; both exist to kill fringing where a closed
form is the reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT, EPS_0
from .cpw import CpwGeometry

__all__ = [
    "Rect",
    "DielectricRegion",
    "Conductor",
    "CrossSection",
    "FieldSolution",
    "ConvergenceError",
    "solve_potential",
    "capacitance_per_length",
    "extract_eps_eff_and_z0",
    "energy_participation",
    "cpw_cross_section",
]

DEFAULT_TOL = 1e-8
DEFAULT_MAX_SWEEPS = 200_000


class ConvergenceError(RuntimeError):
    """Relaxation failed to reach the update tolerance."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle.  Zero height marks a horizontal strip."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError("rectangle edges out of order")

    @property
    def is_strip(self) -> bool:
        return self.y1 == self.y0

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class DielectricRegion:
    name: str
    rect: Rect
    eps_r: float

    def __post_init__(self):
        if self.eps_r <= 0.0:
            raise ValueError(f"eps_r of {self.name!r} must be positive")
        if self.rect.is_strip or self.rect.x1 == self.rect.x0:
            raise ValueError(f"region {self.name!r} must have area")


@dataclass(frozen=True)
class Conductor:
    name: str
    rect: Rect
    potential: float


@dataclass
class CrossSection:
    """Rectangular solve domain: geometry, materials, electrodes, walls.

    width and height are in meters, split into nx x ny equal cells.
    origin is the physical coordinate of the lower-left corner.  Every
    cell center must fall in exactly one dielectric region.  x_bc is
    one of grounded / periodic / neumann, y_bc grounded / neumann.
    """

    width: float
    height: float
    nx: int
    ny: int
    regions: list[DielectricRegion] = field(default_factory=list)
    conductors: list[Conductor] = field(default_factory=list)
    origin: tuple[float, float] = (0.0, 0.0)
    x_bc: str = "grounded"
    y_bc: str = "grounded"

    def __post_init__(self):
        if self.width <= 0.0 or self.height <= 0.0:
            raise ValueError("domain must have positive size")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("need at least one cell per direction")
        if self.x_bc not in ("grounded", "periodic", "neumann"):
            raise ValueError(f"unknown x boundary {self.x_bc!r}")
        if self.y_bc not in ("grounded", "neumann"):
            raise ValueError(f"unknown y boundary {self.y_bc!r}")
        if not self.regions:
            raise ValueError("at least one dielectric region is required")

    @property
    def hx(self) -> float:
        return self.width / self.nx

    @property
    def hy(self) -> float:
        return self.height / self.ny

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        ox, oy = self.origin
        xs = ox + (np.arange(self.nx) + 0.5) * self.hx
        ys = oy + (np.arange(self.ny) + 0.5) * self.hy
        return xs, ys


@dataclass
class FieldSolution:
    """Converged potential with the assembled problem kept for reuse."""

    section: CrossSection
    potential: np.ndarray
    iterations: int
    max_update: float
    converged: bool
    _problem: "_Problem"


class _Problem:
    """Assembled arrays: permittivity, couplings, fixed cells, strips."""

    def __init__(self, section: CrossSection):
        self.section = section
        nx, ny = section.nx, section.ny
        hx, hy = section.hx, section.hy
        xs, ys = section.cell_centers()

        # paint dielectric regions; every cell must be claimed once
        region_id = np.full((nx, ny), -1, dtype=int)
        eps = np.zeros((nx, ny))
        self.region_names = [r.name for r in section.regions]
        if len(set(self.region_names)) != len(self.region_names):
            raise ValueError("region names must be unique")
        xg = xs[:, None]
        yg = ys[None, :]
        for ridx, reg in enumerate(section.regions):
            inside = ((xg >= reg.rect.x0) & (xg <= reg.rect.x1) &
                      (yg >= reg.rect.y0) & (yg <= reg.rect.y1))
            clash = inside & (region_id >= 0)
            if clash.any():
                raise ValueError(f"region {reg.name!r} overlaps another")
            region_id[inside] = ridx
            eps[inside] = reg.eps_r
        if (region_id < 0).any():
            raise ValueError("dielectric regions do not cover the domain")
        self.region_id = region_id
        self.eps = eps

        # electrodes: volume conductors pin cells, strips pin face lines
        fixed = np.zeros((nx, ny), dtype=bool)
        fixv = np.zeros((nx, ny))
        strips: list[tuple[np.ndarray, int, float]] = []
        self.potentials: list[float] = []
        for cond in section.conductors:
            r = cond.rect
            if r.is_strip:
                fy = (r.y0 - section.origin[1]) / hy
                m = round(fy)
                if abs(fy - m) > 1e-6:
                    raise ValueError(
                        f"strip {cond.name!r} does not sit on a face line")
                if not 1 <= m <= ny - 1:
                    raise ValueError(
                        f"strip {cond.name!r} lies on or outside the walls")
                cols = (xs >= r.x0) & (xs <= r.x1)
                if not cols.any():
                    raise ValueError(f"strip {cond.name!r} covers no cells")
                strips.append((cols, int(m), cond.potential))
            else:
                inside = ((xg >= r.x0) & (xg <= r.x1) &
                          (yg >= r.y0) & (yg <= r.y1))
                if not inside.any():
                    raise ValueError(
                        f"conductor {cond.name!r} contains no cells")
                clash = fixed & inside & (fixv != cond.potential)
                if clash.any():
                    raise ValueError(
                        f"conductor {cond.name!r} overlaps another at a "
                        "different potential")
                fixed |= inside
                fixv[inside] = cond.potential
            self.potentials.append(cond.potential)
        if section.x_bc == "grounded" or section.y_bc == "grounded":
            self.potentials.append(0.0)
        self.fixed = fixed
        self.fixv = fixv
        self.strips = strips

        # face transmissivities; tx has nx+1 faces per row, ty ny+1 per col
        free = ~fixed
        tx = np.zeros((nx + 1, ny))
        el, er = eps[:-1, :], eps[1:, :]
        both_free = free[:-1, :] & free[1:, :]
        one_fixed = free[:-1, :] ^ free[1:, :]
        harm = 2.0 * el * er / (el + er)
        half = np.where(free[:-1, :], el, er) * 2.0
        tx[1:-1, :] = (hy / hx) * np.where(both_free, harm,
                                           np.where(one_fixed, half, 0.0))
        if section.x_bc == "grounded":
            tx[0, :] = 2.0 * eps[0, :] * hy / hx
            tx[-1, :] = 2.0 * eps[-1, :] * hy / hx
        elif section.x_bc == "periodic":
            el, er = eps[-1, :], eps[0, :]
            bf = free[-1, :] & free[0, :]
            of = free[-1, :] ^ free[0, :]
            harm = 2.0 * el * er / (el + er)
            half = np.where(free[0, :], er, el) * 2.0
            wrap = (hy / hx) * np.where(bf, harm, np.where(of, half, 0.0))
            tx[0, :] = wrap
            tx[-1, :] = wrap

        ty = np.zeros((nx, ny + 1))
        eb, et = eps[:, :-1], eps[:, 1:]
        both_free = free[:, :-1] & free[:, 1:]
        one_fixed = free[:, :-1] ^ free[:, 1:]
        harm = 2.0 * eb * et / (eb + et)
        half = np.where(free[:, :-1], eb, et) * 2.0
        ty[:, 1:-1] = (hx / hy) * np.where(both_free, harm,
                                           np.where(one_fixed, half, 0.0))
        if section.y_bc == "grounded":
            ty[:, 0] = 2.0 * eps[:, 0] * hx / hy
            ty[:, -1] = 2.0 * eps[:, -1] * hx / hy

        # strips break their face and pin both sides at half distance
        s_coef = np.zeros((nx, ny, 2))  # [:, :, 0] south face, 1 north face
        s_val = np.zeros((nx, ny, 2))
        for cols, m, pot in strips:
            taken = (s_coef[cols, m, 0] > 0.0) | (s_coef[cols, m - 1, 1] > 0.0)
            if taken.any():
                raise ValueError("strips overlap on a shared face")
            ty_face = ty[:, m].copy()
            ty_face[cols] = 0.0
            ty[:, m] = ty_face
            below = np.zeros(nx, dtype=bool)
            below[:] = cols
            s_coef[below, m - 1, 1] = 2.0 * eps[below, m - 1] * hx / hy
            s_val[below, m - 1, 1] = pot
            s_coef[below, m, 0] = 2.0 * eps[below, m] * hx / hy
            s_val[below, m, 0] = pot
        self.tx = tx
        self.ty = ty
        self.s_coef = s_coef
        self.s_val = s_val

        self.cw = tx[:-1, :]
        self.ce = tx[1:, :]
        self.cs = ty[:, :-1]
        self.cn = ty[:, 1:]
        self.bsrc = (s_coef[:, :, 0] * s_val[:, :, 0] +
                     s_coef[:, :, 1] * s_val[:, :, 1])
        self.diag = (self.cw + self.ce + self.cs + self.cn +
                     s_coef[:, :, 0] + s_coef[:, :, 1])
        bad = (self.diag == 0.0) & free
        if bad.any():
            raise ValueError("isolated cells: no coupling to any potential")

    def potential_span(self) -> float:
        pots = self.potentials
        if not pots:
            raise ValueError("no electrodes in the section")
        return max(pots) - min(pots)


def _sor_sweeps(prob: _Problem, v: np.ndarray, omega: float, tol: float,
                max_sweeps: int) -> tuple[int, float, bool]:
    # checkerboard Gauss-Seidel: cells of one parity never neighbour each
    # other, so each half-sweep is a pure array update over four strided
    # quadrant views of the padded potential
    nx, ny = v.shape
    periodic = prob.section.x_bc == "periodic"

    pad = np.zeros((nx + 2, ny + 2))
    pad[1:-1, 1:-1] = v
    keep = np.where(prob.fixed, 1.0, 1.0 - omega)
    gain = np.where(prob.fixed | (prob.diag == 0.0), 0.0,
                    omega / np.where(prob.diag > 0.0, prob.diag, 1.0))

    quads = []
    for a in (0, 1):
        for b in (0, 1):
            ci = slice(1 + a, nx + 1, 2)
            cj = slice(1 + b, ny + 1, 2)
            wi = slice(a, nx, 2)
            ei = slice(2 + a, nx + 2, 2)
            sj = slice(b, ny, 2)
            nj = slice(2 + b, ny + 2, 2)
            qs = (slice(a, None, 2), slice(b, None, 2))
            quads.append(((a + b) % 2, (ci, cj), (wi, cj), (ei, cj),
                          (ci, sj), (ci, nj),
                          np.ascontiguousarray(prob.cw[qs]),
                          np.ascontiguousarray(prob.ce[qs]),
                          np.ascontiguousarray(prob.cs[qs]),
                          np.ascontiguousarray(prob.cn[qs]),
                          np.ascontiguousarray(prob.bsrc[qs]),
                          np.ascontiguousarray(keep[qs]),
                          np.ascontiguousarray(gain[qs])))

    def refresh_ghosts():
        if periodic:
            pad[0, 1:-1] = pad[-2, 1:-1]
            pad[-1, 1:-1] = pad[1, 1:-1]

    delta = math.inf
    for sweep in range(1, max_sweeps + 1):
        delta = 0.0
        for color in (0, 1):
            refresh_ghosts()
            for (parity, c, wv, ev, sv, nv, cw, ce, cs, cn, b, k,
                 g) in quads:
                if parity != color:
                    continue
                num = cw * pad[wv]
                num += ce * pad[ev]
                num += cs * pad[sv]
                num += cn * pad[nv]
                num += b
                num *= g
                num += k * pad[c]
                d = float(np.max(np.abs(num - pad[c]))) if num.size else 0.0
                delta = max(delta, d)
                pad[c] = num
        if not math.isfinite(delta):
            return sweep, delta, False
        if delta <= tol:
            v[:, :] = pad[1:-1, 1:-1]
            return sweep, delta, True
    v[:, :] = pad[1:-1, 1:-1]
    return max_sweeps, delta, False


def solve_potential(section: CrossSection, tol: float = DEFAULT_TOL,
                    max_sweeps: int = DEFAULT_MAX_SWEEPS,
                    omega: float | None = None) -> FieldSolution:
    """Relax the section to a potential map.

    omega defaults to the model-problem optimum 2 / (1 + sin(pi / n))
    for the longer grid side; if the iteration ever turns non-finite
    the solve restarts once at omega = 1.0 (plain Gauss-Seidel).
    Raises ConvergenceError if the update never drops below tol.
    """
    prob = _Problem(section)
    if omega is None:
        n = max(section.nx, section.ny)
        omega = 2.0 / (1.0 + math.sin(math.pi / (n + 1)))
    if not 0.0 < omega < 2.0:
        raise ValueError("omega must lie in (0, 2)")

    v = np.zeros((section.nx, section.ny))
    v[prob.fixed] = prob.fixv[prob.fixed]
    sweeps, delta, ok = _sor_sweeps(prob, v, omega, tol, max_sweeps)
    if not ok and not math.isfinite(delta):
        v = np.zeros((section.nx, section.ny))
        v[prob.fixed] = prob.fixv[prob.fixed]
        sweeps, delta, ok = _sor_sweeps(prob, v, 1.0, tol, max_sweeps)
    if not ok:
        raise ConvergenceError(
            f"no convergence after {sweeps} sweeps (last update {delta:.3e})")
    return FieldSolution(section=section, potential=v, iterations=sweeps,
                         max_update=delta, converged=True, _problem=prob)


def _face_energies(sol: FieldSolution):
    """Yield (energy, region_a, region_b, frac_a) per face group.

    frac_a is the share of the face energy stored on side a; for two
    dielectrics in series across a face the drop splits inversely to
    eps, putting eps_b / (eps_a + eps_b) of the energy on side a.
    """
    prob = sol._problem
    v = sol.potential
    sec = sol.section
    eps = prob.eps
    rid = prob.region_id
    free = ~prob.fixed
    vw = np.where(prob.fixed, prob.fixv, v)

    # interior x faces
    dl = vw[:-1, :] - vw[1:, :]
    t = prob.tx[1:-1, :]
    e = 0.5 * t * dl * dl
    el, er = eps[:-1, :], eps[1:, :]
    both = free[:-1, :] & free[1:, :]
    frac_l = np.where(both, er / (el + er), np.where(free[:-1, :], 1.0, 0.0))
    yield e, rid[:-1, :], rid[1:, :], frac_l

    # interior y faces
    dl = vw[:, :-1] - vw[:, 1:]
    t = prob.ty[:, 1:-1]
    e = 0.5 * t * dl * dl
    eb, et = eps[:, :-1], eps[:, 1:]
    both = free[:, :-1] & free[:, 1:]
    frac_b = np.where(both, et / (eb + et), np.where(free[:, :-1], 1.0, 0.0))
    yield e, rid[:, :-1], rid[:, 1:], frac_b

    # walls (grounded only; neumann faces carry zero T, periodic wrap below)
    if sec.x_bc == "grounded":
        for sl, tface in (((0, slice(None)), prob.tx[0, :]),
                          ((-1, slice(None)), prob.tx[-1, :])):
            dv = vw[sl]
            e = 0.5 * tface * dv * dv
            yield e, rid[sl], rid[sl], np.ones_like(e)
    elif sec.x_bc == "periodic":
        dv = vw[-1, :] - vw[0, :]
        e = 0.5 * prob.tx[0, :] * dv * dv
        el, er = eps[-1, :], eps[0, :]
        both = free[-1, :] & free[0, :]
        frac_l = np.where(both, er / (el + er), np.where(free[-1, :], 1.0,
                                                         0.0))
        yield e, rid[-1, :], rid[0, :], frac_l
    if sec.y_bc == "grounded":
        for sl, tface in (((slice(None), 0), prob.ty[:, 0]),
                          ((slice(None), -1), prob.ty[:, -1])):
            dv = vw[sl]
            e = 0.5 * tface * dv * dv
            yield e, rid[sl], rid[sl], np.ones_like(e)

    # strip pins, both sides
    for side in (0, 1):
        coef = prob.s_coef[:, :, side]
        dv = vw - prob.s_val[:, :, side]
        e = 0.5 * coef * dv * dv
        yield e, rid, rid, np.ones_like(e)


def _total_energy(sol: FieldSolution) -> float:
    """Stored energy per unit length in J/m (the assembled T carry eps_r)."""
    return EPS_0 * float(sum(np.sum(e) for e, _, _, _ in _face_energies(sol)))


def capacitance_per_length(sol: FieldSolution) -> float:
    """C' = 2 U / V^2 in F/m from the discrete field energy."""
    span = sol._problem.potential_span()
    if span <= 0.0:
        raise ValueError("electrodes span no potential difference")
    return 2.0 * _total_energy(sol) / (span * span)


def energy_participation(sol: FieldSolution) -> dict[str, float]:
    """Fraction of the stored energy per dielectric region.

    Sums to one exactly up to rounding.  Raises on a zero-energy
    solution, where fractions are undefined.
    """
    prob = sol._problem
    sums = np.zeros(len(prob.region_names))
    for e, ra, rb, fa in _face_energies(sol):
        np.add.at(sums, ra, e * fa)
        np.add.at(sums, rb, e * (1.0 - fa))
    total = float(sums.sum())
    if total <= 0.0:
        raise ValueError("zero field energy: participation undefined")
    return {name: float(s) / total
            for name, s in zip(prob.region_names, sums)}


def extract_eps_eff_and_z0(section: CrossSection, tol: float = DEFAULT_TOL,
                           max_sweeps: int = DEFAULT_MAX_SWEEPS,
                           omega: float | None = None,
                           solution: FieldSolution | None = None
                           ) -> tuple[float, float]:
    """(eps_eff, Z0) of a line cross-section from two solves.

    The section is solved as given and once more with every region at
    eps_r = 1; then eps_eff = C / C_vac and Z0 = 1 / (c sqrt(C C_vac)).
    An already-all-vacuum section reruns the identical computation, so
    its ratio is exactly one.  Pass a solution already computed for
    this section to skip the first solve.
    """
    if solution is not None and solution.section is not section:
        raise ValueError("solution belongs to a different section")
    sol = solution if solution is not None else solve_potential(
        section, tol=tol, max_sweeps=max_sweeps, omega=omega)
    c_actual = capacitance_per_length(sol)

    vac_regions = [DielectricRegion(r.name, r.rect, 1.0)
                   for r in section.regions]
    vac = CrossSection(width=section.width, height=section.height,
                       nx=section.nx, ny=section.ny, regions=vac_regions,
                       conductors=section.conductors, origin=section.origin,
                       x_bc=section.x_bc, y_bc=section.y_bc)
    sol_vac = solve_potential(vac, tol=tol, max_sweeps=max_sweeps,
                              omega=omega)
    c_vac = capacitance_per_length(sol_vac)
    eps_eff = c_actual / c_vac
    z0 = 1.0 / (C_LIGHT * math.sqrt(c_actual * c_vac))
    return eps_eff, z0


def cpw_cross_section(geometry: CpwGeometry, cell: float = 0.25e-6,
                      box_factor: float = 10.0,
                      interlayer_thickness: float | None = None,
                      substrate_name: str = "substrate",
                      superstrate_name: str = "interlayer") -> CrossSection:
    """Grounded-box cross-section of a CPW between two half-spaces.

    The metal plane sits at y = 0 as zero-thickness strips: the center
    trace at 1 V, the side grounds running to the walls at 0 V.  The
    box is box_factor times the (w + 2s) aperture on a side; rectangle
    edges snap to the cell grid.  When interlayer_thickness puts the
    facing chip's ground inside the box, a grounded strip is added at
    that height.
    """
    if cell <= 0.0:
        raise ValueError("cell size must be positive")
    if box_factor < 10.0:
        raise ValueError("box must be at least 10 apertures wide")
    w = geometry.trace_width
    s = geometry.gap
    aperture = w + 2.0 * s
    half_cells = math.ceil(0.5 * box_factor * aperture / cell)
    nx = 2 * half_cells
    ny = 2 * half_cells
    half = half_cells * cell
    size = 2.0 * half

    def snap(x: float) -> float:
        return round(x / cell) * cell

    trace_half = snap(0.5 * w)
    ground_from = snap(0.5 * w + s)
    if not 0.0 < trace_half < ground_from < half:
        raise ValueError("cell size too coarse for this geometry")

    regions = [
        DielectricRegion(substrate_name, Rect(-half, half, -half, 0.0),
                         geometry.eps_substrate),
        DielectricRegion(superstrate_name, Rect(-half, half, 0.0, half),
                         geometry.eps_superstrate),
    ]
    conductors = [
        Conductor("trace", Rect(-trace_half, trace_half, 0.0, 0.0), 1.0),
        Conductor("ground_left", Rect(-half, -ground_from, 0.0, 0.0), 0.0),
        Conductor("ground_right", Rect(ground_from, half, 0.0, 0.0), 0.0),
    ]
    if interlayer_thickness is not None:
        if interlayer_thickness <= 0.0:
            raise ValueError("interlayer thickness must be positive")
        lid = snap(interlayer_thickness)
        if cell <= lid < half:
            conductors.append(
                Conductor("facing_ground", Rect(-half, half, lid, lid), 0.0))

    return CrossSection(width=size, height=size, nx=nx, ny=ny,
                        regions=regions, conductors=conductors,
                        origin=(-half, -half))
