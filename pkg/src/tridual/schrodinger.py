"""Finite-difference bound states of the sextic potentials (hbar = m = 1).

This is the independent check of the algebraic sector: the Hamiltonian
``-1/2 d^2/dx^2 + V(x)`` is discretised with central differences on
``[-L, L]`` with Dirichlet walls, the lowest levels are found with the
Sturm-bisection solver, and two grid spacings are combined by Richardson
extrapolation to cancel the leading ``O(h^2)`` error.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import integrate, optimize
from scipy.linalg import solve_banded

from .qes import Parity, QesParams, algebraic_spectrum, build_block, potential_coefficients, potential_value
from .tridiag import ConvergenceError, TridiagonalMatrix, eigenvalues_symmetric

log = logging.getLogger(__name__)

Potential = Union[QesParams, Callable[[np.ndarray], np.ndarray]]

# WKB decay exponent required between the outermost turning point and the wall
TAIL_ACTION = 20.0
NODE_FLOOR = 1e-12
NEAR_DEGENERATE_GAP = 1e-4

__all__ = [
    "Grid",
    "BoundStateSet",
    "SectorRow",
    "SectorReport",
    "discretize",
    "choose_half_width",
    "bound_states",
    "validate_algebraic_sector",
    "count_minima",
    "count_nodes",
]


@dataclass(frozen=True)
class Grid:
    """Interior points ``x_i = -L + i h``, ``i = 1..n_grid``, ``h = 2L/(n_grid+1)``."""

    half_width: float
    n_grid: int

    def __post_init__(self):
        if self.n_grid < 3:
            raise ValueError("grid needs at least 3 interior points")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_grid + 1)

    @property
    def points(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(1, self.n_grid + 1)

    def refined(self) -> "Grid":
        """Halve the spacing; the old points stay on the new grid."""
        return Grid(self.half_width, 2 * self.n_grid + 1)


@dataclass(frozen=True)
class BoundStateSet:
    energies: tuple
    node_counts: tuple
    parities: tuple
    grid: Grid
    extrapolated: bool
    # largest change of the extrapolated energies under the last refinement
    refinement_change: float = math.nan

    def __len__(self):
        return len(self.energies)

    @property
    def oscillation_ok(self) -> bool:
        return tuple(self.node_counts) == tuple(range(len(self.energies)))

    @property
    def parities_alternate(self) -> bool:
        return all(
            par is (Parity.EVEN if i % 2 == 0 else Parity.ODD)
            for i, par in enumerate(self.parities)
        )


def _potential_fn(potential: Potential) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(potential, QesParams):
        return lambda x: potential_value(potential, x)
    return potential


def discretize(
    potential: Potential,
    grid: Grid,
    e_max: float | None = None,
    margin: float = 25.0,
) -> TridiagonalMatrix:
    """Symmetric FD matrix: diagonal ``1/h^2 + V(x_i)``, off-diagonal ``-1/(2h^2)``.

    When ``e_max`` is given the walls must satisfy ``V(+-L) >= e_max + margin``.
    """
    v = _potential_fn(potential)
    if e_max is not None:
        wall = min(float(v(np.array([-grid.half_width]))[0]), float(v(np.array([grid.half_width]))[0]))
        if wall < e_max + margin:
            raise ValueError(
                f"box too narrow: V(L)={wall:.6g} below e_max + margin = {e_max + margin:.6g}"
            )
    h = grid.spacing
    diag = 1.0 / h**2 + np.asarray(v(grid.points), dtype=float)
    off = np.full(grid.n_grid - 1, -0.5 / h**2)
    return TridiagonalMatrix.symmetric(diag.tolist(), off.tolist())


def _block_energy_bound(p: QesParams) -> float:
    """Gershgorin upper bound on the algebraic energies."""
    m = build_block(p).as_float()
    n = m.n
    bound = -math.inf
    for i in range(n):
        r = (abs(m.sup[i]) if i < n - 1 else 0.0) + (abs(m.sub[i - 1]) if i > 0 else 0.0)
        bound = max(bound, m.diag[i] + r)
    return bound


def choose_half_width(
    potential: Potential, e_max: float, margin: float = 25.0, tail_action: float = TAIL_ACTION
) -> float:
    """Smallest ``L`` with ``V(L) >= e_max + margin`` and a WKB decay exponent of
    at least ``tail_action`` between the outer turning point and ``L``.

    Assumes a potential that is even in ``x`` and grows without bound.
    """
    v = _potential_fn(potential)

    def vs(x):
        return float(v(np.array([x]))[0])

    hi = 1.0
    while vs(hi) < e_max + margin:
        hi *= 2.0
        if hi > 1e6:
            raise ValueError("potential does not confine")
    # outermost turning point
    xs = np.linspace(0.0, hi, 2001)
    above = np.nonzero(np.asarray(v(xs)) <= e_max)[0]
    x_turn = xs[above[-1]] if above.size else 0.0
    if above.size and above[-1] < xs.size - 1:
        x_turn = optimize.brentq(lambda x: vs(x) - e_max, xs[above[-1]], xs[above[-1] + 1])
    lo = optimize.brentq(lambda x: vs(x) - e_max - margin, x_turn, hi) if vs(x_turn) < e_max + margin else x_turn

    def action(L):
        val, _ = integrate.quad(lambda x: math.sqrt(max(2.0 * (vs(x) - e_max), 0.0)), x_turn, L, limit=200)
        return val

    if action(lo) >= tail_action:
        return lo
    top = max(lo, x_turn + 1.0)
    while action(top) < tail_action:
        top *= 1.5
    return optimize.brentq(lambda L: action(L) - tail_action, lo, top)


def _inverse_iteration(m: TridiagonalMatrix, lam: float, rng: np.random.Generator) -> np.ndarray:
    n = m.n
    d = np.asarray(m.diag)
    e = np.asarray(m.sup)
    shift = lam + 1e-10 * max(1.0, abs(lam))
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[1] = d - shift
    ab[2, :-1] = e
    x = rng.standard_normal(n)
    for _ in range(3):
        x = solve_banded((1, 1), ab, x)
        x /= np.linalg.norm(x)
    return x


def count_nodes(psi: np.ndarray, floor: float = NODE_FLOOR) -> int:
    """Strict sign changes, skipping components below ``floor * max|psi|``."""
    psi = np.asarray(psi)
    keep = psi[np.abs(psi) > floor * np.max(np.abs(psi))]
    return int(np.count_nonzero(np.signbit(keep[1:]) != np.signbit(keep[:-1])))


def _parity(psi: np.ndarray) -> Parity:
    return Parity.EVEN if float(np.dot(psi, psi[::-1])) >= 0.0 else Parity.ODD


def _lowest(m: TridiagonalMatrix, k: int, tol: float) -> np.ndarray:
    vals = eigenvalues_symmetric(m, tol=tol, indices=(0, k)).as_array()
    if k > 1 and np.min(np.diff(vals)) < NEAR_DEGENERATE_GAP and tol > 1e-12:
        vals = eigenvalues_symmetric(m, tol=1e-12, indices=(0, k)).as_array()
    return vals


def bound_states(
    p: Potential,
    k: int,
    target_tol: float = 1e-6,
    n_grid: int = 4000,
    tol: float = 1e-10,
    half_width: float | None = None,
    max_refinements: int = 3,
) -> BoundStateSet:
    """Lowest ``k`` levels with node counts and parities.

    Energies are Richardson-extrapolated from spacings ``h`` and ``h/2``;
    the result is accepted once one further halving moves the extrapolated
    values by less than ``target_tol / 10``. Raises ``ConvergenceError`` if
    that does not happen within ``max_refinements`` extra halvings.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if half_width is None:
        if not isinstance(p, QesParams):
            raise ValueError("half_width is required for a bare potential callable")
        # coarse pass to estimate the highest requested level
        guess = max(_block_energy_bound(p), float(potential_coefficients(p)[3]))
        L0 = choose_half_width(p, guess)
        coarse = _lowest(discretize(p, Grid(L0, 800)), k, 1e-8)
        e_max = max(float(coarse[-1]), guess)
        half_width = choose_half_width(p, e_max)
    base = Grid(half_width, n_grid)

    grids = [base, base.refined()]
    raw = [_lowest(discretize(p, g), k, tol) for g in grids]
    extrap = [(4.0 * raw[1] - raw[0]) / 3.0]
    change = math.inf
    for _ in range(max_refinements + 1):
        grids.append(grids[-1].refined())
        raw.append(_lowest(discretize(p, grids[-1]), k, tol))
        extrap.append((4.0 * raw[-1] - raw[-2]) / 3.0)
        change = float(np.max(np.abs(extrap[-1] - extrap[-2])))
        if change < target_tol / 10:
            break
    else:
        raise ConvergenceError(
            f"could not certify target_tol={target_tol:g}: last refinement changed "
            f"energies by {change:.3g} (finest grid n={grids[-1].n_grid})"
        )
    log.debug("bound_states L=%.4g n=%d change=%.3g", half_width, grids[-1].n_grid, change)

    m0 = discretize(p, base)
    rng = np.random.default_rng(0)
    nodes, parities = [], []
    for lam in raw[0]:
        psi = _inverse_iteration(m0, float(lam), rng)
        nodes.append(count_nodes(psi))
        parities.append(_parity(psi))
    return BoundStateSet(
        energies=tuple(float(e) for e in extrap[-1]),
        node_counts=tuple(nodes),
        parities=tuple(parities),
        grid=base,
        extrapolated=True,
        refinement_change=change,
    )


@dataclass(frozen=True)
class SectorRow:
    level: int
    fd_energy: float
    algebraic_energy: float
    residual: float
    passed: bool


@dataclass(frozen=True)
class SectorReport:
    params: QesParams
    rows: tuple
    opposite_parity_clear: bool
    oscillation_ok: bool
    parities_alternate: bool
    tol: float

    @property
    def max_residual(self) -> float:
        return max(r.residual for r in self.rows)

    @property
    def passed(self) -> bool:
        return (
            all(r.passed for r in self.rows)
            and self.opposite_parity_clear
            and self.oscillation_ok
            and self.parities_alternate
        )


def validate_algebraic_sector(
    p: QesParams, tol: float = 1e-6, states: BoundStateSet | None = None
) -> SectorReport:
    """Match FD levels of the block's parity against the block eigenvalues.

    A level passes when ``|E_fd - E_block| <= max(tol, tol*|E_block|)``.
    Opposite-parity levels count as absent from the algebraic set when each
    algebraic energy is closer to its own FD level than to any other, and
    the eigenvector parities agree with the assignment. Tunnelling doublets
    can sit inside the tolerance window, so proximity alone is not used.
    """
    alg = algebraic_spectrum(p)
    if states is None:
        states = bound_states(p, p.top_level + 1, target_tol=tol)
    rows = []
    for level, e_alg in alg.rows():
        e_fd = states.energies[level]
        bound = max(tol, tol * abs(e_alg))
        rows.append(SectorRow(level, e_fd, e_alg, abs(e_fd - e_alg), abs(e_fd - e_alg) <= bound))
    fd = np.asarray(states.energies[: p.top_level + 1])
    nearest_ok = all(
        int(np.argmin(np.abs(fd - e_alg))) == level for level, e_alg in alg.rows()
    )
    parity_ok = all(
        (states.parities[i] is p.parity) == (i % 2 == p.parity.offset)
        for i in range(min(len(states.parities), p.top_level + 1))
    )
    clear = nearest_ok and parity_ok
    return SectorReport(
        params=p,
        rows=tuple(rows),
        opposite_parity_clear=clear,
        oscillation_ok=states.oscillation_ok,
        parities_alternate=states.parities_alternate,
        tol=tol,
    )


def count_minima(p: QesParams) -> int:
    """Number of real local minima of the (even, sextic) potential.

    ``V'(x) = x g(x^2)`` with ``g(u) = 6 c6 u^2 + 4 c4 u + 2 c2``; a
    critical point ``x = +-sqrt(u)`` is a minimum when ``g'(u) > 0``.
    """
    c6, c4, c2, _ = (float(c) for c in potential_coefficients(p))
    count = 0
    # x = 0: first non-vanishing even derivative decides
    for c in (c2, c4, c6):
        if c != 0.0:
            count += c > 0
            break
    for u in np.roots([6 * c6, 4 * c4, 2 * c2]):
        if abs(u.imag) > 1e-12 * max(1.0, abs(u)) or u.real <= 0:
            continue
        slope = 12 * c6 * u.real + 4 * c4
        if slope > 1e-12 * max(1.0, abs(4 * c4)):
            count += 2
    return count
