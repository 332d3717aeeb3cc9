"""Level-diagram data and optional matplotlib rendering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .qes import Parity, QesParams, algebraic_spectrum, potential_value
from .schrodinger import bound_states


@dataclass(frozen=True)
class LevelSegment:
    mu: object
    level: int
    energy: float
    parity: Parity
    algebraic: bool
    x_left: float
    x_right: float


def allowed_segments(p: QesParams, energy: float, half_width: float) -> list[tuple[float, float]]:
    """Intervals of ``[-L, L]`` where ``V(x) <= energy``."""
    xs = np.linspace(-half_width, half_width, 4001)
    f = potential_value(p, xs) - energy
    inside = f <= 0
    segments = []
    i = 0
    n = xs.size
    while i < n:
        if not inside[i]:
            i += 1
            continue
        k = i
        while k + 1 < n and inside[k + 1]:
            k += 1

        def g(x):
            return float(potential_value(p, np.array([x]))[0]) - energy

        left = optimize.brentq(g, xs[i - 1], xs[i]) if i > 0 else xs[0]
        right = optimize.brentq(g, xs[k], xs[k + 1]) if k + 1 < n else xs[-1]
        segments.append((float(left), float(right)))
        i = k + 1
    return segments


def level_diagram(p: QesParams, levels: int = 5, points: int = 401):
    """Potential curves and level lines for ``mu`` and ``-mu`` side by side.

    Returns ``(curve_rows, segments)``: rows ``(mu, x, V)`` and one
    ``LevelSegment`` per classically allowed interval of each level.
    """
    curves, segments = [], []
    for q in (p, p.dual()):
        states = bound_states(q, levels)
        algebraic = set(algebraic_spectrum(q).level_indices)
        top = states.energies[-1]
        # show the wells with some headroom above the highest level
        half = _plot_half_width(q, top)
        for x in np.linspace(-half, half, points):
            curves.append((q.mu, float(x), float(potential_value(q, float(x)))))
        for level, (energy, par) in enumerate(zip(states.energies, states.parities)):
            for left, right in allowed_segments(q, energy, half):
                segments.append(
                    LevelSegment(q.mu, level, energy, par, level in algebraic, left, right)
                )
    return curves, segments


def _plot_half_width(p: QesParams, top: float) -> float:
    x = 0.5
    while potential_value(p, x) < top + 0.5 * (abs(top) + 1.0):
        x *= 1.1
    return x


def render_level_diagram(curves, segments, path) -> None:
    """Write the two-panel level diagram; even levels solid, odd dashed."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    mus = []
    for mu, _, _ in curves:
        if mu not in mus:
            mus.append(mu)
    fig, axes = plt.subplots(1, len(mus), figsize=(10, 4.5), sharey=True)
    axes = np.atleast_1d(axes)
    for ax, mu in zip(axes, mus):
        xs = [x for m, x, _ in curves if m == mu]
        vs = [v for m, _, v in curves if m == mu]
        ax.plot(xs, vs, color="k", lw=1.2)
        for s in segments:
            if s.mu != mu:
                continue
            style = "-" if s.parity is Parity.EVEN else "--"
            ax.plot([s.x_left, s.x_right], [s.energy, s.energy], style, color="C0", lw=1)
        ax.set_title(f"mu = {mu}")
        ax.set_xlabel("x")
    axes[0].set_ylabel("V(x), E")
    top = max(s.energy for s in segments)
    bottom = min(v for _, _, v in curves)
    axes[0].set_ylim(bottom - 0.1 * abs(bottom) - 1, top + 0.3 * abs(top) + 1)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
