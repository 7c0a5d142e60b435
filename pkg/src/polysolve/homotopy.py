"""Total-degree homotopy continuation.

H(x; t) = t F(x) + (1 - t) gamma G(x), tracked from the roots of unity of
G = (x_i^{d_i} - 1) at t = 0 to t = 1 with an Euler predictor, a short
Newton corrector and step halving/doubling.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .linalg import SingularMatrixError, lu_factor, lu_inverse_abs_apply, lu_solve, lu_solve_factored
from .poly import CC, Polynomial, PolySystem
from .solutions import (REAL_TOL, CompiledSystem, SolutionSet, accept, backward_error,
                        cluster_points, make_solution, newton_refine)

log = logging.getLogger(__name__)

MAX_PATHS = 10 ** 6


class TooManyPathsError(ValueError):
    pass


@dataclass(frozen=True)
class TrackerConfig:
    initial_step: float = 0.1
    min_step: float = 1e-14
    newton_tol: float = 1e-10
    max_newton: int = 3
    divergence_bound: float = 1e8
    endpoint_tol: float = 1e-12
    seed: int = 0
    max_steps: int = 100_000
    residual_tol: float = 1e-8
    real_tol: float = REAL_TOL
    dedup_tol: float = 1e-6
    rerun_step: float = 1e-3

    def __post_init__(self):
        for name in ("initial_step", "min_step", "newton_tol", "divergence_bound",
                     "endpoint_tol", "max_newton", "max_steps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.min_step < self.initial_step <= 0.5:
            raise ValueError("need min_step < initial_step <= 0.5")


def random_gamma(seed: int) -> complex:
    theta = np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi)
    return complex(np.exp(1j * theta))


class Homotopy:
    """Straight-line homotopy between a start and a target system."""

    def __init__(self, F: PolySystem, G: PolySystem, gamma: complex = 1.0):
        if F.nvars != G.nvars or len(F) != len(G):
            raise ValueError("start and target systems must have the same shape")
        if len(F) != F.nvars:
            raise ValueError("homotopy needs a square system")
        self.F = F.to_complex() if F.field != CC else F
        self.G = G.to_complex() if G.field != CC else G
        self.gamma = complex(gamma)
        self._f = CompiledSystem(self.F)
        self._g = CompiledSystem(self.G)

    @property
    def target(self) -> CompiledSystem:
        return self._f

    def __call__(self, x, t: float) -> np.ndarray:
        return t * self._f(x) + (1 - t) * self.gamma * self._g(x)

    def jacobian(self, x, t: float) -> np.ndarray:
        return t * self._f.jacobian(x) + (1 - t) * self.gamma * self._g.jacobian(x)

    def dt(self, x, t: float = 0.0) -> np.ndarray:
        return self._f(x) - self.gamma * self._g(x)

    def rounding_bound(self, x, t: float) -> np.ndarray:
        return t * self._f.rounding_bound(x) + (1 - t) * self._g.rounding_bound(x)

    def evaluate_all(self, x, t: float):
        """(H, J_x, dH/dt) at one point."""
        fv, fj = self._f.both(x)
        gv, gj = self._g.both(x)
        g = self.gamma
        return t * fv + (1 - t) * g * gv, t * fj + (1 - t) * g * gj, fv - g * gv


@dataclass
class PathState:
    path: int
    t: float
    x: np.ndarray
    dt: float
    status: str = "tracking"
    steps: int = 0
    newton_iterations: int = 0
    rejections: int = 0
    message: str = ""


def total_degree_start(degrees) -> tuple[PolySystem, list[np.ndarray]]:
    degrees = [int(d) for d in degrees]
    if not degrees or any(d < 1 for d in degrees):
        raise ValueError("degrees must be positive")
    count = int(np.prod(degrees, dtype=object))
    if count > MAX_PATHS:
        raise TooManyPathsError(f"{count} start points exceed the limit of {MAX_PATHS}")
    n = len(degrees)
    G = tuple(Polynomial(n, {tuple(d * (i == k) for i in range(n)): 1, (0,) * n: -1}, field=CC)
              for k, d in enumerate(degrees))
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degrees]
    starts = [np.array(p) for p in itertools.product(*roots)]
    return PolySystem(G), starts


def _correct(H: Homotopy, x: np.ndarray, t: float, cfg: TrackerConfig):
    """Newton on H(., t). Returns (x, ok, iterations).

    An update also counts as converged once it is no larger than the effect
    of rounding errors in evaluating H (see ``CompiledSystem.rounding_bound``).
    """
    prev = None
    for it in range(1, cfg.max_newton + 1):
        val, J, _ = H.evaluate_all(x, t)
        try:
            fac = lu_factor(J)
        except SingularMatrixError:
            return x, False, it
        dx = lu_solve_factored(fac, val)
        x_old, x = x, x - dx
        nd = np.linalg.norm(dx)
        if not np.isfinite(nd):
            return x, False, it
        if nd <= cfg.newton_tol * (1.0 + np.linalg.norm(x)):
            return x, True, it
        if nd <= np.linalg.norm(lu_inverse_abs_apply(fac, H.rounding_bound(x_old, t))):
            return x, True, it
        if prev is not None and nd > 0.5 * prev:
            return x, False, it
        prev = nd
    return x, False, cfg.max_newton


def track_path(H: Homotopy, x0, cfg: TrackerConfig = TrackerConfig(), path: int = 0,
               trace: Callable[[PathState], None] | None = None) -> PathState:
    """Follow one solution path from t = 0 to t = 1."""
    x = np.array(x0, dtype=complex)
    st = PathState(path, 0.0, x, cfg.initial_step)
    r0 = np.linalg.norm(H(x, 0.0))
    if r0 > max(cfg.newton_tol, 1e-12) * (1.0 + np.linalg.norm(x)) * 10:
        raise ValueError(f"start point is not a solution of the start system (|H| = {r0:.2e})")
    if trace:
        trace(st)
    wins = 0
    while st.t < 1.0:
        if st.steps >= cfg.max_steps:
            st.status, st.message = "failed", "step budget exhausted"
            return st
        last = st.t + st.dt >= 1.0
        t1 = 1.0 if last else st.t + st.dt
        h = t1 - st.t
        _, J, Ht = H.evaluate_all(st.x, st.t)
        ok = True
        try:
            xdot = -lu_solve(J, Ht)
        except SingularMatrixError:
            ok = False
        if ok:
            xp = st.x + h * xdot
            xc, ok, its = _correct(H, xp, t1, cfg)
            st.newton_iterations += its
        if ok:
            st.x, st.t = xc, t1
            st.steps += 1
            wins += 1
            if wins >= 3:
                st.dt = min(2 * st.dt, cfg.initial_step)
                wins = 0
            if trace:
                trace(st)
            if np.linalg.norm(st.x) > cfg.divergence_bound:
                st.status, st.message = "diverged", "norm bound exceeded"
                return st
        else:
            st.rejections += 1
            wins = 0
            st.dt /= 2
            if st.dt < cfg.min_step:
                st.status, st.message = "diverged", f"step underflow at t={st.t:.16g}"
                return st
    # endpoint refinement on F
    x, conv = newton_refine(H.target, st.x, tol=cfg.endpoint_tol, max_iter=10)
    if not conv:
        try:
            lu_solve(H.target.jacobian(x), H.target(x))
            st.status, st.message = "failed", "endpoint refinement did not converge"
        except SingularMatrixError:
            st.status, st.message = "failed", "singular Jacobian at t=1"
        st.x = x
        return st
    st.x = x
    st.status = "converged"
    return st


@dataclass
class HomotopyResult:
    solutions: SolutionSet
    paths: list[PathState] = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(p.status == status for p in self.paths)


def solve_homotopy(F: PolySystem, cfg: TrackerConfig = TrackerConfig(), *,
                   trace: Callable[[PathState], None] | None = None,
                   full: bool = False):
    """All isolated solutions of a square system via a total-degree homotopy."""
    if not F.is_square():
        raise ValueError("homotopy needs a square system")
    if any(d < 1 for d in F.degrees):
        raise ValueError("every equation must have positive degree")
    G, starts = total_degree_start(F.degrees)
    H = Homotopy(F, G, random_gamma(cfg.seed))
    paths = [track_path(H, x0, cfg, k, trace) for k, x0 in enumerate(starts)]
    diags: list[str] = []

    def converged():
        return [k for k, p in enumerate(paths) if p.status == "converged"]

    conv = converged()
    dup = [g for g in cluster_points([paths[k].x for k in conv], cfg.dedup_tol) if len(g) > 1]
    if dup:
        offenders = sorted({conv[i] for g in dup for i in g})
        diags.append(f"possible path jumping on paths {offenders}; re-tracking with step <= {cfg.rerun_step}")
        slow = replace(cfg, initial_step=cfg.rerun_step)
        for k in offenders:
            paths[k] = track_path(H, starts[k], slow, k, trace)
        conv = converged()
        dup = [g for g in cluster_points([paths[k].x for k in conv], cfg.dedup_tol) if len(g) > 1]
        if dup:
            diags.append(f"{sum(len(g) for g in dup)} endpoints coincide after re-tracking: "
                         "suspected multiple roots")
    for p in paths:
        # a path that stalls while sitting on an approximate root usually ends at a singular one
        if p.message.startswith("step underflow") and backward_error(H.target, p.x) <= 1e-6:
            diags.append(f"path {p.path} stalled at t={p.t:.6g} next to an approximate root: "
                         "suspected singular solution")
    keep = []
    for g in cluster_points([paths[k].x for k in conv], cfg.dedup_tol):
        keep.append(conv[min(g)])
    sols = []
    for k in sorted(keep):
        s = make_solution(H.target, paths[k].x, f"homotopy:path{k}", cfg.real_tol)
        if not accept(H.target, s, cfg.residual_tol):
            diags.append(f"path {k} endpoint rejected: residual {s.residual:.2e}")
            continue
        sols.append(s)
    stats = {
        "paths": len(paths),
        "converged": sum(p.status == "converged" for p in paths),
        "diverged": sum(p.status == "diverged" for p in paths),
        "failed": sum(p.status == "failed" for p in paths),
        "gamma": [H.gamma.real, H.gamma.imag],
        "steps": sum(p.steps for p in paths),
    }
    out = SolutionSet(sols, F.names, diags, stats)
    if full:
        return HomotopyResult(out, paths)
    return out
