"""Numerical solver for the 27 lines of a cubic surface, one chart at a time.

The four chart equations (coefficients against the 35 monomials of degree
at most 3 in the chart parameters) form a square polynomial system with 27
isolated complex solutions for a smooth surface whose lines are all visible
in the chart.  Solving runs in two stages:

* Once per process, the chart system of a random complex surface is solved
  from scratch with a total-degree homotopy (81 cube-root start paths,
  random gamma).  Paths heading to infinity diverge and are discarded; the
  attempt is retried with fresh randomness until exactly 27 distinct finite
  solutions remain, and the result is cached.

* Every subsequent surface is reached from the cached start by a parameter
  homotopy.  The chart equations are linear in the surface coefficients, so
  the segment gamma*(1-t)*G + t*F consists of chart systems of complex
  cubic surfaces; for a random complex gamma it misses the degenerate ones
  with probability one, and all 27 paths stay finite and distinct.  This
  stage tracks in homogeneous coordinates pinned to a random affine patch:
  a root whose chart coordinates blow up mid-path (the line momentarily
  almost leaves the chart) just passes near the hyperplane at infinity with
  bounded coordinates instead of wrecking the step control.

Both stages share a batched predictor-corrector core: Euler predictor, up
to three Newton correctors, per-path adaptive steps run in lockstep, an
anti-jump guard that rejects a step when the total correction is
comparable to the predicted displacement, and a backward-error acceptance
for steps whose residual has reached the roundoff floor.  The solver
either returns exactly 27 distinct solutions or raises SolveFailure so the
caller can rerandomize and retry.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import SolveFailure
from .surfaces import _ABCD_DERIV, ABCD_MONOMIALS, CHART_TABLES

_EXPONENTS = np.array(ABCD_MONOMIALS, dtype=np.int64).T  # (4, 35)

# the same monomials homogenized to degree 3 with a fifth variable
_EXP3 = np.array(
    [m + (3 - sum(m),) for m in ABCD_MONOMIALS], dtype=np.int64
).T  # (5, 35)

_DEG2 = [
    (e0, e1, e2, e3, 2 - e0 - e1 - e2 - e3)
    for e0 in range(3)
    for e1 in range(3 - e0)
    for e2 in range(3 - e0 - e1)
    for e3 in range(3 - e0 - e1 - e2)
]
_DEG2_INDEX = {m: i for i, m in enumerate(_DEG2)}
_EXP2 = np.array(_DEG2, dtype=np.int64).T  # (5, 15)

_MAX_STEPS = 4000
_DT_MIN = 1e-8
_DIVERGED = 1e6


def _deriv_mats() -> np.ndarray:
    mats = np.zeros((4, 35, 35), dtype=float)
    for v in range(4):
        for src, dst, mult in _ABCD_DERIV[v]:
            mats[v, dst, src] = mult
    return mats


_DERIV_MATS = _deriv_mats()


def _deriv_tensor() -> np.ndarray:
    """(5, 15, 35) maps of homogeneous coefficients to partial derivatives."""
    mats = np.zeros((5, 15, 35), dtype=float)
    monos = [tuple(_EXP3[:, m]) for m in range(_EXP3.shape[1])]
    for v in range(5):
        for m, e in enumerate(monos):
            if e[v]:
                lowered = tuple(x - 1 if i == v else x for i, x in enumerate(e))
                mats[v, _DEG2_INDEX[lowered], m] = e[v]
    return mats


_DERIV5 = _deriv_tensor()


def _mono_matrix(pts: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """(n_monomials, L) monomial values at an (L, n_vars) batch of points."""
    zt = pts.T
    p2 = zt * zt
    powers = np.stack([np.ones_like(zt), zt, p2, p2 * zt])  # (4, n_vars, L)
    out = powers[exps[0], 0]
    for v in range(1, exps.shape[0]):
        out = out * powers[exps[v], v]
    return out


class _AffineSystem:
    """Values and Jacobians of a 4-equation chart system on point batches."""

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = np.asarray(coeffs, dtype=complex)  # (4, 35)
        dc = np.einsum("em,vnm->evn", self.coeffs, _DERIV_MATS)
        self.deriv_flat = dc.reshape(16, 35)

    def values(self, pts: np.ndarray) -> np.ndarray:
        return (self.coeffs @ _mono_matrix(pts, _EXPONENTS)).T  # (L, 4)

    def values_and_jacobians(self, pts: np.ndarray, mono=None):
        m = _mono_matrix(pts, _EXPONENTS) if mono is None else mono
        vals = (self.coeffs @ m).T
        jacs = (self.deriv_flat @ m).reshape(4, 4, -1).transpose(2, 0, 1)
        return vals, jacs


class _ProjectiveSystem:
    """The same chart system in homogeneous coordinates on C^5 batches."""

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = np.asarray(coeffs, dtype=complex)  # (4, 35)
        dc = np.einsum("em,vnm->evn", self.coeffs, _DERIV5)
        self.deriv_flat = dc.reshape(20, 15)

    def values(self, pts: np.ndarray, mono=None) -> np.ndarray:
        m = _mono_matrix(pts, _EXP3) if mono is None else mono
        return (self.coeffs @ m).T  # (L, 4)

    def values_and_jacobians(self, pts: np.ndarray, mono=None, mono2=None):
        vals = self.values(pts, mono)
        m2 = _mono_matrix(pts, _EXP2) if mono2 is None else mono2
        jacs = (self.deriv_flat @ m2).reshape(4, 5, -1).transpose(2, 0, 1)
        return vals, jacs


def _batched_solve(jac: np.ndarray, rhs: np.ndarray):
    """Solve per-path linear systems; singular paths get a failure flag."""
    try:
        return np.linalg.solve(jac, rhs[..., None])[..., 0], None
    except np.linalg.LinAlgError:
        n = jac.shape[0]
        out = np.zeros_like(rhs)
        bad = np.zeros(n, dtype=bool)
        for i in range(n):
            try:
                out[i] = np.linalg.solve(jac[i], rhs[i])
            except np.linalg.LinAlgError:
                bad[i] = True
        return out, bad


def _distinct(rows, tol: float = 1e-6) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for row in rows:
        dup = False
        for other in kept:
            scale = 1.0 + max(np.abs(row).max(), np.abs(other).max())
            if np.abs(row - other).max() < tol * scale:
                dup = True
                break
        if not dup:
            kept.append(row)
    return kept


def _track(h_fn, z0: np.ndarray, dt0: float, scale_fn, stop_at_27: bool):
    """Lockstep adaptive path tracking from t=0 to t=1.

    h_fn(pts, ts) returns (values, Jacobians, dH/dt) of the homotopy and
    scale_fn(ts) the magnitude of its coefficients, used to accept steps
    whose residual has hit the roundoff floor even though the Newton
    correction stagnates (which happens for roots with large coordinates).
    Returns the final points and the mask of paths that reached t=1.
    """
    z = z0.copy()
    n = z.shape[0]
    t = np.zeros(n)
    dt = np.full(n, dt0)
    alive = np.ones(n, dtype=bool)
    done = np.zeros(n, dtype=bool)
    n_done_checked = -1

    for _ in range(_MAX_STEPS):
        active = np.flatnonzero(alive & ~done)
        if active.size == 0:
            return z, done
        za, ta = z[active], t[active]
        _, jacs, dh_dt = h_fn(za, ta)
        dz, bad = _batched_solve(jacs, -dh_dt)
        ok = np.ones(active.size, dtype=bool)
        if bad is not None:
            ok &= ~bad
            dz[bad] = 0.0
        t_new = np.minimum(ta + dt[active], 1.0)
        step = (t_new - ta)[:, None]
        pred = za + dz * step
        z_try = pred

        corr = np.full(active.size, np.inf)
        resid = np.full(active.size, np.inf)
        for _ in range(3):
            vals, jacs, _unused = h_fn(z_try, t_new)
            resid = np.abs(vals).max(axis=1)
            delta, bad2 = _batched_solve(jacs, -vals)
            if bad2 is not None:
                ok &= ~bad2
                delta[bad2] = 0.0
            z_try = z_try + delta
            corr = np.abs(delta).max(axis=1) / (1.0 + np.abs(z_try).max(axis=1))
            if corr[ok].size == 0 or corr[ok].max() < 1e-8:
                break
        floor = scale_fn(t_new) * (1.0 + np.abs(z_try).max(axis=1)) ** 3
        at_floor = resid < 1e-9 * floor
        ok &= (corr < 1e-7) | at_floor
        ok &= np.isfinite(z_try).all(axis=1)
        # anti-jump guard: total correction must stay below the prediction.
        # Paths at the roundoff floor are exempt: there the correction is
        # dominated by noise and the guard would reject every step.
        pred_len = np.abs(dz * step).max(axis=1)
        drift = np.abs(z_try - pred).max(axis=1)
        guard = drift <= 0.75 * pred_len + 1e-9 * (1.0 + np.abs(z_try).max(axis=1))
        ok &= guard | at_floor

        adv = active[ok]
        z[adv] = z_try[ok]
        t[adv] = t_new[ok]
        dt[adv] = np.minimum(dt[adv] * 1.4, 0.12)
        done[adv] = t[adv] >= 1.0
        fail = active[~ok]
        dt[fail] *= 0.5
        alive[fail] &= dt[fail] >= _DT_MIN
        big = np.abs(z[active]).max(axis=1) > _DIVERGED
        alive[active[big]] = False
        done[active[big]] = False

        if stop_at_27:
            nd = int(done.sum())
            if nd >= 27 and nd != n_done_checked:
                n_done_checked = nd
                if len(_distinct(z[done])) >= 27:
                    return z, done
    raise SolveFailure("path tracking did not settle within the step budget")


def _total_degree_solve(coeffs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Solve a chart system from scratch with 81 cube-root start paths."""
    target = _AffineSystem(coeffs)
    c = np.exp(2j * np.pi * rng.random(4))
    gamma = np.exp(2j * np.pi * rng.random())
    roots = np.power(c, 1.0 / 3.0)
    omega = np.exp(2j * np.pi / 3.0)
    starts = np.empty((81, 4), dtype=complex)
    for idx in range(81):
        k = idx
        for v in range(4):
            starts[idx, v] = roots[v] * omega ** (k % 3)
            k //= 3

    def h_fn(pts, ts):
        tv, tj = target.values_and_jacobians(pts)
        sv = pts**3 - c
        w = gamma * (1.0 - ts)
        vals = w[:, None] * sv + ts[:, None] * tv
        jacs = ts[:, None, None] * tj
        jacs[:, range(4), range(4)] += 3.0 * w[:, None] * pts**2
        return vals, jacs, tv - gamma * sv

    cmax = np.abs(target.coeffs).max()

    def scale_fn(ts):
        return (1.0 - ts) * 2.0 + ts * cmax

    z, done = _track(h_fn, starts, 0.03, scale_fn, stop_at_27=True)
    if not done.any():
        raise SolveFailure("no path reached the target system")
    zf = z[done]
    # polish endpoints with Newton on the target, filter, deduplicate
    for _ in range(30):
        vals, jacs = target.values_and_jacobians(zf)
        delta, bad = _batched_solve(jacs, -vals)
        if bad is not None:
            delta[bad] = 0.0
        zf = zf + delta
        if (np.abs(delta).max(axis=1) / (1.0 + np.abs(zf).max(axis=1)) < 1e-14).all():
            break
    finite = np.isfinite(zf).all(axis=1) & (np.abs(zf).max(axis=1) < _DIVERGED)
    zf = zf[finite]
    vals = target.values(zf)
    scale = (1.0 + np.abs(zf).max(axis=1, initial=0.0)) ** 3 * (1.0 + cmax)
    zf = zf[np.abs(vals).max(axis=1, initial=0.0) < 1e-8 * scale]
    kept = _distinct(zf)
    if len(kept) != 27:
        raise SolveFailure(f"tracked {len(kept)} distinct solutions, expected 27")
    return np.array(kept)


@lru_cache(maxsize=None)
def _generic_start(chart: int = 0):
    """The chart system of a random complex surface with its 27 solutions.

    Solved once per chart with a total-degree homotopy and cached.  The
    start must come from the same 20-parameter family as the targets:
    within the family every generic member has exactly 27 finite roots, so
    parameter homotopy paths between members neither escape to infinity
    nor collide for a random complex gamma.
    """
    table = CHART_TABLES[chart].astype(float)
    seed = np.random.SeedSequence(20230811 + chart)
    for child in seed.spawn(12):
        rng = np.random.default_rng(child)
        w = rng.normal(size=20) + 1j * rng.normal(size=20)
        coeffs = np.tensordot(table, w, axes=([1], [0]))
        try:
            sols = _total_degree_solve(coeffs, rng)
        except SolveFailure:
            continue
        return coeffs, sols
    raise SolveFailure("could not bootstrap a generic start system")


def solve_chart_homogeneous(
    coeffs, rng: np.random.Generator, chart: int = 0
) -> np.ndarray:
    """All 27 homogeneous solutions of a chart system, as a (27, 5) array.

    `coeffs` must be the (4, 35) system of the given chart index for some
    cubic surface, so that the straight segment to the cached start stays
    inside the one family.  Each returned row is scaled by its largest
    entry; rows with a small last coordinate describe lines invisible in
    the chart.  Raises SolveFailure when tracking does not end with exactly
    27 distinct solutions (callers typically rerandomize and retry).
    """
    g_coeffs, g_sols = _generic_start(chart)
    start = _ProjectiveSystem(g_coeffs)
    target = _ProjectiveSystem(coeffs)
    gamma = np.exp(2j * np.pi * rng.random())

    z0 = np.concatenate([g_sols, np.ones((27, 1), dtype=complex)], axis=1)
    for _ in range(16):
        patch = rng.normal(size=5) + 1j * rng.normal(size=5)
        patch /= np.linalg.norm(patch)
        gauge = z0 @ patch
        if (np.abs(gauge) > 1e-3 * np.abs(z0).max(axis=1)).all():
            break
    z0 = z0 / gauge[:, None]

    def h_fn(pts, ts):
        m3 = _mono_matrix(pts, _EXP3)
        m2 = _mono_matrix(pts, _EXP2)
        sv, sj = start.values_and_jacobians(pts, m3, m2)
        tv, tj = target.values_and_jacobians(pts, m3, m2)
        w = gamma * (1.0 - ts)
        rows = w[:, None] * sv + ts[:, None] * tv
        jrows = w[:, None, None] * sj + ts[:, None, None] * tj
        vals = np.concatenate([rows, (pts @ patch - 1.0)[:, None]], axis=1)
        jacs = np.concatenate(
            [jrows, np.broadcast_to(patch, (pts.shape[0], 1, 5))], axis=1
        )
        dh_dt = np.concatenate(
            [tv - gamma * sv, np.zeros((pts.shape[0], 1), dtype=complex)], axis=1
        )
        return vals, jacs, dh_dt

    smax = np.abs(start.coeffs).max()
    tmax = np.abs(target.coeffs).max()

    def scale_fn(ts):
        return (1.0 - ts) * smax + ts * tmax

    z, done = _track(h_fn, z0, 0.05, scale_fn, stop_at_27=False)
    if not done.all():
        raise SolveFailure(f"only {int(done.sum())} of 27 paths finished")

    # polish on the patched target system alone
    zf = z
    for _ in range(30):
        vals, jacs = target.values_and_jacobians(zf)
        full = np.concatenate([vals, (zf @ patch - 1.0)[:, None]], axis=1)
        jfull = np.concatenate(
            [jacs, np.broadcast_to(patch, (zf.shape[0], 1, 5))], axis=1
        )
        delta, bad = _batched_solve(jfull, -full)
        if bad is not None:
            delta[bad] = 0.0
        zf = zf + delta
        if (np.abs(delta).max(axis=1) / (1.0 + np.abs(zf).max(axis=1)) < 1e-13).all():
            break
    if not np.isfinite(zf).all():
        raise SolveFailure("endpoint polishing produced non-finite values")
    norms = np.abs(zf).max(axis=1)
    resid = np.abs(target.values(zf)).max(axis=1)
    if (resid > 1e-8 * (1.0 + tmax) * norms**3).any():
        raise SolveFailure("an endpoint does not satisfy the target system")
    kept = _distinct(zf)
    if len(kept) != 27:
        raise SolveFailure(f"tracked {len(kept)} distinct solutions, expected 27")
    out = np.array(kept)
    lead = np.take_along_axis(
        out, np.argmax(np.abs(out), axis=1)[:, None], axis=1
    )
    return out / lead


def solve_chart_system(coeffs, rng: np.random.Generator, chart: int = 0) -> np.ndarray:
    """All 27 affine solutions of a generic chart system, as a (27, 4) array.

    Raises SolveFailure when a solution lies at (or numerically near) the
    chart's hyperplane at infinity, i.e. some line of the surface is not
    visible in this chart.
    """
    hom = solve_chart_homogeneous(coeffs, rng, chart)
    w = hom[:, 4]
    if (np.abs(w) < 1e-9 * np.abs(hom).max(axis=1)).any():
        raise SolveFailure("a solution lies at the chart's hyperplane at infinity")
    return hom[:, :4] / w[:, None]
