"""Classical stroboscopic dynamics of the coupled kicked spins on S^2 x S^2.

State layout: a spin pair is an array whose last axis holds the six
components ``(Sx, Sy, Sz, Lx, Ly, Lz)`` of the two *unit* vectors; any number
of leading batch axes is allowed.  One kick period maps

    S -> Rz(a) Rx(gamma r Lx) S,      L -> Rz(a) Rx(gamma Sx) L,

with both x-rotation angles taken from the pre-kick components.  The three
dimensionless parameters are the free-rotation angle ``a``, the scaled
coupling ``gamma = c |S|`` and the magnitude ratio ``r = |L|/|S| >= 1``.

Canonical coordinates are the normalized chart ``(Sz, phi_s, Lz, phi_l)``
with ``Sz, Lz`` in [-1, 1]; the invariant measure is uniform in these four
variables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ClassicalParams",
    "FixedPointClass",
    "RegimeScanResult",
    "map_step",
    "angles_to_state",
    "state_to_canonical",
    "canonical_to_state",
    "canonical_map_step",
    "tangent_map",
    "tangent_apply",
    "fixed_point_state",
    "fixed_point_eigenvalues",
    "characteristic_poly",
    "parallel_instability_onset",
    "lyapunov_exponent",
    "regime_scan",
]

PARALLEL = "parallel"
ANTIPARALLEL = "antiparallel"
FixedPointClass = str  # one of PARALLEL, ANTIPARALLEL


@dataclass(frozen=True)
class ClassicalParams:
    """Map parameters (a, gamma, r); a in [0, 2pi), r >= 1."""

    a: float
    gamma: float
    r: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.a < 2.0 * np.pi:
            raise ValueError(f"rotation angle a={self.a} outside [0, 2*pi)")
        if self.r < 1.0:
            raise ValueError(f"magnitude ratio r={self.r} must be >= 1")
        if not np.isfinite(self.gamma):
            raise ValueError("coupling gamma must be finite")


def _split(x):
    x = np.asarray(x, dtype=float)
    return (x[..., 0], x[..., 1], x[..., 2], x[..., 3], x[..., 4], x[..., 5])


def _map_cols(sx, sy, sz, lx, ly, lz, p: ClassicalParams, renormalize=True):
    """Kernel for one kick on component arrays (any matching shapes)."""
    ca, sa = np.cos(p.a), np.sin(p.a)
    alpha = (p.gamma * p.r) * lx   # x-rotation angle of S, from pre-kick Lx
    beta = p.gamma * sx            # x-rotation angle of L, from pre-kick Sx
    cal, sal = np.cos(alpha), np.sin(alpha)
    cbe, sbe = np.cos(beta), np.sin(beta)

    syr = sy * cal - sz * sal
    szr = sz * cal + sy * sal
    lyr = ly * cbe - lz * sbe
    lzr = lz * cbe + ly * sbe

    nsx = sx * ca - syr * sa
    nsy = syr * ca + sx * sa
    nlx = lx * ca - lyr * sa
    nly = lyr * ca + lx * sa

    if renormalize:
        ns = np.sqrt(nsx * nsx + nsy * nsy + szr * szr)
        nl = np.sqrt(nlx * nlx + nly * nly + lzr * lzr)
        return nsx / ns, nsy / ns, szr / ns, nlx / nl, nly / nl, lzr / nl
    return nsx, nsy, szr, nlx, nly, lzr


def map_step(x, p: ClassicalParams, renormalize: bool = True):
    """One kick period of the six-component stroboscopic map.

    With ``renormalize`` (the default) both unit vectors are rescaled to
    norm 1 after the step, which pins down rounding drift over 1e5-step runs.
    The update itself is an exact pair of rotations, so the rescaling only
    removes float noise.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    cols = _map_cols(*_split(x), p, renormalize=renormalize)
    for i in range(6):
        out[..., i] = cols[i]
    return out


# ---------------------------------------------------------------------------
# coordinate charts


def angles_to_state(theta_s, phi_s, theta_l, phi_l):
    """Unit spin pair from spherical angles (radians)."""
    theta_s, phi_s, theta_l, phi_l = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (theta_s, phi_s, theta_l, phi_l))
    )
    out = np.empty(theta_s.shape + (6,))
    out[..., 0] = np.sin(theta_s) * np.cos(phi_s)
    out[..., 1] = np.sin(theta_s) * np.sin(phi_s)
    out[..., 2] = np.cos(theta_s)
    out[..., 3] = np.sin(theta_l) * np.cos(phi_l)
    out[..., 4] = np.sin(theta_l) * np.sin(phi_l)
    out[..., 5] = np.cos(theta_l)
    return out if out.shape != (6,) else out.reshape(6)


def state_to_canonical(x):
    """Normalized canonical chart (Sz, phi_s, Lz, phi_l), phi in [0, 2pi).

    Returns ``(canonical, at_pole)``: at a pole the azimuth is undefined and
    is reported as 0.0 with the corresponding flag set.
    """
    x = np.asarray(x, dtype=float)
    sx, sy, sz, lx, ly, lz = _split(x)
    phi_s = np.mod(np.arctan2(sy, sx), 2.0 * np.pi)
    phi_l = np.mod(np.arctan2(ly, lx), 2.0 * np.pi)
    pole_s = (sx == 0.0) & (sy == 0.0)
    pole_l = (lx == 0.0) & (ly == 0.0)
    canon = np.stack([sz, phi_s, lz, phi_l], axis=-1)
    return canon, np.stack([pole_s, pole_l], axis=-1)


def canonical_to_state(c):
    """Inverse of :func:`state_to_canonical`."""
    c = np.asarray(c, dtype=float)
    sz, phi_s, lz, phi_l = c[..., 0], c[..., 1], c[..., 2], c[..., 3]
    rho_s = np.sqrt(np.maximum(1.0 - sz * sz, 0.0))
    rho_l = np.sqrt(np.maximum(1.0 - lz * lz, 0.0))
    out = np.empty(c.shape[:-1] + (6,))
    out[..., 0] = rho_s * np.cos(phi_s)
    out[..., 1] = rho_s * np.sin(phi_s)
    out[..., 2] = sz
    out[..., 3] = rho_l * np.cos(phi_l)
    out[..., 4] = rho_l * np.sin(phi_l)
    out[..., 5] = lz
    return out


def canonical_map_step(c, p: ClassicalParams):
    """One kick expressed in the canonical chart (used for measure checks)."""
    return state_to_canonical(map_step(canonical_to_state(c), p))[0]


# ---------------------------------------------------------------------------
# tangent dynamics


def tangent_map(x, p: ClassicalParams):
    """Jacobian M = dF/dx of the six update equations at x (shape (...,6,6)).

    This is the derivative of the raw mapping equations (no renormalization);
    on the spin spheres it coincides with the physical tangent dynamics.
    """
    x = np.asarray(x, dtype=float)
    sx, sy, sz, lx, ly, lz = _split(x)
    ca, sa = np.cos(p.a), np.sin(p.a)
    gr = p.gamma * p.r
    alpha = gr * lx
    beta = p.gamma * sx
    cal, sal = np.cos(alpha), np.sin(alpha)
    cbe, sbe = np.cos(beta), np.sin(beta)
    syr = sy * cal - sz * sal
    szr = sz * cal + sy * sal
    lyr = ly * cbe - lz * sbe
    lzr = lz * cbe + ly * sbe

    m = np.zeros(x.shape[:-1] + (6, 6))
    # S' rows
    m[..., 0, 0] = ca
    m[..., 0, 1] = -cal * sa
    m[..., 0, 2] = sal * sa
    m[..., 0, 3] = gr * szr * sa
    m[..., 1, 0] = sa
    m[..., 1, 1] = cal * ca
    m[..., 1, 2] = -sal * ca
    m[..., 1, 3] = -gr * szr * ca
    m[..., 2, 1] = sal
    m[..., 2, 2] = cal
    m[..., 2, 3] = gr * syr
    # L' rows
    m[..., 3, 3] = ca
    m[..., 3, 4] = -cbe * sa
    m[..., 3, 5] = sbe * sa
    m[..., 3, 0] = p.gamma * lzr * sa
    m[..., 4, 3] = sa
    m[..., 4, 4] = cbe * ca
    m[..., 4, 5] = -sbe * ca
    m[..., 4, 0] = -p.gamma * lzr * ca
    m[..., 5, 4] = sbe
    m[..., 5, 5] = cbe
    m[..., 5, 0] = p.gamma * lyr
    return m


def _tangent_apply_cols(state_cols, v_cols, p: ClassicalParams):
    """Apply the tangent map at `state_cols` to displacement columns, no 6x6 build."""
    sx, sy, sz, lx, ly, lz = state_cols
    dsx, dsy, dsz, dlx, dly, dlz = v_cols
    ca, sa = np.cos(p.a), np.sin(p.a)
    gr = p.gamma * p.r
    cal, sal = np.cos(gr * lx), np.sin(gr * lx)
    cbe, sbe = np.cos(p.gamma * sx), np.sin(p.gamma * sx)
    syr = sy * cal - sz * sal
    szr = sz * cal + sy * sal
    lyr = ly * cbe - lz * sbe
    lzr = lz * cbe + ly * sbe

    dsyr = dsy * cal - dsz * sal - gr * szr * dlx
    dszr = dsz * cal + dsy * sal + gr * syr * dlx
    dlyr = dly * cbe - dlz * sbe - p.gamma * lzr * dsx
    dlzr = dlz * cbe + dly * sbe + p.gamma * lyr * dsx
    return (
        dsx * ca - dsyr * sa,
        dsyr * ca + dsx * sa,
        dszr,
        dlx * ca - dlyr * sa,
        dlyr * ca + dlx * sa,
        dlzr,
    )


def tangent_apply(x, v, p: ClassicalParams):
    """M(x) @ v without materializing the Jacobian; batched like map_step."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    out = np.empty(np.broadcast_shapes(x.shape, v.shape))
    cols = _tangent_apply_cols(_split(x), _split(v), p)
    for i in range(6):
        out[..., i] = cols[i]
    return out


# ---------------------------------------------------------------------------
# trivial fixed points


def fixed_point_state(kind: FixedPointClass):
    """A pole fixed point: both spins up (parallel) or S up / L down (antiparallel)."""
    if kind == PARALLEL:
        return np.array([0.0, 0.0, 1.0, 0.0, 0.0, 1.0])
    if kind == ANTIPARALLEL:
        return np.array([0.0, 0.0, 1.0, 0.0, 0.0, -1.0])
    raise ValueError(f"unknown fixed point class {kind!r}")


def characteristic_poly(xi, p: ClassicalParams, kind: FixedPointClass):
    """[xi^2 - 2 xi cos a + 1]^2 -/+ xi^2 gamma^2 r sin^2 a (parallel/antiparallel)."""
    sign = -1.0 if kind == PARALLEL else 1.0
    quad = xi * xi - 2.0 * np.cos(p.a) * xi + 1.0
    return quad * quad + sign * xi * xi * p.gamma**2 * p.r * np.sin(p.a) ** 2


def fixed_point_eigenvalues(p: ClassicalParams, kind: FixedPointClass):
    """The four non-trivial tangent-map eigenvalues at a pole fixed point.

    Roots of the quartic characteristic polynomial; the two trivial unit
    eigenvalues along the sphere normals are suppressed.
    """
    if kind not in (PARALLEL, ANTIPARALLEL):
        raise ValueError(f"unknown fixed point class {kind!r}")
    sign = -1.0 if kind == PARALLEL else 1.0
    c = np.cos(p.a)
    coeffs = [
        1.0,
        -4.0 * c,
        4.0 * c * c + 2.0 + sign * p.gamma**2 * p.r * np.sin(p.a) ** 2,
        -4.0 * c,
        1.0,
    ]
    return np.roots(coeffs)


def parallel_instability_onset(a: float, r: float, gamma_max: float = 10.0, tol: float = 1e-9):
    """Smallest gamma > 0 at which the parallel fixed point loses stability.

    Bisects on max|xi| > 1 + tol.  Returns ``nan`` if the point is still
    stable at ``gamma_max``.
    """
    def unstable(g):
        xi = fixed_point_eigenvalues(ClassicalParams(a, g, r), PARALLEL)
        return np.max(np.abs(xi)) > 1.0 + tol

    lo, hi = 0.0, gamma_max
    if not unstable(hi):
        return float("nan")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if unstable(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Lyapunov exponents


def lyapunov_exponent(x0, p: ClassicalParams, n_steps: int, renorm_every: int = 1):
    """Largest Lyapunov exponent via tangent-vector stretching.

    The displacement starts as the unit vector along dSx, evolves with the
    tangent map along the fiducial trajectory, and its 1-norm stretching
    factor is accumulated in log space with periodic renormalization:
    lambda = (1/N) * sum of log per-step 1-norm growth.

    ``x0`` may be a single state of shape (6,) or a batch (B, 6); the return
    is a float or a (B,) array accordingly.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if renorm_every < 1:
        raise ValueError("renorm_every must be >= 1")
    x0 = np.asarray(x0, dtype=float)
    single = x0.ndim == 1
    x = np.atleast_2d(x0).copy()
    b = x.shape[0]
    state = _split(x)
    v = [np.zeros(b) for _ in range(6)]
    v[0] = np.ones(b)
    log_sum = np.zeros(b)
    since_renorm = 0
    for _ in range(n_steps):
        v = list(_tangent_apply_cols(state, v, p))
        state = _map_cols(*state, p)
        since_renorm += 1
        if since_renorm == renorm_every:
            d = sum(np.abs(comp) for comp in v)
            log_sum += np.log(d)
            for i in range(6):
                v[i] = v[i] / d
            since_renorm = 0
    if since_renorm:
        d = sum(np.abs(comp) for comp in v)
        log_sum += np.log(d)
    if not np.all(np.isfinite(log_sum)):
        raise FloatingPointError("non-finite tangent growth in Lyapunov accumulation")
    lam = log_sum / n_steps
    return float(lam[0]) if single else lam


@dataclass(frozen=True)
class RegimeScanResult:
    """Per-sample Lyapunov exponents over canonically sampled initial conditions."""

    points: np.ndarray        # (n, 4) canonical coordinates (Sz, phi_s, Lz, phi_l)
    lambdas: np.ndarray       # (n,)
    lambda_threshold: float
    n_steps: int
    seed: int

    @property
    def chaotic_mask(self) -> np.ndarray:
        return self.lambdas > self.lambda_threshold

    @property
    def chaotic_fraction(self) -> float:
        return float(np.mean(self.chaotic_mask))


def regime_scan(
    p: ClassicalParams,
    n_samples: int,
    n_steps: int = 10_000,
    lambda_threshold: float = 0.005,
    seed: int = 0,
) -> RegimeScanResult:
    """Classify randomly sampled initial conditions as chaotic or regular.

    Sampling is uniform in the canonical measure d(Sz) d(phi_s) d(Lz) d(phi_l);
    a trajectory counts as chaotic when its n_steps-step Lyapunov estimate
    exceeds ``lambda_threshold``.  Deterministic for a given seed.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    canon = np.empty((n_samples, 4))
    canon[:, 0] = rng.uniform(-1.0, 1.0, n_samples)
    canon[:, 1] = rng.uniform(0.0, 2.0 * np.pi, n_samples)
    canon[:, 2] = rng.uniform(-1.0, 1.0, n_samples)
    canon[:, 3] = rng.uniform(0.0, 2.0 * np.pi, n_samples)
    lams = lyapunov_exponent(canonical_to_state(canon), p, n_steps)
    return RegimeScanResult(
        points=canon,
        lambdas=np.asarray(lams),
        lambda_threshold=lambda_threshold,
        n_steps=n_steps,
        seed=seed,
    )
