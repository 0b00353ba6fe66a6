"""Classical Liouville dynamics by Monte Carlo trajectory ensembles.

The initial phase-space density for each spin is matched to the quantum
coherent state of quantum number j: on the unit sphere, polarized along +z,

    rho(Jz~, phi) ~ exp[-(1 - Jz~)/sigma^2],   sigma^2 = 1 / (2 sqrt(j(j+1))),

then rigidly rotated to the polarization direction (theta0, phi0).  This
density is periodic under 2 pi rotation and reproduces the quantum ratio
<J_z>/<J_x^2>; its low moments are

    <J_z>_c = |J| G(sigma^2),      <J_x^2>_c = |J|^2 sigma^2 G(sigma^2),

with |J| = sqrt(j(j+1)).  Sampling uses the exact inverse CDF of the
truncated exponential in Jz~, so no rejection step is needed.

Ensembles are propagated with the stroboscopic map; trajectories are
processed in fixed-size chunks drawn sequentially from one master-seeded
generator, which keeps memory bounded and output deterministic for a given
(seed, n_traj, chunk_size).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classical import ClassicalParams, _map_cols

__all__ = [
    "MatchedDensityParams",
    "Ensemble",
    "MomentSeries",
    "AppendixMoments",
    "VectorModelMC",
    "sigma2_for",
    "big_g",
    "matched_density",
    "sample_polarized",
    "initial_offset_jz",
    "build_ensemble",
    "ensemble_evolve",
    "evolve_states",
    "marginal_pz_classical",
    "appendix_moments",
    "vector_model_mc",
]


def sigma2_for(j: float) -> float:
    """Width parameter sigma^2 = 1/(2 sqrt(j(j+1))) matched to quantum number j."""
    if j < 0.5:
        raise ValueError("quantum number must be >= 1/2")
    return 1.0 / (2.0 * math.sqrt(j * (j + 1.0)))


def big_g(sigma2: float) -> float:
    """G(sigma^2) = [(1 + e^{-2/sigma^2}) / (1 - e^{-2/sigma^2})] - sigma^2.

    For sigma^2 below ~2.7e-3 the exponential underflows to zero and the
    expression reduces to the asymptotic 1 - sigma^2 branch exactly.
    """
    if sigma2 <= 0.0:
        raise ValueError("sigma2 must be positive")
    e = math.exp(-2.0 / sigma2)
    return (1.0 + e) / (1.0 - e) - sigma2


@dataclass(frozen=True)
class MatchedDensityParams:
    """Initial single-spin density: quantum number, width, polarization axis."""

    j: float
    theta0: float = 0.0
    phi0: float = 0.0
    sigma2: float = 0.0  # 0 means "use sigma2_for(j)"

    def __post_init__(self):
        if self.sigma2 == 0.0:
            object.__setattr__(self, "sigma2", sigma2_for(self.j))
        if self.sigma2 <= 0.0:
            raise ValueError("sigma2 must be positive")

    @property
    def j_mag(self) -> float:
        return math.sqrt(self.j * (self.j + 1.0))


def matched_density(j: float, theta0: float = 0.0, phi0: float = 0.0) -> MatchedDensityParams:
    return MatchedDensityParams(j=float(j), theta0=float(theta0), phi0=float(phi0))


def sample_polarized(params: MatchedDensityParams, rng: np.random.Generator, n: int):
    """Draw n unit vectors from the matched density, shape (n, 3).

    Inverse-CDF in z: with t = 1 - Jz~ truncated-exponentially distributed on
    [0, 2] with scale sigma^2, t = -sigma^2 log(1 - u (1 - e^{-2/sigma^2})).
    The azimuth is uniform; the cloud is then rotated by theta0 about y and
    phi0 about z.
    """
    s2 = params.sigma2
    trunc = -math.expm1(-2.0 / s2)  # 1 - e^{-2/sigma^2}
    u = rng.random(n)
    z = 1.0 + s2 * np.log1p(-u * trunc)
    np.clip(z, -1.0, 1.0, out=z)
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    rho = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    vec = np.empty((n, 3))
    vec[:, 0] = rho * np.cos(phi)
    vec[:, 1] = rho * np.sin(phi)
    vec[:, 2] = z
    ct, st = math.cos(params.theta0), math.sin(params.theta0)
    cp, sp = math.cos(params.phi0), math.sin(params.phi0)
    ry = np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]])
    rz = np.array([[cp, -sp, 0.0], [sp, cp, 0.0], [0.0, 0.0, 1.0]])
    return vec @ (rz @ ry).T


def initial_offset_jz(j: float) -> float:
    """Closed-form |<J_z> - <J_z>_c| at theta = 0: |j - sqrt(j(j+1)) G(sigma^2)|.

    Expands to 1/(8j) + O(j^-2) for the matched width.
    """
    s2 = sigma2_for(j)
    return abs(j - math.sqrt(j * (j + 1.0)) * big_g(s2))


@dataclass(frozen=True)
class Ensemble:
    """A reproducible trajectory ensemble on S^2 x S^2.

    Initial conditions are the product of two matched densities (one per
    spin).  States are generated lazily in chunks so that arbitrarily large
    ensembles run in bounded memory; `states` materializes everything and is
    meant for modest n_traj.
    """

    s_density: MatchedDensityParams
    l_density: MatchedDensityParams
    n_traj: int
    seed: int
    chunk_size: int = 1_000_000

    def __post_init__(self):
        if self.n_traj < 1:
            raise ValueError("n_traj must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")

    @property
    def mag_s(self) -> float:
        return self.s_density.j_mag

    @property
    def mag_l(self) -> float:
        return self.l_density.j_mag

    def iter_chunks(self):
        """Yield (n_chunk, 6-tuple of component arrays), deterministically."""
        rng = np.random.default_rng(self.seed)
        remaining = self.n_traj
        while remaining > 0:
            m = min(self.chunk_size, remaining)
            s_vec = sample_polarized(self.s_density, rng, m)
            l_vec = sample_polarized(self.l_density, rng, m)
            yield m, (
                np.ascontiguousarray(s_vec[:, 0]),
                np.ascontiguousarray(s_vec[:, 1]),
                np.ascontiguousarray(s_vec[:, 2]),
                np.ascontiguousarray(l_vec[:, 0]),
                np.ascontiguousarray(l_vec[:, 1]),
                np.ascontiguousarray(l_vec[:, 2]),
            )
            remaining -= m

    @property
    def states(self) -> np.ndarray:
        """All initial conditions as an (n_traj, 6) array."""
        return np.concatenate(
            [np.stack(cols, axis=1) for _, cols in self.iter_chunks()], axis=0
        )


def build_ensemble(
    s: float,
    l: float,
    theta_s: float,
    phi_s: float,
    theta_l: float,
    phi_l: float,
    n_traj: int,
    seed: int,
    chunk_size: int = 1_000_000,
) -> Ensemble:
    """Ensemble matched to coherent states of (s, l) polarized along the given angles."""
    return Ensemble(
        s_density=matched_density(s, theta_s, phi_s),
        l_density=matched_density(l, theta_l, phi_l),
        n_traj=n_traj,
        seed=seed,
        chunk_size=chunk_size,
    )


@dataclass(frozen=True)
class MomentSeries:
    """Per-kick normalized ensemble moments with Monte Carlo standard errors.

    ``*_tilde_mean`` are means of the unit-vector components <~J_i>_c; the
    normalized variance is 1 - |<~J>_c|^2 (the Casimir is exact trajectory by
    trajectory).  Standard errors on the variance come from the delta method
    applied to the mean-vector covariance.
    """

    mag_s: float
    mag_l: float
    n_traj: int
    kicks: np.ndarray = field(repr=False)
    s_tilde_mean: np.ndarray = field(repr=False)   # (K, 3)
    s_tilde_se: np.ndarray = field(repr=False)     # (K, 3)
    l_tilde_mean: np.ndarray = field(repr=False)
    l_tilde_se: np.ndarray = field(repr=False)
    var_norm_s: np.ndarray = field(repr=False)     # (K,)
    var_norm_s_se: np.ndarray = field(repr=False)
    var_norm_l: np.ndarray = field(repr=False)
    var_norm_l_se: np.ndarray = field(repr=False)


def _moments_from_sums(sum1, sum2, n):
    """Mean vector, per-component SE, normalized variance and its SE."""
    mu = sum1 / n                       # (K, 3)
    m2 = sum2 / n                       # (K, 3, 3) second moments
    cov_mean = (m2 - np.einsum("ka,kb->kab", mu, mu)) / n
    se = np.sqrt(np.maximum(np.einsum("kaa->ka", cov_mean), 0.0))
    var_norm = 1.0 - np.einsum("ka,ka->k", mu, mu)
    var_se = 2.0 * np.sqrt(np.maximum(np.einsum("ka,kab,kb->k", mu, cov_mean, mu), 0.0))
    return mu, se, var_norm, var_se


def ensemble_evolve(ens: Ensemble, p: ClassicalParams, n_kicks: int) -> MomentSeries:
    """Propagate every trajectory and record moments at kicks 0..n_kicks.

    Chunks are accumulated in a fixed order, so results are byte-identical
    across runs with the same (seed, n_traj, chunk_size).
    """
    if n_kicks < 0:
        raise ValueError("n_kicks must be >= 0")
    K = n_kicks + 1
    sum_s1 = np.zeros((K, 3))
    sum_s2 = np.zeros((K, 3, 3))
    sum_l1 = np.zeros((K, 3))
    sum_l2 = np.zeros((K, 3, 3))
    for m, cols in ens.iter_chunks():
        for n in range(K):
            svec = np.stack(cols[:3], axis=1)
            lvec = np.stack(cols[3:], axis=1)
            sum_s1[n] += svec.sum(axis=0)
            sum_s2[n] += svec.T @ svec
            sum_l1[n] += lvec.sum(axis=0)
            sum_l2[n] += lvec.T @ lvec
            if n < n_kicks:
                cols = _map_cols(*cols, p)
    n_traj = ens.n_traj
    s_mu, s_se, s_var, s_var_se = _moments_from_sums(sum_s1, sum_s2, n_traj)
    l_mu, l_se, l_var, l_var_se = _moments_from_sums(sum_l1, sum_l2, n_traj)
    return MomentSeries(
        mag_s=ens.mag_s,
        mag_l=ens.mag_l,
        n_traj=n_traj,
        kicks=np.arange(K),
        s_tilde_mean=s_mu,
        s_tilde_se=s_se,
        l_tilde_mean=l_mu,
        l_tilde_se=l_se,
        var_norm_s=s_var,
        var_norm_s_se=s_var_se,
        var_norm_l=l_var,
        var_norm_l_se=l_var_se,
    )


def evolve_states(ens: Ensemble, p: ClassicalParams, n_kicks: int) -> np.ndarray:
    """All trajectory states after n_kicks, as an (n_traj, 6) array."""
    out = []
    for _, cols in ens.iter_chunks():
        for _ in range(n_kicks):
            cols = _map_cols(*cols, p)
        out.append(np.stack(cols, axis=1))
    return np.concatenate(out, axis=0)


def marginal_pz_classical(states: np.ndarray, l: float, mag_l: float | None = None):
    """Discretize the L_z marginal into 2l+1 unit bins centered on m_l.

    ``states`` is an (n, 6) array of unit spin pairs; L_z = |L| Lz~ with
    |L| = sqrt(l(l+1)).  Values in the sliver |L_z| in (l, |L|] are clamped
    into the end bins.  Returned over descending m_l, matching the quantum
    marginal; entries sum to exactly 1.
    """
    dim = int(round(2 * l)) + 1
    mag = math.sqrt(l * (l + 1.0)) if mag_l is None else mag_l
    lz = mag * np.asarray(states)[..., 5].reshape(-1)
    idx = np.rint(l - lz).astype(np.int64)  # descending index i = l - m
    np.clip(idx, 0, dim - 1, out=idx)
    counts = np.bincount(idx, minlength=dim)
    return counts / counts.sum()


# ---------------------------------------------------------------------------
# the sphere-moment obstruction (vector-model closed forms)


@dataclass(frozen=True)
class AppendixMoments:
    """Quantum vs classical x-axis moments of a z-polarized state of spin j.

    No classical density on the sphere reproduces the quantum fourth moment;
    the closed forms quantify the obstruction: <J_x^4> = 3j^2/4 - j/4 against
    <J_x^4>_c = 3j^2/8, while the second moments agree at j/2.
    """

    j: float
    qm_jx2: float
    qm_jx4: float
    cl_jx2: float
    cl_jx4: float
    delta_jx4: float


def appendix_moments(j: float) -> AppendixMoments:
    if j < 0.5:
        raise ValueError("quantum number must be >= 1/2")
    return AppendixMoments(
        j=j,
        qm_jx2=j / 2.0,
        qm_jx4=3.0 * j * j / 4.0 - j / 4.0,
        cl_jx2=j / 2.0,
        cl_jx4=3.0 * j * j / 8.0,
        delta_jx4=abs(3.0 * j * j / 8.0 - j / 4.0),
    )


@dataclass(frozen=True)
class VectorModelMC:
    """Monte Carlo x-moments over the vector-model cone distribution."""

    j: float
    n_samples: int
    jx2: float
    jx2_se: float
    jx4: float
    jx4_se: float


def vector_model_mc(j: float, n_samples: int, seed: int) -> VectorModelMC:
    """Sample the vector-model density: fixed cone cos(theta0) = j/|J|, uniform phi.

    Checks the classical closed forms <J_x^2>_c = j/2, <J_x^4>_c = 3j^2/8 by
    direct simulation.
    """
    rng = np.random.default_rng(seed)
    mag = math.sqrt(j * (j + 1.0))
    sin_theta0 = math.sqrt(max(1.0 - (j / mag) ** 2, 0.0))
    jx = mag * sin_theta0 * np.cos(rng.uniform(0.0, 2.0 * np.pi, n_samples))
    jx2 = jx * jx
    jx4 = jx2 * jx2
    return VectorModelMC(
        j=j,
        n_samples=n_samples,
        jx2=float(jx2.mean()),
        jx2_se=float(jx2.std(ddof=1) / math.sqrt(n_samples)),
        jx4=float(jx4.mean()),
        jx4_se=float(jx4.std(ddof=1) / math.sqrt(n_samples)),
    )
