"""Exact quantum dynamics of two coupled kicked spins.

The system is a pair of spins S and L with one-kick unitary

    F = exp[-i a (S_z + L_z)] exp[-i c S_x L_x],

acting on the product basis |s,m_s> (x) |l,m_l>.  The interaction factor is
never built as a dense matrix; it is applied in the factored form

    exp(-i c S_x L_x) = (R_s (x) R_l) exp(-i c S_z L_z) (R_s (x) R_l)^dagger,

where R_j = exp(-i (pi/2) J_y), so one kick costs two subsystem matrix
multiplies plus two elementwise phase multiplies.

Conventions used throughout this package:

* basis states are ordered by descending magnetic number, m = j, j-1, ..., -j;
* rotation matrices are R^(j)(theta, phi) with matrix elements
  <j,m'|R|j,m> = exp(-i m' phi) d^(j)_{m',m}(theta);
* d^(j)(theta) is the real Wigner rotation matrix for exp(-i theta J_y).

All angles are radians; hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "SpinQuantum",
    "QuantumState",
    "FloquetOperator",
    "Observables",
    "QuantumMomentSeries",
    "wigner_d",
    "rotation_matrix",
    "coherent_state",
    "product_state",
    "build_floquet",
    "evolve",
    "evolve_series",
    "observables",
    "marginal_pz",
    "expect_ladder",
    "expect_jz",
    "expect_jx2",
]


def _as_j(j) -> float:
    """Coerce a quantum number (or SpinQuantum) to a validated float j."""
    if isinstance(j, SpinQuantum):
        return j.j
    jf = float(j)
    twoj = 2.0 * jf
    if jf < 0 or abs(twoj - round(twoj)) > 1e-9:
        raise ValueError(f"invalid spin quantum number j={j!r}: 2j must be a non-negative integer")
    return round(twoj) / 2.0


def dim_of(j) -> int:
    """Hilbert-space dimension 2j+1 of a single spin."""
    return int(round(2.0 * _as_j(j))) + 1


def m_values(j) -> np.ndarray:
    """Magnetic numbers in descending order, m = j, j-1, ..., -j."""
    jf = _as_j(j)
    return jf - np.arange(dim_of(jf), dtype=float)


@dataclass(frozen=True)
class SpinQuantum:
    """A single spin: non-negative half-integer quantum number j."""

    j: float

    def __post_init__(self):
        object.__setattr__(self, "j", _as_j(self.j))

    @property
    def dim(self) -> int:
        return dim_of(self.j)

    @property
    def magnitude(self) -> float:
        """Classical-limit magnitude sqrt(j(j+1))."""
        return float(np.sqrt(self.j * (self.j + 1.0)))

    def m_values(self) -> np.ndarray:
        return m_values(self.j)


def _wigner_d_impl(twoj: int, theta: float) -> np.ndarray:
    """Build d^(j)(theta) by coupling a spin-1/2 per half step.

    Starting from the trivial d^(0) = [[1]], each half step composes the
    current matrix with the spin-1/2 rotation through the stretched
    Clebsch-Gordan coefficients

        |j,m> = sqrt((j+m)/2j) |j-1/2, m-1/2>|+>  +  sqrt((j-m)/2j) |j-1/2, m+1/2>|->.

    Every coefficient has magnitude <= 1, which keeps the recursion stable up
    to the largest quantum numbers used here (j ~ 220 and beyond).
    """
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    d = np.ones((1, 1))
    for k in range(1, twoj + 1):
        # current target 2j = k, previous matrix has shape (k, k)
        n = k + 1
        i = np.arange(n, dtype=float)       # i = j - m, descending-m index
        up = np.sqrt((k - i) / k)           # weight of |j-1/2, m-1/2>|+>
        dn = np.sqrt(i / k)                 # weight of |j-1/2, m+1/2>|->
        out = np.zeros((n, n))
        out[:-1, :-1] += c * np.outer(up[:-1], up[:-1]) * d
        out[:-1, 1:] += -s * np.outer(up[:-1], dn[1:]) * d
        out[1:, :-1] += s * np.outer(dn[1:], up[:-1]) * d
        out[1:, 1:] += c * np.outer(dn[1:], dn[1:]) * d
        d = out
    return d


@lru_cache(maxsize=64)
def _wigner_d_cached(twoj: int, theta: float) -> np.ndarray:
    d = _wigner_d_impl(twoj, theta)
    d.setflags(write=False)
    return d


def wigner_d(j, theta: float) -> np.ndarray:
    """Wigner d-matrix d^(j)_{m',m}(theta) = <j,m'|exp(-i theta J_y)|j,m>.

    Rows and columns are indexed by descending m', m.  The matrix is real
    orthogonal.  Results are cached per (j, theta).
    """
    jf = _as_j(j)
    return _wigner_d_cached(int(round(2 * jf)), float(theta))


def rotation_matrix(j, theta: float, phi: float) -> np.ndarray:
    """Full rotation matrix <j,m'|R^(j)(theta,phi)|j,m> = e^{-i m' phi} d^(j)_{m',m}(theta)."""
    jf = _as_j(j)
    d = wigner_d(jf, theta)
    if phi == 0.0:
        return d.astype(complex)
    phases = np.exp(-1j * phi * m_values(jf))
    return phases[:, None] * d


def coherent_state(j, theta: float, phi: float) -> np.ndarray:
    """SU(2) coherent state R^(j)(theta,phi)|j,j> as an amplitude vector.

    The state is maximally polarized along (theta, phi):
    <J_z> = j cos(theta) and <J_x + i J_y> = j e^{i phi} sin(theta).
    """
    jf = _as_j(j)
    d_col = wigner_d(jf, theta)[:, 0]
    if phi == 0.0:
        return d_col.astype(complex)
    return np.exp(-1j * phi * m_values(jf)) * d_col


# ---------------------------------------------------------------------------
# states and the Floquet operator


@dataclass(frozen=True)
class QuantumState:
    """Pure state of the coupled pair, amplitudes over |s,m_s> (x) |l,m_l>.

    ``amplitudes`` is a flat complex array of length (2s+1)(2l+1), C-ordered
    with m_s as the major index, both m's descending.  ``matrix`` exposes the
    same data as a (2s+1, 2l+1) view for factored operator application.
    """

    s: SpinQuantum
    l: SpinQuantum
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.s.dim * self.l.dim:
            raise ValueError(
                f"amplitude length {amps.size} does not match dims ({self.s.dim} x {self.l.dim})"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.s.dim, self.l.dim)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def product_state(s, l, vec_s: np.ndarray, vec_l: np.ndarray) -> QuantumState:
    """Separable state from subsystem amplitude vectors."""
    ss, ll = SpinQuantum(_as_j(s)), SpinQuantum(_as_j(l))
    return QuantumState(ss, ll, np.outer(vec_s, vec_l).reshape(-1))


@dataclass(frozen=True)
class FloquetOperator:
    """One-kick unitary in factored form.

    ``rot_s``/``rot_l`` are the real pi/2 y-rotations of each subsystem,
    ``interaction_phases``[i_s, i_l] = exp(-i c m_s m_l) and
    ``free_phases``[i_s, i_l] = exp(-i a (m_s + m_l)).
    """

    s: SpinQuantum
    l: SpinQuantum
    a: float
    c: float
    rot_s: np.ndarray = field(repr=False)
    rot_l: np.ndarray = field(repr=False)
    interaction_phases: np.ndarray = field(repr=False)
    free_phases: np.ndarray = field(repr=False)


def build_floquet(s, l, a: float, c: float) -> FloquetOperator:
    """Assemble the factored Floquet operator for parameters (a, c)."""
    ss, ll = SpinQuantum(_as_j(s)), SpinQuantum(_as_j(l))
    ms = m_values(ss.j)
    ml = m_values(ll.j)
    return FloquetOperator(
        s=ss,
        l=ll,
        a=float(a),
        c=float(c),
        rot_s=wigner_d(ss.j, np.pi / 2.0),
        rot_l=wigner_d(ll.j, np.pi / 2.0),
        interaction_phases=np.exp(-1j * c * np.outer(ms, ml)),
        free_phases=np.exp(-1j * a * (ms[:, None] + ml[None, :])),
    )


def _apply_floquet(psi: np.ndarray, f: FloquetOperator) -> np.ndarray:
    # (R_s (x) R_l)^dagger: rotations are real orthogonal, so dagger = transpose
    psi = f.rot_s.T @ psi @ f.rot_l
    psi = f.interaction_phases * psi
    psi = f.rot_s @ psi @ f.rot_l.T
    return f.free_phases * psi


def evolve(state: QuantumState, f: FloquetOperator, n: int, renormalize: bool = True) -> QuantumState:
    """Apply the Floquet operator n times, never materializing the full matrix.

    Rounding in the two matrix multiplies per kick drifts the norm by about
    1e-14 per step; like the classical map, the state is renormalized after
    every kick so that long runs stay on the unit sphere.  Pass
    ``renormalize=False`` to observe the raw floating-point application.
    """
    if state.s.dim != f.s.dim or state.l.dim != f.l.dim:
        raise ValueError(
            f"state dims ({state.s.dim} x {state.l.dim}) do not match operator "
            f"({f.s.dim} x {f.l.dim})"
        )
    if n < 0:
        raise ValueError("kick count must be non-negative")
    psi = state.matrix.copy()
    for _ in range(n):
        psi = _apply_floquet(psi, f)
        if renormalize:
            psi /= np.linalg.norm(psi)
    return QuantumState(state.s, state.l, psi.reshape(-1))


# ---------------------------------------------------------------------------
# observables


def _ladder_coeffs(j: float) -> np.ndarray:
    """c_+(m) = sqrt((j-m)(j+m+1)) for m = j..-j (descending)."""
    m = m_values(j)
    return np.sqrt(np.maximum((j - m) * (j + m + 1.0), 0.0))


def expect_ladder(vec: np.ndarray, j) -> complex:
    """<J_+> for a single-spin amplitude vector in descending-m order."""
    jf = _as_j(j)
    cp = _ladder_coeffs(jf)
    # J_+|m> = c_+(m)|m+1>; with descending index i(m) = j-m, |m+1> sits at i-1
    return complex(np.sum(np.conj(vec[:-1]) * cp[1:] * vec[1:]))


def expect_jz(vec: np.ndarray, j) -> float:
    jf = _as_j(j)
    return float(np.sum(m_values(jf) * np.abs(vec) ** 2))


def expect_jx2(vec: np.ndarray, j) -> float:
    """<J_x^2> via one application of J_x = (J_+ + J_-)/2."""
    jf = _as_j(j)
    cp = _ladder_coeffs(jf)
    jx_vec = np.zeros_like(vec, dtype=complex)
    jx_vec[:-1] += 0.5 * cp[1:] * vec[1:]  # J_+ raises m: index i -> i-1
    jx_vec[1:] += 0.5 * cp[1:] * vec[:-1]  # J_- lowers m, c_-(m) = c_+(m-1)
    return float(np.real(np.vdot(jx_vec, jx_vec)))


@dataclass(frozen=True)
class Observables:
    """Single-kick expectation values for both subsystems.

    Cartesian means are in units of hbar; ``l2``/``s2`` are the kinematic
    Casimirs l(l+1), s(s+1) scaled by the squared state norm; ``var_norm_*``
    is the normalized variance (  <J^2> - <J>^2 ) / j(j+1).
    """

    sx: float
    sy: float
    sz: float
    s2: float
    lx: float
    ly: float
    lz: float
    l2: float
    var_norm_s: float
    var_norm_l: float

    @property
    def lz_norm(self) -> float:
        return self.lz / np.sqrt(self.l2)

    @property
    def sz_norm(self) -> float:
        return self.sz / np.sqrt(self.s2)


def observables(state: QuantumState) -> Observables:
    """Cartesian first moments and normalized variances of S and L."""
    psi = state.matrix
    s, l = state.s, state.l

    prob = np.abs(psi) ** 2
    norm2 = float(prob.sum())
    p_ms = prob.sum(axis=1)
    p_ml = prob.sum(axis=0)

    sz = float(np.sum(m_values(s.j) * p_ms))
    lz = float(np.sum(m_values(l.j) * p_ml))

    # <S_+>: contract over m_s (rows); <L_+>: contract over m_l (columns)
    cp_s = _ladder_coeffs(s.j)
    cp_l = _ladder_coeffs(l.j)
    splus = complex(np.sum(np.conj(psi[:-1, :]) * (cp_s[1:, None] * psi[1:, :])))
    lplus = complex(np.sum(np.conj(psi[:, :-1]) * (cp_l[None, 1:] * psi[:, 1:])))

    s2 = s.j * (s.j + 1.0) * norm2
    l2 = l.j * (l.j + 1.0) * norm2
    sx, sy = splus.real, splus.imag
    lx, ly = lplus.real, lplus.imag
    return Observables(
        sx=sx,
        sy=sy,
        sz=sz,
        s2=s2,
        lx=lx,
        ly=ly,
        lz=lz,
        l2=l2,
        var_norm_s=(s2 - (sx**2 + sy**2 + sz**2)) / (s.j * (s.j + 1.0)),
        var_norm_l=(l2 - (lx**2 + ly**2 + lz**2)) / (l.j * (l.j + 1.0)),
    )


def marginal_pz(state: QuantumState) -> np.ndarray:
    """P_z(m_l) = <l,m_l| rho^(l) |l,m_l>, over descending m_l.

    Computed as column sums of |amplitude|^2; the reduced density operator is
    never formed.
    """
    return np.abs(state.matrix).__pow__(2).sum(axis=0)


# ---------------------------------------------------------------------------
# kick-by-kick moment series


@dataclass(frozen=True)
class QuantumMomentSeries:
    """Normalized quantum moments at kicks 0..n: <~S>, <~L>, and variances."""

    s: float
    l: float
    kicks: np.ndarray
    s_tilde_mean: np.ndarray     # (K, 3), components <S_i>/sqrt(s(s+1))
    l_tilde_mean: np.ndarray     # (K, 3)
    var_norm_s: np.ndarray       # (K,)
    var_norm_l: np.ndarray       # (K,)

    @property
    def mag_s(self) -> float:
        return float(np.sqrt(self.s * (self.s + 1.0)))

    @property
    def mag_l(self) -> float:
        return float(np.sqrt(self.l * (self.l + 1.0)))


def evolve_series(state: QuantumState, f: FloquetOperator, n_kicks: int) -> QuantumMomentSeries:
    """Evolve kick by kick, recording observables at every stroboscopic time."""
    K = n_kicks + 1
    s_mean = np.empty((K, 3))
    l_mean = np.empty((K, 3))
    vs = np.empty(K)
    vl = np.empty(K)
    mag_s = np.sqrt(state.s.j * (state.s.j + 1.0))
    mag_l = np.sqrt(state.l.j * (state.l.j + 1.0))
    psi = state.matrix.copy()
    for n in range(K):
        obs = observables(QuantumState(state.s, state.l, psi.reshape(-1)))
        s_mean[n] = (obs.sx / mag_s, obs.sy / mag_s, obs.sz / mag_s)
        l_mean[n] = (obs.lx / mag_l, obs.ly / mag_l, obs.lz / mag_l)
        vs[n] = obs.var_norm_s
        vl[n] = obs.var_norm_l
        if n < n_kicks:
            psi = _apply_floquet(psi, f)
            psi /= np.linalg.norm(psi)
    return QuantumMomentSeries(
        s=state.s.j,
        l=state.l.j,
        kicks=np.arange(K),
        s_tilde_mean=s_mean,
        l_tilde_mean=l_mean,
        var_norm_s=vs,
        var_norm_l=vl,
    )
