"""Geometry of the link K = f^{-1}(0) ∩ S_epsilon and retraction charts.

Real coordinates interleave as (x1, y1, x2, y2, ...) with z_j = x_j + i*y_j,
matching the convention used by :func:`realify` / :func:`complexify`. All
constraint work happens on the 3 real residuals (Re f, Im f, |z|^2 - eps^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionCollapse, NonConvergence, RankDeficient
from .polynomial import ComplexPoly, conj_gradient, eval_poly

__all__ = [
    "LinkSpec",
    "TangentFrame",
    "realify",
    "complexify",
    "hermitian_inner",
    "real_inner",
    "link_residual",
    "link_residual_jacobian",
    "project_to_link",
    "sample_link_points",
    "tangent_frame",
    "orthonormal_complement",
    "chart",
]

# rank threshold for post-projection norms and constraint Jacobians
_RANK_TOL = 1e-10


def realify(z):
    """Interleave a complex vector into reals: (Re z1, Im z1, Re z2, ...)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(2 * z.size)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def complexify(v):
    """Inverse of :func:`realify`."""
    v = np.asarray(v, dtype=float)
    return v[0::2] + 1j * v[1::2]


def hermitian_inner(u, v):
    """Hermitian inner product sum_j u_j * conj(v_j)."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
    return complex(np.sum(u * np.conj(v)))


def real_inner(u, v):
    """Euclidean inner product of the realified vectors."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
    return float(np.dot(realify(u), realify(v)))


@dataclass(frozen=True)
class LinkSpec:
    """The link of ``f`` at radius ``epsilon``: f^{-1}(0) ∩ S^{2n+1}_epsilon.

    ``f`` must vanish at the origin and have ``n + 1`` variables; the link is
    a closed (2n-1)-manifold when epsilon is small enough (epsilon is left to
    the caller; for homogeneous f any radius gives the same geometry up to
    scale).
    """

    f: ComplexPoly
    n: int
    epsilon: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.f.n_vars != self.n + 1:
            raise ValueError(
                f"f has {self.f.n_vars} variables, expected n + 1 = {self.n + 1}"
            )
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        origin = (0,) * self.f.n_vars
        if origin in self.f.terms:
            raise ValueError("f must vanish at the origin")

    @property
    def ambient_dim(self):
        return self.n + 1


def link_residual(z, spec):
    """Constraint residual (Re f(z), Im f(z), |z|^2 - epsilon^2)."""
    z = np.asarray(z, dtype=complex)
    fval = eval_poly(spec.f, z)
    norm_sq = float(np.sum(z.real**2 + z.imag**2))
    return np.array([fval.real, fval.imag, norm_sq - spec.epsilon**2])


def link_residual_jacobian(z, spec):
    """3 x (2n+2) real Jacobian of :func:`link_residual`.

    For holomorphic f the derivative along x_k is f_k := df/dz_k and along
    y_k it is i*f_k, which gives the rows below.
    """
    z = np.asarray(z, dtype=complex)
    fk = np.array([eval_poly(dp, z) for dp in spec.f.partials()], dtype=complex)
    m = z.size
    jac = np.zeros((3, 2 * m))
    jac[0, 0::2] = fk.real
    jac[0, 1::2] = -fk.imag
    jac[1, 0::2] = fk.imag
    jac[1, 1::2] = fk.real
    jac[2, :] = 2.0 * realify(z)
    return jac


def project_to_link(z0, spec, tol=1e-12, max_iter=50):
    """Gauss-Newton least-norm projection of ``z0`` onto the link.

    Each step solves J * delta = -residual for the minimum-norm delta, which
    keeps the correction orthogonal to the constraint level sets. After the
    tolerance is met the iteration keeps polishing while the residual still
    drops sharply, so well-conditioned points land near machine precision.

    Raises RankDeficient if the constraint Jacobian has a singular value
    below 1e-10 (e.g. at the origin) and NonConvergence after ``max_iter``.
    """
    z = np.asarray(z0, dtype=complex).copy()
    if z.shape != (spec.ambient_dim,):
        raise ValueError(f"point has shape {z.shape}, expected ({spec.ambient_dim},)")
    best = z
    best_norm = np.inf
    hit_tol = False
    for _ in range(max_iter):
        res = link_residual(z, spec)
        res_norm = float(np.linalg.norm(res))
        if res_norm < best_norm:
            best, best_norm = z, res_norm
        if hit_tol and res_norm > 0.25 * best_norm:
            return best
        if res_norm <= tol:
            hit_tol = True
            if res_norm == 0.0:
                return z
        jac = link_residual_jacobian(z, spec)
        u, s, vt = np.linalg.svd(jac, full_matrices=False)
        if s[-1] < _RANK_TOL:
            raise RankDeficient(
                f"constraint Jacobian singular value {s[-1]:.3e} below {_RANK_TOL}"
            )
        delta = vt.T @ ((u.T @ -res) / s)
        z = z + complexify(delta)
    if hit_tol or best_norm <= tol:
        return best
    raise NonConvergence(
        f"projection residual {best_norm:.3e} > {tol:.1e} after {max_iter} iterations"
    )


def sample_link_points(spec, count, rng, max_attempts_factor=20):
    """Project ``count`` Gaussian ambient points onto the link, deterministically.

    Draws are scaled to the sphere radius; failed projections are skipped
    and redrawn, so the output depends only on the generator state.
    """
    points = []
    attempts = 0
    budget = max_attempts_factor * count
    while len(points) < count:
        if attempts >= budget:
            raise NonConvergence(
                f"only {len(points)}/{count} link samples converged "
                f"after {attempts} attempts"
            )
        attempts += 1
        raw = rng.standard_normal(2 * spec.ambient_dim)
        raw *= spec.epsilon / max(np.linalg.norm(raw), 1e-12)
        try:
            points.append(project_to_link(complexify(raw), spec))
        except (NonConvergence, RankDeficient):
            continue
    return np.array(points)


@dataclass
class TangentFrame:
    """Orthonormal basis of the tangent space of the link at ``base_point``.

    ``basis`` has shape (2n-1, 2n+2); each row is a realified ambient vector
    orthogonal to realify(conj-gradient of f), realify(i * conj-gradient),
    and realify(base_point).
    """

    base_point: np.ndarray
    basis: np.ndarray
    _complex_rows: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def complex_basis(self):
        """Rows of ``basis`` reassembled as complex ambient vectors."""
        if self._complex_rows is None:
            self._complex_rows = np.array([complexify(row) for row in self.basis])
        return self._complex_rows


def _project_out(v, rows):
    for row in rows:
        v = v - np.dot(row, v) * row
    return v


def orthonormal_complement(spanning, ambient_dim):
    """Orthonormal basis of the complement of ``spanning`` rows in R^ambient_dim.

    Modified Gram-Schmidt with one re-orthogonalisation pass; vectors whose
    post-projection norm falls below 1e-10 are treated as dependent. Raises
    DimensionCollapse if the spanning set itself is dependent.
    """
    ortho = []
    for v in spanning:
        w = _project_out(np.asarray(v, dtype=float), ortho)
        w = _project_out(w, ortho)
        norm = np.linalg.norm(w)
        if norm <= _RANK_TOL:
            raise DimensionCollapse(
                f"spanning vector collapsed (post-projection norm {norm:.3e})"
            )
        ortho.append(w / norm)
    complement = []
    for k in range(ambient_dim):
        e = np.zeros(ambient_dim)
        e[k] = 1.0
        w = _project_out(e, ortho)
        w = _project_out(w, ortho + complement)
        norm = np.linalg.norm(w)
        if norm > _RANK_TOL:
            complement.append(w / norm)
    return np.array(complement)


def tangent_frame(point, spec):
    """Tangent frame of the link at ``point`` (which must lie on the link).

    The tangent space is the real orthogonal complement of the span of
    realify(gradbar f), realify(i * gradbar f) and realify(point); its
    dimension is 2n - 1 at every regular link point.
    """
    z = np.asarray(point, dtype=complex)
    grad = conj_gradient(spec.f, z)
    if np.linalg.norm(grad) <= _RANK_TOL:
        raise DimensionCollapse("conjugate gradient of f vanishes at the base point")
    spanning = [realify(grad), realify(1j * grad), realify(z)]
    basis = orthonormal_complement(spanning, 2 * spec.ambient_dim)
    expected = 2 * spec.n - 1
    if basis.shape[0] != expected:
        raise DimensionCollapse(
            f"tangent space dimension {basis.shape[0]}, expected {expected}"
        )
    return TangentFrame(base_point=z, basis=basis)


def chart(point, frame, u, spec, tol=1e-12, max_iter=50, max_radius=None):
    """Retraction chart: project point + sum(u_i * basis_i) back onto the link.

    chart(p, frame, 0) returns p exactly; for small u the result has
    second-order contact with the tangent plane because the Gauss-Newton
    correction is normal to the link.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (frame.dim,):
        raise ValueError(f"chart coordinates have shape {u.shape}, expected ({frame.dim},)")
    if max_radius is None:
        max_radius = 0.1 * spec.epsilon
    norm_u = np.linalg.norm(u)
    if norm_u == 0.0:
        return np.asarray(point, dtype=complex).copy()
    if norm_u > max_radius:
        raise ValueError(f"chart step {norm_u:.3e} exceeds radius {max_radius:.3e}")
    moved = np.asarray(point, dtype=complex) + complexify(frame.basis.T @ u)
    return project_to_link(moved, spec, tol=tol, max_iter=max_iter)
