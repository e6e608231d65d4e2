"""Fold classification of singular points and the round-map verdict.

At a fold point the differential of h has rank 1; the transverse Hessian of
the normal component of h on the kernel directions is nondegenerate and its
negative-eigenvalue count lambda fixes the absolute index
min(lambda, (2n-2) - lambda). A map whose singular components are embedded
onto disjoint nested circles around a common centre is reported ROUND; that
operational test stands in for isotopy to concentric circles and is noted as
such in the verdict.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NotApplicable, RankTwo, RankZero
from .geometry import chart, project_to_link, sample_link_points, tangent_frame
from .polynomial import eval_poly, homogeneous_degree
from .singular_set import AugmentedPoint

__all__ = [
    "FoldKind",
    "FoldRecord",
    "LocalFoldData",
    "ComponentClassification",
    "RoundVerdict",
    "local_fold_data",
    "intrinsic_hessian",
    "fold_counts",
    "classify_fold",
    "classify_component",
    "verify_round",
    "equivariance_error",
    "circle_fit",
    "min_nonadjacent_image_distance",
]


class FoldKind(enum.Enum):
    DEFINITE = "DEFINITE"
    INDEFINITE = "INDEFINITE"
    DEGENERATE = "DEGENERATE"


@dataclass(eq=False)
class FoldRecord:
    """Classification summary for one singular point or component."""

    component_id: int
    kind: FoldKind
    absolute_index: int | None
    negative_eigenvalues: int | None
    image_center: np.ndarray
    image_radius_mean: float
    image_radius_deviation: float
    embedding_ok: bool


@dataclass(eq=False)
class LocalFoldData:
    """First-order data of h in a tangent chart at a singular point."""

    rank: int
    kernel_basis: np.ndarray  # (2n-2, 2n-1) rows, chart coordinates
    image_dir: np.ndarray  # unit vector in R^2, sign arbitrary
    frame: object
    singular_values: tuple
    base_point: np.ndarray


def _h_of(g, z):
    val = eval_poly(g, z)
    return np.array([val.real, val.imag])


def local_fold_data(point, spec, g, step=1e-5, frame=None):
    """Rank-1 check of dh at a singular point, with kernel and image direction.

    The 2 x (2n-1) chart Jacobian is formed by Richardson-extrapolated
    central differences. Raises RankZero when the differential vanishes and
    RankTwo when the point is actually regular (sigma2/sigma1 > 1e-6).
    """
    z = point.z if isinstance(point, AugmentedPoint) else np.asarray(point, complex)
    z = project_to_link(z, spec, tol=1e-12)
    if frame is None:
        frame = tangent_frame(z, spec)
    m = frame.dim

    def jac_at(h):
        cols = np.empty((2, m))
        for i in range(m):
            u = np.zeros(m)
            u[i] = h
            plus = _h_of(g, chart(z, frame, u, spec))
            minus = _h_of(g, chart(z, frame, -u, spec))
            cols[:, i] = (plus - minus) / (2.0 * h)
        return cols

    h = step * spec.epsilon
    jac = (4.0 * jac_at(h / 2.0) - jac_at(h)) / 3.0
    u, s, vt = np.linalg.svd(jac, full_matrices=True)
    if s[0] <= 1e-10:
        raise RankZero(f"differential of h vanished (sigma1 = {s[0]:.3e})")
    if s[1] / s[0] > 1e-6:
        raise RankTwo(
            f"differential has rank 2 (sigma2/sigma1 = {s[1] / s[0]:.3e}); "
            "point is regular"
        )
    return LocalFoldData(
        rank=1,
        kernel_basis=vt[1:],
        image_dir=u[:, 0],
        frame=frame,
        singular_values=(float(s[0]), float(s[1])),
        base_point=z,
    )


def intrinsic_hessian(point, kernel_basis, image_dir, spec, g, frame=None,
                      step=1e-4, nu=None):
    """Transverse Hessian of the normal component of h on the kernel directions.

    ``nu`` defaults to the left normal of ``image_dir``; pass an oriented
    normal to fix the sign convention. Central second differences with the
    given step, symmetrised.
    """
    z = point.z if isinstance(point, AugmentedPoint) else np.asarray(point, complex)
    if frame is None:
        z = project_to_link(z, spec, tol=1e-12)
        frame = tangent_frame(z, spec)
    else:
        z = frame.base_point
    if nu is None:
        nu = np.array([-image_dir[1], image_dir[0]])

    def psi(svec):
        u = kernel_basis.T @ svec
        return float(np.dot(nu, _h_of(g, chart(z, frame, u, spec))))

    k = kernel_basis.shape[0]
    h = step * spec.epsilon
    center = psi(np.zeros(k))
    hess = np.empty((k, k))
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h
        hess[i, i] = (psi(ei) - 2.0 * center + psi(-ei)) / h**2
    for i in range(k):
        for j in range(i + 1, k):
            ei = np.zeros(k)
            ej = np.zeros(k)
            ei[i] = h
            ej[j] = h
            val = (
                psi(ei + ej) - psi(ei - ej) - psi(-ei + ej) + psi(-ei - ej)
            ) / (4.0 * h**2)
            hess[i, j] = val
            hess[j, i] = val
    return (hess + hess.T) / 2.0


def fold_counts(eigenvalues, dead_band=1e-5):
    """(negative, positive, degenerate) eigenvalue counts with a dead band.

    The band is ``dead_band`` times the spectral norm; an eigenvalue inside
    it cannot be signed, which makes the point degenerate.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    if scale == 0.0:
        return 0, 0, True
    tau = dead_band * scale
    neg = int(np.sum(eigenvalues < -tau))
    pos = int(np.sum(eigenvalues > tau))
    return neg, pos, bool(neg + pos < eigenvalues.size)


def _record_from_counts(component_id, neg, degenerate, k, center, radius_mean,
                        radius_dev, embedding_ok):
    if degenerate:
        kind = FoldKind.DEGENERATE
        absolute = None
    else:
        absolute = min(neg, k - neg)
        kind = FoldKind.DEFINITE if absolute == 0 else FoldKind.INDEFINITE
    return FoldRecord(
        component_id=component_id,
        kind=kind,
        absolute_index=absolute,
        negative_eigenvalues=neg,
        image_center=np.asarray(center, dtype=float),
        image_radius_mean=float(radius_mean),
        image_radius_deviation=float(radius_dev),
        embedding_ok=bool(embedding_ok),
    )


def classify_fold(point, spec, g, component_id=-1, image_center=(0.0, 0.0),
                  hessian_step=1e-4, jacobian_step=1e-5, dead_band=1e-5):
    """Classify one singular point as a definite/indefinite/degenerate fold.

    The transverse normal is oriented away from ``image_center`` so the
    negative-eigenvalue count is consistent along a traced component whose
    image winds around that centre.
    """
    data = local_fold_data(point, spec, g, step=jacobian_step)
    center = np.asarray(image_center, dtype=float)
    nu = np.array([-data.image_dir[1], data.image_dir[0]])
    offset = _h_of(g, data.base_point) - center
    if np.dot(offset, nu) < 0:
        nu = -nu
    hess = intrinsic_hessian(
        point, data.kernel_basis, data.image_dir, spec, g,
        frame=data.frame, step=hessian_step, nu=nu,
    )
    eigs = np.linalg.eigvalsh(hess)
    neg, _, degenerate = fold_counts(eigs, dead_band=dead_band)
    k = data.kernel_basis.shape[0]
    radius = float(np.linalg.norm(offset))
    return _record_from_counts(
        component_id, neg, degenerate, k, center, radius, 0.0, True
    )


# ---------------------------------------------------------------------------
# component-level classification
# ---------------------------------------------------------------------------


def circle_fit(points):
    """Least-squares circle fit; returns (center, radius, rms_residual)."""
    pts = np.asarray(points, dtype=float)
    a = np.column_stack([pts[:, 0], pts[:, 1], np.ones(len(pts))])
    b = -(pts[:, 0] ** 2 + pts[:, 1] ** 2)
    (d, e, f), *_ = np.linalg.lstsq(a, b, rcond=None)
    center = np.array([-d / 2.0, -e / 2.0])
    radius = float(np.sqrt(max(np.dot(center, center) - f, 0.0)))
    dist = np.linalg.norm(pts - center, axis=1)
    rms = float(np.sqrt(np.mean((dist - radius) ** 2)))
    return center, radius, rms


def min_nonadjacent_image_distance(trace):
    """Smallest image distance between circularly non-adjacent trace samples."""
    pts = trace.image
    count = len(pts)
    if count < 4:
        return np.inf
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    idx = np.arange(count)
    gap = np.abs(idx[:, None] - idx[None, :])
    if trace.closed:
        gap = np.minimum(gap, count - gap)
    mask = gap <= 1
    dist[mask] = np.inf
    return float(dist.min())


@dataclass(eq=False)
class ComponentClassification:
    """Aggregate classification of one traced component."""

    record: FoldRecord
    point_indices: list
    point_records: list
    eigenvalues: list
    consistent: bool


def classify_component(trace, spec, g, component_id, max_samples=24,
                       hessian_step=1e-4, jacobian_step=1e-5, dead_band=1e-5):
    """Classify sampled points along a traced component and aggregate.

    All sampled points must agree in (kind, absolute index) for the
    component to be consistently classified; ``consistent`` reports that.
    Image geometry comes from a least-squares circle fit of the full trace
    image.
    """
    center, radius, _ = circle_fit(trace.image)
    count = len(trace.points)
    stride = max(1, count // max_samples)
    indices = list(range(0, count, stride))
    records = []
    eigenvalues = []
    for idx in indices:
        point = trace.points[idx]
        data = local_fold_data(point, spec, g, step=jacobian_step)
        nu = np.array([-data.image_dir[1], data.image_dir[0]])
        offset = _h_of(g, data.base_point) - center
        if np.dot(offset, nu) < 0:
            nu = -nu
        hess = intrinsic_hessian(
            point, data.kernel_basis, data.image_dir, spec, g,
            frame=data.frame, step=hessian_step, nu=nu,
        )
        eigs = np.linalg.eigvalsh(hess)
        eigenvalues.append(eigs)
        neg, _, degenerate = fold_counts(eigs, dead_band=dead_band)
        records.append(
            _record_from_counts(
                component_id, neg, degenerate, data.kernel_basis.shape[0],
                center, 0.0, 0.0, True,
            )
        )
    kinds = {(r.kind, r.absolute_index, r.negative_eigenvalues) for r in records}
    consistent = len(kinds) == 1
    radii = np.linalg.norm(trace.image - center, axis=1)
    base = records[0]
    record = FoldRecord(
        component_id=component_id,
        kind=base.kind,
        absolute_index=base.absolute_index,
        negative_eigenvalues=base.negative_eigenvalues,
        image_center=center,
        image_radius_mean=float(np.mean(radii)),
        image_radius_deviation=float(np.max(np.abs(radii - np.mean(radii)))),
        embedding_ok=min_nonadjacent_image_distance(trace) > 1e-6,
    )
    return ComponentClassification(
        record=record,
        point_indices=indices,
        point_records=records,
        eigenvalues=eigenvalues,
        consistent=consistent,
    )


# ---------------------------------------------------------------------------
# round verdict
# ---------------------------------------------------------------------------

_ROUND_NOTE = (
    "concentricity is checked operationally: embedded closed image curves "
    "with winding number +-1 about the common centre and pairwise disjoint "
    "radial annuli"
)


@dataclass(eq=False)
class RoundVerdict:
    status: str  # "ROUND" or "NOT_ROUND"
    radii: list
    center: np.ndarray
    failed_check: str | None
    note: str = _ROUND_NOTE

    @property
    def is_round(self):
        return self.status == "ROUND"


def _winding_number(image, center):
    rel = image - center
    angles = np.arctan2(rel[:, 1], rel[:, 0])
    steps = np.diff(np.concatenate([angles, angles[:1]]))
    increments = (steps + np.pi) % (2.0 * np.pi) - np.pi
    return float(np.sum(increments) / (2.0 * np.pi))


def verify_round(traces, records):
    """Decide whether classified singular components form a round structure.

    Checks, in order: every component closed and non-degenerate; h injective
    on each component (non-adjacent image samples separated by more than
    1e-6); winding number +-1 about the common centre; and pairwise disjoint
    radial annuli. Returns a RoundVerdict with per-component fitted radii.
    """
    if not traces:
        return RoundVerdict("NOT_ROUND", [], np.zeros(2), "no_components")
    if any(not t.closed for t in traces):
        return RoundVerdict("NOT_ROUND", [], np.zeros(2), "open_component")
    if any(r.kind == FoldKind.DEGENERATE for r in records):
        return RoundVerdict("NOT_ROUND", [], np.zeros(2), "degenerate_fold")

    for trace in traces:
        if min_nonadjacent_image_distance(trace) <= 1e-6:
            return RoundVerdict("NOT_ROUND", [], np.zeros(2), "injectivity")

    center = np.mean(np.vstack([t.image for t in traces]), axis=0)
    for trace in traces:
        w = _winding_number(trace.image, center)
        if abs(abs(w) - 1.0) > 0.05:
            return RoundVerdict("NOT_ROUND", [], center, "winding")

    intervals = []
    fitted = []
    for trace in traces:
        dist = np.linalg.norm(trace.image - center, axis=1)
        intervals.append((float(dist.min()), float(dist.max())))
        fitted.append(circle_fit(trace.image)[1])
    order = np.argsort([iv[0] for iv in intervals])
    for a, b in zip(order[:-1], order[1:]):
        if intervals[a][1] >= intervals[b][0]:
            return RoundVerdict("NOT_ROUND", sorted(fitted), center, "radial_overlap")

    return RoundVerdict("ROUND", sorted(fitted), center, None)


def equivariance_error(spec, g, n_samples=1000, rng_seed=42):
    """Max of |h(alpha z) - alpha h(z)| over random unit alpha and link points.

    Only meaningful when f is homogeneous (so the circle action preserves
    the link) and g is homogeneous of degree 1; otherwise NotApplicable.
    """
    if homogeneous_degree(spec.f) is None:
        raise NotApplicable("f is not homogeneous; the circle action does not act")
    if homogeneous_degree(g) != 1:
        raise NotApplicable("g is not homogeneous of degree 1")
    rng = np.random.default_rng(rng_seed)
    points = sample_link_points(spec, n_samples, rng)
    phases = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=n_samples))
    worst = 0.0
    for z, alpha in zip(points, phases):
        lhs = eval_poly(g, alpha * z)
        rhs = alpha * eval_poly(g, z)
        worst = max(worst, abs(lhs - rhs))
    return float(worst)
