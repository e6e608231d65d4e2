"""Morse data of ray slices and of composed height functions.

For a ray direction theta, the slice Q_theta is the preimage under h of the
ray {t e^{i theta} : t >= 0}; the function Re(e^{-i theta} h) restricted to
Q_theta has its critical points exactly on the singular set, and their Morse
indices are computed from finite-difference Hessians in retraction charts.
Composing h with a nonzero linear height eta gives a Morse function on the
whole link whose critical points sit on the traced singular curves; they are
located along the traces and refined to high accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHessian, RankZero, WrongDimension
from .geometry import chart, project_to_link, sample_link_points, tangent_frame
from .polynomial import eval_poly
from .singular_set import AugmentedSystem

__all__ = [
    "SliceSpec",
    "CriticalPointRecord",
    "N1ImageResult",
    "slice_critical_points",
    "slice_morse_index",
    "composed_morse",
    "trace_image_n1",
]


@dataclass(frozen=True)
class SliceSpec:
    """Ray direction angle theta; the ray is {t e^{i theta} : t >= 0}."""

    theta: float = 0.0

    @property
    def rotation(self):
        """Unit complex number e^{-i theta} that maps the ray onto [0, inf)."""
        return np.exp(-1j * self.theta)


@dataclass(eq=False)
class CriticalPointRecord:
    """A nondegenerate critical point with its value, index and spectrum."""

    point: np.ndarray
    value: float
    morse_index: int
    hessian_eigenvalues: np.ndarray
    gradient_norm: float = 0.0


def _slice_row(system, z, rotation):
    """Real Jacobian row of Im(rotation * g) at z, plus the gradient values."""
    gvals = np.array([eval_poly(p, z) for p in system._g1], dtype=complex)
    row = np.zeros(2 * system.m)
    row[0::2] = (rotation * gvals).imag
    row[1::2] = (rotation * gvals).real
    return row, gvals


def _slice_newton(system, w0, rotation, tol=1e-12, max_iter=20):
    """Square Newton on {augmented system, Im(rotation * h) = 0}."""
    w = np.asarray(w0, dtype=float).copy()
    for _ in range(max_iter):
        z = w[: 2 * system.m]
        zc = z[0::2] + 1j * z[1::2]
        res_aug = system.residual(w)
        hval = rotation * eval_poly(system.g, zc)
        res = np.concatenate([res_aug, [hval.imag]])
        if np.linalg.norm(res) <= tol:
            return w, True
        jac_aug = system.jacobian(w)
        row, _ = _slice_row(system, zc, rotation)
        full_row = np.concatenate([row, np.zeros(4)])
        jac = np.vstack([jac_aug, full_row])
        try:
            delta = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            return w, False
        if not np.all(np.isfinite(delta)):
            return w, False
        w = w + delta
    return w, False


def slice_critical_points(slice_spec, traces, spec, g, min_ray_param=1e-3,
                          dedupe_tol=1e-6):
    """Points of the traced singular set whose image lies on the ray.

    Sign changes of Im(e^{-i theta} h) along each trace (on the Re > 0 side)
    are refined by Newton on the augmented system plus the ray equation.
    Points whose ray parameter ends up below ``min_ray_param`` are discarded
    to stay away from the slice boundary at the origin.
    """
    system = AugmentedSystem(spec, g)
    rotation = slice_spec.rotation
    found = []
    for trace in traces:
        hc = trace.image[:, 0] + 1j * trace.image[:, 1]
        rotated = rotation * hc
        vals = rotated.imag
        rays = rotated.real
        count = len(vals)
        segments = range(count if trace.closed else count - 1)
        for k in segments:
            nxt = (k + 1) % count
            va, vb = vals[k], vals[nxt]
            if va == 0.0:
                crossing = va == 0.0 and rays[k] > 0
                frac = 0.0
            elif va * vb < 0.0:
                crossing = True
                frac = va / (va - vb)
            else:
                crossing = False
            if not crossing or max(rays[k], rays[nxt]) <= 0:
                continue
            w0 = trace.nodes[k] + frac * (trace.nodes[nxt] - trace.nodes[k])
            w, ok = _slice_newton(system, w0, rotation)
            if not ok:
                continue
            z = w[0 : 2 * system.m : 2] + 1j * w[1 : 2 * system.m : 2]
            ray_param = (rotation * eval_poly(g, z)).real
            if ray_param < min_ray_param:
                continue
            if all(np.linalg.norm(z - other) > dedupe_tol for other in found):
                found.append(z)
    found.sort(key=lambda z: -(rotation * eval_poly(g, z)).real)
    return found


def _chart_hessian(func, dim, step):
    """Symmetrised central-difference Hessian of ``func`` on R^dim at 0."""
    center = func(np.zeros(dim))
    hess = np.empty((dim, dim))
    for i in range(dim):
        ei = np.zeros(dim)
        ei[i] = step
        hess[i, i] = (func(ei) - 2.0 * center + func(-ei)) / step**2
    for i in range(dim):
        for j in range(i + 1, dim):
            ei = np.zeros(dim)
            ej = np.zeros(dim)
            ei[i] = step
            ej[j] = step
            val = (
                func(ei + ej) - func(ei - ej) - func(-ei + ej) + func(-ei - ej)
            ) / (4.0 * step**2)
            hess[i, j] = val
            hess[j, i] = val
    return (hess + hess.T) / 2.0


def _signed_counts(eigs, dead_band):
    scale = float(np.max(np.abs(eigs)))
    if scale == 0.0:
        raise DegenerateHessian("Hessian vanished entirely")
    tau = dead_band * scale
    if np.any(np.abs(eigs) <= tau):
        raise DegenerateHessian(
            f"eigenvalue inside dead band +-{tau:.3e}: {eigs}"
        )
    return int(np.sum(eigs < -tau))


def slice_morse_index(point, slice_spec, spec, g, hessian_step=1e-4,
                      dead_band=1e-5):
    """Morse index of the slice function Re(e^{-i theta} h) at a critical point.

    The chart of the slice at the point is the kernel of the differential of
    Im(e^{-i theta} h) inside the link tangent space (dimension 2n-2); the
    Hessian is computed there by central differences. Raises
    DegenerateHessian when an eigenvalue falls in the dead band.
    """
    system = AugmentedSystem(spec, g)
    rotation = slice_spec.rotation
    z = project_to_link(np.asarray(point, dtype=complex), spec, tol=1e-12)
    frame = tangent_frame(z, spec)
    gvals = np.array([eval_poly(p, z) for p in system._g1], dtype=complex)
    derivs = frame.complex_basis @ gvals
    im_row = (rotation * derivs).imag
    grad_norm = float(np.max(np.abs((rotation * derivs).real)))
    norm_row = np.linalg.norm(im_row)
    if norm_row <= 1e-10:
        raise RankZero("slice normal degenerated: d Im(e^{-i theta} h) = 0")
    _, _, vt = np.linalg.svd(im_row[None, :], full_matrices=True)
    kernel = vt[1:]

    def psi(svec):
        u = kernel.T @ svec
        val = rotation * eval_poly(g, chart(z, frame, u, spec))
        return float(val.real)

    hess = _chart_hessian(psi, kernel.shape[0], hessian_step * spec.epsilon)
    eigs = np.linalg.eigvalsh(hess)
    index = _signed_counts(eigs, dead_band)
    value = float((rotation * eval_poly(g, z)).real)
    return CriticalPointRecord(
        point=z,
        value=value,
        morse_index=index,
        hessian_eigenvalues=eigs,
        gradient_norm=grad_norm,
    )


# ---------------------------------------------------------------------------
# composed Morse functions eta . h
# ---------------------------------------------------------------------------


def _point_at(system, trace, node_index, delta):
    """Curve point at signed arc offset ``delta`` from a trace node."""
    w_node = trace.nodes[node_index]
    t_node = trace.tangents[node_index]
    w, _, ok = system.corrector(w_node + delta * t_node, t_node)
    return w, ok


def _eta_value(system, eta, w):
    z = w[0 : 2 * system.m : 2] + 1j * w[1 : 2 * system.m : 2]
    val = eval_poly(system.g, z)
    return eta[0] * val.real + eta[1] * val.imag


def _refine_extremum(system, trace, eta, node_index, bracket, param_tol=1e-10):
    """Locate the 1-D extremum of eta . h near a node of the trace.

    Bisection on the finite-difference derivative narrows the bracket, then
    three-point parabolic refinement polishes the offset to ``param_tol``.
    Returns the corrected augmented vector, or None if the bracket fails.
    """

    def phi(delta):
        w, ok = _point_at(system, trace, node_index, delta)
        if not ok:
            raise ArithmeticError("corrector failed during refinement")
        return _eta_value(system, eta, w)

    fd_step = 1e-6

    def dphi(delta):
        return (phi(delta + fd_step) - phi(delta - fd_step)) / (2.0 * fd_step)

    lo, hi = bracket
    dlo, dhi = dphi(lo), dphi(hi)
    for _ in range(2):
        if dlo * dhi <= 0:
            break
        lo, hi = 1.5 * lo, 1.5 * hi
        dlo, dhi = dphi(lo), dphi(hi)
    if dlo * dhi > 0:
        return None
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        dmid = dphi(mid)
        if dlo * dmid <= 0:
            hi, dhi = mid, dmid
        else:
            lo, dlo = mid, dmid
    delta = 0.5 * (lo + hi)
    h = 1e-5
    for _ in range(10):
        f0, fp, fm = phi(delta), phi(delta + h), phi(delta - h)
        denom = fp - 2.0 * f0 + fm
        if denom == 0.0:
            break
        move = -0.5 * h * (fp - fm) / denom
        move = float(np.clip(move, -2.0 * h, 2.0 * h))
        delta += move
        if abs(move) <= param_tol:
            break
        h = max(h / 2.0, 1e-6)
    w, ok = _point_at(system, trace, node_index, delta)
    return w if ok else None


def composed_morse(eta, traces, spec, g, hessian_step=1e-4, dead_band=1e-5,
                   param_tol=1e-10, dedupe_tol=1e-6):
    """Critical points of the height eta . h on the link, with Morse data.

    ``eta`` is a nonzero covector on R^2 (normalised internally). Critical
    points are bracketed by sign changes of the discrete arclength
    derivative along each traced singular component, refined along the
    curve, then classified by the full (2n-1)-dimensional chart Hessian.
    Records are sorted by critical value.
    """
    eta = np.asarray(eta, dtype=float)
    norm = np.linalg.norm(eta)
    if norm == 0.0:
        raise ValueError("eta must be nonzero")
    eta = eta / norm
    system = AugmentedSystem(spec, g)
    eta_c = complex(eta[0], eta[1])
    records = []
    seen = []
    for trace in traces:
        vals = trace.image @ eta
        count = len(vals)
        if count < 3:
            continue
        diffs = np.array([vals[(k + 1) % count] - vals[k] for k in range(count)])
        chords = np.array(
            [
                np.linalg.norm(
                    trace.nodes[(k + 1) % count][: 2 * system.m]
                    - trace.nodes[k][: 2 * system.m]
                )
                for k in range(count)
            ]
        )
        segments = range(count) if trace.closed else range(count - 1)
        for k in segments:
            prev = (k - 1) % count
            if not trace.closed and k == 0:
                continue
            if diffs[prev] == 0.0 or diffs[k] == 0.0:
                continue
            if np.sign(diffs[prev]) == np.sign(diffs[k]):
                continue
            bracket = (-0.9 * chords[prev], 0.9 * chords[k])
            try:
                w = _refine_extremum(
                    system, trace, eta, k, bracket, param_tol=param_tol
                )
            except ArithmeticError:
                w = None
            if w is None:
                continue
            z = w[0 : 2 * system.m : 2] + 1j * w[1 : 2 * system.m : 2]
            if any(np.linalg.norm(z - other) <= dedupe_tol for other in seen):
                continue

            z = project_to_link(z, spec, tol=1e-12)
            frame = tangent_frame(z, spec)

            def height(u, _z=z, _frame=frame):
                val = eval_poly(g, chart(_z, _frame, u, spec))
                return eta[0] * val.real + eta[1] * val.imag

            hess = _chart_hessian(height, frame.dim, hessian_step * spec.epsilon)
            gvals = np.array([eval_poly(p, z) for p in system._g1], dtype=complex)
            grad = np.real(np.conj(eta_c) * (frame.complex_basis @ gvals))
            # one chart-Newton polish step pulls the gradient to solver level
            try:
                correction = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                correction = None
            if correction is not None and np.linalg.norm(correction) < 1e-5:
                z = project_to_link(
                    chart(z, frame, correction, spec), spec, tol=1e-12
                )
                frame = tangent_frame(z, spec)
                gvals = np.array(
                    [eval_poly(p, z) for p in system._g1], dtype=complex
                )
                grad = np.real(np.conj(eta_c) * (frame.complex_basis @ gvals))

                def height(u, _z=z, _frame=frame):
                    val = eval_poly(g, chart(_z, _frame, u, spec))
                    return eta[0] * val.real + eta[1] * val.imag

                hess = _chart_hessian(
                    height, frame.dim, hessian_step * spec.epsilon
                )
            eigs = np.linalg.eigvalsh(hess)
            index = _signed_counts(eigs, dead_band)
            hval = eval_poly(g, z)
            records.append(
                CriticalPointRecord(
                    point=z,
                    value=float(eta[0] * hval.real + eta[1] * hval.imag),
                    morse_index=index,
                    hessian_eigenvalues=eigs,
                    gradient_norm=float(np.max(np.abs(grad))),
                )
            )
            seen.append(z)
    records.sort(key=lambda r: r.value)
    return records


# ---------------------------------------------------------------------------
# n = 1: the restriction is an embedding; trace its image
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class N1ImageResult:
    """Image components of h for a 1-dimensional link."""

    components: list  # list of (M, 2) arrays
    centers: list
    radii: list
    min_intercomponent_distance: float


def trace_image_n1(spec, g, n_samples=2000, rng_seed=42, cluster_gap=0.08):
    """Sample the 1-dimensional link and group the image points by proximity.

    Only valid for n = 1. Components are reported with least-squares circle
    fits, sorted by radius; ``cluster_gap`` (times epsilon) is the proximity
    threshold used to join image points into connected components.
    """
    if spec.n != 1:
        raise WrongDimension(f"n = 1 required, got n = {spec.n}")
    rng = np.random.default_rng(rng_seed)
    points = sample_link_points(spec, n_samples, rng)
    values = np.array([eval_poly(g, z) for z in points])
    image = np.column_stack([values.real, values.imag])

    gap = cluster_gap * spec.epsilon
    dist = np.linalg.norm(image[:, None, :] - image[None, :, :], axis=2)
    adjacency = dist <= gap
    unassigned = set(range(len(image)))
    groups = []
    while unassigned:
        stack = [min(unassigned)]
        unassigned.discard(stack[0])
        members = []
        while stack:
            k = stack.pop()
            members.append(k)
            neighbours = np.nonzero(adjacency[k])[0]
            fresh = [int(j) for j in neighbours if j in unassigned]
            for j in fresh:
                unassigned.discard(j)
            stack.extend(fresh)
        groups.append(np.array(sorted(members)))

    fits = []
    for members in groups:
        pts = image[members]
        center, radius, _ = circle_fit_points(pts)
        fits.append((radius, center, pts))
    fits.sort(key=lambda item: item[0])

    min_gap = np.inf
    for i in range(len(fits)):
        for j in range(i + 1, len(fits)):
            d = np.linalg.norm(
                fits[i][2][:, None, :] - fits[j][2][None, :, :], axis=2
            ).min()
            min_gap = min(min_gap, float(d))

    return N1ImageResult(
        components=[pts for _, _, pts in fits],
        centers=[center for _, center, _ in fits],
        radii=[radius for radius, _, _ in fits],
        min_intercomponent_distance=float(min_gap),
    )


def circle_fit_points(points):
    """Least-squares circle fit (center, radius, rms)."""
    from .fold_classify import circle_fit

    return circle_fit(points)
