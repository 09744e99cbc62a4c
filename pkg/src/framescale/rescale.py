"""Rescaling weights that certify a completely bounded multiplier bound.

For log-weights t the two Bessel quantities are

    f(t) = lam_max( sum_k e^{t_k} x_k x_k^* )
    g(t) = lam_max( sum_k e^{-t_k} y_k y_k^* )

and every amplified masked map satisfies ||Phi_(m)(A)|| <= sqrt(f g) ||A||
<= max(f, g) ||A||, a row-column factorization through the rescaled pair
(e^{t_k/2} x_k, e^{-t_k/2} y_k).  Minimizing h = max(f, g) over t therefore
produces an upper bound M_upper on the completely bounded norm together
with explicit weights, and the optimizer below also reports a sampled
lower bound so callers get a bracket.

h is convex in t (each branch is a maximum of affine functions of e^{t_k}
composed with convex exponentials), so a projected subgradient phase
followed by a smoothed spectral Newton polish converges to the global
minimum.
"""

from dataclasses import dataclass

import numpy as np

from .frames import BesselBounds, FramePair, bessel_and_frame_bounds
from .linalg import jacobi_eigh, psd_sqrt
from .multiplier import cb_lower_sampled, check_mask

BRACKET_SLACK = 1e-8


def _check_weights(t: np.ndarray, n: int) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if t.shape != (n,):
        raise ValueError(f"weights shape {t.shape} does not match n={n}")
    if not np.all(np.isfinite(t)):
        raise ValueError("weights must be finite")
    return t


def _rank_one_stacks(pair: FramePair):
    xx = np.einsum("ki,kj->kij", pair.xs, pair.xs.conj())
    yy = np.einsum("ki,kj->kij", pair.ys, pair.ys.conj())
    return xx, yy


def _branch_tops(pair: FramePair, t: np.ndarray):
    xx, yy = _rank_one_stacks(pair)
    fmat = np.tensordot(np.exp(t), xx, axes=1)
    gmat = np.tensordot(np.exp(-t), yy, axes=1)
    wf, vf = jacobi_eigh(fmat)
    wg, vg = jacobi_eigh(gmat)
    return float(wf[-1]), vf[:, -1], float(wg[-1]), vg[:, -1]


def bessel_pair_objective(pair: FramePair, t: np.ndarray):
    """The two weighted Bessel bounds (f, g) at log-weights t."""
    t = _check_weights(t, pair.n)
    f, _, g, _ = _branch_tops(pair, t)
    return f, g


def balance(pair: FramePair, t: np.ndarray) -> np.ndarray:
    """Shift t by the constant that equates the two branches.

    A common shift c multiplies f by e^c and g by e^{-c}, so
    c = (ln g - ln f) / 2 makes both equal to sqrt(f g), which never
    increases max(f, g).
    """
    t = _check_weights(t, pair.n)
    f, g = bessel_pair_objective(pair, t)
    return t + 0.5 * np.log(g / f)


def subgradient(pair: FramePair, t: np.ndarray, tie_tol: float = 1e-9) -> np.ndarray:
    """A subgradient of h = max(f, g) at t.

    On the f branch the component k is e^{t_k} |<v_f, x_k>|^2 for the top
    eigenvector v_f; on the g branch it is -e^{-t_k} |<v_g, y_k>|^2.  When
    the branches tie within tie_tol (relative) the two halves are
    averaged.
    """
    t = _check_weights(t, pair.n)
    f, vf, g, vg = _branch_tops(pair, t)
    gx = np.exp(t) * np.abs(pair.xs.conj() @ vf) ** 2
    gy = np.exp(-t) * np.abs(pair.ys.conj() @ vg) ** 2
    gap = tie_tol * max(1.0, f, g)
    if f - g > gap:
        return gx
    if g - f > gap:
        return -gy
    return 0.5 * (gx - gy)


def _phi1(z: np.ndarray) -> np.ndarray:
    """(e^z - 1)/z with the removable singularity filled in."""
    z = np.clip(z, -2.0, 2.0)
    out = np.ones_like(z)
    nz = z != 0.0
    out[nz] = np.expm1(z[nz]) / z[nz]
    return out


def _divided_exp(b: float, lam: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Divided differences (p_i - p_j)/(lam_i - lam_j) of p = e^{b(lam-max)}.

    Near-coincident eigenvalues switch to the series form b p_j phi1(b dl)
    to avoid cancellation; the diagonal is the derivative b p_i.
    """
    dl = lam[:, None] - lam[None, :]
    delta = b * dl
    small = np.abs(delta) <= 1e-3
    safe = np.where(small, 1.0, dl)
    direct = (p[:, None] - p[None, :]) / safe
    series = b * p[None, :] * _phi1(delta)
    return np.where(small, series, direct)


def _smoothed_state(pair: FramePair, t: np.ndarray, b: float):
    """Value, gradient, and Hessian of the smoothed objective.

    The smoothing is psi = (1/b) log(tr e^{bF} + tr e^{bG}), which is
    convex, exceeds h by at most log(2d)/b, and has exact derivatives
    through the eigendecompositions of F and G.
    """
    xx, yy = _rank_one_stacks(pair)
    et = np.exp(t)
    fmat = np.tensordot(et, xx, axes=1)
    gmat = np.tensordot(1.0 / et, yy, axes=1)
    wf, vf = jacobi_eigh(fmat)
    wg, vg = jacobi_eigh(gmat)
    wmax = max(wf[-1], wg[-1])
    pf = np.exp(b * (wf - wmax))
    pg = np.exp(b * (wg - wmax))
    z = float(np.sum(pf) + np.sum(pg))
    psi = wmax + np.log(z) / b

    ax = pair.xs.conj() @ vf
    ay = pair.ys.conj() @ vg
    qf = et * (np.abs(ax) ** 2 @ pf)
    qg = (1.0 / et) * (np.abs(ay) ** 2 @ pg)
    grad = (qf - qg) / z

    curv = np.zeros((pair.n, pair.n))
    for lam, p, amp, scal in ((wf, pf, ax, np.sqrt(et)),
                              (wg, pg, ay, np.sqrt(1.0 / et))):
        lam_mat = _divided_exp(b, lam, p)
        w = scal[:, None] * amp.conj()
        prod = np.einsum("ki,li->kli", w, w.conj())
        curv += np.real(np.einsum("kli,ij,klj->kl", prod, lam_mat, prod.conj()))
    hess = (curv + np.diag(qf + qg)) / z - b * np.outer(grad, grad)
    hess = 0.5 * (hess + hess.T)
    return psi, grad, hess


def _newton_polish(pair: FramePair, t: np.ndarray,
                   beta_relative=(1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10),
                   max_newton: int = 25) -> np.ndarray:
    """Anneal the smoothed objective down to a sharp minimum of h."""
    tiny = np.finfo(np.float64).tiny
    for b_rel in beta_relative:
        t = balance(pair, t)
        f, g = bessel_pair_objective(pair, t)
        b = b_rel / max(max(f, g), tiny)
        for _ in range(max_newton):
            psi, grad, hess = _smoothed_state(pair, t, b)
            gnorm = float(np.max(np.abs(grad)))
            if gnorm <= 1e-13 * (1.0 + abs(psi)):
                break
            w, v = jacobi_eigh(hess.astype(np.complex128))
            floor = max(1e-12 * float(np.max(np.abs(w))), 1e-300)
            step = -(v @ ((v.conj().T @ grad) / np.maximum(w, floor))).real
            cap = float(np.max(np.abs(step)))
            if cap > 3.0:
                step *= 3.0 / cap
            slope = float(grad @ step)
            if slope >= 0.0:
                step = -grad / max(max(f, g), tiny)
                slope = float(grad @ step)
            alpha = 1.0
            accepted = False
            for _ in range(40):
                cand, _, _ = _psi_only(pair, t + alpha * step, b)
                if cand <= psi + 1e-4 * alpha * slope:
                    t = t + alpha * step
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                break
    return balance(pair, t)


def _psi_only(pair: FramePair, t: np.ndarray, b: float):
    xx, yy = _rank_one_stacks(pair)
    et = np.exp(t)
    wf, _ = jacobi_eigh(np.tensordot(et, xx, axes=1))
    wg, _ = jacobi_eigh(np.tensordot(1.0 / et, yy, axes=1))
    wmax = max(wf[-1], wg[-1])
    z = float(np.sum(np.exp(b * (wf - wmax))) + np.sum(np.exp(b * (wg - wmax))))
    return wmax + np.log(z) / b, wf[-1], wg[-1]


@dataclass(frozen=True)
class CbBracket:
    """Two-sided bracket on the completely bounded multiplier norm."""

    m_lower: float
    m_upper: float
    log_weights: np.ndarray
    f: float
    g: float

    def __post_init__(self):
        if self.m_lower > self.m_upper + BRACKET_SLACK:
            raise ValueError(
                f"bracket inverted: lower {self.m_lower:.12g} above upper "
                f"{self.m_upper:.12g}")
        if abs(max(self.f, self.g) - self.m_upper) > 1e-10 * (1.0 + self.m_upper):
            raise ValueError("m_upper must equal max(f, g) at the stored weights")


def optimize(pair: FramePair, max_iters: int = 2000, tol: float = 1e-7,
             step0: float = 1.0, stall_window: int = 150, seed: int = 0,
             polish: bool = True, cb_order: int = 2,
             cb_samples: int = 12) -> CbBracket:
    """Minimize max(f, g) over log-weights and bracket the cb norm.

    Phase one is projected subgradient descent with diminishing steps
    s_i = step0 / sqrt(i + 1), rebalancing after every step and keeping
    the best iterate.  Phase two polishes with the annealed smoothed
    Newton method, which pushes the optimality gap to roughly 1e-10
    relative; phase one therefore hands off as soon as progress per
    stall_window iterations falls below a coarse threshold.  With
    polish=False the subgradient phase runs until the improvement per
    window drops below tol.  The subgradient is normalized by the
    current objective so steps are scale free.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if tol <= 0.0 or step0 <= 0.0:
        raise ValueError("tol and step0 must be positive")
    tiny = np.finfo(np.float64).tiny
    # start at the per-vector scale equalizer: exact at d = 1, and any
    # diagonal rescaling of the pair shifts this start by the amount
    # that cancels it, so the descent is equivariant under mangling
    t = np.log(np.linalg.norm(pair.ys, axis=1) / np.linalg.norm(pair.xs, axis=1))
    # balancing is a common shift, which leaves both top eigenvectors
    # unchanged, so one eigendecomposition pair per iteration suffices
    f, vf, g, vg = _branch_tops(pair, t)
    t = t + 0.5 * np.log(g / f)
    f = g = float(np.sqrt(f * g))
    best_h = f
    best_t = t.copy()
    marker = best_h
    since_mark = 0
    stall_tol = max(tol, 1e-3) if polish else tol
    tie_gap = 1e-9 * max(1.0, f, g)
    for i in range(max_iters):
        gx = np.exp(t) * np.abs(pair.xs.conj() @ vf) ** 2
        gy = np.exp(-t) * np.abs(pair.ys.conj() @ vg) ** 2
        if f - g > tie_gap:
            sub = gx
        elif g - f > tie_gap:
            sub = -gy
        else:
            sub = 0.5 * (gx - gy)
        h_cur = max(f, g)
        if float(np.sum(np.abs(sub))) <= 1e-15 * (1.0 + h_cur):
            break
        t = t - (step0 / np.sqrt(i + 1.0)) * sub / max(h_cur, tiny)
        f, vf, g, vg = _branch_tops(pair, t)
        t = t + 0.5 * np.log(g / f)
        f = g = float(np.sqrt(f * g))
        tie_gap = 1e-9 * max(1.0, f)
        if f < best_h:
            best_h = f
            best_t = t.copy()
        since_mark += 1
        if since_mark >= stall_window:
            if marker - best_h <= stall_tol * best_h:
                break
            marker = best_h
            since_mark = 0
    if polish:
        polished = _newton_polish(pair, best_t)
        f_p, g_p = bessel_pair_objective(pair, polished)
        if max(f_p, g_p) <= best_h:
            best_t = polished
            best_h = max(f_p, g_p)
    best_t = balance(pair, best_t)
    f, g = bessel_pair_objective(pair, best_t)
    lower = cb_lower_sampled(pair, m=cb_order, samples=cb_samples, seed=seed)
    return CbBracket(lower, max(f, g), best_t, f, g)


@dataclass(frozen=True)
class ScalingResult:
    """Scalars applied to the pair plus the resulting frame bounds."""

    alpha: np.ndarray
    bounds_x: BesselBounds
    bounds_y: BesselBounds


def extract_scaling(pair: FramePair, log_weights: np.ndarray,
                    frame_tol: float = 1e-10) -> ScalingResult:
    """Turn log-weights into vector scalars and the scaled frame bounds.

    The first family becomes (e^{t_k/2} x_k), the second
    (e^{-t_k/2} y_k); their upper bounds are exactly f and g.
    """
    t = _check_weights(log_weights, pair.n)
    alpha = np.exp(0.5 * t)
    bx = bessel_and_frame_bounds(alpha[:, None] * pair.xs, frame_tol=frame_tol)
    by = bessel_and_frame_bounds(pair.ys / alpha[:, None], frame_tol=frame_tol)
    return ScalingResult(alpha, bx, by)


@dataclass(frozen=True)
class Dilation:
    """Row and column isometric factors through a larger space.

    The dilation space is C^n (+) C^d (+) C^d.  For every mask a the
    masked map equals multiplier_norm * v1^H pi(a) v2 where pi(a) is
    diagonal with entries (a_1, ..., a_n, a_1, ..., a_1).
    """

    v1: np.ndarray
    v2: np.ndarray
    multiplier_norm: float
    n: int
    dim: int


def build_dilation(pair: FramePair, log_weights: np.ndarray,
                   multiplier_norm: float, tol: float = 1e-10) -> Dilation:
    """Assemble the explicit dilation at the given weights and norm bound.

    Requires both weighted Bessel bounds to stay below multiplier_norm
    (within tol) so the isometry paddings exist.
    """
    t = _check_weights(log_weights, pair.n)
    if multiplier_norm <= 0.0:
        raise ValueError("multiplier_norm must be positive")
    alpha = np.exp(0.5 * t)
    wx = alpha[:, None] * pair.xs
    wy = pair.ys / alpha[:, None]
    gx = np.einsum("ki,kj->ij", wx, wx.conj())
    gy = np.einsum("ki,kj->ij", wy, wy.conj())
    d = pair.dim
    eye = np.eye(d, dtype=np.complex128)
    pad1 = psd_sqrt(eye - gx / multiplier_norm, tol=tol)
    pad2 = psd_sqrt(eye - gy / multiplier_norm, tol=tol)
    root = np.sqrt(multiplier_norm)
    zeros = np.zeros((d, d), dtype=np.complex128)
    v1 = np.concatenate([wx.conj() / root, zeros, pad1], axis=0)
    v2 = np.concatenate([wy.conj() / root, pad2, zeros], axis=0)
    return Dilation(v1, v2, float(multiplier_norm), pair.n, d)


def dilation_reconstruct(dil: Dilation, mask: np.ndarray) -> np.ndarray:
    """Evaluate multiplier_norm * v1^H pi(mask) v2; equals the masked map."""
    a = check_mask(mask, dil.n)
    p = np.concatenate([a, np.full(2 * dil.dim, a[0])])
    return dil.multiplier_norm * (dil.v1.conj().T @ (p[:, None] * dil.v2))
