"""Executable checks of every inequality behind the rescaling bound.

Each check recomputes both sides of one estimate on concrete data,
returns a record of the numbers, and raises VerificationError when the
required slack is violated.  The suites at the bottom run the checks over
seeded random corpora and aggregate machine-readable reports.

Tolerance policy: exact algebraic identities must hold to 1e-10 relative,
one-sided inequalities may dip 1e-9 relative below zero slack, and
statistical experiment thresholds carry an explicit 5 percent cushion.
"""

from dataclasses import dataclass

import numpy as np

from .frames import FramePair, pair_operator
from .instances import (
    canonical_dual_pair,
    d1_scalar_pair,
    gaussian_pair,
    haar_unitary,
    mangle,
    mangling_scalars,
    onb_union_pair,
    random_complex,
)
from .linalg import top_singular_triplet, trace_norm
from .multiplier import (
    amplified_apply,
    check_amplified,
    mask_matrix,
    norm_lower_alternating,
    norm_oracle_grid,
)
from .rescale import (
    bessel_pair_objective,
    build_dilation,
    dilation_reconstruct,
    extract_scaling,
    optimize,
    subgradient,
)

IDENTITY_RTOL = 1e-10
INEQ_RTOL = 1e-9
EXPERIMENT_CUSHION = 5e-2
KHINTCHINE_FACTOR = np.sqrt(0.5)
MAX_PATTERN_ORDER = 14


class VerificationError(AssertionError):
    """A checked inequality fell outside its tolerance."""

    def __init__(self, message: str, record=None):
        super().__init__(message)
        self.record = record or {}


def sign_patterns(m: int) -> np.ndarray:
    """All 2^m sign vectors in {-1, +1}^m as a (2^m, m) float array."""
    if not 1 <= m <= MAX_PATTERN_ORDER:
        raise ValueError(f"m must be in [1, {MAX_PATTERN_ORDER}], got {m}")
    bits = (np.arange(1 << m)[:, None] >> np.arange(m)[None, :]) & 1
    return 2.0 * bits - 1.0


def rademacher_function(k: int, t: np.ndarray) -> np.ndarray:
    """sign(sin(2^k pi t)), the k-th square-wave function on [0, 1]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return np.sign(np.sin((2.0 ** k) * np.pi * np.asarray(t, dtype=np.float64)))


def khintchine_check(a: np.ndarray) -> dict:
    """First-moment lower bound: E|sum_k s_k a_k| >= sqrt(1/2) ||a||_2.

    The expectation is exact over all sign patterns; the constant
    sqrt(1/2) is the best possible, attained at two equal entries.
    """
    a = np.asarray(a, dtype=np.complex128).reshape(-1)
    if a.size < 1:
        raise ValueError("need at least one coefficient")
    signs = sign_patterns(a.size)
    lhs = float(np.mean(np.abs(signs @ a)))
    rhs = KHINTCHINE_FACTOR * float(np.sqrt(np.sum(np.abs(a) ** 2)))
    record = {"lhs": lhs, "rhs": rhs,
              "ratio": lhs / rhs if rhs > 0.0 else np.inf, "m": int(a.size)}
    if lhs < rhs - 1e-12 * (1.0 + rhs):
        raise VerificationError(
            f"first-moment bound violated: {lhs:.15g} < {rhs:.15g}", record)
    return record


def trace_lemma_check(alpha: np.ndarray, beta: np.ndarray) -> dict:
    """Trace norm of the rank-one matrix (alpha_i beta_j) is ||alpha|| ||beta||."""
    alpha = np.asarray(alpha, dtype=np.complex128).reshape(-1)
    beta = np.asarray(beta, dtype=np.complex128).reshape(-1)
    if alpha.size != beta.size or alpha.size < 1:
        raise ValueError("alpha and beta must be nonempty and of equal length")
    svd_value = trace_norm(np.outer(alpha, beta))
    closed = float(np.linalg.norm(alpha) * np.linalg.norm(beta))
    record = {"closed_form": closed, "svd_value": svd_value,
              "m": int(alpha.size)}
    if abs(svd_value - closed) > IDENTITY_RTOL * (1.0 + closed):
        raise VerificationError(
            f"rank-one trace norm mismatch: {svd_value:.15g} vs {closed:.15g}",
            record)
    return record


def _coeff_tables(pair: FramePair, us: np.ndarray, vs: np.ndarray):
    cu = pair.ys.conj() @ us.T
    cv = pair.xs @ vs.conj().T
    return cu, cv


def key_simple_check(pair: FramePair, u: np.ndarray, v: np.ndarray,
                     phi_norm: float) -> dict:
    """sum_k |<u, y_k>| |<v, x_k>| <= phi_norm ||u|| ||v||."""
    u = np.asarray(u, dtype=np.complex128).reshape(-1)
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if u.size != pair.dim or v.size != pair.dim:
        raise ValueError("u and v must live in the pair's space")
    lhs = float(np.sum(np.abs(pair.ys.conj() @ u) * np.abs(pair.xs @ v.conj())))
    rhs = phi_norm * float(np.linalg.norm(u) * np.linalg.norm(v))
    slack = rhs - lhs
    record = {"lhs": lhs, "rhs": rhs, "slack": slack}
    if slack < -INEQ_RTOL * phi_norm:
        raise VerificationError(
            f"bilinear key estimate violated: slack {slack:.3e}", record)
    return record


def super_key_check(pair: FramePair, us: np.ndarray, vs: np.ndarray,
                    phi_norm: float, chain_m_cap: int = 10) -> dict:
    """Block version with constant 2, chained through sign averages.

    For tuples (u_j), (v_i) of length m:

        sum_k ||(<u_j, y_k>)_j|| ||(<v_i, x_k>)_i||
            <= 2 phi_norm sqrt(sum ||u_j||^2) sqrt(sum ||v_i||^2)

    For m <= chain_m_cap every link is checked exhaustively over sign
    patterns: the per-index first-moment bounds, the product-of-averages
    identity, the masked-norm bound at every sign pair, and the
    quadratic-mean step.  Beyond the cap only the final inequality runs.
    """
    us = np.asarray(us, dtype=np.complex128)
    vs = np.asarray(vs, dtype=np.complex128)
    if us.ndim != 2 or vs.ndim != 2 or us.shape != vs.shape:
        raise ValueError("us and vs must be (m, d) arrays of equal shape")
    if us.shape[1] != pair.dim:
        raise ValueError("tuple vectors must live in the pair's space")
    m = us.shape[0]
    cu, cv = _coeff_tables(pair, us, vs)
    norm_u = np.sqrt(np.sum(np.abs(cu) ** 2, axis=1))
    norm_v = np.sqrt(np.sum(np.abs(cv) ** 2, axis=1))
    lhs = float(np.sum(norm_u * norm_v))
    l2_u = float(np.sqrt(np.sum(np.abs(us) ** 2)))
    l2_v = float(np.sqrt(np.sum(np.abs(vs) ** 2)))
    rhs = 2.0 * phi_norm * l2_u * l2_v
    slack = rhs - lhs
    record = {"lhs": lhs, "rhs": rhs, "slack": slack, "m": int(m),
              "chain_checked": False}
    if slack < -INEQ_RTOL * phi_norm:
        raise VerificationError(
            f"block key estimate violated: slack {slack:.3e}", record)
    if m > chain_m_cap:
        return record

    signs = sign_patterns(m)
    # per sign pattern: coefficients of the combined vectors
    p = np.abs(signs @ cu.T)
    q = np.abs(signs @ cv.T)
    mean_p = np.mean(p, axis=0)
    mean_q = np.mean(q, axis=0)

    # link 1: factored first-moment bounds, per index k
    link1 = float(np.min(2.0 * mean_p * mean_q - norm_u * norm_v))
    # link 2: the double average over independent sign pairs equals the
    # product of single averages, summed over k
    joint = p @ q.T
    link2 = abs(float(np.mean(joint)) - float(np.sum(mean_p * mean_q)))
    # link 3: masked-norm bound at every sign pair
    nu = np.sqrt(np.sum(np.abs(signs @ us) ** 2, axis=1))
    nv = np.sqrt(np.sum(np.abs(signs @ vs) ** 2, axis=1))
    link3 = float(np.min(phi_norm * np.outer(nu, nv) - joint))
    # link 4: average norm below quadratic mean, and the exact identity
    # mean ||u(s)||^2 = sum_j ||u_j||^2
    l1_u = float(np.mean(nu))
    l1_v = float(np.mean(nv))
    link4 = min(l2_u - l1_u, l2_v - l1_v)
    ms_u = float(np.sqrt(np.mean(nu ** 2)))
    ms_v = float(np.sqrt(np.mean(nv ** 2)))
    link5 = max(abs(ms_u - l2_u), abs(ms_v - l2_v))

    scale = 1.0 + abs(rhs)
    record.update({"chain_checked": True,
                   "khintchine_link": link1,
                   "average_identity": link2,
                   "masked_bound_link": link3,
                   "mean_vs_quadratic": link4,
                   "orthogonality_identity": link5})
    if link1 < -INEQ_RTOL * scale:
        raise VerificationError(
            f"per-index first-moment link violated: {link1:.3e}", record)
    if link2 > IDENTITY_RTOL * scale:
        raise VerificationError(
            f"average-product identity broken: {link2:.3e}", record)
    if link3 < -INEQ_RTOL * scale * phi_norm:
        raise VerificationError(
            f"masked-norm link violated: {link3:.3e}", record)
    if link4 < -INEQ_RTOL * (1.0 + l2_u + l2_v):
        raise VerificationError(
            f"quadratic-mean link violated: {link4:.3e}", record)
    if link5 > IDENTITY_RTOL * (1.0 + l2_u + l2_v):
        raise VerificationError(
            f"sign-average orthogonality identity broken: {link5:.3e}", record)
    return record


def rank_one_block(pair: FramePair, k: int, us: np.ndarray,
                   vs: np.ndarray) -> np.ndarray:
    """The m x m rank-one coupling matrix (<v_i, x_k><u_j, y_k>)_{ij}."""
    if not 0 <= k < pair.n:
        raise ValueError(f"index k={k} outside [0, {pair.n})")
    us = np.asarray(us, dtype=np.complex128)
    vs = np.asarray(vs, dtype=np.complex128)
    bu = us.conj() @ pair.ys[k]
    bv = vs.conj() @ pair.xs[k]
    return np.outer(bv, bu.conj())


def trace_pairing_check(pair: FramePair, mats: np.ndarray, us: np.ndarray,
                        vs: np.ndarray) -> dict:
    """Three routes to the amplified sesquilinear form agree.

    Route 1 pairs each coefficient matrix with its rank-one coupling
    block through sum_k tr(A_k B_k^t); route 2 sums the triple products
    directly; route 3 applies the amplified map and takes inner products
    with the v tuple.
    """
    a = check_amplified(mats, pair.n)
    us = np.asarray(us, dtype=np.complex128)
    vs = np.asarray(vs, dtype=np.complex128)
    m = a.shape[1]
    if us.shape != (m, pair.dim) or vs.shape != (m, pair.dim):
        raise ValueError("us and vs must have shape (m, d)")
    blocks = np.stack([rank_one_block(pair, k, us, vs) for k in range(pair.n)])
    route1 = complex(np.einsum("kij,kij->", a, blocks))
    cu, cv = _coeff_tables(pair, us, vs)
    route2 = complex(np.einsum("kij,kj,ki->", a, cu, cv))
    out = amplified_apply(pair, a, us)
    route3 = complex(np.sum(vs.conj() * out))
    scale = 1.0 + max(abs(route1), abs(route2), abs(route3))
    residual = max(abs(route1 - route2), abs(route2 - route3))
    record = {"value": route1, "residual": residual}
    if residual > IDENTITY_RTOL * scale:
        raise VerificationError(
            f"trace pairing routes disagree by {residual:.3e}", record)
    return record


def holder_trace_check(a: np.ndarray, b: np.ndarray) -> dict:
    """|tr(a b)| <= (operator norm of a) (trace norm of b)."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError("a and b must be square matrices of equal shape")
    lhs = abs(complex(np.trace(a @ b)))
    op, _, _ = top_singular_triplet(a)
    rhs = float(op) * trace_norm(b)
    slack = rhs - lhs
    record = {"lhs": lhs, "rhs": rhs, "slack": slack}
    # equality cases (unitary against its adjoint) land exactly on zero,
    # so the identity tolerance applies rather than the inequality one
    if slack < -IDENTITY_RTOL * (1.0 + rhs):
        raise VerificationError(
            f"trace duality estimate violated: slack {slack:.3e}", record)
    return record


def end_to_end_rescale_check(pair: FramePair, schauder_tol: float = 1e-8,
                             frame_tol: float = 1e-10) -> dict:
    """Reproducing pair in, frames out: both rescaled families are frames.

    Requires the pair to reproduce the identity.  Optimizes weights, then
    asserts the rescaled x family and y family are frames with upper
    bounds at most the certified multiplier bound, and that the scaled
    pair still reproduces the identity (the scaling is an exact
    reparameterization: the scalars cancel between the two families).
    """
    t = pair_operator(pair) - np.eye(pair.dim)
    dev, _, _ = top_singular_triplet(t)
    if dev > schauder_tol:
        raise ValueError(
            f"not a reproducing (Schauder) pair: identity deviation {dev:.3e}")
    bracket = optimize(pair)
    scaling = extract_scaling(pair, bracket.log_weights, frame_tol=frame_tol)
    alpha = scaling.alpha[:, None]
    scaled = FramePair(alpha * pair.xs, pair.ys / alpha)
    sdev, _, _ = top_singular_triplet(pair_operator(scaled) - np.eye(pair.dim))
    record = {
        "m_upper": bracket.m_upper,
        "m_lower": bracket.m_lower,
        "x_lower": scaling.bounds_x.lower,
        "x_upper": scaling.bounds_x.upper,
        "y_lower": scaling.bounds_y.lower,
        "y_upper": scaling.bounds_y.upper,
        "identity_deviation": float(dev),
        "scaled_identity_deviation": float(sdev),
    }
    if scaling.bounds_x.lower <= frame_tol or scaling.bounds_y.lower <= frame_tol:
        raise VerificationError(
            "rescaled family lost the lower frame bound", record)
    if scaling.bounds_x.upper > bracket.m_upper + 1e-8 or \
            scaling.bounds_y.upper > bracket.m_upper + 1e-8:
        raise VerificationError(
            "rescaled family exceeds the certified upper bound", record)
    if sdev > schauder_tol:
        raise VerificationError(
            f"scaling broke the reproducing identity: deviation {sdev:.3e}",
            record)
    return record


def exact_phi_norm(pair: FramePair, phase_steps: int = 48) -> float:
    """Multiplier norm by the best available exact route.

    Scalar pairs (d = 1) have the closed form sum_k |x_k y_k|; otherwise
    the phase grid runs, which is exact up to the advertised O(steps^-2)
    discretization bias.
    """
    if pair.dim == 1:
        return float(np.sum(np.abs(pair.xs[:, 0] * pair.ys[:, 0])))
    return norm_oracle_grid(pair, phase_steps=phase_steps).value


@dataclass(frozen=True)
class RatioConfig:
    """Configuration of the bound-versus-oracle ratio experiment."""

    instances: int = 200
    n_max: int = 5
    d_max: int = 3
    scaling_low: float = 1e-3
    scaling_high: float = 1e3
    phase_steps: int = 48
    seed: int = 0

    def __post_init__(self):
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if not 1 <= self.n_max <= 5 or not 1 <= self.d_max <= 3:
            raise ValueError("oracle limits: n_max <= 5 and d_max <= 3")
        if not 0.0 < self.scaling_low <= self.scaling_high:
            raise ValueError("bad scaling range")


def ratio_experiment(cfg: RatioConfig = RatioConfig()) -> dict:
    """Certified upper bound against the grid oracle on mangled instances.

    Every instance must keep m_upper / phi within twice (1 + 5e-2) and
    an ordered bracket; the report carries the full ratio distribution.
    """
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 2024]))
    limit = 2.0 * (1.0 + EXPERIMENT_CUSHION)
    records = []
    for i in range(cfg.instances):
        n = int(rng.integers(1, cfg.n_max + 1))
        d = int(rng.integers(1, cfg.d_max + 1))
        pair = mangle(gaussian_pair(rng, n, d),
                      mangling_scalars(rng, n, (cfg.scaling_low, cfg.scaling_high)))
        bracket = optimize(pair)
        phi = exact_phi_norm(pair, phase_steps=cfg.phase_steps)
        ratio = bracket.m_upper / phi
        rec = {"instance": i, "n": n, "d": d, "phi_norm": phi,
               "m_upper": bracket.m_upper, "m_lower": bracket.m_lower,
               "ratio": ratio}
        records.append(rec)
        if ratio > limit:
            raise VerificationError(
                f"instance {i}: ratio {ratio:.6f} above {limit:.2f}", rec)
        if bracket.m_lower > bracket.m_upper + 1e-8:
            raise VerificationError(
                f"instance {i}: bracket inverted", rec)
    ratios = np.array([r["ratio"] for r in records])
    return {"suite": "ratio", "records": records,
            "summary": {"instances": cfg.instances,
                        "max_ratio": float(np.max(ratios)),
                        "mean_ratio": float(np.mean(ratios)),
                        "limit": limit}}


def suite_khintchine(seed: int = 0, m_max: int = 12,
                     vectors: int = 1000) -> dict:
    """First-moment bound over exhaustive sign patterns, random vectors."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 101]))
    per_m = -(-vectors // m_max)
    records = []
    worst = np.inf
    for m in range(1, m_max + 1):
        for _ in range(per_m):
            a = random_complex(rng, m)
            if rng.random() < 0.25:
                a = a.real.astype(np.complex128)
            if rng.random() < 0.2:
                a = a * np.exp(rng.uniform(-3.0, 3.0, size=m))
            rec = khintchine_check(a)
            worst = min(worst, rec["ratio"])
            records.append(rec)
    equality = khintchine_check(np.array([1.0, 1.0]))
    if abs(equality["ratio"] - 1.0) > 1e-12:
        raise VerificationError(
            f"equality case drifted: ratio {equality['ratio']:.15g}", equality)
    return {"suite": "khintchine", "records": records,
            "summary": {"checks": len(records), "worst_ratio": float(worst),
                        "equality_ratio": equality["ratio"]}}


def suite_trace(seed: int = 0, draws: int = 1000, m_max: int = 8) -> dict:
    """Rank-one trace-norm identity plus trace duality on random data."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 202]))
    records = []
    worst = 0.0
    for _ in range(draws):
        m = int(rng.integers(1, m_max + 1))
        spread = np.exp(rng.uniform(-2.0, 2.0, size=m))
        alpha = random_complex(rng, m) * spread
        beta = random_complex(rng, m)
        rec = trace_lemma_check(alpha, beta)
        worst = max(worst, abs(rec["svd_value"] - rec["closed_form"])
                    / (1.0 + rec["closed_form"]))
        records.append(rec)
    duality = []
    for _ in range(50):
        m = int(rng.integers(1, 5))
        duality.append(holder_trace_check(random_complex(rng, m, m),
                                          random_complex(rng, m, m)))
    return {"suite": "trace", "records": records[:50],
            "summary": {"checks": len(records) + len(duality),
                        "worst_relative_error": float(worst)}}


def _chain_instances(rng: np.random.Generator):
    """Pairs whose multiplier norm is exactly or near-exactly computable."""
    out = []
    pair = onb_union_pair(rng, 3, 3)
    out.append((pair, 1.0))
    for _ in range(2):
        pair = d1_scalar_pair(rng, int(rng.integers(2, 6)))
        out.append((pair, exact_phi_norm(pair)))
    for n, d in ((2, 2), (3, 2), (4, 2), (4, 3)):
        pair = gaussian_pair(rng, n, d)
        out.append((pair, norm_oracle_grid(pair, phase_steps=96).value))
    return out


def suite_chain(seed: int = 0, draws: int = 100, chain_m_cap: int = 10) -> dict:
    """Key bilinear estimate and its block chain on oracle-backed pairs."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 303]))
    records = []
    worst = np.inf
    for pair, phi in _chain_instances(rng):
        for _ in range(draws):
            u = random_complex(rng, pair.dim)
            v = random_complex(rng, pair.dim)
            rec = key_simple_check(pair, u, v, phi)
            worst = min(worst, rec["slack"] / (1.0 + rec["rhs"]))
        for m in (1, 2, 3, chain_m_cap):
            us = random_complex(rng, m, pair.dim)
            vs = random_complex(rng, m, pair.dim)
            rec = super_key_check(pair, us, vs, phi, chain_m_cap=chain_m_cap)
            records.append(rec)
            worst = min(worst, rec["slack"] / (1.0 + rec["rhs"]))
        big = chain_m_cap + 2
        rec = super_key_check(pair, random_complex(rng, big, pair.dim),
                              random_complex(rng, big, pair.dim), phi,
                              chain_m_cap=chain_m_cap)
        if rec["chain_checked"]:
            raise VerificationError("chain should be skipped above the cap", rec)
        records.append(rec)
    pairing = []
    for _ in range(30):
        pair = gaussian_pair(rng, int(rng.integers(2, 5)), int(rng.integers(1, 4)))
        m = int(rng.integers(1, 4))
        pairing.append(trace_pairing_check(
            pair, random_complex(rng, pair.n, m, m),
            random_complex(rng, m, pair.dim), random_complex(rng, m, pair.dim)))
    return {"suite": "chain", "records": records,
            "summary": {"checks": len(records) + len(pairing),
                        "worst_relative_slack": float(worst)}}


def suite_dilation(seed: int = 0, instances: int = 100, masks: int = 20) -> dict:
    """Isometric dilation reconstruction on random optimized instances."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 404]))
    records = []
    worst_iso = 0.0
    worst_rec = 0.0
    for i in range(instances):
        n = int(rng.integers(1, 6))
        d = int(rng.integers(1, 4))
        pair = mangle(gaussian_pair(rng, n, d),
                      mangling_scalars(rng, n, (1e-1, 1e1)))
        bracket = optimize(pair)
        dil = build_dilation(pair, bracket.log_weights, bracket.m_upper)
        eye = np.eye(d)
        iso = max(float(np.max(np.abs(dil.v1.conj().T @ dil.v1 - eye))),
                  float(np.max(np.abs(dil.v2.conj().T @ dil.v2 - eye))))
        rec_err = 0.0
        for _ in range(masks):
            a = rng.uniform(0.0, 1.0, n) * np.exp(2j * np.pi * rng.uniform(size=n))
            diff = dilation_reconstruct(dil, a) - mask_matrix(pair, a)
            rec_err = max(rec_err, float(np.max(np.abs(diff))))
        record = {"instance": i, "n": n, "d": d, "isometry_defect": iso,
                  "reconstruction_error": rec_err}
        records.append(record)
        worst_iso = max(worst_iso, iso)
        worst_rec = max(worst_rec, rec_err)
        if iso > 1e-10:
            raise VerificationError(
                f"instance {i}: isometry defect {iso:.3e}", record)
        if rec_err > 1e-10:
            raise VerificationError(
                f"instance {i}: reconstruction error {rec_err:.3e}", record)
    return {"suite": "dilation", "records": records,
            "summary": {"instances": instances,
                        "worst_isometry_defect": worst_iso,
                        "worst_reconstruction_error": worst_rec}}


def suite_end_to_end(seed: int = 0, instances: int = 100) -> dict:
    """Mangled reproducing pairs all rescale back to genuine frames."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 505]))
    records = []
    for i in range(instances):
        d = int(rng.integers(1, 4))
        n = int(rng.integers(d, 6))
        pair = mangle(canonical_dual_pair(rng, n, d),
                      mangling_scalars(rng, n, (1e-3, 1e3)))
        rec = end_to_end_rescale_check(pair)
        rec.update({"instance": i, "n": n, "d": d})
        records.append(rec)
    return {"suite": "end_to_end", "records": records,
            "summary": {"instances": instances,
                        "min_lower_bound": min(min(r["x_lower"], r["y_lower"])
                                               for r in records)}}


def suite_d1(seed: int = 0, instances: int = 100) -> dict:
    """Scalar pairs: optimized bound vs closed form, weights vs closed form."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 606]))
    records = []
    worst_bound = 0.0
    worst_weight = 0.0
    for i in range(instances):
        n = int(rng.integers(1, 7))
        pair = d1_scalar_pair(rng, n)
        closed = float(np.sum(np.abs(pair.xs[:, 0] * pair.ys[:, 0])))
        bracket = optimize(pair)
        bound_err = abs(bracket.m_upper - closed) / closed
        alpha = np.exp(0.5 * bracket.log_weights)
        target = np.sqrt(np.abs(pair.ys[:, 0]) / np.abs(pair.xs[:, 0]))
        ratio = alpha / target
        weight_err = float(np.max(ratio) / np.min(ratio) - 1.0)
        record = {"instance": i, "n": n, "closed_form": closed,
                  "m_upper": bracket.m_upper, "bound_error": bound_err,
                  "weight_error": weight_err}
        records.append(record)
        worst_bound = max(worst_bound, bound_err)
        worst_weight = max(worst_weight, weight_err)
        if bound_err > 1e-6:
            raise VerificationError(
                f"instance {i}: scalar bound off by {bound_err:.3e}", record)
        if weight_err > 1e-4:
            raise VerificationError(
                f"instance {i}: scalar weights off by {weight_err:.3e}", record)
    return {"suite": "d1", "records": records,
            "summary": {"instances": instances, "worst_bound_error": worst_bound,
                        "worst_weight_error": worst_weight}}


def suite_invariance(seed: int = 0, instances: int = 12) -> dict:
    """Symmetry checks: diagonal reparameterization and common unitaries."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 707]))
    records = []
    for i in range(instances):
        n = int(rng.integers(2, 5))
        d = int(rng.integers(1, 4))
        pair = gaussian_pair(rng, n, d)
        beta = mangling_scalars(rng, n, (1e-3, 1e3))
        scaled = mangle(pair, beta)
        u = haar_unitary(rng, d)
        rotated = FramePair(pair.xs @ u.T, pair.ys @ u.T)

        base = optimize(pair)
        diag_drift = abs(optimize(scaled).m_upper - base.m_upper) / (
            1.0 + base.m_upper)
        unitary_drift = abs(optimize(rotated).m_upper - base.m_upper) / (
            1.0 + base.m_upper)

        alt = norm_lower_alternating(pair).value
        alt_drift = abs(norm_lower_alternating(scaled).value - alt) / (1.0 + alt)
        t_drift = float(np.max(np.abs(pair_operator(scaled) - pair_operator(pair))))
        grid_drift = 0.0
        if n <= 4:
            gr = norm_oracle_grid(pair, phase_steps=16).value
            grid_drift = abs(norm_oracle_grid(scaled, phase_steps=16).value - gr) / (
                1.0 + gr)
        record = {"instance": i, "n": n, "d": d, "diag_drift": diag_drift,
                  "unitary_drift": unitary_drift, "alternating_drift": alt_drift,
                  "pair_operator_drift": t_drift, "grid_drift": grid_drift}
        records.append(record)
        if diag_drift > 1e-6:
            raise VerificationError(
                f"instance {i}: reparameterization drift {diag_drift:.3e}", record)
        if unitary_drift > 1e-9:
            raise VerificationError(
                f"instance {i}: unitary drift {unitary_drift:.3e}", record)
        if alt_drift > 1e-6 or grid_drift > 1e-9 or t_drift > 1e-8:
            raise VerificationError(
                f"instance {i}: estimator symmetry drift", record)
    return {"suite": "invariance", "records": records,
            "summary": {"instances": instances,
                        "worst_diag_drift": max(r["diag_drift"] for r in records),
                        "worst_unitary_drift": max(r["unitary_drift"]
                                                   for r in records)}}


def suite_subgradient_fd(seed: int = 0, points: int = 100,
                         fd_step: float = 1e-5) -> dict:
    """Subgradient against central differences at smooth points.

    Points are drawn so the top eigenvalue of each branch is simple (gap
    at least 1e-6, in practice far larger) and the two branches are
    separated, keeping the objective differentiable across the stencil.
    """
    from .linalg import jacobi_eigh
    from .rescale import _rank_one_stacks

    rng = np.random.default_rng(np.random.SeedSequence([seed, 808]))
    records = []
    worst = 0.0
    produced = 0
    while produced < points:
        n = int(rng.integers(2, 6))
        d = int(rng.integers(1, 4))
        pair = gaussian_pair(rng, n, d)
        t = rng.uniform(-1.2, 1.2, n)
        xx, yy = _rank_one_stacks(pair)
        wf, _ = jacobi_eigh(np.tensordot(np.exp(t), xx, axes=1))
        wg, _ = jacobi_eigh(np.tensordot(np.exp(-t), yy, axes=1))
        f, g = wf[-1], wg[-1]
        gap_f = wf[-1] - wf[-2] if d > 1 else np.inf
        gap_g = wg[-1] - wg[-2] if d > 1 else np.inf
        scale = max(f, g)
        if min(gap_f, gap_g) < max(1e-6, 1e-2 * scale) or \
                abs(f - g) < 1e-2 * scale:
            continue
        produced += 1
        sub = subgradient(pair, t)
        fd = np.zeros(n)
        for k in range(n):
            e = np.zeros(n)
            e[k] = fd_step
            fd[k] = (max(bessel_pair_objective(pair, t + e))
                     - max(bessel_pair_objective(pair, t - e))) / (2.0 * fd_step)
        err = float(np.max(np.abs(sub - fd))) / (1.0 + scale)
        records.append({"point": produced - 1, "n": n, "d": d,
                        "max_component_error": err})
        worst = max(worst, err)
        if err > 1e-4:
            raise VerificationError(
                f"point {produced - 1}: finite differences off by {err:.3e}",
                records[-1])
    return {"suite": "subgradient_fd", "records": records,
            "summary": {"points": points, "worst_error": worst}}


SUITES = {
    "khintchine": suite_khintchine,
    "trace": suite_trace,
    "chain": suite_chain,
    "ratio": lambda seed=0, **kw: ratio_experiment(
        RatioConfig(seed=seed, **kw)),
    "dilation": suite_dilation,
}


def run_suite(name: str, seed: int = 0, **kwargs) -> dict:
    """Run one named suite; 'all' runs every named suite in order."""
    if name == "all":
        return {"suite": "all",
                "reports": [run_suite(key, seed=seed) for key in SUITES]}
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{sorted(SUITES) + ['all']}")
    return SUITES[name](seed=seed, **kwargs)
