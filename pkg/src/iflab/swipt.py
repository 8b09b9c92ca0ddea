"""Transmit-power minimization for the MISO interference channel with joint
information decoding and RF energy harvesting at power-splitting receivers.

Each of K transmitters (K antennas each) serves one single-antenna receiver
that splits its received signal: a fraction ``rho`` feeds the information
decoder (SINR constraint) and ``1 - rho`` feeds the harvesting circuit
(minimum-power constraint).  Cross links hurt the SINR but help harvesting,
which is exactly the trade-off the optimal design exploits and zero forcing
gives away.

Receive model per user k (conversion efficiency absorbed into the
harvesting threshold):

* ``SINR_k = rho_k |h_kk^H w_k|^2 / (rho_k (sum_{j!=k} |h_jk^H w_j|^2 + sigma2) + sigmac2)``
* ``EH_k   = (1 - rho_k) (sum_j |h_jk^H w_j|^2 + sigma2)``
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .channel_model import RngStream
from .errors import DegenerateEh, Infeasible, InvalidSplit, ShapeError, ZfInfeasible
from .results import CurveResult, Series

__all__ = [
    "SwiptProblem",
    "SwiptSolution",
    "evaluate",
    "zf_solution",
    "optimal_solution",
    "power_ratio_experiment",
]


@dataclass(frozen=True)
class SwiptProblem:
    """MISO-IC SWIPT instance.

    ``channels[j, k]`` is the length-K channel vector from transmitter j to
    receiver k; ``gamma`` are linear SINR thresholds and ``epsilon`` the
    harvested-power thresholds.
    """

    channels: np.ndarray      # (K, K, K) complex
    gamma: np.ndarray         # (K,) linear SINR thresholds
    epsilon: np.ndarray       # (K,) harvesting thresholds
    sigma2: float = 1.0       # antenna noise power
    sigmac2: float = 1.0      # information-branch processing noise power

    def __post_init__(self):
        h = np.asarray(self.channels)
        k = h.shape[0]
        if h.shape != (k, k, k):
            raise ShapeError(f"channels must be (K, K, K), got {h.shape}")
        object.__setattr__(self, "gamma", np.broadcast_to(np.asarray(self.gamma, float), (k,)).copy())
        object.__setattr__(self, "epsilon", np.broadcast_to(np.asarray(self.epsilon, float), (k,)).copy())
        if np.any(self.gamma <= 0):
            raise ValueError("SINR thresholds must be positive")
        if np.any(self.epsilon < 0):
            raise ValueError("harvesting thresholds must be nonnegative")
        if not (self.sigma2 > 0 and self.sigmac2 > 0):
            raise ValueError("noise powers must be positive")

    @property
    def users(self):
        return self.channels.shape[0]


@dataclass
class SwiptSolution:
    """Beamformers (row k is transmitter k's vector, power included), power
    splitting ratios, and bookkeeping about how the solution was obtained."""

    beamformers: np.ndarray   # (K, K) complex
    rho: np.ndarray           # (K,) in (0, 1)
    approximate: bool = False
    source: str = "zf"
    rank_ratios: np.ndarray = field(default=None)

    @property
    def total_power(self):
        return float(np.sum(np.abs(self.beamformers) ** 2))


def _cross_powers(problem, beamformers):
    """t[j, k] = |h_jk^H w_j|^2 received at k from transmitter j."""
    # channels: (j, k, antenna); beamformers: (j, antenna)
    inner = np.einsum("jka,ja->jk", problem.channels.conj(), beamformers)
    return np.abs(inner) ** 2


def evaluate(problem: SwiptProblem, solution: SwiptSolution):
    """Per-user ``(SINR, EH)`` and total transmit power of a solution."""
    rho = np.asarray(solution.rho, float)
    if np.any(rho <= 0) or np.any(rho >= 1):
        raise InvalidSplit(f"splitting ratios must lie in (0, 1), got {rho}")
    t = _cross_powers(problem, solution.beamformers)
    direct = np.diagonal(t)
    incident = t.sum(axis=0)
    interference = incident - direct
    sinr = rho * direct / (rho * (interference + problem.sigma2) + problem.sigmac2)
    eh = (1.0 - rho) * (incident + problem.sigma2)
    return sinr, eh, float(np.sum(np.abs(solution.beamformers) ** 2))


def _zf_direction(problem, k):
    """Unit direction for transmitter k nulling all unintended receivers."""
    h = problem.channels
    others = [h[k, j] for j in range(problem.users) if j != k]
    d = h[k, k].copy()
    if others:
        a = np.stack(others, axis=1)
        q, _ = np.linalg.qr(a)
        d = d - q @ (q.conj().T @ d)
    norm = np.linalg.norm(d)
    if norm < 1e-9 * np.linalg.norm(h[k, k]):
        raise ZfInfeasible(f"direct channel of user {k} lies in the interference span")
    return d / norm, float(norm**2)


def _zf_power_split(gamma, eps, g, sigma2, sigmac2):
    """Closed-form (p, rho) making both per-user constraints tight.

    With interference nulled the two constraints decouple per user and
    reduce to one quadratic in rho with a unique root in (0, 1).
    """
    if eps <= 0.0:
        raise DegenerateEh("zero harvesting threshold pushes rho to the boundary 1")
    a = (gamma + 1.0) * sigma2
    b = eps + gamma * sigmac2 - (gamma + 1.0) * sigma2
    c = -gamma * sigmac2
    rho = (-b + math.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
    if not 0.0 < rho < 1.0 - 1e-12:
        raise DegenerateEh(f"splitting ratio degenerates to rho={rho}")
    p = gamma * (rho * sigma2 + sigmac2) / (rho * g)
    return p, rho


def zf_solution(problem: SwiptProblem) -> SwiptSolution:
    """Zero-forcing beamforming with the unique closed-form power allocation.

    Transmitter k beamforms onto the projection of its direct channel away
    from all its cross channels, so no receiver sees any interference, and
    the per-user power and splitting ratio solve both constraints with
    equality.
    """
    k_users = problem.users
    w = np.zeros((k_users, k_users), dtype=np.complex128)
    rho = np.zeros(k_users)
    for k in range(k_users):
        direction, g = _zf_direction(problem, k)
        p, r = _zf_power_split(
            problem.gamma[k], problem.epsilon[k], g, problem.sigma2, problem.sigmac2
        )
        w[k] = math.sqrt(p) * direction
        rho[k] = r
    return SwiptSolution(beamformers=w, rho=rho, source="zf")


# ---------------------------------------------------------------------------
# Direct conic construction for the semidefinite relaxation.
#
# The relaxation is solved hundreds of times per experiment; assembling the
# Clarabel cone program by hand avoids re-canonicalizing an identical
# structure on every call.  The cvxpy construction below remains as the
# reference implementation and the fallback path.
# ---------------------------------------------------------------------------

_RHO_MARGIN = 1e-7


def _hermitian_param_count(k):
    return k * k  # k diagonal entries + 2 * k(k-1)/2 off-diagonal components


def _hermitian_pairs(k):
    return [(p, q) for q in range(k) for p in range(q)]


def _quadratic_form_coeffs(h):
    """Row of coefficients c with h^H W h = c . params(W).

    Parameter order: diagonal entries, then (Re, Im) per upper off-diagonal
    pair in column order.
    """
    k = h.size
    coeffs = np.empty(k * k)
    coeffs[:k] = np.abs(h) ** 2
    z = np.conj(h)[:, None] * h[None, :]
    base = k
    for p, q in _hermitian_pairs(k):
        coeffs[base] = 2.0 * z[p, q].real
        coeffs[base + 1] = -2.0 * z[p, q].imag
        base += 2
    return coeffs


def _psd_embedding_entries(k):
    """COO entries of svec([[Re W, -Im W], [Im W, Re W]]) over params(W).

    Uses the scaled-triangle convention (upper triangle stacked by columns,
    off-diagonal entries times sqrt(2)) of the PSD triangle cone.
    """
    root2 = math.sqrt(2.0)
    pair_index = {pq: i for i, pq in enumerate(_hermitian_pairs(k))}

    def param_re(p, q):
        if p == q:
            return p, 1.0
        lo, hi = min(p, q), max(p, q)
        return k + 2 * pair_index[(lo, hi)], 1.0

    def param_im(p, q):
        # Im W[p, q]; antisymmetric with zero diagonal
        if p == q:
            return None, 0.0
        lo, hi = min(p, q), max(p, q)
        sign = 1.0 if (p, q) == (lo, hi) else -1.0
        return k + 2 * pair_index[(lo, hi)] + 1, sign

    rows, cols, vals = [], [], []
    idx = 0
    for c in range(2 * k):
        for r in range(c + 1):
            scale = 1.0 if r == c else root2
            if r < k and c < k:
                col, sign = param_re(r, c)
            elif r < k <= c:
                col, sign = param_im(r, c - k)   # block is -Im W
                sign = -sign
            else:
                col, sign = param_re(r - k, c - k)
            if col is not None and sign != 0.0:
                rows.append(idx)
                cols.append(col)
                vals.append(scale * sign)
            idx += 1
    return rows, cols, vals, idx


def _direct_skeleton(k):
    """Channel-independent parts of the cone program, cached per K."""
    import clarabel
    from scipy import sparse

    n_w = k * _hermitian_param_count(k)
    r0, u0, v0 = n_w, n_w + k, n_w + 2 * k
    n = n_w + 3 * k

    rows, cols, vals = [], [], []
    b_rows = {}
    row = 2 * k  # SINR and EH rows are filled per instance

    # rho/u/v bound rows (nonnegative cone, after the channel rows)
    for i in range(k):   # rho >= margin
        rows.append(row); cols.append(r0 + i); vals.append(-1.0)
        b_rows[row] = -_RHO_MARGIN
        row += 1
    for i in range(k):   # rho <= 1 - margin
        rows.append(row); cols.append(r0 + i); vals.append(1.0)
        b_rows[row] = 1.0 - _RHO_MARGIN
        row += 1
    for i in range(k):   # u >= 0
        rows.append(row); cols.append(u0 + i); vals.append(-1.0)
        row += 1
    for i in range(k):   # v >= 0
        rows.append(row); cols.append(v0 + i); vals.append(-1.0)
        row += 1

    # hyperbolic SOCs: u_k rho_k >= 1 and v_k (1 - rho_k) >= 1
    for i in range(k):
        rows += [row, row]; cols += [u0 + i, r0 + i]; vals += [-1.0, -1.0]
        b_rows[row + 1] = 2.0
        rows += [row + 2, row + 2]; cols += [u0 + i, r0 + i]; vals += [-1.0, 1.0]
        row += 3
    for i in range(k):
        rows += [row, row]; cols += [v0 + i, r0 + i]; vals += [-1.0, 1.0]
        b_rows[row] = 1.0
        b_rows[row + 1] = 2.0
        rows += [row + 2, row + 2]; cols += [v0 + i, r0 + i]; vals += [-1.0, -1.0]
        b_rows[row + 2] = -1.0
        row += 3

    # PSD embedding per transmitter, negated for s = b - Ax = Ex
    e_rows, e_cols, e_vals, e_len = _psd_embedding_entries(k)
    for j in range(k):
        off = j * _hermitian_param_count(k)
        for rr, cc, vv in zip(e_rows, e_cols, e_vals):
            rows.append(row + rr); cols.append(off + cc); vals.append(-vv)
        row += e_len

    m = row
    b = np.zeros(m)
    for r, val in b_rows.items():
        b[r] = val
    q = np.zeros(n)
    for j in range(k):
        q[j * _hermitian_param_count(k): j * _hermitian_param_count(k) + k] = 1.0

    cones = [clarabel.NonnegativeConeT(6 * k)]
    cones += [clarabel.SecondOrderConeT(3)] * (2 * k)
    cones += [clarabel.PSDTriangleConeT(2 * k)] * k
    p_mat = sparse.csc_matrix((n, n))
    return {
        "n": n, "m": m, "k": k, "r0": r0, "u0": u0, "v0": v0,
        "rows": rows, "cols": cols, "vals": vals, "b": b, "q": q,
        "cones": cones, "p_mat": p_mat,
    }


_SKELETONS = {}


def _solve_sdr_direct(problem):
    """Solve the relaxation through Clarabel's native interface.

    Returns ``(w_list, rho)`` or None when the solver cannot produce a
    usable iterate (the caller then falls back to the cvxpy path).
    """
    import clarabel
    from scipy import sparse

    k = problem.users
    if k not in _SKELETONS:
        _SKELETONS[k] = _direct_skeleton(k)
    sk = _SKELETONS[k]
    npar = _hermitian_param_count(k)

    rows = list(sk["rows"])
    cols = list(sk["cols"])
    vals = list(sk["vals"])
    b = sk["b"].copy()
    coeffs = {
        (j, kk): _quadratic_form_coeffs(problem.channels[j, kk])
        for j in range(k) for kk in range(k)
    }
    for kk in range(k):
        gam = problem.gamma[kk]
        # SINR row kk: t_kk - gam * sum_{j != kk} t_jk - gam sigmac2 u_k >= gam sigma2
        for j in range(k):
            weight = 1.0 if j == kk else -gam
            base = j * npar
            cj = coeffs[(j, kk)]
            for c_idx in range(npar):
                rows.append(kk); cols.append(base + c_idx); vals.append(-weight * cj[c_idx])
        rows.append(kk); cols.append(sk["u0"] + kk); vals.append(gam * problem.sigmac2)
        b[kk] = -gam * problem.sigma2
        # EH row: sum_j t_jk - eps v_k >= -sigma2
        r_eh = k + kk
        for j in range(k):
            base = j * npar
            cj = coeffs[(j, kk)]
            for c_idx in range(npar):
                rows.append(r_eh); cols.append(base + c_idx); vals.append(-cj[c_idx])
        rows.append(r_eh); cols.append(sk["v0"] + kk); vals.append(problem.epsilon[kk])
        b[r_eh] = problem.sigma2

    a_mat = sparse.csc_matrix(
        (vals, (rows, cols)), shape=(sk["m"], sk["n"])
    )
    for reg in (None, 1e-7):
        settings = clarabel.DefaultSettings()
        settings.verbose = False
        # the certificate below repairs residuals, so solver targets well
        # beyond the 1e-6 constraint tolerance are wasted iterations
        settings.tol_gap_abs = 1e-7
        settings.tol_gap_rel = 1e-7
        settings.tol_feas = 1e-8
        if reg is not None:
            settings.static_regularization_constant = reg
        solver = clarabel.DefaultSolver(sk["p_mat"], sk["q"], a_mat, b, sk["cones"], settings)
        sol = solver.solve()
        status = str(sol.status)
        if status in ("Solved", "AlmostSolved"):
            x = np.asarray(sol.x)
            w_list = []
            for j in range(k):
                params = x[j * npar:(j + 1) * npar]
                w = np.diag(params[:k]).astype(np.complex128)
                base = k
                for p, q_idx in _hermitian_pairs(k):
                    w[p, q_idx] = params[base] + 1j * params[base + 1]
                    w[q_idx, p] = params[base] - 1j * params[base + 1]
                    base += 2
                w_list.append(w)
            rho = np.clip(x[sk["r0"]: sk["r0"] + k], 1e-9, 1.0 - 1e-9)
            return w_list, rho
        if status in ("PrimalInfeasible", "AlmostPrimalInfeasible"):
            raise Infeasible("SWIPT relaxation reported primal infeasible")
    return None


def _build_sdr(problem):
    import cvxpy as cp

    k_users = problem.users
    h = problem.channels
    w_mats = [cp.Variable((k_users, k_users), hermitian=True) for _ in range(k_users)]
    rho = cp.Variable(k_users)
    u = cp.Variable(k_users)   # u_k >= 1 / rho_k
    v = cp.Variable(k_users)   # v_k >= 1 / (1 - rho_k)
    slack = cp.Variable(nonneg=True)
    cons = [wm >> 0 for wm in w_mats]
    cons += [rho >= 1e-7, rho <= 1.0 - 1e-7, u >= 0, v >= 0]
    ones = np.ones(k_users)
    cons.append(cp.SOC(u + rho, cp.vstack([2.0 * ones, u - rho])))
    cons.append(cp.SOC(v + (1.0 - rho), cp.vstack([2.0 * ones, v - (1.0 - rho)])))
    t = {}
    for j in range(k_users):
        for k in range(k_users):
            t[(j, k)] = cp.real(h[j, k].conj() @ w_mats[j] @ h[j, k])
    sinr_cons, eh_cons = [], []
    for k in range(k_users):
        interf = sum(t[(j, k)] for j in range(k_users) if j != k)
        sinr_cons.append(
            t[(k, k)] + slack
            >= problem.gamma[k] * (interf + problem.sigma2)
            + problem.gamma[k] * problem.sigmac2 * u[k]
        )
        total = sum(t[(j, k)] for j in range(k_users))
        eh_cons.append(total + problem.sigma2 + slack >= problem.epsilon[k] * v[k])
    cons += sinr_cons + eh_cons
    power = sum(cp.real(cp.trace(wm)) for wm in w_mats)
    return w_mats, rho, slack, cons, power


def _diagnose_infeasible(problem, solver):
    import cvxpy as cp

    w_mats, rho, slack, cons, power = _build_sdr(problem)
    prob = cp.Problem(cp.Minimize(slack), cons)
    prob.solve(solver=solver)
    index = None
    if rho.value is not None:
        sol = _extract(problem, [w.value for w in w_mats], rho.value)
        sinr, eh, _ = evaluate(problem, sol)
        viol_sinr = (problem.gamma - sinr) / problem.gamma
        viol_eh = (problem.epsilon - eh) / np.maximum(problem.epsilon, 1e-30)
        if viol_sinr.max() >= viol_eh.max():
            index = ("sinr", int(np.argmax(viol_sinr)))
        else:
            index = ("eh", int(np.argmax(viol_eh)))
    raise Infeasible(f"SWIPT problem infeasible (max violation at {index})", index)


def _extract(problem, w_list, rho, source="sdr"):
    """Rank-1 beamformer extraction from lifted matrices."""
    k_users = problem.users
    w = np.zeros((k_users, k_users), dtype=np.complex128)
    ratios = np.zeros(k_users)
    for k in range(k_users):
        mat = np.asarray(w_list[k])
        mat = 0.5 * (mat + mat.conj().T)
        vals, vecs = np.linalg.eigh(mat)
        lead = max(vals[-1], 0.0)
        ratios[k] = 0.0 if lead == 0.0 else max(vals[-2], 0.0) / lead if k_users > 1 else 0.0
        w[k] = math.sqrt(lead) * vecs[:, -1]
    r = np.clip(np.asarray(rho, float), 1e-9, 1.0 - 1e-9)
    return SwiptSolution(beamformers=w, rho=r, source=source, rank_ratios=ratios)


def _solve_sdr_cvxpy(problem, solver):
    """Reference/fallback relaxation solve through cvxpy.

    Returns ``(w_list, rho)`` or None when every attempt fails.
    """
    import cvxpy as cp

    w_mats, rho, slack, cons, power = _build_sdr(problem)
    prob = cp.Problem(cp.Minimize(power), cons + [slack == 0.0])
    attempts = [
        dict(solver=solver),
        # light static regularization rescues ill-conditioned high-SINR
        # instances that otherwise end in NumericalError
        dict(solver=solver, static_regularization_constant=1e-7),
    ]
    for kwargs in attempts:
        try:
            prob.solve(**kwargs)
        except (TypeError, cp.error.SolverError):
            continue
        if prob.status in ("infeasible", "infeasible_inaccurate"):
            _diagnose_infeasible(problem, solver)
        if rho.value is not None:
            return [w.value for w in w_mats], np.asarray(rho.value, float)
    return None


def _repair_scale(problem, sol):
    """Minimal common power up-scaling restoring exact feasibility.

    SINR and EH are both increasing in a common scaling of all beamformer
    powers (noise stays fixed), so the smallest feasible scale has a closed
    form per constraint; returns None when no finite scaling works.
    """
    t = _cross_powers(problem, sol.beamformers)
    direct = np.diagonal(t)
    incident = t.sum(axis=0)
    interference = incident - direct
    rho = sol.rho
    scale = 1.0
    for k in range(problem.users):
        margin = rho[k] * (direct[k] - problem.gamma[k] * interference[k])
        need = problem.gamma[k] * (rho[k] * problem.sigma2 + problem.sigmac2)
        if margin <= 0.0:
            return None
        scale = max(scale, need / margin)
        eh_need = problem.epsilon[k] / (1.0 - rho[k]) - problem.sigma2
        if eh_need > 0.0:
            if incident[k] <= 0.0:
                return None
            scale = max(scale, eh_need / incident[k])
    return scale


def optimal_solution(problem: SwiptProblem, solver="CLARABEL") -> SwiptSolution:
    """Jointly optimal beamformers and splitting ratios by semidefinite
    relaxation over the lifted matrices ``W_k = w_k w_k^H``.

    The relaxation is convex jointly in the matrices and the splitting
    ratios.  Rank-1 beamformers are extracted afterwards; if the extraction
    leaves any constraint violated beyond tolerance the powers are scaled
    up minimally and the solution is flagged ``approximate``.  The returned
    power never exceeds the zero-forcing solution's (that point is feasible
    here, and is returned outright if numerics ever put the extraction
    above it).
    """
    lifted = None
    if solver == "CLARABEL":
        try:
            lifted = _solve_sdr_direct(problem)
        except ImportError:
            lifted = None
    if lifted is None:
        lifted = _solve_sdr_cvxpy(problem, solver)
    if lifted is None:
        # conic solvers gave up; the ZF point is a certified feasible
        # fallback whenever it exists
        zf = zf_solution(problem)
        zf.source = "zf_fallback"
        zf.approximate = True
        return zf

    sol = _extract(problem, *lifted)
    sinr, eh, _ = evaluate(problem, sol)
    tol = 1e-6
    ok = np.all(sinr >= problem.gamma * (1.0 - tol)) and np.all(
        eh >= problem.epsilon * (1.0 - tol)
    )
    approximate = bool(np.any(sol.rank_ratios > 1e-6))
    if not ok:
        scale = _repair_scale(problem, sol)
        if scale is None:
            sol = None
        else:
            sol.beamformers *= math.sqrt(scale)
            approximate = approximate or scale > 1.0 + 1e-9

    try:
        zf = zf_solution(problem)
    except (ZfInfeasible, DegenerateEh):
        zf = None
    if sol is None:
        if zf is None:
            raise Infeasible("rank-1 extraction failed and no ZF fallback exists")
        zf.source = "zf_fallback"
        return zf
    if zf is not None and sol.total_power > zf.total_power:
        zf.source = "zf_fallback"
        zf.rank_ratios = sol.rank_ratios
        return zf
    sol.approximate = approximate
    return sol


def _ratio_chunk(key, start, count, gamma_lin, eps_levels, k_users, sigma2, sigmac2, solver):
    """ZF/optimal power ratios for draws [start, start+count) over all cells.

    Channels are drawn once per Monte Carlo draw and shared by every
    (gamma, epsilon) cell; returns an array of shape (cells, count) with
    NaN marking draws where either method failed.
    """
    base = RngStream(key[0], key[1], key[2])
    cells = [(g, e) for g in gamma_lin for e in eps_levels]
    out = np.full((len(cells), count), np.nan)
    for i in range(count):
        g = base.child(start + i).generator
        h = (g.standard_normal((k_users, k_users, k_users))
             + 1j * g.standard_normal((k_users, k_users, k_users))) / np.sqrt(2.0)
        for ci, (gam, eps) in enumerate(cells):
            problem = SwiptProblem(
                channels=h,
                gamma=np.full(k_users, gam),
                epsilon=np.full(k_users, eps),
                sigma2=sigma2,
                sigmac2=sigmac2,
            )
            try:
                zf = zf_solution(problem)
                opt = optimal_solution(problem, solver=solver)
            except (ZfInfeasible, DegenerateEh, Infeasible):
                continue
            out[ci, i] = zf.total_power / opt.total_power
    return out


def power_ratio_experiment(
    gamma_grid_db,
    epsilon_grid,
    trials,
    rng: RngStream,
    k=8,
    sigma2=1.0,
    sigmac2=1.0,
    workers=1,
    solver="CLARABEL",
    chunk_size=1,
):
    """Average ZF-to-optimal transmit power ratio per (gamma, epsilon) cell.

    Ratios are averaged over channel draws that are feasible for both
    methods; infeasible draws are discarded and counted.  Every cell reuses
    the same channel draws so the monotone trends in gamma and epsilon are
    not masked by sampling noise.
    """
    gamma_grid_db = list(gamma_grid_db)
    epsilon_grid = list(epsilon_grid)
    gamma_lin = tuple(10.0 ** (v / 10.0) for v in gamma_grid_db)
    key = (rng.master_seed, rng.stream_id, rng._path)
    n_chunks = (trials + chunk_size - 1) // chunk_size
    args = []
    for i in range(n_chunks):
        start = i * chunk_size
        count = min(chunk_size, trials - start)
        args.append((key, start, count, gamma_lin, tuple(epsilon_grid), k, sigma2, sigmac2, solver))
    from .parallel import run_indexed

    parts = run_indexed(_ratio_chunk, args, workers)
    ratios = np.concatenate(parts, axis=1)

    rows_gamma, rows_eps, mean, stderr, nfeas, ninf = [], [], [], [], [], []
    ci = 0
    for gi, g_db in enumerate(gamma_grid_db):
        for eps in epsilon_grid:
            vals = ratios[ci]
            good = vals[~np.isnan(vals)]
            rows_gamma.append(g_db)
            rows_eps.append(eps)
            mean.append(float(np.mean(good)) if good.size else math.nan)
            stderr.append(float(np.std(good, ddof=1) / math.sqrt(good.size)) if good.size > 1 else math.nan)
            nfeas.append(int(good.size))
            ninf.append(int(vals.size - good.size))
            ci += 1
    return CurveResult(
        axis_name="gamma_db",
        axis=rows_gamma,
        series=[
            Series("epsilon", rows_eps),
            Series("ratio_mean", mean),
            Series("ratio_stderr", stderr),
            Series("feasible_count", nfeas),
            Series("infeasible_count", ninf),
        ],
        metadata={
            "experiment": "swipt",
            "k": k,
            "trials": trials,
            "sigma2": sigma2,
            "sigmac2": sigmac2,
            "solver": solver,
            "master_seed": rng.master_seed,
            "stream_id": rng.stream_id,
        },
    )
