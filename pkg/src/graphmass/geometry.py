"""Pointwise tensor geometry of graphs f: R^n -> R^m in R^(n+m).

Index conventions follow the array layout of :class:`Jet2`: latin
subscripts i, j, k, l label source coordinates and run over axis 0..n-1;
the letters a, b, g, m, t (and in comments alpha, beta, ...) label
target components over 0..m-1.  ``d1[a, i]`` is the first derivative of
component a in direction i and ``d2[a, i, j]`` the second.

Every contraction is a fixed einsum whose subscript string transcribes
the index pattern of the formula it implements, one contraction per
formula; nothing here builds subscripts programmatically.

Two independent routes exist for each curvature quantity:

* scalar curvature from the Gauss equation versus an intrinsic
  computation (Christoffel symbols of the finite-differenced metric);
* normal curvature scalar from the closed contraction formula versus
  the shape-operator commutator that the Ricci equation provides.

``check_identities`` evaluates the residuals of all tensor identities
the divergence identity S + S_perp = div X rests on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import FunctionSpec, Jet2, eval_jet
from .tensor_core import invert_spd

__all__ = [
    "Metric", "NormalGram", "CurvatureSample", "IdentityResiduals",
    "induced_metric", "normal_gram", "riemann_gauss", "scalar_curvature",
    "scalar_curvature_intrinsic", "shape_operator", "normal_scalar",
    "normal_scalar_commutator", "flux_field", "flux_divergence",
    "divergence_residual", "curvature_sample", "adm_integrand_graph",
    "adm_integrand_metric", "algebraic_residuals", "check_identities",
]

# the two Gram determinants agree in exact arithmetic; a violation
# beyond rounding means the jet data is inconsistent
DET_CONSISTENCY_RTOL = 1e-12


@dataclass
class Metric:
    """Induced metric g = I + (Df)^T Df with inverse, det and M = I - g^(-1)."""

    g: np.ndarray
    inv: np.ndarray
    det: float
    m_tensor: np.ndarray


@dataclass
class NormalGram:
    """Gram matrix U = I + Df (Df)^T of the induced normal frame."""

    u: np.ndarray
    inv: np.ndarray
    det: float


@dataclass
class CurvatureSample:
    """S, S_perp and the flux vector at one point, with the residual of
    the pointwise divergence identity S + S_perp = div X."""

    s: float
    s_perp: float
    flux: np.ndarray
    div_residual: float


@dataclass
class IdentityResiduals:
    """Residuals of the tensor identities behind the divergence identity.

    duality: the three frame-duality relations tying U^(-1) to g^(-1)
    contractions: the four contraction identities that turn the doubly
        traced Gauss equation into divergence form (first entry is the
        differential one, checked against a finite-differenced field)
    sym_antisym: the symmetric-times-antisymmetric contraction that the
        remainder-term cancellation rests on (zero by symmetry alone)
    commutator_remainder: remainder term versus the normal curvature
        commutator (differential; finite-differenced Gram derivative)
    gauss_vs_intrinsic: doubly traced Gauss equation versus the
        Christoffel route for the scalar curvature
    ricci_vs_commutator: closed normal-scalar formula versus the
        shape-operator commutator
    """

    duality: np.ndarray
    contractions: np.ndarray
    sym_antisym: float
    commutator_remainder: float
    gauss_vs_intrinsic: float
    ricci_vs_commutator: float

    def max_algebraic(self) -> float:
        return float(max(np.max(self.duality), self.contractions[1],
                         self.contractions[2], self.contractions[3],
                         self.sym_antisym, self.ricci_vs_commutator))

    def max_differential(self) -> float:
        return float(max(self.contractions[0], self.commutator_remainder,
                         self.gauss_vs_intrinsic))


# ---------------------------------------------------------------------------
# first fundamental forms


def induced_metric(jet: Jet2) -> Metric:
    g = np.eye(jet.n) + jet.d1.T @ jet.d1
    inv, det = invert_spd(g)
    return Metric(g, inv, det, np.eye(jet.n) - inv)


def normal_gram(jet: Jet2) -> NormalGram:
    u = np.eye(jet.m) + jet.d1 @ jet.d1.T
    inv, det = invert_spd(u)
    return NormalGram(u, inv, det)


def _grams(jet: Jet2) -> tuple[Metric, NormalGram]:
    gm = induced_metric(jet)
    un = normal_gram(jet)
    if abs(gm.det - un.det) > DET_CONSISTENCY_RTOL * max(gm.det, un.det):
        raise ValueError(
            f"metric and Gram determinants disagree: {gm.det!r} vs "
            f"{un.det!r}")
    return gm, un


# ---------------------------------------------------------------------------
# curvature


def riemann_gauss(jet: Jet2) -> np.ndarray:
    """Curvature tensor R[i,l,k,j] = U^(ga) (f_ij^g f_kl^a - f_ik^g f_jl^a)."""
    uinv = normal_gram(jet).inv
    d2 = jet.d2
    return (np.einsum("ga,gij,akl->ilkj", uinv, d2, d2)
            - np.einsum("ga,gik,ajl->ilkj", uinv, d2, d2))


def scalar_curvature(jet: Jet2) -> float:
    """Doubly traced curvature S = g^(ij) g^(kl) R_ilkj."""
    ginv = induced_metric(jet).inv
    return float(np.einsum("ij,kl,ilkj->", ginv, ginv, riemann_gauss(jet)))


def shape_operator(jet: Jet2, alpha: int) -> np.ndarray:
    """Matrix of A^alpha, (A^alpha)_i^j = f_ik^alpha g^(kj); alpha is 1-based."""
    if not 1 <= alpha <= jet.m:
        raise IndexError(f"normal index {alpha} out of range 1..{jet.m}")
    ginv = induced_metric(jet).inv
    return jet.d2[alpha - 1] @ ginv


def normal_scalar(jet: Jet2) -> float:
    """Normal curvature scalar S_perp by the closed contraction formula.

    S_perp = U^(ag) U^(bm) (U^(tn) <Df_i^m, Df^n> <Df_k^g, Df^t>
             - <Df_k^g, Df_i^m>) (f_i^a f_k^b - f_i^b f_k^a).

    The relative minus sign in the bracket comes from expanding
    g^(lr) = delta_lr - U^(tn) f_l^n f_r^t inside the shape-operator
    product; the commutator route below and the divergence identity
    both pin it down.
    """
    if jet.m == 1:
        return 0.0
    _, un = _grams(jet)
    uinv = un.inv
    d1, d2 = jet.d1, jet.d2
    q1 = np.einsum("gkl,mil->gmki", d2, d2)      # <Df_k^g, Df_i^m>
    e = np.einsum("mil,nl->min", d2, d1)         # <Df_i^m, Df^n>
    q2 = np.einsum("tn,min,gkt->gmki", uinv, e, e)
    e2 = np.einsum("ai,bk->abik", d1, d1)
    fik = e2 - e2.transpose(1, 0, 2, 3)          # f_i^a f_k^b - f_i^b f_k^a
    return float(np.einsum("ag,bm,gmki,abik->", uinv, uinv, q2 - q1, fik))


def normal_scalar_commutator(jet: Jet2) -> float:
    """S_perp assembled from shape operators and metric gradients.

    Independent route: with B[m,g,:] the coefficients of A^m applied to
    grad f^g, S_perp = g(sum_m A^m grad f^m, sum_g A^g grad f^g)
    - sum_(m,g) g(A^m grad f^g, A^g grad f^m).
    """
    if jet.m == 1:
        return 0.0
    gm, _ = _grams(jet)
    gradf = np.einsum("jk,ak->aj", gm.inv, jet.d1)       # grad f^a, upper j
    a_all = np.einsum("aik,kj->aij", jet.d2, gm.inv)     # (A^a)_i^j
    b = np.einsum("gi,mij->mgj", gradf, a_all)           # A^m(grad f^g)
    w = np.einsum("mmj->j", b)
    t1 = float(w @ gm.g @ w)
    t2 = float(np.einsum("mgj,jk,gmk->", b, gm.g, b))
    return t1 - t2


def scalar_curvature_intrinsic(spec: FunctionSpec, x, h: float = 1e-4
                               ) -> float:
    """Scalar curvature through Christoffel symbols of the induced metric.

    The metric is assembled from exact first derivatives at stencil
    points and differentiated by central differences, so this never
    touches the Gauss equation: an independent oracle with O(h^2)
    truncation error (plus an eps/h^2 rounding floor in the second
    metric derivatives).
    """
    x = np.asarray(x, dtype=float)
    n = spec.n

    def metric_at(y):
        d1 = eval_jet(spec, y).d1
        return np.eye(n) + d1.T @ d1

    g0 = metric_at(x)
    plus = np.empty((n, n, n))
    minus = np.empty((n, n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        plus[i] = metric_at(x + e)
        minus[i] = metric_at(x - e)
    dg = (plus - minus) / (2.0 * h)              # dg[k] = d_k g
    ddg = np.empty((n, n, n, n))                 # ddg[k,l] = d_k d_l g
    for i in range(n):
        ddg[i, i] = (plus[i] - 2.0 * g0 + minus[i]) / (h * h)
    for i in range(n):
        for j in range(i + 1, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            cross = (metric_at(x + ei + ej) - metric_at(x + ei - ej)
                     - metric_at(x - ei + ej) + metric_at(x - ei - ej))
            ddg[i, j] = ddg[j, i] = cross / (4.0 * h * h)

    ginv, _ = invert_spd(g0)
    # lowered[i,j,k] = d_i g_jk + d_j g_ik - d_k g_ij;
    # Gamma^l_ij = 1/2 g^(lk) lowered[i,j,k]
    lowered = np.empty((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lowered[i, j, k] = dg[i, j, k] + dg[j, i, k] - dg[k, i, j]
    gam = 0.5 * np.einsum("lk,ijk->lij", ginv, lowered)
    # d_m Gamma^l_ij needs d_m g^(lk) = -g^(la) (d_m g_ab) g^(bk)
    dginv = -np.einsum("la,mab,bk->mlk", ginv, dg, ginv)
    dlow = np.empty((n, n, n, n))                # d_m lowered[i,j,k]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                dlow[:, i, j, k] = ddg[:, i, j, k] + ddg[:, j, i, k] \
                    - ddg[:, k, i, j]
    dgam = 0.5 * (np.einsum("mlk,ijk->mlij", dginv, lowered)
                  + np.einsum("lk,mijk->mlij", ginv, dlow))
    # Ricci: R_ij = d_k Gamma^k_ij - d_i Gamma^k_kj + Gamma^k_kl Gamma^l_ij
    #              - Gamma^k_il Gamma^l_kj
    ricci = (np.einsum("kkij->ij", dgam) - np.einsum("ikkj->ij", dgam)
             + np.einsum("kkl,lij->ij", gam, gam)
             - np.einsum("kil,lkj->ij", gam, gam))
    return float(np.einsum("ij,ij->", ginv, ricci))


# ---------------------------------------------------------------------------
# flux field and ADM integrand


def adm_integrand_graph(jet: Jet2) -> np.ndarray:
    """ADM surface integrand vector P_i = f_i^a f_kk^a - f_k^a f_ik^a."""
    trd2 = np.einsum("akk->a", jet.d2)
    return (np.einsum("ai,a->i", jet.d1, trd2)
            - np.einsum("ak,aik->i", jet.d1, jet.d2))


def adm_integrand_metric(jet: Jet2) -> np.ndarray:
    """Same vector from metric derivatives, P_i = d_k g_ik - d_i g_kk.

    Algebraically identical to the graph form; kept as a cross-check
    that the integrand is the standard one written in metric terms.
    """
    dg = (np.einsum("aki,aj->kij", jet.d2, jet.d1)
          + np.einsum("ai,akj->kij", jet.d1, jet.d2))   # dg[k,i,j] = d_k g_ij
    return np.einsum("kik->i", dg) - np.einsum("ikk->i", dg)


def flux_field(jet: Jet2) -> np.ndarray:
    """Flux vector X whose divergence is S + S_perp.

    X_i = U^(ab) (f_i^b f_kk^a - f_k^b f_ik^a)
        + U^(ag) U^(bm) <Df^g, Df_k^m> (f_i^a f_k^b - f_k^a f_i^b)
    """
    _, un = _grams(jet)
    uinv = un.inv
    d1, d2 = jet.d1, jet.d2
    trd2 = np.einsum("akk->a", d2)
    t1 = (np.einsum("ab,bi,a->i", uinv, d1, trd2)
          - np.einsum("ab,bk,aik->i", uinv, d1, d2))
    if jet.m == 1:
        return t1          # the antisymmetric factor vanishes identically
    c = np.einsum("gl,mkl->gmk", d1, d2)         # <Df^g, Df_k^m>
    e2 = np.einsum("ai,bk->abik", d1, d1)
    f = e2 - e2.transpose(0, 1, 3, 2)            # f_i^a f_k^b - f_k^a f_i^b
    t2 = np.einsum("ag,bm,gmk,abik->i", uinv, uinv, c, f)
    return t1 + t2


def _fd_gradient(field, x: np.ndarray, h: float) -> np.ndarray:
    """Central-difference gradient of an array-valued field; the
    derivative direction is appended as the last axis."""
    n = x.shape[0]
    cols = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        cols.append((np.asarray(field(x + e)) - np.asarray(field(x - e)))
                    / (2.0 * h))
    return np.stack(cols, axis=-1)


def flux_divergence(spec: FunctionSpec, x, h: float = 1e-4) -> float:
    """div X at x by central differences of the exact flux field."""
    x = np.asarray(x, dtype=float)
    grad = _fd_gradient(lambda y: flux_field(eval_jet(spec, y)), x, h)
    return float(np.trace(grad))


def divergence_residual(spec: FunctionSpec, x, h: float = 1e-4) -> float:
    """|S + S_perp - div X| at x; the pointwise divergence identity."""
    jet = eval_jet(spec, np.asarray(x, dtype=float))
    lhs = scalar_curvature(jet) + normal_scalar(jet)
    return abs(lhs - flux_divergence(spec, x, h))


def curvature_sample(spec: FunctionSpec, x, h: float = 1e-4
                     ) -> CurvatureSample:
    x = np.asarray(x, dtype=float)
    jet = eval_jet(spec, x)
    s = scalar_curvature(jet)
    s_perp = normal_scalar(jet)
    div = flux_divergence(spec, x, h)
    return CurvatureSample(s, s_perp, flux_field(jet),
                           abs(s + s_perp - div))


# ---------------------------------------------------------------------------
# identity residuals


def _w_field(d1: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """W[a,b,i] = f_i^b f_kk^a - f_k^b f_ik^a (the un-traced flux kernel)."""
    trd2 = np.einsum("akk->a", d2)
    return (np.einsum("bi,a->abi", d1, trd2)
            - np.einsum("bk,aik->abi", d1, d2))


def _uinv_gradient(d1, d2, uinv):
    """Exact gradient of U^(-1): d_i U^(ab) = -U^(ag) U^(bm) d_i U_gm."""
    du = (np.einsum("gli,ml->gmi", d2, d1)
          + np.einsum("gl,mli->gmi", d1, d2))    # d_i U_gm
    return -np.einsum("ag,bm,gmi->abi", uinv, uinv, du)


def algebraic_residuals(jet: Jet2, d3: np.ndarray | None = None) -> dict:
    """Residuals of the identities that hold pointwise in the 2-jet.

    ``d3`` supplies optional third derivatives (symmetric in the last
    three axes) for the symmetric-antisymmetric cancellation term; the
    cancellation holds for any symmetric value, so zeros are a valid
    instance.  All residuals are pure floating-point algebra and sit at
    rounding level for consistent jets.
    """
    gm, un = _grams(jet)
    ginv, m_t = gm.inv, gm.m_tensor
    uinv = un.inv
    d1, d2 = jet.d1, jet.d2
    m, n = jet.m, jet.n
    trd2 = np.einsum("akk->a", d2)

    # frame duality: (I) f_i^a U^(ab) = f_j^b g^(ji);
    # (II) M_ij = f_i^a f_j^b U^(ab) = f_i^a f_k^a g^(kj);
    # (III) g(grad f^a, grad f^b) = delta_ab - U^(ab)
    r1 = np.einsum("ai,ab->ib", d1, uinv) - np.einsum("bj,ji->ib", d1, ginv)
    r2a = m_t - np.einsum("ai,bj,ab->ij", d1, d1, uinv)
    r2b = m_t - np.einsum("ai,ak,kj->ij", d1, d1, ginv)
    r3 = np.einsum("ij,ai,bj->ab", ginv, d1, d1) - (np.eye(m) - uinv)
    duality = np.array([np.max(np.abs(r1)),
                        max(np.max(np.abs(r2a)), np.max(np.abs(r2b))),
                        np.max(np.abs(r3))])

    # mixed contraction, s1 = delta_ij M_kl U^(ab) (f_ij^b f_kl^a
    # - f_ik^b f_jl^a); s2 swaps which trace carries M
    s1 = (np.einsum("ab,b,kl,akl->", uinv, trd2, m_t, d2)
          - np.einsum("ab,bik,kl,ail->", uinv, d2, m_t, d2))
    s2 = (np.einsum("ij,ab,bij,a->", m_t, uinv, d2, trd2)
          - np.einsum("ij,ab,bik,ajk->", m_t, uinv, d2, d2))
    res_mixed = abs(s1 - s2)

    w = _w_field(d1, d2)
    uinv_d = _uinv_gradient(d1, d2, uinv)
    c2 = np.einsum("gl,mil->gmi", d1, d2)        # <Df^g, Df_i^m>

    # weighted contraction: 2 s1 = -(d_i U^(ab)) W[a,b,i]
    # - U^(ag) U^(bm) <Df^g, Df_i^m> (W[a,b,i] - W[b,a,i])
    wdiff = w - w.transpose(1, 0, 2)             # summed-derivative of F
    rhs3 = (-np.einsum("abi,abi->", uinv_d, w)
            - np.einsum("ag,bm,gmi,abi->", uinv, uinv, c2, wdiff))
    res_weighted = abs(2.0 * s1 - rhs3)

    # double contraction: M_ij M_kl U^(ab) (f_ij^b f_kl^a - f_ik^b f_jl^a)
    # = U^(an) U^(bm) U^(tg) <Df^m, Df_i^g> <Df^n, Df_k^t> F[b,a,i,k]
    lhs4 = (np.einsum("ij,kl,ab,bij,akl->", m_t, m_t, uinv, d2, d2)
            - np.einsum("ij,kl,ab,bik,ajl->", m_t, m_t, uinv, d2, d2))
    v1 = np.einsum("an,bm,tg,mgi,ntk->abik", uinv, uinv, uinv, c2, c2)
    e2 = np.einsum("bi,ak->baik", d1, d1)
    fbig = e2 - e2.transpose(0, 1, 3, 2)         # F[b,a,i,k] = f_i^b f_k^a
    rhs4 = np.einsum("abik,baik->", v1, fbig)    # - f_k^b f_i^a
    res_double = abs(lhs4 - rhs4)

    # symmetric-antisymmetric cancellation: the (i,k)-symmetric tensor
    # C contracted against the antisymmetric F must vanish identically
    if d3 is None:
        c3 = np.zeros((m, m, n, n))
    else:
        c3 = np.einsum("gl,mikl->gmik", d1, d3)  # <Df^g, Df_ik^m>
    c_big = (np.einsum("an,bti,ntk->abik", uinv, uinv_d, c2)
             + np.einsum("ag,bmk,gmi->abik", uinv, uinv_d, c2)
             + np.einsum("ag,bm,gmik->abik", uinv, uinv, c3))
    sym_antisym = abs(float(np.einsum("abik,baik->", c_big, fbig)))

    ricci_vs = abs(normal_scalar(jet) - normal_scalar_commutator(jet))

    return {
        "duality": duality,
        "mixed": float(res_mixed),
        "weighted": float(res_weighted),
        "double": float(res_double),
        "sym_antisym": sym_antisym,
        "ricci_vs_commutator": float(ricci_vs),
    }


def check_identities(spec: FunctionSpec, x, h: float = 1e-4
                     ) -> IdentityResiduals:
    """Evaluate every identity residual at one point of a spec's graph.

    Purely algebraic items are computed from the exact jet; the
    differential items difference exact-jet fields over step h, so they
    carry O(h^2) truncation noise.
    """
    x = np.asarray(x, dtype=float)
    jet = eval_jet(spec, x)
    gm, un = _grams(jet)
    uinv = un.inv
    d1, d2 = jet.d1, jet.d2
    trd2 = np.einsum("akk->a", d2)

    def jet_at(y):
        return eval_jet(spec, y)

    # third derivatives by differencing exact second derivatives
    d3 = _fd_gradient(lambda y: jet_at(y).d2, x, h)      # [a,i,k,l]
    alg = algebraic_residuals(jet, d3)

    # trace identity: U^(ab) (f_ii^b f_kk^a - f_ik^b f_ik^a)
    # = U^(ab) d_i W[a,b,i], with the divergence finite-differenced
    lhs1 = float(np.einsum("ab,b,a->", uinv, trd2, trd2)
                 - np.einsum("ab,bik,aik->", uinv, d2, d2))
    w_grad = _fd_gradient(
        lambda y: (lambda j: _w_field(j.d1, j.d2))(jet_at(y)), x, h)
    rhs1 = float(np.einsum("ab,abii->", uinv, w_grad))
    res_trace = abs(lhs1 - rhs1)

    contractions = np.array([res_trace, alg["mixed"], alg["weighted"],
                             alg["double"]])

    # remainder versus commutator: V[a,b,i,k] F[b,a,i,k] = -S_perp with
    # V = (triple-Gram product term) - d_k(U^(ag) U^(bm) <Df^g, Df_i^m>)
    c2 = np.einsum("gl,mil->gmi", d1, d2)
    v1 = np.einsum("an,bm,tg,mgi,ntk->abik", uinv, uinv, uinv, c2, c2)

    def w2_at(y):
        j = jet_at(y)
        u_i = normal_gram(j).inv
        cc = np.einsum("gl,mil->gmi", j.d1, j.d2)
        return np.einsum("ag,bm,gmi->abi", u_i, u_i, cc)

    dw2 = _fd_gradient(w2_at, x, h)              # [a,b,i,k] = d_k W2[a,b,i]
    e2 = np.einsum("bi,ak->baik", d1, d1)
    fbig = e2 - e2.transpose(0, 1, 3, 2)
    vf = float(np.einsum("abik,baik->", v1 - dw2, fbig))
    commutator_remainder = abs(vf + normal_scalar_commutator(jet))

    gauss_vs = abs(scalar_curvature(jet)
                   - scalar_curvature_intrinsic(spec, x, h))

    return IdentityResiduals(
        duality=alg["duality"],
        contractions=contractions,
        sym_antisym=alg["sym_antisym"],
        commutator_remainder=float(commutator_remainder),
        gauss_vs_intrinsic=float(gauss_vs),
        ricci_vs_commutator=alg["ricci_vs_commutator"],
    )
