"""Conforming P1 / tensor-bilinear assembly of 1D and 2D quadratic forms.

Both assemblers discretize forms of the type

    int c_kin |f'|^2 + V |f|^2      (plus boundary point/edge terms)

against the mass ``int w |f|^2``.  Dirichlet nodes are eliminated, so the
discrete spaces are subspaces of the form domains and the computed
eigenvalues are min-max upper bounds (up to quadrature error).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .eigensolve import SymPencil

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_unit(n: int):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


def graded_nodes(length: float, n: int, grading: float = 0.0, two_sided: bool = False):
    """``n+1`` nodes on [0, length], clustered geometrically towards 0.

    ``grading`` is the exponent c of ``u = L (e^{ct}-1)/(e^c-1)``; the ratio
    of the last to the first spacing is about ``e^c``.  With ``two_sided``
    the nodes cluster towards both ends symmetrically.
    """
    if two_sided:
        half = n // 2
        left = graded_nodes(0.5 * length, half, grading)
        right = length - graded_nodes(0.5 * length, n - half, grading)[::-1]
        return np.concatenate([left, right[1:]])
    t = np.linspace(0.0, 1.0, n + 1)
    if grading <= 1e-12:
        return length * t
    return length * np.expm1(grading * t) / np.expm1(grading)


def decay_graded_nodes(length: float, n: int, rate: float, two_sided: bool = False,
                       max_stretch: float = 9.0):
    """``n+1`` nodes on [0, length] adapted to a mode decaying like ``exp(-k u)``.

    With ``rate = 2k/3`` the P1 interpolation error of ``exp(-k u)`` is
    equidistributed.  ``rate * length`` is capped at ``max_stretch`` to keep
    the far elements from swallowing the interval.
    """
    if two_sided:
        half = n // 2
        left = decay_graded_nodes(0.5 * length, half, rate, max_stretch=max_stretch)
        right = length - decay_graded_nodes(0.5 * length, n - half, rate, max_stretch=max_stretch)[::-1]
        return np.concatenate([left, right[1:]])
    t = np.linspace(0.0, 1.0, n + 1)
    q = min(rate * length, max_stretch)
    if q <= 1e-8:
        return length * t
    # u = -(L/q) log(1 - t (1 - e^{-q}))
    x = -np.log1p(-t * (-np.expm1(-q))) / q
    x[-1] = 1.0
    return length * x


def assemble_1d(nodes, *, kinetic=None, potential=None, weight=None, periodic=False,
                dirichlet=(False, False), point_terms=(0.0, 0.0), n_gauss=3,
                metadata="", sigma_hint=None):
    """P1 discretization on ``nodes`` (increasing, endpoints included).

    ``kinetic``, ``potential``, ``weight`` are vectorized callables of x (or
    None for 1, 0, 1).  ``point_terms`` adds ``c0 |f(x0)|^2 + c1 |f(xN)|^2``.
    For ``periodic`` the last node is identified with the first.
    Returns ``(pencil, free)`` where ``free`` indexes the retained nodes.
    """
    x = np.asarray(nodes, dtype=float)
    ne = len(x) - 1
    h = np.diff(x)
    gx, gw = gauss_unit(n_gauss)
    X = x[:-1, None] + h[:, None] * gx[None, :]
    ones = np.ones_like(X)
    c = kinetic(X) * ones if kinetic is not None else ones
    V = potential(X) * ones if potential is not None else 0.0 * ones
    w = weight(X) * ones if weight is not None else ones
    N = np.stack([1.0 - gx, gx])  # (2, G)
    dN = np.array([-1.0, 1.0])
    Kc = np.einsum("eg,g->e", c, gw)[:, None, None] * np.outer(dN, dN)[None] / h[:, None, None]
    Kv = np.einsum("eg,g,ag,bg->eab", V, gw, N, N) * h[:, None, None]
    Mw = np.einsum("eg,g,ag,bg->eab", w, gw, N, N) * h[:, None, None]
    nn = ne if periodic else ne + 1
    idx = np.stack([np.arange(ne), np.arange(1, ne + 1)], axis=1) % nn
    rows = np.repeat(idx, 2, axis=1).ravel()
    cols = np.tile(idx, (1, 2)).ravel()
    A = sp.coo_matrix(((Kc + Kv).ravel(), (rows, cols)), shape=(nn, nn)).tocsr()
    B = sp.coo_matrix((Mw.ravel(), (rows, cols)), shape=(nn, nn)).tocsr()
    if not periodic:
        A = A + sp.csr_matrix(([point_terms[0], point_terms[1]], ([0, nn - 1], [0, nn - 1])), shape=(nn, nn))
    free = np.arange(nn)
    if not periodic:
        keep = np.ones(nn, dtype=bool)
        keep[0] = not dirichlet[0]
        keep[-1] = not dirichlet[1]
        free = free[keep]
    A = A[free][:, free]
    B = B[free][:, free]
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)
    return SymPencil(A, B, metadata, sigma_hint), free


def assemble_tensor(s_nodes, u_nodes, coefficients, *, periodic_s=False,
                    dirichlet_s=(False, False), dirichlet_u=(False, False),
                    edge_u0=None, edge_u1=None, n_gauss=3, metadata="", sigma_hint=None):
    """Bilinear elements on the tensor grid ``s_nodes x u_nodes``.

    ``coefficients(S, U)`` returns a dict with optional keys ``cs`` (weight of
    |f_s|^2), ``cu`` (|f_u|^2), ``V`` (|f|^2 in the form) and ``w`` (mass
    weight), each broadcastable to ``S``.  ``edge_u0(s)`` / ``edge_u1(s)`` are
    coefficients of ``int c(s)|f(s,u_edge)|^2 ds`` on the two long edges.
    Node (i, j) has index ``i*len(u_nodes) + j`` before elimination.
    """
    s = np.asarray(s_nodes, dtype=float)
    u = np.asarray(u_nodes, dtype=float)
    nes, neu = len(s) - 1, len(u) - 1
    nus = len(u)
    nss = nes if periodic_s else nes + 1
    hs, hu = np.diff(s), np.diff(u)
    gx, gw = gauss_unit(n_gauss)
    S = s[:-1, None, None, None] + hs[:, None, None, None] * gx[None, None, :, None]
    U = u[None, :-1, None, None] + hu[None, :, None, None] * gx[None, None, None, :]
    S, U = np.broadcast_arrays(S, U)
    coef = coefficients(S, U)
    shape = S.shape
    cs = np.broadcast_to(coef.get("cs", 1.0), shape)
    cu = np.broadcast_to(coef.get("cu", 1.0), shape)
    V = np.broadcast_to(coef.get("V", 0.0), shape)
    w = np.broadcast_to(coef.get("w", 1.0), shape)
    W = np.outer(gw, gw)  # (g, k)
    N1 = np.stack([1.0 - gx, gx])  # (2, G)
    dN1 = np.array([-1.0, 1.0])
    # local node a = p + 2q  (p: s-local, q: u-local)
    phi = np.einsum("pg,qk->qpgk", N1, N1).reshape(4, len(gx), len(gx))
    dps = np.einsum("p,qk->qpk", dN1, N1)
    dps = np.broadcast_to(dps[:, :, None, :], (2, 2, len(gx), len(gx))).reshape(4, len(gx), len(gx))
    dpu = np.einsum("pg,q->qpg", N1, dN1)
    dpu = np.broadcast_to(dpu[:, :, :, None], (2, 2, len(gx), len(gx))).reshape(4, len(gx), len(gx))
    Hs = hs[:, None, None, None]
    Hu = hu[None, :, None, None]
    Ks = np.einsum("ijgk,agk,bgk->ijab", cs * W, dps, dps) * (Hu / Hs)
    Ku = np.einsum("ijgk,agk,bgk->ijab", cu * W, dpu, dpu) * (Hs / Hu)
    Kv = np.einsum("ijgk,agk,bgk->ijab", V * W, phi, phi) * (Hs * Hu)
    Mw = np.einsum("ijgk,agk,bgk->ijab", w * W, phi, phi) * (Hs * Hu)
    I, J = np.meshgrid(np.arange(nes), np.arange(neu), indexing="ij")
    nodes = np.stack([
        (I % nss) * nus + J,
        ((I + 1) % nss) * nus + J,
        (I % nss) * nus + J + 1,
        ((I + 1) % nss) * nus + J + 1,
    ], axis=-1)  # (nes, neu, 4)
    rows = np.broadcast_to(nodes[..., :, None], nodes.shape + (4,)).ravel()
    cols = np.broadcast_to(nodes[..., None, :], nodes.shape + (4,)).ravel()
    ndof = nss * nus
    A = sp.coo_matrix(((Ks + Ku + Kv).ravel(), (rows, cols)), shape=(ndof, ndof)).tocsr()
    B = sp.coo_matrix((Mw.ravel(), (rows, cols)), shape=(ndof, ndof)).tocsr()

    def edge(cfun, j):
        Se = s[:-1, None] + hs[:, None] * gx[None, :]
        ce = np.broadcast_to(cfun(Se), Se.shape)
        loc = np.einsum("eg,g,ag,bg->eab", ce, gw, N1, N1) * hs[:, None, None]
        ii = np.arange(nes)
        en = np.stack([(ii % nss) * nus + j, ((ii + 1) % nss) * nus + j], axis=1)
        r = np.broadcast_to(en[:, :, None], (nes, 2, 2)).ravel()
        c = np.broadcast_to(en[:, None, :], (nes, 2, 2)).ravel()
        return sp.coo_matrix((loc.ravel(), (r, c)), shape=(ndof, ndof)).tocsr()

    if edge_u0 is not None:
        A = A + edge(edge_u0, 0)
    if edge_u1 is not None:
        A = A + edge(edge_u1, nus - 1)
    keep = np.ones((nss, nus), dtype=bool)
    if not periodic_s:
        if dirichlet_s[0]:
            keep[0, :] = False
        if dirichlet_s[1]:
            keep[-1, :] = False
    if dirichlet_u[0]:
        keep[:, 0] = False
    if dirichlet_u[1]:
        keep[:, -1] = False
    free = np.flatnonzero(keep.ravel())
    A = A[free][:, free]
    B = B[free][:, free]
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)
    return SymPencil(A, B, metadata, sigma_hint), free
