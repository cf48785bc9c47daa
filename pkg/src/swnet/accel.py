"""Hot kernels with two interchangeable implementations.

The group-extraction tabu search and triangle counting dominate runtime, so
both ship as a numba ``@njit`` kernel and a pure-numpy fallback.  Selection:
``SWNET_NUMBA=0`` (or ``false``/``off``/``no``) in the environment forces
the numpy path; otherwise numba is used when importable.  The two paths are
written against the same arithmetic expression structure and the same
canonical move order, so they produce bit-identical results; the test suite
checks this and ``benchmarks/bench_kernels.py`` compares their speed.

Graphs enter as CSR arrays ``(indptr, indices)`` over an undirected simple
graph where every link appears in both rows (see ``graph.build_csr``).

Tabu search state for the group criterion W over a pair (S, T):

* ``L``  = number of (ordered) link incidences from S into T, i.e.
  ``sum(|neighbors(v) & T| for v in S)``; a link with both endpoints in
  S and T counts twice.
* ``K``  = total degree volume of S, so ``K - L`` counts incidences from S
  into the complement of T.

Single-node moves are: add to S, remove from S, add to T, remove from T,
under the feasibility constraints ``|S| >= 2`` and ``1 <= |T| <= n - 1``.
Each step applies the best non-tabu feasible move (ties broken by move
type, then lowest node id); if every feasible move is tabu the tabu list is
ignored for that step.  A move on (node, set) is tabu for ``tenure``
subsequent steps.  The run stops after ``max_idle`` consecutive steps
without improving the best W seen, or when no feasible move exists.

With ``restrict=True`` the add-move candidates are limited to nodes
adjacent to the opposite set (removals always consider all members).  This
is a search-space heuristic for large graphs; exhaustive-move behaviour
(``restrict=False``) is kept for small instances.
"""

from __future__ import annotations

import os

import numpy as np


def _env_allows_numba() -> bool:
    return os.environ.get("SWNET_NUMBA", "").strip().lower() not in ("0", "false", "off", "no")


NUMBA_ENABLED = False
if _env_allows_numba():
    try:
        import numba
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - exercised only without numba
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):  # noqa: D103 - decorator stub, numpy-only mode
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap


# -- criterion W -----------------------------------------------------------

@njit(cache=True, nogil=True, inline="always")
def _w_value(n: int, s: int, t: int, L: int, K: int) -> float:
    """W for given state; caller guarantees s >= 2 and 1 <= t <= n - 1.

    Expression structure is load-bearing: the numpy path mirrors it
    operation for operation so both produce identical floats.
    """
    fs = float(s)
    ft = float(t)
    fn = float(n)
    mu = (2.0 * fs * ft) / (fn * (fs + ft))
    coef = mu * (1.0 - mu)
    return coef * (float(L) / (fs * ft) - float(K - L) / (fs * (fn - ft)))


def w_value(n: int, s: int, t: int, L: int, K: int) -> float:
    """Python-callable wrapper around the kernel W expression."""
    fs = float(s)
    ft = float(t)
    fn = float(n)
    mu = (2.0 * fs * ft) / (fn * (fs + ft))
    coef = mu * (1.0 - mu)
    return coef * (float(L) / (fs * ft) - float(K - L) / (fs * (fn - ft)))


# -- tabu search, numba path -------------------------------------------------

@njit(cache=True, nogil=True)
def _tabu_run_jit(indptr, indices, deg, s0, t0, n, tenure, max_idle, restrict):
    in_s = np.zeros(n, dtype=np.uint8)
    in_t = np.zeros(n, dtype=np.uint8)
    deg_s = np.zeros(n, dtype=np.int64)  # S-members adjacent to each node
    deg_t = np.zeros(n, dtype=np.int64)
    s_list = np.empty(n, dtype=np.int64)
    t_list = np.empty(n, dtype=np.int64)
    s = 0
    t = 0
    K = np.int64(0)
    for i in range(s0.size):
        v = s0[i]
        if in_s[v] == 0:
            in_s[v] = 1
            s_list[s] = v
            s += 1
            K += deg[v]
            for j in range(indptr[v], indptr[v + 1]):
                deg_s[indices[j]] += 1
    for i in range(t0.size):
        v = t0[i]
        if in_t[v] == 0:
            in_t[v] = 1
            t_list[t] = v
            t += 1
            for j in range(indptr[v], indptr[v + 1]):
                deg_t[indices[j]] += 1
    L = np.int64(0)
    for i in range(s):
        L += deg_t[s_list[i]]

    tabu_s = np.full(n, -1, dtype=np.int64)
    tabu_t = np.full(n, -1, dtype=np.int64)
    best_in_s = in_s.copy()
    best_in_t = in_t.copy()
    best_w = _w_value(n, s, t, L, K)
    seen = np.full(n, -1, dtype=np.int64)  # stamp buffer for candidate dedup

    idle = 0
    step = 0
    moves = 0
    while idle < max_idle:
        step += 1
        # best move: key (w desc, type asc, node asc); pass 1 skips tabu,
        # the feasible-only fallback is tracked in the same scan
        bw = -np.inf
        btype = -1
        bnode = -1
        fw = -np.inf
        ftype = -1
        fnode = -1

        # type 0: add to S
        if restrict:
            stamp = 2 * step
            for i in range(t):
                u = t_list[i]
                for j in range(indptr[u], indptr[u + 1]):
                    v = indices[j]
                    if seen[v] == stamp:
                        continue
                    seen[v] = stamp
                    if in_s[v] == 1:
                        continue
                    w = _w_value(n, s + 1, t, L + deg_t[v], K + deg[v])
                    if w > fw or (w == fw and (0 < ftype or (0 == ftype and v < fnode))):
                        fw = w
                        ftype = 0
                        fnode = v
                    if tabu_s[v] >= step:
                        continue
                    if w > bw or (w == bw and (0 < btype or (0 == btype and v < bnode))):
                        bw = w
                        btype = 0
                        bnode = v
        else:
            for v in range(n):
                if in_s[v] == 1:
                    continue
                w = _w_value(n, s + 1, t, L + deg_t[v], K + deg[v])
                if w > fw or (w == fw and (0 < ftype or (0 == ftype and v < fnode))):
                    fw = w
                    ftype = 0
                    fnode = v
                if tabu_s[v] >= step:
                    continue
                if w > bw or (w == bw and (0 < btype or (0 == btype and v < bnode))):
                    bw = w
                    btype = 0
                    bnode = v

        # type 1: remove from S
        if s >= 3:
            for i in range(s):
                v = s_list[i]
                w = _w_value(n, s - 1, t, L - deg_t[v], K - deg[v])
                if w > fw or (w == fw and (1 < ftype or (1 == ftype and v < fnode))):
                    fw = w
                    ftype = 1
                    fnode = v
                if tabu_s[v] >= step:
                    continue
                if w > bw or (w == bw and (1 < btype or (1 == btype and v < bnode))):
                    bw = w
                    btype = 1
                    bnode = v

        # type 2: add to T
        if t <= n - 2:
            if restrict:
                stamp = 2 * step + 1
                for i in range(s):
                    u = s_list[i]
                    for j in range(indptr[u], indptr[u + 1]):
                        v = indices[j]
                        if seen[v] == stamp:
                            continue
                        seen[v] = stamp
                        if in_t[v] == 1:
                            continue
                        w = _w_value(n, s, t + 1, L + deg_s[v], K)
                        if w > fw or (w == fw and (2 < ftype or (2 == ftype and v < fnode))):
                            fw = w
                            ftype = 2
                            fnode = v
                        if tabu_t[v] >= step:
                            continue
                        if w > bw or (w == bw and (2 < btype or (2 == btype and v < bnode))):
                            bw = w
                            btype = 2
                            bnode = v
            else:
                for v in range(n):
                    if in_t[v] == 1:
                        continue
                    w = _w_value(n, s, t + 1, L + deg_s[v], K)
                    if w > fw or (w == fw and (2 < ftype or (2 == ftype and v < fnode))):
                        fw = w
                        ftype = 2
                        fnode = v
                    if tabu_t[v] >= step:
                        continue
                    if w > bw or (w == bw and (2 < btype or (2 == btype and v < bnode))):
                        bw = w
                        btype = 2
                        bnode = v

        # type 3: remove from T
        if t >= 2:
            for i in range(t):
                v = t_list[i]
                w = _w_value(n, s, t - 1, L - deg_s[v], K)
                if w > fw or (w == fw and (3 < ftype or (3 == ftype and v < fnode))):
                    fw = w
                    ftype = 3
                    fnode = v
                if tabu_t[v] >= step:
                    continue
                if w > bw or (w == bw and (3 < btype or (3 == btype and v < bnode))):
                    bw = w
                    btype = 3
                    bnode = v

        if btype == -1:
            btype = ftype
            bnode = fnode
            bw = fw
        if btype == -1:
            break  # no feasible move at all (degenerate tiny graph)

        v = bnode
        if btype == 0:
            in_s[v] = 1
            s_list[s] = v
            s += 1
            K += deg[v]
            L += deg_t[v]
            for j in range(indptr[v], indptr[v + 1]):
                deg_s[indices[j]] += 1
            tabu_s[v] = step + tenure
        elif btype == 1:
            in_s[v] = 0
            for i in range(s):
                if s_list[i] == v:
                    s_list[i] = s_list[s - 1]
                    break
            s -= 1
            K -= deg[v]
            L -= deg_t[v]
            for j in range(indptr[v], indptr[v + 1]):
                deg_s[indices[j]] -= 1
            tabu_s[v] = step + tenure
        elif btype == 2:
            in_t[v] = 1
            t_list[t] = v
            t += 1
            L += deg_s[v]
            for j in range(indptr[v], indptr[v + 1]):
                deg_t[indices[j]] += 1
            tabu_t[v] = step + tenure
        else:
            in_t[v] = 0
            for i in range(t):
                if t_list[i] == v:
                    t_list[i] = t_list[t - 1]
                    break
            t -= 1
            L -= deg_s[v]
            for j in range(indptr[v], indptr[v + 1]):
                deg_t[indices[j]] -= 1
            tabu_t[v] = step + tenure
        moves += 1

        cur_w = _w_value(n, s, t, L, K)
        if cur_w > best_w:
            best_w = cur_w
            for i in range(n):
                best_in_s[i] = in_s[i]
                best_in_t[i] = in_t[i]
            idle = 0
        else:
            idle += 1

    return best_in_s, best_in_t, best_w, moves


# -- tabu search, numpy path -------------------------------------------------

def _tabu_run_numpy(indptr, indices, deg, s0, t0, n, tenure, max_idle, restrict):
    in_s = np.zeros(n, dtype=bool)
    in_t = np.zeros(n, dtype=bool)
    deg_s = np.zeros(n, dtype=np.int64)
    deg_t = np.zeros(n, dtype=np.int64)
    in_s[s0] = True
    in_t[t0] = True
    for v in s0:
        deg_s[indices[indptr[v]: indptr[v + 1]]] += 1
    for v in t0:
        deg_t[indices[indptr[v]: indptr[v + 1]]] += 1
    s = int(in_s.sum())
    t = int(in_t.sum())
    K = int(deg[in_s].sum())
    L = int(deg_t[in_s].sum())

    tabu_s = np.full(n, -1, dtype=np.int64)
    tabu_t = np.full(n, -1, dtype=np.int64)
    best_in_s = in_s.copy()
    best_in_t = in_t.copy()
    best_w = w_value(n, s, t, L, K)
    deg_f = deg.astype(np.float64)
    neg_inf = -np.inf

    def type_w(s_n, t_n, L_vec, K_vec):
        fs = float(s_n)
        ft = float(t_n)
        fn = float(n)
        mu = (2.0 * fs * ft) / (fn * (fs + ft))
        coef = mu * (1.0 - mu)
        return coef * (L_vec / (fs * ft) - (K_vec - L_vec) / (fs * (fn - ft)))

    idle = 0
    step = 0
    moves = 0
    while idle < max_idle:
        step += 1
        cols = []
        feas_cols = []
        # type 0: add to S
        w0 = type_w(s + 1, t, (L + deg_t).astype(np.float64), (K + deg).astype(np.float64))
        f0 = ~in_s
        if restrict:
            f0 = f0 & (deg_t > 0)
        cols.append(np.where(f0 & (tabu_s < step), w0, neg_inf))
        feas_cols.append(np.where(f0, w0, neg_inf))
        # type 1: remove from S
        if s >= 3:
            w1 = type_w(s - 1, t, (L - deg_t).astype(np.float64), (K - deg).astype(np.float64))
            f1 = in_s
        else:
            w1 = np.full(n, neg_inf)
            f1 = np.zeros(n, dtype=bool)
        cols.append(np.where(f1 & (tabu_s < step), w1, neg_inf))
        feas_cols.append(np.where(f1, w1, neg_inf))
        # type 2: add to T
        if t <= n - 2:
            w2 = type_w(s, t + 1, (L + deg_s).astype(np.float64), np.full(n, float(K)))
            f2 = ~in_t
            if restrict:
                f2 = f2 & (deg_s > 0)
        else:
            w2 = np.full(n, neg_inf)
            f2 = np.zeros(n, dtype=bool)
        cols.append(np.where(f2 & (tabu_t < step), w2, neg_inf))
        feas_cols.append(np.where(f2, w2, neg_inf))
        # type 3: remove from T
        if t >= 2:
            w3 = type_w(s, t - 1, (L - deg_s).astype(np.float64), np.full(n, float(K)))
            f3 = in_t
        else:
            w3 = np.full(n, neg_inf)
            f3 = np.zeros(n, dtype=bool)
        cols.append(np.where(f3 & (tabu_t < step), w3, neg_inf))
        feas_cols.append(np.where(f3, w3, neg_inf))

        flat = np.concatenate(cols)
        pick = int(np.argmax(flat))  # first max = canonical (type, node) order
        if flat[pick] == neg_inf:
            flat = np.concatenate(feas_cols)
            pick = int(np.argmax(flat))
            if flat[pick] == neg_inf:
                break
        btype, v = divmod(pick, n)

        adj_v = indices[indptr[v]: indptr[v + 1]]
        if btype == 0:
            in_s[v] = True
            s += 1
            K += int(deg[v])
            L += int(deg_t[v])
            deg_s[adj_v] += 1
            tabu_s[v] = step + tenure
        elif btype == 1:
            in_s[v] = False
            s -= 1
            K -= int(deg[v])
            L -= int(deg_t[v])
            deg_s[adj_v] -= 1
            tabu_s[v] = step + tenure
        elif btype == 2:
            in_t[v] = True
            t += 1
            L += int(deg_s[v])
            deg_t[adj_v] += 1
            tabu_t[v] = step + tenure
        else:
            in_t[v] = False
            t -= 1
            L -= int(deg_s[v])
            deg_t[adj_v] -= 1
            tabu_t[v] = step + tenure
        moves += 1

        cur_w = w_value(n, s, t, L, K)
        if cur_w > best_w:
            best_w = cur_w
            best_in_s = in_s.copy()
            best_in_t = in_t.copy()
            idle = 0
        else:
            idle += 1

    return best_in_s.astype(np.uint8), best_in_t.astype(np.uint8), best_w, moves


def tabu_run(indptr, indices, deg, s0, t0, tenure, max_idle, restrict, use_numba=None):
    """One tabu-search run from initial member arrays ``s0``/``t0``.

    Returns ``(in_S mask, in_T mask, best W, moves applied)`` for the best
    state visited.  ``use_numba=None`` follows the module-level selection.
    """
    n = len(indptr) - 1
    s0 = np.asarray(s0, dtype=np.int64)
    t0 = np.asarray(t0, dtype=np.int64)
    if use_numba is None:
        use_numba = NUMBA_ENABLED
    if use_numba and not NUMBA_ENABLED:
        raise RuntimeError("numba path requested but numba is unavailable")
    impl = _tabu_run_jit if use_numba else _tabu_run_numpy
    return impl(
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        np.asarray(deg, dtype=np.int64),
        s0,
        t0,
        n,
        int(tenure),
        int(max_idle),
        bool(restrict),
    )


# -- triangle counts ---------------------------------------------------------

@njit(cache=True, nogil=True)
def _triangles_jit(indptr, indices, n):
    t = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for jj in range(indptr[u], indptr[u + 1]):
            v = indices[jj]
            if v <= u:
                continue
            # each common neighbor w of link {u, v} closes one triangle at w
            a = indptr[u]
            b = indptr[v]
            ea = indptr[u + 1]
            eb = indptr[v + 1]
            while a < ea and b < eb:
                x = indices[a]
                y = indices[b]
                if x == y:
                    t[x] += 1
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
    return t


def _triangles_numpy(indptr, indices, n):
    t = np.zeros(n, dtype=np.int64)
    for u in range(n):
        adj_u = indices[indptr[u]: indptr[u + 1]]
        for v in adj_u[adj_u > u]:
            adj_v = indices[indptr[v]: indptr[v + 1]]
            common = np.intersect1d(adj_u, adj_v, assume_unique=True)
            if common.size:
                t[common] += 1
    return t


def triangle_counts(indptr, indices, use_numba=None):
    """Per-node count of links among the node's neighbors.

    Equals the number of triangles each node participates in.  Rows must be
    sorted (``graph.build_csr`` guarantees this).
    """
    n = len(indptr) - 1
    if use_numba is None:
        use_numba = NUMBA_ENABLED
    if use_numba and not NUMBA_ENABLED:
        raise RuntimeError("numba path requested but numba is unavailable")
    impl = _triangles_jit if use_numba else _triangles_numpy
    return impl(np.asarray(indptr, dtype=np.int64), np.asarray(indices, dtype=np.int64), n)
