"""Compiled search engine.

A numba port of :class:`makerbreaker.mcts.Search`, the rules in
:mod:`makerbreaker.game` and the scorers in :mod:`makerbreaker.micro`. It makes
the same random draws in the same order, so for a given SplitMix64 seed both
engines return the same move. The test suite holds them to that.

State layout (int64 array ``st``): to_move, status, uncovered vertex count,
unmarked count, last Maker move, last Breaker move, Maker mark count.
Marks are 0 (unmarked), 1 (Maker), 2 (Breaker); status is 0 (ongoing),
1 (Maker won), 2 (Breaker won).
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numba import njit

from .game import DominatingSet, GameState, KPath, Status
from .graph import INF, Graph
from .micro import FAMILIES, LOW, MicroStrategyId

TO_MOVE, STATUS, UNCOVERED, UNMARKED, LAST0, LAST1, MAKER_COUNT = range(7)
ONGOING, MAKER_WON, BREAKER_WON = 0, 1, 2
COND_DOM, COND_PATH = 0, 1

FAMILY_CODES = {name: i for i, name in enumerate(FAMILIES)}
(F_UNIFORM, F_DEGREE, F_UNMARKED_DEGREE, F_OWN_ADJ, F_OPP_ADJ, F_DIST_LAST_OWN, F_DIST_ALL_OWN,
 F_DIST_OPP, F_COMPONENT, F_OWN_COMPONENT, F_WINSET_COUNT, F_WINSET_BLOCK, F_CLOSENESS) = range(13)
assert len(FAMILY_CODES) == 13 and FAMILY_CODES["closeness"] == F_CLOSENESS

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
S30 = np.uint64(30)
S27 = np.uint64(27)
S31 = np.uint64(31)
S11 = np.uint64(11)
INV_2_53 = 1.0 / 9007199254740992.0
TOL = 1e-12


# ------------------------------------------------------------------ rng


@njit(cache=True)
def _rand(rs):
    s = rs[0] + GOLDEN
    rs[0] = s
    z = s
    z = (z ^ (z >> S30)) * MIX1
    z = (z ^ (z >> S27)) * MIX2
    z = z ^ (z >> S31)
    return float(z >> S11) * INV_2_53


# ---------------------------------------------------------------- rules


@njit(cache=True)
def _induced_ok(indptr, indices, inpath, w, end):
    """``w``'s only neighbour on the current path is ``end``."""
    for b in range(indptr[w], indptr[w + 1]):
        u = indices[b]
        if inpath[u] and u != end:
            return False
    return True


@njit(cache=True)
def _grow(indptr, indices, marks, inpath, start, remaining, sv, si):
    """Can the induced Maker path with free end ``start`` grow by ``remaining``?

    Depth-first with an explicit stack (``sv`` vertices, ``si`` neighbour cursors);
    ``inpath`` is restored before returning.
    """
    if remaining == 0:
        return True
    depth = 0
    sv[0] = start
    si[0] = indptr[start]
    while depth >= 0:
        end = sv[depth]
        a = si[depth]
        if a == indptr[end + 1]:
            if depth > 0:
                inpath[end] = False
            depth -= 1
            continue
        si[depth] = a + 1
        w = indices[a]
        if marks[w] != 1 or inpath[w] or not _induced_ok(indptr, indices, inpath, w, end):
            continue
        if depth + 1 == remaining:
            for j in range(1, depth + 1):
                inpath[sv[j]] = False
            return True
        inpath[w] = True
        depth += 1
        sv[depth] = w
        si[depth] = indptr[w]
    return False


@njit(cache=True)
def _path_through(indptr, indices, marks, v, k, inpath, pstk):
    """Induced k-path of Maker marks using ``v``: grow a right arm from ``v`` and,
    at every length, try to finish with a left arm from ``v``."""
    rv = pstk[0]
    ri = pstk[1]
    inpath[v] = True
    if _grow(indptr, indices, marks, inpath, v, k - 1, pstk[2], pstk[3]):
        inpath[v] = False
        return True
    depth = 0
    rv[0] = v
    ri[0] = indptr[v]
    while depth >= 0:
        end = rv[depth]
        a = ri[depth]
        if a == indptr[end + 1]:
            if depth > 0:
                inpath[end] = False
            depth -= 1
            continue
        ri[depth] = a + 1
        w = indices[a]
        if marks[w] != 1 or inpath[w] or not _induced_ok(indptr, indices, inpath, w, end):
            continue
        inpath[w] = True
        depth += 1
        rv[depth] = w
        ri[depth] = indptr[w]
        if depth + 1 == k or _grow(indptr, indices, marks, inpath, v, k - depth - 1, pstk[2], pstk[3]):
            for j in range(depth + 1):
                inpath[rv[j]] = False
            return True
    inpath[v] = False
    return False


@njit(cache=True)
def _play(v, marks, cov, st, indptr, indices, cond, k, inpath, pstk):
    p = st[TO_MOVE]
    marks[v] = p + 1
    st[UNMARKED] -= 1
    st[LAST0 + p] = v
    if p == 0:
        st[MAKER_COUNT] += 1
        if cond == COND_DOM:
            if cov[v] == 0:
                st[UNCOVERED] -= 1
            cov[v] += 1
            for a in range(indptr[v], indptr[v + 1]):
                u = indices[a]
                if cov[u] == 0:
                    st[UNCOVERED] -= 1
                cov[u] += 1
            if st[UNCOVERED] == 0:
                st[STATUS] = MAKER_WON
        elif st[MAKER_COUNT] >= k:
            if _path_through(indptr, indices, marks, v, k, inpath, pstk):
                st[STATUS] = MAKER_WON
    if st[STATUS] == ONGOING and st[UNMARKED] == 0:
        st[STATUS] = BREAKER_WON
    st[TO_MOVE] = 1 - p


# ---------------------------------------------------------------- scoring


@njit(cache=True)
def _sample_paths(marks, blocked, indptr, indices, k, budget, rs, counts, inpath, pathbuf, starts, opt_head, opt_w):
    n = marks.shape[0]
    for i in range(n):
        counts[i] = 0
    ns = 0
    for v in range(n):
        if marks[v] != blocked:
            starts[ns] = v
            ns += 1
    if ns == 0:
        return
    for _ in range(budget):
        v = starts[int(_rand(rs) * ns)]
        pathbuf[0] = v
        plen = 1
        inpath[v] = True
        head = v
        tail = v
        while plen < k:
            nopt = 0
            for side in range(2):
                if side == 0:
                    end = head
                else:
                    if tail == head:
                        break
                    end = tail
                for a in range(indptr[end], indptr[end + 1]):
                    w = indices[a]
                    if marks[w] == blocked or inpath[w]:
                        continue
                    ok = True
                    for b in range(indptr[w], indptr[w + 1]):
                        u = indices[b]
                        if inpath[u] and u != end:
                            ok = False
                            break
                    if ok:
                        opt_head[nopt] = side == 0
                        opt_w[nopt] = w
                        nopt += 1
            if nopt == 0:
                break
            pick = int(_rand(rs) * nopt)
            w = opt_w[pick]
            inpath[w] = True
            pathbuf[plen] = w
            plen += 1
            if opt_head[pick]:
                head = w
            else:
                tail = w
        if plen == k:
            for i in range(plen):
                if marks[pathbuf[i]] == 0:
                    counts[pathbuf[i]] += 1
        for i in range(plen):
            inpath[pathbuf[i]] = False


@njit(cache=True)
def _label_components(marks, want, indptr, indices, label, sizes, queue):
    """Label components of vertices with ``marks == want``; returns the count."""
    n = marks.shape[0]
    for i in range(n):
        label[i] = -1
    ncomp = 0
    for s in range(n):
        if marks[s] != want or label[s] != -1:
            continue
        label[s] = ncomp
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for a in range(indptr[u], indptr[u + 1]):
                w = indices[a]
                if marks[w] == want and label[w] == -1:
                    label[w] = ncomp
                    queue[tail] = w
                    tail += 1
        sizes[ncomp] = tail
        ncomp += 1
    return ncomp


@njit(cache=True)
def _scores(family, budget, mover, legal, nlegal, marks, st, g_indptr, g_indices, dist, closeness,
            cond, k, rs, out, ibuf, bbuf):
    """Raw family scores into ``out[:nlegal]``; False means fall back to uniform."""
    n = marks.shape[0]
    own = mover + 1
    opp = 2 - mover
    if family == F_DEGREE:
        for i in range(nlegal):
            v = legal[i]
            out[i] = float(g_indptr[v + 1] - g_indptr[v])
    elif family == F_UNMARKED_DEGREE or family == F_OWN_ADJ or family == F_OPP_ADJ:
        want = 0 if family == F_UNMARKED_DEGREE else (own if family == F_OWN_ADJ else opp)
        for i in range(nlegal):
            v = legal[i]
            c = 0
            for a in range(g_indptr[v], g_indptr[v + 1]):
                if marks[g_indices[a]] == want:
                    c += 1
            out[i] = float(c)
    elif family == F_DIST_LAST_OWN:
        last = st[LAST0 + mover]
        if last < 0:
            return False
        for i in range(nlegal):
            d = dist[last, legal[i]]
            out[i] = float(n) if d < 0 else float(d)
    elif family == F_DIST_ALL_OWN or family == F_DIST_OPP:
        want = own if family == F_DIST_ALL_OWN else opp
        any_src = False
        for u in range(n):
            if marks[u] == want:
                any_src = True
                break
        if not any_src:
            return False
        for i in range(nlegal):
            v = legal[i]
            best = -1
            for u in range(n):
                if marks[u] == want:
                    d = dist[u, v]
                    if d >= 0 and (best < 0 or d < best):
                        best = d
            out[i] = float(n) if best < 0 else float(best)
    elif family == F_COMPONENT:
        label = ibuf[0]
        _label_components(marks, 0, g_indptr, g_indices, label, ibuf[1], ibuf[2])
        for i in range(nlegal):
            out[i] = float(ibuf[1][label[legal[i]]])
    elif family == F_OWN_COMPONENT:
        label = ibuf[0]
        sizes = ibuf[1]
        ncomp = _label_components(marks, own, g_indptr, g_indices, label, sizes, ibuf[2])
        seen = ibuf[3]
        for c in range(ncomp):
            seen[c] = -1
        for i in range(nlegal):
            v = legal[i]
            total = 1
            for a in range(g_indptr[v], g_indptr[v + 1]):
                c = label[g_indices[a]]
                if c >= 0 and seen[c] != i:
                    seen[c] = i
                    total += sizes[c]
            out[i] = float(total)
    elif family == F_WINSET_COUNT or family == F_WINSET_BLOCK:
        # blocked: the side whose marks rule a winning set out
        blocked = opp if family == F_WINSET_COUNT else own
        if cond == COND_DOM:
            covered = bbuf[0]
            for u in range(n):
                covered[u] = False
            for u in range(n):
                if marks[u] != 0 and marks[u] != blocked:
                    covered[u] = True
                    for a in range(g_indptr[u], g_indptr[u + 1]):
                        covered[g_indices[a]] = True
            for i in range(nlegal):
                v = legal[i]
                c = 0 if covered[v] else 1
                for a in range(g_indptr[v], g_indptr[v + 1]):
                    if not covered[g_indices[a]]:
                        c += 1
                out[i] = float(c)
        else:
            counts = ibuf[0]
            _sample_paths(marks, blocked, g_indptr, g_indices, k, budget, rs, counts, bbuf[1],
                          ibuf[1], ibuf[2], bbuf[2], ibuf[3])
            for i in range(nlegal):
                out[i] = float(counts[legal[i]])
    elif family == F_CLOSENESS:
        for i in range(nlegal):
            out[i] = closeness[legal[i]]
    else:
        return False
    return True


@njit(cache=True)
def _normalize(out, nlegal, has_scores, low):
    if not has_scores:
        for i in range(nlegal):
            out[i] = 1.0 / nlegal
        return
    top = out[0]
    for i in range(1, nlegal):
        if out[i] > top:
            top = out[i]
    if low:
        for i in range(nlegal):
            out[i] = top - out[i]
        top = out[0]
        for i in range(1, nlegal):
            if out[i] > top:
                top = out[i]
    scale = 1.0 / top if top > 0 else 0.0
    floor = 1.0 / (100 * nlegal)
    total = 0.0
    for i in range(nlegal):
        out[i] = out[i] * scale + floor
        total += out[i]
    for i in range(nlegal):
        out[i] = out[i] / total


@njit(cache=True)
def _sample_index(w, nlegal, rs):
    total = 0.0
    for i in range(nlegal):
        total += w[i]
    u = _rand(rs) * total
    acc = 0.0
    for i in range(nlegal):
        acc += w[i]
        if u < acc:
            return i
    return nlegal - 1


# ------------------------------------------------------------------ search


@njit(cache=True)
def _weights(fam, low, budget, mover, legal, nlegal, marks, st, indptr, indices, dist, closeness, cond, k,
             rs, wbuf, ibuf, bbuf):
    has = _scores(fam, budget, mover, legal, nlegal, marks, st, indptr, indices, dist, closeness, cond, k,
                  rs, wbuf, ibuf, bbuf)
    _normalize(wbuf, nlegal, has, low)


@njit(cache=True)
def _run_search(root_marks, root_cov, root_st, indptr, indices, dist, closeness, cond, k,
                iterations, c, micro, opp_micro, seed, ibuf, bbuf):
    """Returns (chosen, child moves, child n, child w, root n).

    ``micro`` / ``opp_micro``: int64[3] = family code, low flag, sample budget.
    """
    n = root_marks.shape[0]
    cap = iterations + 1
    rs = np.empty(1, dtype=np.uint64)
    rs[0] = seed

    node_move = np.full(cap, -1, dtype=np.int64)
    node_mover = np.zeros(cap, dtype=np.int64)
    first_child = np.full(cap, -1, dtype=np.int64)
    last_child = np.full(cap, -1, dtype=np.int64)
    next_sib = np.full(cap, -1, dtype=np.int64)
    nvis = np.zeros(cap, dtype=np.int64)
    nwin = np.zeros(cap, dtype=np.int64)
    unexp = np.empty((cap, n), dtype=np.int64)
    unexp_cnt = np.zeros(cap, dtype=np.int64)

    searcher = root_st[TO_MOVE]
    node_mover[0] = 1 - searcher
    cnt = 0
    for v in range(n):
        if root_marks[v] == 0:
            unexp[0, cnt] = v
            cnt += 1
    unexp_cnt[0] = cnt
    nnodes = 1

    marks = np.empty_like(root_marks)
    cov = np.empty_like(root_cov)
    st = np.empty_like(root_st)
    inpath = np.zeros(n, dtype=np.bool_)
    pstk = np.empty((4, n + 1), dtype=np.int64)
    legal = np.empty(n, dtype=np.int64)
    wbuf = np.empty(n, dtype=np.float64)
    path = np.empty(cap, dtype=np.int64)
    tied = np.empty(n, dtype=np.int64)
    tied_moves = np.empty(n, dtype=np.int64)

    for _ in range(iterations):
        marks[:] = root_marks
        cov[:] = root_cov
        st[:] = root_st
        node = 0
        path[0] = 0
        plen = 1
        # selection
        while st[STATUS] == ONGOING and unexp_cnt[node] == 0 and first_child[node] >= 0:
            log_total = math.log(nvis[node])
            best = -np.inf
            ntied = 0
            ch = first_child[node]
            while ch >= 0:
                score = nwin[ch] / nvis[ch] + c * math.sqrt(log_total / nvis[ch])
                if score > best + TOL:
                    best = score
                    tied[0] = ch
                    ntied = 1
                elif score >= best - TOL:
                    tied[ntied] = ch
                    ntied += 1
                ch = next_sib[ch]
            if ntied == 1:
                node = tied[0]
            else:
                node = _pick_tied(tied, ntied, tied_moves, node_move, st[TO_MOVE] == searcher, micro,
                                  marks, st, indptr, indices, dist, closeness, cond, k, rs, wbuf, ibuf, bbuf)
            _play(node_move[node], marks, cov, st, indptr, indices, cond, k, inpath, pstk)
            path[plen] = node
            plen += 1
        # expansion
        if st[STATUS] == ONGOING and unexp_cnt[node] > 0:
            ne = unexp_cnt[node]
            if st[TO_MOVE] == searcher and micro[0] != F_UNIFORM:
                _weights(micro[0], micro[1] == 1, micro[2], st[TO_MOVE], unexp[node], ne, marks, st, indptr,
                         indices, dist, closeness, cond, k, rs, wbuf, ibuf, bbuf)
                idx = _sample_index(wbuf, ne, rs)
            else:
                idx = int(_rand(rs) * ne)
            move = unexp[node, idx]
            for j in range(idx, ne - 1):
                unexp[node, j] = unexp[node, j + 1]
            unexp_cnt[node] = ne - 1
            mover = st[TO_MOVE]
            _play(move, marks, cov, st, indptr, indices, cond, k, inpath, pstk)
            child = nnodes
            nnodes += 1
            node_move[child] = move
            node_mover[child] = mover
            cnt = 0
            if st[STATUS] == ONGOING:
                for v in range(n):
                    if marks[v] == 0:
                        unexp[child, cnt] = v
                        cnt += 1
            unexp_cnt[child] = cnt
            if first_child[node] < 0:
                first_child[node] = child
            else:
                next_sib[last_child[node]] = child
            last_child[node] = child
            node = child
            path[plen] = child
            plen += 1
        # rollout
        while st[STATUS] == ONGOING:
            nl = 0
            for v in range(n):
                if marks[v] == 0:
                    legal[nl] = v
                    nl += 1
            spec = micro if st[TO_MOVE] == searcher else opp_micro
            if spec[0] == F_UNIFORM:
                v = legal[int(_rand(rs) * nl)]
            else:
                _weights(spec[0], spec[1] == 1, spec[2], st[TO_MOVE], legal, nl, marks, st, indptr, indices,
                         dist, closeness, cond, k, rs, wbuf, ibuf, bbuf)
                v = legal[_sample_index(wbuf, nl, rs)]
            _play(v, marks, cov, st, indptr, indices, cond, k, inpath, pstk)
        winner = 0 if st[STATUS] == MAKER_WON else 1
        for i in range(plen):
            nd = path[i]
            nvis[nd] += 1
            if node_mover[nd] == winner:
                nwin[nd] += 1

    # final move
    nch = 0
    ch = first_child[0]
    while ch >= 0:
        nch += 1
        ch = next_sib[ch]
    moves = np.empty(nch, dtype=np.int64)
    cn = np.empty(nch, dtype=np.int64)
    cw = np.empty(nch, dtype=np.int64)
    ch = first_child[0]
    i = 0
    while ch >= 0:
        moves[i] = node_move[ch]
        cn[i] = nvis[ch]
        cw[i] = nwin[ch]
        i += 1
        ch = next_sib[ch]

    chosen = _immediate_win(root_marks, root_cov, root_st, marks, cov, st, indptr, indices, cond, k, inpath, pstk)
    if chosen < 0:
        top_n = 0
        for i in range(nch):
            if cn[i] > top_n:
                top_n = cn[i]
        ntied = 0
        ch = first_child[0]
        while ch >= 0:
            if nvis[ch] == top_n:
                tied[ntied] = ch
                ntied += 1
            ch = next_sib[ch]
        if ntied > 1:
            top_rate = -1.0
            for j in range(ntied):
                r = nwin[tied[j]] / nvis[tied[j]]
                if r > top_rate:
                    top_rate = r
            m = 0
            for j in range(ntied):
                if nwin[tied[j]] / nvis[tied[j]] >= top_rate - TOL:
                    tied[m] = tied[j]
                    m += 1
            ntied = m
        if ntied == 1:
            best = tied[0]
        else:
            marks[:] = root_marks
            st[:] = root_st
            best = _pick_tied(tied, ntied, tied_moves, node_move, True, micro, marks, st, indptr, indices,
                              dist, closeness, cond, k, rs, wbuf, ibuf, bbuf)
        chosen = node_move[best]
    return chosen, moves, cn, cw, nvis[0]


@njit(cache=True)
def _pick_tied(tied, ntied, tied_moves, node_move, searcher_to_move, micro, marks, st, indptr, indices,
               dist, closeness, cond, k, rs, wbuf, ibuf, bbuf):
    if not searcher_to_move or micro[0] == F_UNIFORM:
        return tied[int(_rand(rs) * ntied)]
    for j in range(ntied):
        tied_moves[j] = node_move[tied[j]]
    _weights(micro[0], micro[1] == 1, micro[2], st[TO_MOVE], tied_moves, ntied, marks, st, indptr, indices,
             dist, closeness, cond, k, rs, wbuf, ibuf, bbuf)
    best = wbuf[0]
    for j in range(1, ntied):
        if wbuf[j] > best:
            best = wbuf[j]
    m = 0
    for j in range(ntied):
        if wbuf[j] >= best - TOL:
            tied_moves[m] = j
            m += 1
    if m == 1:
        return tied[tied_moves[0]]
    return tied[tied_moves[int(_rand(rs) * m)]]


@njit(cache=True)
def _immediate_win(root_marks, root_cov, root_st, marks, cov, st, indptr, indices, cond, k, inpath, pstk):
    """Lowest vertex whose marking ends the game in the mover's favour, or -1."""
    n = root_marks.shape[0]
    mover = root_st[TO_MOVE]
    for v in range(n):
        if root_marks[v] != 0:
            continue
        marks[:] = root_marks
        cov[:] = root_cov
        st[:] = root_st
        _play(v, marks, cov, st, indptr, indices, cond, k, inpath, pstk)
        if st[STATUS] == mover + 1:
            return v
    return -1


# --------------------------------------------------------------- bridging


@lru_cache(maxsize=256)
def graph_arrays(g: Graph):
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    for v in range(g.n):
        indptr[v + 1] = indptr[v] + len(g.adjacency[v])
    indices = np.array([u for a in g.adjacency for u in a], dtype=np.int64)
    dist = np.array([[-1 if d == INF else int(d) for d in row] for row in g.distance_matrix],
                    dtype=np.int64).reshape(g.n, g.n)
    closeness = np.array(g.closeness, dtype=np.float64)
    return indptr, indices, dist, closeness


def _scratch(n: int):
    return np.zeros((4, n + 1), dtype=np.int64), np.zeros((3, n + 1), dtype=np.bool_)


def encode_micro(mid: MicroStrategyId) -> np.ndarray:
    return np.array([FAMILY_CODES[mid.family], 1 if mid.direction == LOW else 0, mid.sample_budget],
                    dtype=np.int64)


def encode_state(s: GameState):
    g = s.board
    marks = np.zeros(g.n, dtype=np.int8)
    for v in range(g.n):
        bit = 1 << v
        if s.maker & bit:
            marks[v] = 1
        elif s.breaker & bit:
            marks[v] = 2
    cov = np.zeros(g.n, dtype=np.int64)
    for v in range(g.n):
        if marks[v] == 1:
            cov[v] += 1
            for u in g.adjacency[v]:
                cov[u] += 1
    status = {Status.ONGOING: ONGOING, Status.MAKER_WIN: MAKER_WON, Status.BREAKER_WIN: BREAKER_WON}[s.status]
    last0 = s.last_move_of(0)
    last1 = s.last_move_of(1)
    st = np.array([int(s.to_move), status, int((cov == 0).sum()), g.n - len(s.history),
                   -1 if last0 is None else last0, -1 if last1 is None else last1,
                   s.maker.bit_count()], dtype=np.int64)
    if isinstance(s.cond, DominatingSet):
        cond, k = COND_DOM, 0
    elif isinstance(s.cond, KPath):
        cond, k = COND_PATH, s.cond.k
    else:
        raise TypeError(f"unsupported win condition {s.cond!r}")
    return marks, cov, st, cond, k


def run_search(s: GameState, iterations: int, c: float, micro: MicroStrategyId, opp_micro: MicroStrategyId, seed: int):
    indptr, indices, dist, closeness = graph_arrays(s.board)
    marks, cov, st, cond, k = encode_state(s)
    ibuf, bbuf = _scratch(s.board.n)
    return _run_search(marks, cov, st, indptr, indices, dist, closeness, cond, k, iterations, float(c),
                       encode_micro(micro), encode_micro(opp_micro), np.uint64(seed), ibuf, bbuf)


def weights_compiled(mid: MicroStrategyId, s: GameState, legal, seed: int = 0) -> np.ndarray:
    """Compiled micro-strategy weights over ``legal`` (for cross-checking the reference scorers)."""
    indptr, indices, dist, closeness = graph_arrays(s.board)
    marks, cov, st, cond, k = encode_state(s)
    ibuf, bbuf = _scratch(s.board.n)
    legal_arr = np.asarray(legal, dtype=np.int64)
    wbuf = np.empty(max(len(legal_arr), 1), dtype=np.float64)
    rs = np.array([seed], dtype=np.uint64)
    spec = encode_micro(mid)
    _weights(spec[0], spec[1] == 1, spec[2], st[TO_MOVE], legal_arr, len(legal_arr), marks, st, indptr, indices,
             dist, closeness, cond, k, rs, wbuf, ibuf, bbuf)
    return wbuf[:len(legal_arr)].copy()
