"""Backtracking search for not-all-equal 2-colorings over CSR edge arrays.

Vertices are decided in a fixed order grouped by connected component.  After
each assignment, an edge whose assigned vertices all share color ``c`` and
which has exactly one unassigned vertex forces that vertex to the other
color.  On a conflict the forcing reasons are traced back to the decisions
that caused it and the search jumps straight to the deepest of those
(conflict-directed backjumping); decisions outside the conflict are never
flipped for its sake.  The first decision of a component without fixed
vertices is only tried with color 1 (color swap symmetry).
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

COLORABLE, NOT_COLORABLE, UNDECIDED = 0, 1, 2


@njit(cache=True)
def components(n, edge_ptr, edge_verts):
    """Label each vertex with the smallest vertex of its component."""
    parent = np.arange(n)
    for e in range(len(edge_ptr) - 1):
        a = edge_verts[edge_ptr[e]]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        for i in range(edge_ptr[e] + 1, edge_ptr[e + 1]):
            b = edge_verts[i]
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
                a = b
    for v in range(n):
        r = v
        while parent[r] != r:
            r = parent[r]
        parent[v] = r
    return parent


@njit(cache=True)
def _incidence(n, edge_ptr, edge_verts):
    start = np.zeros(n + 1, np.int64)
    for v in edge_verts:
        start[v + 1] += 1
    for v in range(n):
        start[v + 1] += start[v]
    fill = start[:-1].copy()
    inc = np.empty(len(edge_verts), np.int64)
    for e in range(len(edge_ptr) - 1):
        for i in range(edge_ptr[e], edge_ptr[e + 1]):
            v = edge_verts[i]
            inc[fill[v]] = e
            fill[v] += 1
    return start, inc


@njit(cache=True)
def _propagate(edge_ptr, edge_verts, inc_ptr, inc, cnt, color, trail, state, level, level_of, reason):
    # state: [trail length, next trail entry to process, conflicting edge].
    # A processed vertex has been added to the counts of all its edges, even
    # when a conflict is found part way, so undo can subtract uniformly.
    conflict = False
    while state[1] < state[0] and not conflict:
        v = trail[state[1]]
        state[1] += 1
        c = color[v] - 1
        o = 1 - c
        for p in range(inc_ptr[v], inc_ptr[v + 1]):
            e = inc[p]
            cnt[e, c] += 1
            if conflict:
                continue
            size = edge_ptr[e + 1] - edge_ptr[e]
            if cnt[e, c] == size:
                conflict = True
                state[2] = e
            elif cnt[e, c] == size - 1 and cnt[e, o] == 0:
                for i in range(edge_ptr[e], edge_ptr[e + 1]):
                    u = edge_verts[i]
                    if color[u] == 0:
                        color[u] = o + 1
                        level_of[u] = level
                        reason[u] = e
                        trail[state[0]] = u
                        state[0] += 1
                        break
    return conflict


@njit(cache=True)
def _undo(to, inc_ptr, inc, cnt, color, trail, state):
    for i in range(to, state[0]):
        v = trail[i]
        if i < state[1]:
            c = color[v] - 1
            for p in range(inc_ptr[v], inc_ptr[v + 1]):
                cnt[inc[p], c] -= 1
        color[v] = 0
    state[0] = to
    state[1] = to


@njit(cache=True)
def _conflict_levels(edge, edge_ptr, edge_verts, level_of, reason, seen, stamp, stack, in_set, members, count):
    """Add to the level set the decisions that imply every vertex of ``edge``."""
    top = 0
    for i in range(edge_ptr[edge], edge_ptr[edge + 1]):
        stack[top] = edge_verts[i]
        top += 1
    while top > 0:
        top -= 1
        w = stack[top]
        if seen[w] == stamp:
            continue
        seen[w] = stamp
        lv = level_of[w]
        if lv == 0:
            continue
        r = reason[w]
        if r < 0:
            if not in_set[lv]:
                in_set[lv] = True
                members[count] = lv
                count += 1
        else:
            for i in range(edge_ptr[r], edge_ptr[r + 1]):
                u = edge_verts[i]
                if u != w and seen[u] != stamp:
                    stack[top] = u
                    top += 1
    return count


@njit(cache=True)
def search(n, edge_ptr, edge_verts, order, comp, fixed, budget):
    """Decide 2-colorability; returns ``(status, colors, nodes)``.

    ``order`` lists the vertices to branch on, grouped by component;
    ``fixed`` holds 0 (free) or a prescribed color per vertex; a negative
    ``budget`` means no node limit.
    """
    m = len(edge_ptr) - 1
    inc_ptr, inc = _incidence(n, edge_ptr, edge_verts)
    cnt = np.zeros((m, 2), np.int32)
    color = np.zeros(n, np.int8)
    trail = np.empty(n, np.int64)
    state = np.zeros(3, np.int64)
    level_of = np.zeros(n, np.int64)
    reason = np.full(n, -1, np.int64)

    comp_fixed = np.zeros(n, np.bool_)
    for v in range(n):
        if fixed[v] != 0:
            color[v] = fixed[v]
            trail[state[0]] = v
            state[0] += 1
            comp_fixed[comp[v]] = True
    nodes = 0
    if _propagate(edge_ptr, edge_verts, inc_ptr, inc, cnt, color, trail, state, 0, level_of, reason):
        return NOT_COLORABLE, color, nodes

    size = len(order)
    dec_pos = np.zeros(size + 1, np.int64)
    dec_trail = np.zeros(size + 1, np.int64)
    flipped = np.zeros(size + 1, np.bool_)
    # conflict set of the first branch of each flipped level, stacked in pool
    cs_start = np.zeros(size + 2, np.int64)
    cs_end = np.zeros(size + 2, np.int64)
    pool = np.empty(max(64, 4 * size), np.int64)
    ptop = 0
    in_set = np.zeros(size + 1, np.bool_)
    members = np.empty(size + 1, np.int64)
    seen = np.zeros(n, np.int64)
    stack = np.empty(len(edge_verts) + n, np.int64)
    stamp = 0

    level = 0
    pos = 0
    last_comp = -1
    while True:
        while pos < size and color[order[pos]] != 0:
            pos += 1
        if pos == size:
            return COLORABLE, color, nodes
        if budget >= 0 and nodes >= budget:
            return UNDECIDED, color, nodes
        v = order[pos]
        nodes += 1
        level += 1
        first = comp[v] != last_comp
        last_comp = comp[v]
        dec_pos[level] = pos
        dec_trail[level] = state[0]
        flipped[level] = first and not comp_fixed[comp[v]]
        cs_start[level] = ptop
        cs_end[level] = ptop
        color[v] = 1
        level_of[v] = level
        reason[v] = -1
        trail[state[0]] = v
        state[0] += 1
        conflict = _propagate(edge_ptr, edge_verts, inc_ptr, inc, cnt, color, trail, state, level, level_of, reason)
        while conflict:
            stamp += 1
            count = _conflict_levels(
                state[2], edge_ptr, edge_verts, level_of, reason, seen, stamp, stack, in_set, members, 0
            )
            d = level
            while True:
                while d > 0 and not in_set[d]:
                    d -= 1
                if d == 0 or not flipped[d]:
                    break
                in_set[d] = False
                for i in range(cs_start[d], cs_end[d]):
                    lv = pool[i]
                    if not in_set[lv]:
                        in_set[lv] = True
                        members[count] = lv
                        count += 1
            if d == 0:
                return NOT_COLORABLE, color, nodes
            if budget >= 0 and nodes >= budget:
                return UNDECIDED, color, nodes
            nodes += 1
            in_set[d] = False
            _undo(dec_trail[d], inc_ptr, inc, cnt, color, trail, state)
            level = d
            ptop = cs_start[d]
            for i in range(count):
                lv = members[i]
                if in_set[lv]:
                    if ptop == len(pool):
                        grown = np.empty(2 * len(pool), np.int64)
                        grown[:ptop] = pool
                        pool = grown
                    pool[ptop] = lv
                    ptop += 1
                    in_set[lv] = False
            cs_end[d] = ptop
            flipped[d] = True
            u = order[dec_pos[d]]
            color[u] = 2
            level_of[u] = d
            reason[u] = -1
            trail[state[0]] = u
            state[0] += 1
            conflict = _propagate(edge_ptr, edge_verts, inc_ptr, inc, cnt, color, trail, state, d, level_of, reason)
        pos = dec_pos[level] + 1
        last_comp = comp[order[dec_pos[level]]]
