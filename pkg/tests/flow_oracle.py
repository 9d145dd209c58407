"""Straight-line re-evaluation of the nine Pauli-flow conditions.

Deliberately shares no code with ``mbqcflow.flow``: odd neighbourhoods are
counted edge by edge, the order is the raw pair set, and each condition is a
literal loop over its quantifiers.
"""

from __future__ import annotations

from itertools import product


def odd(edges, vertices, a):
    out = set()
    for v in vertices:
        count = 0
        for w in a:
            if (v, w) in edges or (w, v) in edges:
                count += 1
        if count % 2 == 1:
            out.add(v)
    return out


def violations(vertices, edges, inputs, outputs, lam, p, order):
    """Return the set of ``(condition, where)`` pairs violated by ``(p, order)``.

    ``lam`` maps each non-output to one of ``"XY" "XZ" "YZ" "X" "Y" "Z"``;
    ``order`` is a set of pairs assumed already transitively closed.
    """
    vertices = set(vertices)
    edges = {tuple(e) for e in edges}
    found = set()
    non_outputs = vertices - set(outputs)
    if set(p) != non_outputs:
        found.add(("domain", tuple(sorted(non_outputs - set(p))) + tuple(sorted(set(p) - non_outputs))))
    for u, v in order:
        if u == v:
            found.add(("order-irreflexive", (u,)))
    closed = True
    for (u, v), (w, z) in product(order, order):
        if v == w and (u, z) not in order:
            closed = False
    if not closed:
        found.add(("order-transitive", ()))
    for u in sorted(set(p) & non_outputs):
        a = set(p[u])
        if not a <= vertices:
            found.add(("domain", (u, *sorted(a - vertices))))
            continue
        if a & set(inputs):
            found.add(("domain", (u, *sorted(a & set(inputs)))))
        oa = odd(edges, vertices, a)
        for v in vertices:
            lv = lam.get(v, "OUT")
            # condition 1
            if v in a and v != u and lv not in ("X", "Y") and (u, v) not in order:
                found.add(("P1", (u, v)))
            # condition 2
            if v in oa and v != u and lv not in ("Y", "Z") and (u, v) not in order:
                found.add(("P2", (u, v)))
            # condition 3
            if (u, v) not in order and u != v and lv == "Y":
                if (v in a) != (v in oa):
                    found.add(("P3", (u, v)))
        lu = lam[u]
        if lu == "XY" and not (u not in a and u in oa):
            found.add(("P4", (u,)))
        if lu == "XZ" and not (u in a and u in oa):
            found.add(("P5", (u,)))
        if lu == "YZ" and not (u in a and u not in oa):
            found.add(("P6", (u,)))
        if lu == "X" and not (u in oa):
            found.add(("P7", (u,)))
        if lu == "Z" and not (u in a):
            found.add(("P8", (u,)))
        if lu == "Y" and not ((u in a) != (u in oa)):
            found.add(("P9", (u,)))
    return found


def has_flow_for(vertices, edges, inputs, outputs, lam, p):
    """Whether some strict order makes ``p`` a Pauli flow.

    The order has to contain every pair conditions 1-3 demand; those pairs
    suffice, so ``p`` works iff their transitive closure is acyclic and the
    vertex-local conditions hold.
    """
    vertices = set(vertices)
    edges = {tuple(e) for e in edges}
    need = set()
    for u, a in p.items():
        if set(a) & set(inputs):
            return False
        oa = odd(edges, vertices, a)
        for v in vertices:
            lv = lam.get(v, "OUT")
            if v == u:
                continue
            if (v in a and lv not in ("X", "Y")) or (v in oa and lv not in ("Y", "Z")):
                need.add((u, v))
            if lv == "Y" and (v in a) != (v in oa):
                need.add((u, v))
    closure = set(need)
    changed = True
    while changed:
        changed = False
        for (u, v), (w, z) in product(list(closure), list(closure)):
            if v == w and (u, z) not in closure:
                closure.add((u, z))
                changed = True
    if any(u == v for u, v in closure):
        return False
    local = violations(vertices, edges, inputs, outputs, lam, p, closure)
    return not local
