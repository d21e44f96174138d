"""Pure-Python kernels. Same signatures and results as ``_ckernels``.

Formula layout (all 0-based, from ``kernels.flatten``): literal ``i`` lies in
constraint ``lit_con[i]`` and forbids value ``lit_val[i]``; the literals of
variable ``x`` are ``occ_lit[occ_start[x]:occ_start[x + 1]]``.
"""


def ppz_batch(d, n, lit_con, lit_val, con_len, occ_start, occ_lit,
              perms, uniforms, out_success, out_assign):
    lit_con = lit_con.tolist()
    lit_val = lit_val.tolist()
    con_len = con_len.tolist()
    occ_start = occ_start.tolist()
    occ_lit = occ_lit.tolist()
    m = len(con_len)
    perms_l = perms.tolist()
    uni_l = uniforms.tolist()
    total = 0
    for t in range(len(perms_l)):
        perm = perms_l[t]
        u = uni_l[t]
        remaining = list(con_len)
        sat = [False] * m
        assign = [0] * n
        ok = True
        for i in range(n):
            x = perm[i]
            lits = occ_lit[occ_start[x]:occ_start[x + 1]]
            forbidden = set()
            for li in lits:
                c = lit_con[li]
                if not sat[c] and remaining[c] == 1:
                    forbidden.add(lit_val[li])
            size = d - len(forbidden)
            if size == 0:
                ok = False
                break
            idx = int(u[i] * size)
            if idx >= size:
                idx = size - 1
            v = 0
            for v in range(1, d + 1):
                if v not in forbidden:
                    if idx == 0:
                        break
                    idx -= 1
            assign[x] = v
            for li in lits:
                c = lit_con[li]
                if lit_val[li] != v:
                    sat[c] = True
                remaining[c] -= 1
        if ok and all(sat):
            out_success[t] = 1
            out_assign[t, :] = assign
            total += 1
        else:
            out_success[t] = 0
    return total


def branch_success(d, n, lit_con, lit_val, con_len, occ_start, occ_lit, perm):
    lit_con = lit_con.tolist()
    lit_val = lit_val.tolist()
    occ_start = occ_start.tolist()
    occ_lit = occ_lit.tolist()
    m = len(con_len)
    remaining = con_len.tolist()
    satcount = [0] * m
    perm = perm.tolist()
    nsat = 0

    def dfs(depth, weight):
        nonlocal nsat
        if depth == n:
            return weight if nsat == m else 0.0
        x = perm[depth]
        lits = occ_lit[occ_start[x]:occ_start[x + 1]]
        forbidden = [False] * (d + 1)
        nforb = 0
        for li in lits:
            c = lit_con[li]
            if satcount[c] == 0 and remaining[c] == 1 and not forbidden[lit_val[li]]:
                forbidden[lit_val[li]] = True
                nforb += 1
        size = d - nforb
        if size == 0:
            return 0.0
        w = weight / size
        total = 0.0
        for v in range(1, d + 1):
            if forbidden[v]:
                continue
            for li in lits:
                c = lit_con[li]
                if lit_val[li] != v:
                    if satcount[c] == 0:
                        nsat += 1
                    satcount[c] += 1
                remaining[c] -= 1
            total += dfs(depth + 1, w)
            for li in lits:
                c = lit_con[li]
                if lit_val[li] != v:
                    satcount[c] -= 1
                    if satcount[c] == 0:
                        nsat -= 1
                remaining[c] += 1
        return total

    return dfs(0, 1.0)
