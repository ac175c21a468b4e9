"""Numba kernels for the batch-hot paths.

Each kernel is embarrassingly parallel over graphs (or candidates); outputs
are written to disjoint slots, so results are deterministic regardless of
thread scheduling.  All coefficient arithmetic is done in 64-bit registers
after loading from the int16 storage arrays.
"""

import numpy as np
from numba import njit, prange

U64_1 = np.uint64(1)


@njit(cache=True, inline="always")
def _mix64(x):
    # splitmix64 finalizer; used for set fingerprints.
    z = x + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def splitmix64_fill(seed, out):
    x = seed
    for i in range(out.shape[0]):
        x = x + np.uint64(0x9E3779B97F4A7C15)
        z = x
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        out[i] = z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _unit_test(a, b, c, d):
    q = (
        6 * a * a + 6 * a * b + 10 * a * c + 5 * a * d
        + 6 * b * b + 5 * b * c + 10 * b * d
        + 6 * c * c + 6 * c * d + 6 * d * d
    )
    return q == 6 and a * d == b * c


@njit(cache=True, parallel=True)
def adjacency_kernel(B, out_adj, out_edges):
    # B: (m, n, 4) int16 -> adjacency (m, n, n) bool, edge counts (m,) int32
    m, n, _ = B.shape
    for i in prange(m):
        cnt = 0
        for j in range(n):
            out_adj[i, j, j] = False
            for k in range(j + 1, n):
                a = np.int64(B[i, j, 0]) - np.int64(B[i, k, 0])
                b = np.int64(B[i, j, 1]) - np.int64(B[i, k, 1])
                c = np.int64(B[i, j, 2]) - np.int64(B[i, k, 2])
                d = np.int64(B[i, j, 3]) - np.int64(B[i, k, 3])
                ok = _unit_test(a, b, c, d)
                out_adj[i, j, k] = ok
                out_adj[i, k, j] = ok
                if ok:
                    cnt += 1
        out_edges[i] = cnt


@njit(cache=True, parallel=True)
def canonize_kernel(B, keys, max_coef, out_mats, out_hash, out_ok):
    """Canonical form + Zobrist hash of each graph in B.

    For each graph: build the 12 symmetry images (identity, 5 rotations,
    reflection, 5 reflected rotations), translation-normalise each image,
    discard images whose coefficients exceed max_coef, hash the survivors,
    keep the image with the largest hash (lowest symmetry index on ties)
    and emit its rows sorted by point code.  out_ok[i] is False when every
    image overflows the box.
    """
    m, n, _ = B.shape
    base = max_coef + 1
    w1 = base
    w2 = base * base
    w3 = base * base * base
    for i in prange(m):
        img = np.empty((12, n, 4), np.int64)
        for j in range(n):
            for l in range(4):
                img[0, j, l] = B[i, j, l]
                img[6, j, l] = B[i, j, 3 - l]
        for k in range(1, 6):
            for j in range(n):
                a = img[k - 1, j, 0]
                b = img[k - 1, j, 1]
                c = img[k - 1, j, 2]
                d = img[k - 1, j, 3]
                img[k, j, 0] = -b
                img[k, j, 1] = a + b
                img[k, j, 2] = -d
                img[k, j, 3] = c + d
        for k in range(7, 12):
            for j in range(n):
                a = img[k - 1, j, 0]
                b = img[k - 1, j, 1]
                c = img[k - 1, j, 2]
                d = img[k - 1, j, 3]
                img[k, j, 0] = -b
                img[k, j, 1] = a + b
                img[k, j, 2] = -d
                img[k, j, 3] = c + d
        best_h = np.uint64(0)
        best_r = -1
        for r in range(12):
            lo0 = img[r, 0, 0]
            lo1 = img[r, 0, 1]
            lo2 = img[r, 0, 2]
            lo3 = img[r, 0, 3]
            hi0 = lo0
            hi1 = lo1
            hi2 = lo2
            hi3 = lo3
            for j in range(1, n):
                v0 = img[r, j, 0]
                v1 = img[r, j, 1]
                v2 = img[r, j, 2]
                v3 = img[r, j, 3]
                if v0 < lo0:
                    lo0 = v0
                elif v0 > hi0:
                    hi0 = v0
                if v1 < lo1:
                    lo1 = v1
                elif v1 > hi1:
                    hi1 = v1
                if v2 < lo2:
                    lo2 = v2
                elif v2 > hi2:
                    hi2 = v2
                if v3 < lo3:
                    lo3 = v3
                elif v3 > hi3:
                    hi3 = v3
            if (
                hi0 - lo0 > max_coef
                or hi1 - lo1 > max_coef
                or hi2 - lo2 > max_coef
                or hi3 - lo3 > max_coef
            ):
                continue
            off = lo0 + w1 * lo1 + w2 * lo2 + w3 * lo3
            h = np.uint64(0)
            for j in range(n):
                code = (
                    img[r, j, 0]
                    + w1 * img[r, j, 1]
                    + w2 * img[r, j, 2]
                    + w3 * img[r, j, 3]
                    - off
                )
                h ^= keys[code]
            if best_r < 0 or h > best_h:
                best_h = h
                best_r = r
        if best_r < 0:
            out_ok[i] = False
            continue
        out_ok[i] = True
        out_hash[i] = best_h
        r = best_r
        lo0 = img[r, 0, 0]
        lo1 = img[r, 0, 1]
        lo2 = img[r, 0, 2]
        lo3 = img[r, 0, 3]
        for j in range(1, n):
            if img[r, j, 0] < lo0:
                lo0 = img[r, j, 0]
            if img[r, j, 1] < lo1:
                lo1 = img[r, j, 1]
            if img[r, j, 2] < lo2:
                lo2 = img[r, j, 2]
            if img[r, j, 3] < lo3:
                lo3 = img[r, j, 3]
        codes = np.empty(n, np.int64)
        for j in range(n):
            codes[j] = (
                (img[r, j, 0] - lo0)
                + w1 * (img[r, j, 1] - lo1)
                + w2 * (img[r, j, 2] - lo2)
                + w3 * (img[r, j, 3] - lo3)
            )
        order = np.argsort(codes)
        for jj in range(n):
            j = order[jj]
            out_mats[i, jj, 0] = img[r, j, 0] - lo0
            out_mats[i, jj, 1] = img[r, j, 1] - lo1
            out_mats[i, jj, 2] = img[r, j, 2] - lo2
            out_mats[i, jj, 3] = img[r, j, 3] - lo3


@njit(cache=True, parallel=True)
def candidate_scan_kernel(P, pi, nv, out_deg, out_dup, out_fp):
    """Degree, duplicate-vertex flag and set fingerprint per candidate.

    Candidate t is parent graph pi[t] plus new vertex nv[t].  The degree is
    the number of parent vertices at unit distance from nv[t].  The
    fingerprint is an order-free 64-bit hash of the translation-normalised
    child vertex set, used to collapse identical candidates cheaply before
    canonization.
    """
    m, n, _ = P.shape
    # Parent fingerprints for the common zero-shift case.
    pre = np.empty(m, np.uint64)
    for g in prange(m):
        h = np.uint64(0)
        for j in range(n):
            code = (
                np.uint64(P[g, j, 0])
                + (np.uint64(P[g, j, 1]) << np.uint64(16))
                + (np.uint64(P[g, j, 2]) << np.uint64(32))
                + (np.uint64(P[g, j, 3]) << np.uint64(48))
            )
            h ^= _mix64(code)
        pre[g] = h
    K = pi.shape[0]
    for t in prange(K):
        g = pi[t]
        v0 = np.int64(nv[t, 0])
        v1 = np.int64(nv[t, 1])
        v2 = np.int64(nv[t, 2])
        v3 = np.int64(nv[t, 3])
        m0 = v0 if v0 < 0 else 0
        m1 = v1 if v1 < 0 else 0
        m2 = v2 if v2 < 0 else 0
        m3 = v3 if v3 < 0 else 0
        cnt = 0
        isdup = False
        for j in range(n):
            r0 = np.int64(P[g, j, 0])
            r1 = np.int64(P[g, j, 1])
            r2 = np.int64(P[g, j, 2])
            r3 = np.int64(P[g, j, 3])
            if r0 < m0:
                m0 = r0
            if r1 < m1:
                m1 = r1
            if r2 < m2:
                m2 = r2
            if r3 < m3:
                m3 = r3
            a = v0 - r0
            b = v1 - r1
            c = v2 - r2
            d = v3 - r3
            if a == 0 and b == 0 and c == 0 and d == 0:
                isdup = True
            if _unit_test(a, b, c, d):
                cnt += 1
        if m0 == 0 and m1 == 0 and m2 == 0 and m3 == 0:
            h = pre[g]
        else:
            h = np.uint64(0)
            for j in range(n):
                code = (
                    np.uint64(np.int64(P[g, j, 0]) - m0)
                    + (np.uint64(np.int64(P[g, j, 1]) - m1) << np.uint64(16))
                    + (np.uint64(np.int64(P[g, j, 2]) - m2) << np.uint64(32))
                    + (np.uint64(np.int64(P[g, j, 3]) - m3) << np.uint64(48))
                )
                h ^= _mix64(code)
        code = (
            np.uint64(v0 - m0)
            + (np.uint64(v1 - m1) << np.uint64(16))
            + (np.uint64(v2 - m2) << np.uint64(32))
            + (np.uint64(v3 - m3) << np.uint64(48))
        )
        h ^= _mix64(code)
        out_deg[t] = cnt
        out_dup[t] = isdup
        out_fp[t] = h


@njit(cache=True, parallel=True)
def deletion_connectivity_kernel(adj, out):
    # out[i, v]: is graph i still connected after deleting vertex v?
    m, n = adj.shape[0], adj.shape[1]
    for t in prange(m * n):
        i = t // n
        v = t % n
        if n <= 2:
            out[i, v] = True
            continue
        start = 1 if v == 0 else 0
        stack = np.empty(n, np.int32)
        seen = np.zeros(n, np.bool_)
        stack[0] = start
        sp = 1
        seen[start] = True
        cnt = 1
        while sp > 0:
            sp -= 1
            u = stack[sp]
            for w in range(n):
                if w != v and adj[i, u, w] and not seen[w]:
                    seen[w] = True
                    cnt += 1
                    stack[sp] = w
                    sp += 1
        out[i, v] = cnt == n - 1
