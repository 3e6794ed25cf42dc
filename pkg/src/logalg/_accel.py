"""Hot int64 kernels, compiled with numba when available.

Set ``LOGALG_NO_NUMBA=1`` to force the pure-numpy fallbacks.  Both paths
return identical results; ``benchmarks/bench_kernels.py`` times them.

All kernels work on small machine integers.  Callers guarantee that
entries fit comfortably in int64 (they are only used on bounded search
spaces and on residues modulo primes below 2**31).
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("LOGALG_NO_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# pure numpy implementations


def _dominated_np(cands: np.ndarray, basis: np.ndarray) -> np.ndarray:
    out = np.zeros(cands.shape[0], dtype=np.bool_)
    if basis.shape[0] == 0 or cands.shape[0] == 0:
        return out
    for i in range(cands.shape[0]):
        out[i] = bool(np.any(np.all(basis <= cands[i], axis=1)))
    return out


def _box_solutions_np(A: np.ndarray, bound: int) -> np.ndarray:
    m = A.shape[1]
    grids = np.indices((bound + 1,) * m).reshape(m, -1).T
    if A.shape[0] == 0:
        return grids.astype(np.int64)
    mask = np.all(grids @ A.T == 0, axis=1)
    return grids[mask].astype(np.int64)


def _minimal_nonzero_np(sols: np.ndarray) -> np.ndarray:
    nz = sols[np.any(sols != 0, axis=1)]
    keep = np.ones(nz.shape[0], dtype=np.bool_)
    for i in range(nz.shape[0]):
        le = np.all(nz <= nz[i], axis=1)
        le[i] = False
        # exact duplicates do not occur in a box enumeration
        if np.any(le):
            keep[i] = False
    return nz[keep]


def _rank_mod_p_np(M: np.ndarray, p: int) -> int:
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        for i in range(rows):
            if i != r and A[i, c] != 0:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == rows:
            break
    return r


def _bar_boundary_np(table: np.ndarray, k: int) -> np.ndarray:
    """Boundary C_k -> C_{k-1} of the bar complex of a finite monoid.

    Basis of C_k is M^k in lexicographic order (k-tuples of element ids).
    d[a1|...|ak] = [a2|...|ak] + sum_i (-1)^i [..|a_i a_{i+1}|..] + (-1)^k [a1|..|a_{k-1}]
    """
    n = table.shape[0]
    rows = n ** (k - 1) if k >= 1 else 0
    cols = n ** k
    D = np.zeros((rows, cols), dtype=np.int64)
    if k == 0:
        return D
    for col in range(cols):
        t = np.zeros(k, dtype=np.int64)
        c = col
        for j in range(k - 1, -1, -1):
            t[j] = c % n
            c //= n
        for i in range(k + 1):
            if i == 0:
                face = t[1:]
            elif i == k:
                face = t[:-1]
            else:
                face = np.concatenate((t[: i - 1], [table[t[i - 1], t[i]]], t[i + 1 :]))
            idx = 0
            for v in face:
                idx = idx * n + v
            D[idx, col] += -1 if i % 2 else 1
    return D


def _bfs_class_np(start: np.ndarray, lhs: np.ndarray, rhs: np.ndarray, max_deg: int) -> np.ndarray:
    """All exponent vectors reachable from ``start`` by applying relations
    (in both directions, added to arbitrary context) without exceeding
    total degree ``max_deg``.  Returned sorted lexicographically."""
    seen = {tuple(int(x) for x in start)}
    frontier = [np.array(start, dtype=np.int64)]
    while frontier:
        nxt = []
        for w in frontier:
            for a, b in ((lhs, rhs), (rhs, lhs)):
                for r in range(a.shape[0]):
                    if np.all(w >= a[r]):
                        v = w - a[r] + b[r]
                        if v.sum() <= max_deg:
                            key = tuple(int(x) for x in v)
                            if key not in seen:
                                seen.add(key)
                                nxt.append(v)
        frontier = nxt
    out = np.array(sorted(seen), dtype=np.int64)
    return out.reshape(len(seen), start.shape[0])


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit(cache=True)
    def _dominated_nb(cands, basis):
        nc, m = cands.shape
        out = np.zeros(nc, dtype=np.bool_)
        for i in range(nc):
            for j in range(basis.shape[0]):
                ok = True
                for t in range(m):
                    if basis[j, t] > cands[i, t]:
                        ok = False
                        break
                if ok:
                    out[i] = True
                    break
        return out

    @njit(cache=True)
    def _box_count_and_fill(A, bound, out, fill):
        r, m = A.shape
        x = np.zeros(m, dtype=np.int64)
        count = 0
        while True:
            good = True
            for i in range(r):
                s = 0
                for j in range(m):
                    s += A[i, j] * x[j]
                if s != 0:
                    good = False
                    break
            if good:
                if fill:
                    for j in range(m):
                        out[count, j] = x[j]
                count += 1
            # odometer, last coordinate fastest
            pos = m - 1
            while pos >= 0:
                x[pos] += 1
                if x[pos] <= bound:
                    break
                x[pos] = 0
                pos -= 1
            if pos < 0:
                break
        return count

    def _box_solutions_nb(A, bound):
        A = np.ascontiguousarray(A, dtype=np.int64)
        m = A.shape[1]
        dummy = np.zeros((1, m), dtype=np.int64)
        n = _box_count_and_fill(A, bound, dummy, False)
        out = np.zeros((n, m), dtype=np.int64)
        _box_count_and_fill(A, bound, out, True)
        return out

    @njit(cache=True)
    def _minimal_nonzero_nb(sols):
        n, m = sols.shape
        keep = np.zeros(n, dtype=np.bool_)
        for i in range(n):
            nz = False
            for t in range(m):
                if sols[i, t] != 0:
                    nz = True
                    break
            if not nz:
                continue
            minimal = True
            for j in range(n):
                if j == i:
                    continue
                le = True
                jnz = False
                for t in range(m):
                    if sols[j, t] > sols[i, t]:
                        le = False
                        break
                    if sols[j, t] != 0:
                        jnz = True
                if le and jnz:
                    minimal = False
                    break
            keep[i] = minimal
        return sols[keep]

    @njit(cache=True)
    def _rank_mod_p_nb(M, p):
        A = M.copy() % p
        rows, cols = A.shape
        r = 0
        for c in range(cols):
            piv = -1
            for i in range(r, rows):
                if A[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for t in range(cols):
                    tmp = A[r, t]
                    A[r, t] = A[piv, t]
                    A[piv, t] = tmp
            # modular inverse by exponentiation
            base = A[r, c]
            e = p - 2
            inv = 1
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for t in range(cols):
                A[r, t] = (A[r, t] * inv) % p
            for i in range(rows):
                if i != r and A[i, c] != 0:
                    f = A[i, c]
                    for t in range(cols):
                        A[i, t] = (A[i, t] - f * A[r, t]) % p
            r += 1
            if r == rows:
                break
        return r

    @njit(cache=True)
    def _bar_boundary_nb(table, k):
        n = table.shape[0]
        rows = n ** (k - 1) if k >= 1 else 0
        cols = n**k
        D = np.zeros((rows, cols), dtype=np.int64)
        if k == 0:
            return D
        t = np.zeros(k, dtype=np.int64)
        for col in range(cols):
            c = col
            for j in range(k - 1, -1, -1):
                t[j] = c % n
                c //= n
            for i in range(k + 1):
                idx = 0
                if i == 0:
                    for j in range(1, k):
                        idx = idx * n + t[j]
                elif i == k:
                    for j in range(k - 1):
                        idx = idx * n + t[j]
                else:
                    for j in range(k):
                        if j == i - 1:
                            idx = idx * n + table[t[i - 1], t[i]]
                        elif j == i:
                            continue
                        else:
                            idx = idx * n + t[j]
                D[idx, col] += -1 if i % 2 else 1
        return D


# ---------------------------------------------------------------------------
# dispatch


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def dominated(cands: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Row mask: candidate i is >= (coordinatewise) some basis row."""
    cands = np.ascontiguousarray(cands, dtype=np.int64)
    basis = np.ascontiguousarray(basis, dtype=np.int64).reshape(-1, cands.shape[1] if cands.ndim == 2 else 0)
    if HAVE_NUMBA:
        return _dominated_nb(cands, basis)
    return _dominated_np(cands, basis)


def box_solutions(A: np.ndarray, bound: int) -> np.ndarray:
    """All x in {0..bound}^m with A x = 0, lexicographic order."""
    A = np.asarray(A, dtype=np.int64)
    if HAVE_NUMBA:
        return _box_solutions_nb(A, int(bound))
    return _box_solutions_np(A, int(bound))


def minimal_nonzero(sols: np.ndarray) -> np.ndarray:
    """Coordinatewise-minimal nonzero rows of ``sols``."""
    sols = np.ascontiguousarray(sols, dtype=np.int64)
    if HAVE_NUMBA:
        return _minimal_nonzero_nb(sols)
    return _minimal_nonzero_np(sols)


def rank_mod_p(M, p: int) -> int:
    M = np.ascontiguousarray(np.asarray(M, dtype=np.int64).reshape(len(M), -1) if len(M) else np.zeros((0, 0), dtype=np.int64))
    if M.size == 0:
        return 0
    if HAVE_NUMBA:
        return int(_rank_mod_p_nb(M, np.int64(p)))
    return _rank_mod_p_np(M, p)


def bar_boundary(table: np.ndarray, k: int) -> np.ndarray:
    table = np.ascontiguousarray(table, dtype=np.int64)
    if HAVE_NUMBA:
        return _bar_boundary_nb(table, k)
    return _bar_boundary_np(table, k)


def bfs_class(start, lhs, rhs, max_deg: int) -> np.ndarray:
    # a dict-backed search beats a compiled array scan at these sizes
    return _bfs_class_np(
        np.asarray(start, dtype=np.int64),
        np.asarray(lhs, dtype=np.int64).reshape(-1, len(start)),
        np.asarray(rhs, dtype=np.int64).reshape(-1, len(start)),
        int(max_deg),
    )
