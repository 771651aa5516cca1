# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled box enumeration kernel.

Same contract as stackyfan._enumpy.enumerate_box, restricted to inputs whose
intermediate dot products fit in int64 (the caller checks bounds before
dispatching here).
"""

from libc.stdlib cimport free, malloc


def enumerate_box(lo, hi, norms, rhs):
    cdef Py_ssize_t n = len(lo)
    cdef Py_ssize_t m = len(rhs)
    cdef Py_ssize_t i, j, k
    if n == 0:
        return [()] if all(c <= 0 for c in rhs) else []
    cdef long long *clo = <long long *> malloc(n * sizeof(long long))
    cdef long long *chi = <long long *> malloc(n * sizeof(long long))
    cdef long long *x = <long long *> malloc(n * sizeof(long long))
    cdef long long *ca = <long long *> malloc((m if m else 1) * n * sizeof(long long))
    cdef long long *cc = <long long *> malloc((m if m else 1) * sizeof(long long))
    if clo == NULL or chi == NULL or x == NULL or ca == NULL or cc == NULL:
        free(clo); free(chi); free(x); free(ca); free(cc)
        raise MemoryError()
    out = []
    cdef long long acc
    cdef bint ok, done
    try:
        for j in range(n):
            clo[j] = lo[j]
            chi[j] = hi[j]
            x[j] = clo[j]
            if clo[j] > chi[j]:
                return []
        for i in range(m):
            cc[i] = rhs[i]
            row = norms[i]
            for j in range(n):
                ca[i * n + j] = row[j]
        done = False
        while not done:
            ok = True
            for i in range(m):
                acc = 0
                for j in range(n):
                    acc += ca[i * n + j] * x[j]
                if acc < cc[i]:
                    ok = False
                    break
            if ok:
                out.append(tuple(x[j] for j in range(n)))
            # odometer increment, last coordinate fastest (lexicographic order)
            k = n - 1
            while True:
                x[k] += 1
                if x[k] <= chi[k]:
                    break
                x[k] = clo[k]
                k -= 1
                if k < 0:
                    done = True
                    break
        return out
    finally:
        free(clo)
        free(chi)
        free(x)
        free(ca)
        free(cc)
