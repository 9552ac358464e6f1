"""numpy fallback for the valuation kernels (same signatures as _ckernel)."""

import numpy as np

CHUNK = 1 << 15


def _values(kinds, slots, arities, children, tables, n, nvars, start, stop):
    idx = np.arange(start, stop, dtype=np.int64)
    assign = np.empty((nvars, stop - start), dtype=np.int64)
    for j in range(nvars - 1, -1, -1):
        idx, assign[j] = np.divmod(idx, n)
    vals = []
    for i in range(len(kinds)):
        if kinds[i] == 0:
            vals.append(assign[slots[i]])
            continue
        flat = np.zeros(stop - start, dtype=np.int64)
        for c in range(arities[i]):
            flat = flat * n + vals[children[i, c]]
        vals.append(tables[slots[i] + flat].astype(np.int64))
    return vals


def find_valuation(kinds, slots, arities, children, tables, n, nvars,
                   designated, must_in, must_out):
    total = n**nvars
    des = np.asarray(designated, dtype=bool)
    for start in range(0, total, CHUNK):
        stop = min(total, start + CHUNK)
        vals = _values(kinds, slots, arities, children, tables, n, nvars, start, stop)
        ok = np.ones(stop - start, dtype=bool)
        for i in must_in:
            ok &= des[vals[i]]
        for i in must_out:
            ok &= ~des[vals[i]]
        hits = np.flatnonzero(ok)
        if hits.size:
            return start + int(hits[0])
    return -1


def designation_table(kinds, slots, arities, children, tables, n, nvars,
                      designated, targets):
    total = n**nvars
    des = np.asarray(designated, dtype=bool)
    out = np.empty((total, len(targets)), dtype=np.uint8)
    for start in range(0, total, CHUNK):
        stop = min(total, start + CHUNK)
        vals = _values(kinds, slots, arities, children, tables, n, nvars, start, stop)
        for t, node in enumerate(targets):
            out[start:stop, t] = des[vals[node]]
    return out
