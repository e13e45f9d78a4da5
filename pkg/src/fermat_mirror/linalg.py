"""Small dense linear algebra over a :class:`~fermat_mirror.fields.Field`.

Matrices are numpy ``object`` arrays so exact scalars survive every product.
The matrices in this package are tiny (dimension vectors are thin or at most 2
per vertex), so plain Gauss-Jordan elimination is used throughout.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidParameter
from .fields import Field


def matrix(rows, field: Field, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build a matrix from nested rows, coercing every entry into ``field``."""
    if shape is not None and 0 in shape:
        return np.empty(shape, dtype=object)
    rows = list(rows)
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for r, row in enumerate(rows):
        row = list(row)
        if len(row) != out.shape[1]:
            raise InvalidParameter("ragged matrix rows")
        for c, x in enumerate(row):
            out[r, c] = field.coerce(x)
    if shape is not None and out.shape != shape:
        raise InvalidParameter(f"expected shape {shape}, got {out.shape}")
    return out


def zeros(r: int, c: int, field: Field) -> np.ndarray:
    out = np.empty((r, c), dtype=object)
    out.fill(field.zero)
    return out


def identity(d: int, field: Field) -> np.ndarray:
    out = zeros(d, d, field)
    for k in range(d):
        out[k, k] = field.one
    return out


def scalar(x, field: Field) -> np.ndarray:
    return matrix([[x]], field)


def matmul(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise InvalidParameter(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1], field)
    return a @ b


def chain(mats, field: Field) -> np.ndarray:
    """Product ``mats[0] @ mats[1] @ ...``."""
    out = mats[0]
    for m in mats[1:]:
        out = matmul(out, m, field)
    return out


def is_zero(a: np.ndarray, field: Field) -> bool:
    return all(field.is_zero(x) for x in a.flat)


def mat_eq(a: np.ndarray, b: np.ndarray, field: Field) -> bool:
    if a.shape != b.shape:
        return False
    return all(field.eq(x, y) for x, y in zip(a.flat, b.flat))


def rank(a: np.ndarray, field: Field) -> int:
    return len(_rref(a.copy(), field)[1])


def _rref(m: np.ndarray, field: Field):
    """Reduced row echelon form in place; returns ``(m, pivot_columns)``."""
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        if field.exact:
            pr = next((k for k in range(r, rows) if not field.is_zero(m[k, c])), None)
        else:
            best = max(range(r, rows), key=lambda k: abs(m[k, c]))
            pr = None if field.is_zero(m[best, c]) else best
        if pr is None:
            continue
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = field.inverse(m[r, c])
        m[r] = [x * inv for x in m[r]]
        for k in range(rows):
            if k != r and not field.is_zero(m[k, c]):
                f = m[k, c]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def inverse(a: np.ndarray, field: Field) -> np.ndarray:
    """Inverse of a square matrix; raises ``ZeroDivisionError`` when singular."""
    d = a.shape[0]
    if a.shape != (d, d):
        raise InvalidParameter(f"cannot invert non-square {a.shape}")
    if d == 0:
        return np.empty((0, 0), dtype=object)
    aug = np.concatenate([a.copy(), identity(d, field)], axis=1)
    aug, pivots = _rref(aug, field)
    if pivots[:d] != list(range(d)):
        raise ZeroDivisionError("singular matrix")
    return aug[:, d:].copy()


def is_invertible(a: np.ndarray, field: Field) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, field) == a.shape[0]


def nullspace(a: np.ndarray, field: Field) -> list[np.ndarray]:
    """Basis of ``{x : a @ x = 0}`` as a list of 1-d arrays."""
    rows, cols = a.shape
    if rows == 0:
        return [identity(cols, field)[:, k].copy() for k in range(cols)]
    m, pivots = _rref(a.copy(), field)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.empty(cols, dtype=object)
        v.fill(field.zero)
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = -m[r, fc]
        basis.append(v)
    return basis
