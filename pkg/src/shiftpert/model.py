"""Finite representation of ``T = S_k + F`` on l2 with basis e_0, e_1, ...

The operator is fixed by ``(d, k, C)``: column ``j < d`` of ``C`` holds the
coordinates of ``T e_j`` in e_0..e_{d+k-1}, and ``T e_j = e_{j+k}`` for
``j >= d``. All indices are 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DimensionError(ValueError):
    """Raised when a matrix or vector has the wrong shape."""


class SpecFormatError(ValueError):
    """Raised when an operator-spec file cannot be parsed."""


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    d: int
    k: int
    C: np.ndarray

    @property
    def A1(self) -> np.ndarray:
        """Top ``d x d`` block of ``C``."""
        return self.C[: self.d]

    @property
    def B(self) -> np.ndarray:
        """Bottom ``k x d`` block of ``C``."""
        return self.C[self.d :]

    def __eq__(self, other):
        if not isinstance(other, OperatorSpec):
            return NotImplemented
        return (
            self.d == other.d
            and self.k == other.k
            and np.array_equal(self.C, other.C)
        )

    def __hash__(self):
        return hash((self.d, self.k, self.C.tobytes()))

    def __repr__(self):
        return f"OperatorSpec(d={self.d}, k={self.k}, C={self.C.tolist()!r})"


def build_operator(d: int, k: int, C) -> OperatorSpec:
    """Validate ``(d, k, C)`` and return an immutable :class:`OperatorSpec`.

    No scaling or canonicalisation is applied; ``C`` is stored as a
    read-only complex128 copy.
    """
    if int(d) != d or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    d, k = int(d), int(k)
    C = np.array(C, dtype=np.complex128)
    if C.ndim == 1 and d == 1:
        C = C.reshape(-1, 1)
    if C.shape != (d + k, d):
        raise DimensionError(f"C must have shape ({d + k}, {d}), got {C.shape}")
    if not np.all(np.isfinite(C)):
        raise ValueError("C contains non-finite entries")
    C.setflags(write=False)
    return OperatorSpec(d, k, C)


def shift_spec(d: int, k: int) -> OperatorSpec:
    """The plain shift ``S_k`` written with ``d`` (unperturbed) head columns."""
    C = np.zeros((d + k, d), dtype=np.complex128)
    C[np.arange(d) + k, np.arange(d)] = 1.0
    return build_operator(d, k, C)


def rank_one_operator(k: int, alpha) -> OperatorSpec:
    """``T e_0 = sum_i alpha_i e_i`` and ``T e_j = e_{j+k}`` for ``j >= 1``.

    The contraction condition ``sum |alpha_i|^2 < 1`` is not enforced.
    """
    alpha = np.asarray(alpha, dtype=np.complex128).ravel()
    if alpha.shape != (k + 1,):
        raise DimensionError(f"alpha must have length k+1={k + 1}, got {alpha.size}")
    return build_operator(1, k, alpha.reshape(-1, 1))


def _as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1 or x.size < 1:
        raise DimensionError(f"expected a non-empty 1-d vector, got shape {x.shape}")
    return x


def apply(spec: OperatorSpec, x) -> np.ndarray:
    """Coordinates of ``T x``; the result has length ``max(len(x), d) + k``."""
    x = _as_vector(x)
    d, k = spec.d, spec.k
    L = max(x.size, d)
    out = np.zeros(L + k, dtype=np.complex128)
    head = np.zeros(d, dtype=np.complex128)
    m = min(x.size, d)
    head[:m] = x[:m]
    out[: d + k] = spec.C @ head
    if x.size > d:
        out[d + k : x.size + k] += x[d:]
    return out


def apply_adjoint(spec: OperatorSpec, x) -> np.ndarray:
    """Coordinates of ``T* x``; the result has length ``max(len(x) - k, d)``."""
    x = _as_vector(x)
    d, k = spec.d, spec.k
    out = np.zeros(max(x.size - k, d), dtype=np.complex128)
    m = min(x.size, d + k)
    out[:d] = spec.C[:m].conj().T @ x[:m]
    if x.size > d + k:
        out[d : x.size - k] += x[d + k :]
    return out


def stage_block(spec: OperatorSpec, r: int) -> np.ndarray:
    """The ``(d + r k) x d`` block ``F_r`` holding ``T^r e_j`` for ``j < d``.

    Computed by iterating :func:`apply` on the head columns, never from a
    dense power, so the support is exact.
    """
    if int(r) != r or r < 1:
        raise ValueError(f"stage r must be a positive integer, got {r!r}")
    d = spec.d
    M = np.empty((d + int(r) * spec.k, d), dtype=np.complex128)
    for j in range(d):
        v = np.zeros(d, dtype=np.complex128)
        v[j] = 1.0
        for _ in range(int(r)):
            v = apply(spec, v)
        M[:, j] = v
    return M


def truncate(spec: OperatorSpec, N: int) -> np.ndarray:
    """Top-left ``N x N`` corner of the matrix of ``T``."""
    d, k = spec.d, spec.k
    if N < d + k:
        raise ValueError(f"truncation N={N} must be at least d+k={d + k}")
    T = np.zeros((N, N), dtype=np.complex128)
    T[: d + k, :d] = spec.C
    cols = np.arange(d, N - k)
    T[cols + k, cols] = 1.0
    return T


# --- operator-spec JSON ---------------------------------------------------


def spec_to_dict(spec: OperatorSpec) -> dict:
    return {
        "d": spec.d,
        "k": spec.k,
        "C": [[[float(z.real), float(z.imag)] for z in row] for row in spec.C],
    }


def spec_from_dict(obj) -> OperatorSpec:
    if not isinstance(obj, dict):
        raise SpecFormatError("top level: expected a JSON object")
    for key in ("d", "k", "C"):
        if key not in obj:
            raise SpecFormatError(f"field {key!r}: missing")
    d, k, rows = obj["d"], obj["k"], obj["C"]
    for key, val in (("d", d), ("k", k)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 1:
            raise SpecFormatError(f"field {key!r}: expected a positive integer, got {val!r}")
    if not isinstance(rows, list) or len(rows) != d + k:
        n = len(rows) if isinstance(rows, list) else type(rows).__name__
        raise SpecFormatError(f"field 'C': expected {d + k} rows, got {n}")
    C = np.empty((d + k, d), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            n = len(row) if isinstance(row, list) else type(row).__name__
            raise SpecFormatError(f"field 'C[{i}]': expected {d} entries, got {n}")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in entry)
            ):
                raise SpecFormatError(f"field 'C[{i}][{j}]': expected [re, im], got {entry!r}")
            C[i, j] = complex(entry[0], entry[1])
    try:
        return build_operator(d, k, C)
    except ValueError as exc:
        raise SpecFormatError(f"field 'C': {exc}") from exc


def loads_spec(text: str) -> OperatorSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return spec_from_dict(obj)


def load_spec(path) -> OperatorSpec:
    return loads_spec(Path(path).read_text(encoding="utf-8"))


def dump_spec(spec: OperatorSpec, path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n", encoding="utf-8")
