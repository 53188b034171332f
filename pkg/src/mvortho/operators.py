"""The commuting difference operators and their matrix realizations.

Each family carries one total operator, its single-site part, and a
nested chain of exchange operators:

* single:      sum_j B_j(x) (1 - E_j^+) + D_j(x) (1 - E_j^-)
* exchange(i): sum_{j != k >= i} c_{jk}(x) (1 - E_j^- E_k^+)
* total:       single + exchange(1)

where E_j^+- shifts x_j by one and, per family,

    Hahn:        B_j = (N-|x|)(x_j+a_j),  D_j = x_j(N-|x|+b),  c_jk = x_j(x_k+a_k)
    Krawtchouk:  B_j = (N-|x|) a_j,       D_j = x_j,           c_jk = x_j a_k
    Meixner:     B_j = (beta+|x|) a_j,    D_j = x_j,           c_jk = -x_j a_k

B_j and D_j are the birth and death rates of the j-th population group.
On the bounded simplices every coefficient multiplying an out-of-domain
shift vanishes exactly, so no out-of-lattice value is ever read.  On a
truncated Meixner box the up-shift coefficient does not vanish at the
frontier |x| = xmax; those result entries are flagged invalid (None)
rather than silently zeroed, and matrix rows there are marked invalid.

Operators are applied directly to value tables; summation order is a
fixed j-then-k loop (results are order-independent in exact arithmetic).
Application is pure per lattice point; matrices are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._backend import R, ZERO
from .core import (
    HahnParams,
    KrawtchoukParams,
    Lattice,
    LatticeFunction,
    MeixnerParams,
    enumerate_degrees,
    family_lattice,
)
from .linalg import in_column_span, mat_mul, max_abs
from .measures import WeightTable

KINDS = ("total", "single", "exchange")


@dataclass(frozen=True)
class OperatorSpec:
    """A family operator: kind 'total', 'single', or 'exchange' with index."""

    params: object
    kind: str
    index: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind == "exchange":
            if self.index is None or not 1 <= self.index <= self.params.n - 1:
                raise ValueError(
                    f"exchange index must lie in [1, {self.params.n - 1}]"
                )
        elif self.index is not None:
            raise ValueError(f"kind {self.kind!r} takes no index")

    @property
    def label(self) -> str:
        if self.kind == "exchange":
            return f"exchange{self.index}"
        return self.kind


def up_rate(params, x, j: int):
    """Birth rate B_j(x) (0-based site j)."""
    if isinstance(params, HahnParams):
        return R(params.N - sum(x)) * (x[j] + params.a[j])
    if isinstance(params, KrawtchoukParams):
        return R(params.N - sum(x)) * params.a[j]
    return (params.beta + sum(x)) * params.a[j]


def down_rate(params, x, j: int):
    """Death rate D_j(x) (0-based site j)."""
    if isinstance(params, HahnParams):
        return R(x[j]) * (params.N - sum(x) + params.b)
    return R(x[j])


def exchange_coeff(params, x, j: int, k: int):
    """Coefficient of the move x -> x - e_j + e_k (0-based sites)."""
    if isinstance(params, HahnParams):
        return R(x[j]) * (x[k] + params.a[k])
    if isinstance(params, KrawtchoukParams):
        return R(x[j]) * params.a[k]
    return -R(x[j]) * params.a[k]


def _moves(op: OperatorSpec, x):
    """Yield (coefficient, shifted point) pairs with nonzero coefficient.

    A shifted point may fall outside a truncated box; the caller decides
    how to handle that.  On bounded families all yielded points lie in
    the simplex because the rates vanish on the relevant boundary.
    """
    params = op.params
    n = params.n
    if op.kind in ("total", "single"):
        for j in range(n):
            b = up_rate(params, x, j)
            if b != 0:
                yield b, x[:j] + (x[j] + 1,) + x[j + 1 :]
            d = down_rate(params, x, j)
            if d != 0:
                yield d, x[:j] + (x[j] - 1,) + x[j + 1 :]
    if op.kind in ("total", "exchange"):
        lo = 0 if op.kind == "total" else op.index - 1
        for j in range(lo, n):
            if x[j] == 0:
                continue
            for k in range(lo, n):
                if k == j:
                    continue
                c = exchange_coeff(params, x, j, k)
                if c != 0:
                    y = list(x)
                    y[j] -= 1
                    y[k] += 1
                    yield c, tuple(y)


def apply_operator(op: OperatorSpec, f: LatticeFunction) -> LatticeFunction:
    """Apply the operator pointwise to a value table.

    The result entry at x is sum over moves of coeff * (f(x) - f(y)).
    On a truncated Meixner box, entries whose stencil leaves the box
    come back as None.
    """
    lattice = f.lattice
    if lattice.n != op.params.n:
        raise ValueError("lattice dimension does not match the parameters")
    if not isinstance(op.params, MeixnerParams) and lattice.bound != op.params.N:
        raise ValueError("lattice bound does not match N")
    index = lattice.index
    out = []
    for x, fx in zip(lattice.points, f.values):
        acc = ZERO
        ok = fx is not None
        if ok:
            for c, y in _moves(op, x):
                pos = index.get(y)
                if pos is None or f.values[pos] is None:
                    ok = False
                    break
                acc += c * (fx - f.values[pos])
        out.append(acc if ok else None)
    return LatticeFunction(lattice, tuple(out))


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix realization on the enumerated lattice.

    Row x holds the coefficients of (Hf)(x) as a functional of f, so
    column j equals the operator applied to the j-th delta function and
    matrix-vector products agree with :func:`apply_operator`.  Rows
    whose stencil leaves a truncated box are flagged invalid and zeroed.
    """

    op: OperatorSpec
    lattice: Lattice
    entries: tuple
    valid_rows: tuple

    @property
    def size(self) -> int:
        return self.lattice.size

    def row_list(self):
        return [list(r) for r in self.entries]


def operator_matrix(op: OperatorSpec, lattice: Lattice | None = None) -> OperatorMatrix:
    if lattice is None:
        lattice = family_lattice(op.params)
    size = lattice.size
    index = lattice.index
    entries = []
    valid = []
    for i, x in enumerate(lattice.points):
        row = [ZERO] * size
        ok = True
        diag = ZERO
        for c, y in _moves(op, x):
            pos = index.get(y)
            if pos is None:
                ok = False
                break
            diag += c
            row[pos] -= c
        if ok:
            row[i] += diag
        else:
            row = [ZERO] * size
        entries.append(tuple(row))
        valid.append(ok)
    return OperatorMatrix(op, lattice, tuple(entries), tuple(valid))


def _product_valid_rows(M1: OperatorMatrix, M2: OperatorMatrix):
    """Rows where (M1 M2) equals the untruncated operator product.

    Row x of the product reads rows z of M2 wherever M1[x][z] != 0, so
    it is exact iff row x of M1 and all those rows of M2 are exact.
    """
    out = []
    for i, ok in enumerate(M1.valid_rows):
        if not ok:
            out.append(False)
            continue
        row = M1.entries[i]
        out.append(all(M2.valid_rows[j] for j, v in enumerate(row) if v != 0))
    return out


def commutator_defect(op1: OperatorSpec, op2: OperatorSpec,
                      lattice: Lattice | None = None):
    """Exact max |entry| of M1 M2 - M2 M1 over rows valid for both orders."""
    if op1.params != op2.params:
        raise ValueError("operators must share one parameter bundle")
    if lattice is None:
        lattice = family_lattice(op1.params)
    M1 = operator_matrix(op1, lattice)
    M2 = operator_matrix(op2, lattice)
    A = mat_mul(M1.row_list(), M2.row_list())
    B = mat_mul(M2.row_list(), M1.row_list())
    ok12 = _product_valid_rows(M1, M2)
    ok21 = _product_valid_rows(M2, M1)
    rows = [i for i in range(lattice.size) if ok12[i] and ok21[i]]
    diff = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]
    return max_abs(diff, rows=rows)


def adjointness_defect(op: OperatorSpec, w: WeightTable):
    """Exact self-adjointness defect of the operator under the weight.

    By linearity the defect over any spanning set of function pairs
    equals max_{x,y} |W(x) M[x][y] - W(y) M[y][x]| (delta functions span
    everything, and monomials of degree <= N span the same space).  On a
    truncated box the max runs over pairs of exact rows.
    """
    M = operator_matrix(op, w.lattice)
    out = ZERO
    size = w.lattice.size
    for i in range(size):
        if not M.valid_rows[i]:
            continue
        for j in range(size):
            if not M.valid_rows[j]:
                continue
            d = abs(w.values[i] * M.entries[i][j] - w.values[j] * M.entries[j][i])
            if d > out:
                out = d
    return out


def monomial_table(exponents, lattice: Lattice) -> LatticeFunction:
    """Value table of x^m over the lattice."""
    def mono(x):
        out = R(1)
        for c, e in zip(x, exponents):
            out *= R(c) ** e
        return out

    return LatticeFunction.from_callable(lattice, mono)


def degree_invariance_check(op: OperatorSpec, M: int,
                            lattice: Lattice | None = None) -> bool:
    """True when the operator maps degree <= M polynomials into the same.

    Each monomial image (as a value table) must be exactly interpolable,
    on the lattice, by monomials of total degree <= M; on a truncated
    box only rows with defined images participate.
    """
    if lattice is None:
        lattice = family_lattice(op.params)
    if not isinstance(op.params, MeixnerParams) and M > op.params.N:
        raise ValueError("need M <= N")
    exps = enumerate_degrees(lattice.n, M)
    basis = [monomial_table(e, lattice) for e in exps]
    images = [apply_operator(op, b) for b in basis]
    keep = [
        i
        for i in range(lattice.size)
        if all(img.values[i] is not None for img in images)
    ]
    A = [[b.values[i] for b in basis] for i in keep]
    for img in images:
        if not in_column_span(A, [img.values[i] for i in keep]):
            return False
    return True
