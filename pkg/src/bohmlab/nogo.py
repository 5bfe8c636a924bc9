"""Machine checks of the classic no-hidden-variables arguments.

Three independent verdicts, each obtained by direct computation rather
than algebra on paper:

* a linearity counterexample: eigenvalues of a sum of non-commuting
  observables are not sums of their eigenvalues;
* the two-qubit magic square: nine +-1-valued observables whose row and
  column product identities admit no context-independent value
  assignment (checked by exhaustive search over all 512 assignments);
* the CHSH correlation bound: deterministic local strategies reach at
  most S = 2 (checked by enumerating all 16 of them), while the quantum
  operator reaches 2*sqrt(2).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .hilbert import (
    commutator_norm,
    frobenius_norm,
    hermitian_eigenvalues,
    identity,
    pauli,
    tensor,
)

IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class ObservableSquare:
    """3x3 arrangement of dim-4 Hermitian operators with +-1 spectra."""

    cells: tuple            # 3x3 nested tuple of 4x4 ndarrays
    labels: tuple           # 3x3 nested tuple of short strings

    def cell(self, row: int, col: int) -> np.ndarray:
        return self.cells[row][col]


@dataclass(frozen=True)
class ContextConstraint:
    """Product of the +-1 values at `member_indices` must equal the sign."""

    member_indices: tuple   # ((row, col), ...) cell coordinates
    required_product_sign: int
    label: str = ""

    def __post_init__(self):
        if self.required_product_sign not in (+1, -1):
            raise ValueError("required_product_sign must be +1 or -1")
        if len(set(self.member_indices)) != len(self.member_indices):
            raise ValueError("member_indices must be distinct")
        for r, c in self.member_indices:
            if not (0 <= r < 3 and 0 <= c < 3):
                raise ValueError(f"cell index {(r, c)} outside the square")


@dataclass(frozen=True)
class IdentityCheck:
    constraint: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class AssignmentSearchReport:
    total_assignments: int
    satisfying_assignments: int
    witness: dict | None
    elapsed: float


@dataclass(frozen=True)
class VonNeumannReport:
    sum_eigenvalues: tuple
    individual_sums: tuple
    min_gap: float


@dataclass(frozen=True)
class ChshLocalReport:
    max_S: float
    optimal_strategy_count: int
    strategy_values: tuple = field(repr=False, default=())


def build_mermin_square() -> ObservableSquare:
    """Two-qubit magic square: single-qubit x/y observables and their products.

    Rows multiply to +I; the first two columns multiply to +I and the
    right column to -I, which is the parity obstruction exploited by the
    assignment search.
    """
    sx, sy, sz, i2 = pauli("x"), pauli("y"), pauli("z"), identity(2)
    cells = (
        (tensor(sx, i2), tensor(i2, sx), tensor(sx, sx)),
        (tensor(i2, sy), tensor(sy, i2), tensor(sy, sy)),
        (tensor(sx, sy), tensor(sy, sx), tensor(sz, sz)),
    )
    labels = (
        ("x.", ".x", "xx"),
        (".y", "y.", "yy"),
        ("xy", "yx", "zz"),
    )
    return ObservableSquare(cells=cells, labels=labels)


def mermin_constraints() -> list[ContextConstraint]:
    """The six row/column sign-product constraints of the magic square."""
    rows = [
        ContextConstraint(tuple((r, c) for c in range(3)), +1, f"row{r + 1}")
        for r in range(3)
    ]
    cols = [
        ContextConstraint(tuple((r, c) for r in range(3)), +1 if c < 2 else -1, f"col{c + 1}")
        for c in range(3)
    ]
    return rows + cols


def verify_square_identities(square: ObservableSquare) -> list[IdentityCheck]:
    """Commutation within rows/columns and the six product identities.

    Failures are reported, never raised: the point is the verdict list.
    """
    checks: list[IdentityCheck] = []
    i4 = identity(4)

    for r in range(3):
        for c1, c2 in itertools.combinations(range(3), 2):
            res = commutator_norm(square.cell(r, c1), square.cell(r, c2))
            checks.append(IdentityCheck(f"commute row{r + 1}: {square.labels[r][c1]},{square.labels[r][c2]}",
                                        res < IDENTITY_TOL, res))
    for c in range(3):
        for r1, r2 in itertools.combinations(range(3), 2):
            res = commutator_norm(square.cell(r1, c), square.cell(r2, c))
            checks.append(IdentityCheck(f"commute col{c + 1}: {square.labels[r1][c]},{square.labels[r2][c]}",
                                        res < IDENTITY_TOL, res))

    for r in range(3):
        prod = square.cell(r, 0) @ square.cell(r, 1) @ square.cell(r, 2)
        res = frobenius_norm(prod - i4)
        checks.append(IdentityCheck(f"product row{r + 1} = +I", res < IDENTITY_TOL, res))
    for c in range(3):
        target = i4 if c < 2 else -i4
        prod = square.cell(0, c) @ square.cell(1, c) @ square.cell(2, c)
        res = frobenius_norm(prod - target)
        sign = "+I" if c < 2 else "-I"
        checks.append(IdentityCheck(f"product col{c + 1} = {sign}", res < IDENTITY_TOL, res))
    return checks


def search_noncontextual_assignment(square: ObservableSquare,
                                    constraints: list[ContextConstraint]) -> AssignmentSearchReport:
    """Exhaustively test all 2^9 +-1 assignments against the constraints."""
    for r in range(3):
        for c in range(3):
            eigs = hermitian_eigenvalues(square.cell(r, c))
            if np.max(np.abs(np.abs(eigs) - 1.0)) > 1e-10:
                raise ValueError(f"cell {(r, c)} does not have a +-1 spectrum")

    start = time.perf_counter()
    count = 0
    witness = None
    for bits in itertools.product((+1, -1), repeat=9):
        values = {(r, c): bits[3 * r + c] for r in range(3) for c in range(3)}
        ok = True
        for con in constraints:
            prod = 1
            for idx in con.member_indices:
                prod *= values[idx]
            if prod != con.required_product_sign:
                ok = False
                break
        if ok:
            count += 1
            if witness is None:
                witness = values
    elapsed = time.perf_counter() - start
    return AssignmentSearchReport(total_assignments=512, satisfying_assignments=count,
                                  witness=witness, elapsed=elapsed)


def von_neumann_counterexample() -> VonNeumannReport:
    """Eigenvalues of sigma_x + sigma_z versus all sums of their eigenvalues.

    A value map linear over non-commuting observables would need the
    spectrum of the sum to consist of sums of individual eigenvalues;
    the minimum gap between the two sets is 2 - sqrt(2), far from zero.
    """
    sum_eigs = hermitian_eigenvalues(pauli("x") + pauli("z"))
    eig_x = hermitian_eigenvalues(pauli("x"))
    eig_z = hermitian_eigenvalues(pauli("z"))
    sums = sorted(set(float(a) + float(b) for a in eig_x for b in eig_z))
    min_gap = min(abs(float(e) - s) for e in sum_eigs for s in sums)
    return VonNeumannReport(sum_eigenvalues=tuple(float(e) for e in sum_eigs),
                            individual_sums=tuple(sums),
                            min_gap=float(min_gap))


def chsh_local_bound() -> ChshLocalReport:
    """Maximum of S = E(a,b) + E(a,b') + E(a',b) - E(a',b') over the 16
    deterministic local strategies (two +-1 outputs per side)."""
    values = []
    for a, a2, b, b2 in itertools.product((+1, -1), repeat=4):
        values.append(a * b + a * b2 + a2 * b - a2 * b2)
    max_s = max(values)
    return ChshLocalReport(max_S=float(max_s),
                           optimal_strategy_count=sum(1 for s in values if s == max_s),
                           strategy_values=tuple(values))


def chsh_quantum_value(swap_b: bool = False, b_prime_equals_b: bool = False) -> float:
    """Largest eigenvalue of the CHSH operator at the standard settings
    A = sigma_z, A' = sigma_x, B = (sigma_z + sigma_x)/sqrt(2),
    B' = (sigma_z - sigma_x)/sqrt(2).

    `swap_b` exchanges B and B' (the spectrum is symmetric, so the value
    is unchanged); `b_prime_equals_b` degrades the operator to 2 A(x)B,
    whose largest eigenvalue is 2.
    """
    a, a2 = pauli("z"), pauli("x")
    b = (pauli("z") + pauli("x")) / np.sqrt(2)
    b2 = b if b_prime_equals_b else (pauli("z") - pauli("x")) / np.sqrt(2)
    if swap_b:
        b, b2 = b2, b
    op = tensor(a, b) + tensor(a, b2) + tensor(a2, b) - tensor(a2, b2)
    return float(hermitian_eigenvalues(op)[-1])
