"""Exact linear programming over rationals by the simplex method.

Maximizes linear objectives over {x >= 0 : Ax (<=|>=|==) b} with no
floating point anywhere, so optima come out as the exact fractions the
rest of the package compares against.  Rows are stored sparsely (a dict
per constraint) but the algorithm is the plain tableau method: Dantzig
pricing while it makes progress, switching to Bland's rule whenever
degenerate pivots pile up, which guarantees termination.

Lexicographic solves reuse one tableau: after each stage the nonbasic
columns with strictly negative reduced cost are frozen at zero, which
pins the stage objective to its optimum exactly (the reduced-cost
identity holds over the whole feasible set), and the next objective is
re-priced on the same basis.

If gmpy2 is installed its rationals are used internally for speed;
results are always plain fractions.Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .core import GuardExceeded, ValidationError

try:  # pragma: no cover - exercised implicitly by the chosen backend
    from gmpy2 import mpq as _NUM
except ImportError:  # pragma: no cover
    _NUM = Fraction

_BLAND_TRIGGER = 40


class LpInfeasible(RuntimeError):
    pass


class LpUnbounded(RuntimeError):
    pass


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass(frozen=True)
class SimplexResult:
    objective: Fraction
    values: tuple[Fraction, ...]
    basis: tuple[int, ...]
    pivots: int


class ExactSimplex:
    """A maximization LP over n nonnegative structural variables."""

    def __init__(self, n_vars: int, pivot_cap: int = 2_000_000):
        if n_vars < 1:
            raise ValidationError("need at least one variable")
        self.n_vars = n_vars
        self.pivot_cap = pivot_cap
        self._constraints: list[tuple[dict, str, object]] = []

    def _coeffs(self, coeffs) -> dict:
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = ((j, v) for j, v in enumerate(coeffs))
        out = {}
        for j, v in items:
            if not 0 <= j < self.n_vars:
                raise ValidationError(f"variable index {j} out of range")
            v = _NUM(v)
            if v != 0:
                out[j] = v
        return out

    def add_le(self, coeffs, rhs):
        self._constraints.append((self._coeffs(coeffs), "<=", _NUM(rhs)))

    def add_ge(self, coeffs, rhs):
        self._constraints.append((self._coeffs(coeffs), ">=", _NUM(rhs)))

    def add_eq(self, coeffs, rhs):
        self._constraints.append((self._coeffs(coeffs), "==", _NUM(rhs)))

    @property
    def n_constraints(self) -> int:
        return len(self._constraints)

    @property
    def fixed_columns(self) -> frozenset[int]:
        """Columns pinned to zero (artificials plus earlier-stage requirements)."""
        return frozenset(getattr(self, "_forbidden", frozenset()))

    # -- tableau construction ------------------------------------------------

    def _build(self):
        """Assemble rows with slack/artificial columns and run phase 1 if needed."""
        rows: list[dict] = []
        rhs: list = []
        basis: list[int] = []
        next_col = self.n_vars
        artificials: list[int] = []
        zero = _NUM(0)
        for coeffs, sense, b in self._constraints:
            row = dict(coeffs)
            if sense == ">=":
                row = {j: -v for j, v in row.items()}
                b = -b
                sense = "<="
            if sense == "<=" and b >= 0:
                row[next_col] = _NUM(1)  # slack, basic
                basis.append(next_col)
                next_col += 1
            else:
                if b < 0:
                    row = {j: -v for j, v in row.items()}
                    b = -b
                    if sense == "<=":  # now a >= row: add surplus
                        row[next_col] = _NUM(-1)
                        next_col += 1
                row[next_col] = _NUM(1)  # artificial, basic
                basis.append(next_col)
                artificials.append(next_col)
                next_col += 1
            rows.append(row)
            rhs.append(b)
        self._rows = rows
        self._rhs = rhs
        self._basis = basis
        self._ncols = next_col
        self._pivots = 0
        self._forbidden: set[int] = set()
        if artificials:
            goal = {j: _NUM(-1) for j in artificials}
            gamma, value = self._price(goal)
            value, _ = self._optimize(gamma, value)
            if value != 0:
                raise LpInfeasible("constraints admit no nonnegative solution")
            self._evict_artificials(set(artificials))
            self._forbidden |= set(artificials)

    def _evict_artificials(self, artificials: set[int]):
        # a basic artificial at value zero either pivots out on any usable
        # column or marks a redundant row we can drop
        for r in range(len(self._rows) - 1, -1, -1):
            if self._basis[r] not in artificials:
                continue
            col = None
            for j, v in self._rows[r].items():
                if j not in artificials and j != self._basis[r] and v != 0:
                    col = j
                    break
            if col is None:
                del self._rows[r]
                del self._rhs[r]
                del self._basis[r]
            else:
                self._pivot(r, col, None)

    # -- pricing and pivoting ------------------------------------------------

    def _price(self, objective: dict):
        """Express an objective over the current basis: z = value + sum(gamma x)."""
        gamma = dict(objective)
        value = _NUM(0)
        for r, col in enumerate(self._basis):
            f = gamma.pop(col, None)
            if f is None or f == 0:
                continue
            value += f * self._rhs[r]
            row = self._rows[r]
            for j, a in row.items():
                if j == col:
                    continue
                nv = gamma.get(j, 0) - f * a
                if nv:
                    gamma[j] = nv
                else:
                    gamma.pop(j, None)
        return gamma, value

    def _choose_col(self, gamma: dict, bland: bool) -> Optional[int]:
        forbidden = self._forbidden
        best = None
        if bland:
            for j, g in gamma.items():
                if g > 0 and j not in forbidden and (best is None or j < best):
                    best = j
            return best
        best_g = None
        for j, g in gamma.items():
            if g > 0 and j not in forbidden:
                if best_g is None or g > best_g or (g == best_g and j < best):
                    best_g = g
                    best = j
        return best

    def _choose_row(self, col: int) -> Optional[int]:
        best = None
        best_ratio = None
        for r, row in enumerate(self._rows):
            a = row.get(col)
            if a is None or a <= 0:
                continue
            ratio = self._rhs[r] / a
            if (
                best_ratio is None
                or ratio < best_ratio
                or (ratio == best_ratio and self._basis[r] < self._basis[best])
            ):
                best_ratio = ratio
                best = r
        return best

    def _pivot(self, r: int, col: int, gamma: Optional[dict]):
        rows = self._rows
        rhs = self._rhs
        rowr = rows[r]
        piv = rowr[col]
        if piv != 1:
            inv = 1 / piv
            rowr = {j: v * inv for j, v in rowr.items()}
            rows[r] = rowr
            rhs[r] = rhs[r] * inv
        items = tuple(rowr.items())
        rr = rhs[r]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row.get(col)
            if f is None or f == 0:
                continue
            for j, v in items:
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            rhs[i] -= f * rr
        self._basis[r] = col
        self._pivots += 1
        if gamma is None:
            return None
        f = gamma.pop(col, None)
        if f is None or f == 0:
            return _NUM(0)
        for j, v in items:
            if j == col:
                continue
            nv = gamma.get(j, 0) - f * v
            if nv:
                gamma[j] = nv
            else:
                gamma.pop(j, None)
        return f * rr

    def _optimize(self, gamma: dict, value):
        degenerate_run = 0
        bland = False
        while True:
            col = self._choose_col(gamma, bland)
            if col is None:
                return value, gamma
            r = self._choose_row(col)
            if r is None:
                raise LpUnbounded(f"objective unbounded along variable {col}")
            degenerate = self._rhs[r] == 0
            gain = self._pivot(r, col, gamma)
            value += gain
            if degenerate:
                degenerate_run += 1
                if degenerate_run >= _BLAND_TRIGGER:
                    bland = True
            else:
                degenerate_run = 0
                bland = False
            if self._pivots > self.pivot_cap:
                raise GuardExceeded(f"simplex exceeded {self.pivot_cap} pivots")

    def _extract(self) -> tuple[Fraction, ...]:
        values = [Fraction(0)] * self.n_vars
        for r, col in enumerate(self._basis):
            if col < self.n_vars:
                values[col] = _to_fraction(self._rhs[r])
        return tuple(values)

    # -- public solves ---------------------------------------------------------

    def solve_lexicographic(self, objectives: Sequence) -> list[SimplexResult]:
        """Maximize each objective in turn, freezing earlier optima exactly.

        Returns one result per stage; the last stage's ``values`` attain
        every stage's optimum simultaneously.
        """
        if not objectives:
            raise ValidationError("need at least one objective")
        self._build()
        results = []
        for stage, objective in enumerate(objectives):
            goal = self._coeffs(objective)
            gamma, value = self._price(goal)
            value, gamma = self._optimize(gamma, value)
            results.append(
                SimplexResult(
                    objective=_to_fraction(value),
                    values=self._extract(),
                    basis=tuple(self._basis),
                    pivots=self._pivots,
                )
            )
            if stage < len(objectives) - 1:
                self._forbidden |= {j for j, g in gamma.items() if g < 0}
        return results

    def solve(self, objective) -> SimplexResult:
        return self.solve_lexicographic([objective])[0]
