"""Revenue-optimal selling mechanisms for discrete instances, by exact LP.

The seller knows the joint type distribution and picks, for every joint
type, allocation probabilities q (per buyer and good) and a payment r per
buyer.  The LP maximizes expected revenue subject to supply limits,
ex-post individual rationality, and interim incentive compatibility, then
runs a second lexicographic stage that maximizes total buyer surplus among
the revenue-optimal mechanisms.  Everything is exact rational arithmetic,
so results like a surplus of 2/9 are literal fractions, not
approximations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .core import (
    BuyerType,
    DiscreteInstance,
    GuardExceeded,
    ValidationError,
    format_rational,
)
from .simplex import ExactSimplex

DEFAULT_VARIABLE_BUDGET = 50_000


@lru_cache(maxsize=256)
def joint_types(inst: DiscreteInstance) -> tuple[tuple[int, ...], ...]:
    """All joint type index vectors, lexicographic."""
    return tuple(itertools.product(*(range(inst.n_types(j)) for j in range(inst.n_buyers))))


def joint_prob(inst: DiscreteInstance, jt: Sequence[int]) -> Fraction:
    p = Fraction(1)
    for j, i in enumerate(jt):
        p *= inst.buyers[j][i].prob
    return p


@dataclass(frozen=True)
class Mechanism:
    """Allocations and payments over the joint type space.

    ``q[t][j][k]`` is the probability buyer j receives good k at joint type
    index t (indices follow ``joint_types(instance)``), ``r[t][j]`` the
    payment buyer j makes there.
    """

    instance: DiscreteInstance
    q: tuple[tuple[tuple[Fraction, ...], ...], ...]
    r: tuple[tuple[Fraction, ...], ...]

    def type_utility(self, t: int, j: int) -> Fraction:
        jt = joint_types(self.instance)[t]
        values = self.instance.buyers[j][jt[j]].values
        gained = sum((v * qq for v, qq in zip(values, self.q[t][j])), Fraction(0))
        return gained - self.r[t][j]

    def revenue(self) -> Fraction:
        inst = self.instance
        return sum(
            (joint_prob(inst, jt) * sum(self.r[t], Fraction(0))
             for t, jt in enumerate(joint_types(inst))),
            Fraction(0),
        )

    def buyer_surplus(self) -> Fraction:
        inst = self.instance
        return sum(
            (joint_prob(inst, jt)
             * sum((self.type_utility(t, j) for j in range(inst.n_buyers)), Fraction(0))
             for t, jt in enumerate(joint_types(inst))),
            Fraction(0),
        )

    def per_buyer_surplus(self) -> tuple[Fraction, ...]:
        inst = self.instance
        out = [Fraction(0)] * inst.n_buyers
        for t, jt in enumerate(joint_types(inst)):
            w = joint_prob(inst, jt)
            for j in range(inst.n_buyers):
                out[j] += w * self.type_utility(t, j)
        return tuple(out)

    def interim_utilities(self) -> tuple[tuple[Fraction, ...], ...]:
        """Expected utility of each buyer type, conditioned on being that type."""
        inst = self.instance
        out = []
        for j in range(inst.n_buyers):
            per_type = [Fraction(0)] * inst.n_types(j)
            for t, jt in enumerate(joint_types(inst)):
                w = joint_prob(inst, jt) / inst.buyers[j][jt[j]].prob
                per_type[jt[j]] += w * self.type_utility(t, j)
            out.append(tuple(per_type))
        return tuple(out)

    def unsold_probability(self, k: int) -> Fraction:
        """Prior probability that good k stays with the seller."""
        inst = self.instance
        return sum(
            (joint_prob(inst, jt)
             * (1 - sum((self.q[t][j][k] for j in range(inst.n_buyers)), Fraction(0)))
             for t, jt in enumerate(joint_types(inst))),
            Fraction(0),
        )


@dataclass(frozen=True)
class Certificate:
    """Basis data from the two solve stages, enough to re-derive optimality.

    ``fixed_zero`` lists the LP columns pinned to zero between the stages;
    they carry strictly negative reduced cost at the revenue optimum, which
    is exactly what makes stage 2 stay on the revenue-optimal face.
    """

    revenue_basis: tuple[int, ...]
    surplus_basis: tuple[int, ...]
    fixed_zero: tuple[int, ...]
    pivots: int


@dataclass(frozen=True)
class LPSolution:
    mechanism: Mechanism
    revenue: Fraction
    buyer_surplus: Fraction
    certificate: Certificate


class LpSystem:
    """The seller's LP for one instance: variables q and r, revenue objective.

    Variables are laid out as all q (joint type, then buyer, then good)
    followed by all r (joint type, then buyer).  Constraint counts are kept
    per kind so callers can sanity-check the build against hand counts.
    """

    def __init__(self, inst: DiscreteInstance, variable_budget: int = DEFAULT_VARIABLE_BUDGET):
        self.instance = inst
        self.joint_types = joint_types(inst)
        nt = len(self.joint_types)
        ell = inst.n_buyers
        m = inst.goods
        n_vars = nt * (ell * m + ell)
        if n_vars > variable_budget:
            raise GuardExceeded(
                f"instance needs {n_vars} LP variables, over the budget of {variable_budget}"
            )
        self._m = m
        self._ell = ell
        self.n_q_vars = nt * ell * m
        self.n_r_vars = nt * ell
        self.lp = ExactSimplex(n_vars)
        self._probs = tuple(joint_prob(inst, jt) for jt in self.joint_types)
        self._build_rows()
        self._build_objectives()

    def q_index(self, t: int, j: int, k: int) -> int:
        return (t * self._ell + j) * self._m + k

    def r_index(self, t: int, j: int) -> int:
        return self.n_q_vars + t * self._ell + j

    def _build_rows(self):
        inst = self.instance
        m, ell = self._m, self._ell
        # supply: each good goes to at most one buyer
        for t in range(len(self.joint_types)):
            for k in range(m):
                self.lp.add_le({self.q_index(t, j, k): 1 for j in range(ell)}, 1)
        # ex-post IR: no type ever pays more than the value it receives
        for t, jt in enumerate(self.joint_types):
            for j in range(ell):
                values = inst.buyers[j][jt[j]].values
                row = {self.q_index(t, j, k): values[k] for k in range(m) if values[k]}
                row[self.r_index(t, j)] = Fraction(-1)
                self.lp.add_ge(row, 0)
        # interim IC: truth beats any single-type misreport in expectation
        strides = [0] * ell
        acc = 1
        for j in range(ell - 1, -1, -1):
            strides[j] = acc
            acc *= inst.n_types(j)
        for j in range(ell):
            for i in range(inst.n_types(j)):
                values = inst.buyers[j][i].values
                slots = [t for t, jt in enumerate(self.joint_types) if jt[j] == i]
                for i2 in range(inst.n_types(j)):
                    if i2 == i:
                        continue
                    shift = (i2 - i) * strides[j]
                    row: dict[int, Fraction] = {}
                    for t in slots:
                        w = self._probs[t]
                        d = t + shift
                        for k in range(m):
                            if values[k]:
                                row[self.q_index(t, j, k)] = row.get(self.q_index(t, j, k), 0) + w * values[k]
                                row[self.q_index(d, j, k)] = row.get(self.q_index(d, j, k), 0) - w * values[k]
                        row[self.r_index(t, j)] = row.get(self.r_index(t, j), 0) - w
                        row[self.r_index(d, j)] = row.get(self.r_index(d, j), 0) + w
                    self.lp.add_ge({c: v for c, v in row.items() if v}, 0)
        nt = len(self.joint_types)
        self.counts = {
            "supply": nt * m,
            "ir": nt * ell,
            "ic": sum(inst.n_types(j) * (inst.n_types(j) - 1) for j in range(ell)),
        }

    def _build_objectives(self):
        inst = self.instance
        revenue: dict[int, Fraction] = {}
        surplus: dict[int, Fraction] = {}
        for t, jt in enumerate(self.joint_types):
            w = self._probs[t]
            for j in range(self._ell):
                values = inst.buyers[j][jt[j]].values
                revenue[self.r_index(t, j)] = w
                surplus[self.r_index(t, j)] = -w
                for k in range(self._m):
                    if values[k]:
                        surplus[self.q_index(t, j, k)] = w * values[k]
        self.revenue_objective = revenue
        self.surplus_objective = surplus

    def extract_mechanism(self, values: Sequence[Fraction]) -> Mechanism:
        q = tuple(
            tuple(
                tuple(values[self.q_index(t, j, k)] for k in range(self._m))
                for j in range(self._ell)
            )
            for t in range(len(self.joint_types))
        )
        r = tuple(
            tuple(values[self.r_index(t, j)] for j in range(self._ell))
            for t in range(len(self.joint_types))
        )
        return Mechanism(self.instance, q, r)


def build_lp(inst: DiscreteInstance, variable_budget: int = DEFAULT_VARIABLE_BUDGET) -> LpSystem:
    return LpSystem(inst, variable_budget)


def uniform_grid_instance(n: int, buyers: int = 2) -> DiscreteInstance:
    """I.i.d. buyers, one good, values at the n midpoints of a uniform [0, 1] grid.

    Discretizes a U[0, 1] buyer into n equally likely values (2i+1)/(2n);
    used to cross-check the LP against the closed-form auction outcome.
    """
    if n < 1:
        raise ValidationError("grid needs at least one point")
    prior = tuple(
        BuyerType(Fraction(1, n), (Fraction(2 * i + 1, 2 * n),)) for i in range(n)
    )
    return DiscreteInstance(1, (prior,) * buyers)


def solve_lexicographic(system: LpSystem) -> LPSolution:
    stage1, stage2 = system.lp.solve_lexicographic(
        [system.revenue_objective, system.surplus_objective]
    )
    mech = system.extract_mechanism(stage2.values)
    revenue = mech.revenue()
    if revenue != stage1.objective:
        raise AssertionError(
            "stage 2 drifted off the revenue optimum: "
            f"{format_rational(revenue)} != {format_rational(stage1.objective)}"
        )
    fixed = tuple(sorted(system.lp.fixed_columns))
    return LPSolution(
        mechanism=mech,
        revenue=revenue,
        buyer_surplus=stage2.objective,
        certificate=Certificate(stage1.basis, stage2.basis, fixed, stage2.pivots),
    )


def solve_instance(inst: DiscreteInstance, variable_budget: int = DEFAULT_VARIABLE_BUDGET) -> LPSolution:
    return solve_lexicographic(build_lp(inst, variable_budget))


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    failure: Optional[str]
    revenue: Optional[Fraction]
    buyer_surplus: Optional[Fraction]


def verify_mechanism(inst: DiscreteInstance, mech: Mechanism) -> VerificationReport:
    """Re-check a mechanism against every constraint by direct evaluation.

    Independent of the solver on purpose: it loops over supply, IR, and all
    IC pairs and reports the first violation it finds, or the exact revenue
    and buyer surplus if there is none.
    """
    jts = joint_types(inst)
    if mech.instance is not inst and joint_types(mech.instance) != jts:
        raise ValidationError("mechanism dimensions do not match the instance")
    if len(mech.q) != len(jts) or len(mech.r) != len(jts):
        raise ValidationError("mechanism dimensions do not match the instance")
    for t, jt in enumerate(jts):
        if len(mech.q[t]) != inst.n_buyers or len(mech.r[t]) != inst.n_buyers:
            raise ValidationError("mechanism dimensions do not match the instance")
        for j in range(inst.n_buyers):
            if len(mech.q[t][j]) != inst.goods:
                raise ValidationError("mechanism dimensions do not match the instance")

    def fail(msg: str) -> VerificationReport:
        return VerificationReport(False, msg, None, None)

    for t, jt in enumerate(jts):
        for j in range(inst.n_buyers):
            if mech.r[t][j] < 0:
                return fail(f"negative payment at joint type {jt}, buyer {j + 1}")
            for k in range(inst.goods):
                if mech.q[t][j][k] < 0:
                    return fail(
                        f"negative allocation at joint type {jt}, buyer {j + 1}, good {k + 1}"
                    )
        for k in range(inst.goods):
            total = sum((mech.q[t][j][k] for j in range(inst.n_buyers)), Fraction(0))
            if total > 1:
                return fail(f"good {k + 1} oversold at joint type {jt}")
        for j in range(inst.n_buyers):
            if mech.type_utility(t, j) < 0:
                return fail(f"IR violated at joint type {jt} for buyer {j + 1}")
    slot = {jt: t for t, jt in enumerate(jts)}
    for j in range(inst.n_buyers):
        nj = inst.n_types(j)
        truthful = [Fraction(0)] * nj
        gains: dict[tuple[int, int], Fraction] = {}
        for t, jt in enumerate(jts):
            w = joint_prob(inst, jt)
            i = jt[j]
            truthful[i] += w * mech.type_utility(t, j)
            values = inst.buyers[j][i].values
            for i2 in range(nj):
                if i2 == i:
                    continue
                d = list(jt)
                d[j] = i2
                td = slot[tuple(d)]
                deviant = (
                    sum((v * qq for v, qq in zip(values, mech.q[td][j])), Fraction(0))
                    - mech.r[td][j]
                )
                gains[(i, i2)] = gains.get((i, i2), Fraction(0)) + w * deviant
        for (i, i2), dev in gains.items():
            if dev > truthful[i]:
                return fail(
                    f"IC violated for buyer {j + 1}: type {i + 1} gains by reporting {i2 + 1}"
                )
    return VerificationReport(True, None, mech.revenue(), mech.buyer_surplus())


def posted_menu_view(sol: LPSolution) -> str:
    """Human-readable summary of a solved mechanism.

    Single buyer: the menu the seller could post, one row per distinct
    (allocation, price) pair actually used, skipping the stay-out row.
    Several buyers: one table line per joint type.
    """
    mech = sol.mechanism
    inst = mech.instance
    jts = joint_types(inst)
    if inst.n_buyers == 1:
        rows: dict[tuple, tuple] = {}
        for t in range(len(jts)):
            key = (mech.q[t][0], mech.r[t][0])
            rows.setdefault(key, key)
        lines = []
        for qrow, price in sorted(rows.values(), key=lambda kr: (kr[1], kr[0])):
            if price == 0 and all(x == 0 for x in qrow):
                continue
            parts = []
            for k, prob in enumerate(qrow):
                if prob == 1:
                    parts.append(f"good {k + 1}")
                elif prob != 0:
                    parts.append(f"good {k + 1} w.p. {format_rational(prob)}")
            bundle = " + ".join(parts) if parts else "nothing"
            lines.append(f"{bundle}: price {format_rational(price)}")
        if not lines:
            return "empty menu\n"
        return "\n".join(lines) + "\n"
    header = "joint type | " + " | ".join(
        f"buyer {j + 1} (q; r)" for j in range(inst.n_buyers)
    )
    lines = [header]
    for t, jt in enumerate(jts):
        cells = []
        for j in range(inst.n_buyers):
            qs = ",".join(format_rational(x) for x in mech.q[t][j])
            cells.append(f"{qs}; {format_rational(mech.r[t][j])}")
        label = "(" + ",".join(str(i + 1) for i in jt) + ")"
        lines.append(f"{label} | " + " | ".join(cells))
    return "\n".join(lines) + "\n"


def mechanism_to_csv(mech: Mechanism) -> str:
    """CSV export: one row per (joint type, buyer, good) with exact rationals."""
    inst = mech.instance
    lines = ["joint_type,buyer,good,q,r"]
    for t, jt in enumerate(joint_types(inst)):
        label = "-".join(str(i + 1) for i in jt)
        for j in range(inst.n_buyers):
            for k in range(inst.goods):
                lines.append(
                    f"{label},{j + 1},{k + 1},"
                    f"{format_rational(mech.q[t][j][k])},{format_rational(mech.r[t][j])}"
                )
    return "\n".join(lines) + "\n"
