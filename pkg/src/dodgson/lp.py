"""Exact rational linear programming: two-phase simplex and branch-and-bound.

Arithmetic is exact end to end.  Internally the simplex tableau is kept as
arbitrary-precision integers over a single running denominator (fraction-free
pivoting): after pivoting on t_rs, every other row is updated as
(t_ij * t_rs - t_is * t_rj) / d_prev, a division that is exact by Bareiss'
identity.  Pivot selection is Bland's rule (lowest-index entering column,
lowest basis index on ratio ties), which cannot cycle and makes every solve
deterministic.  Solver instances share no state; callers may run any number
of solves concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELS = ("<=", ">=", "=")

Number = int | Fraction


@dataclass(frozen=True)
class LpModel:
    """Minimization LP/ILP: objective, rows (coeffs, relation, rhs), bounds."""

    objective: tuple[Fraction, ...]
    constraints: tuple[tuple[tuple[Fraction, ...], str, Fraction], ...]
    lower_bounds: tuple[Fraction, ...]
    integer: tuple[bool, ...]

    @classmethod
    def build(
        cls,
        objective,
        constraints,
        lower_bounds=None,
        integer=None,
    ) -> "LpModel":
        obj = tuple(Fraction(c) for c in objective)
        nvars = len(obj)
        if nvars < 1:
            raise ValueError("a model needs at least one variable")
        rows = []
        for coeffs, rel, rhs in constraints:
            coeffs = tuple(Fraction(c) for c in coeffs)
            if len(coeffs) != nvars:
                raise ValueError("constraint row length does not match variable count")
            if rel not in _RELS:
                raise ValueError(f"unknown relation {rel!r}")
            rows.append((coeffs, rel, Fraction(rhs)))
        lbs = (
            tuple(Fraction(0) for _ in range(nvars))
            if lower_bounds is None
            else tuple(Fraction(b) for b in lower_bounds)
        )
        flags = (
            tuple(False for _ in range(nvars))
            if integer is None
            else tuple(bool(f) for f in integer)
        )
        if len(lbs) != nvars or len(flags) != nvars:
            raise ValueError("bounds/integrality length does not match variable count")
        return cls(obj, tuple(rows), lbs, flags)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def with_extra(self, extra_rows) -> "LpModel":
        rows = list(self.constraints)
        for coeffs, rel, rhs in extra_rows:
            rows.append((tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs)))
        return LpModel(self.objective, tuple(rows), self.lower_bounds, self.integer)


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: Fraction | None = None
    assignment: tuple[Fraction, ...] | None = None


def dump_model(model: LpModel) -> str:
    """Plain-text dump for bug reports; not a stability contract."""
    out = ["min " + " + ".join(f"{c}*x{j}" for j, c in enumerate(model.objective) if c)]
    out.append("st")
    for coeffs, rel, rhs in model.constraints:
        lhs = " + ".join(f"{c}*x{j}" for j, c in enumerate(coeffs) if c) or "0"
        out.append(f"  {lhs} {rel} {rhs}")
    out.append("bounds")
    for j, b in enumerate(model.lower_bounds):
        out.append(f"  x{j} >= {b}")
    ints = [f"x{j}" for j, f in enumerate(model.integer) if f]
    if ints:
        out.append("int " + " ".join(ints))
    return "\n".join(out) + "\n"


def _feasible(model: LpModel, x: tuple[Fraction, ...]) -> bool:
    for j, lb in enumerate(model.lower_bounds):
        if x[j] < lb:
            return False
    for coeffs, rel, rhs in model.constraints:
        lhs = sum((c * x[j] for j, c in enumerate(coeffs) if c), Fraction(0))
        if rel == "<=" and lhs > rhs:
            return False
        if rel == ">=" and lhs < rhs:
            return False
        if rel == "=" and lhs != rhs:
            return False
    return True


def _objective_value(model: LpModel, x: tuple[Fraction, ...]) -> Fraction:
    return sum((c * x[j] for j, c in enumerate(model.objective) if c), Fraction(0))


class _Tableau:
    """Integer simplex tableau over a shared running denominator."""

    def __init__(self, model: LpModel):
        self.model = model
        n = model.num_vars
        self.n_structural = n
        lbs = model.lower_bounds

        # Shift x = y + lb so every variable has lower bound 0, then clear
        # denominators row by row.
        int_rows: list[list[int]] = []
        rels: list[str] = []
        for coeffs, rel, rhs in model.constraints:
            shifted_rhs = rhs - sum(
                (c * lbs[j] for j, c in enumerate(coeffs) if c), Fraction(0)
            )
            scale = math.lcm(
                shifted_rhs.denominator, *(c.denominator for c in coeffs)
            )
            row = [int(c * scale) for c in coeffs] + [int(shifted_rhs * scale)]
            if row[-1] < 0:
                row = [-v for v in row]
                rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
            int_rows.append(row)
            rels.append(rel)

        m = len(int_rows)
        n_slack = sum(1 for r in rels if r != "=")
        self.n_slack = n_slack
        art_rows = [i for i, r in enumerate(rels) if r != "<="]
        n_art = len(art_rows)
        self.n_art = n_art
        width = n + n_slack + n_art + 1

        rows: list[list[int]] = []
        basis: list[int] = []
        slack_at = n
        art_at = n + n_slack
        for i, (row, rel) in enumerate(zip(int_rows, rels)):
            full = row[:-1] + [0] * (n_slack + n_art) + [row[-1]]
            if rel == "<=":
                full[slack_at] = 1
                basis.append(slack_at)
                slack_at += 1
            elif rel == ">=":
                full[slack_at] = -1
                slack_at += 1
                full[art_at] = 1
                basis.append(art_at)
                art_at += 1
            else:
                full[art_at] = 1
                basis.append(art_at)
                art_at += 1
            rows.append(full)

        self.rows = rows
        self.basis = basis
        self.den = 1
        self.width = width

        # Phase-2 objective row: reduced costs start at c (all initial basic
        # variables cost zero), cleared to integers.
        obj_scale = math.lcm(*(c.denominator for c in model.objective), 1)
        self.obj2 = [int(c * obj_scale) for c in model.objective] + [0] * (
            n_slack + n_art + 1
        )
        # Phase-1 objective: sum of artificials, priced out over the basis.
        obj1 = [0] * width
        for j in range(n + n_slack, n + n_slack + n_art):
            obj1[j] = 1
        for i, b in enumerate(self.basis):
            if b >= n + n_slack:
                row = self.rows[i]
                for j in range(width):
                    obj1[j] -= row[j]
        self.obj1: list[int] | None = obj1

    def _pivot(self, r: int, s: int) -> None:
        rows = self.rows
        den = self.den
        prow = rows[r]
        piv = prow[s]
        assert piv > 0
        targets = [row for i, row in enumerate(rows) if i != r]
        targets.append(self.obj2)
        if self.obj1 is not None:
            targets.append(self.obj1)
        for row in targets:
            f = row[s]
            if f:
                row[:] = [
                    (v * piv - f * p) // den for v, p in zip(row, prow)
                ]
            elif piv != den:
                row[:] = [v * piv // den for v in row]
        self.den = piv
        self.basis[r] = s

    def _entering(self, obj: list[int], allowed_width: int) -> int | None:
        for j in range(allowed_width):
            if obj[j] < 0:
                return j
        return None

    def _leaving(self, s: int) -> int | None:
        best_r = None
        best_num = best_den_ = 0
        for i, row in enumerate(self.rows):
            a = row[s]
            if a <= 0:
                continue
            b = row[-1]
            if best_r is None:
                best_r, best_num, best_den_ = i, b, a
                continue
            # compare b/a against best_num/best_den_ (all non-negative)
            cmp = b * best_den_ - best_num * a
            if cmp < 0 or (cmp == 0 and self.basis[i] < self.basis[best_r]):
                best_r, best_num, best_den_ = i, b, a
        return best_r

    def _run_simplex(self, obj: list[int], allowed_width: int) -> str:
        while True:
            s = self._entering(obj, allowed_width)
            if s is None:
                return OPTIMAL
            r = self._leaving(s)
            if r is None:
                return UNBOUNDED
            self._pivot(r, s)

    def solve(self) -> LpSolution:
        n, n_slack, n_art = self.n_structural, self.n_slack, self.n_art
        if n_art:
            status = self._run_simplex(self.obj1, n + n_slack + n_art)
            assert status == OPTIMAL, "phase-1 objective is bounded below by zero"
            # Optimal phase-1 value: sum of artificial basic values.
            art_level = sum(
                self.rows[i][-1]
                for i, b in enumerate(self.basis)
                if b >= n + n_slack
            )
            if art_level != 0:
                return LpSolution(INFEASIBLE)
            self.obj1 = None
            self._drive_out_artificials()
        self.obj1 = None
        status = self._run_simplex(self.obj2, n + n_slack)
        if status == UNBOUNDED:
            return LpSolution(UNBOUNDED)
        x = self._extract()
        return LpSolution(OPTIMAL, _objective_value(self.model, x), x)

    def _drive_out_artificials(self) -> None:
        n_real = self.n_structural + self.n_slack
        drop: list[int] = []
        for i in range(len(self.rows)):
            if self.basis[i] < n_real:
                continue
            row = self.rows[i]
            s = next((j for j in range(n_real) if row[j] != 0), None)
            if s is None:
                drop.append(i)  # redundant constraint
                continue
            if row[s] < 0:
                # rhs is zero here (artificial basic at level zero), so the
                # row may be negated to expose a positive pivot.
                row[:] = [-v for v in row]
            self._pivot(i, s)
        for i in reversed(drop):
            del self.rows[i]
            del self.basis[i]
        for row in self.rows:
            del row[n_real:-1]
        del self.obj2[n_real:-1]
        self.width = n_real + 1

    def _extract(self) -> tuple[Fraction, ...]:
        lbs = self.model.lower_bounds
        x = [Fraction(lb) for lb in lbs]
        den = self.den
        for i, b in enumerate(self.basis):
            if b < self.n_structural:
                x[b] = lbs[b] + Fraction(self.rows[i][-1], den)
        return tuple(x)


def solve_lp(model: LpModel, check: bool = True) -> LpSolution:
    """Exact optimal basic solution of the relaxation (integrality ignored)."""
    sol = _Tableau(model).solve()
    if check and sol.status == OPTIMAL:
        assert _feasible(model, sol.assignment), "solver produced infeasible point"
        assert _objective_value(model, sol.assignment) == sol.value
    return sol


def _is_integral(v: Fraction) -> bool:
    return v.denominator == 1


def _integral_objective(model: LpModel) -> bool:
    """True when every feasible integral assignment has an integer objective."""
    return all(
        (flag and c.denominator == 1) or c == 0
        for c, flag in zip(model.objective, model.integer)
    )


def solve_ilp(model: LpModel, check: bool = True) -> LpSolution:
    """Exact optimum over integral assignments of the flagged variables.

    Depth-first branch and bound: branch on the flagged variable with the
    most fractional relaxation value (ties to the lowest index), floor branch
    first, pruning against the best incumbent.  The initial incumbent is the
    rounded-up root relaxation point whenever that point is feasible.
    """
    if not any(model.integer):
        raise ValueError("solve_ilp requires at least one integral variable")

    root = solve_lp(model, check=check)
    if root.status != OPTIMAL:
        return root
    int_obj = _integral_objective(model)

    best_val: Fraction | None = None
    best_x: tuple[Fraction, ...] | None = None

    def note(val: Fraction, x: tuple[Fraction, ...]) -> None:
        nonlocal best_val, best_x
        if best_val is None or val < best_val:
            best_val, best_x = val, x

    # Round-up probe on the root relaxation.
    probe = tuple(
        Fraction(math.ceil(v)) if flag else v
        for v, flag in zip(root.assignment, model.integer)
    )
    if all(_is_integral(v) for v, f in zip(probe, model.integer) if f) and _feasible(
        model, probe
    ):
        note(_objective_value(model, probe), probe)

    stack: list[tuple[tuple, LpSolution | None]] = [((), root)]
    while stack:
        extra, sol = stack.pop()
        if sol is None:
            sol = solve_lp(model.with_extra(extra), check=check)
        if sol.status != OPTIMAL:
            continue
        bound = Fraction(math.ceil(sol.value)) if int_obj else sol.value
        if best_val is not None and bound >= best_val:
            continue
        fractional = [
            (j, v)
            for j, (v, flag) in enumerate(zip(sol.assignment, model.integer))
            if flag and not _is_integral(v)
        ]
        if not fractional:
            note(sol.value, sol.assignment)
            continue
        j, v = max(
            fractional,
            key=lambda jv: (min(jv[1] - math.floor(jv[1]), math.ceil(jv[1]) - jv[1]), -jv[0]),
        )
        unit = tuple(Fraction(int(k == j)) for k in range(model.num_vars))
        floor_v = Fraction(math.floor(v))
        stack.append((extra + ((unit, ">=", floor_v + 1),), None))
        stack.append((extra + ((unit, "<=", floor_v),), None))

    if best_val is None:
        return LpSolution(INFEASIBLE)
    return LpSolution(OPTIMAL, best_val, best_x)
