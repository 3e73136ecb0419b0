"""Parameter grids for the batch checks, and a deterministic worker pool.

Every job is a pure function of its parameters; results come back in grid
order whatever the number of workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

from .classification import max_dimension, theorem_b_operator
from .exact import format_rational
from .operators import build_c_ii, build_c_ii1, vanishing
from .verify import FALSIFIED, VERIFIED, check_factorization, check_sbo, proportionality, solve_sbo_space

SAMPLE_LAMBDAS = (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(2))


@dataclass(frozen=True)
class Job:
    kind: str
    params: Tuple


@dataclass
class Outcome:
    kind: str
    params: Tuple
    verdict: str
    detail: Dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == VERIFIED

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": [format_rational(p) if isinstance(p, Fraction) else p for p in self.params],
            "verdict": self.verdict,
            "detail": self.detail,
        }


# -- grids ------------------------------------------------------------------------------


def theorem_b_grid(ns: Sequence[int] = (3, 4, 5), max_ell: int = 4, max_neg_lambda: int = 3) -> List[Job]:
    """Cases 1 and 2 at sample weights plus the endpoints of the renormalization
    table; Cases 3, 3', 4, 4' at their isolated parameters."""
    jobs = []
    for n in ns:
        for i in range(n + 1):
            for j in (i, i - 1):
                if not (0 <= j <= n - 1):
                    continue
                for ell in range(max_ell + 1):
                    # lam = nu, nu = i, nu = n - i, nu = 0 are where the plain formulas degenerate
                    special = {Fraction(i), Fraction(n - i), Fraction(i - ell), Fraction(n - i - ell), Fraction(-ell)}
                    for lam in sorted(set(SAMPLE_LAMBDAS) | special):
                        jobs.append(Job("theorem_b", (n, i, j, lam, lam + ell)))
        for i in range(1, n - 1):
            jobs.append(Job("theorem_b", (n, i, i + 1, Fraction(i), Fraction(i + 1))))
        for i in range(2, n):
            jobs.append(Job("theorem_b", (n, i, i - 2, Fraction(n - i), Fraction(n - i + 1))))
        for m in range(max_neg_lambda + 1):
            jobs.append(Job("theorem_b", (n, 0, 1, Fraction(-m), Fraction(1))))
            jobs.append(Job("theorem_b", (n, n, n - 2, Fraction(-m), Fraction(1))))
    return jobs


def oracle_grid(n: int = 3, lo: int = -2, hi: int = 4, max_ell: int = 3) -> List[Job]:
    return [
        Job("oracle", (n, i, j, Fraction(lam), Fraction(nu)))
        for i in range(n + 1)
        for j in range(n)
        for lam in range(lo, hi + 1)
        for nu in range(lam, min(lam + max_ell, hi) + 1)
    ]


def factorization_grid(n: int = 4, ells: Iterable[int] = (1, 2), As: Iterable[int] = (0, 1, 2)) -> List[Job]:
    jobs = []
    for theorem in ("4.1", "4.2", "5.1", "5.2"):
        irange = range(0, n) if theorem.startswith("4") else range(1, n + 1)
        for ell in ells:
            for a in As:
                for i in irange:
                    jobs.append(Job("factorization", (theorem, n, i, a, ell)))
    return jobs


def vanishing_grid(ns: Sequence[int] = (3, 4), lo: int = -2, hi: int = 4, max_ell: int = 3) -> List[Job]:
    jobs = []
    for n in ns:
        for family, irange in (("ii", range(0, n)), ("ii1", range(1, n + 1))):
            for i in irange:
                for lam in range(lo, hi + 1):
                    for nu in range(lam, min(lam + max_ell, hi) + 1):
                        jobs.append(Job("vanishing", (family, n, i, Fraction(lam), Fraction(nu))))
    return jobs


GRIDS: Dict[str, Callable[[], List[Job]]] = {
    "theorem-b": theorem_b_grid,
    "oracle": oracle_grid,
    "factorization": factorization_grid,
    "vanishing": vanishing_grid,
}


# -- jobs -------------------------------------------------------------------------------


def _theorem_b(n, i, j, lam, nu) -> Outcome:
    D = theorem_b_operator(n, i, j, lam, nu)
    if D.is_zero():
        return Outcome("theorem_b", (n, i, j, lam, nu), FALSIFIED, {"reason": "zero operator"})
    rep = check_sbo(D, max_degree=int(nu - lam) + 1)
    detail = {"operator": D.name, "order": D.order()}
    if not rep.ok:
        detail["witness"] = rep.witness
    return Outcome("theorem_b", (n, i, j, lam, nu), rep.verdict, detail)


def _oracle(n, i, j, lam, nu) -> Outcome:
    res = solve_sbo_space(n, i, j, lam, nu)
    expected = max_dimension(n, i, j, lam, nu)
    detail = {"oracle": res.dimension, "classification": expected}
    ok = res.dimension == expected
    if ok and expected == 1:
        c = proportionality(res.basis[0].op, theorem_b_operator(n, i, j, lam, nu).op)
        detail["proportional"] = c is not None
        ok = c is not None
    return Outcome("oracle", (n, i, j, lam, nu), VERIFIED if ok else FALSIFIED, detail)


def _factorization(theorem, n, i, a, ell) -> Outcome:
    rep = check_factorization(theorem, n, i, a, ell)
    detail = {"constant": rep.stats["constant"]}
    if rep.witness:
        detail["observed_constant"] = rep.witness["observed_constant"]
    return Outcome("factorization", (theorem, n, i, a, ell), rep.verdict, detail)


def _vanishing(family, n, i, lam, nu) -> Outcome:
    D = (build_c_ii if family == "ii" else build_c_ii1)(n, i, lam, nu)
    j = i if family == "ii" else i - 1
    predicted = vanishing(n, i, j, lam, nu)
    ok = D.is_zero() == predicted
    detail = {"zero": D.is_zero(), "predicted": predicted}
    return Outcome("vanishing", (family, n, i, lam, nu), VERIFIED if ok else FALSIFIED, detail)


RUNNERS = {
    "theorem_b": _theorem_b,
    "oracle": _oracle,
    "factorization": _factorization,
    "vanishing": _vanishing,
}


def run_job(job: Job) -> Outcome:
    return RUNNERS[job.kind](*job.params)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SBO_WORKERS", "1")))
    except ValueError:
        return 1


def run_jobs(jobs: Sequence[Job], workers: int | None = None) -> List[Outcome]:
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(jobs) < 2:
        return [run_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def summarize(outcomes: Sequence[Outcome]) -> Dict[str, Dict[str, int]]:
    table: Dict[str, Dict[str, int]] = {}
    for o in outcomes:
        row = table.setdefault(o.kind, {VERIFIED: 0, FALSIFIED: 0, "inapplicable": 0})
        row[o.verdict] = row.get(o.verdict, 0) + 1
    return table
