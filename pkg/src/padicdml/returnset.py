"""Certified return sets {n >= 0 : f^n(x) in V} for polynomial self-maps.

The classifier follows the classical p-adic route.  The orbit is reduced
modulo a well-chosen prime power; it becomes eventually periodic there, and
along each residue class of the period the map recenters to a contracting
self-map of a polydisc.  Interpolating that contraction to p-adic time turns
the return condition of each class into a one-variable analytic equation,
whose unit-disc zero count is certified by Strassmann's bound; integer zeros
are confirmed only against the exact brute-force oracle.  The outcome is a
finite union of arithmetic progressions (identically-returning classes) plus
finitely many sporadic returns, with an explicit certificate.

Three honesty levels are reported.  CERTIFIED: every residue class resolved
by exact Strassmann accounting (or the orbit is exactly eventually periodic,
which is checked combinatorially).  CERTIFIED-NUMERIC: some class was
indistinguishable from the zero series at the maximal working precision and
was emitted as a progression backed by exact evidence along the visible
horizon.  PARTIAL: at least one class could not be resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    DegenerateRecurrence,
    DimensionMismatch,
    FieldMismatch,
    NoGoodPrime,
    NonIntegralAtP,
    PrecisionExhausted,
)
from .interpolate import (
    AffinoidSelfMap,
    delta_norm,
    interpolate_action,
    recenter_map,
    working_precision,
)
from .multipoly import MultiPoly, Point, PolyMap, eval_map, reduce_mod_p
from .padic import (
    PadicNumber,
    PadicSeries,
    RConstant,
    find_integer_zeros,
    strassmann_bound,
)
from .scalars import QQ, Rationals, RationalFunctions

DEFAULT_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 2)


@dataclass(frozen=True)
class ClassifierConfig:
    prime_candidates: tuple = DEFAULT_PRIMES
    precision: int = 64
    precision_max: int = 512
    level_cap: int = 6
    n_max: int = 10_000
    evidence_horizon: int = 200
    coefficient_bit_budget: int = 2_000_000
    cycle_step_budget: int = 200_000
    class_count_cap: int = 512
    term_budget: int = 200_000
    matrix_order_budget: int = 100_000


@dataclass(frozen=True)
class OrbitProblem:
    """A self-map f, a start point x, and target hypersurfaces g = 0."""

    f: PolyMap
    x: Point
    targets: tuple

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.f.dim != self.x.dim:
            raise DimensionMismatch("map and point dimensions differ")
        self.f.field.require_same(self.x.field)
        if not self.targets:
            raise ValueError("at least one target polynomial is required")
        for g in self.targets:
            if g.nvars != self.f.dim:
                raise DimensionMismatch("target lives in the wrong dimension")
            self.f.field.require_same(g.field)

    @property
    def field(self):
        return self.f.field


@dataclass(frozen=True)
class Recurrence:
    """A_{n+l} = sum_{i<l} coeffs[i] * A_{n+i} with given initial values."""

    coeffs: tuple
    initial: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", tuple(Fraction(c) for c in self.coeffs)
        )
        object.__setattr__(
            self, "initial", tuple(Fraction(c) for c in self.initial)
        )
        if len(self.coeffs) != len(self.initial) or not self.coeffs:
            raise ValueError("need order >= 1 and matching initial values")

    @property
    def order(self):
        return len(self.coeffs)

    def terms(self, count):
        values = list(self.initial)
        while len(values) < count:
            values.append(
                sum(c * values[-self.order + i] for i, c in enumerate(self.coeffs))
            )
        return values[:count]


@dataclass(frozen=True)
class ResidueCycle:
    p: int
    e: int
    preperiod: int
    period: int
    cycle: tuple


@dataclass(frozen=True)
class ReturnSet:
    """Certified decomposition of a return set."""

    progressions: tuple = ()
    sporadic: tuple = ()
    unresolved: tuple = ()
    status: str = "CERTIFIED"
    certificate: dict = field(default_factory=dict)

    def contains(self, n):
        if n in self.sporadic:
            return True
        for a, b in self.progressions:
            if n >= b and (n - b) % a == 0:
                return True
        return False

    def members_up_to(self, n_max):
        out = set(s for s in self.sporadic if s <= n_max)
        for a, b in self.progressions:
            out.update(range(b, n_max + 1, a))
        return sorted(out)

    def is_finite(self):
        return not self.progressions


# ---------------------------------------------------------------------------
# exact orbit scanning (the oracle)
# ---------------------------------------------------------------------------

def _size_of_scalar(value, fld):
    if isinstance(fld, Rationals):
        return value.numerator.bit_length() + value.denominator.bit_length()
    if isinstance(fld, RationalFunctions):
        return max(len(value.num), len(value.den))
    return 1


@dataclass
class OrbitScan:
    points: list
    returns: list          # per target: sorted list of hit indices
    exact_cycle: tuple | None   # (preperiod, period) for an exact point repeat


def scan_orbit(prob: OrbitProblem, n_max, bit_budget=None) -> OrbitScan:
    """Exact orbit prefix with per-target return indices and exact-cycle data."""
    fld = prob.field
    seen = {}
    points = []
    returns = [[] for _ in prob.targets]
    exact_cycle = None
    current = prob.x
    for n in range(n_max + 1):
        if exact_cycle is None and n <= 4096:
            key = current.coords
            if key in seen:
                first = seen[key]
                exact_cycle = (first, n - first)
            else:
                seen[key] = n
        points.append(current)
        for t_index, g in enumerate(prob.targets):
            if fld.is_zero(g.evaluate(current.coords)):
                returns[t_index].append(n)
        if n == n_max:
            break
        current = eval_map(prob.f, current)
        if bit_budget is not None:
            size = max(_size_of_scalar(c, fld) for c in current.coords)
            if size > bit_budget:
                raise BudgetExceeded(
                    f"orbit coefficient size {size} exceeds budget at step {n + 1}"
                )
    return OrbitScan(points, returns, exact_cycle)


def brute_force_returns(prob: OrbitProblem, n_max, bit_budget=None):
    """Exactly {n <= n_max : g(f^n(x)) = 0 for every target g}."""
    scan = scan_orbit(prob, n_max, bit_budget)
    hits = set(scan.returns[0])
    for other in scan.returns[1:]:
        hits &= set(other)
    return sorted(hits)


# ---------------------------------------------------------------------------
# prime selection and residue cycles
# ---------------------------------------------------------------------------

def _fraction_pintegral(value, p):
    return Fraction(value).denominator % p != 0


def _problem_pintegral(prob: OrbitProblem, p):
    for g in (*prob.f.coords, *prob.targets):
        if not all(_fraction_pintegral(c, p) for c in g.terms.values()):
            return False
    return all(_fraction_pintegral(c, p) for c in prob.x.coords)


def select_prime(prob: OrbitProblem, candidates=None) -> int:
    """Smallest candidate keeping f, x, and targets p-integral (2 tried last
    by default, since p = 2 needs iterate boosting)."""
    if not isinstance(prob.field, Rationals):
        raise FieldMismatch("prime selection applies to rational problems only")
    if candidates is None:
        candidates = DEFAULT_PRIMES
    for p in candidates:
        if _problem_pintegral(prob, p):
            return p
    raise NoGoodPrime(f"no candidate in {tuple(candidates)} is integral for the instance")


def integral_primes(prob: OrbitProblem, candidates=None):
    if candidates is None:
        candidates = DEFAULT_PRIMES
    return [p for p in candidates if _problem_pintegral(prob, p)]


def residue_cycle(f: PolyMap, x: Point, p, e, step_budget=200_000) -> ResidueCycle:
    """Minimal preperiod and period of the orbit reduced mod p^e."""
    f_red = reduce_mod_p(f, p, e)
    current = reduce_mod_p(x, p, e)
    seen = {}
    trail = []
    for step in range(step_budget + 1):
        key = current.coords
        if key in seen:
            s = seen[key]
            return ResidueCycle(p, e, s, step - s, tuple(trail[s:]))
        seen[key] = step
        trail.append(key)
        current = eval_map(f_red, current)
    raise BudgetExceeded(
        f"no residue cycle mod {p}^{e} within {step_budget} steps"
    )


# ---------------------------------------------------------------------------
# mod-p derivative bookkeeping (linearizing the cycle)
# ---------------------------------------------------------------------------

def _jacobian_mod_p(f: PolyMap, p):
    f1 = reduce_mod_p(f, p, 1)
    return [
        [f1.coords[i].partial_derivative(j) for j in range(f.dim)]
        for i in range(f.dim)
    ]


def _matrix_at(jac, point_residues, p):
    return [
        [entry.evaluate(point_residues) % p for entry in row] for row in jac
    ]


def _mat_mul(a, b, p):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n)]
        for i in range(n)
    ]


def _mat_is_identity(a):
    n = len(a)
    return all(a[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def _mat_is_invertible(a, p):
    n = len(a)
    m = [row[:] for row in a]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] % p), None)
        if pivot is None:
            return False
        m[col], m[pivot] = m[pivot], m[col]
        inv = pow(m[col][col], -1, p)
        for r in range(col + 1, n):
            factor = (m[r][col] * inv) % p
            if factor:
                m[r] = [(x - factor * y) % p for x, y in zip(m[r], m[col])]
    return True


def _matrix_order(a, p, budget):
    """Multiplicative order of an invertible matrix over F_p."""
    power = a
    for j in range(1, budget + 1):
        if _mat_is_identity(power):
            return j
        power = _mat_mul(power, a, p)
    raise BudgetExceeded(f"matrix order exceeds budget {budget}")


def _cycle_derivative(f, orbit_points, p, start, length):
    """Product of mod-p Jacobians of f along orbit positions start..start+length-1."""
    jac = _jacobian_mod_p(f, p)
    n = f.dim
    acc = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for idx in range(start, start + length):
        residues = tuple(
            ReduceCache.scalar(c, p) for c in orbit_points[idx].coords
        )
        acc = _mat_mul(_matrix_at(jac, residues, p), acc, p)
    return acc


class ReduceCache:
    @staticmethod
    def scalar(value, p):
        q = Fraction(value)
        return (q.numerator * pow(q.denominator, -1, p)) % p


# ---------------------------------------------------------------------------
# progression bookkeeping
# ---------------------------------------------------------------------------

def _progression_contains(prog, n):
    a, b = prog
    return n >= b and (n - b) % a == 0


def _subsumed(p1, p2):
    a1, b1 = p1
    a2, b2 = p2
    return p1 != p2 and a1 % a2 == 0 and b1 >= b2 and (b1 - b2) % a2 == 0


def minimize_return_data(progressions, sporadic):
    """Canonical form: extend progressions backward over adjacent sporadics,
    drop subsumed progressions and absorbed sporadics."""
    progs = sorted(set(progressions))
    spor = sorted(set(sporadic))
    changed = True
    while changed:
        changed = False
        for i, (a, b) in enumerate(progs):
            if b - a in spor:
                spor.remove(b - a)
                progs[i] = (a, b - a)
                changed = True
        progs = sorted(set(progs))
    progs = [p for p in progs if not any(_subsumed(p, q) for q in progs)]
    spor = [s for s in spor if not any(_progression_contains(p, s) for p in progs)]
    return tuple(sorted(set(progs))), tuple(sorted(spor))


# ---------------------------------------------------------------------------
# the per-class analytic step
# ---------------------------------------------------------------------------

def _series_of_target(g: MultiPoly, anchor: Point, scale_exp, interp, p, prec):
    """g(anchor + p^e * G(T)) as a PadicSeries in class time T."""
    coord_series = []
    for j in range(len(anchor.coords)):
        const = PadicSeries(
            p,
            [PadicNumber.from_rational(p, anchor.coords[j], prec)],
            math.inf,
        )
        scaled = interp.series[j].scale(
            PadicNumber.from_rational(p, Fraction(p) ** scale_exp, prec)
        )
        coord_series.append(const + scaled)
    one = PadicSeries(p, [PadicNumber.from_rational(p, 1, prec)], math.inf)
    acc = None
    for exps, coeff in sorted(g.terms.items()):
        term = one.scale(PadicNumber.from_rational(p, coeff, prec))
        for j, e in enumerate(exps):
            for _ in range(e):
                term = term * coord_series[j]
        acc = term if acc is None else acc + term
    return acc


@dataclass
class _ClassOutcome:
    residue: int
    record: dict
    sporadic: list
    progression: tuple | None
    resolved: bool
    numeric: bool


def _process_class(prob, target_index, p, e, s, m, r, scan, config, k_work):
    """Classify one residue class r of the period m (single target)."""
    g = prob.targets[target_index]
    anchor = scan.points[s + r]
    record = {"class": r, "anchor_index": s + r}
    hits_set = set(scan.returns[target_index])
    class_n_max = (config.n_max - (s + r)) // m

    def oracle(t):
        return (s + r + m * t) in hits_set

    H = recenter_map(prob.f, anchor, p, e, m, k_work)
    d = delta_norm(H)
    record["delta_exponent"] = d.exponent
    record["delta_exact"] = d.exact
    if d.exponent < 1:
        record["failure"] = "no contraction at this level"
        return _ClassOutcome(r, record, [], None, False, False)
    if not RConstant(p).certifies_contraction(d.exponent):
        record["failure"] = "contraction above R threshold (boost required)"
        return _ClassOutcome(r, record, [], None, False, False)

    interp = interpolate_action(H, (0,) * prob.f.dim, term_budget=config.term_budget)
    series = _series_of_target(g, anchor, e, interp, p, k_work + e + 8)
    record["series_tau"] = series.tau() if series.tau() != math.inf else "inf"
    result = strassmann_bound(series)
    if result.degenerate:
        record["strassmann"] = "degenerate"
        all_returning = all(oracle(t) for t in range(class_n_max + 1))
        record["evidence_checked"] = class_n_max + 1
        if all_returning and class_n_max >= 0:
            record["emitted"] = "progression"
            return _ClassOutcome(
                r, record, [], (m, s + r), True, True
            )
        record["failure"] = "degenerate series without full exact evidence"
        return _ClassOutcome(r, record, [], None, False, False)

    record["strassmann"] = result.bound
    record["strassmann_valuation"] = result.max_valuation
    zeros = find_integer_zeros(series, class_n_max, oracle, result.bound)
    record["zeros"] = zeros["zeros"]
    record["resolved"] = zeros["resolved"]
    record["separations"] = zeros["separations"]
    sporadic = [s + r + m * t for t in zeros["zeros"]]
    if not zeros["resolved"]:
        record["failure"] = "unconsumed Strassmann budget"
        return _ClassOutcome(r, record, sporadic, None, False, False)
    return _ClassOutcome(r, record, sporadic, None, True, False)


# ---------------------------------------------------------------------------
# per-prime classification
# ---------------------------------------------------------------------------

def _classify_single_target(prob, target_index, p, scan, config, tau):
    """Run the full pipeline for one target at one prime and precision."""
    f, x = prob.f, prob.x
    diagnostics = {"p": p, "tau": tau}
    last_failure = None
    for e in range(0, config.level_cap + 1):
        level = e + 1
        cyc = residue_cycle(f, x, p, level, config.cycle_step_budget)
        s, m1 = cyc.preperiod, cyc.period
        if s + m1 > config.n_max:
            last_failure = f"cycle (s={s}, m={m1}) exceeds the oracle horizon"
            break
        derivative = _cycle_derivative(f, scan.points, p, s, m1)
        if not _mat_is_invertible(derivative, p):
            last_failure = "cycle derivative is singular mod p"
            break  # independent of the level: this prime cannot linearize
        j = _matrix_order(derivative, p, config.matrix_order_budget)
        m = m1 * j
        # iterate boosting by global period doubling (p = 2 only in practice):
        # recompute classes with m <- m*p until every class certifies below R
        boost = 1
        while True:
            if m * boost > config.class_count_cap:
                last_failure = f"class count {m * boost} exceeds cap"
                break
            if s + m * boost > config.n_max:
                last_failure = "boosted period exceeds the oracle horizon"
                break
            m_total = m * boost
            i_max, k_work = working_precision(p, 1 if p >= 3 else 2, tau)
            outcomes = []
            failure = None
            for r in range(m_total):
                outcome = _process_class(
                    prob, target_index, p, e, s, m_total, r, scan, config, k_work
                )
                outcomes.append(outcome)
                if "failure" in outcome.record:
                    failure = outcome.record["failure"]
                    if failure == "no contraction at this level":
                        break
                    if failure == "contraction above R threshold (boost required)":
                        break
            if failure == "no contraction at this level":
                last_failure = failure
                break  # raise the level e
            if failure == "contraction above R threshold (boost required)":
                boost *= p
                continue
            # assemble the outcome for this (e, m_total)
            progressions = []
            sporadic = [n for n in scan.returns[target_index] if n < s]
            unresolved = []
            numeric = False
            records = []
            for outcome in outcomes:
                records.append(outcome.record)
                sporadic.extend(outcome.sporadic)
                if outcome.progression:
                    progressions.append(outcome.progression)
                numeric = numeric or outcome.numeric
                if not outcome.resolved:
                    unresolved.append(
                        {
                            "class": outcome.residue,
                            "period": m_total,
                            "offset": s + outcome.residue,
                            "reason": outcome.record.get("failure", "unresolved"),
                        }
                    )
            progs, spor = minimize_return_data(progressions, sporadic)
            # an unresolved class here is a Strassmann accounting failure
            # (e.g. a unit-disc zero away from the integers); zooming the
            # polydisc does not remove it, so the level ladder stops and the
            # prime ladder takes over
            status = (
                "PARTIAL"
                if unresolved
                else ("CERTIFIED-NUMERIC" if numeric else "CERTIFIED")
            )
            certificate = {
                "method": "p-adic interpolation",
                "prime": p,
                "level": level,
                "scale": e,
                "preperiod": s,
                "cycle_period": m1,
                "derivative_order": j,
                "boost": boost,
                "period": m_total,
                "precision_target": tau,
                "working_precision": k_work,
                "mahler_terms_budget": i_max,
                "classes": records,
            }
            return ReturnSet(
                progressions=progs,
                sporadic=spor,
                unresolved=tuple(unresolved),
                status=status,
                certificate=certificate,
            )
        if last_failure == "cycle derivative is singular mod p":
            break
        if last_failure and "horizon" in last_failure:
            break
        if last_failure and "cap" in last_failure:
            break
    diagnostics["failure"] = last_failure or "level ladder exhausted"
    return ReturnSet(
        status="PARTIAL",
        unresolved=({"reason": diagnostics["failure"], "prime": p},),
        certificate={"method": "p-adic interpolation", **diagnostics},
    )


def _exact_cycle_return_set(prob, target_index, scan, config):
    """Complete certification when the orbit repeats exactly."""
    s0, m0 = scan.exact_cycle
    hits = scan.returns[target_index]
    sporadic = [n for n in hits if n < s0]
    progressions = []
    for r in range(m0):
        if (s0 + r) in hits:
            progressions.append((m0, s0 + r))
    progs, spor = minimize_return_data(progressions, sporadic)
    return ReturnSet(
        progressions=progs,
        sporadic=spor,
        status="CERTIFIED",
        certificate={
            "method": "exact orbit periodicity",
            "preperiod": s0,
            "period": m0,
            "horizon": config.n_max,
        },
    )


_STATUS_RANK = {"CERTIFIED": 0, "CERTIFIED-NUMERIC": 1, "PARTIAL": 2}


def classify_returns(prob: OrbitProblem, config: ClassifierConfig = None) -> ReturnSet:
    """Certified return-set decomposition for a rational-field orbit problem."""
    if config is None:
        config = ClassifierConfig()
    if not isinstance(prob.field, Rationals):
        raise FieldMismatch(
            "the analytic classifier works over Q; function fields are "
            "brute-force only"
        )
    scan = scan_orbit(prob, config.n_max, config.coefficient_bit_budget)
    if len(prob.targets) > 1:
        parts = [
            _classify_target(replace_targets(prob, (g,)), 0, scan_for_target(scan, i), config)
            for i, g in enumerate(prob.targets)
        ]
        out = parts[0]
        for part in parts[1:]:
            out = intersect_return_sets(out, part)
        return out
    return _classify_target(prob, 0, scan, config)


def replace_targets(prob, targets):
    return OrbitProblem(prob.f, prob.x, targets)


def scan_for_target(scan, index):
    return OrbitScan(scan.points, [scan.returns[index]], scan.exact_cycle)


def _classify_target(prob, target_index, scan, config):
    if scan.exact_cycle is not None:
        return _exact_cycle_return_set(prob, target_index, scan, config)
    primes = integral_primes(prob, config.prime_candidates)
    if not primes:
        raise NoGoodPrime(
            f"no candidate in {tuple(config.prime_candidates)} is integral"
        )
    best = None
    attempts = []
    for p in primes:
        tau = config.precision
        while True:
            try:
                result = _classify_single_target(
                    prob, target_index, p, scan, config, tau
                )
                break
            except PrecisionExhausted as err:
                if tau * 2 > config.precision_max:
                    result = ReturnSet(
                        status="PARTIAL",
                        unresolved=(
                            {"reason": f"precision ladder exhausted: {err}", "prime": p},
                        ),
                        certificate={"method": "p-adic interpolation", "prime": p},
                    )
                    break
                tau *= 2
            except (BudgetExceeded, NonIntegralAtP) as err:
                result = ReturnSet(
                    status="PARTIAL",
                    unresolved=({"reason": str(err), "prime": p},),
                    certificate={"method": "p-adic interpolation", "prime": p},
                )
                break
        attempts.append({"prime": p, "status": result.status})
        if best is None or _STATUS_RANK[result.status] < _STATUS_RANK[best.status]:
            best = result
        if result.status != "PARTIAL":
            break
    certificate = dict(best.certificate)
    certificate["prime_attempts"] = attempts
    best = replace(best, certificate=certificate)
    _check_against_oracle(best, scan, target_index, config)
    return best


def _check_against_oracle(result: ReturnSet, scan, target_index, config):
    """Any resolved claim must reproduce the exact horizon data."""
    if result.status == "PARTIAL":
        return
    claimed = result.members_up_to(config.n_max)
    actual = list(scan.returns[target_index])
    if claimed != actual:
        raise PrecisionExhausted(
            "certified decomposition disagrees with the exact oracle; "
            f"claimed {claimed[:8]}..., oracle {actual[:8]}..."
        )


# ---------------------------------------------------------------------------
# intersections (multiple targets)
# ---------------------------------------------------------------------------

def _intersect_progressions(p1, p2):
    a1, b1 = p1
    a2, b2 = p2
    g = math.gcd(a1, a2)
    if (b1 - b2) % g != 0:
        return None
    lcm = a1 // g * a2
    # CRT: find n = b1 mod a1, n = b2 mod a2
    m1, m2 = a1 // g, a2 // g
    diff = (b2 - b1) // g
    t = (diff * pow(m1, -1, m2)) % m2
    n0 = b1 + a1 * t
    start = max(b1, b2)
    if n0 < start:
        n0 += ((start - n0 + lcm - 1) // lcm) * lcm
    return (lcm, n0)


def intersect_return_sets(a: ReturnSet, b: ReturnSet) -> ReturnSet:
    progressions = []
    for p1 in a.progressions:
        for p2 in b.progressions:
            meet = _intersect_progressions(p1, p2)
            if meet:
                progressions.append(meet)
    sporadic = [s for s in a.sporadic if b.contains(s)]
    sporadic += [
        s
        for s in b.sporadic
        if any(_progression_contains(p, s) for p in a.progressions)
    ]
    progs, spor = minimize_return_data(progressions, sporadic)
    status = max(a.status, b.status, key=lambda s: _STATUS_RANK[s])
    return ReturnSet(
        progressions=progs,
        sporadic=spor,
        unresolved=tuple(list(a.unresolved) + list(b.unresolved)),
        status=status,
        certificate={
            "method": "intersection",
            "parts": [a.certificate, b.certificate],
        },
    )


# ---------------------------------------------------------------------------
# linear recurrences (Skolem-Mahler-Lech)
# ---------------------------------------------------------------------------

def companion_problem(rec: Recurrence) -> OrbitProblem:
    """The companion self-map (x_1,..,x_l) -> (x_2,..,x_l, sum a_i x_i) with
    V = {x_1 = 0}; the orbit's first coordinate walks the sequence."""
    l = rec.order
    coords = []
    for i in range(1, l):
        coords.append(MultiPoly.variable(l, QQ, i))
    last = MultiPoly.zero(l, QQ)
    for i, a in enumerate(rec.coeffs):
        if a:
            last = last + MultiPoly.variable(l, QQ, i).scale(Fraction(a))
    coords.append(last)
    f = PolyMap(tuple(coords))
    x = Point(QQ, rec.initial)
    g = MultiPoly.variable(l, QQ, 0)
    return OrbitProblem(f, x, (g,))


def _strip_degenerate(rec: Recurrence):
    """Remove leading zero coefficients: each strip shifts the zero set by one
    and may contribute the index of a vanishing initial value."""
    shift = 0
    sporadic = []
    coeffs, initial = list(rec.coeffs), list(rec.initial)
    while len(coeffs) > 1 and coeffs[0] == 0:
        if initial[0] == 0:
            sporadic.append(shift)
        coeffs = coeffs[1:]
        initial = initial[1:]
        shift += 1
    if len(coeffs) == 1 and coeffs[0] == 0:
        # A_{n+1} = 0: everything past the surviving initial value vanishes
        if initial[0] == 0:
            sporadic.append(shift)
        return None, shift + 1, sporadic
    return Recurrence(tuple(coeffs), tuple(initial)), shift, sporadic


def sml_solve(rec: Recurrence, config: ClassifierConfig = None) -> ReturnSet:
    """Zero set {n : A_n = 0} of a linear recurrence, as a certified ReturnSet."""
    if config is None:
        config = ClassifierConfig()
    stripped, shift, extra_sporadic = _strip_degenerate(rec)
    if stripped is None:
        progs, spor = minimize_return_data(
            [(1, shift)], extra_sporadic
        )
        return ReturnSet(
            progressions=progs,
            sporadic=spor,
            status="CERTIFIED",
            certificate={"method": "degenerate recurrence", "shift": shift},
        )
    if stripped.coeffs[0] == 0:
        raise DegenerateRecurrence("trailing coefficient still vanishes")
    prob = companion_problem(stripped)
    # the companion orbit is invertible mod p only when a_0 is a p-unit
    a0 = stripped.coeffs[0]
    candidates = tuple(
        p
        for p in config.prime_candidates
        if a0.numerator % p != 0 and a0.denominator % p != 0
    )
    inner = classify_returns(prob, replace(config, prime_candidates=candidates))
    progressions = [(a, b + shift) for a, b in inner.progressions]
    sporadic = [n + shift for n in inner.sporadic] + extra_sporadic
    progs, spor = minimize_return_data(progressions, sporadic)
    certificate = dict(inner.certificate)
    if shift:
        certificate["index_shift"] = shift
    return ReturnSet(
        progressions=progs,
        sporadic=spor,
        unresolved=inner.unresolved,
        status=inner.status,
        certificate=certificate,
    )
