"""Existence and emptiness of moduli of coherent systems of type (n, d, n+1).

The known results are stored as citable rules. :func:`decide` evaluates the
direct rules on a grid of degrees, closes the grid under the propagation rules
(tensoring by an effective line bundle, interval filling, elementary
transformations, inclusions between the spaces) and reports a verdict with the
chain of rules that produced it.
"""

from __future__ import annotations

import enum
import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .exact_arith import DomainError
from .invariants import (
    CSType,
    CurveContext,
    alpha_l,
    beta,
    beta_np1,
    min_degree_generated,
    u_existence_threshold,
    us_existence_degree,
)


class Target(enum.Enum):
    GL = "GL"
    U = "U"
    US = "US"
    B = "B"

    @classmethod
    def parse(cls, text: str) -> "Target":
        try:
            return cls[text.upper()]
        except KeyError:
            raise DomainError(f"unknown target {text!r}") from None


class Status(enum.Enum):
    NONEMPTY = "NONEMPTY"
    EMPTY = "EMPTY"
    OPEN = "OPEN"


NONEMPTY, EMPTY, OPEN = Status.NONEMPTY, Status.EMPTY, Status.OPEN


class ConsistencyError(RuntimeError):
    """Two rules derived NONEMPTY and EMPTY for the same space."""

    def __init__(self, message, first, second):
        super().__init__(message)
        self.first = first
        self.second = second


@dataclass(frozen=True)
class Rule:
    id: str
    anchor: str
    citation: str
    min_genus: int = 0
    max_genus: int | None = None
    petri: bool = False
    blanket: bool = False

    def applies(self, ctx: CurveContext) -> bool:
        g = ctx.genus
        if g < self.min_genus:
            return False
        if self.max_genus is not None and g > self.max_genus:
            return False
        return ctx.petri or not self.petri


# Rules with ``blanket=True`` are the wholesale n <= 4 theorems and the
# extension arguments; they are switched off in no_blanket mode.
RULES: dict[str, Rule] = {
    r.id: r
    for r in [
        Rule(
            "R-DPOS",
            "§2",
            "§2, if k≥1 and G(α;n,d,k)≠∅ then α>0 and d>0",
        ),
        Rule(
            "R-EMPTY-β",
            "Prop. 6.1",
            "Prop. 6.1, \"Let X be a Petri curve and β<0. Then G(α)=∅ for all α>0\"",
            min_genus=2,
            petri=True,
        ),
        Rule(
            "R-GL",
            "Thm. 3.1(1)",
            "Thm. 3.1(1), \"G(α) ≠ ∅ if and only if β ≥ 0\" for α>max{0,α_l}",
            min_genus=2,
            petri=True,
        ),
        Rule(
            "R-RANK1",
            "§1",
            "§1, for n=1 G(α;1,d,k) \"coincides with the classical variety of "
            "linear systems\" G^{k-1}_d (emptiness for β<0 needs a Petri curve when g≥2)",
        ),
        Rule(
            "R-G0",
            "§8",
            "§8 (genus 0), \"there exist no semistable bundles\" unless n | d; "
            "U^s(n,d,n+1)≠∅ for n | d, and \"β≥0 is equivalent to d≥n\"",
            max_genus=0,
        ),
        Rule(
            "R-G1",
            "Thm. 8.1",
            "Thm. 8.1, U^s≠∅ iff d ≥ n+1; U≠∅ iff \"d ≥ n+1 and gcd(n,d)=1\"",
            min_genus=1,
            max_genus=1,
        ),
        Rule(
            "R-G2",
            "Thm. 8.2",
            "Thm. 8.2, U^s≠∅ iff d ≥ n+2; U≠∅ iff \"d ≥ n+2, d ≠ 2n\" "
            "(stated for any curve of genus 2, no Petri hypothesis)",
            min_genus=2,
            max_genus=2,
        ),
        Rule(
            "R-WINDOW",
            "Prop. 6.4",
            "Prop. 6.4, \"g+n−[g/(n+1)] ≤ d ≤ g+n\" and (g,n)≠(2,2) ⇒ U(n,d,n+1)≠∅",
            min_genus=2,
            petri=True,
        ),
        Rule(
            "R-BIGG",
            "Prop. 6.5",
            "Prop. 6.5, β≥0 and \"If g ≥ n²−1\" ⇒ U(n,d,n+1)≠∅",
            min_genus=2,
            petri=True,
        ),
        Rule(
            "R-D1",
            "Prop. 6.6",
            "Prop. 6.6, \"then U^s(n,d_0,n+1) ≠ ∅\" and \"If d ≥ d_1\" then U(n,d,n+1)≠∅",
            min_genus=2,
            petri=True,
        ),
        Rule(
            "R-MOD",
            "Prop. 6.7",
            "Prop. 6.7, U(n,na,n+1)≠∅ ⇒ U(n,d,n+1)≠∅ for d>na, \"d ≡ ±1 mod n\"",
            min_genus=2,
            petri=True,
        ),
        Rule(
            "R-TENSOR",
            "Remark 2.2",
            "Remark 2.2, \"Given a coherent system (E,V) and an effective line "
            "bundle\": nonempty at d ⇒ nonempty at d+n",
        ),
        Rule(
            "R-INTERVAL",
            "Remark 2.3",
            "Remark 2.3, nonempty for all d in [a,b] with \"b−a ≥ n−1\" ⇒ nonempty for all d≥a",
        ),
        Rule(
            "R-EXT",
            "Props. 6.8–6.10",
            "Props. 6.8–6.10, no destabilising extension of a generic element of G_L "
            "when n≥3, g+n<d<g+n+g/(n−1) and d/n<2g/(2n−1)+2 ⇒ U(n,d,n+1)≠∅",
            min_genus=2,
            petri=True,
            blanket=True,
        ),
        Rule(
            "R-P73",
            "Prop. 7.3",
            "Prop. 7.3, genus 3, d=2n=8 ⇒ U(4,8,5)≠∅",
            min_genus=3,
            max_genus=3,
            petri=True,
            blanket=True,
        ),
        Rule(
            "R-P74",
            "Prop. 7.4",
            "Prop. 7.4, genus 6 ⇒ U(4,12,5)≠∅ (extension count with β(2,6,3)=0, β(2,6,2)=9)",
            min_genus=6,
            max_genus=6,
            petri=True,
            blanket=True,
        ),
        Rule(
            "R-P75",
            "Prop. 7.5",
            "Prop. 7.5, genus 3 or 4 ⇒ U(4,10,5)≠∅ (extension count)",
            min_genus=3,
            max_genus=4,
            petri=True,
            blanket=True,
        ),
        Rule(
            "R-N234",
            "Thms. 7.1–7.3",
            "Thms. 7.1–7.3, for g≥3 and n=2,3,4, e.g. \"U(4,d,5) ≠ ∅ if and only if "
            "β(4,d,5) ≥ 0\"",
            min_genus=3,
            petri=True,
            blanket=True,
        ),
        Rule(
            "R-G3HI",
            "Thm. 8.3",
            "Thm. 8.3, genus 3, β≥0 ⇒ U(n,d,n+1)≠∅ \"except possibly when n ≥ 5, d = 2n+2\"",
            min_genus=3,
            max_genus=3,
            petri=True,
        ),
        Rule(
            "R-G45HI",
            "Remark 8.5",
            "Remark 8.5, g=4,5 and n≥5 with possible exceptions \"g=4, "
            "d=2n+2,2n+3,3n+2,3n+3\"; g=5, n=5, d=12,13,17,18; g=5, n≥6, "
            "d=2n+2,2n+3,2n+4,3n+2,3n+3,3n+4",
            min_genus=4,
            max_genus=5,
            petri=True,
        ),
        Rule(
            "R-SPECIAL",
            "Remark 7.5",
            "Remark 7.5, \"G(α;3,7,5) = ∅ for all α > 0\" and all g≥3",
            min_genus=3,
            petri=True,
        ),
        Rule(
            "R-INCL",
            "§6",
            "§6, U(n,d,n+1) ⊂ U^s(n,d,n+1) ⊂ G_L",
        ),
        Rule(
            "R-UB",
            "§9",
            "§9, \"if U(n,d,n+1)≠∅, then B(n,d,n+1)≠∅\"",
        ),
    ]
}

CLOSURE_RULES = ("R-MOD", "R-TENSOR", "R-INTERVAL", "R-INCL", "R-UB")


@dataclass(frozen=True)
class RuleSet:
    """Enabled rules. ``no_blanket`` drops every rule flagged ``blanket``."""

    enabled: frozenset[str]
    mode: str = "full"

    @classmethod
    def full(cls) -> "RuleSet":
        return cls(frozenset(RULES), "full")

    @classmethod
    def no_blanket(cls) -> "RuleSet":
        return cls(
            frozenset(i for i, r in RULES.items() if not r.blanket), "no_blanket"
        )

    @classmethod
    def from_mode(cls, mode: str) -> "RuleSet":
        mode = mode.replace("-", "_")
        if mode == "full":
            return cls.full()
        if mode == "no_blanket":
            return cls.no_blanket()
        raise DomainError(f"unknown mode {mode!r}")

    def without(self, *rule_ids: str) -> "RuleSet":
        unknown = set(rule_ids) - set(RULES)
        if unknown:
            raise DomainError(f"unknown rule ids {sorted(unknown)}")
        return RuleSet(self.enabled - set(rule_ids), self.mode)

    def __contains__(self, rule_id: str) -> bool:
        return rule_id in self.enabled


@dataclass(frozen=True)
class ProvenanceStep:
    rule_id: str
    citation: str
    conclusion: str
    reason: str
    premises: tuple[str, ...] = ()


@dataclass(frozen=True)
class Verdict:
    status: Status
    target: Target
    genus: int
    n: int
    d: int
    provenance: tuple[ProvenanceStep, ...] = ()
    note: str | None = None

    @property
    def rule_ids(self) -> tuple[str, ...]:
        seen = []
        for step in self.provenance:
            if step.rule_id not in seen:
                seen.append(step.rule_id)
        return tuple(seen)

    def summary(self) -> str:
        if not self.provenance:
            return f"{self.status.value} (no rule applies)"
        last = self.provenance[-1]
        return f"{self.status.value} ({RULES[last.rule_id].anchor}: {last.reason})"


def space_name(target: Target, n: int, d: int) -> str:
    return f"{target.value}({n},{d},{n + 1})"


# --- the fact grid ---------------------------------------------------------


@dataclass(frozen=True)
class _Fact:
    status: Status
    rule_id: str
    reason: str
    premises: tuple[tuple[int, Target], ...] = ()


# A direct rule maps (ctx, n, d) to conclusions (target, status, reason).
_Conclusion = tuple[Target, Status, str]
ALL_TARGETS = (Target.GL, Target.U, Target.US, Target.B)


def _all(status: Status, reason: str, targets=ALL_TARGETS) -> list[_Conclusion]:
    return [(t, status, reason) for t in targets]


def _r_dpos(ctx, n, d):
    if d <= 0:
        return _all(EMPTY, "d ≤ 0", (Target.GL, Target.U, Target.US))
    return []


def _r_empty_beta(ctx, n, d):
    if beta_np1(ctx, n, d) < 0:
        return _all(EMPTY, "β<0")
    return []


def _r_gl(ctx, n, d):
    if beta_np1(ctx, n, d) >= 0:
        return [(Target.GL, NONEMPTY, "β ≥ 0")]
    return [(Target.GL, EMPTY, "β < 0")]


def _r_rank1(ctx, n, d):
    if n != 1:
        return []
    if beta_np1(ctx, n, d) >= 0:
        return _all(NONEMPTY, "n=1, β ≥ 0")
    if ctx.petri or ctx.genus <= 1:
        return _all(EMPTY, "n=1, β < 0")
    return []


def _r_g0(ctx, n, d):
    if n < 2:
        return []
    out = [
        (Target.U, EMPTY, "no stable bundles of rank ≥ 2"),
        (Target.B, EMPTY, "no stable bundles of rank ≥ 2"),
    ]
    if d % n:
        out.append((Target.US, EMPTY, "n ∤ d"))
    elif d >= n:
        out.append((Target.US, NONEMPTY, "n | d, d ≥ n"))
    else:
        out.append((Target.US, EMPTY, "d ≥ n"))
    return out


def _r_g1(ctx, n, d):
    if n < 2:
        return []
    out = []
    coprime = math.gcd(n, d) == 1
    if d >= n + 1:
        out.append((Target.US, NONEMPTY, "d ≥ n+1"))
        if coprime:
            out.append((Target.U, NONEMPTY, "d ≥ n+1, gcd(n,d)=1"))
        else:
            out.append((Target.U, EMPTY, "gcd(n,d)=1"))
    else:
        out.append((Target.US, EMPTY, "d ≥ n+1"))
        out.append((Target.U, EMPTY, "d ≥ n+1"))
    if not coprime:
        # on an elliptic curve stable bundles exist iff gcd(n,d)=1
        out.append((Target.B, EMPTY, "no stable bundles unless gcd(n,d)=1"))
    return out


def _r_g2(ctx, n, d):
    if n < 2:
        return []
    out = []
    if d >= n + 2:
        out.append((Target.US, NONEMPTY, "d ≥ n+2"))
        if d == 2 * n:
            out.append((Target.U, EMPTY, "d ≠ 2n"))
        else:
            out.append((Target.U, NONEMPTY, "d ≥ n+2, d ≠ 2n"))
    else:
        out.append((Target.US, EMPTY, "d ≥ n+2"))
        out.append((Target.U, EMPTY, "d ≥ n+2"))
    if d == 2 * n:
        out.append((Target.B, EMPTY, "rank n, degree 2n, h⁰ ≥ n+1 is never stable"))
    return out


def _r_window(ctx, n, d):
    g = ctx.genus
    if (g, n) == (2, 2):
        return []
    if min_degree_generated(ctx, n) <= d <= g + n:
        return [(Target.U, NONEMPTY, "g+n−[g/(n+1)] ≤ d ≤ g+n")]
    return []


def _r_bigg(ctx, n, d):
    if ctx.genus >= n * n - 1 and beta_np1(ctx, n, d) >= 0:
        return [(Target.U, NONEMPTY, "g ≥ n²−1, β ≥ 0")]
    return []


def _r_d1(ctx, n, d):
    out = []
    if d == us_existence_degree(ctx, n):
        out.append((Target.US, NONEMPTY, "d = d₀"))
    d1 = u_existence_threshold(ctx, n)
    if d >= d1:
        out.append((Target.U, NONEMPTY, f"d ≥ d₁ = {d1}"))
    return out


def _r_ext(ctx, n, d):
    g = ctx.genus
    if n < 3 or d <= g + n:
        return []
    # d < g+n+g/(n-1)  and  d/n < 2g/(2n-1) + 2
    if (d - g - n) * (n - 1) < g and Fraction(d, n) < Fraction(2 * g, 2 * n - 1) + 2:
        return [(Target.U, NONEMPTY, "g+n < d < g+n+g/(n−1), d/n < 2g/(2n−1)+2")]
    return []


def _r_p73(ctx, n, d):
    if (n, d) == (4, 8):
        return [(Target.U, NONEMPTY, "g=3, d=2n")]
    return []


def _r_p74(ctx, n, d):
    if (n, d) == (4, 12):
        return [(Target.U, NONEMPTY, "g=6, d=12")]
    return []


def _r_p75(ctx, n, d):
    if (n, d) == (4, 10):
        return [(Target.U, NONEMPTY, "g∈{3,4}, d=10")]
    return []


def _r_n234(ctx, n, d):
    if n not in (2, 3, 4):
        return []
    if beta_np1(ctx, n, d) >= 0:
        return [(Target.U, NONEMPTY, f"n={n}, β ≥ 0")]
    return [(Target.U, EMPTY, f"n={n}, β < 0")]


def _r_g3hi(ctx, n, d):
    if n < 5 or beta_np1(ctx, n, d) < 0:
        return []
    if d == 2 * n + 2:
        return [(Target.U, OPEN, "possible exception n ≥ 5, d = 2n+2")]
    return [(Target.U, NONEMPTY, "β ≥ 0, d ≠ 2n+2")]


def remark_8_5_exceptions(g: int, n: int) -> frozenset[int]:
    """Degrees left open for genus 4 and 5 and rank n >= 5."""
    if n < 5:
        return frozenset()
    if g == 4:
        return frozenset({2 * n + 2, 2 * n + 3, 3 * n + 2, 3 * n + 3})
    if g == 5:
        if n == 5:
            return frozenset({12, 13, 17, 18})
        return frozenset(
            {2 * n + 2, 2 * n + 3, 2 * n + 4, 3 * n + 2, 3 * n + 3, 3 * n + 4}
        )
    return frozenset()


def _r_g45hi(ctx, n, d):
    if n < 5 or beta_np1(ctx, n, d) < 0:
        return []
    if d in remark_8_5_exceptions(ctx.genus, n):
        return [(Target.U, OPEN, f"possible exception g={ctx.genus}, d={d}")]
    return [(Target.U, NONEMPTY, "β ≥ 0 outside the listed exceptions")]


DIRECT_RULES: tuple[tuple[str, Callable], ...] = (
    ("R-DPOS", _r_dpos),
    ("R-EMPTY-β", _r_empty_beta),
    ("R-RANK1", _r_rank1),
    ("R-G0", _r_g0),
    ("R-G1", _r_g1),
    ("R-G2", _r_g2),
    ("R-GL", _r_gl),
    ("R-N234", _r_n234),
    ("R-G3HI", _r_g3hi),
    ("R-G45HI", _r_g45hi),
    ("R-WINDOW", _r_window),
    ("R-BIGG", _r_bigg),
    ("R-D1", _r_d1),
    ("R-EXT", _r_ext),
    ("R-P73", _r_p73),
    ("R-P74", _r_p74),
    ("R-P75", _r_p75),
)

# rules R-P73..R-P75 only speak about rank 4 in a fixed genus
_RANK4_ONLY = {"R-P73", "R-P74", "R-P75"}


class _Grid:
    """Facts for one (curve, rank, rule set) over the degrees lo..hi."""

    def __init__(self, ctx: CurveContext, n: int, rules: RuleSet, lo: int, hi: int):
        self.ctx = ctx
        self.n = n
        self.rules = rules
        self.lo = lo
        self.hi = hi
        self.facts: dict[tuple[int, Target], _Fact] = {}
        self.open_notes: dict[tuple[int, Target], _Fact] = {}
        self._active = [
            (rid, fn)
            for rid, fn in DIRECT_RULES
            if rid in rules
            and RULES[rid].applies(ctx)
            and (rid not in _RANK4_ONLY or n == 4)
        ]
        self._closure = {
            rid for rid in CLOSURE_RULES if rid in rules and RULES[rid].applies(ctx)
        }
        self._build()

    # -- bookkeeping

    def _add(self, key, fact: _Fact) -> bool:
        if fact.status is OPEN:
            self.open_notes.setdefault(key, fact)
            return False
        old = self.facts.get(key)
        if old is None:
            self.facts[key] = fact
            return True
        if old.status is not fact.status:
            first = self.chain(key)
            self.facts[("conflict", key)] = fact
            second = self.chain(("conflict", key))
            del self.facts[("conflict", key)]
            d, target = key
            raise ConsistencyError(
                f"rules conflict on {space_name(target, self.n, d)}: "
                f"{old.rule_id} gives {old.status.value}, "
                f"{fact.rule_id} gives {fact.status.value}",
                first,
                second,
            )
        return False

    def status(self, d: int, target: Target) -> Status | None:
        fact = self.facts.get((d, target))
        return fact.status if fact else None

    # -- construction

    def _build(self):
        for d in range(self.lo, self.hi + 1):
            for rid, fn in self._active:
                for target, status, reason in fn(self.ctx, self.n, d):
                    self._add((d, target), _Fact(status, rid, reason))
        changed = True
        while changed:
            changed = False
            for d in range(self.lo, self.hi + 1):
                changed |= self._close_at(d)

    def _close_at(self, d: int) -> bool:
        changed = False
        n = self.n
        for target in ALL_TARGETS:
            if "R-MOD" in self._closure and target is Target.U and d % n in {1 % n, (n - 1) % n}:
                na = (d - 1) // n * n
                while na >= self.lo:
                    if self.status(na, Target.U) is NONEMPTY:
                        changed |= self._add(
                            (d, target),
                            _Fact(NONEMPTY, "R-MOD", f"from U at d={na}, d ≡ ±1 mod n",
                                  ((na, Target.U),)),
                        )
                        break
                    na -= n
            if "R-INTERVAL" in self._closure:
                a = self._run_start(d, target)
                if a is not None:
                    changed |= self._add(
                        (d, target),
                        _Fact(NONEMPTY, "R-INTERVAL", f"nonempty on [{a},{a + n - 1}]",
                              tuple((x, target) for x in range(a, a + n))),
                    )
            if "R-TENSOR" in self._closure and self.status(d - n, target) is NONEMPTY:
                changed |= self._add(
                    (d, target),
                    _Fact(NONEMPTY, "R-TENSOR", f"from d−n = {d - n}", ((d - n, target),)),
                )
        # inclusions U ⊂ U^s ⊂ G_L and U ≠ ∅ ⇒ B ≠ ∅, with their contrapositives
        local = True
        while local:
            local = False
            if "R-INCL" in self._closure:
                for small, big in ((Target.U, Target.US), (Target.US, Target.GL), (Target.U, Target.GL)):
                    if self.status(d, small) is NONEMPTY:
                        local |= self._add((d, big), _Fact(
                            NONEMPTY, "R-INCL", f"{small.value} ⊂ {big.value}", ((d, small),)))
                    if self.status(d, big) is EMPTY:
                        local |= self._add((d, small), _Fact(
                            EMPTY, "R-INCL", f"{small.value} ⊂ {big.value}", ((d, big),)))
            if "R-UB" in self._closure:
                if self.status(d, Target.U) is NONEMPTY:
                    local |= self._add((d, Target.B), _Fact(
                        NONEMPTY, "R-UB", "U ≠ ∅ ⇒ B ≠ ∅", ((d, Target.U),)))
                if self.status(d, Target.B) is EMPTY:
                    local |= self._add((d, Target.U), _Fact(
                        EMPTY, "R-UB", "U ≠ ∅ ⇒ B ≠ ∅", ((d, Target.B),)))
            changed |= local
        return changed

    def _run_start(self, d: int, target: Target) -> int | None:
        """Start of the latest run of n consecutive nonempty degrees ending below d."""
        n = self.n
        run = 0
        for x in range(d - 1, self.lo - 1, -1):
            if self.status(x, target) is NONEMPTY:
                run += 1
                if run == n:
                    return x
            else:
                run = 0
        return None

    # -- provenance

    def chain(self, key) -> tuple[ProvenanceStep, ...]:
        steps: list[ProvenanceStep] = []
        seen: set = set()

        def visit(k):
            if k in seen:
                return
            seen.add(k)
            fact = self.facts[k]
            for p in fact.premises:
                visit(p)
            steps.append(self._step(k, fact))

        visit(key)
        return tuple(steps)

    def _step(self, key, fact: _Fact) -> ProvenanceStep:
        d, target = key[-1] if key[0] == "conflict" else key
        rule = RULES[fact.rule_id]
        return ProvenanceStep(
            rule_id=rule.id,
            citation=rule.citation,
            conclusion=f"{space_name(target, self.n, d)} {fact.status.value}",
            reason=fact.reason,
            premises=tuple(
                f"{space_name(t, self.n, pd)} {self.facts[(pd, t)].status.value}"
                for pd, t in fact.premises
            ),
        )

    def verdict(self, d: int, target: Target) -> Verdict:
        key = (d, target)
        g = self.ctx.genus
        if key in self.facts:
            return Verdict(self.facts[key].status, target, g, self.n, d, self.chain(key))
        note = self.open_notes.get(key)
        if note is not None:
            rule = RULES[note.rule_id]
            step = ProvenanceStep(
                rule.id, rule.citation, f"{space_name(target, self.n, d)} OPEN", note.reason
            )
            return Verdict(OPEN, target, g, self.n, d, (step,), note=rule.citation)
        return Verdict(OPEN, target, g, self.n, d)


@functools.lru_cache(maxsize=512)
def _grid(ctx: CurveContext, n: int, rules: RuleSet, lo: int, hi: int) -> _Grid:
    return _Grid(ctx, n, rules, lo, hi)


def _check_query(ctx: CurveContext, n: int):
    if not isinstance(ctx, CurveContext):
        raise TypeError("ctx must be a CurveContext")
    if n < 1:
        raise DomainError(f"rank must be >= 1, got {n}")


def decide(
    ctx: CurveContext,
    n: int,
    d: int,
    target: Target | str = Target.U,
    rules: RuleSet | None = None,
) -> Verdict:
    """Decide whether the space ``target`` of type (n, d, n+1) is nonempty."""
    _check_query(ctx, n)
    if isinstance(target, str):
        target = Target.parse(target)
    rules = rules or RuleSet.full()
    lo = min(d, min_degree_generated(ctx, n))
    return _grid(ctx, n, rules, lo, d).verdict(d, target)


@dataclass(frozen=True)
class SweepRow:
    genus: int
    rank: int
    degree: int
    beta: int
    verdict: Verdict


def sweep(
    genera: Iterable[int],
    ranks: Iterable[int],
    degrees: Iterable[int],
    target: Target | str = Target.U,
    rules: RuleSet | None = None,
    petri: bool = True,
    max_workers: int | None = None,
) -> list[SweepRow]:
    """Verdicts for every (g, n, d) cell, ordered by (g, n, d).

    Cells sharing (g, n) reuse one closure; with ``max_workers`` the (g, n)
    blocks are evaluated concurrently and merged in order.
    """
    if isinstance(target, str):
        target = Target.parse(target)
    rules = rules or RuleSet.full()
    degrees = sorted(set(degrees))
    blocks = [(g, n) for g in sorted(set(genera)) for n in sorted(set(ranks))]
    if not degrees or not blocks:
        return []

    def block(gn):
        g, n = gn
        ctx = CurveContext(g, petri)
        _check_query(ctx, n)
        lo = min(degrees[0], min_degree_generated(ctx, n))
        grid = _grid(ctx, n, rules, lo, degrees[-1])
        return [
            SweepRow(g, n, d, beta_np1(ctx, n, d), grid.verdict(d, target))
            for d in degrees
        ]

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            parts = list(pool.map(block, blocks))
    else:
        parts = [block(b) for b in blocks]
    return [row for part in parts for row in part]


# --- side facts with k != n+1 ------------------------------------------------


def side_fact(ctx: CurveContext, t: CSType) -> Verdict:
    """Known facts about G(alpha; n, d, k) for types outside the (n, d, n+1) family."""
    rule = RULES["R-SPECIAL"]
    if (t.n, t.d, t.k) == (3, 7, 5) and rule.applies(ctx):
        step = ProvenanceStep(
            rule.id, rule.citation, f"G(α;{t.n},{t.d},{t.k}) EMPTY for all α>0",
            f"β(3,7,5) = {beta(ctx, t)} < 0",
        )
        return Verdict(EMPTY, Target.GL, ctx.genus, t.n, t.d, (step,))
    return Verdict(OPEN, Target.GL, ctx.genus, t.n, t.d)


# --- applications ------------------------------------------------------------


@dataclass(frozen=True)
class ButlerStatus:
    status: str  # "holds", "fails" or "open"
    verdict: Verdict
    note: str | None = None


def butler_status(
    ctx: CurveContext, n: int, d: int, rules: RuleSet | None = None
) -> ButlerStatus:
    """Whether a generated (L, V) of type (1, d, n+1) with stable dual span exists.

    Equivalent to U(n, d, n+1) being nonempty on a Petri curve.
    """
    if d <= 0:
        raise DomainError(f"a generated line bundle needs degree > 0, got {d}")
    v = decide(ctx, n, d, Target.U, rules)
    status = {NONEMPTY: "holds", EMPTY: "fails", OPEN: "open"}[v.status]
    note = None
    if ctx.genus == 2 and d == 2 * n:
        note = "Remark 9.6, \"the conjecture fails for g=2, d=2n\""
    elif ctx.genus < 3 and status != "fails":
        note = "the conjecture is stated for g≥3; reported through Prop. 9.5"
    return ButlerStatus(status, v, note)


@dataclass(frozen=True)
class BNReport:
    genus: int
    n: int
    d: int
    beta: int
    alpha_l: int
    facts: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()


def bn_report(ctx: CurveContext, n: int, d: int, rules: RuleSet | None = None) -> BNReport:
    """What is known about the Brill-Noether locus B(n, d, n+1)."""
    _check_query(ctx, n)
    g = ctx.genus
    b = beta_np1(ctx, n, d)
    al = alpha_l(ctx, n, d)
    facts: dict = {}
    notes: list[str] = []
    verdict = decide(ctx, n, d, Target.B, rules)
    facts["B"] = verdict.status.value
    facts["G_L"] = decide(ctx, n, d, Target.GL, rules).status.value
    if verdict.provenance:
        notes.append(verdict.summary())
    window = min_degree_generated(ctx, n) <= d <= g + n
    if g >= 2 and ctx.petri and window and (g, n) != (2, 2):
        facts["irreducible"] = True
        facts["dim"] = b
        facts["singular_locus"] = f"B({n},{d},{n + 2})"
        facts["projective"] = d < g + n or (d == g + n and g % n != 0)
        facts["desingularisation"] = f"G_L({n},{d},{n + 1})"
        notes.append(
            "Cor. 9.2, \"B(n,d,n+1) is irreducible of dimension β(n,d,n+1)\", "
            "smooth outside B(n,d,n+2)"
        )
        if facts["projective"]:
            notes.append("Cor. 9.2(3), \"B(n,d,n+1) is projective\" (either d<g+n or d=g+n and n∤g)")
        if b <= n * n * (g - 1):
            notes.append("Thm. 9.1, \"Sing B(n,d,n+1) = B(n,d,n+2)\"")
    if (g, n, d) == (2, 2, 4):
        notes.append("Remark 9.3, \"B(2,4,3)=∅\" while G_L(2,4,3)≠∅")
    if g >= 2 and ctx.petri and al > 0 and b >= 0:
        facts["top_critical_value"] = al
        facts["flip_dim_bound"] = b - 1
        notes.append(
            f"Thm. 5.5, α_l={al}>0: G_{{L-1}} nonempty, irreducible, \"is birational to G_L\""
        )
        notes.append("Cor. 5.2 / Prop. 5.4, flip loci at α_l have dimension ≤ β−1")
    return BNReport(g, n, d, b, al, facts, tuple(notes))


def iter_rules() -> Iterator[Rule]:
    return iter(RULES.values())
