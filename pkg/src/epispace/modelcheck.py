"""Brute-force verification of the class relations and the representation
theorem on small epistemic spaces.

Operators of a space are numbered in mixed radix: operator ``i`` maps state
``s`` on input mask ``m`` to digit ``s*K + m`` of ``i`` written in base ``S``
(least significant digit first).  Any index range can therefore be
materialized independently, which is what the chunked scans rely on.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .assignments import (Assignment, Flag, StateAssignment, TotalPreorder, extract, is_compatible,
                          is_faithful, min_elements, synthesize)
from .errors import ConstraintViolation, NoSuchBeliefState, NotAPreorder, ScaleExceeded
from .fastcheck import Evaluator
from .logic import Signature, WorldSet
from .operators import SemanticOperator
from .postulates import AGM, CL, ECL, PostulateId
from .space import EpistemicSpace, is_globally_consistent

DEFAULT_MAX_OPS = 10 ** 7
CHUNK = 1 << 15

P = PostulateId


def max_ops_bound() -> int:
    """Enumeration bound, overridable with the ``EPISPACE_MAX_OPS`` environment variable."""
    raw = os.environ.get("EPISPACE_MAX_OPS")
    if raw is None:
        return DEFAULT_MAX_OPS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"EPISPACE_MAX_OPS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"EPISPACE_MAX_OPS must be positive, got {value}")
    return value


# ---------------------------------------------------------------------------
# counting


def fubini(n: int) -> int:
    """Number of total preorders (ordered set partitions) on an n-element set."""
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(math.comb(m, k) * a[m - k] for k in range(1, m + 1)))
    return a[n]


def operator_count(sp: EpistemicSpace) -> int:
    n = len(sp)
    return n ** (n * sp.sig.n_masks)


def _state_option_count(sig: Signature, bel: WorldSet, faithful_only: bool) -> int:
    free = sig.n_worlds - bin(bel).count("1")
    total = 0
    for k in range(free + 1):
        size = bin(bel).count("1") + k
        if faithful_only and bel:
            orders = fubini(k)
        else:
            orders = fubini(size)
        flags = 2 if size == sig.n_worlds else 1
        total += math.comb(free, k) * orders * flags
    return total


def assignment_count(sp: EpistemicSpace, faithful_only: bool = True) -> int:
    return math.prod(_state_option_count(sp.sig, b, faithful_only) for b in sp.bel)


@dataclass(frozen=True)
class EnumerationScope:
    space: EpistemicSpace
    operator_count: int
    assignment_count: int
    max_ops: int

    @classmethod
    def of(cls, sp: EpistemicSpace, max_ops: int | None = None) -> "EnumerationScope":
        return cls(sp, operator_count(sp), assignment_count(sp, True),
                   max_ops if max_ops is not None else max_ops_bound())

    @property
    def operators_enumerable(self) -> bool:
        return self.operator_count <= self.max_ops

    @property
    def assignments_enumerable(self) -> bool:
        return self.assignment_count <= self.max_ops

    def to_dict(self) -> dict:
        return {"space": self.space.name, "states": len(self.space), "inputs": self.space.sig.n_masks,
                "operator_count": self.operator_count, "assignment_count": self.assignment_count,
                "max_ops": self.max_ops}


# ---------------------------------------------------------------------------
# operators


def operator_tables(sp: EpistemicSpace, start: int, stop: int) -> np.ndarray:
    """Tables of operators ``start .. stop-1`` as an ``(n, S, K)`` int array."""
    n, k = len(sp), sp.sig.n_masks
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((stop - start, n * k), dtype=np.int64)
    rest = idx
    for p in range(n * k):
        digits[:, p] = rest % n
        rest = rest // n
    return digits.reshape(-1, n, k)


def operator_at(sp: EpistemicSpace, index: int) -> SemanticOperator:
    n, k = len(sp), sp.sig.n_masks
    table = []
    for _ in range(n):
        row = []
        for _ in range(k):
            index, d = divmod(index, n)
            row.append(d)
        table.append(tuple(row))
    return SemanticOperator(sp, tuple(table))


def operator_index(op: SemanticOperator) -> int:
    n = len(op.space)
    index = 0
    for t in reversed([t for row in op.table for t in row]):
        index = index * n + t
    return index


def _check_ops_bound(sp: EpistemicSpace, max_ops: int | None) -> int:
    bound = max_ops if max_ops is not None else max_ops_bound()
    count = operator_count(sp)
    if count > bound:
        raise ScaleExceeded(f"{sp.name} has {count} operators; the enumeration bound is {bound}")
    return count


def enumerate_operators(sp: EpistemicSpace, max_ops: int | None = None) -> Iterator[SemanticOperator]:
    """Every total operator of ``sp`` exactly once, in index order."""
    count = _check_ops_bound(sp, max_ops)

    def gen():
        for start in range(0, count, CHUNK):
            stop = min(count, start + CHUNK)
            for t in operator_tables(sp, start, stop):
                yield SemanticOperator(sp, t.tolist())

    return gen()


# ---------------------------------------------------------------------------
# assignments


def _submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask`` in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def ordered_partitions(domain: WorldSet) -> Iterator[tuple[WorldSet, ...]]:
    """Every total preorder on ``domain`` as a tuple of layers."""
    if domain == 0:
        yield ()
        return
    for first in _submasks(domain):
        if first == 0:
            continue
        for rest in ordered_partitions(domain & ~first):
            yield (first,) + rest


def state_options(sig: Signature, bel: WorldSet, faithful_only: bool = True) -> list[StateAssignment]:
    """All admissible (C, order, b) triples for a state with belief set ``bel``."""
    out = []
    for extra in _submasks(sig.omega & ~bel):
        credible = bel | extra
        if faithful_only and bel:
            orders = [(bel,) + rest for rest in ordered_partitions(extra)]
        else:
            orders = list(ordered_partitions(credible))
        flags = (Flag.TOP, Flag.BOT) if credible == sig.omega else (Flag.TOP,)
        for layers in orders:
            order = TotalPreorder(credible, layers)
            for b in flags:
                out.append(StateAssignment(credible, order, b))
    return out


def enumerate_assignments(sp: EpistemicSpace, faithful_only: bool = True,
                          max_count: int | None = None) -> Iterator[Assignment]:
    """Every valid (optionally faithful) assignment for ``sp`` exactly once."""
    bound = max_count if max_count is not None else max_ops_bound()
    count = assignment_count(sp, faithful_only)
    if count > bound:
        raise ScaleExceeded(f"{sp.name} has {count} assignments; the enumeration bound is {bound}")
    options = [state_options(sp.sig, b, faithful_only) for b in sp.bel]
    return (Assignment(sp, combo) for combo in itertools.product(*options))


# ---------------------------------------------------------------------------
# Lemma: min over a union


def lemma1_property(order: TotalPreorder, X: WorldSet, Y: WorldSet) -> bool:
    """``min(X|Y)`` is ``min(X)``, ``min(Y)`` or their union."""
    mx, my = min_elements(X, order), min_elements(Y, order)
    return min_elements(X | Y, order) in (mx, my, mx | my)


def lemma1_sweep(sig: Signature, max_domain: int = 3) -> tuple[int, list[tuple[TotalPreorder, int, int]]]:
    """Check the union property for every preorder on every domain of at most
    ``max_domain`` worlds and every pair of subsets; returns (checked, failures)."""
    checked, failures = 0, []
    for domain in range(sig.omega + 1):
        if bin(domain).count("1") > max_domain:
            continue
        subs = list(_submasks(domain))
        for layers in ordered_partitions(domain):
            order = TotalPreorder(domain, layers)
            for X in subs:
                for Y in subs:
                    checked += 1
                    if not lemma1_property(order, X, Y):
                        failures.append((order, X, Y))
    return checked, failures


# ---------------------------------------------------------------------------
# report

CLAIMS = ("Prop1", "Prop2", "Corollary", "Prop4", "Prop5", "Prop6", "Prop7", "Lemma1", "Thm1_fwd", "Thm1_bwd")

CONFIRMED = "confirmed"
REFUTED = "refuted"
NOT_APPLICABLE = "not_applicable"


@dataclass
class ClaimResult:
    verdict: str = CONFIRMED
    counts: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def fail(self, detail: dict) -> None:
        self.verdict = REFUTED
        if self.counterexample is None:
            self.counterexample = detail

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "counts": dict(self.counts), "counterexample": self.counterexample}


@dataclass
class VerificationReport:
    space: str
    mode: str
    operators_scanned: int
    class_counts: dict
    claims: dict[str, ClaimResult]
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return all(c.verdict != REFUTED for c in self.claims.values())

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "mode": self.mode,
            "seed": self.seed,
            "operators_scanned": self.operators_scanned,
            "class_counts": dict(self.class_counts),
            "claims": {k: self.claims[k].to_dict() for k in CLAIMS},
            "ok": self.ok,
        }

    def describe(self) -> str:
        lines = [f"space {self.space}: {self.mode} scan of {self.operators_scanned} operators"]
        lines.append("  " + "  ".join(f"|{k}| = {v}" for k, v in self.class_counts.items()))
        for k in CLAIMS:
            c = self.claims[k]
            counts = ", ".join(f"{a}={b}" for a, b in c.counts.items())
            line = f"  {k:<10} {c.verdict}"
            if counts:
                line += f"  ({counts})"
            if c.counterexample:
                line += f"  counterexample: {c.counterexample}"
            lines.append(line)
        return "\n".join(lines)


def _key(beliefs) -> bytes:
    return np.asarray(beliefs, dtype=np.int64).tobytes()


def _op_ref(sp: EpistemicSpace, index: int | None, table) -> dict:
    if index is not None:
        return {"operator_index": int(index)}
    return {"table": [[sp.names[t] for t in row] for row in np.asarray(table).tolist()]}


def _extraction_status(sp: EpistemicSpace, op: SemanticOperator) -> tuple[Assignment | None, str]:
    try:
        a = extract(sp, op)
    except (NotAPreorder, ConstraintViolation) as exc:
        return None, f"extraction failed: {exc}"
    if not is_faithful(sp, a).ok:
        return a, "extracted assignment is not faithful"
    if not is_compatible(sp, a, op).ok:
        return a, "extracted assignment is not revision-compatible"
    return a, ""


def verify_claims(sp: EpistemicSpace, max_ops: int | None = None, samples: int = 0,
                        seed: int = 0, lemma_domain: int = 3) -> VerificationReport:
    """Scan operators of ``sp`` (all of them, or a seeded random sample when
    the space is too large and ``samples`` > 0) and cross-check every claim."""
    bound = max_ops if max_ops is not None else max_ops_bound()
    total = operator_count(sp)
    exhaustive = total <= bound
    if not exhaustive and samples <= 0:
        raise ScaleExceeded(f"{sp.name} has {total} operators; the enumeration bound is {bound} "
                            f"(pass a sample size for a randomized scan)")
    n, k = len(sp), sp.sig.n_masks
    ev = Evaluator(sp.bel, k)
    gc = is_globally_consistent(sp)
    claims = {c: ClaimResult() for c in CLAIMS}
    counts = {"AGMRev": 0, "CLRev": 0, "ECLRev": 0, "AGMRev&CLRev": 0}
    interesting = []  # (index or None, table, agm, cl, ecl) for operators in some class
    rng = np.random.default_rng(seed)

    def batches():
        if exhaustive:
            for start in range(0, total, CHUNK):
                stop = min(total, start + CHUNK)
                yield np.arange(start, stop), operator_tables(sp, start, stop)
        else:
            done = 0
            while done < samples:
                m = min(CHUNK, samples - done)
                yield None, rng.integers(0, n, size=(m, n, k))
                done += m

    scanned = 0
    prop4 = claims["Prop4"]
    prop4.counts = {"CL3": 0, "CL3_without_CL3u_or_CL3wcp": 0, "WCP_CL3wcp_disagreements": 0}
    for idx, tables in batches():
        M = ev.beliefs(tables)
        agm = ev.satisfies_all(AGM, M)
        cl = ev.satisfies_all(CL, M)
        ecl = ev.satisfies_all(ECL, M)
        cl3 = ev.satisfies(P.CL3, M)
        cl3u = ev.satisfies(P.CL3u, M)
        wcp_c = ev.satisfies(P.CL3wcp, M)
        wcp = ev.satisfies(P.WCP, M)
        scanned += len(tables)
        counts["AGMRev"] += int(agm.sum())
        counts["CLRev"] += int(cl.sum())
        counts["ECLRev"] += int(ecl.sum())
        counts["AGMRev&CLRev"] += int((agm & cl).sum())

        def first(mask):
            j = int(np.flatnonzero(mask)[0])
            return _op_ref(sp, None if idx is None else idx[j], tables[j])

        if not gc and cl.any():
            claims["Prop1"].fail(first(cl))
        if (agm & cl).any():
            claims["Prop2"].fail(first(agm & cl))
            claims["Corollary"].fail(first(agm & cl))
        prop4.counts["CL3"] += int(cl3.sum())
        bad4 = cl3 & ~(cl3u & wcp_c)
        prop4.counts["CL3_without_CL3u_or_CL3wcp"] += int(bad4.sum())
        prop4.counts["WCP_CL3wcp_disagreements"] += int((wcp != wcp_c).sum())
        if bad4.any():
            prop4.fail(first(bad4))
        if (wcp != wcp_c).any():
            prop4.fail(first(wcp != wcp_c))
        bad7 = (agm | cl) & ~ecl
        if bad7.any():
            claims["Prop7"].fail(first(bad7))
        for j in np.flatnonzero(agm | cl | ecl):
            interesting.append((None if idx is None else int(idx[j]), tables[j], bool(agm[j]),
                                bool(cl[j]), bool(ecl[j]), M[j]))

    if gc:
        claims["Prop1"].verdict = NOT_APPLICABLE
    claims["Prop1"].counts = {"globally_consistent": gc, "CLRev": counts["CLRev"]}
    claims["Prop2"].counts = claims["Corollary"].counts = {"AGMRev&CLRev": counts["AGMRev&CLRev"]}
    claims["Prop7"].counts = {"AGMRev": counts["AGMRev"], "CLRev": counts["CLRev"], "ECLRev": counts["ECLRev"]}

    # Theorem: forward direction via extraction on every ECL operator
    fwd = claims["Thm1_fwd"]
    fwd.counts = {"ecl_operators": 0, "extracted_ok": 0}
    extracted: dict[int, Assignment] = {}
    for pos, (i, table, agm_j, cl_j, ecl_j, _) in enumerate(interesting):
        if not ecl_j:
            continue
        fwd.counts["ecl_operators"] += 1
        op = SemanticOperator(sp, table.tolist())
        a, problem = _extraction_status(sp, op)
        if problem:
            fwd.fail({**_op_ref(sp, i, table), "detail": problem})
        else:
            fwd.counts["extracted_ok"] += 1
            extracted[pos] = a

    # Theorem: backward direction via synthesis from assignments
    bwd = claims["Thm1_bwd"]
    bwd.counts = {"faithful_assignments": 0, "synthesized": 0, "unhostable": 0, "synthesized_ecl": 0}
    n_assign = assignment_count(sp, True)
    synth_keys: set[bytes] = set()
    agm_keys: set[bytes] = set()
    top_keys: set[bytes] = set()
    if n_assign <= bound:
        assign_iter = enumerate_assignments(sp, True, bound)
        assign_exhaustive = True
    else:
        options = [state_options(sp.sig, b, True) for b in sp.bel]
        sample_n = max(samples, 1)
        assign_iter = (Assignment(sp, tuple(opts[int(rng.integers(len(opts)))] for opts in options))
                       for _ in range(sample_n))
        assign_exhaustive = False
    omega = sp.sig.omega
    for a in assign_iter:
        bwd.counts["faithful_assignments"] += 1
        try:
            op = synthesize(sp, a)
        except NoSuchBeliefState:
            bwd.counts["unhostable"] += 1
            continue
        bwd.counts["synthesized"] += 1
        tab = np.asarray(op.table, dtype=np.int64)[None]
        M = ev.beliefs(tab)
        if ev.satisfies_all(ECL, M)[0]:
            bwd.counts["synthesized_ecl"] += 1
        else:
            bwd.fail({"assignment": _assignment_ref(a), "detail": "synthesized operator is not ECL"})
        key = _key(M[0])
        synth_keys.add(key)
        if all(e.credible == omega and e.b is Flag.BOT for e in a.entries):
            agm_keys.add(key)
        if all(e.b is Flag.TOP for e in a.entries):
            top_keys.add(key)
    bwd.counts["exhaustive"] = assign_exhaustive

    if exhaustive and assign_exhaustive:
        ecl_keys = {_key(M_j) for (_, _, _, _, ecl_j, M_j) in interesting if ecl_j}
        bwd.counts["distinct_synthesized_tables"] = len(synth_keys)
        fwd.counts["distinct_ecl_tables"] = len(ecl_keys)
        missing = ecl_keys - synth_keys
        extra = synth_keys - ecl_keys
        if missing:
            fwd.fail({"detail": f"{len(missing)} ECL belief tables are not synthesizable"})
        if extra:
            bwd.fail({"detail": f"{len(extra)} synthesized belief tables are not ECL operators"})

    # AGM = ECL with C = all worlds and b = bot; CL = ECL with b = top (globally consistent)
    p5, p6 = claims["Prop5"], claims["Prop6"]
    p5.counts = {"AGMRev": counts["AGMRev"], "matching_ecl": 0}
    p6.counts = {"CLRev": counts["CLRev"], "matching_ecl": 0}
    use_keys = exhaustive and assign_exhaustive
    for pos, (i, table, agm_j, cl_j, ecl_j, M_j) in enumerate(interesting):
        if use_keys:
            key = _key(M_j)
            agm_like = ecl_j and key in agm_keys
            top_like = ecl_j and key in top_keys
        else:
            a = extracted.get(pos)
            agm_like = a is not None and all(
                e.credible == omega and (e.b is Flag.BOT or sp.bel[s] == 0) for s, e in enumerate(a.entries))
            top_like = a is not None and all(e.b is Flag.TOP for e in a.entries)
        p5.counts["matching_ecl"] += int(agm_like)
        p6.counts["matching_ecl"] += int(top_like)
        if agm_j != agm_like:
            p5.fail({**_op_ref(sp, i, table), "detail": f"AGM={agm_j} but assignment criterion={agm_like}"})
        if gc and cl_j != top_like:
            p6.fail({**_op_ref(sp, i, table), "detail": f"CL={cl_j} but assignment criterion={top_like}"})
    if not gc:
        p6.verdict = NOT_APPLICABLE

    checked, failures = lemma1_sweep(sp.sig, lemma_domain)
    lem = claims["Lemma1"]
    lem.counts = {"triples_checked": checked, "violations": len(failures)}
    if failures:
        order, X, Y = failures[0]
        lem.fail({"layers": [sp.sig.format_worlds(l) for l in order.layers],
                  "X": sp.sig.format_worlds(X), "Y": sp.sig.format_worlds(Y)})

    return VerificationReport(sp.name, "exhaustive" if exhaustive else "sampled", scanned, counts, claims,
                              None if exhaustive else seed)


def _assignment_ref(a: Assignment) -> dict:
    sig = a.space.sig
    return {n: {"b": e.b.value, "C": sig.format_worlds(e.credible),
                "order": [sig.format_worlds(l) for l in e.order.layers]}
            for n, e in zip(a.space.names, a.entries)}


verify_paper_claims = verify_claims
