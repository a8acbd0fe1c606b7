"""The condition cascade, hit classification, and nonexistence certificates.

A candidate (w, a) is pushed through the necessary conditions in a fixed
cheapest-first order; the verdict carries the first failed stage and a
re-checkable witness.  Search hits are classified by base primality and
by a deliberately conservative implied code length (2 * larger value + 1,
an overestimate of n, so the already-eliminated bucket can never absorb a
real candidate).  Completed runs are sealed into versioned certificates
that can be re-validated without re-running the search.
"""

import datetime
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import __version__
from .carries import forced_alpha, short_interval_check
from .core import CodeParams, phi1, regularity_divides, regularity_order
from .egyptian import alpha_window, is_seven_rough, reciprocal_sum
from .factoring import FactorBudgetError, factor, prime_verdict
from .powersearch import (
    Hit,
    SearchConfig,
    SearchResult,
    exponent_set,
    expected_increments,
    hit_from_dict,
)

__all__ = [
    "CASCADE_STAGES",
    "TraceEntry",
    "ParamVerdict",
    "HitVerdict",
    "Certificate",
    "CertificateSchemaError",
    "check_parameters",
    "classify_hit",
    "conclude",
    "conclude_sweep",
    "verify_certificate",
    "sweep",
    "SweepResult",
    "KNOWN_BOUND_DEFAULT",
    "CERT_SCHEMA",
]

CERT_SCHEMA = "cert-v1"

# Previously established elimination bound for n; updatable so bootstrap
# runs can feed each other.
KNOWN_BOUND_DEFAULT = 50000

CASCADE_STAGES = (
    "admissible",
    "squarefree",
    "short_interval",
    "alpha_coprime",
    "alpha_rough",
    "alpha_window",
)


@dataclass(frozen=True)
class TraceEntry:
    stage: str
    result: str  # "pass" | "fail" | "inconclusive"
    witness: str = ""


@dataclass(frozen=True)
class ParamVerdict:
    params: CodeParams
    outcome: str  # "ruled_out" | "not_ruled_out"
    first_failed: Optional[str]
    trace: Tuple[TraceEntry, ...]


def check_parameters(
    w: int,
    a: int,
    rough_required: int = 2,
    full_trace: bool = False,
    include_regularity: bool = False,
    regularity_max_i: int = 50,
    factor_budget: int = 10 ** 8,
) -> ParamVerdict:
    """Evaluate the full condition cascade for one (w, a).

    Stops at the first failed stage unless full_trace is set.  A blown
    factorization budget yields an inconclusive squarefree entry and a
    not_ruled_out outcome, never a false ruled_out.  rough_required=1
    reproduces the weaker single-rough-exponent stage.
    """
    params = CodeParams(w, a)
    trace: List[TraceEntry] = []
    first_failed: Optional[str] = None

    def record(stage: str, ok: bool, witness: str = "") -> bool:
        nonlocal first_failed
        trace.append(TraceEntry(stage, "pass" if ok else "fail", witness))
        if not ok and first_failed is None:
            first_failed = stage
        return ok

    def verdict() -> ParamVerdict:
        outcome = "ruled_out" if first_failed is not None else "not_ruled_out"
        return ParamVerdict(params, outcome, first_failed, tuple(trace))

    # stage 1: admissibility 0 < a < w/2 (exact)
    if not record("admissible", params.admissible, f"a={a},w={w}") and not full_trace:
        return verdict()

    if include_regularity:
        order = regularity_order(params)
        bad_i = None
        for i in range(0, min(order.guaranteed_k, regularity_max_i) + 1):
            if not regularity_divides(params, i):
                bad_i = i
                break
        if not record(
            "regularity",
            bad_i is None,
            f"i={bad_i},phi1={phi1(params)}" if bad_i is not None else "",
        ) and not full_trace:
            return verdict()

    # stage 2: squarefreeness of 1 + w(w+a)
    phi = phi1(params)
    try:
        factors = factor(phi, budget=factor_budget)
    except FactorBudgetError as exc:
        trace.append(TraceEntry("squarefree", "inconclusive", str(exc)))
        return verdict()
    square = next((p for p, mult in factors if mult > 1), None)
    if not record(
        "squarefree",
        square is None,
        f"phi1={phi},p={square}" if square is not None else f"phi1={phi}",
    ) and not full_trace:
        return verdict()

    # stage 3: every prime power forced near w + a
    s = params.s
    primes = [p for p, _ in factors]
    bad_p = next((p for p in primes if not short_interval_check(p, w, a)), None)
    if not record(
        "short_interval",
        bad_p is None,
        f"p={bad_p},alpha={forced_alpha(bad_p, s)}" if bad_p is not None else "",
    ) and not full_trace:
        return verdict()

    # stage 4: forced exponents distinct and pairwise coprime
    alphas = [forced_alpha(p, s) for p in primes]
    bad_pair = None
    for i in range(len(alphas)):
        for j in range(i + 1, len(alphas)):
            if alphas[i] == alphas[j] or math.gcd(alphas[i], alphas[j]) > 1:
                bad_pair = (primes[i], alphas[i], primes[j], alphas[j])
                break
        if bad_pair:
            break
    if not record(
        "alpha_coprime",
        bad_pair is None,
        "p=%d,alpha=%d;p=%d,alpha=%d" % bad_pair if bad_pair else "",
    ) and not full_trace:
        return verdict()

    # stage 5: enough exponents with smallest prime factor >= 7
    rough = sum(1 for al in alphas if is_seven_rough(al))
    if not record(
        "alpha_rough",
        rough >= rough_required,
        f"rough={rough},required={rough_required}",
    ) and not full_trace:
        return verdict()

    # stage 6: reciprocal sum inside the certified window at this n
    window = alpha_window(max(params.n, 10))
    total = reciprocal_sum(alphas)
    record(
        "alpha_window",
        total in window,
        f"sum={total},lo={window.lo},hi={window.hi}",
    )
    return verdict()


@dataclass(frozen=True)
class HitVerdict:
    hit: Hit
    classification: str  # composite_base | below_known_bound | candidate
    details: Dict[str, object]


def _implied_n(hit: Hit) -> int:
    # deliberate overestimate of n = 2w + a < 2(w + a) < 2 p^alpha
    return 2 * hit.larger.value + 1


def classify_hit(hit: Hit, known_bound: int = KNOWN_BOUND_DEFAULT, strict: bool = False) -> HitVerdict:
    """Classify a close pair: composite base, already-eliminated range, or
    genuine candidate.  strict mode refuses a candidate verdict that rests
    on merely probable primes."""
    hit.validate()
    big = prime_verdict(hit.larger.base)
    small = prime_verdict(hit.smaller.base)
    details: Dict[str, object] = {
        "larger_base_prime": big.is_prime,
        "larger_base_method": big.method,
        "smaller_base_prime": small.is_prime,
        "smaller_base_method": small.method,
        "implied_n": _implied_n(hit),
    }
    if not (big.is_prime and small.is_prime):
        cls = "composite_base"
    elif _implied_n(hit) <= known_bound:
        cls = "below_known_bound"
    else:
        cls = "candidate"
        if strict and "probabilistic" in (big.method, small.method):
            raise RuntimeError(
                "strict mode: refusing candidate classification on probable primes"
            )
    return HitVerdict(hit, cls, details)


class CertificateSchemaError(ValueError):
    pass


@dataclass
class Certificate:
    kind: str  # "search" | "sweep"
    config: dict
    results: dict
    conclusion: str
    tool_version: str
    created: str
    confidence: str  # "deterministic" | "probabilistic"

    def to_dict(self) -> dict:
        return {
            "schema": CERT_SCHEMA,
            "kind": self.kind,
            "config": self.config,
            "results": self.results,
            "conclusion": self.conclusion,
            "tool_version": self.tool_version,
            "created": self.created,
            "confidence": self.confidence,
        }

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "Certificate":
        if doc.get("schema") != CERT_SCHEMA:
            raise CertificateSchemaError(
                f"unknown certificate schema {doc.get('schema')!r}"
            )
        return cls(
            kind=doc["kind"],
            config=doc["config"],
            results=doc["results"],
            conclusion=doc["conclusion"],
            tool_version=doc["tool_version"],
            created=doc["created"],
            confidence=doc["confidence"],
        )

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def _search_policy(config: SearchConfig) -> str:
    if config.exponents == exponent_set(config.bound_bits, 3):
        return "full"
    if config.exponents == exponent_set(config.bound_bits, 7):
        return "min-prime-7"
    return "custom"


def _search_conclusion(policy: str, config: SearchConfig, n_candidates: int) -> str:
    c = config.bound_bits
    if n_candidates > 0:
        return (
            f"{n_candidates} candidate pair(s) found below 2^{c}; "
            "no nonexistence conclusion"
        )
    if policy in ("full", "min-prime-7") and config.pair_filter == "all":
        return f"no 1-perfect codes for n < 2^{c}"
    exps = ",".join(str(e) for e in config.exponents)
    return f"no candidate pairs for exponent set {{{exps}}} below 2^{c}"


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def conclude(
    result: SearchResult,
    known_bound: int = KNOWN_BOUND_DEFAULT,
    strict: bool = False,
    created: Optional[str] = None,
) -> Certificate:
    """Seal a completed search into a certificate.

    Refuses partial (checkpoint-pending) runs and degenerate searches in
    which no base increment was ever possible.  The headline nonexistence
    claim is made only under an exponent policy that justifies it; other
    configurations get a conclusion scoped to their exponent set.
    """
    if not result.finished:
        raise ValueError("refusing to conclude from a partial (unfinished) run")
    expected = expected_increments(result.config)
    if expected == 0:
        raise ValueError("degenerate search: no base increments were possible")
    if result.increments != expected:
        raise ValueError(
            f"increment accounting mismatch: {result.increments} != {expected}"
        )
    verdicts = [classify_hit(h, known_bound, strict) for h in result.hits]
    policy = _search_policy(result.config)
    n_candidates = sum(1 for v in verdicts if v.classification == "candidate")
    confidence = (
        "probabilistic"
        if any(
            "probabilistic"
            in (v.details["larger_base_method"], v.details["smaller_base_method"])
            for v in verdicts
        )
        else "deterministic"
    )
    hits_doc = []
    for v in verdicts:
        d = {
            "larger": {
                "base": v.hit.larger.base,
                "exponent": v.hit.larger.exponent,
                "value": v.hit.larger.value,
            },
            "smaller": {
                "base": v.hit.smaller.base,
                "exponent": v.hit.smaller.exponent,
                "value": v.hit.smaller.value,
            },
            "diff": v.hit.diff,
            "classification": v.classification,
            "details": v.details,
        }
        hits_doc.append(d)
    return Certificate(
        kind="search",
        config={
            "exponents": list(result.config.exponents),
            "bound_bits": result.config.bound_bits,
            "pair_filter": result.config.pair_filter,
            "known_bound": known_bound,
            "policy": policy,
        },
        results={"hits": hits_doc, "increments": result.increments},
        conclusion=_search_conclusion(policy, result.config, n_candidates),
        tool_version=__version__,
        created=created if created is not None else _now(),
        confidence=confidence,
    )


@dataclass
class SweepResult:
    n_max: int
    rough_required: int
    n_pairs: int
    stage_counts: Dict[str, int]
    survivors: List[ParamVerdict]
    sample_checked: int = 0


def _pair_count(n_max: int) -> int:
    total = 0
    for n in range(7, n_max + 1):
        total += max((n - 1) // 2 - (2 * n // 5), 0)
    return total


def _iter_pairs(n_max: int):
    for n in range(7, n_max + 1):
        for w in range(2 * n // 5 + 1, (n - 1) // 2 + 1):
            yield w, n - 2 * w


_KERNEL_STAGE = {
    1: "admissible",
    2: "squarefree",
    3: "short_interval",
    4: "alpha_coprime",
    5: "alpha_rough",
}


def sweep(
    n_max: int,
    rough_required: int = 2,
    sample_rate: float = 0.0,
    seed: int = 0,
    use_fast: Optional[bool] = None,
) -> SweepResult:
    """Run the cascade over every admissible (w, a) with n = 2w+a <= n_max.

    The compiled stage 1-5 kernel handles the bulk; survivors get the full
    exact cascade.  With sample_rate > 0, a random sample of pairs is
    re-verified against the exact cascade and any disagreement raises.
    """
    from . import sweepfast

    if use_fast is None:
        use_fast = sweepfast.HAVE_NUMBA
    counts: Dict[str, int] = {stage: 0 for stage in CASCADE_STAGES}
    survivors: List[ParamVerdict] = []
    if use_fast:
        raw_counts, surv_pairs = sweepfast.run_sweep_kernel(n_max, rough_required)
        for code, stage in _KERNEL_STAGE.items():
            counts[stage] = raw_counts[code]
        for w, a in surv_pairs:
            v = check_parameters(w, a, rough_required=rough_required)
            if v.outcome == "ruled_out":
                counts[v.first_failed] += 1
            else:
                survivors.append(v)
    else:
        for w, a in _iter_pairs(n_max):
            v = check_parameters(w, a, rough_required=rough_required)
            if v.outcome == "ruled_out":
                counts[v.first_failed] += 1
            else:
                survivors.append(v)

    n_pairs = _pair_count(n_max)
    sample_checked = 0
    if sample_rate > 0 and use_fast:
        rng = random.Random(seed)
        target = max(1, int(n_pairs * sample_rate))
        while sample_checked < target:
            n = rng.randrange(7, n_max + 1)
            lo, hi = 2 * n // 5 + 1, (n - 1) // 2
            if lo > hi:
                continue
            w = rng.randrange(lo, hi + 1)
            a = n - 2 * w
            code = sweepfast.cascade_stage15(w, a, rough_required)
            ref = check_parameters(w, a, rough_required=rough_required)
            ok = (
                ref.first_failed == _KERNEL_STAGE[code]
                if code in _KERNEL_STAGE
                else ref.first_failed in (None, "alpha_window")
            )
            if not ok:
                raise RuntimeError(
                    f"sweep soundness check failed at (w={w}, a={a}): "
                    f"kernel stage code {code}, reference {ref.first_failed}"
                )
            sample_checked += 1

    return SweepResult(
        n_max=n_max,
        rough_required=rough_required,
        n_pairs=n_pairs,
        stage_counts=counts,
        survivors=survivors,
        sample_checked=sample_checked,
    )


def conclude_sweep(result: SweepResult, created: Optional[str] = None) -> Certificate:
    """Seal a parameter sweep into a certificate."""
    surv_doc = [
        {
            "w": v.params.w,
            "a": v.params.a,
            "n": v.params.n,
            "first_failed": v.first_failed,
        }
        for v in result.survivors
    ]
    if result.survivors:
        conclusion = (
            f"{len(result.survivors)} parameter pair(s) with n <= {result.n_max} "
            "not ruled out"
        )
    else:
        conclusion = (
            f"all admissible (w, a) with n <= {result.n_max} ruled out by the cascade"
        )
    return Certificate(
        kind="sweep",
        config={"n_max": result.n_max, "rough_required": result.rough_required},
        results={
            "pairs": result.n_pairs,
            "stage_counts": result.stage_counts,
            "survivors": surv_doc,
            "sample_checked": result.sample_checked,
        },
        conclusion=conclusion,
        tool_version=__version__,
        created=created if created is not None else _now(),
        confidence="deterministic",
    )


def _verify_search(cert: Certificate) -> bool:
    cfg = cert.config
    try:
        config = SearchConfig.make(
            cfg["exponents"], cfg["bound_bits"], cfg["pair_filter"]
        )
    except (KeyError, ValueError, TypeError):
        return False
    if cfg.get("policy") != _search_policy(config):
        return False
    known_bound = cfg.get("known_bound", KNOWN_BOUND_DEFAULT)
    if cert.results.get("increments") != expected_increments(config):
        return False
    hits_doc = cert.results.get("hits")
    if not isinstance(hits_doc, list):
        return False
    n_candidates = 0
    methods = []
    prev_larger = 0
    exp_set = set(config.exponents)
    for d in hits_doc:
        try:
            hit = hit_from_dict(d)
        except (KeyError, ValueError, TypeError):
            return False
        if hit.larger.value >= config.bound or hit.smaller.value >= config.bound:
            return False
        if hit.larger.exponent not in exp_set or hit.smaller.exponent not in exp_set:
            return False
        if hit.larger.exponent == hit.smaller.exponent:
            return False
        if not config.filter_passes(hit.larger.exponent, hit.smaller.exponent):
            return False
        if hit.larger.value < prev_larger:
            return False
        prev_larger = hit.larger.value
        v = classify_hit(hit, known_bound)
        if v.classification != d.get("classification"):
            return False
        methods.extend(
            [v.details["larger_base_method"], v.details["smaller_base_method"]]
        )
        if v.classification == "candidate":
            n_candidates += 1
    expected_conclusion = _search_conclusion(
        cfg["policy"], config, n_candidates
    )
    if cert.conclusion != expected_conclusion:
        return False
    expected_confidence = (
        "probabilistic" if "probabilistic" in methods else "deterministic"
    )
    if cert.confidence != expected_confidence:
        return False
    return True


def _verify_sweep(cert: Certificate) -> bool:
    cfg = cert.config
    try:
        n_max = int(cfg["n_max"])
        rough_required = int(cfg["rough_required"])
    except (KeyError, ValueError, TypeError):
        return False
    results = cert.results
    if results.get("pairs") != _pair_count(n_max):
        return False
    counts = results.get("stage_counts", {})
    survivors = results.get("survivors", [])
    if sum(counts.values()) + len(survivors) != results.get("pairs"):
        return False
    for s in survivors:
        v = check_parameters(s["w"], s["a"], rough_required=rough_required)
        if v.outcome != "not_ruled_out":
            return False
    if survivors:
        expected = f"{len(survivors)} parameter pair(s) with n <= {n_max} not ruled out"
    else:
        expected = f"all admissible (w, a) with n <= {n_max} ruled out by the cascade"
    return cert.conclusion == expected


def verify_certificate(cert) -> bool:
    """Re-validate a certificate's internal consistency.

    Accepts a Certificate or its serialized text.  Re-checks hit
    invariants, primality, classification, and conclusion logic; does not
    re-run the search.  Raises CertificateSchemaError for unknown schemas.
    """
    if isinstance(cert, str):
        cert = Certificate.from_text(cert)
    if cert.kind == "search":
        return _verify_search(cert)
    if cert.kind == "sweep":
        return _verify_sweep(cert)
    return False
