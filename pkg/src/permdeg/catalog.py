"""Shipped reference data: presentations, expected degrees, witnesses.

The data lives in text files under the repository's ``catalog/`` directory
(override with the ``PERMDEG_CATALOG`` environment variable):

* ``catalog/phiNN/<id>.pres``  — presentation files, one group family each;
* ``catalog/expected.tsv``     — one row per family: expected value of the
  minimal faithful permutation degree (kind ``mu``) or quasi-permutation
  degree (kind ``c``), its validity range, and a witness recipe;
* ``catalog/order729_mu.tsv``  — inert reference values for the 504 groups
  of order 3^6 (no construction from library ids is attempted here).

Rows whose mode is ``needs-external`` document families whose value and
witness are recorded but whose presentation is not shipped; they are
skipped by verification until a ``.pres`` file is supplied.
"""

from __future__ import annotations

import itertools
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BudgetExceededError, InputError
from .mindeg import is_faithful, minimal_degree, mu_abelian
from .pcgroup import Element, PcGroup
from .presentation import parse_presentation
from .primes import is_prime
from .quasiperm import (
    induced_irreducible,
    induced_kernel,
    make_char_class,
    minimal_c,
    order_p6_value_sets,
)
from .refine import RefinedGroup, refine
from .structure import (
    Subgroup,
    WorkBudget,
    abelian_invariants,
    center,
    intersect_subgroups,
    normalizer,
    subgroup_pc_group,
)

__all__ = [
    "CatalogEntry",
    "EntryReport",
    "CatalogSummary",
    "catalog_ids",
    "entries",
    "load_entry",
    "load_refined",
    "verify_entry",
    "verify_all",
    "reference_mu_729",
]


# ---------------------------------------------------------------------------
# data location and polynomial evaluation


def _data_root() -> Path:
    env = os.environ.get("PERMDEG_CATALOG")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "catalog"


_POLY_CHARS = re.compile(r"^[0-9p^+\-*() ]+$")


def eval_poly(expr: str, p: int) -> int:
    """Evaluate a degree polynomial such as ``2p^2+p`` at the given prime."""
    s = expr.replace(" ", "")
    if not s or not _POLY_CHARS.match(s):
        raise InputError(f"malformed degree polynomial {expr!r}")
    s = re.sub(r"(\d|\))(?=p|\()", r"\g<0>*", s)  # implicit products: 2p^2, 2(..)
    s = s.replace("^", "**")
    try:
        value = eval(s, {"__builtins__": {}}, {"p": p})  # charset-guarded arithmetic
    except SyntaxError as exc:
        raise InputError(f"malformed degree polynomial {expr!r}") from exc
    if not isinstance(value, int) or value <= 0:
        raise InputError(f"degree polynomial {expr!r} is not positive at p={p}")
    return value


def _slug(entry_id: str) -> str:
    """File stem for an entry id: ``G_(3,23)`` -> ``G_3_23``."""
    return entry_id.replace("(", "").replace(")", "").replace(",", "_")


# ---------------------------------------------------------------------------
# catalog rows


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog row: a group family with its expected degree data.

    ``kind`` is ``mu`` (permutation degree) or ``c`` (quasi-permutation
    degree).  ``mode`` states how much the row pins down:

    * ``exact``          — ``expected`` is the true minimal value and the
      witness (when present) attains it;
    * ``upper-bound``    — the witness attains ``expected`` but the true
      value is only known to lie in ``value_set``;
    * ``value-set``      — only the admissible set is recorded;
    * ``needs-external`` — no presentation is shipped for this family.
    """

    id: str
    family: str
    kind: str  # "mu" | "c"
    mode: str  # "exact" | "upper-bound" | "value-set" | "needs-external"
    validity: str  # e.g. "p>=5", "p==5"
    params: str
    expected: str | None  # polynomial in p, None when unknown
    value_set: tuple[str, ...]  # admissible polynomials, may be empty
    witness: str | None
    note: str

    @property
    def has_presentation(self) -> bool:
        return self.mode != "needs-external"

    def valid_for(self, p: int) -> bool:
        if not is_prime(p) or p == 2:
            return False
        m = re.fullmatch(r"p\s*(==|>=|<=)\s*(\d+)", self.validity)
        if m is None:
            raise InputError(f"unrecognized validity predicate {self.validity!r}")
        bound = int(m.group(2))
        op = m.group(1)
        return (p == bound) if op == "==" else (p >= bound if op == ">=" else p <= bound)

    def expected_value(self, p: int) -> int | None:
        return None if self.expected is None else eval_poly(self.expected, p)

    def value_set_values(self, p: int) -> list[int]:
        return [eval_poly(s, p) for s in self.value_set]

    def presentation_path(self, p: int) -> Path:
        """The presentation file, preferring a prime-specific variant."""
        base = _data_root() / self.family
        variant = base / f"{_slug(self.id)}.p{p}.pres"
        if variant.exists():
            return variant
        return base / f"{_slug(self.id)}.pres"


def _parse_row(parts: list[str]) -> CatalogEntry:
    id_, family, kind, mode, validity, params, expected, value_set, witness, note = parts
    return CatalogEntry(
        id=id_,
        family=family,
        kind=kind,
        mode=mode,
        validity=validity,
        params=params,
        expected=None if expected == "-" else expected,
        value_set=tuple(value_set.split("|")) if value_set != "-" else (),
        witness=None if witness == "-" else witness,
        note=note,
    )


_ENTRIES: dict[str, CatalogEntry] | None = None


def entries(refresh: bool = False) -> dict[str, CatalogEntry]:
    """All catalog rows keyed by id, loaded once from expected.tsv."""
    global _ENTRIES
    if _ENTRIES is None or refresh:
        path = _data_root() / "expected.tsv"
        table: dict[str, CatalogEntry] = {}
        header_seen = False
        for lineno, line in enumerate(path.read_text().splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            if not header_seen:
                header_seen = True  # column header row
                continue
            parts = line.split("\t")
            if len(parts) != 10:
                raise InputError(f"{path.name}:{lineno}: expected 10 columns, got {len(parts)}")
            entry = _parse_row(parts)
            if entry.id in table:
                raise InputError(f"{path.name}:{lineno}: duplicate id {entry.id}")
            table[entry.id] = entry
        _ENTRIES = table
    return _ENTRIES


def catalog_ids(with_presentation: bool | None = None) -> list[str]:
    rows = entries().values()
    if with_presentation is not None:
        rows = [e for e in rows if e.has_presentation == with_presentation]
    return [e.id for e in rows]


# ---------------------------------------------------------------------------
# loading groups


def load_refined(
    entry_id: str, p: int, bindings: dict[str, int] | None = None
) -> tuple[RefinedGroup, CatalogEntry]:
    """Build the group with its named-generator embedding, plus metadata."""
    entry = entries().get(entry_id)
    if entry is None:
        raise InputError(f"unknown catalog id {entry_id!r}")
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if p == 2:
        raise InputError("only odd primes are supported")
    if not entry.valid_for(p):
        raise InputError(f"entry {entry_id} is not valid at p={p} (validity {entry.validity})")
    if not entry.has_presentation:
        raise InputError(
            f"entry {entry_id} has no shipped presentation (needs-external-presentation)"
        )
    text = entry.presentation_path(p).read_text()
    pres = parse_presentation(text, p=p, bindings=bindings)
    return refine(pres, expected_order=p**6), entry


def load_entry(
    entry_id: str, p: int, bindings: dict[str, int] | None = None
) -> tuple[PcGroup, CatalogEntry]:
    """Build the group for a catalog id at a prime; see load_refined."""
    ref, entry = load_refined(entry_id, p, bindings)
    return ref.group, entry


# ---------------------------------------------------------------------------
# witness recipes


_ATOM_RE = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\^(p|\d+))?$")


def _eval_witness_word(ref: RefinedGroup, text: str) -> Element:
    """One product of generator powers, e.g. ``a5^p`` or ``a3*a2*a6^p``."""
    g = ref.group
    acc = g.identity()
    for atom in text.split("*"):
        m = _ATOM_RE.match(atom.strip())
        if m is None:
            raise InputError(f"malformed witness atom {atom!r}")
        name, exp = m.group(1), m.group(2)
        if name not in ref.images:
            raise InputError(f"witness references unknown generator {name!r}")
        e = g.p if exp == "p" else int(exp) if exp else 1
        acc = g.multiply(acc, g.power(ref.images[name], e))
    return acc


def _witness_subgroup(ref: RefinedGroup, text: str) -> Subgroup:
    gens = [_eval_witness_word(ref, chunk) for chunk in text.split(",") if chunk.strip()]
    return Subgroup.generated(ref.group, gens)


@dataclass
class WitnessSpec:
    """Parsed witness column: stabilizer parts and/or character classes."""

    parts: list[str] = field(default_factory=list)  # generator lists
    chars: list[tuple[str, str]] = field(default_factory=list)  # (H gens, K gens)


def parse_witness(text: str) -> WitnessSpec:
    spec = WitnessSpec()
    for clause in text.split("&"):
        clause = clause.strip()
        if clause.startswith("parts="):
            spec.parts.extend(c for c in clause[len("parts=") :].split(";") if c)
        elif clause.startswith("chars="):
            for c in clause[len("chars=") :].split(";"):
                if not c:
                    continue
                if ">" not in c:
                    raise InputError(f"character witness {c!r} lacks '>'")
                h_text, k_text = c.split(">", 1)
                spec.chars.append((h_text, k_text))
        else:
            raise InputError(f"unrecognized witness clause {clause!r}")
    return spec


_TYPE1_RE = re.compile(r"type1:H=([A-Za-z0-9_,]+);valueH=([0-9p^+]+)")


# ---------------------------------------------------------------------------
# verification


@dataclass
class EntryReport:
    """Outcome of verifying one catalog row at one prime."""

    entry_id: str
    p: int
    status: str  # "pass" | "fail" | "skipped"
    mode: str
    reason: str = ""
    checks: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    witness_value: int | None = None
    computed: int | None = None  # exact-search result when requested
    bindings_run: list[dict[str, int]] = field(default_factory=list)

    def format_text(self) -> str:
        head = f"{self.entry_id} p={self.p}: {self.status}"
        if self.reason:
            head += f" ({self.reason})"
        body = [head]
        body += [f"  ok: {c}" for c in self.checks]
        body += [f"  FAIL: {f}" for f in self.failures]
        return "\n".join(body)


def _binding_combos(param_ranges: dict[str, list[int]]) -> list[dict[str, int]]:
    if not param_ranges:
        return [{}]
    names = sorted(param_ranges)
    return [
        dict(zip(names, combo))
        for combo in itertools.product(*(param_ranges[n] for n in names))
    ]


def _check_parts_witness(
    ref: RefinedGroup, entry: CatalogEntry, spec: WitnessSpec, report: EntryReport, p: int
) -> int:
    group = ref.group
    parts = [_witness_subgroup(ref, text) for text in spec.parts]
    faithful, stuck = is_faithful(group, parts)
    if not faithful:
        report.failures.append(
            f"stabilizer witness is not faithful (central element {stuck.exps} fixed)"
        )
    degree = sum(group.order // part.order for part in parts)
    report.checks.append(f"stabilizer witness degree {degree} from {len(parts)} part(s)")
    return degree


def _check_chars_witness(
    ref: RefinedGroup, entry: CatalogEntry, spec: WitnessSpec, report: EntryReport, p: int
) -> int:
    group = ref.group
    total = 0
    meet: Subgroup | None = None
    for h_text, k_text in spec.chars:
        h = Subgroup.full(group) if h_text.strip() == "G" else _witness_subgroup(ref, h_text)
        k = _witness_subgroup(ref, k_text)
        cc = make_char_class(group, h, k)
        n_sub = Subgroup.full(group) if h.rank == group.n else normalizer(group, h)
        if not induced_irreducible(group, cc, n_sub):
            report.failures.append(f"induced class from ({h_text} > {k_text}) is reducible")
        ker = induced_kernel(group, cc)
        meet = ker if meet is None else intersect_subgroups(meet, ker)
        total += cc.value
    if meet is not None and meet.rank != 0:
        report.failures.append("character witness kernels do not intersect trivially")
    report.checks.append(f"character witness total degree {total} from {len(spec.chars)} class(es)")
    return total


def _check_type1(ref: RefinedGroup, entry: CatalogEntry, report: EntryReport, p: int) -> None:
    """Direct-product split check: value(G) = value(H) + value(K) where K is
    generated by the presentation generators omitted from H."""
    m = _TYPE1_RE.search(entry.note)
    if m is None:
        return
    h_names = m.group(1).split(",")
    value_h_expected = eval_poly(m.group(2), p)
    group = ref.group
    sub_h = Subgroup.generated(group, [ref.images[n] for n in h_names])
    omitted = [n for n in ref.presentation.generators if n not in h_names]
    sub_k = Subgroup.generated(group, [ref.images[n] for n in omitted])
    if intersect_subgroups(sub_h, sub_k).rank != 0 or sub_h.order * sub_k.order != group.order:
        report.failures.append("direct-product split is not a complement pair")
        return
    if not all(
        group.conjugate(ref.images[n], b) == ref.images[n]
        for n in omitted
        for b in sub_h.basis
    ):
        report.failures.append("omitted-generator factor is not centralized by the main factor")
        return
    standalone = subgroup_pc_group(sub_h)
    if entry.kind == "mu":
        value_h, _ = minimal_degree(standalone.pc)
    else:
        value_h, _ = minimal_c(standalone.pc)
    value_k = mu_abelian(abelian_invariants(sub_k))
    if value_h != value_h_expected:
        report.failures.append(
            f"main factor value {value_h} != recorded {value_h_expected}"
        )
    expected = entry.expected_value(p)
    if expected is not None and value_h + value_k != expected:
        report.failures.append(
            f"split sum {value_h}+{value_k} != expected {expected}"
        )
    else:
        report.checks.append(
            f"direct-product split: {value_h} + {value_k} matches the expected value"
        )


def verify_entry(
    entry: CatalogEntry | str,
    p: int,
    exact: bool = False,
    budget: WorkBudget | int | None = None,
) -> EntryReport:
    """Witness-level verification of one catalog row at one prime.

    Checks, per binding of the family parameters: the group builds at order
    p^6; the recorded witness is faithful/irreducible and attains the
    expected value (modes ``exact`` and ``upper-bound``); the expected value
    lies in the admissible set keyed by the computed center order.  With
    ``exact=True`` additionally runs the minimal-degree search and compares.
    Witness checks alone never assert optimality; only the exact search does.
    """
    if isinstance(entry, str):
        found = entries().get(entry)
        if found is None:
            raise InputError(f"unknown catalog id {entry!r}")
        entry = found
    report = EntryReport(entry_id=entry.id, p=p, status="pass", mode=entry.mode)
    if not entry.has_presentation:
        report.status = "skipped"
        report.reason = "needs-external-presentation"
        return report
    if not entry.valid_for(p):
        report.status = "skipped"
        report.reason = f"validity {entry.validity}"
        return report

    try:
        probe = parse_presentation(entry.presentation_path(p).read_text(), p=p)
        combos = _binding_combos(probe.param_ranges)
        expected = entry.expected_value(p)
        admissible = entry.value_set_values(p)
        for bindings in combos:
            ref, _ = load_refined(entry.id, p, bindings or None)
            group = ref.group
            report.bindings_run.append(bindings)
            label = f"[{entry.id}{bindings or ''} p={p}]"
            if group.order != p**6:
                report.failures.append(f"{label} group order {group.order} != p^6")
                continue

            witness_value: int | None = None
            if entry.witness is not None:
                spec = parse_witness(entry.witness)
                value = 0
                if spec.parts:
                    value += _check_parts_witness(ref, entry, spec, report, p)
                if spec.chars:
                    value += _check_chars_witness(ref, entry, spec, report, p)
                witness_value = value
                report.witness_value = value
                if expected is not None and value != expected:
                    report.failures.append(
                        f"{label} witness value {value} != expected {expected}"
                    )

            z_order = center(group).order
            sets = order_p6_value_sets(p)
            reference = expected if expected is not None else None
            if reference is not None and z_order in sets and reference not in sets[z_order]:
                report.failures.append(
                    f"{label} expected {reference} outside the admissible set for |Z|={z_order}"
                )
            elif reference is not None and z_order in sets:
                report.checks.append(f"{label} value admissible for center order {z_order}")
            if entry.mode == "value-set" and z_order in sets:
                bad = [v for v in admissible if v not in sets[z_order]]
                if bad:
                    report.failures.append(
                        f"{label} recorded set members {bad} outside the admissible set"
                    )
                else:
                    report.checks.append(
                        f"{label} recorded value set admissible for center order {z_order}"
                    )

            _check_type1(ref, entry, report, p)

            if exact:
                work = budget if isinstance(budget, WorkBudget) else WorkBudget(budget)
                searcher = minimal_degree if entry.kind == "mu" else minimal_c
                computed, _ = searcher(group, budget=work)
                report.computed = computed
                if entry.mode == "exact" and expected is not None and computed != expected:
                    report.failures.append(
                        f"{label} computed minimum {computed} != expected {expected}"
                    )
                elif entry.mode in ("upper-bound", "value-set"):
                    if admissible and computed not in admissible:
                        report.failures.append(
                            f"{label} computed minimum {computed} outside {admissible}"
                        )
                    if witness_value is not None and computed > witness_value:
                        report.failures.append(
                            f"{label} computed minimum {computed} exceeds witness {witness_value}"
                        )
                if not report.failures:
                    report.checks.append(f"{label} exact search agrees: {computed}")
    except BudgetExceededError as exc:
        report.status = "skipped"
        report.reason = f"budget exhausted ({exc})"
        return report
    except Exception as exc:  # surface builder errors as entry failures
        report.failures.append(f"error: {type(exc).__name__}: {exc}")

    if report.failures:
        report.status = "fail"
    return report


@dataclass
class CatalogSummary:
    """Aggregate of entry reports for one prime."""

    p: int
    reports: list[EntryReport]

    @property
    def passed(self) -> list[EntryReport]:
        return [r for r in self.reports if r.status == "pass"]

    @property
    def failed(self) -> list[EntryReport]:
        return [r for r in self.reports if r.status == "fail"]

    @property
    def skipped(self) -> list[EntryReport]:
        return [r for r in self.reports if r.status == "skipped"]

    def format_text(self) -> str:
        lines = [r.format_text() for r in self.reports]
        lines.append(
            f"total: {len(self.passed)} passed, {len(self.failed)} failed, "
            f"{len(self.skipped)} skipped (p={self.p})"
        )
        return "\n".join(lines)


def _verify_worker(args: tuple[str, int, bool, int | None]) -> EntryReport:
    entry_id, p, exact, budget_limit = args
    return verify_entry(entry_id, p, exact=exact, budget=budget_limit)


def verify_all(
    p: int,
    budget: int | None = None,
    exact: bool = False,
    workers: int | None = None,
) -> CatalogSummary:
    """Verify every catalog row at one prime; entries run independently.

    Rows without a shipped presentation and rows outside their validity
    range report as skipped.  Results are ordered by entry id and do not
    depend on the worker count.
    """
    if not is_prime(p) or not 5 <= p <= 97:
        raise InputError("catalog verification expects a prime with 5 <= p <= 97")
    ids = sorted(entries())
    jobs = [(entry_id, p, exact, budget) for entry_id in ids]
    if workers is None:
        workers = os.process_cpu_count() or 1
    if workers <= 1 or len(jobs) <= 1:
        reports = [_verify_worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_verify_worker, jobs))
    reports.sort(key=lambda r: r.entry_id)
    return CatalogSummary(p=p, reports=reports)


# ---------------------------------------------------------------------------
# order-3^6 reference table


def reference_mu_729() -> dict[int, int]:
    """Library id -> reference permutation degree for the groups of order 3^6.

    Inert data: no group construction from library ids is attempted."""
    path = _data_root() / "order729_mu.tsv"
    table: dict[int, int] = {}
    header_seen = False
    for line in path.read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        if not header_seen:
            header_seen = True
            continue
        degree_text, ids_text = line.split("\t")
        for id_text in ids_text.split(","):
            gid = int(id_text)
            if gid in table:
                raise InputError(f"duplicate library id {gid} in order729_mu.tsv")
            table[gid] = int(degree_text)
    return table
