"""Minimal faithful permutation degree of a pc group, with certificates.

A permutation representation is a disjoint union of coset actions on
subgroups H_1 .. H_m; it is faithful iff the cores of the parts intersect
trivially, and its degree is the sum of the indices.  Faithfulness only
needs to kill the socle floor O = Omega(Z(G)) (every nontrivial normal
subgroup of a p-group meets it), and because O is central,

    Core_G(H) ∩ O  =  H ∩ O,

so each candidate subgroup H contributes the point (|G:H|, H ∩ O as a
subspace of O ≅ GF(p)^d).  The search is a branch-and-bound over sets of
such candidates whose subspaces intersect in 0, streamed from the subgroup
conjugacy-class lattice in increasing index order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import intersect_spaces, rref
from .pcgroup import Element, PcGroup
from .structure import (
    Subgroup,
    WorkBudget,
    abelian_quotient,
    coset_representatives,
    coset_representative,
    intersect_subgroups,
    maximal_subgroups,
    normal_core,
    omega_of_center,
    subgroup_orbit,
)


@dataclass
class PermRep:
    """A concrete permutation representation: one permutation per pc
    generator, acting on the disjoint union of coset spaces."""

    group: PcGroup
    degree: int
    images: list[tuple[int, ...]]  # images[i][point] = point * g_i
    block_sizes: list[int]

    def permutation_of(self, x: Element) -> tuple[int, ...]:
        """The permutation of an arbitrary element: with the left action
        pi(ab) = pi(a) o pi(b), the normal form letters compose left to
        right as pi := pi o pi(letter)."""
        perm = list(range(self.degree))
        for i, e in enumerate(x.exps):
            img = self.images[i]
            for _ in range(e):
                perm = [perm[q] for q in img]
        return tuple(perm)

    def is_faithful(self) -> bool:
        """Faithfulness by direct evaluation on the socle floor: the kernel
        is a normal subgroup, so it is trivial iff no nontrivial central
        element of order p acts as the identity.  Walks all socle elements
        as powers of the basis permutations."""
        omega = omega_of_center(self.group)
        if omega.rank == 0:
            return True
        basis_perms = [list(self.permutation_of(b)) for b in omega.basis]
        ident = list(range(self.degree))
        p = self.group.p

        def clear(j: int, perm: list[int], nontrivial: bool) -> bool:
            if j == len(basis_perms):
                return not nontrivial or perm != ident
            acc = perm
            for e in range(p):
                if not clear(j + 1, acc, nontrivial or e > 0):
                    return False
                if e < p - 1:
                    acc = [acc[q] for q in basis_perms[j]]
            return True

        return clear(0, ident, False)

    def export_text(self) -> str:
        lines = [f"degree {self.degree}"]
        for img in self.images:
            lines.append(" ".join(str(pt) for pt in img))
        return "\n".join(lines) + "\n"


@dataclass
class DegreeCertificate:
    """A faithful part-set achieving a permutation degree."""

    degree: int
    parts: list[Subgroup]


def coset_action(group: PcGroup, parts: list[Subgroup]) -> PermRep:
    """Left multiplication action on the disjoint union of coset spaces."""
    offsets = []
    block_sizes = []
    all_reps: list[tuple[Subgroup, list[Element], dict]] = []
    total = 0
    for part in parts:
        reps = coset_representatives(part)
        positions = {r.exps: k for k, r in enumerate(reps)}
        offsets.append(total)
        block_sizes.append(len(reps))
        all_reps.append((part, reps, positions))
        total += len(reps)
    images = []
    for i in range(group.n):
        g = group.generator(i)
        perm = [0] * total
        for off, (part, reps, positions) in zip(offsets, all_reps):
            for k, r in enumerate(reps):
                moved = coset_representative(part, group.multiply(g, r))
                perm[off + k] = off + positions[moved.exps]
        images.append(tuple(perm))

    def word_perm(word) -> list[int]:
        perm = list(range(total))
        for j, e in word:
            img = images[j]
            for _ in range(e):
                perm = [perm[q] for q in img]
        return perm

    # the generator images must satisfy every defining relation
    for i in range(group.n):
        if word_perm(((i, group.p),)) != word_perm(group.powers.get(i, ())):
            raise AssertionError("coset action violates a power relation")
    for (j, i), w in group.conjugates.items():
        if word_perm(((j, 1), (i, 1))) != word_perm(((i, 1),) + tuple(w)):
            raise AssertionError("coset action violates a conjugation relation")
    return PermRep(group=group, degree=total, images=images, block_sizes=block_sizes)


def is_faithful(group: PcGroup, parts: list[Subgroup]) -> tuple[bool, Element | None]:
    """Whether the cores of the parts intersect trivially; when they do not,
    the witness is a nontrivial element lying in every core."""
    if not parts:
        return group.n == 0, (None if group.n == 0 else _socle_witness(group))
    common = normal_core(group, parts[0])
    for part in parts[1:]:
        common = intersect_subgroups(common, normal_core(group, part))
        if common.rank == 0:
            return True, None
    if common.rank == 0:
        return True, None
    return False, common.basis[-1]


def _socle_witness(group: PcGroup) -> Element:
    return omega_of_center(group).basis[0]


def mu_abelian(invariants) -> int:
    """Minimal faithful permutation degree of the abelian group with the
    given multiset of cyclic invariant orders: their sum.  The trivial
    group (no invariants) acts faithfully on a single point."""
    total = sum(invariants)
    return total if total else 1


def mu_direct_product(mu_h: int, mu_k: int) -> int:
    """Degree of a direct product from the degrees of its two factors
    (additive; both factors must be nontrivial)."""
    return mu_h + mu_k


def _abelian_certificate(group: PcGroup) -> tuple[int, DegreeCertificate]:
    """Optimal part-set for an abelian group: drop one invariant generator
    at a time, so each part is a complementary coordinate kernel."""
    full = Subgroup.full(group)
    decomp = abelian_quotient(full)
    if not decomp.invariants:
        return 1, DegreeCertificate(degree=1, parts=[full])
    parts = []
    for skip in range(len(decomp.generators)):
        gens = [x for t, x in enumerate(decomp.generators) if t != skip]
        parts.append(Subgroup.generated(group, gens))
    degree = mu_abelian(decomp.invariants)
    cert = DegreeCertificate(degree=degree, parts=parts)
    return degree, cert


# ---------------------------------------------------------------------------
# socle subspace bookkeeping


class _SocleSpace:
    """Coordinates on O = Omega(Z(G)) ≅ GF(p)^d and subgroup-to-subspace
    mapping (rows are in reduced echelon form; the tuple is a canonical key).
    """

    def __init__(self, group: PcGroup):
        self.group = group
        self.omega = omega_of_center(group)
        self.dim = self.omega.rank

    def subspace_of(self, sub: Subgroup) -> tuple[tuple[int, ...], ...]:
        meet = intersect_subgroups(sub, self.omega)
        rows = []
        for b in meet.basis:
            vec = self.omega.coords(b)
            if vec is None:
                raise AssertionError("socle intersection left the socle")
            rows.append(vec)
        rrows, _ = rref(rows, self.group.p)
        return tuple(tuple(r) for r in rrows)

    def full_space(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim))

    def meet(self, a, b) -> tuple[tuple[int, ...], ...]:
        rows = intersect_spaces([list(r) for r in a], [list(r) for r in b],
                                self.group.p, self.dim)
        return tuple(tuple(r) for r in rows)


def _greedy_upper_bound(group: PcGroup, space: _SocleSpace, budget: WorkBudget | None):
    """A quick faithful part-set: repeatedly avoid one socle direction by
    descending through maximal subgroups, shrinking the uncovered space."""
    parts: list[Subgroup] = []
    uncovered = space.full_space()
    while uncovered:
        target_vec = uncovered[0]
        target = space.omega.element_from_coords(target_vec)
        sub = Subgroup.full(group)
        while sub.contains(target):
            maximals = maximal_subgroups(sub)
            if budget is not None:
                budget.tick(len(maximals))
            avoiding = [m for m in maximals if not m.contains(target)]
            sub = avoiding[0] if avoiding else maximals[0]
        parts.append(sub)
        uncovered = space.meet(uncovered, space.subspace_of(sub))
    return parts


def _stream_candidates(group: PcGroup, space: _SocleSpace, cutoff, budget):
    """Yield per level: lists of (index, subspace key, Subgroup), descending
    the class lattice; V = 0 classes are not expanded (their descendants are
    dominated), and levels past cutoff() are not generated."""
    level = [(Subgroup.full(group), space.full_space())]
    seen: set[tuple] = set()  # keys of every subgroup in every computed orbit
    index = 1
    while level:
        yield [(index, v, sub) for sub, v in level]
        index *= group.p
        if index > cutoff():
            return
        found: dict[tuple, tuple[Subgroup, tuple]] = {}
        for sub, v in level:
            if not v:
                continue  # already core-free: descendants are dominated
            for maximal in maximal_subgroups(sub):
                if budget is not None:
                    budget.tick()
                if maximal.key() in seen:
                    continue
                orbit = subgroup_orbit(maximal)
                if budget is not None:
                    budget.tick(len(orbit) - 1)
                seen.update(orbit)
                canon = min(orbit)
                rep = orbit[canon]
                found[canon] = (rep, space.subspace_of(rep))
        level = [found[k] for k in sorted(found)]


def minimal_degree(
    group: PcGroup, budget: WorkBudget | int | None = None
) -> tuple[int, DegreeCertificate]:
    """Exact minimal faithful permutation degree with a certificate.

    Searches part-sets over subgroup conjugacy classes: each class is the
    point (index, H ∩ O) and a set is faithful iff the subspaces meet in 0.
    Raises BudgetExceededError (carrying the best bound proven) if the work
    budget runs out first.
    """
    if isinstance(budget, int):
        budget = WorkBudget(budget)
    if group.n == 0:
        return 1, DegreeCertificate(degree=1, parts=[Subgroup.full(group)])
    if all(w.is_identity() for w in _generator_commutators(group)):
        return _abelian_certificate(group)

    space = _SocleSpace(group)
    d = space.dim
    p = group.p

    parts = _greedy_upper_bound(group, space, budget)
    best_sum = sum(part.index for part in parts)
    best_parts = list(parts)
    if budget is not None:
        budget.best_bound = best_sum

    # candidates deduped by (index, subspace); kept sorted by index then key
    candidates: list[tuple[int, tuple, Subgroup]] = []
    seen_points: set[tuple] = set()

    # any strict improvement consists of parts of index at least p (the whole
    # group shrinks nothing), at most d of them, so no useful part's index
    # exceeds (best_sum - 1) - p * (d - 1)
    def cutoff() -> int:
        return best_sum - 1 - p * (d - 1)

    stream = _stream_candidates(group, space, cutoff, budget)
    for level in stream:
        fresh = False
        for index, v, sub in level:
            if len(v) == d:
                continue  # drops nothing, never useful
            point = (index, v)
            if point in seen_points:
                continue
            seen_points.add(point)
            candidates.append((index, v, sub))
            fresh = True
        if not fresh:
            continue
        candidates.sort(key=lambda c: (c[0], c[1], c[2].key()))
        found = _search_cover(space, candidates, best_sum)
        if found is not None:
            best_sum, best_parts = found
            if budget is not None:
                budget.best_bound = best_sum

    cert = DegreeCertificate(degree=best_sum, parts=best_parts)
    return best_sum, cert


def _generator_commutators(group: PcGroup):
    gens = group.generators()
    for t, a in enumerate(gens):
        for b in gens[t + 1 :]:
            yield group.commutator(a, b)


def _search_cover(space: _SocleSpace, candidates, best_sum):
    """Depth-first cover search: find a set of candidates whose subspaces
    intersect in 0 with total index strictly below best_sum; returns the
    improved (sum, parts) or None.  Candidates are sorted ascending by
    index, so once partial + next index reaches the bound the whole
    remaining suffix is hopeless."""
    best: list = [best_sum, None]

    def dfs(w, start: int, partial: int, chosen: list[Subgroup]) -> None:
        if not w:
            best[0] = partial
            best[1] = list(chosen)
            return
        for k in range(start, len(candidates)):
            index, v, sub = candidates[k]
            if partial + index >= best[0]:
                break
            meet = space.meet(w, v)
            if len(meet) == len(w):
                continue
            chosen.append(sub)
            dfs(meet, k + 1, partial + index, chosen)
            chosen.pop()

    dfs(space.full_space(), 0, 0, [])
    if best[1] is None:
        return None
    return best[0], best[1]
