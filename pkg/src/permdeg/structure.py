"""Subgroup structure for pc groups: induced generating sequences and the
derived machinery (closure, membership, intersection, core, center, derived
and Frattini subgroups, abelian decompositions, coset actions, conjugacy
orbits, and a budgeted stream of subgroup conjugacy classes).

A subgroup is stored as an echelonized induced generating sequence (IGS):
basis elements with strictly increasing leading indices, leading exponent 1,
and zero entries at the other basis pivots.  That form is canonical, so two
subgroups are equal iff their basis exponent tables are equal.  Everything
rests on the pc filtration: the tail subgroups <g_k, ..., g_n> are normal,
left-dividing by a basis element never disturbs coordinates before its
pivot, and right-multiplying never disturbs coordinates before the
multiplier's leading index.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian

from .errors import BudgetExceededError, InputError
from .linalg import int_matrix_inverse, nullspace, smith_normal_form
from .pcgroup import Element, PcGroup, vector_to_word


class WorkBudget:
    """Counts units of subgroup work; raises once the limit is exceeded.

    The search that owns the budget keeps ``best_bound`` updated so that an
    exhaustion error still reports the best value proven so far.
    """

    def __init__(self, limit: int | None):
        self.limit = limit
        self.count = 0
        self.best_bound: int | None = None

    def tick(self, amount: int = 1) -> None:
        self.count += amount
        if self.limit is not None and self.count > self.limit:
            raise BudgetExceededError(
                f"work budget of {self.limit} exhausted", self.count, self.best_bound
            )


# ---------------------------------------------------------------------------
# sifting and closure


def _sift(ops, table: dict[int, Element], x: Element) -> Element:
    """Reduce x by the echelon table; the residue is identity iff x is in
    the span of the table's normal forms."""
    while not x.is_identity():
        i = x.leading_index()
        b = table.get(i)
        if b is None:
            return x
        x = ops.multiply(ops.power(b, -x.exps[i]), x)
    return x


def _close_table(ops, gens, conj_by=None, table=None) -> dict[int, Element]:
    """Echelon table of the subgroup generated by gens, closed under p-th
    powers and mutual conjugation (and under conjugation by conj_by, giving
    the normal closure with respect to those elements).  An existing closed
    table may be passed to extend in place with the new generators."""
    if table is None:
        table = {}
    queue = list(gens)
    p = ops.p
    while queue:
        x = _sift(ops, table, queue.pop())
        if x.is_identity():
            continue
        i = x.leading_index()
        x = ops.power(x, pow(x.exps[i], -1, p))
        table[i] = x
        queue.append(ops.power(x, p))
        for j, b in list(table.items()):
            if j != i:
                queue.append(ops.conjugate(b, x))
                queue.append(ops.conjugate(x, b))
        if conj_by:
            for c in conj_by:
                queue.append(ops.conjugate(x, c))
    return table


def _back_reduce(ops, table: dict[int, Element]) -> tuple[Element, ...]:
    """Canonical ordered basis: clear every basis element's entries at the
    deeper pivots (right-multiplication keeps earlier coordinates intact)."""
    pivots = sorted(table)
    basis = [table[i] for i in pivots]
    for t in range(len(basis) - 2, -1, -1):
        x = basis[t]
        for s in range(t + 1, len(basis)):
            e = x.exps[pivots[s]]
            if e:
                x = ops.multiply(x, ops.power(basis[s], -e))
        basis[t] = x
    return tuple(basis)


class Subgroup:
    """A subgroup of a PcGroup, held as a canonical echelonized IGS."""

    __slots__ = ("group", "basis", "_pivots")

    def __init__(self, group: PcGroup, basis: tuple[Element, ...]):
        self.group = group
        self.basis = basis
        self._pivots = {b.leading_index(): t for t, b in enumerate(basis)}

    # -- construction --------------------------------------------------------

    @staticmethod
    def generated(group: PcGroup, gens, normal_under=None) -> "Subgroup":
        table = _close_table(group, list(gens), conj_by=normal_under)
        return Subgroup(group, _back_reduce(group, table))

    @staticmethod
    def trivial(group: PcGroup) -> "Subgroup":
        return Subgroup(group, ())

    @staticmethod
    def full(group: PcGroup) -> "Subgroup":
        return Subgroup(group, tuple(group.generators()))

    # -- basic queries ---------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return self.group.p ** len(self.basis)

    @property
    def index(self) -> int:
        return self.group.p ** (self.group.n - len(self.basis))

    def key(self) -> tuple:
        return tuple(b.exps for b in self.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.group is other.group
            and self.key() == other.key()
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Subgroup(order=p^{len(self.basis)})"

    def pivots(self) -> list[int]:
        return [b.leading_index() for b in self.basis]

    def contains(self, x: Element) -> bool:
        table = {b.leading_index(): b for b in self.basis}
        return _sift(self.group, table, x).is_identity()

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.contains(b) for b in other.basis)

    def coords(self, x: Element) -> list[int] | None:
        """Exponents of x over the IGS basis (None when x is not a member)."""
        vec = [0] * len(self.basis)
        g = self.group
        while not x.is_identity():
            i = x.leading_index()
            t = self._pivots.get(i)
            if t is None:
                return None
            e = x.exps[i]
            vec[t] = e
            x = g.multiply(g.power(self.basis[t], -e), x)
        return vec

    def element_from_coords(self, vec) -> Element:
        g = self.group
        acc = g.identity()
        for b, e in zip(self.basis, vec):
            if e:
                acc = g.multiply(acc, g.power(b, e))
        return acc

    def elements(self):
        """All members, in lexicographic order of their IGS coordinates."""
        g = self.group
        out = [g.identity()]
        for b in self.basis:
            powers = [g.power(b, e) for e in range(g.p)]
            out = [g.multiply(x, bp) for x in out for bp in powers]
        return out

    # -- actions ----------------------------------------------------------------

    def conjugate(self, by: Element) -> "Subgroup":
        """Image under conjugation; echelon insertion suffices because the
        conjugated basis is independent (its size equals the rank)."""
        g = self.group
        cache_key = (self.key(), by.exps)
        cached = g._subgroup_conj_cache.get(cache_key)
        if cached is not None:
            return Subgroup(g, tuple(Element(g, exps) for exps in cached))
        table: dict[int, Element] = {}
        for b in self.basis:
            x = _sift(g, table, g.conjugate(b, by))
            if x.is_identity():
                raise AssertionError("conjugated basis collapsed")
            i = x.leading_index()
            table[i] = g.power(x, pow(x.exps[i], -1, g.p))
        image = Subgroup(g, _back_reduce(g, table))
        g._subgroup_conj_cache[cache_key] = tuple(b.exps for b in image.basis)
        return image

    def is_normal(self) -> bool:
        return all(
            self.contains(self.group.conjugate(b, g))
            for b in self.basis
            for g in self.group.generators()
        )

    def is_abelian(self) -> bool:
        return all(
            self.group.commutator(a, b).is_identity()
            for t, a in enumerate(self.basis)
            for b in self.basis[t + 1 :]
        )

    def is_central(self) -> bool:
        return all(
            self.group.commutator(b, g).is_identity()
            for b in self.basis
            for g in self.group.generators()
        )


# ---------------------------------------------------------------------------
# quotient-by-normal-subgroup arithmetic on canonical coset representatives


class QuotientOps:
    """Group operations on canonical left-coset representatives modulo a
    normal subgroup.  Representatives are ambient elements with zero entries
    at the modulus pivots, so the sifting machinery runs on them unchanged.
    """

    def __init__(self, group: PcGroup, modulus: Subgroup):
        self.group = group
        self.modulus = modulus
        self.p = group.p
        self.n = group.n
        self._table = {b.leading_index(): b for b in modulus.basis}

    def rep(self, x: Element) -> Element:
        g = self.group
        for i in sorted(self._table):
            e = x.exps[i]
            if e:
                x = g.multiply(x, g.power(self._table[i], -e))
        return x

    def identity(self) -> Element:
        return self.group.identity()

    def multiply(self, a: Element, b: Element) -> Element:
        return self.rep(self.group.multiply(a, b))

    def power(self, a: Element, k: int) -> Element:
        return self.rep(self.group.power(a, k))

    def inverse(self, a: Element) -> Element:
        return self.rep(self.group.inverse(a))

    def conjugate(self, a: Element, by: Element) -> Element:
        return self.rep(self.group.conjugate(a, by))

    def commutator(self, a: Element, b: Element) -> Element:
        return self.rep(self.group.commutator(a, b))

    @property
    def order(self) -> int:
        return self.group.order // self.modulus.order


# ---------------------------------------------------------------------------
# distinguished subgroups


def derived_subgroup(group: PcGroup) -> Subgroup:
    gens = group.generators()
    comms = [
        group.commutator(a, b) for t, a in enumerate(gens) for b in gens[t + 1 :]
    ]
    return Subgroup.generated(group, comms, normal_under=gens)


def derived_of_subgroup(sub: Subgroup) -> Subgroup:
    g = sub.group
    comms = [
        g.commutator(a, b)
        for t, a in enumerate(sub.basis)
        for b in sub.basis[t + 1 :]
    ]
    return Subgroup.generated(g, comms, normal_under=list(sub.basis))


def frattini_of_subgroup(sub: Subgroup) -> Subgroup:
    """Frattini subgroup of a subgroup: its derived subgroup joined with the
    p-th powers of its basis (for p-groups that join is the Frattini)."""
    g = sub.group
    gens = [g.power(b, g.p) for b in sub.basis]
    gens += [
        g.commutator(a, b)
        for t, a in enumerate(sub.basis)
        for b in sub.basis[t + 1 :]
    ]
    return Subgroup.generated(g, gens, normal_under=list(sub.basis))


def _drop_last_quotient(group: PcGroup) -> PcGroup:
    """The quotient by the (always central, order p) last pc generator."""
    m = group.n - 1
    powers = {}
    for i, w in group.powers.items():
        if i < m:
            word = tuple((j, e) for j, e in w if j < m)
            if word:
                powers[i] = word
    conjugates = {}
    for (j, i), w in group.conjugates.items():
        if j < m:
            word = tuple((k, e) for k, e in w if k < m)
            if word and word != ((j, 1),):
                conjugates[(j, i)] = word
    return PcGroup(
        p=group.p, n=m, powers=powers, conjugates=conjugates, weights=list(group.weights[:m])
    )


def center(group: PcGroup) -> Subgroup:
    """Center, via recursion on the central order-p quotient by g_n.

    The center maps into the center of the quotient; on that preimage P the
    maps x -> [x, g_i] are homomorphisms into <g_n> = C_p, linear in the IGS
    coordinates of P, so the center is the kernel of a small matrix.
    """
    if group.n <= 1:
        return Subgroup.full(group)
    quo = _drop_last_quotient(group)
    zq = center(quo)
    lifted = [group.element(b.exps + (0,)) for b in zq.basis]
    pbasis = lifted + [group.generator(group.n - 1)]
    rows = []
    for i in range(group.n):
        gi = group.generator(i)
        row = []
        for b in pbasis:
            c = group.commutator(b, gi)
            if any(c.exps[:-1]):
                raise AssertionError("commutator left the central layer")
            row.append(c.exps[-1])
        rows.append(row)
    gens = [
        _product_of_powers(group, pbasis, v)
        for v in nullspace(rows, group.p, len(pbasis))
    ]
    return Subgroup.generated(group, gens)


def _product_of_powers(group: PcGroup, elements, exponents) -> Element:
    acc = group.identity()
    for b, e in zip(elements, exponents):
        if e:
            acc = group.multiply(acc, group.power(b, e))
    return acc


# ---------------------------------------------------------------------------
# intersection and core


def _close_with_shadows(quo_ops, group: PcGroup, pairs):
    """Closure in the quotient with each image element carrying a concrete
    ambient preimage (shadow); used to pull intersections back up a layer."""
    table: dict[int, tuple[Element, Element]] = {}
    queue = list(pairs)
    p = quo_ops.p
    while queue:
        img, sh = queue.pop()
        while not img.is_identity():
            i = img.leading_index()
            entry = table.get(i)
            if entry is None:
                break
            bimg, bsh = entry
            e = img.exps[i]
            img = quo_ops.multiply(quo_ops.power(bimg, -e), img)
            sh = group.multiply(group.power(bsh, -e), sh)
        if img.is_identity():
            continue
        i = img.leading_index()
        t = pow(img.exps[i], -1, p)
        img, sh = quo_ops.power(img, t), group.power(sh, t)
        table[i] = (img, sh)
        queue.append((quo_ops.power(img, p), group.power(sh, p)))
        for j, (bimg, bsh) in list(table.items()):
            if j != i:
                queue.append((quo_ops.conjugate(bimg, img), group.conjugate(bsh, sh)))
                queue.append((quo_ops.conjugate(img, bimg), group.conjugate(sh, bsh)))
    return table


def _express_shadow(quo_ops, group: PcGroup, table, target: Element) -> Element:
    """An ambient element whose image is target, as a product of shadows."""
    acc = group.identity()
    x = target
    while not x.is_identity():
        i = x.leading_index()
        bimg, bsh = table[i]
        e = x.exps[i]
        x = quo_ops.multiply(quo_ops.power(bimg, -e), x)
        acc = group.multiply(acc, group.power(bsh, e))
    return acc


def intersect_subgroups(a: Subgroup, b: Subgroup) -> Subgroup:
    """Intersection, by recursion on the quotient modulo the last generator.

    A basis of the intersection downstairs lifts to pairs (x, y) with x in A,
    y in B differing by a central scalar of <g_n>; because that layer is
    central the scalars combine linearly, so matching them is one linear
    congruence.
    """
    group = a.group
    if a.rank == group.n:
        return b
    if b.rank == group.n:
        return a
    if a.rank == 0 or b.rank == 0:
        return Subgroup.trivial(group)
    if b.contains_subgroup(a):
        return a
    if a.contains_subgroup(b):
        return b

    quo = _drop_last_quotient(group)
    last = group.n - 1
    glast = group.generator(last)
    in_a, in_b = a.contains(glast), b.contains(glast)

    def drop(x: Element) -> Element:
        return quo.element(x.exps[:last])

    a_table = _close_with_shadows(quo, group, [(drop(x), x) for x in a.basis])
    b_table = _close_with_shadows(quo, group, [(drop(x), x) for x in b.basis])
    a_bar = Subgroup(quo, _back_reduce(quo, {i: t[0] for i, t in a_table.items()}))
    b_bar = Subgroup(quo, _back_reduce(quo, {i: t[0] for i, t in b_table.items()}))
    c_bar = intersect_subgroups(a_bar, b_bar)

    lifts = []
    for cb in c_bar.basis:
        x = _express_shadow(quo, group, a_table, cb)
        y = _express_shadow(quo, group, b_table, cb)
        delta = group.multiply(x, group.inverse(y))
        if any(delta.exps[:last]):
            raise AssertionError("shadow mismatch outside the central layer")
        lifts.append((x, y, delta.exps[last]))

    gens: list[Element] = []
    if in_a and in_b:
        gens.append(glast)
    if in_b:
        gens.extend(x for x, _, _ in lifts)
    elif in_a:
        gens.extend(y for _, y, _ in lifts)
    else:
        row = [d for _, _, d in lifts]
        for v in nullspace([row], group.p, len(lifts)):
            gens.append(_product_of_powers(group, [x for x, _, _ in lifts], v))
    return Subgroup.generated(group, gens)


def normal_core(group: PcGroup, sub: Subgroup) -> Subgroup:
    """Largest normal subgroup of the group inside sub: repeatedly intersect
    with generator conjugates until stable."""
    current = sub
    gens = group.generators()
    while True:
        changed = False
        for g in gens:
            conj = current.conjugate(g)
            if conj.key() != current.key():
                current = intersect_subgroups(current, conj)
                changed = True
        if not changed:
            return current


# ---------------------------------------------------------------------------
# abelian structure


@dataclass
class SubgroupPresentation:
    """A subgroup rebuilt as a standalone pc group, with coordinate maps."""

    subgroup: Subgroup
    pc: PcGroup

    def to_pc(self, x: Element) -> Element:
        vec = self.subgroup.coords(x)
        if vec is None:
            raise InputError("element is not in the subgroup")
        return self.pc.element(tuple(vec))

    def from_pc(self, el: Element) -> Element:
        return self.subgroup.element_from_coords(el.exps)


def subgroup_pc_group(sub: Subgroup) -> SubgroupPresentation:
    """Present a subgroup on its own IGS.  The pc axioms hold because the
    basis is echelonized along a central filtration: powers and commutators
    of basis elements always sift into the strictly deeper basis tail."""
    g = sub.group
    k = len(sub.basis)
    powers = {}
    conjugates = {}
    for t, b in enumerate(sub.basis):
        vec = sub.coords(g.power(b, g.p))
        if vec is None or any(vec[: t + 1]):
            raise AssertionError("basis power escaped the deeper tail")
        word = vector_to_word(tuple(vec))
        if word:
            powers[t] = word
    for i in range(k):
        for j in range(i + 1, k):
            vec = sub.coords(g.conjugate(sub.basis[j], sub.basis[i]))
            if vec is None or any(vec[:j]) or vec[j] != 1:
                raise AssertionError("basis conjugate escaped the deeper tail")
            word = vector_to_word(tuple(vec))
            if word != ((j, 1),):
                conjugates[(j, i)] = word
    pc = PcGroup(p=g.p, n=k, powers=powers, conjugates=conjugates)
    return SubgroupPresentation(subgroup=sub, pc=pc)


@dataclass
class AbelianQuotient:
    """H modulo K*[H,H]: cyclic invariants, generators, and coordinates.

    invariants: the nontrivial cyclic orders d_1 | d_2 | ... (powers of p).
    generators: ambient elements mapping to generators of each factor.
    The quotient equals H/K exactly when K contains [H,H]; callers check
    that via |H|/|K| == product(invariants).
    """

    sub: Subgroup
    kernel: Subgroup
    invariants: list[int]
    generators: list[Element]
    _pres: SubgroupPresentation
    _v: list[list[int]]
    _factors: list[int]

    def coords(self, x: Element) -> tuple[int, ...]:
        """Image of x (a member of H) as residues over the cyclic factors."""
        vec = self.sub.coords(x)
        if vec is None:
            raise InputError("element is not in the subgroup")
        out = []
        for pos, d in zip(self._factors, self.invariants):
            y = sum(vec[s] * self._v[s][pos] for s in range(len(vec)))
            out.append(y % d)
        return tuple(out)


def abelian_quotient(sub: Subgroup, kernel: Subgroup | None = None) -> AbelianQuotient:
    """Smith decomposition of H/(K*[H,H]) with explicit generators."""
    g = sub.group
    if kernel is None:
        kernel = Subgroup.trivial(g)
    pres = subgroup_pc_group(sub)
    k = pres.pc.n
    rows = []
    for t in range(k):
        row = [0] * k
        row[t] = g.p
        for j, e in pres.pc.powers.get(t, ()):
            row[j] -= e
        rows.append(row)
    for (j, i), w in pres.pc.conjugates.items():
        row = [0] * k
        row[j] -= 1
        for jj, e in w:
            row[jj] += e
        if any(row):
            rows.append(row)
    for b in kernel.basis:
        vec = sub.coords(b)
        if vec is None:
            raise InputError("kernel is not contained in the subgroup")
        rows.append(list(vec))
    if not rows:
        rows = [[0] * k] if k else [[]]
    d_mat, _u, v_mat = smith_normal_form(rows)
    diag = [d_mat[t][t] if t < len(d_mat) and t < len(d_mat[t]) else 0 for t in range(k)]
    if any(d == 0 for d in diag):
        raise AssertionError("abelian section is not finite")
    vinv = int_matrix_inverse(v_mat) if k else []
    factors = [t for t in range(k) if diag[t] > 1]
    invariants = [diag[t] for t in factors]
    generators = [sub.element_from_coords(list(vinv[t])) for t in factors]
    return AbelianQuotient(
        sub=sub,
        kernel=kernel,
        invariants=invariants,
        generators=generators,
        _pres=pres,
        _v=v_mat,
        _factors=factors,
    )


def abelian_invariants(sub: Subgroup) -> list[int]:
    """Cyclic invariant orders of an abelian subgroup (ascending)."""
    if not sub.is_abelian():
        raise InputError("subgroup is not abelian")
    return sorted(abelian_quotient(sub).invariants)


def omega_of_center(group: PcGroup) -> Subgroup:
    """The subgroup of central elements of order dividing p (an elementary
    abelian group: the common socle floor used by the degree searches)."""
    z = center(group)
    decomp = abelian_quotient(z)
    gens = [
        group.power(el, d // group.p)
        for el, d in zip(decomp.generators, decomp.invariants)
    ]
    return Subgroup.generated(group, gens)


def lower_central_class(group: PcGroup) -> int:
    """True nilpotency class via the lower central series."""
    gens = group.generators()
    current = Subgroup.full(group)
    cls = 0
    while current.rank > 0:
        cls += 1
        comms = [group.commutator(b, g) for b in current.basis for g in gens]
        current = Subgroup.generated(group, comms, normal_under=gens)
    return max(cls, 1)


def exponent(group: PcGroup) -> int:
    """Group exponent.  Below class p the group is regular, so the maximum
    generator order is the exponent; otherwise (only reachable for p = 3, 5
    within the p^6 cap) fall back to scanning element orders."""
    if group.n == 0:
        return 1
    if lower_central_class(group) < group.p:
        return max(group.order_of(g) for g in group.generators())
    return max(group.order_of(x) for x in group.all_elements())


# ---------------------------------------------------------------------------
# cosets and orbits


def coset_representatives(sub: Subgroup) -> list[Element]:
    """Canonical representatives of the left cosets xH: exponent vectors
    supported off the basis pivots, in lexicographic order."""
    g = sub.group
    pivots = set(sub.pivots())
    free = [i for i in range(g.n) if i not in pivots]
    reps = []
    for combo in _cartesian(range(g.p), repeat=len(free)):
        vec = [0] * g.n
        for i, e in zip(free, combo):
            vec[i] = e
        reps.append(g.element(tuple(vec)))
    return reps

def coset_representative(sub: Subgroup, x: Element) -> Element:
    """The canonical representative of xH (right-reduce by the IGS)."""
    g = sub.group
    for b in sub.basis:
        e = x.exps[b.leading_index()]
        if e:
            x = g.multiply(x, g.power(b, -e))
    return x


def orbit_and_stabilizer(
    group: PcGroup,
    seed,
    act,
    budget: WorkBudget | None = None,
    domain: "Subgroup | None" = None,
):
    """Orbit of a hashable point under the generator action, plus the
    stabilizer assembled from Schreier generators.

    act(point, g) must return the image point; points must hash/compare by
    value.  When domain is given, the acting set is that subgroup (its
    basis generates the action).  Returns (orbit dict point -> transversal
    element u with seed^u = point, stabilizer Subgroup).
    """
    orbit = {seed: group.identity()}
    frontier = [seed]
    gens = group.generators() if domain is None else list(domain.basis)
    acting_order = group.order if domain is None else domain.order
    schreier: list[Element] = []
    while frontier:
        x = frontier.pop()
        u = orbit[x]
        for g in gens:
            if budget is not None:
                budget.tick()
            y = act(x, g)
            ug = group.multiply(u, g)
            known = orbit.get(y)
            if known is None:
                orbit[y] = ug
                frontier.append(y)
            else:
                schreier.append(group.multiply(ug, group.inverse(known)))
    # The stabilizer order is forced by |orbit|, so stop closing the Schreier
    # generators into the table as soon as it reaches that order.
    target, rem = divmod(acting_order, len(orbit))
    if rem:
        raise AssertionError("orbit length does not divide the acting order")
    table: dict[int, Element] = {}
    size = 1
    for s in schreier:
        if size == target:
            break
        _close_table(group, [s], table=table)
        size = group.p ** len(table)
    stab = Subgroup(group, _back_reduce(group, table))
    if stab.order * len(orbit) != acting_order:
        raise AssertionError("orbit-stabilizer bookkeeping failed")
    return orbit, stab


def normalizer(group: PcGroup, sub: Subgroup) -> Subgroup:
    """Normalizer via orbit-stabilizer on the conjugation action."""
    cache = {sub.key(): sub}

    def act(key, g):
        conj = cache[key].conjugate(g)
        cache.setdefault(conj.key(), conj)
        return conj.key()

    _, stab = orbit_and_stabilizer(group, sub.key(), act)
    return stab


def subgroup_orbit(sub: Subgroup) -> dict[tuple, "Subgroup"]:
    """All conjugates of sub, keyed by canonical basis table."""
    group = sub.group
    orbit = {sub.key(): sub}
    frontier = [sub]
    gens = group.generators()
    while frontier:
        current = frontier.pop()
        for g in gens:
            conj = current.conjugate(g)
            if conj.key() not in orbit:
                orbit[conj.key()] = conj
                frontier.append(conj)
    return orbit


# ---------------------------------------------------------------------------
# maximal subgroups and the conjugacy-class stream


def maximal_subgroups(sub: Subgroup) -> list[Subgroup]:
    """Maximal subgroups of sub: preimages of the hyperplanes of the
    elementary abelian quotient by its Frattini subgroup."""
    g = sub.group
    if sub.rank == 0:
        return []
    frat = frattini_of_subgroup(sub)
    ops = QuotientOps(g, frat)
    view: dict[int, Element] = {}
    for b in sub.basis:
        x = _sift(ops, view, ops.rep(b))
        if x.is_identity():
            continue
        i = x.leading_index()
        view[i] = ops.power(x, pow(x.exps[i], -1, g.p))
    vbasis = [view[i] for i in sorted(view)]
    r = len(vbasis)
    out = []
    for functional in _normalized_functionals(g.p, r):
        kernel_vectors = nullspace([functional], g.p, r)
        gens = list(frat.basis)
        for v in kernel_vectors:
            gens.append(_product_of_powers(g, vbasis, v))
        out.append(Subgroup.generated(g, gens))
    return out


def _normalized_functionals(p: int, r: int):
    """Nonzero functionals on GF(p)^r, one per scalar class (leading 1)."""
    for lead in range(r):
        for rest in _cartesian(range(p), repeat=r - lead - 1):
            yield [0] * lead + [1] + list(rest)


def subgroup_classes(
    group: PcGroup,
    *,
    max_index: int | None = None,
    budget: WorkBudget | None = None,
):
    """Yield one Subgroup per conjugacy class, in nondecreasing index order,
    starting from the whole group and descending through maximal subgroups.
    Within a level, classes come in sorted key order (deterministic)."""
    level = [Subgroup.full(group)]
    seen: set[tuple] = set()  # keys of every subgroup in every computed orbit
    index = 1
    while level:
        for sub in level:
            yield sub
        index *= group.p
        if max_index is not None and index > max_index:
            return
        found: dict[tuple, Subgroup] = {}
        for sub in level:
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
                found[canon] = orbit[canon]
        level = [found[k] for k in sorted(found)]
