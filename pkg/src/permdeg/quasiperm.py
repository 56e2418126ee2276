"""Minimal faithful quasi-permutation degree via monomial character classes.

Every irreducible character of a p-group is induced from a linear character
of a subgroup, and a linear character lambda of H is determined up to Galois
conjugacy by its kernel K (H/K cyclic of order p^a).  A Galois class of
induced characters is therefore a pair (H, K); it contributes |G:K| to the
quasi-permutation degree, its induced character has kernel Core_G(K), and a
set of classes is faithful iff those cores intersect trivially — which, as
in the permutation search, reduces to subspaces K ∩ Omega(Z(G)) of the socle
floor meeting in 0.  The optimal set uses one class per socle dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, InputError
from .linalg import nullspace, smith_normal_form, span_key
from .mindeg import _SocleSpace, _greedy_upper_bound, _search_cover, minimal_degree
from .pcgroup import PcGroup
from .structure import (
    Subgroup,
    WorkBudget,
    abelian_quotient,
    center,
    coset_representatives,
    derived_of_subgroup,
    derived_subgroup,
    exponent,
    frattini_of_subgroup,
    intersect_subgroups,
    maximal_subgroups,
    normal_core,
    normalizer,
    omega_of_center,
    orbit_and_stabilizer,
    subgroup_classes,
    subgroup_orbit,
)


@dataclass
class CharClass:
    """A Galois class of monomial characters: linear on h with kernel k,
    h/k cyclic of order conductor, induced up to the whole group."""

    h: Subgroup
    k: Subgroup
    conductor: int  # p^a = |h:k|
    induced_degree: int  # |G:h|

    @property
    def value(self) -> int:
        """|G:k|, the class's contribution to the quasi-permutation degree."""
        return self.induced_degree * self.conductor

    @property
    def d_value(self) -> int:
        """Galois class size times character degree: |G:h| * phi(p^a)."""
        q = self.conductor
        p = self.h.group.p
        return self.induced_degree * (q - q // p if q > 1 else 1)

    def sort_key(self):
        return (self.value, self.h.key(), self.k.key())


@dataclass
class QuasiCert:
    """A faithful set of irreducible-inducing character classes."""

    classes: list[CharClass]
    c_value: int


def make_char_class(group: PcGroup, h: Subgroup, k: Subgroup) -> CharClass:
    """Validated constructor: checks k ≤ h with h/k cyclic."""
    if not h.contains_subgroup(k):
        raise InputError("character kernel is not inside its subgroup")
    quotient = abelian_quotient(h, kernel=k)
    conductor = 1
    for d in quotient.invariants:
        conductor *= d
    if len(quotient.invariants) > 1 or conductor * k.order != h.order:
        raise InputError("quotient by character kernel is not cyclic")
    return CharClass(h=h, k=k, conductor=conductor, induced_degree=h.index)


# ---------------------------------------------------------------------------
# kernels of cyclic quotients


def _lattice_kernel(weights: list[int], exp_a: int) -> list[list[int]]:
    """Basis of {v in Z^r : sum v_t * weights_t ≡ 0 mod exp_a}."""
    diag, _, v_mat = smith_normal_form([list(weights)])
    s = abs(diag[0][0])
    r = len(weights)
    cols = [[v_mat[i][j] for i in range(r)] for j in range(r)]
    step = exp_a // _gcd(s, exp_a)
    basis = [[step * x for x in cols[0]]] + cols[1:]
    return basis


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else abs(b)


def cyclic_quotient_kernels(h: Subgroup) -> list[Subgroup]:
    """All subgroups K ≤ h with h/K cyclic (one per Galois class of linear
    characters of h), including K = h for the trivial character."""
    return [k for k, _ in _cyclic_kernels(h)]


def _hom_weights(invariants, p, cap, budget: WorkBudget | None = None):
    """Yield (conductor, weight vector) per unit-scaling class of
    homomorphisms of the abelian group with the given invariants onto a
    cyclic group of order p^a ≤ cap; weights share denominator exp_a
    (the largest invariant), so the hom is x -> sum(w_t * c_t) mod exp_a."""
    exp_a = invariants[-1]
    q = p
    while q <= cap:
        moduli = [min(d, q) for d in invariants]
        for f in _tuples_of_exact_order(invariants, moduli, q, p):
            if budget is not None:
                budget.tick()
            weights = [
                f_t * (d_t // m_t) * (exp_a // d_t)  # digit mod d_t, then mod exp_a
                for f_t, d_t, m_t in zip(f, invariants, moduli)
            ]
            yield q, weights
        q *= p


def _canon_weights(weights, invariants, q, p) -> tuple[int, ...]:
    """Canonical unit-class representative of a weight vector of conductor q:
    decode to digits, scale so the first full-modulus unit digit is 1."""
    exp_a = invariants[-1]
    moduli = [min(d, q) for d in invariants]
    digits = []
    for w, m in zip(weights, moduli):
        f, rem = divmod(w % exp_a, exp_a // m)
        if rem:
            raise AssertionError("conjugated character weight left its lattice")
        digits.append(f)
    pivot = next(f for f, m in zip(digits, moduli) if m == q and f % p)
    u = pow(pivot, -1, q)
    return tuple(
        ((u * f) % m) * (exp_a // m) for f, m in zip(digits, moduli)
    )


def _char_orbit(
    seed: tuple[int, ...],
    invariants,
    q: int,
    p: int,
    act_mats,
    budget: WorkBudget | None = None,
) -> set[tuple[int, ...]]:
    """Orbit of a canonical weight vector under the conjugation matrices of
    the normalizer's generators acting on the abelianization: pure modular
    arithmetic, one canonical tuple per character class in the orbit."""
    exp_a = invariants[-1]
    r = len(invariants)
    orbit = {seed}
    frontier = [seed]
    while frontier:
        w = frontier.pop()
        for mat in act_mats:
            if budget is not None:
                budget.tick()
            image = tuple(
                sum(mat[t][s] * w[s] for s in range(r)) % exp_a for t in range(r)
            )
            key = _canon_weights(image, invariants, q, p)
            if key not in orbit:
                orbit.add(key)
                frontier.append(key)
    return orbit


def _build_kernel(aq, derived_basis, weights, q) -> Subgroup:
    """Kernel subgroup of the hom given by the weight vector: the derived
    subgroup together with images of the hom's integer kernel lattice."""
    group = aq.sub.group
    exp_a = aq.invariants[-1]
    basis = _lattice_kernel(weights, exp_a)
    gens = list(derived_basis)
    for vec in basis:
        el = group.identity()
        for t, e in enumerate(vec):
            if e:
                el = group.multiply(el, group.power(aq.generators[t], e))
        gens.append(el)
    kernel = Subgroup.generated(group, gens)
    if kernel.order * q != aq.sub.order:
        raise AssertionError("cyclic-quotient kernel has wrong index")
    return kernel


def _cyclic_kernels(
    h: Subgroup,
    max_conductor: int | None = None,
    budget: WorkBudget | None = None,
) -> list[tuple[Subgroup, int]]:
    """(K, p^a) pairs with h/K cyclic of order p^a ≤ max_conductor, sorted
    by (conductor, kernel key).  Kernels correspond to unit-scaling classes
    of homomorphisms h/[h,h] -> C_{p^a}; each kernel is built from the
    integer lattice of the hom's kernel."""
    p = h.group.p
    results: dict[tuple, tuple[Subgroup, int]] = {h.key(): (h, 1)}
    aq = abelian_quotient(h)
    if aq.invariants:
        exp_a = aq.invariants[-1]
        cap = exp_a if max_conductor is None else min(exp_a, max_conductor)
        derived_basis = list(derived_of_subgroup(h).basis)
        for q, weights in _hom_weights(aq.invariants, p, cap, budget):
            kernel = _build_kernel(aq, derived_basis, weights, q)
            results.setdefault(kernel.key(), (kernel, q))
    return sorted(results.values(), key=lambda t: (t[1], t[0].key()))


def _tuples_of_exact_order(invariants, moduli, q, p):
    """One representative per unit-scaling class of tuples f (f_t mod
    moduli_t) describing homs of order exactly q: the hom sends generator t
    to f_t * (d_t/m_t) in Z/d_t, and order q means some f_t is a unit mod p
    at a coordinate with m_t = q.  Scaling by the inverse of the first such
    unit pins it to 1, so enumerating tuples whose first full-modulus unit
    digit is exactly 1 visits each class once."""
    r = len(moduli)

    def rec(t, pivot_placed):
        if t == r:
            if pivot_placed:
                yield ()
            return
        m = moduli[t]
        if pivot_placed or m != q:
            for digit in range(m):
                for rest in rec(t + 1, pivot_placed):
                    yield (digit,) + rest
        else:
            for digit in range(0, m, p):  # still no unit: non-unit digits only
                for rest in rec(t + 1, False):
                    yield (digit,) + rest
            for rest in rec(t + 1, True):  # this coordinate is the pivot
                yield (1,) + rest

    yield from rec(0, q == 1)


# ---------------------------------------------------------------------------
# inertia and irreducibility


def _inertia_and_orbit(
    group: PcGroup, cc: CharClass, n_sub: Subgroup
) -> tuple[Subgroup, list[tuple]]:
    """Inertia group of the class, plus the keys of the full orbit of its
    kernel under the given normalizer of h (conjugate kernels under that
    normalizer carry conjugate classes: same degree, same socle meet, same
    irreducibility)."""
    cache = {cc.k.key(): cc.k}

    def act_subgroup(key, g):
        image = cache[key].conjugate(g)
        cache.setdefault(image.key(), image)
        return image.key()

    orbit, stab_k = orbit_and_stabilizer(group, cc.k.key(), act_subgroup, domain=n_sub)

    quotient = abelian_quotient(cc.h, kernel=cc.k)
    if quotient.invariants != [cc.conductor]:
        raise AssertionError("character class quotient is not cyclic")
    hbar = quotient.generators[0]
    q = cc.conductor

    def act_generator(t, g):
        image = quotient.coords(group.conjugate(hbar, g))[0]
        return (t * image) % q

    _, inertia = orbit_and_stabilizer(group, 1, act_generator, domain=stab_k)
    return inertia, list(orbit)


def inertia_group(
    group: PcGroup, cc: CharClass, normalizer_of_h: Subgroup | None = None
) -> Subgroup:
    """Stabilizer of the character class: elements normalizing h and k and
    fixing the distinguished generator of h/k modulo k."""
    if cc.h.rank == group.n:
        return Subgroup.full(group)
    n_sub = normalizer_of_h if normalizer_of_h is not None else normalizer(group, cc.h)
    if cc.conductor == 1:
        return n_sub
    inertia, _ = _inertia_and_orbit(group, cc, n_sub)
    return inertia


def induced_irreducible(
    group: PcGroup, cc: CharClass, normalizer_of_h: Subgroup | None = None
) -> bool:
    """Whether the induced character of the class is irreducible: exactly
    when the inertia group is h itself (linear classes of the whole group
    are always irreducible; inducing the trivial character of a proper
    subgroup gives the reducible coset-space character)."""
    if cc.h.rank == group.n:
        return True
    if cc.conductor == 1:
        return False
    return inertia_group(group, cc, normalizer_of_h) == cc.h


def induced_kernel(group: PcGroup, cc: CharClass) -> Subgroup:
    """Kernel of the induced character: the normal core of the linear
    character's kernel."""
    return normal_core(group, cc.k)


# ---------------------------------------------------------------------------
# exact norm oracle (brute force over small groups)


def verify_norm(group: PcGroup, cc: CharClass, budget: WorkBudget | None = None) -> Fraction:
    """Exact inner product <chi, chi> of the induced character chi, computed
    by brute force with character values as integer multiplicity vectors
    over p^a-th roots of unity.  Restricted to orders ≤ p^4."""
    if group.order > group.p**4:
        raise BudgetExceededError(
            f"exact norm needs order ≤ p^4, got {group.order}",
            count=0,
            best_bound=None,
        )
    q = cc.conductor
    reps = coset_representatives(cc.h)
    inv_reps = [group.inverse(t) for t in reps]
    quotient = abelian_quotient(cc.h, kernel=cc.k) if q > 1 else None
    total = [0] * q
    for x in group.all_elements():
        if budget is not None:
            budget.tick()
        vec = [0] * q
        for t, ti in zip(reps, inv_reps):
            y = group.multiply(group.multiply(ti, x), t)
            if cc.h.contains(y):
                j = quotient.coords(y)[0] % q if q > 1 else 0
                vec[j] += 1
        for i, vi in enumerate(vec):
            if not vi:
                continue
            for j, vj in enumerate(vec):
                if vj:
                    total[(i - j) % q] += vi * vj
    rational = _rational_part(total, group.p, q)
    return Fraction(rational, group.order)


def _rational_part(coeffs: list[int], p: int, q: int) -> int:
    """Value of sum coeffs[j] * zeta^j when it is rational, reducing modulo
    the p^a-th cyclotomic relation sum_{j<p} zeta^{j q/p} = 0."""
    if q == 1:
        return coeffs[0]
    c = list(coeffs)
    block = q // p
    degree = q - block  # degree of the cyclotomic polynomial
    for k in range(q - 1, degree - 1, -1):
        m = c[k]
        if m:
            for j in range(p):
                c[k - j * block] -= m
    if any(c[i] for i in range(1, degree)):
        raise AssertionError("character norm sum is not rational")
    return c[0]


# ---------------------------------------------------------------------------
# quasi-permutation character profile (Galois orbit sums are integers)


def quasi_char_profile(
    group: PcGroup, cert: QuasiCert, budget: WorkBudget | None = None
) -> tuple[int, int]:
    """(degree, m) of the quasi-permutation character of the certificate:
    degree its value at 1 and m the negated minimum value over the group.
    The Galois orbit sum of a class has integer values: a fixed coset with
    character digit j contributes phi(p^a) if p^a | j, -p^{a-1} if exactly
    p^{a-1} | j, else 0.  Brute force, restricted to orders ≤ p^4."""
    if group.order > group.p**4:
        raise BudgetExceededError(
            f"character profile needs order ≤ p^4, got {group.order}",
            count=0,
            best_bound=None,
        )
    p = group.p
    per_class = []
    for cc in cert.classes:
        reps = coset_representatives(cc.h)
        inv_reps = [group.inverse(t) for t in reps]
        quotient = abelian_quotient(cc.h, kernel=cc.k) if cc.conductor > 1 else None
        per_class.append((cc, reps, inv_reps, quotient))
    values = []
    for x in group.all_elements():
        if budget is not None:
            budget.tick()
        value = 0
        for cc, reps, inv_reps, quotient in per_class:
            q = cc.conductor
            for t, ti in zip(reps, inv_reps):
                y = group.multiply(group.multiply(ti, x), t)
                if not cc.h.contains(y):
                    continue
                if q == 1:
                    value += 1
                    continue
                j = quotient.coords(y)[0] % q
                if j == 0:
                    value += q - q // p
                elif j % (q // p) == 0:
                    value -= q // p
        values.append(value)
    degree = values[0] if values else 0
    lowest = min(values) if values else 0
    return degree, -lowest


# ---------------------------------------------------------------------------
# the c(G) search


def minimal_c(
    group: PcGroup, budget: WorkBudget | int | None = None
) -> tuple[int, QuasiCert]:
    """Exact minimal faithful quasi-permutation degree with a certificate:
    the minimum of sum |G:K_i| over sets of irreducible-inducing character
    classes whose kernels' cores intersect trivially."""
    if isinstance(budget, int):
        budget = WorkBudget(budget)
    full = Subgroup.full(group)
    if group.n == 0:
        cert = QuasiCert(classes=[CharClass(full, full, 1, 1)], c_value=1)
        return 1, cert
    if derived_subgroup(group).rank == 0:
        return _c_abelian(group)

    space = _SocleSpace(group)
    d = space.dim
    p = group.p

    # any faithful permutation part-set bounds the quasi-permutation degree
    greedy_parts = _greedy_upper_bound(group, space, budget)
    best = sum(group.order // part.order for part in greedy_parts) + 1
    best_classes: list[CharClass] | None = None
    if budget is not None:
        budget.best_bound = best

    def cutoff() -> int:
        # parts of an improving certificate have value ≥ p each, ≤ d of them
        return best - 1 - p * (d - 1)

    candidates: list[tuple[int, tuple, CharClass]] = []
    seen_points: set[tuple] = set()

    level = [full]
    seen_orbits: set[tuple] = set()
    index = 1
    while level:
        fresh = False
        for sub in level:
            conductor_cap = cutoff() // index
            if conductor_cap < p:
                continue
            aq = abelian_quotient(sub)
            if not aq.invariants:
                continue
            cap = min(aq.invariants[-1], conductor_cap)
            if cap < p:
                continue
            exp_a = aq.invariants[-1]
            unit = exp_a // p
            # the socle floor inside this subgroup, in both coordinate systems
            w_basis = list(intersect_subgroups(sub, space.omega).basis)
            w_omega = [list(space.omega.coords(b)) for b in w_basis]
            w_aq = [aq.coords(b) for b in w_basis]
            derived_basis = list(derived_of_subgroup(sub).basis)
            n_sub: Subgroup | None = full if sub.rank == group.n else None
            act_mats: list | None = None
            seen_chars: set[tuple] = set()
            for q, weights in _hom_weights(aq.invariants, p, cap, budget):
                value = index * q
                wkey = tuple(weights)
                if wkey in seen_chars:
                    continue
                # K meets the socle exactly where the character is trivial:
                # the hom is linear on the order-p central part, so V(K) is
                # the kernel of one functional on that subspace.
                row = []
                for cw in w_aq:
                    val = sum(wt * c for wt, c in zip(weights, cw)) % exp_a
                    if val % unit:
                        raise AssertionError("socle value has full conductor order")
                    row.append((val // unit) % p)
                null = nullspace([row], p, len(w_basis))
                v = span_key(
                    [
                        [
                            sum(n[j] * w_omega[j][t] for j in range(len(w_basis))) % p
                            for t in range(d)
                        ]
                        for n in null
                    ],
                    p,
                )
                if len(v) == d:
                    continue
                point = (value, v)
                if point in seen_points:
                    continue
                if sub.rank < group.n:
                    # The induced character is irreducible iff the inertia
                    # group is sub itself, i.e. the class's orbit under the
                    # normalizer has full length.  Conjugation acts linearly
                    # on the abelianization, so the orbit runs in weight space.
                    if n_sub is None:
                        n_sub = normalizer(group, sub)
                    if act_mats is None:
                        act_mats = [
                            [aq.coords(group.conjugate(a, y)) for a in aq.generators]
                            for y in n_sub.basis
                        ]
                    orbit = _char_orbit(wkey, aq.invariants, q, p, act_mats, budget)
                    seen_chars.update(orbit)
                    quot, rem = divmod(n_sub.order, sub.order * len(orbit))
                    if rem:
                        raise AssertionError("character orbit does not divide N:H")
                    if quot != 1:
                        continue
                kernel = _build_kernel(aq, derived_basis, weights, q)
                cc = CharClass(h=sub, k=kernel, conductor=q, induced_degree=index)
                if space.subspace_of(kernel) != v:
                    raise AssertionError("socle meet disagrees between routes")
                seen_points.add(point)
                candidates.append((value, v, cc))
                fresh = True
        if fresh:
            candidates.sort(key=lambda c: (c[0], c[1], c[2].sort_key()))
            found = _search_cover(space, candidates, best)
            if found is not None:
                best, best_classes = found
                if budget is not None:
                    budget.best_bound = best
        index *= p
        if index * p > cutoff():
            break
        found_level: dict[tuple, Subgroup] = {}
        for sub in level:
            for maximal in maximal_subgroups(sub):
                if budget is not None:
                    budget.tick()
                if maximal.key() in seen_orbits:
                    continue
                orbit = subgroup_orbit(maximal)
                if budget is not None:
                    budget.tick(len(orbit) - 1)
                seen_orbits.update(orbit)
                canon = min(orbit)
                found_level[canon] = orbit[canon]
        level = [found_level[k] for k in sorted(found_level)]

    if best_classes is None:
        raise AssertionError(
            "quasi-permutation search found no certificate below the "
            "permutation-degree bound"
        )
    cert = QuasiCert(classes=best_classes, c_value=best)
    return best, cert


def _c_abelian(group: PcGroup) -> tuple[int, QuasiCert]:
    full = Subgroup.full(group)
    decomp = abelian_quotient(full)
    classes = []
    total = 0
    for skip, order in enumerate(decomp.invariants):
        gens = [x for t, x in enumerate(decomp.generators) if t != skip]
        kernel = Subgroup.generated(group, gens)
        classes.append(CharClass(h=full, k=kernel, conductor=order, induced_degree=1))
        total += order
    cert = QuasiCert(classes=classes, c_value=total)
    return total, cert


# ---------------------------------------------------------------------------
# cross-check and bound oracles


@dataclass
class CrossCheckReport:
    mu_value: int
    c_value: int
    equal: bool
    mu_parts: list[Subgroup]
    c_classes: list[CharClass]


def cross_check_c_mu(group: PcGroup, budget: WorkBudget | int | None = None) -> CrossCheckReport:
    """Compute both degrees independently and compare (they must agree for
    odd p-groups); inequality is reported, never silently accepted."""
    if isinstance(budget, int):
        budget = WorkBudget(budget)
    mu_value, mu_cert = minimal_degree(group, budget)
    c_value, c_cert = minimal_c(group, budget)
    return CrossCheckReport(
        mu_value=mu_value,
        c_value=c_value,
        equal=(mu_value == c_value),
        mu_parts=mu_cert.parts,
        c_classes=c_cert.classes,
    )


def cd_of_group(group: PcGroup, budget: WorkBudget | None = None) -> list[int]:
    """All irreducible character degrees: every irreducible is induced from
    a linear class, so scan subgroup classes up to the index cap given by
    degree^2 ≤ |G : Z(G)|."""
    if derived_subgroup(group).rank == 0:
        return [1]
    over_center = group.order // center(group).order
    cap = 1  # largest p-power with cap^2 ≤ |G:Z| bounds every degree
    while (cap * group.p) ** 2 <= over_center:
        cap *= group.p
    degrees = {1}
    for sub in subgroup_classes(group, max_index=cap, budget=budget):
        if sub.index == 1 or sub.index in degrees:
            continue
        if _has_irreducible_class(group, sub, budget):
            degrees.add(sub.index)
    return sorted(degrees)


def _has_irreducible_class(group, sub, budget=None) -> bool:
    for kernel, q in _cyclic_kernels(sub, None, budget):
        if q == 1:
            continue
        cc = CharClass(h=sub, k=kernel, conductor=q, induced_degree=sub.index)
        if induced_irreducible(group, cc):
            return True
    return False


def min_nonlinear_degree(group: PcGroup, budget: WorkBudget | None = None) -> int:
    """Smallest degree of a nonlinear irreducible character."""
    for sub in subgroup_classes(group, budget=budget):
        if sub.index == 1:
            continue
        if _has_irreducible_class(group, sub, budget):
            return sub.index
    raise AssertionError("non-abelian group with no nonlinear character")


def min_faithful_degree(group: PcGroup, budget: WorkBudget | None = None) -> int:
    """Smallest degree of a faithful nonlinear irreducible character
    (exists when the center is cyclic)."""
    omega = omega_of_center(group)
    for sub in subgroup_classes(group, budget=budget):
        if sub.index == 1:
            continue
        for kernel, q in _cyclic_kernels(sub, None, budget):
            if q == 1:
                continue
            if intersect_subgroups(kernel, omega).rank != 0:
                continue
            cc = CharClass(h=sub, k=kernel, conductor=q, induced_degree=sub.index)
            if induced_irreducible(group, cc):
                return sub.index
    raise AssertionError("no faithful irreducible character found")


def order_p6_value_sets(p: int) -> dict[int, list[int]]:
    """Admissible c(G) values for non-abelian groups of order p^6 (p ≥ 5),
    keyed by the exponent of |Z(G)|."""
    return {
        4: sorted(
            {
                p**4 + p, p**3 + p**2 + p, p**3 + p**2, p**3 + 2 * p,
                3 * p**2, 2 * p**2 + 2 * p, 2 * p**2 + p, 3 * p**2 + p,
                p**2 + 3 * p, p**5, p**4 + p**2, 2 * p**3, p**3 + 2 * p**2,
            }
        ),
        3: sorted(
            {
                p**5, p**4 + p**3, p**4 + p**2, p**4 + p, p**4,
                2 * p**3 + p**2, 2 * p**3 + p, 2 * p**3, p**3 + 2 * p**2,
                p**3 + p**2 + p, p**3 + p**2, p**3 + 2 * p, p**3 + p,
                3 * p**2, 2 * p**2 + p, 2 * p**2, p**2 + 2 * p,
            }
        ),
        2: sorted(
            {p**4, 2 * p**3, p**3 + p**2, p**3 + p, p**3, 2 * p**2, p**2 + p}
        ),
        1: sorted({p**4, p**3, p**2}),
    }


def vz_value_sets(p: int) -> dict[int, list[int]]:
    """Admissible c(G) values for VZ groups of order p^6 (odd p), keyed by
    the exponent of |Z(G)|."""
    return {
        4: order_p6_value_sets(p)[4],
        2: sorted({2 * p**3, p**3 + p, p**4, p**3 + p**2}),
    }


def bound_oracles(
    group: PcGroup,
    c_value: int,
    cert: QuasiCert | None = None,
    budget: WorkBudget | None = None,
) -> list[tuple[str, bool]]:
    """Evaluate every applicable structural bound against a computed c(G).
    Returns (name, satisfied) pairs; predicates whose hypotheses fail are
    omitted.  Character-degree data is computed on demand."""
    p = group.p
    results: list[tuple[str, bool]] = []
    z = center(group)
    z_invariants = []
    if z.rank:
        z_invariants = abelian_quotient(z).invariants
    d_z = len(z_invariants)
    abelian = derived_subgroup(group).rank == 0

    if abelian:
        total = sum(abelian_quotient(Subgroup.full(group)).invariants)
        results.append(("abelian-sum-of-invariants", c_value == max(total, 1)))
        return results

    omega = omega_of_center(group)
    frattini = frattini_of_subgroup(Subgroup.full(group))
    if frattini.contains_subgroup(omega):
        # no abelian direct factor: p^2 divides c(G)
        results.append(("p-squared-divides", c_value % (p * p) == 0))

    derived = derived_subgroup(group)
    socle_in_derived = intersect_subgroups(z, derived)
    d_zd = 0
    if socle_in_derived.rank:
        d_zd = len(abelian_quotient(socle_in_derived).invariants)
    if d_zd == d_z:
        s_degree = min_nonlinear_degree(group, budget)
        ok = c_value % (s_degree * p) == 0
        if cert is not None:
            ok = ok and all(cc.h.rank != group.n for cc in cert.classes)
        results.append(("socle-in-derived-divisibility", ok))

    cd = None
    exp_g = exponent(group)
    if group.order == p**6:
        cd = cd_of_group(group, budget)
        max_cd = cd[-1]
        low = exp_g + (d_z - 1) * p
        high = d_z * exp_g * max_cd
        results.append(("digit-range", low <= c_value <= high))

    if len(z_invariants) == 1:
        if cd is None:
            cd = cd_of_group(group, budget)
        alpha = min_faithful_degree(group, budget)
        low = alpha * z.order
        high = cd[-1] * exp_g
        results.append(("cyclic-center-range", low <= c_value <= high))

    if group.order == p**6 and p >= 5:
        z_exp = 0
        n = z.order
        while n > 1:
            n //= p
            z_exp += 1
        sets = order_p6_value_sets(p)
        if z_exp in sets:
            results.append(("order-p6-value-set", c_value in sets[z_exp]))
        if cd is None:
            cd = cd_of_group(group, budget)
        over_center = group.order // z.order
        root = 1
        while root * root < over_center:
            root *= p
        if root * root == over_center and cd == [1, root]:
            vz_sets = vz_value_sets(p)
            if z_exp in vz_sets:
                results.append(("vz-value-set", c_value in vz_sets[z_exp]))
    return results
