"""Polycyclic presentations with prime relative orders, and their arithmetic.

A PcGroup is a consistent weighted polycyclic presentation: generators
g_1 .. g_n, every relative order equal to the odd prime p, with rules

    g_i^p        = pow[i]          (a normal word in g_{i+1} .. g_n)
    g_j^{g_i}    = conj[(j, i)]    (for i < j; a normal word g_j * deeper)

ordered so that all commutators fall strictly deeper: [g_j, g_i] lies in
<g_{j+1}, ..., g_n> for every i < j.  Consequently every tail subgroup
<g_k, ..., g_n> is normal, and each quotient by the next tail is central
of order p.  Elements are exponent vectors; multiplication is collection
from the left.  |G| = p^n.

Weights partition the generators by the layer of the refinement that
created them; the nilpotency class is the largest weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

# A normal word: tuple of (index, exponent) with strictly increasing indices,
# exponents in 1..p-1.
NormalWord = tuple


def vector_to_word(vec: tuple[int, ...]) -> NormalWord:
    return tuple((i, e) for i, e in enumerate(vec) if e)


def word_to_vector(word: NormalWord, n: int) -> tuple[int, ...]:
    vec = [0] * n
    for i, e in word:
        vec[i] = e
    return tuple(vec)


class Element:
    """Immutable group element: the exponent vector of its normal form."""

    __slots__ = ("group", "exps", "_hash")

    def __init__(self, group: "PcGroup", exps: tuple[int, ...]):
        self.group = group
        self.exps = exps
        self._hash = hash(exps)

    def __mul__(self, other: "Element") -> "Element":
        return self.group.multiply(self, other)

    def __pow__(self, k: int) -> "Element":
        return self.group.power(self, k)

    def __invert__(self) -> "Element":
        return self.group.inverse(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.exps == other.exps

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.is_identity():
            return "<1>"
        return "<" + "*".join(
            f"g{i + 1}" + (f"^{e}" if e != 1 else "") for i, e in enumerate(self.exps) if e
        ) + ">"

    def is_identity(self) -> bool:
        return not any(self.exps)

    def leading_index(self) -> int | None:
        for i, e in enumerate(self.exps):
            if e:
                return i
        return None

    def conjugate_by(self, other: "Element") -> "Element":
        return self.group.conjugate(self, other)


@dataclass
class PcGroup:
    p: int
    n: int
    powers: dict[int, NormalWord]  # i -> normal word for g_i^p (may be empty)
    conjugates: dict[tuple[int, int], NormalWord]  # (j, i), i<j -> word for g_j^{g_i}
    weights: list[int] = field(default_factory=list)
    # For generators created by refinement layers: the rule that defines them,
    # ("pow", i) or ("conj", j, i).  Defining rules are exact - later layers
    # must not deform them.
    definitions: dict[int, tuple] = field(default_factory=dict)

    def __post_init__(self):
        if not self.weights:
            self.weights = [1] * self.n
        self._identity = Element(self, (0,) * self.n)
        # (j, i, e) -> normal word for (g_j^e)^{g_i}; filled lazily, single
        # writer per key, reads are idempotent.
        self._conj_power_cache: dict[tuple[int, int, int, int], NormalWord] = {}
        self._inverse_cache: dict[tuple[int, ...], tuple[int, ...]] = {}
        self._neg_power_cache: dict[tuple[int, int], Element] = {}
        # (subgroup key, conjugator exps) -> conjugate subgroup key; shared by
        # the subgroup layer so repeated orbit walks reuse each image.
        self._subgroup_conj_cache: dict[tuple, tuple] = {}

    # -- construction helpers -------------------------------------------------

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def nilpotency_class(self) -> int:
        return max(self.weights) if self.n else 1

    def identity(self) -> Element:
        return self._identity

    def generator(self, i: int) -> Element:
        vec = [0] * self.n
        vec[i] = 1
        return Element(self, tuple(vec))

    def generators(self) -> list[Element]:
        return [self.generator(i) for i in range(self.n)]

    def element(self, exps) -> Element:
        exps = tuple(e % self.p for e in exps)
        if len(exps) != self.n:
            raise ValueError(f"expected {self.n} exponents, got {len(exps)}")
        return Element(self, exps)

    def __repr__(self) -> str:
        return f"PcGroup(p={self.p}, n={self.n})"

    # -- collection ------------------------------------------------------------

    def _conjugate_power_word(self, j: int, i: int, ej: int, e: int) -> NormalWord:
        """Normal word for (g_j^{ej})^{g_i^e}, i < j, 1 <= ej, e < p; memoized.

        The cache is tiny (at most n^2 p^2 / 2 keys) and turns collection's
        inner loop into dictionary lookups.  Filling a key may recurse, but
        only to keys with a larger i (via multiply) or a smaller e, so the
        recursion is well-founded.
        """
        key = (j, i, ej, e)
        cached = self._conj_power_cache.get(key)
        if cached is not None:
            return cached
        base = self.conjugates.get((j, i))
        if base is None or base == ((j, 1),):
            word = ((j, ej),)
        elif e == 1:
            if ej == 1:
                word = base
            else:
                acc = Element(self, word_to_vector(base, self.n))
                word = vector_to_word(self.power(acc, ej).exps)
        else:
            # (g_j^{ej})^{g_i^e} = ((g_j^{ej})^{g_i})^{g_i^{e-1}}, pushed through
            # the e=1 word atom by atom (conjugation is an automorphism).
            acc = self._identity
            for k, ek in self._conjugate_power_word(j, i, ej, 1):
                atom_word = self._conjugate_power_word(k, i, ek, e - 1)
                acc = self.multiply(acc, Element(self, word_to_vector(atom_word, self.n)))
            word = vector_to_word(acc.exps)
        self._conj_power_cache[key] = word
        return word

    def multiply(self, a: Element, b: Element) -> Element:
        """Collect a*b from the left."""
        p = self.p
        n = self.n
        vec = list(a.exps)
        bexps = b.exps
        stack = [(i, bexps[i]) for i in range(n - 1, -1, -1) if bexps[i]]
        powers = self.powers
        cache = self._conj_power_cache
        conj = self._conjugate_power_word
        while stack:
            i, e = stack.pop()
            # vec * g_i^e = prefix(<=i) * g_i^e * (suffix(>i) conjugated by g_i^e)
            carry = vec[i] + e
            if carry >= p:
                vec[i] = carry - p
                pw = powers.get(i)
                pending = list(pw) if pw else []
            else:
                vec[i] = carry
                pending = []
            for j in range(i + 1, n):
                ej = vec[j]
                if ej:
                    word = cache.get((j, i, ej, e))
                    if word is None:
                        word = conj(j, i, ej, e)
                    if not pending and len(word) == 1 and word[0] == (j, ej):
                        continue  # commutes and nothing precedes it: stays put
                    vec[j] = 0
                    pending.extend(word)
            if pending:
                stack.extend(reversed(pending))
        return Element(self, tuple(vec))

    def word_element(self, word) -> Element:
        """Evaluate a word of (index, integer exponent) pairs (any exponents)."""
        acc = self._identity
        for i, e in word:
            acc = self.multiply(acc, self.power(self.generator(i), e))
        return acc

    def inverse(self, a: Element) -> Element:
        cached = self._inverse_cache.get(a.exps)
        if cached is not None:
            return Element(self, cached)
        # Build the inverse by cancelling letters left to right: maintain y with
        # a*y ending at the identity.  Peel the leading letter of the residual.
        y = self._identity
        residual = a
        while not residual.is_identity():
            i = residual.leading_index()
            e = residual.exps[i]
            step = self._neg_generator_power(i, e)
            residual = self.multiply(residual, step)
            y = self.multiply(y, step)
        self._inverse_cache[a.exps] = y.exps
        return y

    def _neg_generator_power(self, i: int, e: int) -> Element:
        """g_i^{-e} for 0 < e < p, via g_i^{p-e} * (g_i^p)^{-1}; the power
        word lies strictly deeper, so the recursion through inverse ends."""
        cached = self._neg_power_cache.get((i, e))
        if cached is not None:
            return cached
        tail = self.word_element(self.powers.get(i, ()))
        result = self.multiply(
            self.power(self.generator(i), self.p - e), self.inverse(tail)
        )
        self._neg_power_cache[(i, e)] = result
        return result

    def power(self, a: Element, k: int) -> Element:
        if k == 0:
            return self._identity
        if k < 0:
            a = self.inverse(a)
            k = -k
        result = self._identity
        base = a
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result

    def conjugate(self, a: Element, by: Element) -> Element:
        return self.multiply(self.multiply(self.inverse(by), a), by)

    def commutator(self, a: Element, b: Element) -> Element:
        ab = self.multiply(a, b)
        ba = self.multiply(b, a)
        return self.multiply(self.inverse(ba), ab)

    def order_of(self, a: Element) -> int:
        order = 1
        x = a
        while not x.is_identity():
            x = self.power(x, self.p)
            order *= self.p
            if order > self.order:
                raise AssertionError("element order exceeds group order")
        return order

    # -- consistency -----------------------------------------------------------

    def consistency_check(self) -> list[str]:
        """All collection overlap violations (empty iff consistent).

        Checks, in normal form, for all k > j > i:
            g_k (g_j g_i) = (g_k g_j) g_i
        and for all j > i:
            g_j^{p-1} (g_j g_i) = g_j^p g_i
            (g_j g_i) g_i^{p-1} = g_j g_i^p
        Violations are reported as strings naming the overlap; they are data
        for the caller, not exceptions.
        """
        violations = []
        gens = self.generators()
        for i in range(self.n):
            gi = gens[i]
            pw = self.word_element(self.powers.get(i, ()))
            if self.multiply(gi, pw) != self.multiply(pw, gi):
                violations.append(f"power overlap g{i + 1} * g{i + 1}^p")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                gi, gj = gens[i], gens[j]
                left = self.multiply(self.power(gj, self.p - 1), self.multiply(gj, gi))
                right = self.multiply(self.word_element(self.powers.get(j, ())), gi)
                if left != right:
                    violations.append(f"power overlap g{j + 1}^p * g{i + 1}")
                left = self.multiply(self.multiply(gj, gi), self.power(gi, self.p - 1))
                right = self.multiply(gj, self.word_element(self.powers.get(i, ())))
                if left != right:
                    violations.append(f"power overlap g{j + 1} * g{i + 1}^p")
                for k in range(j + 1, self.n):
                    gk = gens[k]
                    left = self.multiply(gk, self.multiply(gj, gi))
                    right = self.multiply(self.multiply(gk, gj), gi)
                    if left != right:
                        violations.append(
                            f"associativity overlap g{k + 1} * g{j + 1} * g{i + 1}"
                        )
        return violations

    # -- whole-group iteration (small groups only) ------------------------------

    def all_elements(self):
        """Iterate every element; only sensible when p^n is small."""
        from itertools import product

        for exps in product(range(self.p), repeat=self.n):
            yield Element(self, exps)


def pc_group_from_rules(
    p: int,
    n: int,
    powers: dict[int, list[tuple[int, int]]] | None = None,
    conjugates: dict[tuple[int, int], list[tuple[int, int]]] | None = None,
    weights: list[int] | None = None,
    check: bool = True,
) -> PcGroup:
    """Build a PcGroup from explicit rules (indices 0-based, exponents mod p).

    Omitted power rules mean g_i^p = 1; omitted conjugate rules mean the
    pair commutes.  With check=True a consistency violation raises.
    """
    powers = {i: tuple(w) for i, w in (powers or {}).items() if w}
    conjugates = {ji: tuple(w) for ji, w in (conjugates or {}).items()}
    group = PcGroup(p=p, n=n, powers=powers, conjugates=conjugates, weights=weights or [])
    if check:
        violations = group.consistency_check()
        if violations:
            raise ValueError(f"inconsistent pc rules: {violations[:3]}")
    return group


def direct_product(a: PcGroup, b: PcGroup) -> PcGroup:
    """External direct product; b's generators are appended after a's."""
    if a.p != b.p:
        raise ValueError("direct factors must share the prime")
    shift = a.n
    powers = dict(a.powers)
    conjugates = dict(a.conjugates)
    for i, w in b.powers.items():
        powers[i + shift] = tuple((j + shift, e) for j, e in w)
    for (j, i), w in b.conjugates.items():
        conjugates[(j + shift, i + shift)] = tuple((k + shift, e) for k, e in w)
    weights = list(a.weights) + list(b.weights)
    return PcGroup(p=a.p, n=a.n + b.n, powers=powers, conjugates=conjugates, weights=weights)


def cyclic_group(p: int, k: int) -> PcGroup:
    """C_{p^k} as a pc group: g_1^p = g_2, ..., g_{k-1}^p = g_k, g_k^p = 1."""
    powers = {i: ((i + 1, 1),) for i in range(k - 1)}
    return PcGroup(p=p, n=k, powers=powers, conjugates={}, weights=list(range(1, k + 1)))


def abelian_group(p: int, invariants: list[int]) -> PcGroup:
    """Direct product of C_{p^{n_i}} for the given exponent list."""
    group = PcGroup(p=p, n=0, powers={}, conjugates={}, weights=[])
    for k in invariants:
        group = direct_product(group, cyclic_group(p, k))
    return group


def extraspecial_group(p: int, exponent_p: bool = True) -> PcGroup:
    """The two extraspecial groups of order p^3 (exponent p or p^2)."""
    powers = {} if exponent_p else {0: ((2, 1),)}
    conjugates = {(1, 0): ((1, 1), (2, 1))}
    return PcGroup(p=p, n=3, powers=powers, conjugates=conjugates, weights=[1, 1, 2])
