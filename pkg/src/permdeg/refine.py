"""Refining a parsed presentation into a consistent weighted pc group.

The algorithm is a layered nilpotent-quotient computation: start from the
largest elementary-abelian quotient of the presented group, then repeatedly
extend by a central elementary-abelian layer.  Each extension step attaches
a formal central "tail" generator of order p to every power and conjugation
rule of the current quotient, producing a (generally inconsistent) covering
presentation; the collection overlap checks and the original defining
relations, evaluated in the cover, each land in the span of the tails, and
quotienting by the span of those defect vectors yields the next layer.  The
process stops when a layer comes out empty.

This derives relations the input only implies (presentations may omit a
power relation that is forced by consistency), and it detects inputs whose
relations collapse the group below its declared order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentPresentationError, OrderCapExceededError
from .linalg import reduce_vector, rref
from .pcgroup import Element, PcGroup, vector_to_word
from .presentation import PlainWord, Presentation

# Arithmetic in this package is tuned for groups of order at most p^6.
MAX_PC_GENERATORS = 6


@dataclass
class RefinedGroup:
    """A consistent pc group together with the named-generator embedding."""

    group: PcGroup
    images: dict[str, Element]  # presentation generator name -> element
    presentation: Presentation

    def evaluate(self, word: PlainWord) -> Element:
        """Evaluate a word over presentation generator names."""
        acc = self.group.identity()
        for name, exp in word:
            if name not in self.images:
                raise KeyError(f"unknown generator {name!r}")
            acc = self.group.multiply(acc, self.group.power(self.images[name], exp))
        return acc


def _class_one_quotient(pres: Presentation) -> tuple[PcGroup, dict[str, Element]]:
    """Largest elementary-abelian quotient and the generator images."""
    p = pres.params.p
    gens = pres.generators
    index = {g: i for i, g in enumerate(gens)}
    m = len(gens)
    constraint_rows = []
    for left, right in pres.all_equations():
        row = [0] * m
        for name, exp in left:
            row[index[name]] = (row[index[name]] + exp) % p
        for name, exp in right:
            row[index[name]] = (row[index[name]] - exp) % p
        if any(row):
            constraint_rows.append(row)
    rrows, pivots = rref(constraint_rows, p)
    free_cols = [c for c in range(m) if c not in pivots]
    d = len(free_cols)
    group = PcGroup(p=p, n=d, powers={}, conjugates={}, weights=[1] * d)
    images = {}
    for g in gens:
        v = [0] * m
        v[index[g]] = 1
        residue = reduce_vector(v, rrows, pivots, p)
        images[g] = group.element(tuple(residue[c] for c in free_cols))
    return group, images


def _build_cover(group: PcGroup) -> tuple[PcGroup, list[tuple], int]:
    """Attach one central order-p tail to every non-defining rule.

    Returns (cover, rule_tags, tail_count); rule_tags[k] identifies the rule
    carrying tail k, either ("pow", i) or ("conj", j, i).  Rules that define
    a generator stay exact: deforming them would break the definition and
    disconnect the generator from the images of the presented group.
    """
    n = group.n
    defining = set(group.definitions.values())
    rule_tags: list[tuple] = []
    for i in range(n):
        if ("pow", i) not in defining:
            rule_tags.append(("pow", i))
    for j in range(1, n):
        for i in range(j):
            if ("conj", j, i) not in defining:
                rule_tags.append(("conj", j, i))
    t = len(rule_tags)
    new_weight = group.nilpotency_class + 1
    powers = {i: tuple(w) for i, w in group.powers.items()}
    conjugates = {ji: tuple(w) for ji, w in group.conjugates.items()}
    for k, tag in enumerate(rule_tags):
        tail_atom = (n + k, 1)
        if tag[0] == "pow":
            i = tag[1]
            powers[i] = tuple(group.powers.get(i, ())) + (tail_atom,)
        else:
            _, j, i = tag
            base = group.conjugates.get((j, i), ((j, 1),))
            conjugates[(j, i)] = tuple(base) + (tail_atom,)
    cover = PcGroup(
        p=group.p,
        n=n + t,
        powers=powers,
        conjugates=conjugates,
        weights=list(group.weights) + [new_weight] * t,
    )
    return cover, rule_tags, t


def _tail_defect(cover: PcGroup, n_old: int, left: Element, right: Element) -> list[int]:
    """left * right^{-1} as a tail-coordinate vector; asserts it lies in the tails."""
    diff = cover.multiply(left, cover.inverse(right))
    exps = diff.exps
    if any(exps[:n_old]):
        raise AssertionError("covering defect escaped the central tail layer")
    return list(exps[n_old:])


def _overlap_defects(cover: PcGroup, n_old: int) -> list[list[int]]:
    """Tail vectors by which the collection overlap checks fail in the cover."""
    defects = []
    gens = [cover.generator(i) for i in range(n_old)]
    p = cover.p
    for i in range(n_old):
        gi = gens[i]
        pw = cover.word_element(cover.powers.get(i, ()))
        defects.append(
            _tail_defect(cover, n_old, cover.multiply(gi, pw), cover.multiply(pw, gi))
        )
    for i in range(n_old):
        for j in range(i + 1, n_old):
            gi, gj = gens[i], gens[j]
            left = cover.multiply(cover.power(gj, p - 1), cover.multiply(gj, gi))
            right = cover.multiply(cover.word_element(cover.powers.get(j, ())), gi)
            defects.append(_tail_defect(cover, n_old, left, right))
            left = cover.multiply(cover.multiply(gj, gi), cover.power(gi, p - 1))
            right = cover.multiply(gj, cover.word_element(cover.powers.get(i, ())))
            defects.append(_tail_defect(cover, n_old, left, right))
            for k in range(j + 1, n_old):
                gk = gens[k]
                left = cover.multiply(gk, cover.multiply(gj, gi))
                right = cover.multiply(cover.multiply(gk, gj), gi)
                defects.append(_tail_defect(cover, n_old, left, right))
    return [d for d in defects if any(d)]


def _relation_defects(
    cover: PcGroup, n_old: int, pres: Presentation, images: dict[str, Element]
) -> list[tuple[list[int], list[int]]]:
    """Input-relation defects, tracked up to recalibration of the images.

    Lifting a generator image by a central tail element z multiplies a
    relation's defect by z raised to the generator's net exponent sum, so
    each relation yields a pair (d, eps): the tail vector d it misses by
    under the current images, plus the exponent-sum coefficients eps with
    which per-generator corrections shift that vector.  A generator that
    only exists as shorthand for a deeper word (its image so far lies in
    earlier layers, or is trivial) gets its image corrected rather than
    wrongly forcing the new layer to die.
    """
    p = cover.p
    index = {g: i for i, g in enumerate(pres.generators)}
    m = len(pres.generators)

    def evaluate(word: PlainWord) -> Element:
        acc = cover.identity()
        for name, exp in word:
            acc = cover.multiply(acc, cover.power(images[name], exp))
        return acc

    rows = []
    for left_w, right_w in pres.all_equations():
        d = _tail_defect(cover, n_old, evaluate(left_w), evaluate(right_w))
        eps = [0] * m
        for name, exp in left_w:
            eps[index[name]] += exp
        for name, exp in right_w:
            eps[index[name]] -= exp
        eps = [e % p for e in eps]
        if any(d) or any(eps):
            rows.append((d, eps))
    return rows


def _solve_corrections(
    relation_rows: list[tuple[list[int], list[int]]], m: int, t: int, p: int
) -> tuple[list[list[int]], list[list[int]]]:
    """Split relation defects into hard constraints and image corrections.

    Eliminates the correction unknowns: each relation row (d, eps) encodes
    d + sum_i eps[i] * z_i = 0 with z_i the unknown tail correction of
    generator i.  Rows whose eps survives elimination fix one z_i; rows
    reduced to eps = 0 leave a tail vector that must die in the quotient.
    Returns (constraint_rows, corrections) with corrections[i] a concrete
    tail vector for generator i (free corrections are set to zero).
    """
    solved: list[tuple[int, list[int], list[int]]] = []
    constraints = []
    for d0, eps0 in relation_rows:
        d = [x % p for x in d0]
        eps = [x % p for x in eps0]
        for piv, dp, ep in solved:
            c = eps[piv]
            if c:
                d = [(x - c * y) % p for x, y in zip(d, dp)]
                eps = [(x - c * y) % p for x, y in zip(eps, ep)]
        piv = next((i for i, c in enumerate(eps) if c), None)
        if piv is None:
            if any(d):
                constraints.append(d)
            continue
        inv = pow(eps[piv], -1, p)
        solved.append((piv, [(inv * x) % p for x in d], [(inv * x) % p for x in eps]))
    corrections = [[0] * t for _ in range(m)]
    for piv, d, eps in reversed(solved):
        acc = [(-x) % p for x in d]
        for j, c in enumerate(eps):
            if j != piv and c:
                acc = [(x - c * y) % p for x, y in zip(acc, corrections[j])]
        corrections[piv] = acc
    return constraints, corrections


def _quotient_cover(
    cover: PcGroup,
    n_old: int,
    rule_tags: list[tuple],
    defects: list[list[int]],
    old_group: PcGroup,
    corrected_images: dict[str, Element],
) -> tuple[PcGroup, dict[str, Element]] | None:
    """Quotient the cover by the defect span; None when the layer is empty."""
    t = cover.n - n_old
    rrows, pivots = rref(defects, cover.p)
    free_cols = [c for c in range(t) if c not in pivots]
    r = len(free_cols)
    if r == 0:
        return None

    def project_vector(v: list[int]) -> list[int]:
        residue = reduce_vector(v, rrows, pivots, cover.p)
        return [residue[c] for c in free_cols]

    def project_tail(k: int) -> tuple[tuple[int, int], ...]:
        v = [0] * t
        v[k] = 1
        residue = project_vector(v)
        return tuple((n_old + c, e) for c, e in enumerate(residue) if e)

    powers = {i: tuple(w) for i, w in old_group.powers.items()}
    conjugates = {ji: tuple(w) for ji, w in old_group.conjugates.items()}
    for k, tag in enumerate(rule_tags):
        tail_word = project_tail(k)
        if not tail_word:
            continue
        if tag[0] == "pow":
            i = tag[1]
            powers[i] = tuple(old_group.powers.get(i, ())) + tail_word
        else:
            _, j, i = tag
            base = old_group.conjugates.get((j, i), ((j, 1),))
            conjugates[(j, i)] = tuple(base) + tail_word
    definitions = dict(old_group.definitions)
    for new_index, c in enumerate(free_cols):
        definitions[n_old + new_index] = rule_tags[c]
    weights = list(old_group.weights) + [old_group.nilpotency_class + 1] * r
    new_group = PcGroup(
        p=cover.p,
        n=n_old + r,
        powers=powers,
        conjugates=conjugates,
        weights=weights,
        definitions=definitions,
    )
    new_images = {
        name: new_group.element(
            tuple(el.exps[:n_old]) + tuple(project_vector(list(el.exps[n_old:])))
        )
        for name, el in corrected_images.items()
    }
    return new_group, new_images


def consistency_check(group: PcGroup) -> list[str]:
    """All collection overlap violations of a pc group (empty iff consistent).

    Function form of PcGroup.consistency_check: runs the associativity
    overlaps g_k(g_j g_i) = (g_k g_j)g_i for k > j > i and the power
    overlaps g_j^p g_i = g_j^{p-1}(g_j g_i), g_j g_i^p = (g_j g_i)g_i^{p-1},
    returning one description string per failing overlap.
    """
    return group.consistency_check()


def refine(pres: Presentation, expected_order: int | None = None) -> RefinedGroup:
    """Refine a presentation to a consistent pc group with generator images.

    Raises OrderCapExceededError past p^6, and InconsistentPresentationError
    when expected_order is supplied and the refined group is smaller (the
    relations collapse the declared group).
    """
    p = pres.params.p
    group, images = _class_one_quotient(pres)
    if group.n > MAX_PC_GENERATORS:
        raise OrderCapExceededError(
            f"group exceeds the p^{MAX_PC_GENERATORS} arithmetic cap at class 1"
        )
    gen_order = list(pres.generators)
    while True:
        cover, rule_tags, t = _build_cover(group)
        cover_images = {
            name: cover.element(tuple(el.exps) + (0,) * t) for name, el in images.items()
        }
        overlap_rows = _overlap_defects(cover, group.n)
        relation_rows = _relation_defects(cover, group.n, pres, cover_images)
        constraint_rows, corrections = _solve_corrections(
            relation_rows, len(gen_order), t, p
        )
        corrected = {}
        for gi, name in enumerate(gen_order):
            el = cover_images[name]
            if any(corrections[gi]):
                shift = cover.element((0,) * group.n + tuple(corrections[gi]))
                el = cover.multiply(el, shift)
            corrected[name] = el
        result = _quotient_cover(
            cover, group.n, rule_tags, overlap_rows + constraint_rows, group, corrected
        )
        if result is None:
            break
        new_group, images = result
        if new_group.n > MAX_PC_GENERATORS:
            raise OrderCapExceededError(
                f"group exceeds the p^{MAX_PC_GENERATORS} arithmetic cap "
                f"(reached {new_group.n} pc generators)"
            )
        group = new_group

    violations = group.consistency_check()
    if violations:
        raise AssertionError(f"refined group failed consistency: {violations[:3]}")
    refined = RefinedGroup(group=group, images=images, presentation=pres)
    for left, right in pres.all_equations():
        if refined.evaluate(left) != refined.evaluate(right):
            raise AssertionError("refined group does not satisfy an input relation")
    if expected_order is not None and group.order != expected_order:
        if group.order < expected_order:
            raise InconsistentPresentationError(
                f"relations collapse {pres.name} to order {group.order}, "
                f"declared {expected_order}"
            )
        raise InconsistentPresentationError(
            f"{pres.name} refined to order {group.order}, declared {expected_order}"
        )
    return refined
