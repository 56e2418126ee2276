"""Parsing and printing of power-commutator presentation files.

The text format (fully described in docs/format.md):

    # comment
    group G_(3,3) prime p
    param r = 1,nu
    [a3,a4] = a2
    [a2,a4] = a1 = b1^(p^2)
    a4^p = b1
    b1^(p^3) = a2^p = a3^p = 1

* ``prime p`` declares a family over every valid odd prime; a literal
  (``prime 5``) pins the presentation to that prime.
* ``param`` lines declare named integer parameters with their admissible
  values, either a comma list (``1,nu``) or an integer span (``0..4``).
* Each remaining line is a chain of words joined by ``=``; every adjacent
  pair is one relation.  Words are ``*``-separated factors; a factor is a
  generator, a commutator literal ``[x,y]`` (meaning x^-1*y^-1*x*y), or
  ``1`` for the identity, optionally raised to an integer exponent
  expression over ``p``, ``nu``, ``omega`` and the declared parameters.
* Every unordered pair of generators whose commutator is never mentioned
  commutes; this applies to all generators, including abbreviations.

Exponents are evaluated to integers at parse time, so a Presentation is
always a concrete finite presentation at a concrete prime.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InputError, ParseError
from .primes import PrimeParams, resolve_params

# A display atom: ("gen", name, exp) or ("comm", x, y, exp).
Atom = tuple
# A display word: tuple of atoms; () is the identity.
DWord = tuple
# A plain word: tuple of (generator name, integer exponent) pairs.
PlainWord = tuple

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<dots>\.\.)"
    r"|(?P<op>[\^\*=\[\],\(\)\+\-]))"
)

_GREEK = {"α": "a", "β": "b", "ν": "nu", "ω": "omega", "·": "*", "−": "-"}

# Group names are free-form (e.g. "G_(3,23)"), so the header line is matched
# as raw text rather than with the relation tokenizer.
_HEADER_RE = re.compile(
    r"group\s+(?P<name>\S+)\s+prime\s+(?P<prime>\S+)(?P<params>(?:\s+param\s+\S+\s*=\s*\S+)*)\s*$"
)
_HEADER_PARAM_RE = re.compile(r"param\s+(\S+?)\s*=\s*(\S+)")


def _normalize(text: str) -> str:
    for k, v in _GREEK.items():
        text = text.replace(k, v)
    return text


def _tokenize(line: str, lineno: int) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(line):
        if line[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(line, pos)
        if not m or m.start() != pos:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno)
        if m.group("int"):
            tokens.append(("int", m.group("int")))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        elif m.group("dots"):
            tokens.append(("op", ".."))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[tuple[str, str]], lineno: int):
        self.tokens = tokens
        self.i = 0
        self.lineno = lineno

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.lineno)
        self.i += 1
        return tok

    def accept(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            return False
        self.i += 1
        return True

    def expect(self, kind: str, value: str | None = None) -> tuple[str, str]:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] if tok else "end of line"
            raise ParseError(f"expected {want!r}, got {got!r}", self.lineno)
        self.i += 1
        return tok

    def error(self, message: str):
        raise ParseError(message, self.lineno)


# --- integer exponent expressions -------------------------------------------


def _parse_expr(ts: _TokenStream, bindings: dict[str, int]) -> int:
    value = _parse_term(ts, bindings)
    while True:
        if ts.accept("op", "+"):
            value += _parse_term(ts, bindings)
        elif ts.accept("op", "-"):
            value -= _parse_term(ts, bindings)
        else:
            return value


def _parse_term(ts: _TokenStream, bindings: dict[str, int]) -> int:
    value = _parse_factor(ts, bindings)
    while True:
        if ts.accept("op", "*"):
            value *= _parse_factor(ts, bindings)
        else:
            tok = ts.peek()
            # implicit multiplication: 2(r-1), 2p, (r-1)(s+1)
            if tok is not None and (tok == ("op", "(") or tok[0] in ("int", "name")):
                value *= _parse_factor(ts, bindings)
            else:
                return value


def _parse_factor(ts: _TokenStream, bindings: dict[str, int]) -> int:
    if ts.accept("op", "-"):
        return -_parse_factor(ts, bindings)
    base = _parse_atom(ts, bindings)
    if ts.accept("op", "^"):
        exponent = _parse_factor(ts, bindings)
        if exponent < 0:
            ts.error("negative exponent inside an exponent expression")
        return base**exponent
    return base


def _parse_atom(ts: _TokenStream, bindings: dict[str, int]) -> int:
    tok = ts.next()
    if tok[0] == "int":
        return int(tok[1])
    if tok[0] == "name":
        if tok[1] not in bindings:
            ts.error(
                f"unknown symbol {tok[1]!r} in exponent "
                f"(known: {', '.join(sorted(bindings))})"
            )
        return bindings[tok[1]]
    if tok == ("op", "("):
        value = _parse_expr(ts, bindings)
        ts.expect("op", ")")
        return value
    ts.error(f"expected an integer, symbol or '(', got {tok[1]!r}")


def _parse_exponent(ts: _TokenStream, bindings: dict[str, int]) -> int:
    """Exponent after '^' in a word: atom, -atom or parenthesized expression."""
    if ts.accept("op", "-"):
        return -_parse_exponent(ts, bindings)
    tok = ts.peek()
    if tok == ("op", "("):
        ts.next()
        value = _parse_expr(ts, bindings)
        ts.expect("op", ")")
        return value
    tok = ts.next()
    if tok[0] == "int":
        return int(tok[1])
    if tok[0] == "name":
        if tok[1] not in bindings:
            ts.error(f"unknown symbol {tok[1]!r} in exponent")
        return bindings[tok[1]]
    ts.error(f"expected an exponent, got {tok[1]!r}")


# --- words and relations -----------------------------------------------------


def _parse_word(ts: _TokenStream, bindings: dict[str, int], gens: dict[str, None]) -> DWord:
    atoms: list[Atom] = []
    while True:
        tok = ts.peek()
        if tok is None:
            ts.error("empty word")
        if tok == ("int", "1"):
            ts.next()
        elif tok == ("op", "["):
            ts.next()
            x = ts.expect("name")[1]
            ts.expect("op", ",")
            y = ts.expect("name")[1]
            ts.expect("op", "]")
            exp = _parse_exponent(ts, bindings) if ts.accept("op", "^") else 1
            gens.setdefault(x)
            gens.setdefault(y)
            if exp != 0:
                atoms.append(("comm", x, y, exp))
        elif tok[0] == "name":
            name = ts.next()[1]
            exp = _parse_exponent(ts, bindings) if ts.accept("op", "^") else 1
            gens.setdefault(name)
            if exp != 0:
                atoms.append(("gen", name, exp))
        else:
            ts.error(f"expected a generator, '[' or '1', got {tok[1]!r}")
        if not ts.accept("op", "*"):
            return tuple(atoms)


def expand_atom(atom: Atom) -> PlainWord:
    """Expand a display atom to (name, exponent) pairs; [x,y] = x^-1 y^-1 x y."""
    if atom[0] == "gen":
        return ((atom[1], atom[2]),)
    _, x, y, exp = atom
    base = ((x, -1), (y, -1), (x, 1), (y, 1))
    if exp >= 0:
        return base * exp
    inverse = ((y, -1), (x, -1), (y, 1), (x, 1))
    return inverse * (-exp)


def expand_word(word: DWord) -> PlainWord:
    out: list[tuple[str, int]] = []
    for atom in word:
        out.extend(expand_atom(atom))
    return tuple(out)


@dataclass
class Presentation:
    """A parsed power-commutator presentation at a concrete odd prime."""

    name: str
    prime_symbolic: bool  # True when the file declared "prime p"
    params: PrimeParams
    bindings: dict[str, int]  # parameter name -> chosen value (excludes p/nu/omega)
    param_ranges: dict[str, list[int]]  # declared admissible values per parameter
    generators: list[str]  # in order of first appearance (declaration order)
    chains: list[list[DWord]]  # each chain: words joined by '=' on one line

    def equations(self) -> list[tuple[PlainWord, PlainWord]]:
        """All relations as plain word equations, chains expanded pairwise."""
        eqs = []
        for chain in self.chains:
            for left, right in zip(chain, chain[1:]):
                eqs.append((expand_word(left), expand_word(right)))
        return eqs

    def mentioned_commutator_pairs(self) -> set[frozenset[str]]:
        pairs = set()
        for chain in self.chains:
            for word in chain:
                for atom in word:
                    if atom[0] == "comm":
                        pairs.add(frozenset((atom[1], atom[2])))
        return pairs

    def trivial_commutator_equations(self) -> list[tuple[PlainWord, PlainWord]]:
        """[x,y] = 1 for every unordered generator pair never mentioned."""
        mentioned = self.mentioned_commutator_pairs()
        eqs = []
        for i, x in enumerate(self.generators):
            for y in self.generators[i + 1 :]:
                if frozenset((x, y)) not in mentioned:
                    eqs.append((expand_word((("comm", x, y, 1),)), ()))
        return eqs

    def all_equations(self) -> list[tuple[PlainWord, PlainWord]]:
        return self.equations() + self.trivial_commutator_equations()

    def declared_relative_orders(self) -> dict[str, int | None]:
        """Best-effort relative order p^k per generator from explicit power relations.

        A relation g^(p^k) = w (w free of g, or the identity) bounds g's order
        relative to the other generators.  Presentations may legally omit such
        a relation when it is a consequence of the others, so None is a valid
        answer here; the refiner determines true orders.
        """
        orders: dict[str, int | None] = {g: None for g in self.generators}
        p = self.params.p
        for chain in self.chains:
            for i, word in enumerate(chain):
                if len(word) != 1 or word[0][0] != "gen":
                    continue
                _, g, exp = word[0]
                k = 0
                e = exp
                while e % p == 0 and e > 0:
                    e //= p
                    k += 1
                if e != 1 or k == 0:
                    continue
                others = [w for j, w in enumerate(chain) if j != i]
                if any(
                    atom[0] == "gen" and atom[1] == g or atom[0] == "comm" and g in atom[1:3]
                    for w in others
                    for atom in w
                ):
                    continue
                if orders[g] is None or p**k < orders[g]:
                    orders[g] = p**k
        return orders


def _atom_text(atom: Atom) -> str:
    if atom[0] == "gen":
        _, name, exp = atom
        body = name
    else:
        _, x, y, exp = atom
        body = f"[{x},{y}]"
    if exp == 1:
        return body
    if exp < 0:
        return f"{body}^({exp})"
    return f"{body}^{exp}"


def _word_text(word: DWord) -> str:
    if not word:
        return "1"
    return "*".join(_atom_text(a) for a in word)


def pretty_print(pres: Presentation) -> str:
    """Canonical text for a Presentation; reparsing it with the same prime and
    bindings yields a structurally identical Presentation."""
    lines = [f"group {pres.name} prime {'p' if pres.prime_symbolic else pres.params.p}"]
    for pname in pres.param_ranges:
        values = ",".join(str(v) for v in pres.param_ranges[pname])
        lines.append(f"param {pname} = {values}")
    for chain in pres.chains:
        lines.append(" = ".join(_word_text(w) for w in chain))
    return "\n".join(lines) + "\n"


def parse_presentation(
    text: str,
    p: int | None = None,
    bindings: dict[str, int] | None = None,
) -> Presentation:
    """Parse presentation text at prime p with the given parameter values.

    p may be omitted when the file pins its prime.  Parameters declared by the
    file default to the first value of their range when not supplied; supplied
    values are checked against the declared range.
    """
    text = _normalize(text)
    raw_lines = text.split("\n")
    name = None
    prime_symbolic = False
    file_prime: int | None = None
    param_range_exprs: list[tuple[str, list[tuple[str, int]], int]] = []
    relation_lines: list[tuple[int, list[tuple[str, str]]]] = []

    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("group"):
            if name is not None:
                raise ParseError("duplicate group header", lineno)
            m = _HEADER_RE.match(line)
            if m is None:
                raise ParseError("malformed header, want 'group <name> prime <p>'", lineno)
            name = m.group("name")
            prime_tok = m.group("prime")
            if prime_tok == "p":
                prime_symbolic = True
            elif prime_tok.isdigit():
                file_prime = int(prime_tok)
            else:
                raise ParseError("prime must be 'p' or an integer literal", lineno)
            for pname, pvals in _HEADER_PARAM_RE.findall(m.group("params") or ""):
                param_range_exprs.append(
                    (lineno, _tokenize(f"{pname} = {pvals}", lineno), lineno)
                )
            continue
        for chunk in line.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            tokens = _tokenize(chunk, lineno)
            if tokens and tokens[0] == ("name", "param"):
                if name is None:
                    raise ParseError("param line before group header", lineno)
                param_range_exprs.append((lineno, tokens[1:], lineno))
            else:
                if name is None:
                    raise ParseError("relation before group header", lineno)
                relation_lines.append((lineno, tokens))

    if name is None:
        raise ParseError("missing 'group <name> prime <p>' header")

    if file_prime is not None:
        if p is not None and p != file_prime:
            raise InputError(
                f"presentation {name} is pinned to p = {file_prime}, got p = {p}"
            )
        p = file_prime
    if p is None:
        raise InputError(f"presentation {name} needs a prime (family over p)")
    params = resolve_params(p)

    base_bindings = {"p": params.p, "nu": params.nu, "omega": params.omega}
    param_ranges: dict[str, list[int]] = {}
    for lineno, tokens, _ in param_range_exprs:
        ts = _TokenStream(tokens, lineno)
        pname = ts.expect("name")[1]
        if pname in base_bindings or pname in param_ranges:
            ts.error(f"parameter {pname!r} already defined")
        ts.expect("op", "=")
        first = _parse_expr(ts, base_bindings)
        values: list[int]
        if ts.accept("op", ".."):
            last = _parse_expr(ts, base_bindings)
            if last < first:
                ts.error(f"empty range {first}..{last}")
            values = list(range(first, last + 1))
        else:
            values = [first]
            while ts.accept("op", ","):
                values.append(_parse_expr(ts, base_bindings))
        if ts.peek() is not None:
            ts.error("trailing tokens after param range")
        param_ranges[pname] = values

    chosen: dict[str, int] = {}
    supplied = dict(bindings or {})
    for pname, values in param_ranges.items():
        if pname in supplied:
            value = supplied.pop(pname)
            if value not in values:
                raise InputError(
                    f"parameter {pname} = {value} outside declared range {values}"
                )
            chosen[pname] = value
        else:
            chosen[pname] = values[0]
    if supplied:
        raise InputError(f"unknown parameters supplied: {sorted(supplied)}")

    eval_bindings = dict(base_bindings)
    eval_bindings.update(chosen)

    generators: dict[str, None] = {}
    chains: list[list[DWord]] = []
    for lineno, tokens in relation_lines:
        ts = _TokenStream(tokens, lineno)
        chain = [_parse_word(ts, eval_bindings, generators)]
        while ts.accept("op", "="):
            chain.append(_parse_word(ts, eval_bindings, generators))
        if ts.peek() is not None:
            ts.error(f"unexpected token {ts.peek()[1]!r} after relation")
        if len(chain) < 2:
            ts.error("a relation needs an '=' sign")
        chains.append(chain)

    if not generators:
        raise ParseError("presentation has no generators")

    return Presentation(
        name=name,
        prime_symbolic=prime_symbolic,
        params=params,
        bindings=chosen,
        param_ranges=param_ranges,
        generators=list(generators),
        chains=chains,
    )
