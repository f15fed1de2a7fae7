"""Group presentations given by shortlex-reducing rewriting systems.

A presentation file looks like::

    [group]
    name = F2_rel_a
    generators = a A b B        # position 2i+1 is the inverse of position 2i
    involutions = c             # optional: self-inverse generators
    rules = aA-> ; Aa-> ; bB-> ; Bb->
    [peripheral]
    generators = a A
    confluence_check_length = 8

Words are tuples of generator indices; the declared generator order fixes
the shortlex order used for rule orientation and normal forms.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import (
    ConfluenceError,
    NotInCosetError,
    PresentationError,
    PresentationSyntaxError,
)

Word = tuple[int, ...]

#: Returned by :func:`peripheral_distance` for elements in different cosets.
NOT_SAME_COSET = math.inf

DEFAULT_CONFLUENCE_LENGTH = 8
FIXTURE_DIR = Path(__file__).with_name("fixtures")


def shortlex_key(word: Word) -> tuple[int, Word]:
    return (len(word), word)


@dataclass(frozen=True)
class GeneratorSet:
    symbols: tuple[str, ...]
    inverse_of: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise PresentationError("generator symbols must be unique")
        if len(self.inverse_of) != len(self.symbols):
            raise PresentationError("inverse table has the wrong length")
        for i, j in enumerate(self.inverse_of):
            if not 0 <= j < len(self.symbols) or self.inverse_of[j] != i:
                raise PresentationError("inverse_of must be an involution")

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def invert(self, word: Word) -> Word:
        inv = self.inverse_of
        return tuple(inv[x] for x in reversed(word))

    def format(self, word: Word) -> str:
        sep = "" if all(len(s) == 1 for s in self.symbols) else " "
        return sep.join(self.symbols[x] for x in word)

    def parse(self, text: str) -> Word:
        """Tokenize ``text`` by greedy longest match; whitespace is ignored."""
        word, _ = self._tokenize(text)
        return word

    def _tokenize(self, text: str) -> tuple[Word, int | None]:
        # returns (word, offset of first unknown character or None)
        by_len = sorted(self.symbols, key=len, reverse=True)
        index = self.index
        out: list[int] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            for sym in by_len:
                if text.startswith(sym, pos):
                    out.append(index[sym])
                    pos += len(sym)
                    break
            else:
                return tuple(out), pos
        return tuple(out), None


@dataclass(frozen=True)
class RewritingSystem:
    rules: tuple[tuple[Word, Word], ...]
    table: dict = field(init=False, repr=False, compare=False)
    lengths: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        table = {}
        for lhs, rhs in self.rules:
            if not shortlex_key(rhs) < shortlex_key(lhs):
                raise PresentationError("rule is not shortlex-decreasing")
            if lhs in table and table[lhs] != rhs:
                raise PresentationError("two rules share a left-hand side")
            table[lhs] = rhs
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "lengths", tuple(sorted({len(l) for l in table})))

    @property
    def max_lhs(self) -> int:
        return self.lengths[-1] if self.lengths else 0

    def reduce(self, word: Word) -> Word:
        """Rewrite to an irreducible word (leftmost-innermost strategy)."""
        table = self.table
        lengths = self.lengths
        if not lengths:
            return tuple(word)
        out: list[int] = []
        pending = list(reversed(word))
        while pending:
            out.append(pending.pop())
            n = len(out)
            for L in lengths:
                if L > n:
                    break
                rhs = table.get(tuple(out[n - L:]))
                if rhs is not None:
                    del out[n - L:]
                    pending.extend(reversed(rhs))
                    break
        return tuple(out)

    def one_step_rewrites(self, word: Word) -> Iterator[Word]:
        """All words reachable from ``word`` by a single rule application."""
        table = self.table
        for L in self.lengths:
            for i in range(len(word) - L + 1):
                rhs = table.get(word[i:i + L])
                if rhs is not None:
                    yield word[:i] + rhs + word[i + L:]

    def critical_words(self, max_length: int) -> Iterator[tuple[Word, Word, Word]]:
        """Overlap and inclusion words up to ``max_length`` with their two rewrites."""
        rules = sorted(self.table.items())
        for (l1, r1), (l2, r2) in itertools.product(rules, repeat=2):
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    w = l1 + l2[k:]
                    if len(w) <= max_length:
                        yield w, r1 + l2[k:], l1[:-k] + r2
            if len(l2) < len(l1) and len(l1) <= max_length:
                for p in range(len(l1) - len(l2) + 1):
                    if l1[p:p + len(l2)] == l2:
                        yield l1, r1, l1[:p] + r2 + l1[p + len(l2):]


@dataclass(frozen=True)
class ConfluenceReport:
    length: int
    passed: bool
    witness: Word | None = None
    forms: tuple[Word, Word] | None = None
    gens: GeneratorSet | None = field(default=None, repr=False, compare=False)

    def __bool__(self) -> bool:
        return self.passed

    @property
    def witness_text(self) -> str | None:
        if self.witness is None or self.gens is None:
            return None
        return self.gens.format(self.witness)

    @property
    def forms_text(self) -> list[str] | None:
        if self.forms is None or self.gens is None:
            return None
        return [self.gens.format(f) or "e" for f in self.forms]

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "passed": self.passed,
            "witness": self.witness_text,
            "normal_forms": self.forms_text,
        }


@dataclass(frozen=True)
class GroupPresentation:
    name: str
    gens: GeneratorSet
    rws: RewritingSystem
    confluence_length: int = DEFAULT_CONFLUENCE_LENGTH
    _nf_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def normal_form(self, word: Word) -> Word:
        word = tuple(word)
        cache = self._nf_cache
        nf = cache.get(word)
        if nf is None:
            nf = self.rws.reduce(word)
            if len(cache) < 1_000_000:
                cache[word] = nf
        return nf

    def multiply(self, *words: Word) -> Word:
        return self.normal_form(tuple(itertools.chain.from_iterable(words)))

    def inverse(self, word: Word) -> Word:
        return self.normal_form(self.gens.invert(word))

    def word(self, text: str) -> Word:
        return self.gens.parse(text)

    def format(self, word: Word) -> str:
        return self.gens.format(word) or "e"

    def summary(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.gens.symbols),
            "inverses": [self.gens.symbols[j] for j in self.gens.inverse_of],
            "rules": [
                f"{self.gens.format(l)}->{self.gens.format(r)}" for l, r in self.rws.rules
            ],
            "confluence_check_length": self.confluence_length,
        }


@dataclass(frozen=True)
class PeripheralSpec:
    sub_gens: frozenset[int]
    normal_form_closed: bool = True

    def is_word_in(self, word: Word) -> bool:
        sub = self.sub_gens
        return all(x in sub for x in word)

    def generator_list(self) -> list[int]:
        return sorted(self.sub_gens)


# ---------------------------------------------------------------------------
# parsing

_KEY_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)$")
_SECTION_RE = re.compile(r"^\s*\[\s*([A-Za-z_]+)\s*\]\s*$")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _read_sections(text: str) -> dict[str, dict[str, tuple[str, int, int]]]:
    sections: dict[str, dict[str, tuple[str, int, int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1).lower()
            if current not in ("group", "peripheral"):
                raise PresentationSyntaxError(f"unknown section [{current}]", lineno, 1)
            if current in sections:
                raise PresentationSyntaxError(f"duplicate section [{current}]", lineno, 1)
            sections[current] = {}
            continue
        m = _KEY_RE.match(line)
        if m is None:
            col = len(line) - len(line.lstrip()) + 1
            raise PresentationSyntaxError("expected 'key = value'", lineno, col)
        if current is None:
            raise PresentationSyntaxError("key outside of a section", lineno, 1)
        key = m.group(1).lower()
        col = m.start(2) + 1
        entries = sections[current]
        if key == "rules" and key in entries:
            # repeated rules lines accumulate
            prev, l0, c0 = entries[key]
            entries[key] = (prev + ";" + m.group(2), l0, c0)
            continue
        if key in entries:
            raise PresentationSyntaxError(f"duplicate key {key!r}", lineno, 1)
        entries[key] = (m.group(2), lineno, col)
    return sections


def _parse_int(entry: tuple[str, int, int], what: str) -> int:
    value, line, col = entry
    try:
        n = int(value.strip())
    except ValueError:
        raise PresentationSyntaxError(f"{what} must be an integer", line, col) from None
    if n <= 0:
        raise PresentationSyntaxError(f"{what} must be positive", line, col)
    return n


def _parse_bool(entry: tuple[str, int, int], what: str) -> bool:
    value, line, col = entry
    v = value.strip().lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise PresentationSyntaxError(f"{what} must be true or false", line, col)


def _parse_generators(group: dict) -> GeneratorSet:
    if "generators" not in group:
        raise PresentationError("[group] section needs a generators line")
    value, line, col = group["generators"]
    paired = value.split()
    if len(paired) % 2:
        raise PresentationSyntaxError(
            "generators must list symbol/inverse pairs (even length)", line, col
        )
    invol = group["involutions"][0].split() if "involutions" in group else []
    symbols = tuple(paired + invol)
    inverse = []
    for i in range(len(paired)):
        inverse.append(i ^ 1)
    inverse.extend(range(len(paired), len(symbols)))
    if len(set(symbols)) != len(symbols):
        raise PresentationSyntaxError("generator symbols must be unique", line, col)
    return GeneratorSet(symbols, tuple(inverse))


def _parse_rules(gens: GeneratorSet, entry) -> tuple[tuple[Word, Word], ...]:
    value, line, col0 = entry
    rules = []
    offset = 0
    for chunk in value.split(";"):
        col = col0 + offset
        offset += len(chunk) + 1
        if not chunk.strip():
            continue
        if "->" not in chunk:
            raise PresentationSyntaxError("rule needs '->'", line, col)
        lhs_text, rhs_text = chunk.split("->", 1)
        sides = []
        for part, base in ((lhs_text, col), (rhs_text, col + len(lhs_text) + 2)):
            word, bad = gens._tokenize(part)
            if bad is not None:
                raise PresentationError(
                    f"line {line}, column {base + bad}: unknown symbol in rule "
                    f"{chunk.strip()!r}"
                )
            sides.append(word)
        lhs, rhs = sides
        if not lhs:
            raise PresentationSyntaxError("rule has an empty left-hand side", line, col)
        if not shortlex_key(rhs) < shortlex_key(lhs):
            raise PresentationError(
                f"line {line}: rule {chunk.strip()!r} is not order-decreasing "
                "(shortlex)"
            )
        rules.append((lhs, rhs))
    return tuple(rules)


def parse_presentation(
    text: str, check_confluence: bool = True
) -> tuple[GroupPresentation, PeripheralSpec | None]:
    """Parse a presentation file into a validated presentation and peripheral.

    With ``check_confluence`` the system is checked up to the declared
    confluence length and :class:`ConfluenceError` is raised on failure.
    """
    sections = _read_sections(text)
    if "group" not in sections:
        raise PresentationError("missing [group] section")
    group = sections["group"]
    unknown = set(group) - {"name", "generators", "involutions", "rules", "confluence_check_length"}
    if unknown:
        key = sorted(unknown)[0]
        raise PresentationSyntaxError(f"unknown key {key!r}", group[key][1], 1)
    gens = _parse_generators(group)
    rules = _parse_rules(gens, group["rules"]) if "rules" in group else ()
    name = group["name"][0].strip() if "name" in group else "group"

    periph = sections.get("peripheral", {})
    unknown = set(periph) - {"generators", "confluence_check_length", "normal_form_closed"}
    if unknown:
        key = sorted(unknown)[0]
        raise PresentationSyntaxError(f"unknown key {key!r}", periph[key][1], 1)
    length = DEFAULT_CONFLUENCE_LENGTH
    for sec in (group, periph):
        if "confluence_check_length" in sec:
            length = _parse_int(sec["confluence_check_length"], "confluence_check_length")

    try:
        rws = RewritingSystem(rules)
    except PresentationError as exc:
        raise PresentationError(f"line {group['rules'][1]}: {exc}") from None
    pres = GroupPresentation(name, gens, rws, length)
    if check_confluence:
        report = bounded_confluence_check(pres, max(length, rws.max_lhs))
        if not report:
            raise ConfluenceError(report)

    peripheral = None
    if "generators" in periph:
        value, line, col = periph["generators"]
        index = gens.index
        sub = []
        for tok in value.split():
            if tok not in index:
                raise PresentationError(
                    f"line {line}: peripheral generator {tok!r} is not a group generator"
                )
            sub.append(index[tok])
        closed = True
        if "normal_form_closed" in periph:
            closed = _parse_bool(periph["normal_form_closed"], "normal_form_closed")
        peripheral = make_peripheral(pres, sub, closed, length)
    return pres, peripheral


def make_peripheral(
    pres: GroupPresentation,
    sub_gens: Iterable[int],
    normal_form_closed: bool = True,
    check_length: int | None = None,
) -> PeripheralSpec:
    sub = frozenset(sub_gens)
    inv = pres.gens.inverse_of
    if any(inv[x] not in sub for x in sub):
        raise PresentationError("peripheral generators must be closed under inverses")
    spec = PeripheralSpec(sub, normal_form_closed)
    if normal_form_closed:
        bad = normal_form_closure_violation(pres, spec, check_length or pres.confluence_length)
        if bad is not None:
            raise PresentationError(
                "peripheral subgroup is not normal-form closed: "
                f"{pres.format(bad[0])} reduces to {pres.format(bad[1])}"
            )
    return spec


def normal_form_closure_violation(
    pres: GroupPresentation, k: PeripheralSpec, length: int
) -> tuple[Word, Word] | None:
    """First K-word of length <= ``length`` whose normal form leaves K, if any."""
    gens = k.generator_list()
    layer = {()}
    seen = {()}
    for _ in range(length):
        nxt = set()
        for w in sorted(layer, key=shortlex_key):
            for x in gens:
                word = w + (x,)
                nf = pres.normal_form(word)
                if not k.is_word_in(nf):
                    return word, nf
                if nf not in seen:
                    seen.add(nf)
                    nxt.add(nf)
        layer = nxt
        if not layer:
            break
    return None


def load_presentation(path, check_confluence: bool = True):
    """Read a presentation from a path or a bundled fixture name."""
    return parse_presentation(read_fixture_text(path), check_confluence)


def resolve_fixture(path) -> Path:
    p = Path(path)
    if p.exists():
        return p
    for cand in (FIXTURE_DIR / p.name, FIXTURE_DIR / f"{p.name}.grp"):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no presentation file or bundled fixture named {path!s}")


def read_fixture_text(path) -> str:
    return resolve_fixture(path).read_text(encoding="utf-8")


# ---------------------------------------------------------------------------
# word problem and peripheral queries


def normal_form(w: Sequence[int] | str, p: GroupPresentation) -> Word:
    if isinstance(w, str):
        w = p.word(w)
    return p.normal_form(tuple(w))


def bounded_confluence_check(p: GroupPresentation, L_conf: int) -> ConfluenceReport:
    """Check that every word of length <= ``L_conf`` has a unique normal form.

    Rewriting never lengthens a word, so the words of length <= L_conf are
    closed under rewriting and local confluence there implies confluence.
    Non-overlapping redexes always commute, hence only overlap and inclusion
    words need to be examined.
    """
    if L_conf < p.rws.max_lhs:
        raise ValueError("L_conf must be at least the longest left-hand side")
    rws = p.rws
    for word, w1, w2 in rws.critical_words(L_conf):
        n1, n2 = rws.reduce(w1), rws.reduce(w2)
        if n1 != n2:
            return ConfluenceReport(L_conf, False, word, (n1, n2), p.gens)
    return ConfluenceReport(L_conf, True, gens=p.gens)


def is_peripheral_member(w, p: GroupPresentation, k: PeripheralSpec) -> bool:
    if not k.normal_form_closed:
        raise PresentationError("membership needs a normal-form-closed peripheral")
    return k.is_word_in(normal_form(w, p))


def peripheral_distance(w1, w2, p: GroupPresentation, k: PeripheralSpec):
    """d_K between two elements of one coset, or NOT_SAME_COSET."""
    if isinstance(w1, str):
        w1 = p.word(w1)
    if isinstance(w2, str):
        w2 = p.word(w2)
    nf = p.normal_form(p.gens.invert(tuple(w1)) + tuple(w2))
    if not k.normal_form_closed:
        raise PresentationError("d_K needs a normal-form-closed peripheral")
    if not k.is_word_in(nf):
        return NOT_SAME_COSET
    return len(nf)


def require_same_coset(w1, w2, p, k) -> int:
    d = peripheral_distance(w1, w2, p, k)
    if d is NOT_SAME_COSET:
        raise NotInCosetError("elements lie in different cosets of K")
    return d
