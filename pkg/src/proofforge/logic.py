"""EL / ELI syntax: concepts, GCIs, theories, a text parser and the ELI normalizer."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Union

FRESH_PREFIX = "_N"
KEYWORDS = frozenset({"top", "and", "ex", "all"})


class LogicError(ValueError):
    """Base error; ``code`` is the machine-readable tag used by the CLI."""

    code = "logic"


class ParseError(LogicError):
    code = "syntax"

    def __init__(self, message: str, line: int = 0, col: int = 0) -> None:
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(where + message)


class DialectError(ParseError):
    code = "dialect"


class UnsupportedGoal(LogicError):
    code = "unsupported-goal"


# --------------------------------------------------------------------------- roles / concepts


@dataclass(frozen=True)
class Role:
    name: str
    inverted: bool = False

    def inverse(self) -> Role:
        return Role(self.name, not self.inverted)

    def render(self) -> str:
        return f"inv({self.name})" if self.inverted else self.name

    def __str__(self) -> str:
        return self.name + ("⁻" if self.inverted else "")


@dataclass(frozen=True)
class Top:
    def render(self) -> str:
        return "top"

    def __str__(self) -> str:
        return "⊤"

    @property
    def size(self) -> int:
        return 1


@dataclass(frozen=True)
class Name:
    name: str

    def render(self) -> str:
        return self.name

    def __str__(self) -> str:
        return self.name

    @property
    def size(self) -> int:
        return 1


@dataclass(frozen=True)
class And:
    """n-ary conjunction.  Build through :func:`conj` to get the canonical form."""

    conjuncts: tuple

    def render(self) -> str:
        return "(" + " and ".join(c.render() for c in self.conjuncts) + ")"

    def __str__(self) -> str:
        return " ⊓ ".join(_wrap(c) for c in self.conjuncts)

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.conjuncts)


@dataclass(frozen=True)
class Exists:
    role: Role
    filler: "Concept"

    def render(self) -> str:
        return f"ex {self.role.render()}. {_paren(self.filler)}"

    def __str__(self) -> str:
        return f"∃{self.role}.{_wrap(self.filler)}"

    @cached_property
    def size(self) -> int:
        return 1 + self.filler.size


@dataclass(frozen=True)
class Forall:
    role: Role
    filler: "Concept"

    def render(self) -> str:
        return f"all {self.role.render()}. {_paren(self.filler)}"

    def __str__(self) -> str:
        return f"∀{self.role}.{_wrap(self.filler)}"

    @cached_property
    def size(self) -> int:
        return 1 + self.filler.size


Concept = Union[Top, Name, And, Exists, Forall]
TOP = Top()


def _wrap(c: Concept) -> str:
    return f"({c})" if isinstance(c, And) else str(c)


def _paren(c: Concept) -> str:
    # And already renders its own parentheses
    return c.render()


def concept_key(c: Concept) -> str:
    return c.render()


def conj(*parts: Concept) -> Concept:
    """Canonical conjunction: flattened, ⊤ dropped, duplicates removed, sorted."""
    flat: dict[str, Concept] = {}
    for p in parts:
        items = p.conjuncts if isinstance(p, And) else (p,)
        for c in items:
            if isinstance(c, Top):
                continue
            flat.setdefault(concept_key(c), c)
    if not flat:
        return TOP
    if len(flat) == 1:
        return next(iter(flat.values()))
    return And(tuple(flat[k] for k in sorted(flat)))


def names_conj(names: Iterable[str]) -> Concept:
    return conj(*(Name(n) for n in names))


def conjunct_names(c: Concept) -> frozenset[str] | None:
    """The name set of a conjunction of names (⊤ = empty set), or None."""
    if isinstance(c, Top):
        return frozenset()
    if isinstance(c, Name):
        return frozenset((c.name,))
    if isinstance(c, And) and all(isinstance(x, Name) for x in c.conjuncts):
        return frozenset(x.name for x in c.conjuncts)
    return None


def canonical(c: Concept) -> Concept:
    if isinstance(c, And):
        return conj(*(canonical(x) for x in c.conjuncts))
    if isinstance(c, Exists):
        return Exists(c.role, canonical(c.filler))
    if isinstance(c, Forall):
        return Forall(c.role, canonical(c.filler))
    return c


def iter_subconcepts(c: Concept) -> Iterator[Concept]:
    yield c
    if isinstance(c, And):
        for x in c.conjuncts:
            yield from iter_subconcepts(x)
    elif isinstance(c, (Exists, Forall)):
        yield from iter_subconcepts(c.filler)


def concept_names(c: Concept) -> set[str]:
    return {x.name for x in iter_subconcepts(c) if isinstance(x, Name)}


def _uses_eli(c: Concept) -> bool:
    for x in iter_subconcepts(c):
        if isinstance(x, Forall):
            return True
        if isinstance(x, Exists) and x.role.inverted:
            return True
    return False


# --------------------------------------------------------------------------- sentences


@dataclass(frozen=True)
class Gci:
    lhs: Concept
    rhs: Concept

    def render(self) -> str:
        return f"{self.lhs.render()} <= {self.rhs.render()}"

    def __str__(self) -> str:
        return f"{self.lhs} ⊑ {self.rhs}"

    @property
    def size(self) -> int:
        return self.lhs.size + self.rhs.size

    @cached_property
    def key(self) -> str:
        return self.render()


Sentence = Gci


def gci(lhs: Concept, rhs: Concept) -> Gci:
    return Gci(canonical(lhs), canonical(rhs))


@dataclass(frozen=True)
class Theory:
    axioms: tuple[Gci, ...]
    dialect: str = "EL"

    def __post_init__(self) -> None:
        if self.dialect not in ("EL", "ELI"):
            raise DialectError(f"unknown dialect {self.dialect!r}")
        if self.dialect == "EL":
            for ax in self.axioms:
                if _uses_eli(ax.lhs) or _uses_eli(ax.rhs):
                    raise DialectError(f"axiom {ax.render()!r} is not EL")

    @cached_property
    def axiom_set(self) -> frozenset[Gci]:
        return frozenset(self.axioms)

    def __contains__(self, s: object) -> bool:
        return s in self.axiom_set

    def __iter__(self) -> Iterator[Gci]:
        return iter(self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)

    @property
    def size(self) -> int:
        return sum(a.size for a in self.axioms)

    def names(self) -> set[str]:
        out: set[str] = set()
        for a in self.axioms:
            out |= concept_names(a.lhs) | concept_names(a.rhs)
        return out

    def render(self) -> str:
        lines = [f"dialect {self.dialect}"] if self.dialect == "ELI" else []
        lines += [a.render() for a in self.axioms]
        return "\n".join(lines) + "\n"

    def extend(self, more: Iterable[Gci], dialect: str | None = None) -> Theory:
        seen = dict.fromkeys(self.axioms)
        for a in more:
            seen.setdefault(a)
        return Theory(tuple(seen), dialect or self.dialect)


# --------------------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(<=)|([().])|([A-Za-z_][A-Za-z0-9_]*))")


@dataclass
class _Tok:
    text: str
    line: int
    col: int


@dataclass
class _Parser:
    toks: list[_Tok]
    line: int
    allow_eli: bool
    pos: int = 0
    used_eli: bool = field(default=False)
    end: int = 0  # column just past the last character

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected: str | None = None) -> _Tok:
        t = self.peek()
        if t is None:
            raise ParseError(f"unexpected end of axiom{f', expected {expected!r}' if expected else ''}",
                             self.line, self.end)
        if expected is not None and t.text != expected:
            raise ParseError(f"expected {expected!r}, got {t.text!r}", t.line, t.col)
        self.pos += 1
        return t

    def name(self) -> str:
        t = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", t.text):
            raise ParseError(f"expected a name, got {t.text!r}", t.line, t.col)
        if t.text.startswith(FRESH_PREFIX):
            raise ParseError(f"names starting with {FRESH_PREFIX!r} are reserved", t.line, t.col)
        if t.text.startswith("_"):
            raise ParseError(f"invalid name {t.text!r}", t.line, t.col)
        if t.text in KEYWORDS:
            raise ParseError(f"keyword {t.text!r} used as a name", t.line, t.col)
        return t.text

    def role(self) -> Role:
        t = self.peek()
        if t is not None and t.text == "inv":
            nxt = self.toks[self.pos + 1] if self.pos + 1 < len(self.toks) else None
            if nxt is not None and nxt.text == "(":
                self.pos += 2
                r = Role(self.name(), True)
                self.take(")")
                if not self.allow_eli:
                    raise DialectError("inverse role in an EL theory", t.line, t.col)
                self.used_eli = True
                return r
        return Role(self.name())

    def primary(self) -> Concept:
        t = self.peek()
        if t is None:
            raise ParseError("expected a concept", self.line, self.end)
        if t.text == "top":
            self.pos += 1
            return TOP
        if t.text == "(":
            self.pos += 1
            c = self.concept()
            self.take(")")
            return c
        if t.text in ("ex", "all"):
            self.pos += 1
            r = self.role()
            self.take(".")
            filler = self.primary()
            if t.text == "all":
                if not self.allow_eli:
                    raise DialectError("value restriction in an EL theory", t.line, t.col)
                self.used_eli = True
                return Forall(r, filler)
            return Exists(r, filler)
        return Name(self.name())

    def concept(self) -> Concept:
        c = self.primary()
        while (t := self.peek()) is not None and t.text == "and":
            self.pos += 1
            c = And((c, self.primary()))
        return c


def _tokenize(text: str, line: int) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    while i < len(text):
        if text[i:].strip() == "":
            break
        m = _TOKEN.match(text, i)
        if m is None:
            j = i
            while j < len(text) and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", line, j + 1)
        tok = m.group(m.lastindex)
        toks.append(_Tok(tok, line, m.start(m.lastindex) + 1))
        i = m.end()
    return toks


def parse_concept(text: str, dialect: str = "ELI") -> Concept:
    p = _Parser(_tokenize(text, 1), 1, dialect == "ELI", end=len(text.rstrip()) + 1)
    c = p.concept()
    if p.peek() is not None:
        t = p.peek()
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return canonical(c)


def parse_axiom(text: str, line: int = 1, dialect: str = "ELI") -> Gci:
    p = _Parser(_tokenize(text, line), line, dialect == "ELI", end=len(text.rstrip()) + 1)
    lhs = p.concept()
    p.take("<=")
    rhs = p.concept()
    if (t := p.peek()) is not None:
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return gci(lhs, rhs)


def parse_theory(text: str, dialect: str | None = None) -> Theory:
    """Parse the line-based theory format.

    A ``dialect EL`` / ``dialect ELI`` line declares the dialect; without one the
    theory is EL unless it uses inverse roles or value restrictions.
    """
    declared = dialect
    axioms: list[Gci] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        words = line.split()
        if words[0] == "dialect":
            if len(words) != 2 or words[1] not in ("EL", "ELI"):
                raise ParseError("dialect line must be 'dialect EL' or 'dialect ELI'", lineno, 1)
            if axioms:
                raise ParseError("dialect line must precede all axioms", lineno, 1)
            if declared is None:
                declared = words[1]
            continue
        axioms.append(parse_axiom(line, lineno, "EL" if declared == "EL" else "ELI"))
    if declared is None:
        declared = "ELI" if any(_uses_eli(a.lhs) or _uses_eli(a.rhs) for a in axioms) else "EL"
    return Theory(tuple(axioms), declared)


# --------------------------------------------------------------------------- subconcepts


def subconcepts(theory: Theory | Iterable[Gci], goal: Gci | None = None) -> set[Concept]:
    out: set[Concept] = {TOP}
    sentences = list(theory) + ([goal] if goal is not None else [])
    for s in sentences:
        out.update(iter_subconcepts(s.lhs))
        out.update(iter_subconcepts(s.rhs))
    return out


# --------------------------------------------------------------------------- ELI normal form


def is_eli_normal(ax: Gci) -> bool:
    if conjunct_names(ax.lhs) is None:
        return False
    r = ax.rhs
    if isinstance(r, Name):
        return True
    if isinstance(r, Exists):
        return conjunct_names(r.filler) is not None
    if isinstance(r, Forall):
        return isinstance(r.filler, Name)
    return False


class _Fresh:
    def __init__(self, start: int = 0) -> None:
        self.k = start

    def __call__(self) -> Name:
        self.k += 1
        return Name(f"{FRESH_PREFIX}{self.k}")


def normalize_eli(theory: Theory) -> tuple[Theory, dict[int, int]]:
    """Structural transformation into ``K ⊑ A | ∃r.M | ∀r.A``.

    Returns the normalized theory and a map from each new axiom index to the
    index of the input axiom it came from.
    """
    used = [int(n[len(FRESH_PREFIX):]) for n in theory.names() if re.fullmatch(FRESH_PREFIX + r"\d+", n)]
    fresh = _Fresh(max(used, default=0))
    out: dict[Gci, int] = {}

    def emit(ax: Gci, src: int) -> None:
        out.setdefault(ax, src)

    def name_for(c: Concept, src: int) -> Name:
        # fresh X with X ⊑ c for a complex concept in positive position
        if isinstance(c, Name):
            return c
        x = fresh()
        rhs_into(x, c, src)
        return x

    def filler_names(c: Concept, src: int) -> Concept:
        parts = c.conjuncts if isinstance(c, And) else (c,)
        return conj(*(name_for(p, src) for p in parts if not isinstance(p, Top)))

    def rhs_into(lhs: Concept, rhs: Concept, src: int) -> None:
        # lhs is already a conjunction of names
        if isinstance(rhs, Top):
            return
        if isinstance(rhs, And):
            for c in rhs.conjuncts:
                rhs_into(lhs, c, src)
        elif isinstance(rhs, Name):
            emit(Gci(lhs, rhs), src)
        elif isinstance(rhs, Exists):
            emit(Gci(lhs, Exists(rhs.role, filler_names(rhs.filler, src))), src)
        elif isinstance(rhs, Forall):
            if isinstance(rhs.filler, Top):
                return
            if isinstance(rhs.filler, And):
                for c in rhs.filler.conjuncts:
                    rhs_into(lhs, Forall(rhs.role, c), src)
                return
            emit(Gci(lhs, Forall(rhs.role, name_for(rhs.filler, src))), src)

    def lhs_exists(p: Exists, src: int) -> Name:
        x = fresh()
        inner = _lhs_as_names(p.filler, src)
        rhs_into(inner, Forall(p.role.inverse(), x), src)
        return x

    def _lhs_as_names(c: Concept, src: int) -> Concept:
        parts = c.conjuncts if isinstance(c, And) else (c,)
        names: list[Concept] = []
        for p in parts:
            if isinstance(p, Top):
                continue
            if isinstance(p, Name):
                names.append(p)
            elif isinstance(p, Exists):
                names.append(lhs_exists(p, src))
            elif isinstance(p, Forall):
                raise LogicError(f"value restriction on the left-hand side is not Horn-ELI: {p.render()}")
        return conj(*names)

    for i, ax in enumerate(theory.axioms):
        lhs = _lhs_as_names(ax.lhs, i)
        rhs_into(lhs, ax.rhs, i)

    axioms = tuple(out)
    return Theory(axioms, "ELI"), {k: out[a] for k, a in enumerate(axioms)}


# --------------------------------------------------------------------------- entailment


def entails(theory: Theory, goal: Gci) -> bool:
    """Entailment via saturation with the matching deriver."""
    from . import derivers

    if theory.dialect == "EL" and not (_uses_eli(goal.lhs) or _uses_eli(goal.rhs)):
        return derivers.elk_derivable(theory, goal)
    if not (isinstance(goal.lhs, Name) and isinstance(goal.rhs, Name)):
        raise UnsupportedGoal("ELI entailment is supported for goals A ⊑ B over concept names")
    normal, _ = normalize_eli(theory)
    return derivers.eli_derivable(normal, goal)
