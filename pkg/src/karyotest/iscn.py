"""A recursive-descent parser for a subset of ISCN karyotype notation.

Grammar (no whitespace, case-sensitive)::

    karyotype := count "," sex ("," event)*
    sex       := ("X" | "Y" | "N")+
    event     := "+" chr | "-" chr
               | "t(" chr ";" chr ")(" band ";" band ")"
               | "del(" chr ")(" band [band] ")"
               | "inv(" chr ")(" band band ")"
               | "dup(" chr ")(" band band ")"
    chr       := 1..22 | "X" | "Y"
    band      := ("p" | "q") digits ["." digits]

Mosaics, derivative chromosomes and uncertain assignments are rejected.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .errors import KaryotestError

CHROMOSOMES = tuple([str(i) for i in range(1, 23)] + ["X", "Y"])
SEX_SYMBOLS = ("X", "Y", "N")


class ParseError(KaryotestError, ValueError):
    def __init__(self, position: int, expected: str, found: str, row: Optional[int] = None):
        self.position = position
        self.expected = expected
        self.found = found
        self.row = row
        where = f"row {row}, " if row is not None else ""
        super().__init__(f"{where}position {position}: expected {expected}, found {found}")


@dataclass(frozen=True)
class Band:
    arm: str
    digits: str
    sub: Optional[str] = None

    def __str__(self):
        return self.arm + self.digits + (f".{self.sub}" if self.sub is not None else "")

    @property
    def label(self) -> str:
        return str(self)


@dataclass(frozen=True)
class Breakpoint:
    chromosome: str
    band: Band

    def __str__(self):
        return f"{self.chromosome}{self.band}"


@dataclass(frozen=True)
class Gain:
    chromosome: str

    def __str__(self):
        return f"+{self.chromosome}"


@dataclass(frozen=True)
class Loss:
    chromosome: str

    def __str__(self):
        return f"-{self.chromosome}"


@dataclass(frozen=True)
class Translocation:
    first: Breakpoint
    second: Breakpoint

    def __str__(self):
        a, b = self.first, self.second
        return f"t({a.chromosome};{b.chromosome})({a.band};{b.band})"


@dataclass(frozen=True)
class Deletion:
    chromosome: str
    band: Band
    end: Optional[Band] = None

    def __str__(self):
        return f"del({self.chromosome})({self.band}{self.end or ''})"


@dataclass(frozen=True)
class Inversion:
    chromosome: str
    first: Band
    second: Band

    def __str__(self):
        return f"inv({self.chromosome})({self.first}{self.second})"


@dataclass(frozen=True)
class Duplication:
    chromosome: str
    first: Band
    second: Band

    def __str__(self):
        return f"dup({self.chromosome})({self.first}{self.second})"


Event = Union[Gain, Loss, Translocation, Deletion, Inversion, Duplication]


@dataclass(frozen=True)
class Karyotype:
    total: int
    sex: tuple
    events: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sex", tuple(self.sex))
        object.__setattr__(self, "events", tuple(self.events))
        if not isinstance(self.total, int) or self.total < 1:
            raise ValueError("total must be a positive integer")
        if not self.sex or any(s not in SEX_SYMBOLS for s in self.sex):
            raise ValueError(f"bad sex complement {self.sex!r}")

    def __str__(self):
        return render(self)


def render(k: Karyotype) -> str:
    return ",".join([str(k.total), "".join(k.sex)] + [str(e) for e in k.events])


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos:self.pos + 1]

    def fail(self, expected: str):
        found = repr(self.peek()) if self.pos < len(self.text) else "end of input"
        raise ParseError(self.pos, expected, found)

    def expect(self, literal: str, what: str = None):
        for ch in literal:
            if self.peek() != ch:
                self.fail(what or repr(literal))
            self.pos += 1

    def digits(self, what: str) -> str:
        start = self.pos
        while self.peek().isdigit() and self.peek() in "0123456789":
            self.pos += 1
        if self.pos == start:
            self.fail(what)
        return self.text[start:self.pos]

    def count(self) -> int:
        if self.peek() == "0":
            self.fail("a chromosome count without leading zero")
        return int(self.digits("a chromosome count"))

    def chromosome(self) -> str:
        ch = self.peek()
        if ch in ("X", "Y"):
            self.pos += 1
            return ch
        start = self.pos
        if ch in "123456789" and ch:
            self.pos += 1
            nxt = self.peek()
            if nxt and nxt in "0123456789" and int(ch + nxt) <= 22:
                self.pos += 1
            return self.text[start:self.pos]
        self.fail("a chromosome (1-22, X or Y)")

    def band(self) -> Band:
        arm = self.peek()
        if not arm or arm not in "pq":
            self.fail("a band arm 'p' or 'q'")
        self.pos += 1
        main = self.digits("band digits")
        sub = None
        if self.peek() == ".":
            self.pos += 1
            sub = self.digits("sub-band digits")
        return Band(arm, main, sub)

    def sex(self) -> tuple:
        out = []
        while self.peek() and self.peek() in "XYN":
            out.append(self.peek())
            self.pos += 1
        if not out:
            self.fail("a sex chromosome symbol (X, Y or N)")
        return tuple(out)

    def event(self) -> Event:
        ch = self.peek()
        if ch == "+":
            self.pos += 1
            return Gain(self.chromosome())
        if ch == "-":
            self.pos += 1
            return Loss(self.chromosome())
        if ch == "t":
            self.expect("t(")
            c1 = self.chromosome()
            self.expect(";")
            c2 = self.chromosome()
            self.expect(")(")
            b1 = self.band()
            self.expect(";")
            b2 = self.band()
            self.expect(")")
            return Translocation(Breakpoint(c1, b1), Breakpoint(c2, b2))
        if ch == "d":
            self.pos += 1
            nxt = self.peek()
            if nxt == "e":
                self.expect("el(", "'del('")
                c = self.chromosome()
                self.expect(")(")
                b1 = self.band()
                b2 = self.band() if self.peek() in ("p", "q") and self.peek() else None
                self.expect(")")
                return Deletion(c, b1, b2)
            if nxt == "u":
                self.expect("up(", "'dup('")
                return Duplication(*self._two_bands())
            self.fail("'del(' or 'dup('")
        if ch == "i":
            self.expect("inv(")
            return Inversion(*self._two_bands())
        self.fail("an event (+, -, t(, del(, inv( or dup()")

    def _two_bands(self):
        c = self.chromosome()
        self.expect(")(")
        b1 = self.band()
        b2 = self.band()
        self.expect(")")
        return c, b1, b2

    def karyotype(self) -> Karyotype:
        total = self.count()
        self.expect(",")
        sex = self.sex()
        events = []
        while self.pos < len(self.text):
            if self.peek() != ",":
                self.fail("',' or end of input")
            self.pos += 1
            events.append(self.event())
        return Karyotype(total, sex, tuple(events))


def parse(text: str) -> Karyotype:
    """Parse ``text``; raises :class:`ParseError` at the first bad position."""
    if not isinstance(text, str):
        raise TypeError("parse expects a str")
    return _Parser(text).karyotype()


def load_corpus(path) -> list[str]:
    """Karyotype strings from a corpus file; ``#`` starts a comment."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


# -- random karyotypes ------------------------------------------------------


@dataclass(frozen=True)
class KaryotypeBounds:
    """Size limits for :func:`random_karyotype`.

    ``bands`` optionally maps chromosome -> available band labels; when set,
    structural events only use those bands (and chromosomes that have any).
    """

    min_total: int = 1
    max_total: int = 100
    max_sex: int = 4
    max_events: int = 4
    bands: Optional[dict] = field(default=None, hash=False, compare=False)

    def __post_init__(self):
        if self.min_total < 1 or self.max_total < self.min_total or self.max_sex < 1:
            raise ValueError("bounds must be positive and ordered")
        if self.max_events < 0:
            raise ValueError("max_events must be non-negative")


def _random_band(rng: random.Random, bounds: KaryotypeBounds, chromosome: str) -> Band:
    if bounds.bands is not None:
        label = rng.choice(sorted(bounds.bands[chromosome]))
        main, _, sub = label[1:].partition(".")
        return Band(label[0], main, sub or None)
    sub = str(rng.randint(1, 39)) if rng.random() < 0.5 else None
    return Band(rng.choice("pq"), str(rng.randint(10, 39)), sub)


def random_karyotype(seed: int, config: KaryotypeBounds = KaryotypeBounds()) -> Karyotype:
    rng = random.Random(seed)
    total = rng.randint(config.min_total, config.max_total)
    sex = tuple(rng.choice(SEX_SYMBOLS) for _ in range(rng.randint(1, config.max_sex)))
    banded = CHROMOSOMES
    if config.bands is not None:
        banded = tuple(c for c in CHROMOSOMES if config.bands.get(c))
    events = []
    for _ in range(rng.randint(0, config.max_events)):
        kind = rng.choice(("gain", "loss", "t", "del", "inv", "dup") if banded else ("gain", "loss"))
        if kind == "gain":
            events.append(Gain(rng.choice(CHROMOSOMES)))
        elif kind == "loss":
            events.append(Loss(rng.choice(CHROMOSOMES)))
        elif kind == "t":
            c1, c2 = rng.choice(banded), rng.choice(banded)
            events.append(
                Translocation(
                    Breakpoint(c1, _random_band(rng, config, c1)),
                    Breakpoint(c2, _random_band(rng, config, c2)),
                )
            )
        else:
            c = rng.choice(banded)
            b1 = _random_band(rng, config, c)
            b2 = _random_band(rng, config, c)
            if kind == "del":
                events.append(Deletion(c, b1, b2 if rng.random() < 0.5 else None))
            elif kind == "inv":
                events.append(Inversion(c, b1, b2))
            else:
                events.append(Duplication(c, b1, b2))
    return Karyotype(total, sex, tuple(events))
