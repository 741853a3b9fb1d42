"""Ordinals below w^w in Cantor normal form.

An ordinal is stored as a tuple of ``(exponent, coefficient)`` pairs with
strictly decreasing exponents, so ``w^2*3 + w*1 + 4`` is
``((2, 3), (1, 1), (0, 4))``.  The uncountable ordinal w_1 only appears as a
family index meaning "no Schreier restriction"; it is the :data:`OMEGA_1`
sentinel and cannot take part in arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Union


class OrdinalError(ValueError):
    pass


@total_ordering
class _Omega1:
    """The sentinel w_1, larger than every ordinal below w^w."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA_1"

    def __str__(self):
        return "w1"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        if isinstance(other, (Ordinal, int, _Omega1)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash("w1")

    def __reduce__(self):
        return (_Omega1, ())


OMEGA_1 = _Omega1()


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple = ()

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if not (isinstance(e, int) and isinstance(c, int)) or e < 0 or c < 1:
                raise OrdinalError(f"bad CNF term {(e, c)!r}")
            if prev is not None and e >= prev:
                raise OrdinalError("exponents must be strictly decreasing")
            prev = e

    @classmethod
    def of(cls, value: Union["Ordinal", int]) -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot make an ordinal from {value!r}")
        if value < 0:
            raise OrdinalError("negative ordinal")
        return cls(((0, value),)) if value else cls(())

    @classmethod
    def omega_power(cls, exponent: int, coefficient: int = 1) -> "Ordinal":
        return cls(((exponent, coefficient),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0] == 0

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] > 0

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] == 0

    def predecessor(self) -> "Ordinal":
        if not self.is_successor:
            raise OrdinalError(f"{self} has no predecessor")
        *head, (_, c) = self.terms
        if c > 1:
            head.append((0, c - 1))
        return Ordinal(tuple(head))

    def successor(self) -> "Ordinal":
        return self + 1

    def __int__(self):
        if not self.is_finite:
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __add__(self, other):
        if isinstance(other, _Omega1):
            raise OrdinalError("w_1 does not take part in arithmetic")
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        if other.is_zero:
            return self
        lead_e, lead_c = other.terms[0]
        # terms of self below the leading exponent of other are absorbed
        kept = [t for t in self.terms if t[0] > lead_e]
        same = [c for e, c in self.terms if e == lead_e]
        if same:
            kept.append((lead_e, same[0] + lead_c))
        else:
            kept.append((lead_e, lead_c))
        kept.extend(other.terms[1:])
        return Ordinal(tuple(kept))

    def __radd__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return Ordinal.of(other) + self
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return other >= 0 and self == Ordinal.of(other)
        if isinstance(other, Ordinal):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __lt__(self, other):
        if isinstance(other, _Omega1):
            return True
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms < other.terms

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"


FamilyIndex = Union[Ordinal, _Omega1]

OMEGA = Ordinal.omega_power(1)


def normalize(raw_terms: Iterable[tuple]) -> Ordinal:
    """Read ``raw_terms`` as the ordinal sum w^e1*c1 + w^e2*c2 + ... and
    return its Cantor normal form."""
    result = Ordinal()
    for e, c in raw_terms:
        if e < 0 or c < 0:
            raise OrdinalError(f"bad term {(e, c)!r}")
        if c:
            result = result + Ordinal.omega_power(e, c)
    return result


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if isinstance(a, _Omega1) or isinstance(b, _Omega1):
        raise OrdinalError("w_1 does not take part in arithmetic")
    return Ordinal.of(a) + Ordinal.of(b)


def compare(a: FamilyIndex, b: FamilyIndex) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if a == b:
        return 0
    return -1 if a < b else 1


def fundamental(xi: Ordinal, n: int) -> Ordinal:
    """n-th term of the fixed fundamental sequence of the limit ordinal ``xi``.

    For ``g + w`` this is ``g + n``; for ``g + w^m`` with ``m >= 2`` it is
    ``g + w^(m-1)*n + 1``.  Every term is a successor (or finite) ordinal.
    """
    if isinstance(xi, _Omega1):
        raise OrdinalError("w_1 has no countable fundamental sequence")
    xi = Ordinal.of(xi)
    if not xi.is_limit:
        raise OrdinalError(f"{xi} is not a limit ordinal")
    if n < 1:
        raise OrdinalError("n must be positive")
    *head, (e, c) = xi.terms
    if c > 1:
        head.append((e, c - 1))
    gamma = Ordinal(tuple(head))
    if e == 1:
        return gamma + n
    return gamma + Ordinal.omega_power(e - 1, n) + 1


_TERM = re.compile(r"^(?:w(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")


def parse_ordinal(text: str) -> FamilyIndex:
    """Parse ``"w^2*3+w*1+4"``; ``"w1"`` is the w_1 sentinel.

    Terms are added left to right with ordinal addition, so ``"2+w"`` is w.
    """
    text = text.strip().replace(" ", "")
    if text == "w1":
        return OMEGA_1
    if not text:
        raise OrdinalError("empty ordinal")
    raw = []
    for part in text.split("+"):
        m = _TERM.match(part)
        if m is None:
            raise OrdinalError(f"cannot parse ordinal term {part!r}")
        exp, coef, finite = m.groups()
        if finite is not None:
            raw.append((0, int(finite)))
        else:
            raw.append((int(exp) if exp is not None else 1,
                        int(coef) if coef is not None else 1))
    return normalize(raw)


def format_ordinal(x: FamilyIndex) -> str:
    if isinstance(x, _Omega1):
        return "w1"
    if x.is_zero:
        return "0"
    parts = []
    for e, c in x.terms:
        if e == 0:
            parts.append(str(c))
        elif e == 1:
            parts.append(f"w*{c}")
        else:
            parts.append(f"w^{e}*{c}")
    return "+".join(parts)


def as_index(x) -> FamilyIndex:
    """Coerce ints, strings and ordinals into a family index."""
    if isinstance(x, (_Omega1, Ordinal)):
        return x
    if isinstance(x, str):
        return parse_ordinal(x)
    return Ordinal.of(x)
