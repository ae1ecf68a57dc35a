"""SAT instances over the two-bit/three-bit clause vocabulary.

Bits are labeled 1..n and an assignment is a sequence of n values in {0, 1}.
A clause costs energy 1 when violated and 0 when satisfied; the instance
energy is the number of violated clauses.  Basis-index convention used
throughout the package: index(z) = sum_k z_k * 2^(n-k), i.e. bit 1 is the
most significant bit of the index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, ClauseError, ParseError

DEFAULT_DIM_CAP = 24

Assignment = Sequence[int]


def _check_bit(i, n):
    if not 1 <= i <= n:
        raise ClauseError(f"bit {i} outside 1..{n}")


@dataclass(frozen=True)
class Agree:
    """Satisfied when the two bits are equal."""

    i: int
    j: int

    def bits(self):
        return (self.i, self.j)

    def validate(self, n):
        _check_bit(self.i, n)
        _check_bit(self.j, n)
        if self.i == self.j:
            raise ClauseError("agree clause needs two distinct bits")

    def violations(self, idx, n):
        return _bit(idx, self.i, n) ^ _bit(idx, self.j, n)


@dataclass(frozen=True)
class Disagree:
    """Satisfied when the two bits differ."""

    i: int
    j: int

    def bits(self):
        return (self.i, self.j)

    def validate(self, n):
        _check_bit(self.i, n)
        _check_bit(self.j, n)
        if self.i == self.j:
            raise ClauseError("disagree clause needs two distinct bits")

    def violations(self, idx, n):
        return 1 - (_bit(idx, self.i, n) ^ _bit(idx, self.j, n))


@dataclass(frozen=True)
class Imply:
    """Violated only by premise=1, conclusion=0."""

    premise: int
    conclusion: int

    def bits(self):
        return (self.premise, self.conclusion)

    def validate(self, n):
        _check_bit(self.premise, n)
        _check_bit(self.conclusion, n)
        if self.premise == self.conclusion:
            raise ClauseError("imply clause needs two distinct bits")

    def violations(self, idx, n):
        return _bit(idx, self.premise, n) & (1 - _bit(idx, self.conclusion, n))


@dataclass(frozen=True)
class Or:
    """Three signed literals; +i means bit i, -i means its negation."""

    literals: tuple

    def __init__(self, l1, l2=None, l3=None):
        if l2 is None and l3 is None:
            lits = tuple(l1)
        elif l3 is None:
            raise ClauseError("or clause takes exactly three literals")
        else:
            lits = (l1, l2, l3)
        object.__setattr__(self, "literals", tuple(int(l) for l in lits))

    def bits(self):
        return tuple(sorted({abs(l) for l in self.literals}))

    def validate(self, n):
        if len(self.literals) != 3:
            raise ClauseError("or clause takes exactly three literals")
        for l in self.literals:
            if l == 0:
                raise ClauseError("literal 0 is not allowed")
            _check_bit(abs(l), n)

    def violations(self, idx, n):
        # violated iff every literal is false
        out = np.ones_like(np.asarray(idx), dtype=np.int64)
        for l in self.literals:
            b = _bit(idx, abs(l), n)
            true = b if l > 0 else 1 - b
            out &= 1 - true
        return out


@dataclass(frozen=True)
class OneBit:
    """Pins a single bit to a required value."""

    i: int
    value: int

    def bits(self):
        return (self.i,)

    def validate(self, n):
        _check_bit(self.i, n)
        if self.value not in (0, 1):
            raise ClauseError("one-bit clause value must be 0 or 1")

    def violations(self, idx, n):
        return (_bit(idx, self.i, n) != self.value).astype(np.int64)


@dataclass(frozen=True)
class GroverOracle:
    """Single generalized clause over all bits with one satisfying string."""

    target: str

    def bits(self):
        return tuple(range(1, len(self.target) + 1))

    def validate(self, n):
        if len(self.target) != n or set(self.target) - {"0", "1"}:
            raise ClauseError(f"oracle target must be an n={n} bitstring")

    def target_index(self):
        return int(self.target, 2)

    def violations(self, idx, n):
        return (np.asarray(idx) != self.target_index()).astype(np.int64)


Clause = (Agree, Disagree, Imply, Or, OneBit, GroverOracle)


def _bit(idx, i, n):
    """Value of bit i (1-based, MSB first) across an index array."""
    return (np.asarray(idx) >> (n - i)) & 1


@dataclass(frozen=True)
class SatInstance:
    n: int
    clauses: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.n < 1:
            raise ClauseError("instance needs at least one bit")
        for c in self.clauses:
            c.validate(self.n)
        oracles = [c for c in self.clauses if isinstance(c, GroverOracle)]
        if oracles and len(self.clauses) > 1:
            raise ClauseError("an oracle clause must be the only clause")

    @property
    def m(self):
        return len(self.clauses)

    def degrees(self):
        """d_i = number of clauses in which bit i appears (repeats in a
        clause count once)."""
        d = np.zeros(self.n, dtype=np.int64)
        for c in self.clauses:
            for b in set(c.bits()):
                d[b - 1] += 1
        return d

    def energies(self, idx):
        """Vector of violated-clause counts over an array of basis indices."""
        idx = np.asarray(idx)
        h = np.zeros(idx.shape, dtype=np.int64)
        for c in self.clauses:
            h += c.violations(idx, self.n)
        return h


def clause_energy(clause, assignment):
    """0 if the assignment satisfies the clause, else 1."""
    a = tuple(assignment)
    n = len(a)
    clause.validate(n)
    idx = assignment_to_index(a)
    return int(clause.violations(np.asarray([idx]), n)[0])


def total_energy(inst, assignment):
    """Number of clauses of `inst` violated by the assignment."""
    a = tuple(assignment)
    if len(a) != inst.n:
        raise ClauseError(f"assignment length {len(a)} != n = {inst.n}")
    return int(inst.energies(np.asarray([assignment_to_index(a)]))[0])


def assignment_to_index(assignment):
    idx = 0
    for z in assignment:
        idx = (idx << 1) | int(z)
    return idx


def index_to_assignment(idx, n):
    return tuple((idx >> (n - i)) & 1 for i in range(1, n + 1))


def index_to_bitstring(idx, n):
    return format(idx, f"0{n}b")


def brute_force_solve(inst, cap=DEFAULT_DIM_CAP):
    """Exhaustive classical oracle.

    Returns (minimum energy, all minimizing assignments in lexicographic
    order).  This is deliberately brute force; it is the ground truth the
    quantum paths are checked against.
    """
    if inst.n > cap:
        raise CapacityError(f"n={inst.n} exceeds enumeration cap {cap}")
    h = inst.energies(np.arange(1 << inst.n))
    emin = int(h.min())
    minimizers = np.flatnonzero(h == emin)
    return emin, [index_to_assignment(int(z), inst.n) for z in minimizers]


# ---------------------------------------------------------------------------
# instance file format
# ---------------------------------------------------------------------------

def parse_instance(text):
    """Parse the `p asat <n> <m>` text format (see README)."""
    n = None
    declared = None
    clauses = []
    lineno = 0
    for raw in text.splitlines():
        lineno += 1
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if n is None:
            if tok[0] != "p" or len(tok) != 4 or tok[1] != "asat":
                raise ParseError("expected header 'p asat <n> <m>'", lineno)
            try:
                n, declared = int(tok[2]), int(tok[3])
            except ValueError:
                raise ParseError("header counts must be integers", lineno)
            continue
        try:
            clauses.append(_parse_clause(tok, lineno))
        except ClauseError as exc:
            raise ParseError(str(exc), lineno)
    if n is None:
        raise ParseError("missing 'p asat' header")
    if declared != len(clauses):
        raise ParseError(
            f"header declares {declared} clauses but {len(clauses)} given"
        )
    try:
        return SatInstance(n, tuple(clauses))
    except ClauseError as exc:
        raise ParseError(str(exc))


def _parse_clause(tok, lineno):
    kind = tok[0]
    args = tok[1:]

    def ints(count):
        if len(args) != count:
            raise ParseError(f"'{kind}' takes {count} arguments", lineno)
        try:
            return [int(a) for a in args]
        except ValueError:
            raise ParseError(f"'{kind}' arguments must be integers", lineno)

    if kind == "agree":
        return Agree(*ints(2))
    if kind == "disagree":
        return Disagree(*ints(2))
    if kind == "imply":
        return Imply(*ints(2))
    if kind == "or":
        return Or(*ints(3))
    if kind == "one":
        return OneBit(*ints(2))
    if kind == "grover":
        if len(args) != 1:
            raise ParseError("'grover' takes one bitstring", lineno)
        return GroverOracle(args[0])
    raise ParseError(f"unknown clause kind '{kind}'", lineno)


def serialize_instance(inst):
    lines = [f"p asat {inst.n} {inst.m}"]
    for c in inst.clauses:
        if isinstance(c, Agree):
            lines.append(f"agree {c.i} {c.j}")
        elif isinstance(c, Disagree):
            lines.append(f"disagree {c.i} {c.j}")
        elif isinstance(c, Imply):
            lines.append(f"imply {c.premise} {c.conclusion}")
        elif isinstance(c, Or):
            lines.append("or {} {} {}".format(*c.literals))
        elif isinstance(c, OneBit):
            lines.append(f"one {c.i} {c.value}")
        elif isinstance(c, GroverOracle):
            lines.append(f"grover {c.target}")
        else:  # pragma: no cover
            raise ClauseError(f"unknown clause {c!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# built-in families
# ---------------------------------------------------------------------------

def ring_instance(n, disagree=()):
    """Cycle of pairwise clauses; clause j couples bits j and j+1 (wrapping).

    `disagree` lists the clause positions (1-based) that are disagree
    clauses; the rest agree.
    """
    disagree = set(disagree)
    clauses = []
    for j in range(1, n + 1):
        k = j % n + 1
        clauses.append(Disagree(j, k) if j in disagree else Agree(j, k))
    return SatInstance(n, tuple(clauses))


def grover_instance(target):
    return SatInstance(len(target), (GroverOracle(target),))


def bush_instance(spokes):
    """Hub bit 1 pinned to 1 plus `spokes` imply clauses from the hub."""
    clauses = [OneBit(1, 1)]
    clauses += [Imply(1, j) for j in range(2, spokes + 2)]
    return SatInstance(spokes + 1, tuple(clauses))


def overconstrained_instance(n):
    """Agree clauses on every pair of bits."""
    clauses = [Agree(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return SatInstance(n, tuple(clauses))
