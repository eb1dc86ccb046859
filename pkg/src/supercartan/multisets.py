"""Multiset machinery and the index sets used by the straightening identities.

Multisets are finite multiplicity functions chi: S -> Z>=0 over an ordered
hashable ground set.  The enumerators produce deterministic graded-lex streams
so that verification campaigns are reproducible run to run.
"""

from __future__ import annotations

import itertools
from math import factorial
from typing import Iterator


class Multiset:
    """Immutable finite multiset; elements must be hashable and orderable."""

    __slots__ = ("_items", "_hash")

    def __init__(self, counts=()):
        if isinstance(counts, Multiset):
            items = counts._items
        elif isinstance(counts, dict):
            items = tuple(sorted((k, v) for k, v in counts.items() if v))
        else:
            items = tuple(sorted((k, v) for k, v in counts if v))
        for _, v in items:
            if v < 0:
                raise ValueError("negative multiplicity")
        self._items = items
        self._hash = hash(items)

    @classmethod
    def single(cls, element, count=1):
        """The characteristic multiset count*chi_element."""
        return cls(((element, count),))

    @property
    def size(self):
        """Total number of elements counted with multiplicity."""
        return sum(v for _, v in self._items)

    def items(self):
        return self._items

    def support(self):
        return tuple(k for k, _ in self._items)

    def count(self, element):
        for k, v in self._items:
            if k == element:
                return v
        return 0

    def is_zero(self):
        return not self._items

    def __add__(self, other):
        counts = dict(self._items)
        for k, v in other._items:
            counts[k] = counts.get(k, 0) + v
        return Multiset(counts)

    def __sub__(self, other):
        counts = dict(self._items)
        for k, v in other._items:
            counts[k] = counts.get(k, 0) - v
            if counts[k] < 0:
                raise ValueError("multiset difference undefined: not a submultiset")
        return Multiset(counts)

    def __mul__(self, n):
        if n < 0:
            raise ValueError("negative multiple")
        return Multiset(tuple((k, v * n) for k, v in self._items))

    __rmul__ = __mul__

    def __le__(self, other):
        return all(other.count(k) >= v for k, v in self._items)

    def __eq__(self, other):
        return isinstance(other, Multiset) and self._items == other._items

    def __lt__(self, other):
        # total order for canonical enumeration: graded, then lex on items
        if self.size != other.size:
            return self.size < other.size
        return self._items < other._items

    def __hash__(self):
        return self._hash

    def __iter__(self):
        for k, v in self._items:
            for _ in range(v):
                yield k

    def __repr__(self):
        body = ", ".join(f"{k!r}: {v}" for k, v in self._items)
        return "Multiset({%s})" % body


EMPTY = Multiset()


def multinomial(psi: Multiset) -> int:
    """|psi|! / prod psi(a)!  (an exact integer)."""
    out = factorial(psi.size)
    for _, v in psi.items():
        out //= factorial(v)
    return out


def gen_binomial(t: int, r: int) -> int:
    """t(t-1)...(t-r+1)/r! for integer t (may be negative) and r >= 0."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    num = 1
    for i in range(r):
        num *= t - i
    value, rem = divmod(num, factorial(r))
    assert rem == 0
    return value


def binomial(n: int, k: int) -> int:
    if k < 0:
        return 0
    return gen_binomial(n, k)


def submultisets_of_size(chi: Multiset, k: int) -> Iterator[Multiset]:
    """All psi <= chi with |psi| = k, each exactly once, graded-lex order."""
    if k < 0:
        return
    support = chi.support()

    def rec(idx, remaining, acc):
        if remaining == 0:
            yield Multiset(tuple(acc))
            return
        if idx == len(support):
            return
        cap = min(chi.count(support[idx]), remaining)
        # remaining capacity check for pruning
        tail = sum(chi.count(s) for s in support[idx + 1:])
        for take in range(max(0, remaining - tail), cap + 1):
            if take:
                acc.append((support[idx], take))
            yield from rec(idx + 1, remaining - take, acc)
            if take:
                acc.pop()

    yield from rec(0, k, [])


def submultisets(chi: Multiset) -> Iterator[Multiset]:
    """All psi <= chi including 0, by size then lex."""
    for k in range(chi.size + 1):
        yield from submultisets_of_size(chi, k)


def constrained_sums(chi: Multiset, k: int, include_zero_parts: bool = True) -> Iterator[Multiset]:
    """Multisets psi of k submultisets of chi with sum_phi psi(phi)*phi <= chi.

    Elements of the returned multisets are themselves Multisets ("parts").
    With include_zero_parts the empty part may occur with multiplicity, which
    is the reading under which the even straightening identities hold (the
    degree-drop lemma removes the all-zero member {k*chi_0} explicitly).
    """
    if k < 0:
        return
    parts = [p for p in submultisets(chi) if include_zero_parts or not p.is_zero()]

    def rec(idx, slots, budget, acc):
        if slots == 0:
            yield Multiset(tuple(acc))
            return
        if idx == len(parts):
            return
        part = parts[idx]
        max_mult = slots
        if not part.is_zero():
            # largest m with m*part <= budget
            m = 0
            while m < slots and (part * (m + 1)) <= budget:
                m += 1
            max_mult = m
        for mult in range(max_mult, -1, -1):
            if mult:
                acc.append((part, mult))
            rest = budget - part * mult if mult else budget
            yield from rec(idx + 1, slots - mult, rest, acc)
            if mult:
                acc.pop()

    out = sorted(rec(0, k, chi, []))
    yield from out


def constrained_partitions(j: int, k: int) -> Iterator[Multiset]:
    """Multisets lambda over Z>=0 with sum lambda(m)*m = j and |lambda| = k.

    Zero parts are allowed (the support lives in Z>=0), so this is "partitions
    of j into exactly k nonnegative parts" counted as multisets.
    """
    if j < 0 or k < 0:
        return

    def positive_partitions(total, max_parts, max_val):
        # partitions of `total` into at most `max_parts` positive parts, each <= max_val
        if total == 0:
            yield ()
            return
        if max_parts == 0:
            return
        for first in range(min(total, max_val), 0, -1):
            for rest in positive_partitions(total - first, max_parts - 1, first):
                yield (first,) + rest

    seen = []
    for parts in positive_partitions(j, k, j if j else 0):
        zeros = k - len(parts)
        counts = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        if zeros:
            counts[0] = zeros
        seen.append(Multiset(counts))
    if j == 0 and k == 0:
        seen.append(EMPTY)
    elif j == 0 and k > 0:
        seen.append(Multiset.single(0, k))
    yield from sorted(set(seen))


class MonoidAlgebra:
    """A commutative algebra A presented by a basis closed under multiplication.

    Basis elements are identified by index into `labels`.  `table[i][j]` is the
    index of the product, or None when the model truncates to an absorbing
    zero (e.g. polynomials mod t^k).
    """

    def __init__(self, name, labels, table, unit_index=0):
        self.name = name
        self.labels = tuple(labels)
        self.table = tuple(tuple(row) for row in table)
        self.unit = unit_index
        n = len(self.labels)
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("multiplication table shape mismatch")
        for i in range(n):
            if self.table[i][self.unit] != i or self.table[self.unit][i] != i:
                raise ValueError("unit law violated")
            for j in range(n):
                if self.table[i][j] != self.table[j][i]:
                    raise ValueError("multiplication not commutative")

    def __len__(self):
        return len(self.labels)

    def mul(self, i, j):
        """Product of basis elements; None encodes the absorbing zero."""
        if i is None or j is None:
            return None
        return self.table[i][j]

    def power(self, i, m):
        if m == 0:
            return self.unit
        out = i
        for _ in range(m - 1):
            out = self.mul(out, i)
            if out is None:
                return None
        return out

    def product(self, indices):
        out = self.unit
        for i in indices:
            out = self.mul(out, i)
            if out is None:
                return None
        return out

    def pi(self, psi: Multiset):
        """pi(psi) = prod a^psi(a) over the monoid; pi(0) = 1; None if absorbed."""
        out = self.unit
        for a, v in psi.items():
            p = self.power(a, v)
            out = self.mul(out, p)
            if out is None:
                return None
        return out

    def index_of(self, label):
        return self.labels.index(label)

    def check_associative(self, triples=None):
        rng = range(len(self.labels))
        items = triples if triples is not None else itertools.product(rng, rng, rng)
        for a, b, c in items:
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return False
        return True


def truncated_polynomials(bound: int = 4) -> MonoidAlgebra:
    """C[t]/(t^bound) with basis 1, t, ..., t^{bound-1}; overflow is absorbed to 0."""
    labels = ["1"] + [f"t{k}" if k > 1 else "t" for k in range(1, bound)]
    table = [[i + j if i + j < bound else None for j in range(bound)] for i in range(bound)]
    return MonoidAlgebra(f"trunc-poly-{bound}", labels, table)


def cyclic_polynomials(order: int = 4) -> MonoidAlgebra:
    """Z[t]/(t^order - 1): basis t^k with genuinely closed multiplication."""
    labels = ["1"] + [f"t{k}" if k > 1 else "t" for k in range(1, order)]
    table = [[(i + j) % order for j in range(order)] for i in range(order)]
    return MonoidAlgebra(f"cyclic-poly-{order}", labels, table)


A_MODELS = {
    "trunc-poly-4": lambda: truncated_polynomials(4),
    "cyclic-poly-4": lambda: cyclic_polynomials(4),
    "trunc-poly-3": lambda: truncated_polynomials(3),
    "cyclic-poly-3": lambda: cyclic_polynomials(3),
}


def a_model(name: str) -> MonoidAlgebra:
    try:
        return A_MODELS[name]()
    except KeyError:
        raise ValueError(f"unknown A-model {name!r}; known: {sorted(A_MODELS)}") from None
