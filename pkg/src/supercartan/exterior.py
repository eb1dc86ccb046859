"""The exterior algebra on odd generators and its Cartan-type superderivation algebras.

Monomials are bitmasks over xi_1..xi_n stored in ascending index order; every
sign in the engine is produced by transposition counting against that canonical
order, so there is a single sign convention for the whole package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import linalg


class RankMismatchError(ValueError):
    pass


class InvalidAlgebraSpec(ValueError):
    pass


def _popcount(mask):
    return bin(mask).count("1")


def _indices(mask):
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _merge_sign(a, b):
    """Sign of sorting the concatenation of ascending masks a, b; 0 if they meet."""
    if a & b:
        return 0
    sign = 1
    for i in _indices(b):
        higher = a >> i  # indices of a strictly above i
        if _popcount(higher) & 1:
            sign = -sign
    return sign


def _del_sign(mask, i):
    """Sign picked up by partial_i removing index i from an ascending monomial."""
    below = mask & ((1 << (i - 1)) - 1)
    return -1 if _popcount(below) & 1 else 1


def monomial_key(mask, j=None):
    """Deterministic sort key; with j also orders the derivation monomials."""
    if j is None:
        return (_popcount(mask), _indices(mask))
    return (_popcount(mask), _indices(mask), j)


class ExteriorElement:
    """Sparse exact-rational element of Lambda(n)."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for mask, coeff in (terms.items() if isinstance(terms, dict) else terms):
                c = Fraction(coeff)
                if c:
                    c += self.terms.get(mask, 0)
                    if c:
                        self.terms[mask] = c
                    else:
                        self.terms.pop(mask, None)

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def one(cls, n):
        return cls(n, {0: 1})

    @classmethod
    def xi(cls, n, i):
        if not 1 <= i <= n:
            raise ValueError(f"xi index {i} out of range 1..{n}")
        return cls(n, {1 << (i - 1): 1})

    @classmethod
    def monomial(cls, n, indices, coeff=1):
        mask = 0
        for i in indices:
            bit = 1 << (i - 1)
            if mask & bit:
                return cls.zero(n)
            mask |= bit
        return cls(n, {mask: coeff})

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if self.n != other.n:
            raise RankMismatchError(f"rank mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        out = ExteriorElement(self.n)
        out.terms = terms
        return out

    def __neg__(self):
        out = ExteriorElement(self.n)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        out = ExteriorElement(self.n)
        if c:
            out.terms = {m: c * v for m, v in self.terms.items()}
        return out

    def wedge(self, other):
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s = _merge_sign(m1, m2)
                if s:
                    m = m1 | m2
                    v = out.get(m, 0) + s * c1 * c2
                    if v:
                        out[m] = v
                    else:
                        out.pop(m, None)
        res = ExteriorElement(self.n)
        res.terms = out
        return res

    __mul__ = wedge

    def partial(self, i):
        """The odd derivation removing xi_i (with the transposition sign)."""
        out = {}
        bit = 1 << (i - 1)
        for m, c in self.terms.items():
            if m & bit:
                out[m ^ bit] = out.get(m ^ bit, 0) + _del_sign(m, i) * c
        res = ExteriorElement(self.n)
        res.terms = {m: c for m, c in out.items() if c}
        return res

    def degree_parts(self):
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(_popcount(m), {})[m] = c
        return {d: ExteriorElement(self.n, t) for d, t in sorted(parts.items())}

    def parity(self):
        """0/1 if homogeneous, None for mixed or zero."""
        ps = {_popcount(m) & 1 for m in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def __eq__(self, other):
        return isinstance(other, ExteriorElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"ExteriorElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=monomial_key):
            c = self.terms[m]
            body = "".join(f"ξ{i}" for i in _indices(m)) or "1"
            bits.append((c, body))
        out = ""
        for c, body in bits:
            sgn = "-" if c < 0 else ("+" if out else "")
            mag = abs(c)
            coeff = "" if (mag == 1 and body != "1") else str(mag)
            out += f"{sgn} {coeff}{body} ".replace("  ", " ") if out else f"{sgn}{coeff}{body}"
        return out.strip()


class SuperDerivation:
    """An element of W(n) stored as sum_i f_i d_i (fize on the left of d_i)."""

    __slots__ = ("n", "components")

    def __init__(self, n, components=None):
        self.n = n
        self.components = {}
        if components:
            for i, f in components.items():
                if f.n != n:
                    raise RankMismatchError("component rank mismatch")
                if not f.is_zero():
                    self.components[i] = f

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def partial(cls, n, i):
        return cls(n, {i: ExteriorElement.one(n)})

    @classmethod
    def monomial(cls, n, indices, j, coeff=1):
        return cls(n, {j: ExteriorElement.monomial(n, indices, coeff)})

    @classmethod
    def from_terms(cls, n, terms):
        """terms: iterable of ((mask, j), coeff)."""
        comps = {}
        for (mask, j), c in terms:
            comps.setdefault(j, {})[mask] = comps.get(j, {}).get(mask, 0) + Fraction(c)
        return cls(n, {j: ExteriorElement(n, t) for j, t in comps.items()})

    def terms(self):
        out = []
        for j, f in sorted(self.components.items()):
            for m, c in f.terms.items():
                out.append(((m, j), c))
        return out

    def is_zero(self):
        return not self.components

    def _check(self, other):
        if self.n != other.n:
            raise RankMismatchError(f"rank mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        comps = dict(self.components)
        for i, f in other.components.items():
            g = comps.get(i, ExteriorElement.zero(self.n)) + f
            if g.is_zero():
                comps.pop(i, None)
            else:
                comps[i] = g
        return SuperDerivation(self.n, comps)

    def __neg__(self):
        return SuperDerivation(self.n, {i: -f for i, f in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SuperDerivation(self.n, {i: f.scale(c) for i, f in self.components.items()})

    def apply(self, f: ExteriorElement) -> ExteriorElement:
        if f.n != self.n:
            raise RankMismatchError("rank mismatch in apply")
        out = ExteriorElement.zero(self.n)
        for i, fi in self.components.items():
            out = out + fi.wedge(f.partial(i))
        return out

    def parity(self):
        ps = set()
        for j, f in self.components.items():
            for m in f.terms:
                ps.add((_popcount(m) + 1) & 1)
        return ps.pop() if len(ps) == 1 else None

    def degree(self):
        """Operator Z-degree if homogeneous, else None."""
        ds = set()
        for j, f in self.components.items():
            for m in f.terms:
                ds.add(_popcount(m) - 1)
        return ds.pop() if len(ds) == 1 else None

    def homogeneous_parts(self):
        """Split into parity-homogeneous summands: [(parity, part), ...]."""
        buckets = {}
        for (mk, j), c in self.terms():
            buckets.setdefault((_popcount(mk) + 1) & 1, []).append(((mk, j), c))
        return [(p, SuperDerivation.from_terms(self.n, t)) for p, t in sorted(buckets.items())]

    def __eq__(self, other):
        return (isinstance(other, SuperDerivation) and self.n == other.n
                and self.components == other.components)

    def __hash__(self):
        return hash((self.n, tuple(sorted((j, hash(f)) for j, f in self.components.items()))))

    def __str__(self):
        if not self.components:
            return "0"
        bits = []
        for j, f in sorted(self.components.items()):
            for m in sorted(f.terms, key=monomial_key):
                c = f.terms[m]
                body = ("".join(f"ξ{i}" for i in _indices(m))) + f"∂{j}"
                bits.append((c, body))
        out = ""
        for c, body in bits:
            sgn = "-" if c < 0 else ("+" if out else "")
            mag = abs(c)
            coeff = "" if mag == 1 else str(mag)
            out += (f" {sgn} {coeff}{body}" if out else f"{sgn}{coeff}{body}")
        return out

    __repr__ = __str__


def wedge(a, b):
    return a.wedge(b)


def apply_derivation(d, f):
    return d.apply(f)


def supercommutator(d1: SuperDerivation, d2: SuperDerivation) -> SuperDerivation:
    """[d1,d2] = d1 d2 - (-1)^{p1 p2} d2 d1, extended bilinearly to mixed parity."""
    if d1.n != d2.n:
        raise RankMismatchError("rank mismatch in bracket")
    n = d1.n
    out = SuperDerivation.zero(n)
    for p1, a in d1.homogeneous_parts():
        for p2, b in d2.homogeneous_parts():
            sign = -1 if (p1 and p2) else 1
            comps = {}
            for i in range(1, n + 1):
                xi = ExteriorElement.xi(n, i)
                g = a.apply(b.apply(xi)) - b.apply(a.apply(xi)).scale(sign)
                if not g.is_zero():
                    comps[i] = g
            out = out + SuperDerivation(n, comps)
    return out


def divergence(d: SuperDerivation) -> ExteriorElement:
    out = ExteriorElement.zero(d.n)
    for i, f in d.components.items():
        out = out + f.partial(i)
    return out


def d_f(f: ExteriorElement) -> SuperDerivation:
    """The Hamiltonian-type derivation sum_i partial_i(f) partial_i."""
    comps = {}
    for i in range(1, f.n + 1):
        g = f.partial(i)
        if not g.is_zero():
            comps[i] = g
    return SuperDerivation(f.n, comps)


def euler(n: int) -> SuperDerivation:
    """The grading element sum_i xi_i d_i."""
    return SuperDerivation(n, {i: ExteriorElement.xi(n, i) for i in range(1, n + 1)})


FAMILIES = ("W", "S", "S_tilde", "H")
_FAMILY_ALIASES = {"W": "W", "S": "S", "S_TILDE": "S_tilde", "S~": "S_tilde",
                   "STILDE": "S_tilde", "H": "H"}


@dataclass(frozen=True)
class AlgebraSpec:
    family: str
    n: int
    extend_with_euler: bool = False

    def __post_init__(self):
        fam = _FAMILY_ALIASES.get(str(self.family).upper().replace("-", "_"))
        if fam is None:
            raise InvalidAlgebraSpec(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", fam)
        n = self.n
        if fam == "W" and n < 2:
            raise InvalidAlgebraSpec("W(n) requires n >= 2")
        if fam == "S" and n < 3:
            raise InvalidAlgebraSpec("S(n) requires n >= 3")
        if fam == "S_tilde" and (n < 4 or n % 2):
            raise InvalidAlgebraSpec("S_tilde(n) requires even n >= 4")
        if fam == "H" and n < 4:
            raise InvalidAlgebraSpec("H(n) requires n >= 4")
        if self.extend_with_euler and fam not in ("S", "H"):
            raise InvalidAlgebraSpec("extend_with_euler applies to S(n) and H(n) only")

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, (str, bytes)) else dict(text)
        try:
            return cls(family=data["family"], n=int(data["n"]),
                       extend_with_euler=bool(data.get("extend_with_euler", False)))
        except KeyError as exc:
            raise InvalidAlgebraSpec(f"missing field {exc}") from None

    def to_json(self):
        return json.dumps({"family": self.family, "n": self.n,
                           "extend_with_euler": self.extend_with_euler})

    def label(self):
        fam = {"S_tilde": "S~"}.get(self.family, self.family)
        bar = "+E" if self.extend_with_euler else ""
        return f"{fam}({self.n}){bar}"


class AlgebraBasis:
    """A Z-graded basis of one of the Cartan-type algebras (declared degrees)."""

    def __init__(self, spec, vectors, degrees):
        assert len(vectors) == len(degrees)
        self.spec = spec
        self.vectors = list(vectors)
        self.degrees = list(degrees)

    @property
    def n(self):
        return self.spec.n

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def by_degree(self):
        out = {}
        for v, d in zip(self.vectors, self.degrees):
            out.setdefault(d, []).append(v)
        return dict(sorted(out.items()))


def _all_monomial_keys(n, size):
    masks = [m for m in range(1 << n) if _popcount(m) == size]
    masks.sort(key=monomial_key)
    return [(m, j) for m in masks for j in range(1, n + 1)]


def _diag_weight(mask, j, n):
    return tuple((1 if mask >> (k - 1) & 1 else 0) - (1 if k == j else 0)
                 for k in range(1, n + 1))


def _div_kernel_layer(n, degree):
    """Primitive integer basis of ker(dive) among degree-`degree` derivations."""
    cols = _all_monomial_keys(n, degree + 1)
    groups = {}
    for mask, j in cols:
        groups.setdefault(_diag_weight(mask, j, n), []).append((mask, j))
    out = []
    for wt in sorted(groups):
        gcols = groups[wt]
        out_masks = sorted({m ^ (1 << (j - 1)) for m, j in gcols if m >> (j - 1) & 1},
                           key=monomial_key)
        row_index = {m: r for r, m in enumerate(out_masks)}
        matrix = [[Fraction(0)] * len(gcols) for _ in out_masks]
        for c, (mask, j) in enumerate(gcols):
            if mask >> (j - 1) & 1:
                matrix[row_index[mask ^ (1 << (j - 1))]][c] = _del_sign(mask, j)
        if out_masks:
            vecs = linalg.kernel_basis(matrix, ncols=len(gcols))
        else:
            vecs = [[Fraction(1 if i == c else 0) for c in range(len(gcols))]
                    for i in range(len(gcols))]
        for v in vecs:
            ints = linalg.primitive(v)
            terms = [((gcols[c][0], gcols[c][1]), ints[c]) for c in range(len(gcols)) if ints[c]]
            out.append(SuperDerivation.from_terms(n, terms))
    out.sort(key=lambda d: [monomial_key(m, j) for (m, j), _ in d.terms()])
    return out


def build_algebra(spec: AlgebraSpec) -> AlgebraBasis:
    """Construct a graded basis for the requested family (plus E if extended)."""
    n = spec.n
    vectors, degrees = [], []

    if spec.family == "W":
        for size in range(0, n + 1):
            for mask, j in _all_monomial_keys(n, size):
                vectors.append(SuperDerivation.from_terms(n, [((mask, j), 1)]))
                degrees.append(size - 1)

    elif spec.family == "S":
        for d in range(-1, n - 1):
            for v in _div_kernel_layer(n, d):
                vectors.append(v)
                degrees.append(d)

    elif spec.family == "S_tilde":
        full = (1 << n) - 1
        for i in range(1, n + 1):
            tw = SuperDerivation.from_terms(n, [((0, i), 1), ((full, i), 1)])
            vectors.append(tw)
            degrees.append(-1)
        for d in range(0, n - 1):
            for v in _div_kernel_layer(n, d):
                vectors.append(v)
                degrees.append(d)

    elif spec.family == "H":
        # H~ = span{D_f}, graded by deg f - 2; H = [H~, H~]
        tilde = {}
        for size in range(1, n + 1):
            masks = sorted((m for m in range(1 << n) if _popcount(m) == size),
                           key=monomial_key)
            layer = []
            for m in masks:
                dm = d_f(ExteriorElement(n, {m: 1}))
                if not dm.is_zero():
                    layer.append(dm)
            if layer:
                tilde[size - 2] = layer
        cols_all = {}
        for d in range(-1, n - 2):
            rows = []
            for d1, l1 in tilde.items():
                for d2, l2 in tilde.items():
                    if d1 + d2 != d or d1 > d2:
                        continue
                    for a in range(len(l1)):
                        for b in range(len(l2)):
                            if d1 == d2 and b < a:
                                continue
                            br = supercommutator(l1[a], l2[b])
                            if not br.is_zero():
                                rows.append(br)
            if not rows:
                continue
            cols = sorted({key for r in rows for key, _ in r.terms()},
                          key=lambda mj: monomial_key(*mj))
            col_index = {c: i for i, c in enumerate(cols)}
            matrix = [[Fraction(0)] * len(cols) for _ in rows]
            for r, der in enumerate(rows):
                for key, c in der.terms():
                    matrix[r][col_index[key]] = Fraction(c)
            red, _ = linalg.rref(matrix)
            for v in red:
                ints = linalg.primitive(v)
                terms = [(cols[c], ints[c]) for c in range(len(cols)) if ints[c]]
                vectors.append(SuperDerivation.from_terms(n, terms))
                degrees.append(d)
            cols_all[d] = cols

    if spec.extend_with_euler:
        vectors.append(euler(n))
        degrees.append(0)

    for v, d in zip(vectors, degrees):
        assert v.parity() is not None, "basis vector not parity homogeneous"
        assert v.parity() == d % 2, "declared degree incompatible with parity"
    return AlgebraBasis(spec, vectors, degrees)


def cartan_elements(spec: AlgebraSpec):
    """The paper's distinguished Cartan basis for the family (without E)."""
    n = spec.n

    def h_diag(coeffs):
        comps = {i: ExteriorElement.xi(n, i).scale(c) for i, c in coeffs.items() if c}
        return SuperDerivation(n, comps)

    if spec.family == "W":
        return [h_diag({k: 1}) for k in range(1, n + 1)]
    if spec.family in ("S", "S_tilde"):
        return [h_diag({k: 1, k + 1: -1}) for k in range(1, n)]
    if spec.family == "H":
        half = n // 2
        return [h_diag({k: 1, half + k: -1}) for k in range(1, half + 1)]
    raise InvalidAlgebraSpec(spec.family)
