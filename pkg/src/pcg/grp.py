"""Finite groups as explicitly enumerated element tables.

An element is a canonical byte encoding (tag byte plus fixed-width payload);
a Kind object interprets the bytes and supplies multiplication, inversion and
rendering.  Kinds exist for permutations, matrices over a finite field,
semilinear pairs (matrix, Frobenius power), direct-product pairs and cosets of
a central subgroup.  Equal elements always have identical encodings, so
element equality is byte equality and coset canonicalization is a byte
minimum.

Groups are built by breadth-first closure in a fixed deterministic order
(generators sorted by encoding, FIFO queue, fixed chunk size), so regenerating
a group from the same data yields an identical element table.  Bulk operations
(closure, conjugation maps, commuting masks) go through numpy where the kind
supports it; small or exotic kinds fall back to plain loops.
"""

from __future__ import annotations

import struct

import numpy as np

from . import linalg
from .errors import CapError, ConstructionError, PcgError
from .gf import Field

DEFAULT_CAP = 2_000_000
_CHUNK = 4096  # closure chunk size; part of the deterministic ordering

_STRUCTS: dict[int, struct.Struct] = {}


def _st(count: int) -> struct.Struct:
    s = _STRUCTS.get(count)
    if s is None:
        s = _STRUCTS[count] = struct.Struct(f">{count}H")
    return s


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _forced_abelian(n: int) -> bool:
    # orders that admit only abelian groups: 1..5, p, p^2
    if n <= 5 or _is_prime(n):
        return True
    r = int(round(n**0.5))
    return r * r == n and _is_prime(r)


# ---------------------------------------------------------------------------
# element kinds


class Kind:
    """Interprets canonical byte encodings of one element variant."""

    bulk = False

    def identity(self) -> bytes:
        raise NotImplementedError

    def mul(self, a: bytes, b: bytes) -> bytes:
        raise NotImplementedError

    def inv(self, a: bytes) -> bytes:
        raise NotImplementedError

    def render(self, a: bytes) -> str:
        raise NotImplementedError

    def parse_render(self, s: str) -> bytes:
        raise NotImplementedError

    # bulk fallbacks -----------------------------------------------------

    def mul_all(self, payloads, v, side="right", arr=None):
        mul = self.mul
        if side == "right":
            return [mul(x, v) for x in payloads]
        return [mul(v, x) for x in payloads]

    def commute_mask(self, payloads, v, arr=None):
        mul = self.mul
        return np.array([mul(x, v) == mul(v, x) for x in payloads], dtype=bool)


class PermKind(Kind):
    """Permutations of {0..deg-1}; (a*b)(i) = a(b(i))."""

    bulk = True

    def __init__(self, deg: int):
        if not 1 <= deg <= 0xFFFF:
            raise ConstructionError(f"permutation degree {deg} out of range")
        self.deg = deg
        self._s = _st(deg)
        self._id = b"P" + self._s.pack(*range(deg))

    def make(self, images) -> bytes:
        images = tuple(images)
        if sorted(images) != list(range(self.deg)):
            raise ConstructionError(f"not a permutation of 0..{self.deg - 1}: {images}")
        return b"P" + self._s.pack(*images)

    def from_cycles(self, *cycles) -> bytes:
        """Permutation from 1-based cycles, e.g. from_cycles((1, 5), (2, 3))."""
        img = list(range(self.deg))
        for cyc in cycles:
            for i, a in enumerate(cyc):
                img[a - 1] = cyc[(i + 1) % len(cyc)] - 1
        return self.make(img)

    def images(self, a: bytes) -> tuple[int, ...]:
        return self._s.unpack(a[1:])

    def identity(self) -> bytes:
        return self._id

    def mul(self, a: bytes, b: bytes) -> bytes:
        ia = self._s.unpack(a[1:])
        ib = self._s.unpack(b[1:])
        return b"P" + self._s.pack(*(ia[x] for x in ib))

    def inv(self, a: bytes) -> bytes:
        ia = self._s.unpack(a[1:])
        out = [0] * self.deg
        for i, x in enumerate(ia):
            out[x] = i
        return b"P" + self._s.pack(*out)

    def render(self, a: bytes) -> str:
        return "perm:" + ",".join(str(x + 1) for x in self._s.unpack(a[1:]))

    def parse_render(self, s: str) -> bytes:
        if not s.startswith("perm:"):
            raise PcgError(f"bad perm encoding: {s!r}")
        return self.make(tuple(int(t) - 1 for t in s[5:].split(",")))

    def to_array(self, payloads):
        m = len(payloads)
        raw = np.frombuffer(b"".join(payloads), dtype=np.uint8).reshape(m, -1)
        body = np.ascontiguousarray(raw[:, 1:])
        return body.view(">u2").astype(np.int64).reshape(m, self.deg)

    def from_array(self, arr):
        m = len(arr)
        blob = arr.astype(">u2").tobytes()
        step = 2 * self.deg
        return [b"P" + blob[i * step:(i + 1) * step] for i in range(m)]

    def mul_arrays(self, A, B):
        if A.ndim == 1 and B.ndim == 1:
            return A[B]
        if A.ndim == 2 and B.ndim == 1:
            return A[:, B]
        if A.ndim == 1 and B.ndim == 2:
            return A[B]
        return np.take_along_axis(A, B, axis=1)

    def mul_all(self, payloads, v, side="right", arr=None):
        if arr is None:
            arr = self.to_array(payloads)
        V = self.to_array([v])[0]
        out = self.mul_arrays(arr, V) if side == "right" else self.mul_arrays(V, arr)
        return self.from_array(out)

    def commute_mask(self, payloads, v, arr=None):
        if arr is None:
            arr = self.to_array(payloads)
        V = self.to_array([v])[0]
        return (self.mul_arrays(arr, V) == self.mul_arrays(V, arr)).all(axis=1)

    def __eq__(self, other):
        return isinstance(other, PermKind) and other.deg == self.deg

    def __hash__(self):
        return hash(("P", self.deg))

    def __repr__(self):
        return f"PermKind({self.deg})"


class MatKind(Kind):
    """n x n matrices over a Field, row-major integer codes."""

    bulk = True

    def __init__(self, field: Field, n: int):
        self.field = field
        self.n = n
        self._s = _st(n * n)
        self._id = b"M" + self._s.pack(*linalg.identity(n))

    def make(self, flat) -> bytes:
        flat = tuple(int(x) for x in flat)
        if len(flat) != self.n * self.n:
            raise ConstructionError("wrong matrix size")
        if any(not 0 <= x < self.field.q for x in flat):
            raise ConstructionError("matrix entry out of field range")
        return b"M" + self._s.pack(*flat)

    def mat(self, a: bytes) -> tuple[int, ...]:
        return self._s.unpack(a[1:])

    def identity(self) -> bytes:
        return self._id

    def mul(self, a: bytes, b: bytes) -> bytes:
        m = linalg.mat_mul(self.field, self.n, self._s.unpack(a[1:]), self._s.unpack(b[1:]))
        return b"M" + self._s.pack(*m)

    def inv(self, a: bytes) -> bytes:
        m = linalg.mat_inv(self.field, self.n, self._s.unpack(a[1:]))
        return b"M" + self._s.pack(*m)

    def render(self, a: bytes) -> str:
        codes = ",".join(str(x) for x in self._s.unpack(a[1:]))
        return f"mat:{self.field.q}:{self.n}:{codes}"

    def parse_render(self, s: str) -> bytes:
        parts = s.split(":")
        if len(parts) != 4 or parts[0] != "mat":
            raise PcgError(f"bad mat encoding: {s!r}")
        if int(parts[1]) != self.field.q or int(parts[2]) != self.n:
            raise PcgError(f"mat encoding {s!r} does not match GF({self.field.q})^{self.n}")
        return self.make(tuple(int(t) for t in parts[3].split(",")))

    def to_array(self, payloads):
        m = len(payloads)
        raw = np.frombuffer(b"".join(payloads), dtype=np.uint8).reshape(m, -1)
        body = np.ascontiguousarray(raw[:, 1:])
        return body.view(">u2").astype(np.uint16).reshape(m, self.n, self.n)

    def from_array(self, arr):
        arr = arr.reshape(-1, self.n, self.n)
        m = len(arr)
        blob = arr.astype(">u2").tobytes()
        step = 2 * self.n * self.n
        return [b"M" + blob[i * step:(i + 1) * step] for i in range(m)]

    def mul_arrays(self, A, B):
        f = self.field
        if f.k == 1:
            C = (A.astype(np.int64) @ B.astype(np.int64)) % f.p
            return C.astype(np.uint16)
        MT, AT = f.np_tables()
        T = MT[A[..., :, :, None], B[..., None, :, :]]
        if f.p == 2:
            return np.bitwise_xor.reduce(T, axis=-2)
        out = T[..., 0, :]
        for k in range(1, self.n):
            out = AT[out, T[..., k, :]]
        return out

    def mul_all(self, payloads, v, side="right", arr=None):
        if arr is None:
            arr = self.to_array(payloads)
        V = self.to_array([v])[0]
        out = self.mul_arrays(arr, V) if side == "right" else self.mul_arrays(V, arr)
        return self.from_array(out)

    def commute_mask(self, payloads, v, arr=None):
        if arr is None:
            arr = self.to_array(payloads)
        V = self.to_array([v])[0]
        L = self.mul_arrays(arr, V)
        R = self.mul_arrays(V, arr)
        return (L == R).all(axis=(1, 2))

    def __eq__(self, other):
        return (
            isinstance(other, MatKind)
            and other.field == self.field
            and other.n == self.n
        )

    def __hash__(self):
        return hash(("M", self.field, self.n))

    def __repr__(self):
        return f"MatKind(GF({self.field.q}), {self.n})"


class SemiKind(Kind):
    """Semilinear elements (matrix, Frobenius power j); fixed composition
    (A, i) * (B, j) = (A phi^i(B), i + j mod k)."""

    def __init__(self, base: MatKind):
        self.base = base
        self.period = base.field.k
        self._s1 = _st(1)

    def make(self, mat_payload: bytes, j: int) -> bytes:
        return b"S" + self._s1.pack(j % self.period) + mat_payload[1:]

    def parts(self, a: bytes) -> tuple[int, bytes]:
        (j,) = self._s1.unpack(a[1:3])
        return j, b"M" + a[3:]

    def identity(self) -> bytes:
        return self.make(self.base.identity(), 0)

    def mul(self, a: bytes, b: bytes) -> bytes:
        f = self.base.field
        ja, ma = self.parts(a)
        jb, mb = self.parts(b)
        tb = self.base.mat(mb)
        if ja:
            tb = linalg.frobenius_mat(f, tb, ja)
        prod = linalg.mat_mul(f, self.base.n, self.base.mat(ma), tb)
        return self.make(self.base.make(prod), ja + jb)

    def inv(self, a: bytes) -> bytes:
        f = self.base.field
        ja, ma = self.parts(a)
        mi = linalg.mat_inv(f, self.base.n, self.base.mat(ma))
        if ja:
            mi = linalg.frobenius_mat(f, mi, self.period - ja)
        return self.make(self.base.make(mi), -ja)

    def render(self, a: bytes) -> str:
        j, m = self.parts(a)
        return f"semi:{j}:{self.base.render(m)}"

    def parse_render(self, s: str) -> bytes:
        if not s.startswith("semi:"):
            raise PcgError(f"bad semi encoding: {s!r}")
        rest = s[5:]
        jtxt, mat = rest.split(":", 1)
        return self.make(self.base.parse_render(mat), int(jtxt))

    def __eq__(self, other):
        return isinstance(other, SemiKind) and other.base == self.base

    def __hash__(self):
        return hash(("S", self.base))

    def __repr__(self):
        return f"SemiKind({self.base!r})"


class PairKind(Kind):
    """Direct-product pairs; components multiply independently."""

    def __init__(self, left: Kind, right: Kind):
        self.left = left
        self.right = right
        self._s4 = struct.Struct(">I")

    def pack(self, a: bytes, b: bytes) -> bytes:
        return b"2" + self._s4.pack(len(a)) + a + b

    def split(self, p: bytes) -> tuple[bytes, bytes]:
        (la,) = self._s4.unpack(p[1:5])
        return p[5:5 + la], p[5 + la:]

    def identity(self) -> bytes:
        return self.pack(self.left.identity(), self.right.identity())

    def mul(self, a: bytes, b: bytes) -> bytes:
        al, ar = self.split(a)
        bl, br = self.split(b)
        return self.pack(self.left.mul(al, bl), self.right.mul(ar, br))

    def inv(self, a: bytes) -> bytes:
        al, ar = self.split(a)
        return self.pack(self.left.inv(al), self.right.inv(ar))

    def render(self, a: bytes) -> str:
        al, ar = self.split(a)
        return f"pair({self.left.render(al)}|{self.right.render(ar)})"

    def parse_render(self, s: str) -> bytes:
        if not (s.startswith("pair(") and s.endswith(")")):
            raise PcgError(f"bad pair encoding: {s!r}")
        body = s[5:-1]
        depth = 0
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "|" and depth == 0:
                return self.pack(
                    self.left.parse_render(body[:i]),
                    self.right.parse_render(body[i + 1:]),
                )
        raise PcgError(f"bad pair encoding: {s!r}")

    def mul_all(self, payloads, v, side="right", arr=None):
        vl, vr = self.split(v)
        lefts = []
        rights = []
        for p in payloads:
            a, b = self.split(p)
            lefts.append(a)
            rights.append(b)
        ol = self.left.mul_all(lefts, vl, side)
        orr = self.right.mul_all(rights, vr, side)
        return [self.pack(a, b) for a, b in zip(ol, orr)]

    def commute_mask(self, payloads, v, arr=None):
        vl, vr = self.split(v)
        lefts = []
        rights = []
        for p in payloads:
            a, b = self.split(p)
            lefts.append(a)
            rights.append(b)
        ml = self.left.commute_mask(lefts, vl)
        mr = self.right.commute_mask(rights, vr)
        return np.asarray(ml, dtype=bool) & np.asarray(mr, dtype=bool)

    def __eq__(self, other):
        return (
            isinstance(other, PairKind)
            and other.left == self.left
            and other.right == self.right
        )

    def __hash__(self):
        return hash(("2", self.left, self.right))

    def __repr__(self):
        return f"PairKind({self.left!r}, {self.right!r})"


class CosetKind(Kind):
    """Cosets of a central subgroup, canonicalized to the minimum encoding."""

    def __init__(self, base: Kind, zpayloads):
        self.base = base
        self.z = tuple(sorted(set(zpayloads)))
        if base.identity() not in self.z:
            raise ConstructionError("central subgroup must contain the identity")
        self.bulk = base.bulk

    def canonical(self, raw: bytes) -> bytes:
        mul = self.base.mul
        return min(mul(z, raw) for z in self.z)

    def make(self, raw: bytes) -> bytes:
        return b"C" + self.canonical(raw)

    def rep(self, a: bytes) -> bytes:
        return a[1:]

    def identity(self) -> bytes:
        return self.make(self.base.identity())

    def mul(self, a: bytes, b: bytes) -> bytes:
        return self.make(self.base.mul(a[1:], b[1:]))

    def inv(self, a: bytes) -> bytes:
        return self.make(self.base.inv(a[1:]))

    def render(self, a: bytes) -> str:
        return f"coset:{self.base.render(a[1:])}"

    def parse_render(self, s: str) -> bytes:
        if not s.startswith("coset:"):
            raise PcgError(f"bad coset encoding: {s!r}")
        return self.make(self.base.parse_render(s[6:]))

    # bulk (delegated to the base kind when it has one) -------------------

    def to_array(self, payloads):
        return self.base.to_array([p[1:] for p in payloads])

    def from_array(self, arr):
        base = self.base
        best = None
        for z in self.z:
            zarr = base.to_array([z])[0]
            cand = base.from_array(base.mul_arrays(zarr, arr))
            if best is None:
                best = cand
            else:
                best = [a if a < b else b for a, b in zip(best, cand)]
        return [b"C" + b for b in best]

    def mul_arrays(self, A, B):
        return self.base.mul_arrays(A, B)

    def mul_all(self, payloads, v, side="right", arr=None):
        if not self.bulk:
            return Kind.mul_all(self, payloads, v, side)
        if arr is None:
            arr = self.to_array(payloads)
        V = self.base.to_array([v[1:]])[0]
        out = self.mul_arrays(arr, V) if side == "right" else self.mul_arrays(V, arr)
        return self.from_array(out)

    def commute_mask(self, payloads, v, arr=None):
        if not self.bulk:
            return Kind.commute_mask(self, payloads, v)
        base = self.base
        if arr is None:
            arr = self.to_array(payloads)
        V = base.to_array([v[1:]])[0]
        L = self.mul_arrays(arr, V)
        R = self.mul_arrays(V, arr)
        mask = None
        for z in self.z:
            zarr = base.to_array([z])[0]
            eq = L == base.mul_arrays(zarr, R)
            eq = eq.all(axis=tuple(range(1, eq.ndim)))
            mask = eq if mask is None else (mask | eq)
        return mask

    def __eq__(self, other):
        return (
            isinstance(other, CosetKind)
            and other.base == self.base
            and other.z == self.z
        )

    def __hash__(self):
        return hash(("C", self.base, self.z))

    def __repr__(self):
        return f"CosetKind({self.base!r}, |Z|={len(self.z)})"


class Element:
    """An element bound to its kind; used at API boundaries."""

    __slots__ = ("kind", "payload")

    def __init__(self, kind: Kind, payload: bytes):
        self.kind = kind
        self.payload = payload

    def __mul__(self, other: "Element") -> "Element":
        if self.kind != other.kind:
            raise PcgError("elements of different kinds")
        return Element(self.kind, self.kind.mul(self.payload, other.payload))

    def inv(self) -> "Element":
        return Element(self.kind, self.kind.inv(self.payload))

    def conj(self, by: "Element") -> "Element":
        """self conjugated by `by`: by^-1 * self * by."""
        return by.inv() * self * by

    def commutes_with(self, other: "Element") -> bool:
        return (self * other).payload == (other * self).payload

    def is_identity(self) -> bool:
        return self.payload == self.kind.identity()

    def order(self) -> int:
        idp = self.kind.identity()
        x = self.payload
        o = 1
        while x != idp:
            x = self.kind.mul(x, self.payload)
            o += 1
            if o > 10_000_000:
                raise PcgError("element order runaway")
        return o

    def render(self) -> str:
        return self.kind.render(self.payload)

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and other.kind == self.kind
            and other.payload == self.payload
        )

    def __hash__(self):
        return hash(self.payload)

    def __repr__(self):
        return f"<{self.render()}>"


# ---------------------------------------------------------------------------
# closure enumeration


def _mulclose(kind: Kind, gens, cap: int):
    """BFS closure of generator payloads; returns (elems, index)."""
    idp = kind.identity()
    elems = [idp]
    index = {idp: 0}
    pos = 0
    while pos < len(elems):
        chunk = elems[pos:pos + _CHUNK]
        pos += len(chunk)
        arr = kind.to_array(chunk) if kind.bulk else None
        for g in gens:
            for p in kind.mul_all(chunk, g, "right", arr=arr):
                if p not in index:
                    if len(elems) >= cap:
                        raise CapError(f"closure exceeded cap {cap}")
                    index[p] = len(elems)
                    elems.append(p)
    return elems, index


def generate(gens, cap: int = DEFAULT_CAP, name: str = "") -> "Group":
    """Group generated by a list of Elements, breadth-first, deterministic."""
    if not gens:
        raise ConstructionError("no generators")
    kind = gens[0].kind
    for g in gens[1:]:
        if g.kind != kind:
            raise PcgError("generators of different kinds")
    idp = kind.identity()
    payloads = sorted({g.payload for g in gens} - {idp})
    if not payloads:
        return Group(kind, [idp], [], name=name)
    elems, index = _mulclose(kind, payloads, cap)
    return Group(kind, elems, payloads, name=name, _index=index)


def _greedy_gens(kind: Kind, elems) -> list[bytes]:
    """Small generating set found greedily in element order."""
    total = len(elems)
    idp = kind.identity()
    gens: list[bytes] = []
    have = {idp}
    for x in elems:
        if x in have:
            continue
        gens.append(x)
        closed, _ = _mulclose(kind, gens, cap=total)
        have = set(closed)
        if len(have) == total:
            break
    return gens


# ---------------------------------------------------------------------------
# the Group


class Group:
    """An explicitly enumerated finite group.

    elems[0] is always the identity.  The element order is part of the
    contract: rebuilding a group from the same spec gives the same table.
    """

    def __init__(self, kind, elems, gens, name="", parent=None, proj=None, _index=None):
        self.kind = kind
        self.elems = list(elems)
        self.index = _index if _index is not None else {p: i for i, p in enumerate(self.elems)}
        if len(self.index) != len(self.elems):
            raise ConstructionError("duplicate elements in table")
        if self.elems[0] != kind.identity():
            raise ConstructionError("identity must be the first element")
        self.gens = list(gens)
        self.name = name
        self.parent = parent
        self.proj = proj
        self._arr = None
        self._center = None
        self._classes = None
        self._class_of = None
        self._class_orders = None
        self._conj = None
        self._reduced = None
        self._perfect = None
        self._simple = None
        self._fullq = None

    def __len__(self) -> int:
        return len(self.elems)

    def __repr__(self):
        return f"Group({self.name or '?'}, order={len(self)})"

    def element(self, i: int) -> Element:
        return Element(self.kind, self.elems[i])

    def elements(self):
        return [Element(self.kind, p) for p in self.elems]

    def generators(self):
        return [Element(self.kind, p) for p in self.gens]

    def index_of(self, e: Element) -> int:
        if e.kind != self.kind:
            raise PcgError("element kind does not match group")
        i = self.index.get(e.payload)
        if i is None:
            raise PcgError("element not in group")
        return i

    def mul_idx(self, i: int, j: int) -> int:
        return self.index[self.kind.mul(self.elems[i], self.elems[j])]

    def inv_idx(self, i: int) -> int:
        return self.index[self.kind.inv(self.elems[i])]

    def arr(self):
        if self._arr is None and self.kind.bulk:
            self._arr = self.kind.to_array(self.elems)
        return self._arr

    # -- masks ------------------------------------------------------------

    def commute_mask(self, i: int, subset=None):
        """Boolean mask of elements commuting with element i."""
        v = self.elems[i]
        if subset is None:
            return np.asarray(self.kind.commute_mask(self.elems, v, arr=self.arr()), dtype=bool)
        payloads = [self.elems[j] for j in subset]
        arr = None
        if self.kind.bulk:
            arr = self.arr()[np.asarray(subset, dtype=np.int64)]
        return np.asarray(self.kind.commute_mask(payloads, v, arr=arr), dtype=bool)

    def center(self) -> tuple[int, ...]:
        if self._center is None:
            n = len(self)
            mask = np.ones(n, dtype=bool)
            for g in self.gens:
                mask &= np.asarray(self.kind.commute_mask(self.elems, g, arr=self.arr()), dtype=bool)
            self._center = tuple(int(i) for i in np.flatnonzero(mask))
        return self._center

    def centralizer(self, i: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.commute_mask(i))]

    def is_abelian_subset(self, indices) -> bool:
        indices = list(indices)
        payloads = [self.elems[j] for j in indices]
        arr = None
        if self.kind.bulk and indices:
            arr = self.arr()[np.asarray(indices, dtype=np.int64)]
        for p in payloads:
            m = np.asarray(self.kind.commute_mask(payloads, p, arr=arr), dtype=bool)
            if not m.all():
                return False
        return True

    def is_abelian(self) -> bool:
        return len(self.center()) == len(self)

    # -- conjugacy ---------------------------------------------------------

    def _conj_maps(self):
        if self._conj is None:
            maps = []
            for g in self.gens:
                gi = self.kind.inv(g)
                t = self.kind.mul_all(self.elems, g, "right", arr=self.arr())
                u = self.kind.mul_all(t, gi, "left")
                maps.append([self.index[p] for p in u])
            self._conj = maps
        return self._conj

    def conjugacy_classes(self) -> list[list[int]]:
        if self._classes is None:
            n = len(self)
            maps = self._conj_maps()
            seen = bytearray(n)
            classes = []
            class_of = [0] * n
            for i in range(n):
                if seen[i]:
                    continue
                orbit = [i]
                seen[i] = 1
                stack = [i]
                while stack:
                    x = stack.pop()
                    for cm in maps:
                        y = cm[x]
                        if not seen[y]:
                            seen[y] = 1
                            orbit.append(y)
                            stack.append(y)
                orbit.sort()
                ci = len(classes)
                for x in orbit:
                    class_of[x] = ci
                classes.append(orbit)
            self._classes = classes
            self._class_of = class_of
            self._class_orders = [None] * len(classes)
        return self._classes

    def class_of(self, i: int) -> int:
        self.conjugacy_classes()
        return self._class_of[i]

    def class_order(self, ci: int) -> int:
        self.conjugacy_classes()
        o = self._class_orders[ci]
        if o is None:
            o = self._class_orders[ci] = self.element(self._classes[ci][0]).order()
        return o

    def element_order(self, i: int) -> int:
        return self.class_order(self.class_of(i))

    # -- reduction support ---------------------------------------------------

    def reduced_vertices(self) -> list[int]:
        """Non-central elements whose centralizer is non-abelian."""
        if self._reduced is None:
            n = len(self)
            out = []
            for cls in self.conjugacy_classes():
                if len(cls) == 1:
                    continue  # central
                if _forced_abelian(n // len(cls)):
                    continue
                cent = self.centralizer(cls[0])
                if not self.is_abelian_subset(cent):
                    out.extend(cls)
            out.sort()
            self._reduced = out
        return self._reduced

    def is_ac_group(self) -> bool:
        """True when every non-central element has an abelian centralizer."""
        return not self.reduced_vertices()

    # -- normal structure ----------------------------------------------------

    def _normal_closure_size(self, seeds) -> int:
        idp = self.kind.identity()
        seeds = sorted(set(seeds) - {idp})
        if not seeds:
            return 1
        n = len(self)
        while True:
            elems, index = _mulclose(self.kind, seeds, cap=n)
            new = []
            for s in seeds:
                for g in self.gens:
                    c = self.kind.mul(self.kind.mul(self.kind.inv(g), s), g)
                    if c not in index:
                        new.append(c)
            if not new:
                return len(elems)
            seeds = sorted(set(seeds) | set(new))

    def is_perfect_group(self) -> bool:
        """True when the normal closure of generator commutators is everything."""
        if self._perfect is None:
            k = self.kind
            seeds = set()
            for a in self.gens:
                ia = k.inv(a)
                for b in self.gens:
                    seeds.add(k.mul(k.mul(ia, k.inv(b)), k.mul(a, b)))
            self._perfect = self._normal_closure_size(seeds) == len(self)
        return self._perfect

    def is_simple(self) -> bool:
        if self._simple is None:
            self._simple = self._compute_simple()
        return self._simple

    def _compute_simple(self) -> bool:
        n = len(self)
        if n == 1:
            return False
        if _is_prime(n):
            return True
        if len(self.center()) > 1:
            return False
        classes = self.conjugacy_classes()
        # a normal subgroup is a union of classes (with the identity) whose
        # total size divides |G|; if no such sum exists, G is simple
        reachable = 1
        for cls in classes[1:]:
            reachable |= reachable << len(cls)
        candidates = [
            d for d in range(2, n) if n % d == 0 and (reachable >> (d - 1)) & 1
        ]
        if not candidates:
            return True
        for cls in classes[1:]:
            if self._normal_closure_size([self.elems[cls[0]]]) < n:
                return False
        return True

    def full_central_quotient(self) -> "Group":
        if self._fullq is None:
            self._fullq = central_quotient(self, self.center())
        return self._fullq

    def is_quasisimple(self) -> bool:
        """Perfect with simple central quotient."""
        if not self.is_perfect_group():
            return False
        if len(self.center()) == 1:
            return self.is_simple()
        return self.full_central_quotient().is_simple()


# ---------------------------------------------------------------------------
# quotients and products


def central_quotient(G: Group, central_indices) -> Group:
    """G modulo a central subgroup given by element indices."""
    zp = sorted(G.elems[i] for i in central_indices)
    k = G.kind
    idp = k.identity()
    if idp not in zp:
        raise ConstructionError("central subgroup must contain the identity")
    zset = set(zp)
    for a in zp:
        for g in G.gens:
            if k.mul(a, g) != k.mul(g, a):
                raise ConstructionError("subgroup is not central")
        for b in zp:
            if k.mul(a, b) not in zset:
                raise ConstructionError("central subset is not a subgroup")
    ck = CosetKind(k, zp)
    if ck.bulk and len(G) > 64:
        canon = ck.from_array(G.arr())
    else:
        canon = [ck.make(p) for p in G.elems]
    elems = []
    index = {}
    proj = []
    for c in canon:
        j = index.get(c)
        if j is None:
            j = len(elems)
            index[c] = j
            elems.append(c)
        proj.append(j)
    if len(elems) * len(zp) != len(G):
        raise ConstructionError("quotient size mismatch")
    gens = []
    seen = {ck.identity()}
    for g in G.gens:
        c = canon[G.index[g]]
        if c not in seen:
            seen.add(c)
            gens.append(c)
    return Group(ck, elems, gens, name=f"{G.name}/Z" if G.name else "",
                 parent=G, proj=proj, _index=index)


def direct_product(A: Group, B: Group, cap: int = DEFAULT_CAP, name: str = "") -> Group:
    pk = PairKind(A.kind, B.kind)
    if len(A) * len(B) > cap:
        raise CapError(f"direct product order {len(A) * len(B)} exceeds cap {cap}")
    elems = [pk.pack(a, b) for a in A.elems for b in B.elems]
    ida = A.kind.identity()
    idb = B.kind.identity()
    gens = [pk.pack(g, idb) for g in A.gens] + [pk.pack(ida, g) for g in B.gens]
    return Group(pk, elems, gens, name=name)


def fiber_product(A: Group, B: Group, QA: Group, QB: Group, iso, name: str = "") -> Group:
    """Subgroup of A x B of pairs agreeing in the aligned quotients.

    QA and QB must be central quotients of A and B (carrying .parent/.proj);
    iso maps QA element indices to QB element indices.
    """
    if QA.parent is not A or QB.parent is not B:
        raise ConstructionError("quotients do not belong to the factors")
    if iso[0] != 0:
        raise ConstructionError("alignment must send identity to identity")
    pk = PairKind(A.kind, B.kind)
    buckets: list[list[int]] = [[] for _ in range(len(QB))]
    for bi in range(len(B)):
        buckets[QB.proj[bi]].append(bi)
    ker = len(buckets[0])
    elems = []
    for ai in range(len(A)):
        t = iso[QA.proj[ai]]
        for bi in buckets[t]:
            elems.append(pk.pack(A.elems[ai], B.elems[bi]))
    gens = _greedy_gens(pk, elems)
    G = Group(pk, elems, gens, name=name)
    if len(G) != len(A) * ker:
        raise ConstructionError("fiber product size mismatch")
    # surjectivity onto both factors and centrality of the projection kernels
    seen_b = set()
    for p in G.elems:
        seen_b.add(pk.split(p)[1])
    if len(seen_b) != len(B):
        raise ConstructionError("fiber product does not surject onto the right factor")
    ida = A.kind.identity()
    idb = B.kind.identity()
    for p in G.elems:
        left, right = pk.split(p)
        if left == ida or right == idb:
            for g in G.gens:
                if pk.mul(p, g) != pk.mul(g, p):
                    raise ConstructionError("projection kernel is not central")
    return G


# ---------------------------------------------------------------------------
# isomorphism search between central quotients


def _greedy_gen_indices(Q: Group) -> list[int]:
    total = len(Q)
    gens: list[bytes] = []
    out: list[int] = []
    have = {Q.kind.identity()}
    for i, x in enumerate(Q.elems):
        if x in have:
            continue
        gens.append(x)
        out.append(i)
        closed, _ = _mulclose(Q.kind, gens, cap=total)
        have = set(closed)
        if len(have) == total:
            return out
    raise ConstructionError("could not generate group from its own elements")


def quotient_align(Q1: Group, Q2: Group, budget: int = 10_000_000):
    """Search for an isomorphism Q1 -> Q2 as an index mapping.

    Returns the mapping list, or None when no isomorphism exists.  Raises
    CapError when the step budget is exhausted before a definite answer.
    """
    n = len(Q1)
    if len(Q2) != n:
        return None
    c1 = Q1.conjugacy_classes()
    c2 = Q2.conjugacy_classes()
    fp1 = sorted((len(c), Q1.class_order(i)) for i, c in enumerate(c1))
    fp2 = sorted((len(c), Q2.class_order(i)) for i, c in enumerate(c2))
    if fp1 != fp2:
        return None

    gens = _greedy_gen_indices(Q1)
    ngens = len(gens)

    # one deterministic pass over Q1's multiplication by its generators;
    # replayed per candidate assignment to extend and verify the map
    trans = []
    seen = [False] * n
    seen[0] = True
    order_list = [0]
    qi = 0
    while qi < len(order_list):
        x = order_list[qi]
        qi += 1
        for gi in range(ngens):
            y = Q1.mul_idx(x, gens[gi])
            trans.append((x, gi, y))
            if not seen[y]:
                seen[y] = True
                order_list.append(y)

    def fingerprint(Q, i):
        ci = Q.class_of(i)
        return (Q.class_order(ci), len(Q.conjugacy_classes()[ci]))

    cands = []
    for g in gens:
        f = fingerprint(Q1, g)
        cands.append([j for j in range(n) if fingerprint(Q2, j) == f])

    budget_left = budget

    def try_assignment(imgs):
        nonlocal budget_left
        f = [-1] * n
        used = [False] * n
        f[0] = 0
        used[0] = True
        for x, gi, y in trans:
            if budget_left <= 0:
                raise CapError("quotient_align budget exhausted")
            budget_left -= 1
            fy = Q2.mul_idx(f[x], imgs[gi])
            if f[y] < 0:
                if used[fy]:
                    return None
                f[y] = fy
                used[fy] = True
            elif f[y] != fy:
                return None
        return f

    # depth-first assignment with product-order pruning
    chosen = [0] * ngens

    def assign(level):
        nonlocal budget_left
        if level == ngens:
            return try_assignment(chosen)
        g = gens[level]
        for img in cands[level]:
            if budget_left <= 0:
                raise CapError("quotient_align budget exhausted")
            ok = True
            for prev in range(level):
                budget_left -= 1
                p1 = Q1.mul_idx(gens[prev], g)
                p2 = Q2.mul_idx(chosen[prev], img)
                if Q1.element_order(p1) != Q2.element_order(p2):
                    ok = False
                    break
            if not ok:
                continue
            chosen[level] = img
            result = assign(level + 1)
            if result is not None:
                return result
        return None

    return assign(0)
