"""Representations of an acyclic quiver and bounded complexes of them.

A representation stores one finitely generated module per vertex (by
presentation; most fibers in practice are literally free) and one matrix per
arrow acting on chosen generators.  Validation is structural and exact:
arrow maps must respect relations, morphisms must be natural modulo the
target relations, differentials must square to zero.

Complexes are cohomological, sparse dictionaries degree -> representation.
The shift is (X[1])^n = X^{n+1} with differential negated per shift.  All
block orderings (tensor summands, Kan path copies, resolution terms) are
pinned so equal inputs give byte-equal outputs.
"""

from __future__ import annotations

from itertools import combinations

from .errors import (
    NonRegularRing,
    NotDerivable,
    NotPerfect,
    RingMismatch,
    ShapeMismatch,
)
from .linalg import Matrix, is_split_mono, kernel_basis, solve
from .quivers import Quiver, full_subquiver, path_target, paths, point_quiver, vertex_set
from .rings import FGModule, Ring, check_same_ring


# ---------------------------------------------------------------------------
# representations


class Representation:
    __slots__ = ("quiver", "ring", "fibers", "arrows", "_pa_cache")

    def __init__(self, quiver: Quiver, ring: Ring, fibers: dict, arrows: dict, check: bool = True):
        self.quiver = quiver
        self.ring = ring
        self.fibers = {v: fibers[v] for v in quiver.vertices}
        self.arrows = {name: arrows[name] for name, _, _ in quiver.arrows}
        self._pa_cache = {}
        if check:
            self.validate()

    def validate(self):
        for v, fib in self.fibers.items():
            if fib.ring != self.ring:
                raise RingMismatch(f"fiber at {v} over the wrong ring")
        for name, s, t in self.quiver.arrows:
            m = self.arrows[name]
            src, tgt = self.fibers[s], self.fibers[t]
            if (m.rows, m.cols) != (tgt.gens, src.gens):
                raise ShapeMismatch(
                    f"arrow {name} is {m.rows}x{m.cols}, wanted {tgt.gens}x{src.gens}")
            if src.presentation.cols and not src.presentation.is_zero():
                # relations of the source must land inside relations of the target
                img = m.mul(src.presentation)
                if solve(tgt.presentation, img) is None:
                    raise ShapeMismatch(f"arrow {name} not well defined on relations")

    def gens(self, v) -> int:
        return self.fibers[v].gens

    def is_zero_gens(self) -> bool:
        return all(f.gens == 0 for f in self.fibers.values())

    def path_action(self, i, path) -> Matrix:
        """Composite arrow matrix along a path out of vertex i."""
        key = (i, tuple(path))
        hit = self._pa_cache.get(key)
        if hit is None:
            acc = Matrix.identity(self.ring, self.gens(i))
            for name in path:
                acc = self.arrows[name].mul(acc)
            hit = self._pa_cache[key] = acc
        return hit

    def all_free(self) -> bool:
        return all(f.is_literally_free for f in self.fibers.values())


def rep_zero(quiver: Quiver, ring: Ring) -> Representation:
    zero = FGModule.free(ring, 0)
    fibers = {v: zero for v in quiver.vertices}
    arrows = {n: Matrix.zeros(ring, 0, 0) for n, _, _ in quiver.arrows}
    return Representation(quiver, ring, fibers, arrows, check=False)


def rep_free(quiver: Quiver, ring: Ring, ranks: dict, arrows: dict, check: bool = True) -> Representation:
    fibers = {v: FGModule.free(ring, ranks.get(v, 0)) for v in quiver.vertices}
    mats = {}
    for name, s, t in quiver.arrows:
        m = arrows.get(name)
        if m is None:
            m = Matrix.zeros(ring, fibers[t].gens, fibers[s].gens)
        mats[name] = m
    return Representation(quiver, ring, fibers, mats, check=check)


def rep_direct_sum(reps: list) -> Representation:
    assert reps
    q, r = reps[0].quiver, reps[0].ring
    fibers = {}
    for v in q.vertices:
        pres = reps[0].fibers[v].presentation
        for rep in reps[1:]:
            pres = pres.direct_sum(rep.fibers[v].presentation)
        fibers[v] = FGModule(r, pres)
    arrows = {}
    for name, _, _ in q.arrows:
        m = reps[0].arrows[name]
        for rep in reps[1:]:
            m = m.direct_sum(rep.arrows[name])
        arrows[name] = m
    return Representation(q, r, fibers, arrows, check=False)


class RepMorphism:
    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Representation, target: Representation, mats: dict, check: bool = True):
        self.source = source
        self.target = target
        self.mats = {v: mats[v] for v in source.quiver.vertices}
        if check:
            self.validate()

    def validate(self):
        if self.source.quiver != self.target.quiver:
            raise ShapeMismatch("morphism between representations of different quivers")
        q, r = self.source.quiver, self.source.ring
        for v in q.vertices:
            m = self.mats[v]
            if (m.rows, m.cols) != (self.target.gens(v), self.source.gens(v)):
                raise ShapeMismatch(f"component at {v} has the wrong shape")
            src_pres = self.source.fibers[v].presentation
            if src_pres.cols and not src_pres.is_zero():
                if solve(self.target.fibers[v].presentation, m.mul(src_pres)) is None:
                    raise ShapeMismatch(f"component at {v} not well defined on relations")
        for name, s, t in q.arrows:
            lhs = self.mats[t].mul(self.source.arrows[name])
            rhs = self.target.arrows[name].mul(self.mats[s])
            diff = lhs.sub(rhs)
            if not diff.is_zero():
                tgt_pres = self.target.fibers[t].presentation
                if not tgt_pres.cols or solve(tgt_pres, diff) is None:
                    raise ShapeMismatch(f"naturality fails at arrow {name}")

    def compose(self, earlier: "RepMorphism") -> "RepMorphism":
        mats = {v: self.mats[v].mul(earlier.mats[v]) for v in self.source.quiver.vertices}
        return RepMorphism(earlier.source, self.target, mats, check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())


def rep_mor_zero(source: Representation, target: Representation) -> RepMorphism:
    mats = {v: Matrix.zeros(source.ring, target.gens(v), source.gens(v)) for v in source.quiver.vertices}
    return RepMorphism(source, target, mats, check=False)


def rep_mor_identity(rep: Representation) -> RepMorphism:
    mats = {v: Matrix.identity(rep.ring, rep.gens(v)) for v in rep.quiver.vertices}
    return RepMorphism(rep, rep, mats, check=False)


# ---------------------------------------------------------------------------
# complexes


class ComplexRQ:
    """Bounded complex of representations; zero terms are simply absent."""

    __slots__ = ("quiver", "ring", "terms", "diffs", "_perfect")

    def __init__(self, quiver: Quiver, ring: Ring, terms: dict, diffs: dict, check: bool = True):
        self.quiver = quiver
        self.ring = ring
        self.terms = {n: rep for n, rep in sorted(terms.items()) if not rep.is_zero_gens()}
        self.diffs = {n: d for n, d in sorted(diffs.items())
                      if n in self.terms and n + 1 in self.terms and not d.is_zero()}
        self._perfect = None
        if check:
            self.validate()

    def validate(self):
        for d in self.diffs.values():
            d.validate()
        for n in self.diffs:
            if n + 1 in self.diffs:
                comp = self.diffs[n + 1].compose(self.diffs[n])
                for v in self.quiver.vertices:
                    m = comp.mats[v]
                    if m.is_zero():
                        continue
                    pres = self.terms[n + 2].fibers[v].presentation
                    if not pres.cols or solve(pres, m) is None:
                        raise ShapeMismatch(f"d^2 != 0 at degree {n}, vertex {v}")

    @property
    def degrees(self):
        return sorted(self.terms)

    def term(self, n) -> Representation:
        return self.terms.get(n) or rep_zero(self.quiver, self.ring)

    def diff(self, n) -> RepMorphism:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return rep_mor_zero(self.term(n), self.term(n + 1))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def perfect(self) -> bool:
        """All terms finitely generated projective (free fibers, split test)."""
        if self._perfect is None:
            self._perfect = all(_rep_is_projective(rep) for rep in self.terms.values())
        return self._perfect

    def __str__(self):
        if self.is_zero:
            return "0"
        bits = []
        for n in self.degrees:
            ranks = ",".join(str(self.terms[n].gens(v)) for v in self.quiver.vertices)
            bits.append(f"[{n}: {ranks}]")
        return " ".join(bits)


def _rep_is_projective(rep: Representation) -> bool:
    """Split-mono criterion: fibers projective and the incoming sum splits."""
    if not rep.all_free():
        return False
    for v in rep.quiver.vertices:
        incoming = rep.quiver.arrows_in(v)
        total = sum(rep.gens(s) for _, s, _ in incoming)
        if total == 0:
            continue
        m = None
        for name, s, _ in incoming:
            col = rep.arrows[name]
            m = col if m is None else m.hstack(col)
        if not is_split_mono(m):
            return False
    return True


def zero_complex(quiver: Quiver, ring: Ring) -> ComplexRQ:
    return ComplexRQ(quiver, ring, {}, {}, check=False)


def stalk_complex(rep: Representation, degree: int = 0) -> ComplexRQ:
    return ComplexRQ(rep.quiver, rep.ring, {degree: rep}, {}, check=False)


def shift_complex(x: ComplexRQ, k: int) -> ComplexRQ:
    """(X[k])^n = X^{n+k}; the differential picks up (-1)^k."""
    terms = {n - k: rep for n, rep in x.terms.items()}
    diffs = {}
    for n, d in x.diffs.items():
        mats = d.mats if k % 2 == 0 else {v: m.neg() for v, m in d.mats.items()}
        diffs[n - k] = RepMorphism(d.source, d.target, mats, check=False)
    return ComplexRQ(x.quiver, x.ring, terms, diffs, check=False)


def direct_sum_complexes(xs: list) -> ComplexRQ:
    xs = [x for x in xs if not x.is_zero]
    if not xs:
        raise ShapeMismatch("empty direct sum needs an ambient quiver; use zero_complex")
    q, r = xs[0].quiver, xs[0].ring
    degrees = sorted({n for x in xs for n in x.degrees})
    terms, diffs = {}, {}
    for n in degrees:
        terms[n] = rep_direct_sum([x.term(n) for x in xs])
    for n in degrees:
        if n + 1 not in terms:
            continue
        mats = {}
        for v in q.vertices:
            m = xs[0].diff(n).mats[v]
            for x in xs[1:]:
                m = m.direct_sum(x.diff(n).mats[v])
            mats[v] = m
        diffs[n] = RepMorphism(terms[n], terms[n + 1], mats, check=False)
    return ComplexRQ(q, r, terms, diffs, check=False)


class ComplexMorphism:
    __slots__ = ("source", "target", "parts")

    def __init__(self, source: ComplexRQ, target: ComplexRQ, parts: dict, check: bool = True):
        self.source = source
        self.target = target
        self.parts = dict(sorted(parts.items()))
        if check:
            self.validate()

    def part(self, n) -> RepMorphism:
        p = self.parts.get(n)
        if p is not None:
            return p
        return rep_mor_zero(self.source.term(n), self.target.term(n))

    def validate(self):
        for n, p in self.parts.items():
            p.validate()
        lo = min(self.source.degrees + self.target.degrees, default=0)
        hi = max(self.source.degrees + self.target.degrees, default=0)
        for n in range(lo - 1, hi + 1):
            left = self.target.diff(n).compose(self.part(n))
            right = self.part(n + 1).compose(self.source.diff(n))
            for v in self.source.quiver.vertices:
                diff = left.mats[v].sub(right.mats[v])
                if diff.is_zero():
                    continue
                pres = self.target.term(n + 1).fibers[v].presentation
                if not pres.cols or solve(pres, diff) is None:
                    raise ShapeMismatch(f"morphism does not commute with d at degree {n}, vertex {v}")


def cone(f: ComplexMorphism) -> ComplexRQ:
    """Mapping cone: cone^n = A^{n+1} + B^n, d(a, b) = (-da, f a + db)."""
    a, b = f.source, f.target
    q, r = a.quiver, a.ring
    degrees = sorted({n - 1 for n in a.degrees} | set(b.degrees))
    terms, diffs = {}, {}
    for n in degrees:
        terms[n] = rep_direct_sum([a.term(n + 1), b.term(n)])
    for n in degrees:
        if n + 1 not in terms:
            continue
        mats = {}
        for v in q.vertices:
            da = a.diff(n + 1).mats[v].neg()
            db = b.diff(n).mats[v]
            fv = f.part(n + 1).mats[v]
            top = da.hstack(Matrix.zeros(r, da.rows, db.cols))
            bot = fv.hstack(db)
            mats[v] = top.vstack(bot)
        diffs[n] = RepMorphism(terms[n], terms[n + 1], mats, check=False)
    return ComplexRQ(q, r, terms, diffs)


# ---------------------------------------------------------------------------
# constructors tied to the quiver


def projective_rep(q: Quiver, ring: Ring, i) -> Representation:
    """P(i): paths out of i, arrows acting by concatenation."""
    i = q.check_vertex(i)
    base = {v: paths(q, i, v) for v in q.vertices}
    fibers = {v: FGModule.free(ring, len(base[v])) for v in q.vertices}
    arrows = {}
    for name, s, t in q.arrows:
        m = [[ring.zero()] * len(base[s]) for _ in range(len(base[t]))]
        for col, p in enumerate(base[s]):
            m[base[t].index(p + (name,))][col] = ring.one()
        arrows[name] = Matrix(ring, len(base[t]), len(base[s]), tuple(tuple(row) for row in m))
    return Representation(q, ring, fibers, arrows, check=False)


def unit_restriction(q: Quiver, ring: Ring, s) -> Representation:
    """The unit cut down to a vertex subset: R inside, identities inside."""
    s = vertex_set(q, s)
    fibers = {v: FGModule.free(ring, 1 if v in s else 0) for v in q.vertices}
    arrows = {}
    for name, a, b in q.arrows:
        if a in s and b in s:
            arrows[name] = Matrix.identity(ring, 1)
        else:
            arrows[name] = Matrix.zeros(ring, fibers[b].gens, fibers[a].gens)
    return Representation(q, ring, fibers, arrows, check=False)


def unit_rep(q: Quiver, ring: Ring) -> Representation:
    return unit_restriction(q, ring, q.vertices)


def unit_complex(q: Quiver, ring: Ring) -> ComplexRQ:
    return stalk_complex(unit_rep(q, ring))


def proj_precompose(q: Quiver, ring: Ring, arrow_name) -> RepMorphism:
    """The map P(j) -> P(i) for an arrow a: i -> j, prefixing paths with a."""
    _, i, j = q.arrow(arrow_name)
    pi, pj = projective_rep(q, ring, i), projective_rep(q, ring, j)
    mats = {}
    for v in q.vertices:
        rows, cols = paths(q, i, v), paths(q, j, v)
        m = [[ring.zero()] * len(cols) for _ in range(len(rows))]
        for c, p in enumerate(cols):
            m[rows.index((arrow_name,) + p)][c] = ring.one()
        mats[v] = Matrix(ring, len(rows), len(cols), tuple(tuple(row) for row in m))
    return RepMorphism(pj, pi, mats, check=False)


# ---------------------------------------------------------------------------
# vertex evaluation and Kan extensions


def eval_vertex(x: ComplexRQ, i) -> ComplexRQ:
    """i^* X: the complex of R-modules sitting at one vertex."""
    i = x.quiver.check_vertex(i)
    pt = point_quiver()
    terms, diffs = {}, {}
    for n, rep in x.terms.items():
        terms[n] = Representation(pt, x.ring, {"pt": rep.fibers[i]}, {}, check=False)
    for n, d in x.diffs.items():
        if n in terms and n + 1 in terms:
            diffs[n] = RepMorphism(terms[n], terms[n + 1], {"pt": d.mats[i]}, check=False)
    return ComplexRQ(pt, x.ring, terms, diffs, check=False)


def _copies_rep(q: Quiver, ring: Ring, fib: FGModule, slot_lists: dict, arrow_slot):
    """Fibers fib^{slots(v)} with 0/1 block maps given by arrow_slot."""
    fibers = {}
    for v in q.vertices:
        k = len(slot_lists[v])
        fibers[v] = FGModule(ring, Matrix.identity(ring, k).kron(fib.presentation)) if k else FGModule.free(ring, 0)
    arrows = {}
    for name, s, t in q.arrows:
        rows, cols = slot_lists[t], slot_lists[s]
        perm = [[ring.zero()] * len(cols) for _ in range(len(rows))]
        for c, slot in enumerate(cols):
            tgt = arrow_slot(name, s, t, slot)
            if tgt is not None:
                perm[rows.index(tgt)][c] = ring.one()
        pm = Matrix(ring, len(rows), len(cols), tuple(tuple(r) for r in perm))
        arrows[name] = pm.kron(Matrix.identity(ring, fib.gens))
    return Representation(q, ring, fibers, arrows, check=False)


def kan_extend(m: ComplexRQ, q: Quiver, i, side: str = "left") -> ComplexRQ:
    """i_! (copies over paths i ~> j) or i_* (copies over paths j ~> i).

    m is a complex over the one-vertex quiver.  Both extensions are
    blockwise 0/1 on the path copies: concatenation slots for the left,
    projection slots for the right.
    """
    if side not in ("left", "right"):
        raise ShapeMismatch(f"side must be left or right, not {side!r}")
    i = q.check_vertex(i)
    if side == "left":
        slots = {v: paths(q, i, v) for v in q.vertices}

        def move(name, s, t, p):
            return p + (name,)
    else:
        slots = {v: paths(q, v, i) for v in q.vertices}

        def move(name, s, t, p):
            # component at target path pp pulls from source path (name,)+pp,
            # so the source slot p maps to its tail when it starts with name
            return p[1:] if p and p[0] == name else None

    terms, diffs = {}, {}
    for n, rep in m.terms.items():
        terms[n] = _copies_rep(q, m.ring, rep.fibers["pt"], slots, move)
    for n, d in m.diffs.items():
        if n in terms and n + 1 in terms:
            mats = {}
            for v in q.vertices:
                k = len(slots[v])
                mats[v] = Matrix.identity(m.ring, k).kron(d.mats["pt"]) if k else Matrix.zeros(m.ring, 0, 0)
            diffs[n] = RepMorphism(terms[n], terms[n + 1], mats, check=False)
    return ComplexRQ(q, m.ring, terms, diffs, check=False)


def i_times(m: ComplexRQ, q: Quiver, i) -> ComplexRQ:
    """Park an R-complex at one vertex: fiber m at i, zero elsewhere."""
    i = q.check_vertex(i)
    terms, diffs = {}, {}
    for n, rep in m.terms.items():
        fib = rep.fibers["pt"]
        fibers = {v: (fib if v == i else FGModule.free(m.ring, 0)) for v in q.vertices}
        arrows = {}
        for name, s, t in q.arrows:
            arrows[name] = Matrix.zeros(m.ring, fibers[t].gens, fibers[s].gens)
        terms[n] = Representation(q, m.ring, fibers, arrows, check=False)
    for n, d in m.diffs.items():
        if n in terms and n + 1 in terms:
            mats = {v: (d.mats["pt"] if v == i else Matrix.zeros(m.ring, 0, 0)) for v in q.vertices}
            diffs[n] = RepMorphism(terms[n], terms[n + 1], mats, check=False)
    return ComplexRQ(q, m.ring, terms, diffs, check=False)


def change_ring(x: ComplexRQ, ring: Ring, convert=None) -> ComplexRQ:
    """Push every fiber presentation and matrix entry into another ring.

    `convert` maps old entries to new ones and must be a ring homomorphism;
    the default assumes integer entries and uses ring.from_int.  Homology
    commutes with the base change only when the new ring is flat over the
    old one (a localization, the fraction field), which is the intended use.
    """
    conv = convert if convert is not None else ring.from_int

    def push(m: Matrix) -> Matrix:
        return m.map_entries(conv, ring=ring)

    terms, diffs = {}, {}
    for n, rep in x.terms.items():
        fibers = {v: FGModule(ring, push(f.presentation)) for v, f in rep.fibers.items()}
        arrows = {a: push(m) for a, m in rep.arrows.items()}
        terms[n] = Representation(x.quiver, ring, fibers, arrows, check=False)
    for n, d in x.diffs.items():
        diffs[n] = RepMorphism(terms[n], terms[n + 1], {v: push(m) for v, m in d.mats.items()}, check=False)
    return ComplexRQ(x.quiver, ring, terms, diffs, check=False)


def complex_r(ring: Ring, entries: dict, diff_mats: dict, check: bool = True) -> ComplexRQ:
    """A complex over the one-vertex quiver from modules and matrices."""
    pt = point_quiver()
    terms = {n: Representation(pt, ring, {"pt": fib}, {}, check=False) for n, fib in entries.items()}
    diffs = {}
    for n, m in diff_mats.items():
        if n in terms and n + 1 in terms:
            diffs[n] = RepMorphism(terms[n], terms[n + 1], {"pt": m}, check=False)
    return ComplexRQ(pt, ring, terms, diffs, check=check)


def koszul_complex(ring: Ring, gens) -> ComplexRQ:
    """Koszul complex on a generator list, degrees [-k, 0].

    Basis in degree -j: the size-j subsets of generator indices, sorted;
    d(e_S) = sum over positions t of (-1)^t g_{S[t]} e_{S minus S[t]}.
    """
    gens = [ring.canon(g) for g in gens]
    if any(ring.is_zero(g) for g in gens):
        raise ShapeMismatch("Koszul generators must be nonzero")
    k = len(gens)
    basis = {j: sorted(combinations(range(k), j)) for j in range(k + 1)}
    entries = {-j: FGModule.free(ring, len(basis[j])) for j in range(k + 1)}
    diffs = {}
    for j in range(k, 0, -1):
        rows, cols = basis[j - 1], basis[j]
        m = [[ring.zero()] * len(cols) for _ in range(len(rows))]
        for c, S in enumerate(cols):
            for t, idx in enumerate(S):
                rest = S[:t] + S[t + 1:]
                coeff = gens[idx] if t % 2 == 0 else ring.neg(gens[idx])
                r_i = rows.index(rest)
                m[r_i][c] = ring.add(m[r_i][c], coeff)
        diffs[-j] = Matrix(ring, len(rows), len(cols), tuple(tuple(r) for r in m))
    return complex_r(ring, entries, diffs)


# ---------------------------------------------------------------------------
# tensor product


def _fiber_tensor(a: FGModule, b: FGModule) -> FGModule:
    r = a.ring
    if a.is_literally_free and b.is_literally_free:
        return FGModule.free(r, a.gens * b.gens)
    if b.is_literally_free:
        return FGModule(r, a.presentation.kron(Matrix.identity(r, b.gens)))
    if a.is_literally_free:
        return FGModule(r, Matrix.identity(r, a.gens).kron(b.presentation))
    raise NotDerivable("tensor of two non-free fibers is not computed termwise")


def rep_box(a: Representation, b: Representation) -> Representation:
    """Vertexwise tensor product with Kronecker arrow maps."""
    check_same_ring(a.ring, b.ring)
    if a.quiver != b.quiver:
        raise ShapeMismatch("tensor of representations over different quivers")
    fibers = {v: _fiber_tensor(a.fibers[v], b.fibers[v]) for v in a.quiver.vertices}
    arrows = {name: a.arrows[name].kron(b.arrows[name]) for name, _, _ in a.quiver.arrows}
    return Representation(a.quiver, a.ring, fibers, arrows, check=False)


def box_tensor(x: ComplexRQ, y: ComplexRQ, check: bool = True) -> ComplexRQ:
    """Total complex of the vertexwise tensor, Koszul signs on the y side.

    Computed termwise, which is only the derived tensor when both inputs are
    perfect or one of them has literally free fibers everywhere (then the
    termwise tensor is exact); anything else raises NotDerivable.
    """
    check_same_ring(x.ring, y.ring)
    if x.quiver != y.quiver:
        raise ShapeMismatch("tensor over different quivers")
    x_free = all(rep.all_free() for rep in x.terms.values())
    y_free = all(rep.all_free() for rep in y.terms.values())
    if not ((x.perfect and y.perfect) or x_free or y_free):
        raise NotDerivable("need perfect inputs or one side with free fibers")
    q, r = x.quiver, x.ring
    if x.is_zero or y.is_zero:
        return zero_complex(q, r)
    pairs = {}  # total degree -> ordered (p, q) summands
    for p in x.degrees:
        for qq in y.degrees:
            pairs.setdefault(p + qq, []).append((p, qq))
    for n in pairs:
        pairs[n].sort()
    terms = {}
    for n, ps in sorted(pairs.items()):
        terms[n] = rep_direct_sum([rep_box(x.terms[p], y.terms[qq]) for p, qq in ps])
    diffs = {}
    for n in sorted(pairs):
        if n + 1 not in pairs:
            continue
        src, tgt = pairs[n], pairs[n + 1]
        mats = {}
        for v in q.vertices:
            src_dims = [x.terms[p].gens(v) * y.terms[qq].gens(v) for p, qq in src]
            tgt_dims = [x.terms[p].gens(v) * y.terms[qq].gens(v) for p, qq in tgt]
            grid = [[None] * len(src) for _ in tgt]
            for ci, (p, qq) in enumerate(src):
                if (p + 1, qq) in tgt:
                    ri = tgt.index((p + 1, qq))
                    grid[ri][ci] = x.diff(p).mats[v].kron(Matrix.identity(r, y.terms[qq].gens(v)))
                if (p, qq + 1) in tgt:
                    ri = tgt.index((p, qq + 1))
                    blk = Matrix.identity(r, x.terms[p].gens(v)).kron(y.diff(qq).mats[v])
                    grid[ri][ci] = blk if p % 2 == 0 else blk.neg()
            mats[v] = _assemble(r, grid, tgt_dims, src_dims)
        diffs[n] = RepMorphism(terms[n], terms[n + 1], mats, check=False)
    return ComplexRQ(q, r, terms, diffs, check=check)


def _assemble(ring, grid, row_dims, col_dims) -> Matrix:
    rows = sum(row_dims)
    cols = sum(col_dims)
    out = [[ring.zero()] * cols for _ in range(rows)]
    roff = 0
    for ri, rd in enumerate(row_dims):
        coff = 0
        for ci, cd in enumerate(col_dims):
            blk = grid[ri][ci]
            if blk is not None:
                for i in range(blk.rows):
                    row = blk.entries[i]
                    for j in range(blk.cols):
                        out[roff + i][coff + j] = row[j]
            coff += cd
        roff += rd
    return Matrix(ring, rows, cols, tuple(tuple(r) for r in out))


# ---------------------------------------------------------------------------
# homology


def homology(x: ComplexRQ, n: int) -> Representation:
    """H^n as a representation: ker/im vertexwise, with induced arrow maps.

    Per vertex, generators are the part of ker([d | relations]) living in the
    generator block; relations are boundaries, incoming relations, and the
    internal relations among those generators.
    """
    q, r = x.quiver, x.ring
    cur = x.term(n)
    if cur.is_zero_gens():
        return rep_zero(q, r)
    nxt = x.term(n + 1)
    dn = x.diff(n)
    dp = x.diff(n - 1)
    prev = x.term(n - 1)
    gens_mats = {}
    fibers = {}
    for v in q.vertices:
        g = cur.gens(v)
        block = dn.mats[v]
        nxt_pres = nxt.fibers[v].presentation
        if nxt_pres.cols:
            block = block.hstack(nxt_pres)
        K_full = kernel_basis(block)
        K = Matrix(r, g, K_full.cols, tuple(K_full.entries[i] for i in range(g)))
        rel_cols = dp.mats[v]
        cur_pres = cur.fibers[v].presentation
        if cur_pres.cols:
            rel_cols = rel_cols.hstack(cur_pres)
        w = solve(K, rel_cols)
        if w is None:
            raise ShapeMismatch("boundaries escaped the cycle module; invalid complex")
        w = w.hstack(kernel_basis(K))
        gens_mats[v] = K
        fibers[v] = FGModule(r, w)
    arrows = {}
    for name, s, t in q.arrows:
        img = cur.arrows[name].mul(gens_mats[s])
        m = solve(gens_mats[t], img)
        if m is None:
            raise ShapeMismatch(f"arrow {name} does not preserve cycles")
        arrows[name] = m
    return Representation(q, r, fibers, arrows, check=False)


def homology_range(x: ComplexRQ):
    ds = x.degrees
    return range(min(ds), max(ds) + 1) if ds else range(0)


def homology_fingerprint(x: ComplexRQ):
    """Sorted iso data of all homology: (degree, vertex, free rank, divisors).

    Over a field the ranks of the induced arrow maps are appended, making the
    fingerprint a complete derived invariant for the quivers we test over;
    over Z and friends it is the documented necessary-condition check.
    """
    out = []
    for n in homology_range(x):
        h = homology(x, n)
        for v in x.quiver.vertices:
            fib = h.fibers[v]
            if not fib.is_zero_module:
                f = x.ring.format_elem
                out.append((n, v, fib.free_rank, tuple(f(d) for d in fib.divisors.divisors)))
        if x.ring.is_field:
            for name, _, t in x.quiver.arrows:
                a = h.arrows[name]
                pres = h.fibers[t].presentation
                rank = _matrix_rank(a.hstack(pres)) - _matrix_rank(pres)
                if rank:
                    out.append((n, "->" + name, rank, ()))
    return tuple(sorted(out, key=lambda t: (t[0], str(t[1]))))


def _matrix_rank(m: Matrix) -> int:
    from .linalg import rank
    return rank(m)


def is_acyclic(x: ComplexRQ) -> bool:
    for n in homology_range(x):
        h = homology(x, n)
        if any(not h.fibers[v].is_zero_module for v in x.quiver.vertices):
            return False
    return True


def same_complex(x: ComplexRQ, y: ComplexRQ) -> bool:
    """Structural equality on the nose: same fibers, arrows, differentials."""
    if x.quiver != y.quiver or x.ring != y.ring or x.degrees != y.degrees:
        return False
    for n in x.degrees:
        a, b = x.terms[n], y.terms[n]
        for v in x.quiver.vertices:
            if a.fibers[v].presentation.entries != b.fibers[v].presentation.entries:
                return False
            if a.fibers[v].gens != b.fibers[v].gens:
                return False
        for name, _, _ in x.quiver.arrows:
            if a.arrows[name].entries != b.arrows[name].entries:
                return False
    for n in set(x.diffs) | set(y.diffs):
        for v in x.quiver.vertices:
            if x.diff(n).mats[v].entries != y.diff(n).mats[v].entries:
                return False
    return True


# ---------------------------------------------------------------------------
# projective resolution


def _regular_tier(ring: Ring) -> bool:
    from .rings import IntegersMod
    return not isinstance(ring, IntegersMod)


def _minimalize_fibers(x: ComplexRQ) -> ComplexRQ:
    """Re-coordinate every fiber so its presentation is injective diagonal.

    Change of basis by the Smith u on each fiber; all matrices in and out are
    conjugated accordingly, unit-killed generators are dropped.
    """
    from .linalg import diagonal_of, is_invertible, smith_normal_form
    r = x.ring
    q = x.quiver
    # per (degree, vertex): (u, keep-indices, new presentation)
    coord = {}
    for n, rep in x.terms.items():
        for v in q.vertices:
            fib = rep.fibers[v]
            if fib.is_literally_free:
                coord[(n, v)] = None
                continue
            d, u, _ = smith_normal_form(fib.presentation)
            diag = diagonal_of(d)
            keep = [i for i in range(fib.gens)
                    if i >= len(diag) or r.is_zero(diag[i]) or not r.is_unit(diag[i])]
            cols = []
            for i in keep:
                if i < len(diag) and not r.is_zero(diag[i]):
                    col = [r.zero()] * len(keep)
                    col[keep.index(i)] = diag[i]
                    cols.append(col)
            pres = Matrix(r, len(keep), len(cols),
                          tuple(tuple(col[i] for col in cols) for i in range(len(keep))))
            coord[(n, v)] = (u, keep, pres)

    def convert(mat: Matrix, src_key, tgt_key) -> Matrix:
        m = mat
        if coord[src_key] is not None:
            u_s, keep_s, _ = coord[src_key]
            inv = solve(u_s, Matrix.identity(r, u_s.rows))
            m = m.mul(inv)
            m = m.select_columns(keep_s)
        if coord[tgt_key] is not None:
            u_t, keep_t, _ = coord[tgt_key]
            m = u_t.mul(m)
            m = Matrix(r, len(keep_t), m.cols, tuple(m.entries[i] for i in keep_t))
        return m

    terms, diffs = {}, {}
    for n, rep in x.terms.items():
        fibers = {}
        for v in q.vertices:
            c = coord[(n, v)]
            fibers[v] = rep.fibers[v] if c is None else FGModule(r, c[2])
        arrows = {}
        for name, s, t in q.arrows:
            arrows[name] = convert(rep.arrows[name], (n, s), (n, t))
        terms[n] = Representation(q, r, fibers, arrows)
    for n in x.diffs:
        mats = {v: convert(x.diffs[n].mats[v], (n, v), (n + 1, v)) for v in q.vertices}
        diffs[n] = RepMorphism(terms[n], terms[n + 1], mats)
    return ComplexRQ(q, r, terms, diffs)


def _free_fiber_replacement(x: ComplexRQ) -> ComplexRQ:
    """Quasi-isomorphic complex with literally free fibers.

    Fibers are resolved by their (injective, diagonal) presentations; the
    lifted maps are unique, which makes every required coherence strict.  The
    twisted total complex puts relations of degree m+1 next to generators of
    degree m.
    """
    if all(rep.all_free() for rep in x.terms.values()):
        return x
    x = _minimalize_fibers(x)
    q, r = x.quiver, x.ring

    def pres(n, v):
        return x.term(n).fibers[v].presentation

    def lift_through(n_tgt, v, mat):
        """Unique L with pres(n_tgt, v) * L = mat; mat lands in the relations."""
        p = pres(n_tgt, v)
        if p.cols == 0:
            if not mat.is_zero():
                raise NotPerfect("cannot lift through an empty relation module")
            return Matrix.zeros(r, 0, mat.cols)
        out = solve(p, mat)
        if out is None:
            raise NotPerfect("relation lift failed; fibers too entangled to resolve")
        return out

    degrees = x.degrees
    terms, diffs = {}, {}
    span = sorted(set(degrees) | {n - 1 for n in degrees})
    for m in span:
        fibers, arrows = {}, {}
        for v in q.vertices:
            g = x.term(m).gens(v)
            c = pres(m + 1, v).cols
            fibers[v] = FGModule.free(r, g + c)
        for name, s, t in q.arrows:
            a_gen = x.term(m).arrows[name]
            a_next = x.term(m + 1).arrows[name]
            a_rel = lift_through(m + 1, t, a_next.mul(pres(m + 1, s)))
            # naturality defect of the generator-level differential
            dm_t, dm_s = x.diff(m).mats[t], x.diff(m).mats[s]
            defect = dm_t.mul(a_gen).sub(a_next.mul(dm_s))
            n_blk = lift_through(m + 1, t, defect)
            grid = [[a_gen, None], [n_blk.neg(), a_rel]]
            arrows[name] = _assemble(r, grid,
                                     [x.term(m).gens(t), pres(m + 1, t).cols],
                                     [x.term(m).gens(s), pres(m + 1, s).cols])
        if any(f.gens for f in fibers.values()):
            terms[m] = Representation(q, r, fibers, arrows)
    for m in span:
        if m not in terms or m + 1 not in terms:
            continue
        mats = {}
        for v in q.vertices:
            delta = x.diff(m).mats[v]
            delta_next = x.diff(m + 1).mats[v]
            p_next = pres(m + 1, v)
            delta_rel = lift_through(m + 2, v, delta_next.mul(p_next))
            h_blk = lift_through(m + 2, v, delta_next.mul(delta))
            grid = [[delta, p_next], [h_blk.neg(), delta_rel.neg()]]
            mats[v] = _assemble(r, grid,
                                [x.term(m + 1).gens(v), pres(m + 2, v).cols],
                                [x.term(m).gens(v), p_next.cols])
        diffs[m] = RepMorphism(terms[m], terms[m + 1], mats)
    return ComplexRQ(q, r, terms, diffs)


def projective_resolution(x: ComplexRQ) -> ComplexRQ:
    """A perfect complex with the same homology at every degree and vertex.

    Fibers are freed first (length-one resolutions exist over the regular
    tier), then the two-term projective resolution of representations

        0 -> sum_a P(t(a)) x X_{s(a)} -> sum_i P(i) x X_i -> X -> 0

    is applied termwise and totalized.  Refused over Z/n with square factors.
    """
    resolved, _ = _resolution_with_counit(x)
    return resolved


def _resolution_with_counit(x: ComplexRQ):
    from .rings import IntegersMod
    q, r = x.quiver, x.ring
    if isinstance(r, IntegersMod):
        from .rings import int_prime_factors
        square_free = all(r.n % (p * p) != 0 for p in int_prime_factors(r.n))
        if not (square_free and all(rep.all_free() for rep in x.terms.values())):
            raise NonRegularRing(f"cannot resolve over {r.label}; input must already be perfect")
    x = _free_fiber_replacement(x)
    if x.is_zero:
        return x, ComplexMorphism(x, x, {}, check=False)

    vorder = list(q.vertices)
    aorder = list(q.arrows)
    projs = {v: projective_rep(q, r, v) for v in vorder}

    def b0_of(term: Representation) -> Representation:
        return rep_direct_sum([_proj_tensor(projs[i], term.gens(i)) for i in vorder])

    def b1_of(term: Representation) -> Representation:
        parts = [_proj_tensor(projs[t], term.gens(s)) for _, s, t in aorder]
        return rep_direct_sum(parts) if parts else rep_zero(q, r)

    def b0_map(src: Representation, tgt: Representation, f_mats) -> dict:
        # blockwise P(i) x f_i
        out = {}
        for v in q.vertices:
            grid = [[None] * len(vorder) for _ in vorder]
            rdims, cdims = [], []
            for k, i in enumerate(vorder):
                np_ = len(paths(q, i, v))
                rdims.append(np_ * tgt.gens(i))
                cdims.append(np_ * src.gens(i))
                grid[k][k] = Matrix.identity(r, np_).kron(f_mats[i])
            out[v] = _assemble(r, grid, rdims, cdims)
        return out

    def b1_map(src: Representation, tgt: Representation, f_mats) -> dict:
        out = {}
        for v in q.vertices:
            grid = [[None] * len(aorder) for _ in aorder]
            rdims, cdims = [], []
            for k, (_, s, t) in enumerate(aorder):
                np_ = len(paths(q, t, v))
                rdims.append(np_ * tgt.gens(s))
                cdims.append(np_ * src.gens(s))
                grid[k][k] = Matrix.identity(r, np_).kron(f_mats[s])
            out[v] = _assemble(r, grid, rdims, cdims)
        return out

    def phi(term: Representation) -> dict:
        """B1 -> B0: p x z maps to p x X_a(z) minus (a then p) x z."""
        out = {}
        for v in q.vertices:
            rdims = [len(paths(q, i, v)) * term.gens(i) for i in vorder]
            cdims = [len(paths(q, t, v)) * term.gens(s) for _, s, t in aorder]
            m = [[r.zero()] * sum(cdims) for _ in range(sum(rdims))]
            coff = 0
            for name, s, t in aorder:
                pt_list = paths(q, t, v)
                ps_list = paths(q, s, v)
                gs = term.gens(s)
                a_mat = term.arrows[name]
                roff_t = sum(rdims[:vorder.index(t)])
                roff_s = sum(rdims[:vorder.index(s)])
                gt = term.gens(t)
                for pi, p in enumerate(pt_list):
                    col0 = coff + pi * gs
                    for z in range(gs):
                        # p x X_a(z) in the P(t) block
                        for w in range(gt):
                            val = a_mat.entries[w][z]
                            if not r.is_zero(val):
                                row = roff_t + pt_list.index(p) * gt + w
                                m[row][col0 + z] = r.add(m[row][col0 + z], val)
                        # minus (name then p) x z in the P(s) block
                        row = roff_s + ps_list.index((name,) + p) * gs + z
                        m[row][col0 + z] = r.sub(m[row][col0 + z], r.one())
                coff += len(pt_list) * gs
            out[v] = Matrix(r, sum(rdims), sum(cdims), tuple(tuple(row) for row in m))
        return out

    def counit(term: Representation) -> dict:
        """B0 -> X: p x z maps to the path action of p applied to z."""
        out = {}
        for v in q.vertices:
            cols = []
            for i in vorder:
                for p in paths(q, i, v):
                    act = term.path_action(i, p)
                    for z in range(term.gens(i)):
                        cols.append(act.column(z))
            if cols:
                m = cols[0]
                for c in cols[1:]:
                    m = m.hstack(c)
            else:
                m = Matrix.zeros(r, term.gens(v), 0)
            out[v] = m
        return out

    degrees = x.degrees
    b0 = {n: b0_of(x.terms[n]) for n in degrees}
    b1 = {n: b1_of(x.terms[n]) for n in degrees}
    terms, diffs, aug_parts = {}, {}, {}
    span = sorted(set(degrees) | {n - 1 for n in degrees})
    for m in span:
        pieces = []
        if m in degrees:
            pieces.append(b0[m])
        else:
            pieces.append(rep_zero(q, r))
        if m + 1 in degrees:
            pieces.append(b1[m + 1])
        else:
            pieces.append(rep_zero(q, r))
        t = rep_direct_sum(pieces)
        if not t.is_zero_gens():
            terms[m] = t
    for m in span:
        if m not in terms or m + 1 not in terms:
            continue
        d_cur = x.diff(m)
        top_d = b0_map(x.term(m), x.term(m + 1), d_cur.mats) if m in degrees and m + 1 in degrees else None
        phi_next = phi(x.terms[m + 1]) if m + 1 in degrees else None
        bot_d = b1_map(x.term(m + 1), x.term(m + 2), x.diff(m + 1).mats) if (m + 1 in degrees and m + 2 in degrees) else None
        mats = {}
        for v in q.vertices:
            r00 = b0[m + 1].gens(v) if m + 1 in degrees else 0
            r10 = b1[m + 2].gens(v) if m + 2 in degrees else 0
            c00 = b0[m].gens(v) if m in degrees else 0
            c10 = b1[m + 1].gens(v) if m + 1 in degrees else 0
            grid = [[top_d[v] if top_d else None, phi_next[v] if phi_next else None],
                    [None, bot_d[v].neg() if bot_d else None]]
            mats[v] = _assemble(r, grid, [r00, r10], [c00, c10])
        diffs[m] = RepMorphism(terms[m], terms[m + 1], mats, check=False)
    resolved = ComplexRQ(q, r, terms, diffs)
    for m in degrees:
        if m not in terms:
            continue
        eps = counit(x.terms[m])
        mats = {}
        for v in q.vertices:
            pad = Matrix.zeros(r, x.term(m).gens(v), terms[m].gens(v) - eps[v].cols)
            mats[v] = eps[v].hstack(pad)
        aug_parts[m] = RepMorphism(terms[m], x.terms[m], mats, check=False)
    aug = ComplexMorphism(resolved, x, aug_parts)
    return resolved, aug


def _proj_tensor(p: Representation, rank: int) -> Representation:
    """P(i) tensor a free module of the given rank."""
    q, r = p.quiver, p.ring
    fibers = {v: FGModule.free(r, p.gens(v) * rank) for v in q.vertices}
    arrows = {name: p.arrows[name].kron(Matrix.identity(r, rank)) for name, _, _ in q.arrows}
    return Representation(q, r, fibers, arrows, check=False)


def ensure_perfect(x: ComplexRQ) -> ComplexRQ:
    return x if x.perfect else projective_resolution(x)
