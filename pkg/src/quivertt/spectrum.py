"""Prime tensor ideals of perfect complexes over RQ.

The spectrum of the perfect complexes is Spec(R) x Q0: a point is a prime
ideal of the base ring together with a vertex, standing for the kernel of
the functor "restrict to that vertex, then localize at that prime".  An
object lies in the kernel exactly when the localized fiber complex is
acyclic, and because our complexes have finitely generated homology over a
noetherian base this is a statement about homology supports, which Smith
normal form computes exactly.

Supports of objects are recorded per vertex as specialization-closed
subsets of Spec(R) (`QSupport`).  The support determines the thick tensor
ideal an object generates, which gives the translation layer at the bottom
of this file and the brute-force closure oracle that double-checks it over
finite fields.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complexes import (
    ComplexRQ,
    box_tensor,
    cone,
    direct_sum_complexes,
    ensure_perfect,
    eval_vertex,
    complex_r,
    homology,
    homology_fingerprint,
    homology_range,
    i_times,
    koszul_complex,
    shift_complex,
)
from .errors import (
    BadElement,
    MonotonicityViolation,
    UnsupportedRing,
    UniverseNotClosed,
)
from .homs import ChainMapSpace
from .quivers import Quiver
from .rings import (
    FGModule,
    PrimeIdeal,
    Ring,
    SpClosedSet,
    check_same_ring,
    enumerate_primes,
    module_support,
    prime_contains,
    sp_all,
    sp_closed_contains,
    sp_closed_intersection,
    sp_closed_subset,
    sp_closed_union,
    sp_empty,
    sp_points,
)


@dataclass(frozen=True)
class BalmerPoint:
    """A prime of the base ring parked at a vertex."""

    prime: PrimeIdeal
    vertex: str

    def __str__(self):
        return f"({self.prime.ring.format_elem(self.prime.gen)}, {self.vertex})"

    def sort_key(self):
        return (self.vertex, self.prime.sort_key())


@dataclass(frozen=True)
class QSupport:
    """One specialization-closed subset of Spec(R) per vertex.

    components are stored in quiver vertex order; missing vertices in the
    constructor mapping default to empty.
    """

    quiver: Quiver
    ring: Ring
    components: tuple

    def at(self, v) -> SpClosedSet:
        v = self.quiver.check_vertex(v)
        return self.components[self.quiver.vertices.index(v)]

    def contains_point(self, pt: BalmerPoint) -> bool:
        return sp_closed_contains(self.at(pt.vertex), pt.prime)

    @property
    def is_empty(self) -> bool:
        return all(c.is_empty for c in self.components)

    def __str__(self):
        return "; ".join(f"{v}: {c}" for v, c in zip(self.quiver.vertices, self.components))


def q_support(quiver: Quiver, ring: Ring, mapping=None) -> QSupport:
    mapping = dict(mapping or {})
    comps = []
    for v in quiver.vertices:
        c = mapping.pop(v, None)
        if c is None:
            c = sp_empty(ring)
        check_same_ring(ring, c.ring)
        comps.append(c)
    if mapping:
        raise BadElement(f"support names unknown vertices: {sorted(mapping)}")
    return QSupport(quiver, ring, tuple(comps))


def q_support_all(quiver: Quiver, ring: Ring) -> QSupport:
    return QSupport(quiver, ring, tuple(sp_all(ring) for _ in quiver.vertices))


def _check_same_shape(a: QSupport, b: QSupport):
    if a.quiver != b.quiver:
        raise BadElement("supports over different quivers")
    check_same_ring(a.ring, b.ring)


def q_support_union(a: QSupport, b: QSupport) -> QSupport:
    _check_same_shape(a, b)
    return QSupport(a.quiver, a.ring, tuple(sp_closed_union(x, y) for x, y in zip(a.components, b.components)))


def q_support_intersection(a: QSupport, b: QSupport) -> QSupport:
    _check_same_shape(a, b)
    return QSupport(a.quiver, a.ring, tuple(sp_closed_intersection(x, y) for x, y in zip(a.components, b.components)))


def q_support_subset(a: QSupport, b: QSupport) -> bool:
    _check_same_shape(a, b)
    return all(sp_closed_subset(x, y) for x, y in zip(a.components, b.components))


# ---------------------------------------------------------------------------
# membership tests and supports


def _vertex_support(x: ComplexRQ, i) -> SpClosedSet:
    # union of homology supports of the fiber complex at one vertex
    xi = eval_vertex(x, i)
    s = sp_empty(x.ring)
    for n in homology_range(xi):
        h = homology(xi, n)
        s = sp_closed_union(s, module_support(h.fibers["pt"]))
    return s


def xi_zero_test(x: ComplexRQ, p: PrimeIdeal, i) -> bool:
    """Whether x dies under "restrict to vertex i, localize at p".

    True iff p avoids the support of every homology module of the fiber
    complex; localization is exact, so this is the acyclicity of the
    localized complex.
    """
    check_same_ring(x.ring, p.ring)
    i = x.quiver.check_vertex(i)
    return not sp_closed_contains(_vertex_support(x, i), p)


def compact_support(x: ComplexRQ) -> QSupport:
    """Per-vertex union of homology supports; the points where x survives."""
    comps = []
    for v in x.quiver.vertices:
        comps.append(_vertex_support(x, v))
    return QSupport(x.quiver, x.ring, tuple(comps))


def big_support_compact(x: ComplexRQ) -> QSupport:
    """Support via the residue-object test, evaluated for bounded complexes.

    Tensoring with the residue object of (p, i) detects exactly whether p
    lies in the support of the homology of the fiber at i, as long as that
    homology is finitely generated, which it is for everything this data
    model can express.  So the two support notions coincide here and we
    compute the homology-side one.
    """
    return compact_support(x)


def ideal_generators(s: QSupport) -> list:
    """Complexes generating the thick tensor ideal with support s.

    A vertex carrying the whole spectrum contributes the free rank-one
    stalk at that vertex; a finite component contributes one parked Koszul
    complex per listed prime.
    """
    q, r = s.quiver, s.ring
    out = []
    unit_pt = complex_r(r, {0: FGModule.free(r, 1)}, {})
    for v in q.vertices:
        c = s.at(v)
        if c.is_all:
            out.append(i_times(unit_pt, q, v))
        else:
            for p in sorted(c.points, key=PrimeIdeal.sort_key):
                out.append(i_times(koszul_complex(r, (p.gen,)), q, v))
    return out


def ideal_membership(x: ComplexRQ, s: QSupport) -> bool:
    """x lies in the thick tensor ideal classified by s iff supp(x) is inside s."""
    if x.quiver != s.quiver:
        raise BadElement("object and support live over different quivers")
    check_same_ring(x.ring, s.ring)
    return q_support_subset(compact_support(x), s)


# ---------------------------------------------------------------------------
# the spectrum window and its detecting objects


def detecting_object(ring: Ring, quiver: Quiver, r_elem, i) -> ComplexRQ:
    """Parked Koszul complex on r at vertex i, plus a free stalk everywhere else.

    Membership in the point (q, j) then reads off as: j = i and r not in q.
    The free stalks pin the vertex, the Koszul factor pins the prime.
    """
    i = quiver.check_vertex(i)
    unit_pt = complex_r(ring, {0: FGModule.free(ring, 1)}, {})
    parts = [i_times(koszul_complex(ring, (r_elem,)), quiver, i)]
    for v in quiver.vertices:
        if v != i:
            parts.append(i_times(unit_pt, quiver, v))
    return direct_sum_complexes(parts)


@dataclass(frozen=True)
class SpectrumWindow:
    """All points with prime generator inside an enumeration window.

    The order is: (p, i) <= (q, j) iff i = j and q is contained in p;
    inclusions of the kernels reverse inclusions of the primes.
    """

    ring: Ring
    quiver: Quiver
    bound: int
    points: tuple

    def leq(self, a: BalmerPoint, b: BalmerPoint) -> bool:
        return a.vertex == b.vertex and prime_contains(b.prime, a.prime)

    def covers(self) -> list:
        out = []
        for a in self.points:
            for b in self.points:
                if a == b or not self.leq(a, b):
                    continue
                between = any(
                    c not in (a, b) and self.leq(a, c) and self.leq(c, b) for c in self.points
                )
                if not between:
                    out.append((a, b))
        return out

    def member(self, x: ComplexRQ, pt: BalmerPoint) -> bool:
        """Whether x lies in the prime ideal at pt (i.e. dies there)."""
        return xi_zero_test(x, pt.prime, pt.vertex)

    def detecting_objects(self) -> list:
        """(generator, vertex, object) rows, one per maximal prime and vertex."""
        rows = []
        for p in self.maximal_primes():
            for v in self.quiver.vertices:
                rows.append((p.gen, v, detecting_object(self.ring, self.quiver, p.gen, v)))
        return rows

    def maximal_primes(self) -> list:
        seen = {pt.prime for pt in self.points if not pt.prime.is_zero_ideal}
        return sorted(seen, key=PrimeIdeal.sort_key)


def spc_enumerate(ring: Ring, quiver: Quiver, bound: int) -> SpectrumWindow:
    if bound < 0:
        raise BadElement("enumeration bound must be nonnegative")
    pts = []
    for v in quiver.vertices:
        for p in enumerate_primes(ring, bound):
            pts.append(BalmerPoint(p, v))
    pts.sort(key=BalmerPoint.sort_key)
    return SpectrumWindow(ring, quiver, bound, tuple(pts))


def spc_dot(win: SpectrumWindow) -> str:
    """DOT digraph of the window poset, edges along covering relations."""
    lines = ["digraph spectrum {", "  rankdir=BT;"]
    for pt in win.points:
        lines.append(f'  "{pt}";')
    for a, b in win.covers():
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# the two translations of the classification


@dataclass(frozen=True)
class PerVertexForm:
    """The classification read as: one specialization-closed set per vertex."""

    quiver: Quiver
    ring: Ring
    components: tuple


@dataclass(frozen=True)
class VertexPosetMap:
    """The classification read as a monotone map Spec(R) -> subsets of Q0.

    Stored as the default value (taken at the generic point and at every
    prime not listed) plus a finite exception table.  Monotone means the
    default is contained in every exception value: shrinking the prime can
    only shrink the vertex set.
    """

    quiver: Quiver
    ring: Ring
    default: frozenset
    exceptions: tuple  # ((PrimeIdeal, frozenset), ...) sorted by prime

    def value(self, p: PrimeIdeal) -> frozenset:
        check_same_ring(self.ring, p.ring)
        for q, val in self.exceptions:
            if q == p:
                return val
        return self.default


def vertex_poset_map(quiver: Quiver, ring: Ring, default, exceptions) -> VertexPosetMap:
    dflt = frozenset(quiver.check_vertex(v) for v in default)
    table = []
    seen = set()
    for p, val in exceptions:
        check_same_ring(ring, p.ring)
        if p.is_zero_ideal:
            raise MonotonicityViolation("the generic point's value is the default; it cannot be an exception")
        if p in seen:
            raise BadElement(f"prime {p} listed twice")
        seen.add(p)
        vs = frozenset(quiver.check_vertex(v) for v in val)
        if not dflt <= vs:
            raise MonotonicityViolation(
                f"value at {p} does not contain the default; the map is not monotone"
            )
        if vs != dflt:
            table.append((p, vs))
    table.sort(key=lambda t: t[0].sort_key())
    return VertexPosetMap(quiver, ring, dflt, tuple(table))


def translate_classification(s: QSupport, mode: str):
    """Re-encode a support as per-vertex data or as a monotone poset map."""
    if mode == "per_vertex":
        return PerVertexForm(s.quiver, s.ring, s.components)
    if mode == "poset_map":
        default = frozenset(v for v in s.quiver.vertices if s.at(v).is_all)
        primes = set()
        for c in s.components:
            if not c.is_all:
                primes.update(c.points)
        exceptions = []
        for p in sorted(primes, key=PrimeIdeal.sort_key):
            val = frozenset(v for v in s.quiver.vertices if sp_closed_contains(s.at(v), p))
            exceptions.append((p, val))
        return vertex_poset_map(s.quiver, s.ring, default, exceptions)
    raise BadElement(f"unknown translation mode {mode!r}")


def untranslate_classification(form) -> QSupport:
    if isinstance(form, PerVertexForm):
        for c in form.components:
            check_same_ring(form.ring, c.ring)
        if len(form.components) != len(form.quiver.vertices):
            raise BadElement("component count does not match the vertex count")
        return QSupport(form.quiver, form.ring, tuple(form.components))
    if isinstance(form, VertexPosetMap):
        comps = []
        for v in form.quiver.vertices:
            if v in form.default:
                comps.append(sp_all(form.ring))
            else:
                pts = {p for p, val in form.exceptions if v in val}
                comps.append(sp_points(form.ring, pts))
        return QSupport(form.quiver, form.ring, tuple(comps))
    raise BadElement(f"cannot translate back from {type(form).__name__}")


# ---------------------------------------------------------------------------
# brute-force closure oracle over finite fields
#
# Iso classes are tracked by homology fingerprint, normalized so the lowest
# nonzero homology sits in degree 0; thick subcategories are shift-closed,
# so nothing is lost.  Closure steps: direct sums and summands (fingerprint
# arithmetic), tensoring with every universe element, and cones over every
# chain map between projective replacements of two members.  Chain maps out
# of a bounded complex of projectives hit every map in the homotopy
# category, so sweeping all of them finds every candidate triangle; the
# approximation lies in identifying objects with equal fingerprints, which
# is faithful for the small linear quivers the oracle is used on.
#
# Results outside the universe's stated bounds are skipped as out of scope;
# a result inside the bounds but missing from the universe raises
# UniverseNotClosed.


def _fp_shift(fp, k):
    return tuple(sorted(((n - k, key, rank, divs) for n, key, rank, divs in fp), key=lambda t: (t[0], str(t[1]))))


def _fp_normalize(fp):
    if not fp:
        return fp
    return _fp_shift(fp, min(n for n, _, _, _ in fp))


def _fp_add(a, b):
    tally = {}
    for n, key, rank, divs in itertools.chain(a, b):
        if divs:
            raise BadElement("closure oracle needs field coefficients; saw torsion")
        tally[(n, key)] = tally.get((n, key), 0) + rank
    return tuple(sorted(((n, key, r, ()) for (n, key), r in tally.items()), key=lambda t: (t[0], str(t[1]))))


def _fp_sub(a, b):
    # a minus b when b embeds entrywise, else None
    tally = {(n, key): rank for n, key, rank, _ in a}
    for n, key, rank, _ in b:
        left = tally.get((n, key), 0) - rank
        if left < 0:
            return None
        if left == 0:
            tally.pop((n, key), None)
        else:
            tally[(n, key)] = left
    return tuple(sorted(((n, key, r, ()) for (n, key), r in tally.items()), key=lambda t: (t[0], str(t[1]))))


def _fp_span(fp):
    if not fp:
        return 0
    ns = [n for n, _, _, _ in fp]
    return max(ns) - min(ns) + 1


def _fp_max_dim(fp):
    return max((rank for _, key, rank, _ in fp if not str(key).startswith("->")), default=0)


def _default_within(universe_fps):
    span = max((_fp_span(fp) for fp in universe_fps), default=1)
    dim = max((_fp_max_dim(fp) for fp in universe_fps), default=1)

    def within(fp):
        return _fp_span(fp) <= span and _fp_max_dim(fp) <= dim

    return within


class _ClosureState:
    """Universe bookkeeping shared between closure runs via the cache dict."""

    def __init__(self, universe, ring, within, max_maps, cache):
        self.ring = ring
        self.within = within
        self.max_maps = max_maps
        self.cache = cache if cache is not None else {}
        self.elements = list(universe)
        self.fps = []
        self.index = {}
        for pos, u in enumerate(universe):
            check_same_ring(ring, u.ring)
            fp = _fp_normalize(homology_fingerprint(u))
            if fp in self.index:
                raise BadElement("universe lists two objects with the same fingerprint")
            self.index[fp] = pos
            self.fps.append(fp)
        self.all_fps = frozenset(self.index)

    def rep(self, fp):
        # shift the stored representative so its fingerprint is normalized
        key = ("rep", fp)
        if key not in self.cache:
            u = self.elements[self.index[fp]]
            raw = homology_fingerprint(u)
            k = min((n for n, _, _, _ in raw), default=0)
            self.cache[key] = shift_complex(u, k) if k else u
        return self.cache[key]

    def resolved(self, fp):
        key = ("res", fp)
        if key not in self.cache:
            self.cache[key] = ensure_perfect(self.rep(fp))
        return self.cache[key]

    def admit(self, fp, found, how):
        if not fp:
            return
        if fp in found:
            return
        if not self.within(fp):
            return
        if fp not in self.index:
            raise UniverseNotClosed(f"{how} produced an object outside the universe: {fp}")
        found.add(fp)

    def box_fps(self, a, b):
        key = ("box", a, b) if a <= b else ("box", b, a)
        if key not in self.cache:
            prod = box_tensor(self.rep(key[1]), self.rep(key[2]))
            self.cache[key] = _fp_normalize(homology_fingerprint(prod))
        return self.cache[key]

    def cone_fps(self, a, b, k):
        """Fingerprints of cones over all nonzero chain maps a[k] -> b.

        None when the sweep would exceed the map cap; the caller decides
        whether that pair is actually needed.
        """
        key = ("cone", a, b, k)
        if key not in self.cache:
            src = shift_complex(self.resolved(a), k)
            tgt = self.resolved(b)
            space = ChainMapSpace(src, tgt)
            p = self.ring.modulus_int
            if p ** space.dim > self.max_maps:
                self.cache[key] = None
            else:
                out = set()
                for coeffs in itertools.product(range(p), repeat=space.dim):
                    if not any(coeffs):
                        continue  # the zero map's cone is the shifted direct sum
                    f = space.build(coeffs)
                    out.add(_fp_normalize(homology_fingerprint(cone(f))))
                self.cache[key] = frozenset(out)
        return self.cache[key]


def thick_closure_bruteforce(generators, universe, within=None, max_maps=4096, cache=None):
    """Least subset of the universe containing the generators and closed
    under shifts, sums, summands, cones, and tensoring with the universe.

    Returns the members as elements of the given universe list.  `within`
    bounds the oracle's scope: fingerprints outside it are ignored rather
    than demanded of the universe (default: the universe's own degree span
    and fiber dimensions).  `cache` is a plain dict; pass the same one to
    successive calls over the same universe to share the expensive cone and
    tensor sweeps.
    """
    if not universe:
        raise BadElement("empty universe")
    ring = universe[0].ring
    if not ring.is_field or getattr(ring, "modulus_int", None) is None:
        raise UnsupportedRing("the closure sweep enumerates maps; it needs a finite field")
    st = _ClosureState(universe, ring, within or _default_within([
        _fp_normalize(homology_fingerprint(u)) for u in universe
    ]), max_maps, cache)

    found = set()
    for g in generators:
        fp = _fp_normalize(homology_fingerprint(g))
        if fp and fp not in st.index:
            raise UniverseNotClosed("generator is not a member of the universe")
        if fp:
            found.add(fp)
    span = max((_fp_span(fp) for fp in st.all_fps), default=1)

    def cheap_pass():
        added = True
        grew = False
        while added:
            added = False
            members = sorted(found, key=str)
            # summands: split off a shifted universe fingerprint entrywise
            for x in members:
                for u in st.fps:
                    if not u:
                        continue
                    for offset in range(_fp_span(x) - _fp_span(u) + 1):
                        rem = _fp_sub(x, _fp_shift(u, -offset))
                        if rem is None:
                            continue
                        rem = _fp_normalize(rem)
                        if u in found and (not rem or rem in found):
                            continue
                        if not rem or rem in st.all_fps:
                            before = len(found)
                            found.add(u)
                            if rem:
                                found.add(rem)
                            added = added or len(found) > before
            # shifted direct sums, which also stand in for cones of zero maps
            for x in members:
                for y in members:
                    for k in range(-span, span + 1):
                        cand = _fp_normalize(_fp_add(x, _fp_shift(y, k)))
                        if cand not in found:
                            before = len(found)
                            st.admit(cand, found, "direct sum")
                            added = added or len(found) > before
            # tensor with every universe element
            for x in members:
                for u in st.fps:
                    if not u:
                        continue
                    cand = st.box_fps(x, u)
                    if cand not in found:
                        before = len(found)
                        st.admit(cand, found, "tensor product")
                        added = added or len(found) > before
            grew = grew or added
        return grew

    def total_rank(fp):
        return sum(rank for _, key, rank, _ in fp if not str(key).startswith("->"))

    while True:
        cheap_pass()
        if found >= st.all_fps - {()}:
            break
        # cone sweeps, small pairs first; any find goes back to the cheap ops
        progressed = False
        capped = 0
        pairs = sorted(
            ((x, y) for x in found for y in found if x and y),
            key=lambda t: (total_rank(t[0]) + total_rank(t[1]), str(t)),
        )
        for x, y in pairs:
            for k in range(-(_fp_span(y) + 1), _fp_span(x) + 2):
                cands = st.cone_fps(x, y, k)
                if cands is None:
                    capped += 1
                    continue
                for cand in cands:
                    if cand not in found:
                        before = len(found)
                        st.admit(cand, found, "mapping cone")
                        progressed = progressed or len(found) > before
            if progressed:
                break
        if progressed:
            continue
        if capped:
            raise UniverseNotClosed(
                f"{capped} cone sweeps exceed the map cap {max_maps}; closure not certified"
            )
        break

    return [st.elements[st.index[fp]] for fp in sorted(found | ({()} & st.all_fps), key=str) if fp in st.index]
