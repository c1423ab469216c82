"""Closed-surface bookkeeping: presentations, curve classes, pants graphs,
Fenchel-Nielsen coordinates and their plain-text serialization.

Conventions fixed here and used everywhere else:

* genus g surface, generators a1, b1, ..., ag, bg numbered 1..2g
  (a_k = 2k-1, b_k = 2k), relator = product of commutators
  [a1,b1]...[ag,bg];
* the reference pants decomposition is the chain
  a1, c1, a2, d2, c2, a3, d3, ..., c_{g-1}, ag
  where c_k is the partial relator [a1,b1]...[ak,bk] and
  d_k = c_{k-1} a_k; it has 3g-3 curves and 2g-2 pants;
* lengths/twists arrays of an FNPoint follow that edge order, twists
  measured in length units (a full twist along edge j adds
  lengths[j]).
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import words as W
from .errors import DomainError


@dataclass(frozen=True)
class SurfaceSpec:
    """Closed orientable surface of genus >= 2 with its standard
    one-relator presentation."""

    genus: int

    def __post_init__(self):
        if self.genus < 2:
            raise DomainError("genus must be >= 2, got %r" % (self.genus,))

    @property
    def generator_count(self):
        return 2 * self.genus

    @property
    def euler_characteristic(self):
        return 2 - 2 * self.genus

    @property
    def relator(self):
        r = ()
        for k in range(1, self.genus + 1):
            r = W.concat_reduce(r, W.commutator((2 * k - 1,), (2 * k,)))
        return r

    def curve(self, word):
        return CurveClass(self, tuple(word))


class CurveClass:
    """Free homotopy class of an unoriented closed curve, stored as a
    cyclically reduced word.

    Equality and hashing use the cyclic normal form up to rotation and
    inversion, so a class compares equal to its inverse and to any
    rotation of itself.
    """

    __slots__ = ("surface", "word", "_canon")

    def __init__(self, surface, word):
        W.check_letters(word, surface.generator_count)
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "word", W.cyclic_reduce(word))
        object.__setattr__(self, "_canon", W.canonical_cyclic(self.word))

    @property
    def canonical_word(self):
        return self._canon

    @property
    def primitive(self):
        return W.word_period(self.word) == len(self.word)

    def inverse(self):
        return CurveClass(self.surface, W.invert_word(self.word))

    def __eq__(self, other):
        return (isinstance(other, CurveClass)
                and self.surface.genus == other.surface.genus
                and self._canon == other._canon)

    def __hash__(self):
        return hash((self.surface.genus, self._canon))

    def __repr__(self):
        return "CurveClass(g=%d, %s)" % (self.surface.genus, W.word_str(self.word))

    def __str__(self):
        return W.word_str(self.word)


@dataclass(frozen=True)
class PantsEdge:
    label: str
    curve: CurveClass
    ends: tuple  # pair of vertex labels; equal labels mean a handle self-gluing


@dataclass(frozen=True)
class PantsGraph:
    surface: SurfaceSpec
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        g = self.surface.genus
        if len(self.vertices) != 2 * g - 2 or len(self.edges) != 3 * g - 3:
            raise DomainError("pants graph must have 2g-2 vertices and 3g-3 edges")
        deg = {v: 0 for v in self.vertices}
        for e in self.edges:
            for v in e.ends:
                if v not in deg:
                    raise DomainError("edge end %r is not a vertex" % (v,))
                deg[v] += 1
        bad = [v for v, d in deg.items() if d != 3]
        if bad:
            raise DomainError("pants vertices must have degree 3, violated at %r" % bad)

    def edge_index(self, label):
        for j, e in enumerate(self.edges):
            if e.label == label:
                return j
        raise DomainError("no pants-graph edge labelled %r" % (label,))

    def curves(self):
        return [e.curve for e in self.edges]


def partial_relator(surface, k):
    """c_k = [a1,b1]...[ak,bk], the curve splitting off the first k handles."""
    r = ()
    for j in range(1, k + 1):
        r = W.concat_reduce(r, W.commutator((2 * j - 1,), (2 * j,)))
    return surface.curve(r)


def standard_pants_graph(surface):
    """Reference pants decomposition of the chain form described in the
    module docstring.  Genus 2 gives edges (a1, c1, a2) on two pants;
    genus 3 gives (a1, c1, a2, d2, c2, a3) on four pants."""
    g = surface.genus
    a = [surface.curve((2 * k - 1,)) for k in range(1, g + 1)]
    c = [partial_relator(surface, k) for k in range(1, g)]
    d = {}
    for k in range(2, g):
        d[k] = surface.curve(W.concat_reduce(c[k - 2].word, (2 * k - 1,)))

    verts = ["P%d" % i for i in range(2 * g - 2)]
    edges = [PantsEdge("a1", a[0], (verts[0], verts[0]))]
    prev = verts[0]
    vi = 1
    for k in range(2, g):
        q, r = verts[vi], verts[vi + 1]
        vi += 2
        edges.append(PantsEdge("c%d" % (k - 1), c[k - 2], (prev, q)))
        edges.append(PantsEdge("a%d" % k, a[k - 1], (q, r)))
        edges.append(PantsEdge("d%d" % k, d[k], (q, r)))
        prev = r
    last = verts[vi]
    edges.append(PantsEdge("c%d" % (g - 1), c[g - 2], (prev, last)))
    edges.append(PantsEdge("a%d" % g, a[g - 1], (last, last)))

    # restore the documented coordinate order a1, c1, a2, d2, c2, a3, ...
    order = ["a1"]
    for k in range(2, g):
        order += ["c%d" % (k - 1), "a%d" % k, "d%d" % k]
    order += ["c%d" % (g - 1), "a%d" % g]
    by_label = {e.label: e for e in edges}
    return PantsGraph(surface, tuple(verts), tuple(by_label[l] for l in order))


def _map_letters(images, word):
    out = ()
    for g in word:
        img = images.get(abs(g), (abs(g),))
        if g < 0:
            img = W.invert_word(img)
        out = W.concat_reduce(out, img)
    return out


def dehn_twist(curve, about, power=1):
    """Image of a free homotopy class under the Dehn twist about one of
    the reference curves a_k, b_k, or c_k.

    Each of these twists acts on the fundamental group by a substitution
    fixing the relator up to conjugacy: about a_k only b_k moves
    (b_k -> b_k a_k^n), about b_k only a_k moves (a_k -> a_k b_k^-n),
    and about the separating curve c_k every generator behind the split
    is conjugated by c_k^n.  The handedness is the same for all three
    families: the a/b pair satisfies the braid relation and six a/b
    half-period turns compose to the boundary twist of the one-handle
    subsurface, which is how the c_k convention was calibrated.

    `about` is recognized by free cyclic equality with the reference
    words; twisting about any other curve raises DomainError.
    """
    surface = curve.surface
    if about.surface.genus != surface.genus:
        raise DomainError("twist curve lives on a different surface")
    n = int(power)
    if n == 0:
        return CurveClass(surface, curve.word)
    g = surface.genus
    images = None
    for k in range(1, g + 1):
        if about == surface.curve((2 * k - 1,)):
            images = {2 * k: W.concat_reduce((2 * k,),
                                             W.word_power((2 * k - 1,), n))}
            break
        if about == surface.curve((2 * k,)):
            images = {2 * k - 1: W.concat_reduce((2 * k - 1,),
                                                 W.word_power((2 * k,), -n))}
            break
    if images is None:
        for k in range(1, g):
            if about == partial_relator(surface, k):
                cn = W.word_power(partial_relator(surface, k).word, n)
                cn_inv = W.invert_word(cn)
                images = {}
                for j in range(2 * k + 1, 2 * g + 1):
                    images[j] = W.concat_reduce(
                        W.concat_reduce(cn, (j,)), cn_inv)
                break
    if images is None:
        raise DomainError(
            "dehn_twist supports the reference curves a_k, b_k, c_k; "
            "got %s" % (about,))
    # the substitution must descend to the surface group
    rel = surface.relator
    assert W.canonical_cyclic(_map_letters(images, rel)) \
        == W.canonical_cyclic(rel)
    return CurveClass(surface, _map_letters(images, curve.word))


@dataclass(frozen=True)
class FNPoint:
    """Fenchel-Nielsen coordinates on a pants graph: one positive length
    and one real twist (in length units) per edge."""

    graph: PantsGraph
    lengths: tuple
    twists: tuple

    def __post_init__(self):
        n = len(self.graph.edges)
        if len(self.lengths) != n or len(self.twists) != n:
            raise DomainError("need %d lengths and twists" % n)
        if any(not (l > 0) for l in self.lengths):
            raise DomainError("lengths must be positive")
        object.__setattr__(self, "lengths", tuple(float(l) for l in self.lengths))
        object.__setattr__(self, "twists", tuple(float(t) for t in self.twists))

    @property
    def surface(self):
        return self.graph.surface

    def replace(self, lengths=None, twists=None):
        return FNPoint(self.graph,
                       tuple(lengths) if lengths is not None else self.lengths,
                       tuple(twists) if twists is not None else self.twists)


def reference_point(surface, length=2.0):
    """The all-equal-length, zero-twist base point used by the canned
    experiments and the self-test."""
    graph = standard_pants_graph(surface)
    n = len(graph.edges)
    return FNPoint(graph, (float(length),) * n, (0.0,) * n)


@dataclass(frozen=True)
class MeasuredMulticurve:
    """Weighted multicurve: distinct classes with positive rational
    weights.  Pairwise disjointness is a geometric statement and is
    checked by callers holding a holonomy, not here."""

    components: tuple  # of (CurveClass, Fraction)

    def __post_init__(self):
        seen = set()
        comps = []
        for cls, wt in self.components:
            wt = Fraction(wt)
            if wt <= 0:
                raise DomainError("weights must be positive")
            if cls in seen:
                raise DomainError("repeated component %s" % cls)
            seen.add(cls)
            comps.append((cls, wt))
        object.__setattr__(self, "components", tuple(comps))

    def curves(self):
        return [c for c, _ in self.components]

    def weights(self):
        return [w for _, w in self.components]


# --------------------------------------------------------------------
# serialization: a small deterministic key-value text format (a TOML
# subset; files written here parse with any TOML reader).

def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.17g" % v
    if isinstance(v, str):
        return '"%s"' % v.replace("\\", "\\\\").replace('"', '\\"')
    if isinstance(v, Fraction):
        return '"%d/%d"' % (v.numerator, v.denominator)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    raise DomainError("cannot serialize %r" % (v,))


def dumps_fn_point(point):
    graph = point.graph
    lines = ['kind = "fn_point"', "genus = %d" % graph.surface.genus, ""]
    lines.append("[pants_graph]")
    lines.append("vertices = %s" % _fmt(list(graph.vertices)))
    lines.append("")
    for e in graph.edges:
        lines.append("[[pants_graph.edges]]")
        lines.append("label = %s" % _fmt(e.label))
        lines.append("word = %s" % _fmt(W.word_str(e.curve.word)))
        lines.append("ends = %s" % _fmt(list(e.ends)))
        lines.append("")
    lines.append("[coordinates]")
    lines.append("lengths = %s" % _fmt(list(point.lengths)))
    lines.append("twists = %s" % _fmt(list(point.twists)))
    return "\n".join(lines) + "\n"


def _toml_loads(text):
    try:
        import tomllib as toml
    except ImportError:  # python 3.10
        import tomli as toml
    return toml.loads(text)


def loads_fn_point(text):
    doc = _toml_loads(text)
    if doc.get("kind") != "fn_point":
        raise DomainError("not an fn_point document")
    surf = SurfaceSpec(int(doc["genus"]))
    pg = doc["pants_graph"]
    edges = tuple(
        PantsEdge(e["label"], surf.curve(W.parse_word_str(e["word"])),
                  tuple(e["ends"]))
        for e in pg["edges"])
    graph = PantsGraph(surf, tuple(pg["vertices"]), edges)
    co = doc["coordinates"]
    return FNPoint(graph, tuple(co["lengths"]), tuple(co["twists"]))


def dumps_multicurve(mc):
    lines = ['kind = "measured_multicurve"']
    surf = mc.components[0][0].surface if mc.components else None
    if surf is not None:
        lines.append("genus = %d" % surf.genus)
    lines.append("")
    for cls, wt in mc.components:
        lines.append("[[components]]")
        lines.append("word = %s" % _fmt(W.word_str(cls.word)))
        lines.append("weight = %s" % _fmt(wt))
        lines.append("")
    return "\n".join(lines) + "\n"


def loads_multicurve(text):
    doc = _toml_loads(text)
    if doc.get("kind") != "measured_multicurve":
        raise DomainError("not a measured_multicurve document")
    surf = SurfaceSpec(int(doc["genus"]))
    comps = []
    for c in doc["components"]:
        num, _, den = c["weight"].partition("/")
        comps.append((surf.curve(W.parse_word_str(c["word"])),
                      Fraction(int(num), int(den or "1"))))
    return MeasuredMulticurve(tuple(comps))
