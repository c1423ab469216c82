"""Geodesic predicates on a holonomy representation: simplicity,
geometric intersection numbers, and bounded-length enumeration.

Everything reduces to one primitive: deciding which translates of a
geodesic axis cross a period window of another axis.  Candidate
translates come from a breadth-first ball in the orbit of the base
point, pruned by displacement.  A normalization argument bounds what
the ball must contain: any crossing of axes A and B has a double-coset
representative g with

    d(i, g i) <= d(i, axis A) + d(i, axis B) + (len A + len B) / 2,

obtained by sliding the crossing into the period window of A centered
on the foot of the base point and sliding the preimage of the crossing
into the window of B.  Words can wander far beyond the displacement of
the element they spell, so the ball is not grown by word search alone:
past a stabilized short-word base it doubles, multiplying a padded
half ball with itself, and re-sweeps every queried radius with a
fatter pad before certifying it.  Every count is then recomputed at an
enlarged radius until it repeats; a verdict that keeps moving raises
IndeterminateError rather than settle.  The flat-model oracle
cross-checks the same numbers combinatorially in the test suite.

Conjugacy bookkeeping for enumeration is exact: cyclic words are
Dehn-reduced against the surface relator and closed under half-relator
swaps (see words.conjugacy_key), so class identity never rests on
floating point.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import words as W
from .errors import BudgetError, DomainError, IndeterminateError, TrivialCurveError
from .fuchsian import (
    axis_frame,
    basepoint_displacement,
    fixed_points,
    minv,
    mobius_real,
)
from .surface import CurveClass

# Ball control.  The ball extends by doubling: an element of
# displacement r splits at the midpoint of its orbit segment into two
# factors of displacement at most r/2 + (orbit covering radius), so
# products of a padded half-ball reach everything one level up.  _PAD
# stands in for the covering radius; each top radius is verified by a
# pad bump, and a bump that finds new elements rebuilds with a fatter
# pad.  Answer-level stability steps then re-ask every question at
# radii _R_STEP apart until it repeats, giving up _R_CAP past the
# window bound.
_PAD = 2.2
_PAD_BUMP = 0.6
_PAD_CAP = 6.4
_BASE_R = 5.2
_BASE_SLACK = 5.0
_SLACK_BUMP = 2.0
_SLACK_CAP = 9.0
_BASE_DEPTH_CAP = 24
_R_STEP = 0.9
_R_CAP = 3.8
_NODE_CAP = 6_000_000
_PRODUCT_BLOCK = 2_000_000
_WORD_CAP = 64
_KEY_SCALE = 1e8  # element dedup grid 1e-8 on matrix entries

# Endpoint classification in window coordinates (axis at (0, inf)).
# Distinct translates separate by far more than any of these at desk
# scale; candidates inside a band are recomputed in longdouble and
# only an unresolved tie raises.
_CORE_LO, _CORE_HI = 1e-7, 1e7  # translate riding the window axis itself
_TIE_END = 1e-9  # endpoint too close to 0 or inf to trust the sign
_TIE_END_LD = 1e-13
_GRID = 2e-6  # cluster grid on log-endpoint pairs
_AMBIG = 1e-4  # clusters closer than this get a longdouble look
_MERGE_LD = 1e-7  # longdouble distance below which clusters are one

_ENUM_R0 = 1.3  # initial axis-to-base search distance for enumeration
_ENUM_RSTEP = 0.8
_ENUM_RCAP = 7.0


@dataclass(frozen=True)
class GeodesicInfo:
    """One closed geodesic found by enumerate_geodesics.

    curve is the canonical representative word, length the geodesic
    length, trace the (positive) holonomy trace, axis_endpoints the
    (attracting, repelling) pair on the real line for that word, and
    simple the embeddedness verdict.
    """

    curve: CurveClass
    length: float
    trace: float
    axis_endpoints: tuple
    simple: bool


def _as_curve(rep, curve):
    if isinstance(curve, CurveClass):
        if curve.surface.genus != rep.surface.genus:
            raise DomainError(
                "curve lives on genus %d, representation on genus %d"
                % (curve.surface.genus, rep.surface.genus)
            )
        return curve
    return rep.surface.curve(tuple(curve))


def _cache(rep):
    store = getattr(rep, "_geodesic_cache", None)
    if store is None:
        store = {"axis": {}, "simple": {}, "count": {}}
        rep._geodesic_cache = store
    return store


class _OrbitBall:
    """Certified ball in the orbit of the base point, grown by
    doubling.

    Elements are deduplicated by sign-canonical matrices on a fixed
    grid (every nontrivial element here is hyperbolic, so positive
    trace picks the sign).  The base is a word search pruned inside a
    wide displacement corridor and run until the in-radius element set
    is stable over consecutive depths.  Each extension multiplies a
    padded half ball with itself: an element of displacement r splits
    at the midpoint of its orbit segment into factors of displacement
    at most r/2 plus the orbit covering radius, so the extension is
    complete whenever the pad dominates that radius.  Every queried
    radius is then re-swept with a fatter pad, and extensions keep no
    lower displacement cutoff, so products constantly re-derive the
    low ball; any truly new matrix below an already certified radius
    convicts the earlier layer and triggers a rebuild with a fatter
    pad (or a wider base corridor, if it lands inside the base).
    Rebuild budgets are capped; past the cap the ball raises rather
    than guess.
    """

    def __init__(self, rep):
        self.rep = rep
        count = rep.surface.generator_count
        letters = list(range(1, count + 1)) + list(range(-1, -count - 1, -1))
        self.gen_letters = np.array(letters, dtype=np.int64)
        self.gen = np.stack(
            [np.asarray(rep.gens[k], dtype=np.float64) for k in letters]
        )
        self.pad = _PAD
        self.slack = _BASE_SLACK
        self._reset_store()
        self._build_base()

    def _reset_store(self):
        self.mats = np.empty((0, 2, 2))
        self.disp = np.empty(0)
        self.left = np.empty(0, dtype=np.int64)
        self.right = np.empty(0, dtype=np.int64)
        self.n = 0
        self.skeys = np.empty(0, dtype="V32")
        self.base_words = {}
        self._word_memo = {}
        self.cert = 0.0
        self.verified = 0.0

    @staticmethod
    def _keys(mats):
        q = np.round(mats.reshape(-1, 4) * _KEY_SCALE).astype(np.int64)
        return np.ascontiguousarray(q).view("V32").reshape(-1)

    @staticmethod
    def disp_of(mats):
        return np.arccosh(np.maximum((mats * mats).sum(axis=(1, 2)) / 2.0, 1.0))

    def _append(self, mats, left, right):
        m = mats.shape[0]
        if self.n + m > _NODE_CAP:
            raise BudgetError(
                "orbit ball would exceed %d elements; the requested radius "
                "is out of desk range" % _NODE_CAP
            )
        keys = self._keys(mats)
        order = np.argsort(keys, kind="stable")
        self.mats = np.concatenate([self.mats[: self.n], mats])
        self.disp = np.concatenate([self.disp[: self.n], self.disp_of(mats)])
        self.left = np.concatenate([self.left[: self.n], left])
        self.right = np.concatenate([self.right[: self.n], right])
        self.n += m
        pos = np.searchsorted(self.skeys, keys[order])
        self.skeys = np.insert(self.skeys, pos, keys[order])

    def _novel(self, keys):
        """First occurrences of keys absent from the store, in batch
        order."""
        uniq, first = np.unique(keys, return_index=True)
        if self.skeys.shape[0]:
            at = np.minimum(np.searchsorted(self.skeys, uniq), self.skeys.shape[0] - 1)
            exists = self.skeys[at] == uniq
        else:
            exists = np.zeros(uniq.shape[0], dtype=bool)
        pick = first[~exists]
        pick.sort()
        return pick

    def _truly_novel(self, mats, disps):
        """Mask of rows whose matrix is not a float-drift duplicate of
        a stored element.  The dedup grid can split one group element
        into two keys when a long product drifts across a grid edge;
        those phantoms must not be mistaken for missing elements."""
        out = np.ones(mats.shape[0], dtype=bool)
        for j in range(mats.shape[0]):
            near = np.nonzero(np.abs(self.disp[: self.n] - disps[j]) < 1e-3)[0]
            if near.size and np.min(
                np.abs(self.mats[near] - mats[j]).max(axis=(1, 2))
            ) < 1e-6:
                out[j] = False
        return out

    def _build_base(self):
        """Word search pruned at _BASE_R + slack; stores elements
        within _BASE_R, stopping once that set is unchanged over three
        consecutive depths (paths may wander through the corridor)."""
        prune = _BASE_R + self.slack
        eye = np.eye(2)[None]
        self._append(eye, np.array([-1]), np.array([-1]))
        self.base_words[0] = ()
        corridor = np.sort(self._keys(eye))
        level = eye
        last = np.array([0], dtype=np.int64)
        words = [()]
        stable = 0
        for _depth in range(1, _BASE_DEPTH_CAP + 1):
            children = np.einsum("mij,ljk->mlik", level, self.gen)
            ok = self.gen_letters[None, :] != -last[:, None]
            flat = children[ok]
            lets = np.broadcast_to(self.gen_letters, ok.shape)[ok]
            parents = np.broadcast_to(np.arange(len(words))[:, None], ok.shape)[ok]
            tr = flat[:, 0, 0] + flat[:, 1, 1]
            flat[tr < 0] *= -1.0
            disp = self.disp_of(flat)
            near = disp <= prune
            flat, lets, parents = flat[near], lets[near], parents[near]
            if flat.shape[0] == 0:
                stable = 3
                break
            keys = self._keys(flat)
            uniq, first = np.unique(keys, return_index=True)
            at = np.minimum(np.searchsorted(corridor, uniq), corridor.shape[0] - 1)
            fresh = first[corridor[at] != uniq]
            fresh.sort()
            if fresh.size == 0:
                stable = 3
                break
            level = flat[fresh]
            last = lets[fresh]
            words = [words[p] + (int(x),) for p, x in zip(parents[fresh], last)]
            new_keys = np.sort(keys[fresh])
            corridor = np.insert(
                corridor, np.searchsorted(corridor, new_keys), new_keys
            )
            count_before = self.n
            take = np.nonzero(self.disp_of(level) <= _BASE_R)[0]
            if take.size:
                pick = self._novel(self._keys(level[take]))
                if pick.size:
                    start = self.n
                    self._append(
                        level[take][pick],
                        np.full(pick.size, -1, dtype=np.int64),
                        np.full(pick.size, -1, dtype=np.int64),
                    )
                    for offset, j in enumerate(pick):
                        self.base_words[start + offset] = words[take[j]]
            stable = stable + 1 if self.n == count_before else 0
            if stable >= 3:
                break
        if stable < 3:
            raise IndeterminateError(
                "base orbit did not stabilize within depth %d" % _BASE_DEPTH_CAP
            )
        self.base_n = self.n
        self.cert = _BASE_R
        self.verified = _BASE_R

    def _sweep(self, half_radius, keep_radius, collect):
        """Products of the half ball with itself, kept up to
        keep_radius.  With collect, novel elements are appended and
        any truly new matrix below the certified radius is reported;
        without, returns whether any truly novel element exists."""
        sel = np.nonzero(self.disp[: self.n] <= half_radius)[0]
        breach = np.inf
        if sel.size == 0:
            return False, breach
        half = self.mats[sel]
        rows = max(1, _PRODUCT_BLOCK // sel.size)
        found = False
        for start in range(0, sel.size, rows):
            block = np.einsum(
                "aij,bjk->abik", half[start : start + rows], half
            ).reshape(-1, 2, 2)
            tr = block[:, 0, 0] + block[:, 1, 1]
            block[tr < 0] *= -1.0
            disp = self.disp_of(block)
            kept = np.nonzero(disp <= keep_radius)[0]
            if kept.size == 0:
                continue
            block, disp = block[kept], disp[kept]
            pick = self._novel(self._keys(block))
            if pick.size == 0:
                continue
            if collect:
                suspect = np.nonzero(disp[pick] <= self.cert - 1e-6)[0]
                if suspect.size:
                    real = self._truly_novel(
                        block[pick][suspect], disp[pick][suspect]
                    )
                    if real.any():
                        breach = min(breach, float(disp[pick][suspect][real].min()))
                a_idx, b_idx = np.divmod(kept[pick], sel.size)
                self._append(block[pick], sel[a_idx + start], sel[b_idx])
            else:
                if self._truly_novel(block[pick], disp[pick]).any():
                    return True, breach
        return found, breach

    def _handle_breach(self, breach):
        """A product landed strictly inside a certified radius: the
        earlier layer was incomplete, so widen whichever budget the
        breach convicts and rebuild from scratch."""
        if breach <= _BASE_R:
            self.slack += _SLACK_BUMP
            if self.slack > _SLACK_CAP:
                raise IndeterminateError(
                    "orbit base missed elements with corridor slack up "
                    "to %.2f; the surface is out of desk range" % _SLACK_CAP
                )
        else:
            self.pad += _PAD_BUMP
            if self.pad > _PAD_CAP:
                raise IndeterminateError(
                    "orbit ball failed verification with pad up to %.2f; "
                    "the covering radius is out of desk range" % _PAD_CAP
                )
        self._reset_store()
        self._build_base()

    def _climb(self, target):
        """Raise the certified radius to target, restarting on any
        completeness breach."""
        while self.cert < target:
            next_r = min(target, 2.0 * (self.cert - self.pad))
            if next_r <= self.cert + 1e-9:
                raise IndeterminateError(
                    "orbit ladder cannot progress: pad %.2f too large "
                    "for certified radius %.2f" % (self.pad, self.cert)
                )
            _, breach = self._sweep(next_r / 2.0 + self.pad, next_r, collect=True)
            if np.isfinite(breach):
                self._handle_breach(breach)
                continue
            self.cert = next_r

    def ensure(self, radius):
        radius = float(radius)
        while radius > self.verified:
            self._climb(radius)
            # verification sweep: a fatter half ball over the full
            # target ball must find nothing truly new
            probe_half = radius / 2.0 + self.pad + _PAD_BUMP
            if probe_half > self.cert:
                self._climb(probe_half)
            found, _ = self._sweep(probe_half, radius, collect=False)
            if not found:
                self.verified = max(self.verified, radius)
                return
            self.pad += _PAD_BUMP
            if self.pad > _PAD_CAP:
                raise IndeterminateError(
                    "orbit ball failed verification with pad up to %.2f; "
                    "the covering radius is out of desk range" % _PAD_CAP
                )
            self._reset_store()
            self._build_base()

    def elements(self, radius):
        self.ensure(radius)
        return np.nonzero(self.disp[: self.n] <= radius)[0]

    def word(self, node):
        node = int(node)
        word = self.base_words.get(node)
        if word is not None:
            return word
        memo = self._word_memo.get(node)
        if memo is not None:
            return memo
        out = W.free_reduce(
            self.word(int(self.left[node])) + self.word(int(self.right[node]))
        )
        if len(out) > _WORD_CAP:
            raise BudgetError("orbit word exceeded the %d-letter cap" % _WORD_CAP)
        self._word_memo[node] = out
        return out


def _ball(rep):
    ball = getattr(rep, "_orbit_ball", None)
    if ball is None:
        ball = _OrbitBall(rep)
        rep._orbit_ball = ball
    return ball


class _Axis:
    """Cached axis data for one primitive class: frame, endpoints,
    length, and the distance from the base point to the axis."""

    __slots__ = ("curve", "word", "frame", "frame_inv", "frame_inv64",
                 "p0", "p1", "p064", "p164", "length", "sep")

    def __init__(self, rep, curve):
        self.curve = curve
        self.word = curve.canonical_word
        mat = rep.matrix(self.word)
        self.frame = axis_frame(mat)
        self.frame_inv = minv(self.frame)
        self.frame_inv64 = np.asarray(self.frame_inv, dtype=np.float64)
        self.p0, self.p1 = fixed_points(mat)
        self.p064 = float(self.p0)
        self.p164 = float(self.p1)
        self.length = float(rep.translation_length(self.word))
        self.sep = float(basepoint_displacement(self.frame))


def _axis(rep, curve):
    store = _cache(rep)["axis"]
    key = curve.canonical_word
    ax = store.get(key)
    if ax is None:
        ax = _Axis(rep, curve)
        store[key] = ax
    return ax


def _mob_vec(mats, x):
    """Apply a batch of real Mobius maps to one boundary point."""
    if np.isinf(x):
        num = mats[:, 0, 0]
        den = mats[:, 1, 0]
    else:
        num = mats[:, 0, 0] * x + mats[:, 0, 1]
        den = mats[:, 1, 0] * x + mats[:, 1, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / den


def _refine_endpoints(rep, axa, axb, word):
    """Longdouble endpoints of one translate in the window frame."""
    mat = axa.frame_inv @ rep.matrix(word)
    return mobius_real(mat, axb.p0), mobius_real(mat, axb.p1)


def _classify(u, v, lo_core, hi_core, lo_tie, hi_tie):
    au = np.where(np.isfinite(u), np.abs(u), np.inf)
    av = np.where(np.isfinite(v), np.abs(v), np.inf)
    lo = np.minimum(au, av)
    hi = np.maximum(au, av)
    core = (lo < lo_core) & (hi > hi_core)
    tie = ((lo < lo_tie) | (hi > hi_tie)) & ~core
    cross = ~core & ~tie & (np.sign(u) * np.sign(v) < 0)
    return core, tie, cross


def _normalized_logs(u, v, period):
    """Log endpoints of straddling lines, slid into one period window.

    Returns (a, b) with a = log(-u'), b = log(v') for the normalized
    representative; the slide is coordinate arithmetic and needs no
    group element.
    """
    neg = np.where(u < 0, u, v)
    pos = np.where(u < 0, v, u)
    a = np.log(-neg)
    b = np.log(pos)
    t = 0.5 * (a + b)
    k = np.floor(t / period)
    a = a - k * period
    b = b - k * period
    wrap = (t - k * period) > period - _AMBIG
    a = np.where(wrap, a - period, a)
    b = np.where(wrap, b - period, b)
    return a, b


def _crossing_clusters(rep, axa, axb, radius, selfcase):
    """Distinct crossings of translates of axis(axb) with one period
    window of axis(axa), as (neg_log, pos_log, node) triples.

    Work happens in the frame where axis(axa) is the vertical line: a
    translate crosses iff its endpoints straddle 0, and the crossing
    parameter (log of the geometric mean of the endpoints) is slid
    into [0, len A) to pick one representative per left-translation
    orbit.  Band cases are recomputed in longdouble; surviving
    ambiguity raises instead of guessing.
    """
    ball = _ball(rep)
    idx = ball.elements(radius)
    frames = np.einsum("ij,njk->nik", axa.frame_inv64, ball.mats[idx])
    u = _mob_vec(frames, axb.p064)
    v = _mob_vec(frames, axb.p164)
    core, tie, cross = _classify(u, v, _CORE_LO, _CORE_HI, _TIE_END, 1.0 / _TIE_END)

    keep_u = [u[cross]]
    keep_v = [v[cross]]
    keep_node = [idx[cross]]
    suspect = tie if selfcase else (tie | core)
    for j in np.nonzero(suspect)[0]:
        node = int(idx[j])
        uu, vv = _refine_endpoints(rep, axa, axb, ball.word(node))
        cu, ct, cc = _classify(
            np.array([uu]), np.array([vv]),
            _CORE_LO ** 2, _CORE_HI ** 2, _TIE_END_LD, 1.0 / _TIE_END_LD,
        )
        if ct[0]:
            raise IndeterminateError(
                "translate endpoint stayed within %.0e of the window axis "
                "after refinement" % _TIE_END_LD
            )
        if cu[0]:
            if selfcase:
                continue
            raise IndeterminateError(
                "a translate of one axis rides the other; the classes "
                "appear to share their geodesic image"
            )
        if cc[0]:
            keep_u.append(np.array([float(uu)]))
            keep_v.append(np.array([float(vv)]))
            keep_node.append(np.array([node]))

    u = np.concatenate(keep_u)
    v = np.concatenate(keep_v)
    nodes = np.concatenate(keep_node)
    if u.size == 0:
        return []

    period = axa.length
    a, b = _normalized_logs(u, v, period)
    grid = np.round(np.stack([a, b], axis=1) / _GRID).astype(np.int64)
    _, first = np.unique(grid, axis=0, return_index=True)
    reps = [(float(a[j]), float(b[j]), int(nodes[j])) for j in first]

    # Merge clusters the grid may have split and vet genuine near
    # ties: any two representatives within _AMBIG in both coordinates
    # (directly or across the window seam) are recomputed in
    # longdouble and either merged or confirmed distinct.
    parent = list(range(len(reps)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            da = abs(reps[i][0] - reps[j][0])
            db = abs(reps[i][1] - reps[j][1])
            near = max(da, db) < _AMBIG
            near |= max(abs(da - period), abs(db - period)) < _AMBIG
            if near and find(i) != find(j):
                sep = _refined_separation(
                    rep, axa, axb, reps[i][2], reps[j][2], period
                )
                if sep < _MERGE_LD:
                    parent[find(i)] = find(j)
    roots = sorted({find(i) for i in range(len(reps))})
    return [reps[i] for i in roots]


def _refined_separation(rep, axa, axb, node_i, node_j, period):
    """Longdouble distance between two normalized crossing translates,
    minimized over a joint window shift."""
    ball = _ball(rep)
    coords = []
    for node in (node_i, node_j):
        uu, vv = _refine_endpoints(rep, axa, axb, ball.word(node))
        neg, pos = (uu, vv) if uu < 0 else (vv, uu)
        a = float(np.log(-np.longdouble(neg)))
        b = float(np.log(np.longdouble(pos)))
        t = 0.5 * (a + b)
        k = np.floor(t / period)
        coords.append((a - k * period, b - k * period))
    (a1, b1), (a2, b2) = coords
    best = np.inf
    for shift in (-period, 0.0, period):
        best = min(best, max(abs(a1 - a2 + shift), abs(b1 - b2 + shift)))
    return float(best)


def _stable_count(rep, axa, axb, base_radius, selfcase):
    radius = base_radius + 0.3
    prev = None
    while radius <= base_radius + _R_CAP + 0.3:
        count = len(_crossing_clusters(rep, axa, axb, radius, selfcase))
        if selfcase and count > 0:
            # a vetted crossing is a certificate on its own
            return count
        if prev is not None and count == prev:
            return count
        prev = count
        radius += _R_STEP
    raise IndeterminateError(
        "crossing count between %s and %s did not stabilize within "
        "radius %.2f" % (axa.curve, axb.curve, base_radius + _R_CAP)
    )


def is_simple(rep, curve):
    """Whether the closed geodesic in this class is embedded.

    A power of a simple class traces the same point set, so the test
    runs on the primitive root.  Searches for a translate of the axis
    that strictly links one period window; finding one certifies a
    self-crossing, finding none at two consecutive radii past the
    window bound certifies embeddedness at desk scale.
    """
    curve = _as_curve(rep, curve)
    root_word = curve.word[: W.word_period(curve.word)]
    root = curve.surface.curve(root_word)
    store = _cache(rep)["simple"]
    key = root.canonical_word
    if key not in store:
        ax = _axis(rep, root)
        bound = 2.0 * ax.sep + ax.length
        store[key] = _stable_count(rep, ax, ax, bound, selfcase=True) == 0
    return store[key]


def geometric_intersection(rep, a, b):
    """Geometric intersection number of two simple closed curves.

    Counts translation orbits of axis translates that link one period
    window; each crossing of the closed geodesics contributes exactly
    one such orbit.  Both classes must be primitive and simple; a
    class paired with itself gives 0.
    """
    ca = _as_curve(rep, a)
    cb = _as_curve(rep, b)
    for c in (ca, cb):
        if not c.primitive:
            raise DomainError("intersection needs primitive classes, got %s" % (c,))
    if ca == cb:
        return 0
    for c in (ca, cb):
        if not is_simple(rep, c):
            raise DomainError("intersection needs simple curves, %s is not" % (c,))
    store = _cache(rep)["count"]
    key = tuple(sorted((ca.canonical_word, cb.canonical_word)))
    if key not in store:
        axa = _axis(rep, ca)
        axb = _axis(rep, cb)
        bound = axa.sep + axb.sep + (axa.length + axb.length) / 2.0
        store[key] = _stable_count(rep, axa, axb, bound, selfcase=False)
    return store[key]


def multicurve_intersection(rep, multicurve, curve):
    """Intersection of a weighted multicurve with a simple closed
    curve, extended linearly over the weights.  Exact Fraction out."""
    target = _as_curve(rep, curve)
    if not is_simple(rep, target):
        raise DomainError("multicurve pairing needs a simple curve on the right")
    total = Fraction(0)
    for component, weight in multicurve.components:
        if not is_simple(rep, component):
            raise DomainError(
                "multicurve component %s is not simple" % (component,)
            )
        total += weight * geometric_intersection(rep, component, target)
    return total


def _fixed_points_vec(mats):
    """Axis endpoints for a batch of trace-positive hyperbolic
    matrices, branch-chosen for numerical stability."""
    tr = mats[:, 0, 0] + mats[:, 1, 1]
    s = mats[:, 0, 0] - mats[:, 1, 1]
    root = np.sqrt(np.maximum(tr * tr - 4.0, 0.0))
    twob = 2.0 * mats[:, 0, 1]
    twoc = 2.0 * mats[:, 1, 0]

    def div(num, den):
        with np.errstate(divide="ignore", invalid="ignore"):
            return num / den

    # attracting root: (s + root)/(2c) == 2b/(root - s)
    xp = np.where(
        np.abs(twoc) >= np.abs(root - s), div(s + root, twoc), div(twob, root - s)
    )
    # repelling root: (s - root)/(2c) == -2b/(root + s)
    xm = np.where(
        np.abs(twoc) >= np.abs(root + s), div(s - root, twoc), div(-twob, root + s)
    )
    return xp, xm


def _chordal(x):
    """Boundary-circle coordinates (cos, sin) for points of the real
    line plus infinity; stable for huge and non-finite values."""
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(np.isfinite(x), 1.0 / x, 0.0)
    big = ~np.isfinite(x) | (np.abs(x) > 1.0)
    y = np.where(big, inv, x)
    denom = 1.0 + y * y
    cos = np.where(big, (y * y - 1.0) / denom, (1.0 - y * y) / denom)
    sin = 2.0 * y / denom
    return cos, sin


def enumerate_geodesics(rep, length_cutoff, simple_only=False, budget=None):
    """Every closed geodesic of length at most the cutoff, one row per
    unoriented primitive conjugacy class, sorted by length then word.

    Candidates are ball elements with qualifying trace; class identity
    is the exact Dehn normal form of the word, so duplicates collapse
    combinatorially.  The search distance from the base point to
    candidate axes grows until the class set repeats, which is the
    desk-scale completeness check.  The budget (default 1.2 times the
    genus-specific total-length bound used by the pants search) keeps
    runaway cutoffs loud.
    """
    surf = rep.surface
    cutoff = float(length_cutoff)
    if budget is None:
        budget = 1.2 * (21.0 * surf.genus * (3 * surf.genus - 3))
    if cutoff > budget:
        raise BudgetError(
            "cutoff %.3f exceeds the enumeration budget %.3f; pass a larger "
            "budget explicitly to go further" % (cutoff, budget)
        )
    if cutoff <= 0:
        return []

    relator = surf.relator
    reach = _ENUM_R0
    prev = None
    classes = {}
    while True:
        radius = 2.0 * float(np.arcsinh(np.cosh(reach) * np.sinh(cutoff / 2.0)))
        classes = _collect_classes(rep, radius, cutoff, relator)
        keys = frozenset(classes)
        if prev is not None and keys == prev:
            break
        if reach > _ENUM_RCAP:
            raise IndeterminateError(
                "geodesic inventory did not stabilize out to axis "
                "distance %.1f" % _ENUM_RCAP
            )
        prev = keys
        reach += _ENUM_RSTEP

    out = []
    for word in classes:
        curve = surf.curve(word)
        length = float(rep.translation_length(word))
        if length > cutoff + 1e-12:
            continue
        trace = float(abs(rep.trace(word)))
        repelling, attracting = fixed_points(rep.matrix(word))
        info = GeodesicInfo(
            curve=curve,
            length=length,
            trace=trace,
            axis_endpoints=(float(attracting), float(repelling)),
            simple=is_simple(rep, curve),
        )
        out.append(info)
    if simple_only:
        out = [info for info in out if info.simple]
    out.sort(key=lambda info: (info.length, info.curve.canonical_word))
    return out


def _collect_classes(rep, radius, cutoff, relator):
    """Set of primitive conjugacy classes met in the ball, keyed by
    Dehn normal form.  Candidates are first deduplicated by quantized
    axis data so the exact word machinery runs once per distinct
    lift, not once per ball element."""
    ball = _ball(rep)
    idx = ball.elements(radius)
    mats = ball.mats[idx]
    tr = mats[:, 0, 0] + mats[:, 1, 1]
    keepable = tr > 2.0 + 1e-9
    with np.errstate(invalid="ignore"):
        length = 2.0 * np.arccosh(np.maximum(tr, 2.0) / 2.0)
    keepable &= length <= cutoff + 1e-6
    cand = idx[keepable]
    if cand.size == 0:
        return {}
    mats = ball.mats[cand]
    xp, xm = _fixed_points_vec(mats)
    cp = np.stack(_chordal(xp), axis=1)
    cm = np.stack(_chordal(xm), axis=1)
    swap = (cp[:, 0] > cm[:, 0]) | (
        (cp[:, 0] == cm[:, 0]) & (cp[:, 1] > cm[:, 1])
    )
    lo = np.where(swap[:, None], cm, cp)
    hi = np.where(swap[:, None], cp, cm)
    tr = mats[:, 0, 0] + mats[:, 1, 1]
    key = np.round(
        np.concatenate([lo, hi, tr[:, None]], axis=1) / 1e-7
    ).astype(np.int64)
    _, first = np.unique(key, axis=0, return_index=True)

    classes = {}
    for j in first:
        word = ball.word(int(cand[j]))
        try:
            reduced = W.cyclic_reduce(word)
        except TrivialCurveError:
            continue
        if W.word_period(reduced) < len(reduced):
            continue
        normal = W.conjugacy_key(reduced, relator)
        if W.word_period(normal) < len(normal):
            continue
        classes[normal] = None
    return classes
