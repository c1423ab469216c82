"""Holonomy representations from Fenchel-Nielsen coordinates.

The construction is the classical one: each pair of pants is doubled
from a right-angled hexagon walked explicitly in the upper half plane,
boundary translations arise as products of reflections in alternate
hexagon sides, and pants are glued along matching cuffs by the unique
one-parameter family of identifications, the parameter being the twist.
Gluing matches boundary words inversely, which places neighbouring
pants on opposite sides of the shared geodesic, so every parameter
value yields a discrete faithful cocompact representation.

The assembly itself runs in software multiprecision and the finished
generators are rounded once to extended precision (numpy longdouble).
The group relator is a product of exactly cancelling factors, so the
residual of the delivered matrices measures that single rounding,
amplified only by the norms of the word's partial products; everything
downstream works on the fast longdouble matrices.
"""

import numpy as np
from mpmath import mp, mpf

from . import words as W
from .errors import DomainError, NotHyperbolicError, NumericalError

LD = np.longdouble
CLD = np.clongdouble

_EPS_HYPERBOLIC = 1e-12
_EPS_BUILD = 1e-10

# working digits for the hexagon and gluing arithmetic; the target is
# longdouble storage (about 19 digits), the rest is headroom for the
# norm growth along the pants chain
_BUILD_DPS = 40


def mat(a, b, c, d):
    return np.array([[a, b], [c, d]], dtype=LD)


IDENTITY = mat(1, 0, 0, 1)


def mdot(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = out @ m
    return out


def minv(m):
    # adjugate only: inputs are unit-determinant up to roundoff, and the
    # adjugate is their exact projective inverse.  Dividing by a computed
    # ad - bc would inject garbage once entries are large enough for the
    # subtraction to cancel catastrophically; traces and boundary actions
    # never need that normalization.
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=m.dtype)


def advance(d):
    """Frame moved distance d along its axis direction."""
    h = LD(d) / 2
    e = np.exp(h)
    return np.array([[e, 0], [0, 1 / e]], dtype=LD)


def rotate(theta):
    """Frame rotated by theta about its base point (counterclockwise)."""
    h = LD(theta) / 2
    c, s = np.cos(h), np.sin(h)
    return np.array([[c, s], [-s, c]], dtype=LD)


# the half-turn has an exact integer matrix; going through rotate()
# with a floating pi would contaminate every gluing at double precision
ROT_PI = mat(0, 1, -1, 0)


# --------------------------------------------------------------------
# multiprecision construction kernel
#
# object-dtype 2x2 arrays over mpmath reals; @ and minv work on these
# unchanged.  Integer entries are exact at any working precision, so
# the constants below are safe to build at import time.

_XID = np.array([[1, 0], [0, 1]], dtype=object)
_XROT_PI = np.array([[0, 1], [-1, 0]], dtype=object)
_XFLIP = np.array([[1, 0], [0, -1]], dtype=object)


def _xmat(a, b, c, d):
    return np.array([[a, b], [c, d]], dtype=object)


def _xadvance(d):
    e = mp.exp(mpf(d) / 2)
    return _xmat(e, 0, 0, 1 / e)


def _to_ld(x):
    # through the decimal string: float(x) would truncate to double
    return np.longdouble(mp.nstr(x, 36))


def _to_ld_mat(m):
    return np.array([[_to_ld(m[0, 0]), _to_ld(m[0, 1])],
                     [_to_ld(m[1, 0]), _to_ld(m[1, 1])]], dtype=LD)


def mobius(m, z):
    z = CLD(z)
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def mobius_real(m, x):
    """Boundary action, x in R plus infinity."""
    if np.isinf(x):
        return LD(np.inf) if m[1, 0] == 0 else m[0, 0] / m[1, 0]
    den = m[1, 0] * x + m[1, 1]
    if den == 0:
        return LD(np.inf)
    return (m[0, 0] * x + m[0, 1]) / den


def sign_canonical(m):
    """The representative with positive trace (projective sign)."""
    return m if m[0, 0] + m[1, 1] >= 0 else -m


def trace_length(tr):
    """Translation length of a hyperbolic element from its trace."""
    t = abs(LD(tr))
    if t <= 2 + _EPS_HYPERBOLIC:
        raise NotHyperbolicError("trace %r is not hyperbolic" % (float(tr),))
    return 2 * np.arccosh(t / 2)


def translation_length(m):
    return trace_length(m[0, 0] + m[1, 1])


def basepoint_displacement(m):
    """Hyperbolic distance from i to m(i)."""
    z = mobius(m, 1j)
    q = (z.real ** 2 + (z.imag - 1) ** 2) / (2 * z.imag)
    return np.arccosh(1 + q)


def fixed_points(m):
    """(repelling, attracting) boundary fixed points of a hyperbolic
    element; either may be infinite."""
    n = axis_frame(m)
    xm = LD(np.inf) if n[1, 1] == 0 else n[0, 1] / n[1, 1]
    xp = LD(np.inf) if n[1, 0] == 0 else n[0, 0] / n[1, 0]
    return xm, xp


def _eigvec(m, lam):
    # null vector of m - lam*I, picking the numerically fatter row
    r1 = (m[0, 1], lam - m[0, 0])
    r2 = (lam - m[1, 1], m[1, 0])
    n1 = abs(r1[0]) + abs(r1[1])
    n2 = abs(r2[0]) + abs(r2[1])
    v = r1 if n1 >= n2 else r2
    if n1 == 0 and n2 == 0:
        raise NumericalError("degenerate eigenvector")
    return np.array(v, dtype=LD)


def axis_frame(m, anchor=1j):
    """Frame for the axis of a hyperbolic element: a determinant-one
    matrix sending the upward imaginary axis to the axis of m, oriented
    towards the attracting fixed point, base point at the axis point
    nearest to the anchor."""
    m = sign_canonical(m)
    tr = m[0, 0] + m[1, 1]
    if tr <= 2 + _EPS_HYPERBOLIC:
        raise NotHyperbolicError("trace %r is not hyperbolic" % (float(tr),))
    root = np.sqrt((tr - 2) * (tr + 2))
    lam_p = (tr + root) / 2
    # 1/lam_p equals (tr - root)/2 for unit determinant but avoids the
    # catastrophic cancellation of the subtraction at large traces
    lam_m = 1 / lam_p
    ep = _eigvec(m, lam_p)
    em = _eigvec(m, lam_m)
    det = ep[0] * em[1] - ep[1] * em[0]
    if det < 0:
        em = -em
        det = -det
    if det == 0:
        raise NumericalError("collapsed axis frame")
    n = np.array([[ep[0], em[0]], [ep[1], em[1]]], dtype=LD) / np.sqrt(det)
    # slide the base point to the nearest-point projection of the anchor
    w = mobius(minv(n), anchor)
    s = np.log(abs(w))
    return n @ advance(s)


# --------------------------------------------------------------------
# right-angled hexagons and pairs of pants


def _seam(li, lj, lk):
    """Length of the hexagon side joining cuffs i and j (opposite the
    half-cuff k), all arguments full cuff lengths, multiprecision."""
    hi, hj, hk = mpf(li) / 2, mpf(lj) / 2, mpf(lk) / 2
    num = mp.cosh(hk) + mp.cosh(hi) * mp.cosh(hj)
    den = mp.sinh(hi) * mp.sinh(hj)
    return mp.acosh(num / den)


def _hexagon(sides):
    """Walk a right-angled hexagon with the given side lengths, turning
    right at each corner.  Returns the multiprecision frame at the
    start of each side and the closure residual of the full circuit,
    relative to the scale the walk reached."""
    r = mp.sqrt(mpf(2)) / 2
    turn = _xmat(r, -r, r, r)
    frames = []
    f = _XID
    scale = 1.0
    for s in sides:
        frames.append(f)
        f = f @ _xadvance(s) @ turn
        scale = max(scale, float(np.max(np.abs(f))))
    res = min(float(np.max(np.abs(f - _XID))),
              float(np.max(np.abs(f + _XID)))) / scale
    return frames, res, scale


def hexagon_walk(sides):
    """Longdouble view of the hexagon walk: frames at the start of each
    side, closure residual, and the scale the walk reached."""
    with mp.workdps(_BUILD_DPS):
        frames, res, scale = _hexagon([mpf(float(s)) for s in sides])
        return [_to_ld_mat(f) for f in frames], res, scale


class PantsBlock:
    """Geometric pair of pants with boundary lengths (b1, b2, b3).

    boundary[k] is a hyperbolic translation of length b_k and
    boundary[0] @ boundary[1] @ boundary[2] is the identity by exact
    cancellation of reflection factors.  frame[k] maps the standard
    axis to the k-th cuff, oriented along the translation, base point
    at a seam foot; it is the twist origin for gluings along that cuff.
    The pants interior lies to the right of each oriented cuff.

    boundary and frame are longdouble; the multiprecision originals
    stay on _xboundary and _xframe for chaining further construction.
    """

    __slots__ = ("lengths", "boundary", "frame", "closure_residual",
                 "_xboundary", "_xframe")

    def __init__(self, b1, b2, b3):
        if not (b1 > 0 and b2 > 0 and b3 > 0):
            raise DomainError("cuff lengths must be positive")
        self.lengths = (float(b1), float(b2), float(b3))
        with mp.workdps(_BUILD_DPS):
            # walk order visits the cuffs as (b1, b3, b2); the
            # relabelling below restores boundary[0..2] multiplying to 1
            w1, w2, w3 = (mpf(self.lengths[0]), mpf(self.lengths[2]),
                          mpf(self.lengths[1]))
            sides = [w1 / 2, _seam(w1, w2, w3), w2 / 2,
                     _seam(w2, w3, w1), w3 / 2, _seam(w3, w1, w2)]
            frames, res, _ = _hexagon(sides)
            self.closure_residual = res
            if res > _EPS_BUILD:
                raise NumericalError("hexagon failed to close, residual %g"
                                     % res)
            refl = []
            for k in (1, 3, 5):
                f = frames[k]
                refl.append(f @ _XFLIP @ minv(f))
            m1, m3, m5 = refl
            # reflection products give the translation lifts only up to
            # sign; canonicalize so traces are 2 cosh(l/2)
            self._xboundary = tuple(sign_canonical(y)
                                    for y in (m1 @ m5, m5 @ m3, m3 @ m1))
            self._xframe = (frames[0], frames[4], frames[2])
            # a construction bug would put a cuff off its frame by order
            # one or worse; rounding sits forty digits down
            for k in range(3):
                want = (self._xframe[k] @ _xadvance(self.lengths[k])
                        @ minv(self._xframe[k]))
                err = float(np.max(np.abs(self._xboundary[k] - want)))
                tol = _EPS_BUILD * max(1.0, float(np.max(np.abs(want))))
                if err > tol:
                    raise NumericalError("cuff %d is off its frame by %g"
                                         % (k, err))
            self.boundary = tuple(_to_ld_mat(y) for y in self._xboundary)
            self.frame = tuple(_to_ld_mat(f) for f in self._xframe)


# --------------------------------------------------------------------
# closed surfaces: chain assembly along the reference pants graph


class FuchsianRep:
    """Discrete faithful representation of a closed surface group into
    SL(2, R), tied to the Fenchel-Nielsen point it was built from.

    Words are tuples of signed generator indices; matrices are cached
    per word.  The longdouble matrices drive the fast geometric
    engines; when the representation was assembled here it also keeps
    the multiprecision originals, and traces, lengths, and the relator
    residual are evaluated on those, so reported lengths carry no
    storage rounding at all."""

    def __init__(self, point, gens, exact_gens=None):
        self.point = point
        self.surface = point.surface
        self.gens = {}
        for j, g in enumerate(gens, start=1):
            self.gens[j] = g
            self.gens[-j] = minv(g)
        self._cache = {(): IDENTITY.copy()}
        self._xgens = None
        self._xcache = {(): _XID}
        if exact_gens is not None:
            self._xgens = {}
            for j, g in enumerate(exact_gens, start=1):
                self._xgens[j] = g
                self._xgens[-j] = minv(g)

    def matrix(self, word):
        word = tuple(word)
        m = self._cache.get(word)
        if m is None:
            W.check_letters(word, self.surface.generator_count)
            m = IDENTITY
            for x in word:
                m = m @ self.gens[x]
            self._cache[word] = m
        return m

    def matrix64(self, word):
        return np.asarray(self.matrix(word), dtype=np.float64)

    def exact_matrix(self, word):
        """Multiprecision product over the assembled generators; falls
        back to the longdouble matrix lifted entrywise when the
        representation was supplied as plain matrices."""
        if self._xgens is None:
            m = self.matrix(word)
            return np.array([[mpf(str(m[0, 0])), mpf(str(m[0, 1]))],
                             [mpf(str(m[1, 0])), mpf(str(m[1, 1]))]],
                            dtype=object)
        word = tuple(word)
        m = self._xcache.get(word)
        if m is None:
            W.check_letters(word, self.surface.generator_count)
            with mp.workdps(_BUILD_DPS):
                m = _XID
                for x in word:
                    m = m @ self._xgens[x]
            self._xcache[word] = m
        return m

    def _word_of(self, curve):
        return curve.word if hasattr(curve, "word") else tuple(curve)

    def trace(self, curve):
        m = self.matrix(self._word_of(curve))
        return m[0, 0] + m[1, 1]

    def translation_length(self, curve):
        word = self._word_of(curve)
        if self._xgens is None:
            return float(trace_length(self.trace(word)))
        with mp.workdps(_BUILD_DPS):
            m = self.exact_matrix(word)
            t = abs(m[0, 0] + m[1, 1])
            if t <= 2 + _EPS_HYPERBOLIC:
                raise NotHyperbolicError("trace %r is not hyperbolic"
                                         % (float(t),))
            return float(2 * mp.acosh(t / 2))

    def axis_endpoints(self, curve):
        return fixed_points(self.matrix(self._word_of(curve)))

    def axis_frame(self, curve, anchor=1j):
        return axis_frame(self.matrix(self._word_of(curve)), anchor=anchor)

    def displacement(self, curve):
        return float(basepoint_displacement(self.matrix(self._word_of(curve))))

    def generator_displacement(self):
        return max(self.displacement((j,))
                   for j in range(1, self.surface.generator_count + 1))

    def relator_residual(self):
        # multiply per-handle commutator blocks rather than letters left
        # to right: the blocks are small matrices (partial relators are
        # short curves), while letter-order prefixes wander across the
        # whole chain and their norms would dominate the rounding
        blocks = [(2 * k - 1, 2 * k, -(2 * k - 1), -(2 * k))
                  for k in range(1, self.surface.genus + 1)]
        if self._xgens is not None:
            with mp.workdps(_BUILD_DPS):
                m = _XID
                for blk in blocks:
                    m = m @ self.exact_matrix(blk)
                return min(float(np.max(np.abs(m - _XID))),
                           float(np.max(np.abs(m + _XID))))
        m = IDENTITY
        for blk in blocks:
            m = m @ self.matrix(blk)
        return min(float(np.max(np.abs(m - IDENTITY))),
                   float(np.max(np.abs(m + IDENTITY))))

    def pants_length_residuals(self):
        """Relative error of each reference-curve length against its
        coordinate value."""
        out = {}
        for e, l in zip(self.point.graph.edges, self.point.lengths):
            got = self.translation_length(e.curve)
            out[e.label] = abs(got - l) / l
        return out


def _anchor_search(gens64):
    """Pattern search in the upper-half-plane chart for a base point
    shrinking the largest conjugated generator norm.  Generator norms
    set the rounding floor of everything the fast longdouble path
    computes, so this directly buys accuracy there.  float64 is
    plenty: near the optimum the cost is flat to second order."""

    def cost(x, y):
        s = np.sqrt(y)
        u = np.array([[s, x / s], [0.0, 1.0 / s]])
        ui = np.array([[1.0 / s, -x / s], [0.0, s]])
        return max(float(np.max(np.abs(ui @ m @ u))) for m in gens64)

    x, y = 0.0, 1.0
    c = cost(x, y)
    step = 1.0
    while step > 1e-6:
        for dx, dy in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            nx, ny = x + dx, y * float(np.exp(dy))
            nc = cost(nx, ny)
            if nc < c:
                x, y, c = nx, ny, nc
                break
        else:
            step /= 2
    return x, y


def _require_chain_labels(graph):
    g = graph.surface.genus
    want = ["a1"]
    for k in range(2, g):
        want += ["c%d" % (k - 1), "a%d" % k, "d%d" % k]
    want += ["c%d" % (g - 1), "a%d" % g]
    have = [e.label for e in graph.edges]
    if have != want:
        raise DomainError("holonomy needs the reference chain decomposition, "
                          "got edges %r" % (have,))


def holonomy(point):
    """Representation realizing the given Fenchel-Nielsen coordinates on
    the reference chain decomposition.  Twists are in length units."""
    _require_chain_labels(point.graph)
    g = point.surface.genus
    with mp.workdps(_BUILD_DPS):
        L = {e.label: mpf(l) for e, l in zip(point.graph.edges, point.lengths)}
        T = {e.label: mpf(t) for e, t in zip(point.graph.edges, point.twists)}

        rho = {}
        place = []

        # first handle: slots (a1, b1 a1^-1 b1^-1, c1^-1)
        blk = PantsBlock(L["a1"], L["a1"], L["c1"])
        place.append(_XID)
        rho[1] = blk._xboundary[0]
        # b1 conjugates rho(a1)^-1 onto the second cuff; the twist rides
        # along
        v = blk._xframe[1] @ _xadvance(T["a1"]) @ minv(blk._xframe[0]
                                                       @ _XROT_PI)
        rho[2] = v
        prev_frame = blk._xframe[2]  # carries the translation of c1^-1

        for k in range(2, g):
            ck_1, ak = "c%d" % (k - 1), "a%d" % k
            dk, ck = "d%d" % k, "c%d" % k
            # splitter pants: slots (c_{k-1}, a_k, d_k^-1)
            blkq = PantsBlock(L[ck_1], L[ak], L[dk])
            uq = (prev_frame @ _XROT_PI @ _xadvance(T[ck_1])
                  @ minv(blkq._xframe[0]))
            place.append(uq)
            rho[2 * k - 1] = uq @ blkq._xboundary[1] @ minv(uq)
            a_anchor = uq @ blkq._xframe[1]
            # handle pants: slots (d_k, b_k a_k^-1 b_k^-1, c_k^-1)
            blkr = PantsBlock(L[dk], L[ak], L[ck])
            ur = (uq @ blkq._xframe[2]) @ _XROT_PI @ _xadvance(T[dk]) \
                @ minv(blkr._xframe[0])
            place.append(ur)
            v = (ur @ blkr._xframe[1] @ _xadvance(T[ak])
                 @ minv(a_anchor @ _XROT_PI))
            rho[2 * k] = v
            prev_frame = ur @ blkr._xframe[2]

        # last handle: slots (a_g, b_g a_g^-1 b_g^-1, c_{g-1})
        cg_1, ag = "c%d" % (g - 1), "a%d" % g
        blk = PantsBlock(L[ag], L[ag], L[cg_1])
        ul = prev_frame @ _XROT_PI @ _xadvance(T[cg_1]) @ minv(blk._xframe[2])
        place.append(ul)
        rho[2 * g - 1] = ul @ blk._xboundary[0] @ minv(ul)
        v = (ul @ blk._xframe[1] @ _xadvance(T[ag])
             @ minv(ul @ blk._xframe[0] @ _XROT_PI))
        rho[2 * g] = v

        # re-anchor the base point to keep the generators small;
        # balanced generators keep every later product of them as far
        # from the longdouble precision cliff as possible.  Seed with
        # the best pants placement, then refine freely in the chart.
        best = None
        for u in place:
            u_inv = minv(u)
            cand = [u_inv @ rho[j] @ u for j in range(1, 2 * g + 1)]
            worst = max(float(np.max(np.abs(m))) for m in cand)
            if best is None or worst < best[0]:
                best = (worst, cand)
        x, y = _anchor_search([np.asarray(m, dtype=np.float64)
                               for m in best[1]])
        s = mp.sqrt(mpf(y))
        u = _xmat(s, mpf(x) / s, 0, 1 / s)
        u_inv = _xmat(1 / s, -(mpf(x) / s), 0, s)
        gens = [u_inv @ best[1][j] @ u for j in range(2 * g)]
        return FuchsianRep(point, [_to_ld_mat(m) for m in gens],
                           exact_gens=gens)
