"""Free-group words over signed generator indices.

A word is a tuple of nonzero ints: ``k`` is the k-th generator
(1-based), ``-k`` its inverse.  The surface group itself is not free,
but words, their reductions and their cyclic normal forms are pure
free-group bookkeeping which every other module builds on.  The two
relator-aware functions at the bottom (cyclic Dehn reduction and the
conjugacy normal form) are the one place the relator enters; they are
still exact word combinatorics.
"""

from functools import lru_cache

from .errors import DomainError, IndeterminateError, TrivialCurveError


def check_letters(word, generator_count):
    for x in word:
        if not isinstance(x, int) or x == 0 or abs(x) > generator_count:
            raise DomainError(
                "letter %r outside generator range 1..%d" % (x, generator_count))


def free_reduce(word):
    """Cancel adjacent inverse pairs until none remain."""
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    """Freely reduce, then cancel inverse pairs across the seam.

    Raises TrivialCurveError if the word collapses to nothing.
    """
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    if not w:
        raise TrivialCurveError("word reduces to the identity")
    return tuple(w)


def invert_word(word):
    return tuple(-x for x in reversed(word))


def rotations(word):
    n = len(word)
    return [word[i:] + word[:i] for i in range(n)]


def canonical_cyclic(word):
    """Lexicographically least rotation of the word or its inverse.

    This is the normal form behind unoriented curve-class equality:
    two words map to the same tuple iff they agree as cyclic words up
    to rotation and inversion.
    """
    w = cyclic_reduce(word)
    best = min(rotations(w))
    wi = cyclic_reduce(invert_word(w))
    besti = min(rotations(wi))
    return min(best, besti)


def word_period(word):
    """Length of the shortest cyclic period; equals len(word) iff primitive."""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word == (word[p:] + word[:p]):
            return p
    return n


def is_primitive(word):
    return word_period(cyclic_reduce(word)) == len(cyclic_reduce(word))


def concat_reduce(*parts):
    out = []
    for p in parts:
        for x in p:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def word_power(word, n):
    if n == 0:
        return ()
    w = tuple(word) if n > 0 else invert_word(word)
    return concat_reduce(*([w] * abs(n)))


def commutator(u, v):
    return concat_reduce(u, v, invert_word(u), invert_word(v))


def word_str(word):
    """Compact printable form, e.g. (1, 2, -1, -2) -> 'a1.b1.A1.B1'.

    Odd indices are a-type, even are b-type; capitals mark inverses.
    """
    names = []
    for x in word:
        k = abs(x)
        handle = (k + 1) // 2
        base = "a" if k % 2 == 1 else "b"
        if x < 0:
            base = base.upper()
        names.append("%s%d" % (base, handle))
    return ".".join(names)


def parse_word_str(text):
    """Inverse of word_str; also accepts bare comma-separated integers."""
    text = text.strip()
    if not text:
        return ()
    if text.lstrip("-").split(",")[0].strip().lstrip("-").isdigit():
        return tuple(int(t) for t in text.split(","))
    out = []
    for tok in text.split("."):
        tok = tok.strip()
        if len(tok) < 2 or tok[0].lower() not in "ab":
            raise DomainError("bad word token %r" % tok)
        handle = int(tok[1:])
        k = 2 * handle - 1 if tok[0].lower() == "a" else 2 * handle
        out.append(-k if tok[0].isupper() else k)
    return tuple(out)


@lru_cache(maxsize=None)
def dehn_tables(relator):
    """Replacement tables for cyclic Dehn reduction modulo ``relator``.

    Returns (reduce_tab, swap_tab).  reduce_tab maps every subword of
    the cyclic relator (or its inverse) covering MORE than half of it
    to the inverse of the complementary piece, which is strictly
    shorter.  swap_tab does the same for subwords of exactly half
    length, where the replacement has equal length.  Both rewrites
    preserve the group element.
    """
    relator = tuple(relator)
    total = len(relator)
    half = total // 2
    reduce_tab = {}
    swap_tab = {}
    for base in (relator, invert_word(relator)):
        for rot in rotations(base):
            for cut in range(half, total):
                seg = rot[:cut]
                rep = invert_word(rot[cut:])
                if cut == half:
                    swap_tab.setdefault(seg, rep)
                else:
                    reduce_tab.setdefault(seg, rep)
    return reduce_tab, swap_tab


def dehn_reduce_cyclic(word, relator):
    """Cyclically shorten a word until no subword covers more than
    half of the (cyclic) relator or its inverse.

    The result represents the same conjugacy class and has minimal
    length in it; this is Dehn's algorithm run on the cyclic word.
    Raises TrivialCurveError if the class is the identity.
    """
    reduce_tab, _ = dehn_tables(tuple(relator))
    total = len(relator)
    half = total // 2
    w = cyclic_reduce(word)
    hit = True
    while hit:
        hit = False
        n = len(w)
        ww = w + w
        for length in range(min(n, total - 1), half, -1):
            for i in range(n):
                rep = reduce_tab.get(ww[i : i + length])
                if rep is not None:
                    w = cyclic_reduce(rep + ww[i + length : i + n])
                    hit = True
                    break
            if hit:
                break
    return w


def conjugacy_key(word, relator, cap=4096):
    """Canonical form of the surface-group conjugacy class of ``word``.

    Dehn-reduces the cyclic word, then closes the set of minimal forms
    under half-relator swaps (length-preserving rewrites; applying one
    can expose a further reduction, which is taken).  The key is the
    length-lex least cyclic normal form in the closure, so two words
    get equal keys exactly when the rewrite system connects them.  The
    classic example in genus 2: the two commutator halves of the
    relator are the same unoriented class seen from either side, and
    only the half swap identifies them.
    """
    _, swap_tab = dehn_tables(tuple(relator))
    half = len(relator) // 2
    first = canonical_cyclic(dehn_reduce_cyclic(word, relator))
    seen = {first}
    queue = [first]
    while queue:
        w = queue.pop()
        n = len(w)
        if n < half:
            continue
        ww = w + w
        for i in range(n):
            rep = swap_tab.get(ww[i : i + half])
            if rep is None:
                continue
            w2 = canonical_cyclic(
                dehn_reduce_cyclic(rep + ww[i + half : i + n], relator)
            )
            if w2 not in seen:
                if len(seen) >= cap:
                    raise IndeterminateError(
                        "conjugacy closure of %r exceeded %d forms" % (word, cap)
                    )
                seen.add(w2)
                queue.append(w2)
    return min(seen, key=lambda t: (len(t), t))
