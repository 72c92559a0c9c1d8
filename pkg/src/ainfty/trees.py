"""Planar rooted trees with external and internal leaves.

A tree is a tuple of children.  A child is the string ``"x"`` (an external
leaf, i.e. an input) or another tuple (a vertex).  The empty tuple ``()`` is
a vertex with no children: an internal leaf.  The bare string ``"x"`` stands
for the tree with no vertices at all (a single edge).

Vertices are addressed by paths: the root is ``()``, its i-th child is
``(i,)`` and so on.  An edge is named by the path of its upper end (a vertex
or an external leaf); the root edge is ``ROOT_EDGE``.

Literal syntax: ``(x x (o x))`` with ``o`` an internal leaf.
"""

from functools import lru_cache

X = "x"
ROOT_EDGE = "root"


class TreeError(ValueError):
    pass


# ---------- literals ----------

def parse_tree(text):
    """Parse ``(x o (x x))`` style literals; a bare ``x`` is the edge tree."""
    toks = text.replace("(", " ( ").replace(")", " ) ").split()
    if not toks:
        raise TreeError("empty tree literal")
    pos = 0

    def node():
        nonlocal pos
        t = toks[pos]
        if t == "x":
            pos += 1
            return X
        if t == "o":
            pos += 1
            return ()
        if t != "(":
            raise TreeError("unexpected token %r at %d" % (t, pos))
        pos += 1
        kids = []
        while pos < len(toks) and toks[pos] != ")":
            kids.append(node())
        if pos >= len(toks):
            raise TreeError("unbalanced parentheses")
        pos += 1
        return tuple(kids)

    out = node()
    if pos != len(toks):
        raise TreeError("trailing tokens after position %d" % pos)
    return out


def format_tree(t, top=True):
    if t == X:
        return "x"
    if t == () and not top:
        return "o"
    return "(" + " ".join(format_tree(c, False) for c in t) + ")"


# ---------- basic statistics ----------

@lru_cache(maxsize=None)
def n_external(t):
    if t == X:
        return 1
    return sum(n_external(c) for c in t)


@lru_cache(maxsize=None)
def n_internal(t):
    if t == X:
        return 0
    if t == ():
        return 1
    return sum(n_internal(c) for c in t)


@lru_cache(maxsize=None)
def n_vertices(t):
    if t == X:
        return 0
    return 1 + sum(n_vertices(c) for c in t)


@lru_cache(maxsize=None)
def max_arity(t):
    if t == X:
        return 0
    return max([len(t)] + [max_arity(c) for c in t])


@lru_cache(maxsize=None)
def is_stable(t):
    if t == X:
        return False
    return _stable_vertex(t)


def _stable_vertex(t):
    if len(t) == 1:
        return False
    return all(c == X or _stable_vertex(c) for c in t)


def sort_key(t):
    """Canonical order: internal leaf < external leaf < subtree, children left to right."""
    if t == X:
        return (1,)
    if t == ():
        return (0,)
    return (2, tuple(sort_key(c) for c in t))


def tree_key(t):
    if t == X:
        return (-1,)
    return tuple(sort_key(c) for c in t)


# ---------- paths ----------

def vertices(t):
    """Paths of all vertices in depth-first, left-to-right order."""
    out = []

    def walk(node, path):
        if node == X:
            return
        out.append(path)
        for i, c in enumerate(node):
            walk(c, path + (i,))
    walk(t, ())
    return out


def edges(t):
    """Non-root edges, named by the path of their upper end (vertex or leaf)."""
    out = []

    def walk(node, path):
        if node == X:
            return
        for i, c in enumerate(node):
            out.append(path + (i,))
            walk(c, path + (i,))
    walk(t, ())
    return out


def interior_edges(t):
    """Edges whose upper end is a vertex (including internal leaves)."""
    return [e for e in edges(t) if at(t, e) != X]


def at(t, path):
    for i in path:
        if t == X or i >= len(t):
            raise TreeError("no node at %r" % (path,))
        t = t[i]
    return t


def replace_at(t, path, new):
    if not path:
        return new
    i = path[0]
    if t == X or i >= len(t):
        raise TreeError("no node at %r" % (path,))
    return t[:i] + (replace_at(t[i], path[1:], new),) + t[i + 1:]


def leaf_slots(t):
    """Path of each external leaf, left to right."""
    out = []

    def walk(node, path):
        if node == X:
            out.append(path)
            return
        for i, c in enumerate(node):
            walk(c, path + (i,))
    walk(t, ())
    return out


# ---------- enumeration ----------

def enumerate_stable_trees(ext, max_internal, max_arity=None):
    """All stable trees with ``ext`` inputs, <= max_internal internal leaves, vertex arity <= max_arity."""
    if max_arity is None:
        max_arity = ext + max_internal
    out = []
    for i in range(max_internal + 1):
        out.extend(_stable_exact(ext, i, max_arity))
    out.sort(key=tree_key)
    return out


@lru_cache(maxsize=None)
def _stable_exact(ext, internal, amax):
    """Stable trees with exactly (ext, internal) leaves, as a tuple."""
    res = []
    if ext == 0 and internal == 1:
        res.append(())
    for arity in range(2, amax + 1):
        for kids in _child_seqs(arity, ext, internal, amax):
            res.append(kids)
    res.sort(key=tree_key)
    return tuple(res)


@lru_cache(maxsize=None)
def _child_seqs(n, ext, internal, amax):
    """Sequences of n children (each x or a stable subtree) with the given leaf totals."""
    if n == 0:
        return ((),) if ext == 0 and internal == 0 else ()
    out = []
    # first child external leaf
    if ext >= 1:
        for rest in _child_seqs(n - 1, ext - 1, internal, amax):
            out.append((X,) + rest)
    # first child a subtree with (e, i) leaves
    for e in range(0, ext + 1):
        for i in range(0, internal + 1):
            if e == 0 and i == 0:
                continue
            if ext + internal - e - i < n - 1:
                continue      # every later sibling needs at least one leaf
            subs = _stable_exact(e, i, amax)
            if not subs:
                continue
            rests = _child_seqs(n - 1, ext - e, internal - i, amax)
            for s in subs:
                for rest in rests:
                    out.append((s,) + rest)
    return tuple(out)


def count_stable_trees(ext, max_internal, max_arity=None):
    return len(enumerate_stable_trees(ext, max_internal, max_arity))


# ---------- moves ----------

def subdivide(t, edge):
    """Insert a degree-2 vertex on an edge; returns (tree, path of the new vertex)."""
    if edge == ROOT_EDGE:
        return (t,), ()
    node = at(t, edge)
    return replace_at(t, edge, (node,)), edge


def expansions(t, v):
    """All trees T' with an edge v_down -> v_up contracting to t at vertex v.

    Returns (tree, path of v_down, path of v_up).  Runs of 0..n consecutive
    children of v move up to the new vertex, unstable results included.
    """
    node = at(t, v)
    if node == X:
        raise TreeError("%r is not a vertex" % (v,))
    n = len(node)
    out = []
    for length in range(0, n + 1):
        for i in range(0, n - length + 1):
            up = tuple(node[i:i + length])
            new = node[:i] + (up,) + node[i + length:]
            out.append((replace_at(t, v, new), v, v + (i,)))
    return out


def stable_expansions(t, v):
    return [e for e in expansions(t, v) if is_stable(e[0])]


def contract(t, edge):
    """Merge the vertex at the upper end of an edge into its parent."""
    if edge == ROOT_EDGE or not edge:
        raise TreeError("cannot contract the root edge")
    node = at(t, edge)
    if node == X:
        raise TreeError("edge %r ends at an external leaf" % (edge,))
    parent, i = edge[:-1], edge[-1]
    pnode = at(t, parent)
    new = pnode[:i] + node + pnode[i + 1:]
    return replace_at(t, parent, new)


def bubble(t, edge, side):
    """Subdivide an edge and hang an internal leaf on the new vertex.

    side "left" gives T_{-|e} (leaf first), "right" gives T_{e|-}.  Returns
    (tree, path of the new vertex, path of the attached internal leaf).
    """
    if edge == ROOT_EDGE:
        node, base = t, ()
        wrap = lambda new: new
    else:
        node, base = at(t, edge), edge
        wrap = lambda new: replace_at(t, edge, new)
    if side == "left":
        new = ((), node)
        leaf = base + (0,)
    elif side == "right":
        new = (node, ())
        leaf = base + (1,)
    else:
        raise TreeError("side must be left or right")
    return wrap(new), base, leaf


# ---------- labelled evaluation ----------

class TreeLabelling:
    """Per-vertex operator tags with a default rule.

    Tags: "m" (m^k), "hm" (h o m^k), "abm" (alpha beta o m^k), "id" (same
    as "m"), or ("elem", v) for a degree-1 vertex carrying a fixed element.
    ``default(path)`` gives the tag of unlisted vertices; ``leaf`` is the tag
    applied to external inputs ("alpha" or "id").
    """

    def __init__(self, tags=None, default=None, leaf="id"):
        self.tags = dict(tags or {})
        self.default = default or (lambda path: "m" if path == () else "hm")
        self.leaf = leaf

    def tag(self, path):
        return self.tags.get(path, self.default(path))

    def broken(self, path, tag):
        tags = dict(self.tags)
        tags[path] = tag
        return TreeLabelling(tags, self.default, self.leaf)

    @classmethod
    def hm(cls, leaf="alpha"):
        return cls(leaf=leaf)

    @classmethod
    def plain(cls):
        return cls(default=lambda path: "m", leaf="id")


def evaluate_tree(t, labels, inputs, ops):
    """Compose the operators on the vertices of t and apply to ``inputs``.

    ``ops`` maps tag names to callables: ops["m"](list_of_vectors) runs the
    product of that arity; ops["h"], ops["ab"], ops["alpha"] act on vectors.
    """
    if len(inputs) != n_external(t):
        raise TreeError("tree has %d inputs, got %d" % (n_external(t), len(inputs)))
    it = iter(inputs)

    def leaf_value(x):
        if labels.leaf == "alpha":
            return ops["alpha"](x)
        return x

    def walk(node, path):
        if node == X:
            return leaf_value(next(it))
        tag = labels.tag(path)
        if isinstance(tag, tuple) and tag[0] == "elem":
            if node != ():
                raise TreeError("element labels only sit on internal leaves")
            return tag[1]
        args = [walk(c, path + (i,)) for i, c in enumerate(node)]
        out = ops["m"](args)
        if tag == "hm":
            out = ops["h"](out)
        elif tag == "abm":
            out = ops["ab"](out)
        elif tag not in ("m", "id"):
            raise TreeError("unknown tag %r" % (tag,))
        return out

    return walk(t, ())
