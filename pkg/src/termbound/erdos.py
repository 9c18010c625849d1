"""Colored lists and k-ary trees over coordinatewise descent relations.

Points are k-tuples of naturals; the h-th relation holds between a later
and an earlier point when coordinate h strictly decreases. A sequence is
homogeneous when every later point is below every earlier one in some
coordinate. Homogeneous sequences embed into k-ary trees of colored
lists: each new point descends from the root, at every node following the
child edge colored by the first decreasing coordinate, and becomes a new
leaf. Along one branch, the elements followed by color-h edges therefore
build one strictly h-decreasing list per color simultaneously.

Every tree node gets an ordinal label below ``w * k`` from the
coordinates of its nearest ancestors per color; labels strictly decrease
along edges, so the labelled image lives in the bounded-tree poset of
``ktree`` and its height is an ordinal measure below ``w^k`` that
strictly decreases whenever the sequence grows. That measure, ``f_star``,
is the bridge from homogeneous sequences to integer vectors ordered
lexicographically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BranchNotInTree,
    EmptySequence,
    LabelNotDecreasing,
    NoRelation,
    NotHomogeneous,
)
from .ktree import LabelledTree, Node, height_tree
from .ordinals import OMEGA, Ordinal, cmp, nat_prod_nat, nat_sum, nat_sum_all
from .ordinals import to_vector as _ordinal_to_vector

Point = tuple[int, ...]


def _check_point(p: Sequence[int], k: int) -> Point:
    p = tuple(p)
    if len(p) != k:
        raise ValueError(f"point {p} does not have {k} coordinates")
    if any(not isinstance(c, int) or c < 0 for c in p):
        raise ValueError(f"point {p} has non-natural coordinates")
    return p


def is_homogeneous(s: Sequence[Sequence[int]], k: int) -> bool:
    """True when every later point descends below every earlier point.

    For all i < j some coordinate h has s[j][h] < s[i][h]; the empty and
    singleton sequences are vacuously homogeneous.
    """
    pts = [_check_point(p, k) for p in s]
    for j in range(1, len(pts)):
        for i in range(j):
            if not any(pts[j][h] < pts[i][h] for h in range(k)):
                return False
    return True


def color_of(y: Sequence[int], x: Sequence[int]) -> int:
    """First color (1-based) in which ``y`` descends below ``x``."""
    if len(y) != len(x):
        raise ValueError("points of different dimensions")
    for h, (cy, cx) in enumerate(zip(y, x), start=1):
        if cy < cx:
            return h
    raise NoRelation(f"{tuple(y)} does not descend below {tuple(x)}")


@dataclass(frozen=True)
class ColoredList:
    """A list of points with a color on each of its n-1 edges."""

    points: tuple[Point, ...]
    colors: tuple[int, ...]

    def __post_init__(self):
        if len(self.colors) != max(0, len(self.points) - 1):
            raise ValueError("need exactly one color per edge")

    def __len__(self) -> int:
        return len(self.points)

    def is_valid_over(self, k: int) -> bool:
        """Color c at edge i commits every later element to descend in c."""
        for i, c in enumerate(self.colors):
            if not 1 <= c <= k:
                return False
            for j in range(i + 1, len(self.points)):
                if not self.points[j][c - 1] < self.points[i][c - 1]:
                    return False
        return True

    def color_projection(self, h: int) -> tuple[Point, ...]:
        """Elements followed by a color-h edge, plus the last element."""
        kept = [p for p, c in zip(self.points, self.colors) if c == h]
        if self.points:
            kept.append(self.points[-1])
        return tuple(kept)


NIL = ColoredList((), ())


@dataclass(frozen=True)
class _ENode:
    point: Point
    children: tuple["_ENode | None", ...]


@dataclass(frozen=True)
class ErdosTree:
    """A prefix-closed trie of colored lists, keyed by color sequences.

    The empty colored list is always present; a nonempty tree has a single
    root point and at most one child per color at every node, so each
    branch is addressed by its color sequence.
    """

    k: int
    root: _ENode | None = None

    @classmethod
    def empty(cls, k: int) -> "ErdosTree":
        return cls(k, None)

    @property
    def is_empty(self) -> bool:
        return self.root is None

    def branch_count(self) -> int:
        """Number of nonempty branches, i.e. nodes."""

        def count(n: _ENode | None) -> int:
            if n is None:
                return 0
            return 1 + sum(count(c) for c in n.children)

        return count(self.root)

    def branches(self) -> list[ColoredList]:
        """All nonempty branches, ordered by their color sequence."""
        out: list[ColoredList] = []

        def walk(n: _ENode, points: tuple[Point, ...], colors: tuple[int, ...]):
            out.append(ColoredList(points + (n.point,), colors))
            for c, child in enumerate(n.children, start=1):
                if child is not None:
                    walk(child, points + (n.point,), colors + (c,))

        if self.root is not None:
            walk(self.root, (), ())
        out.sort(key=lambda b: b.colors)
        return out

    def descent_path(self, y: Sequence[int]) -> tuple[list[tuple[_ENode, int]], Point]:
        """Nodes visited when inserting ``y``, with the color taken at each."""
        y = _check_point(y, self.k)
        path: list[tuple[_ENode, int]] = []
        cur = self.root
        while cur is not None:
            c = color_of(y, cur.point)
            path.append((cur, c))
            cur = cur.children[c - 1]
        return path, y

    def insert(self, y: Sequence[int]) -> "ErdosTree":
        """The tree extended with one leaf on the descent path of ``y``."""
        path, y = self.descent_path(y)
        new: _ENode | None = _ENode(y, (None,) * self.k)
        for parent, c in reversed(path):
            children = parent.children[: c - 1] + (new,) + parent.children[c:]
            new = _ENode(parent.point, children)
        return ErdosTree(self.k, new)

    def _locate(self, branch: ColoredList) -> _ENode:
        if not branch.points:
            raise BranchNotInTree("branch must be nonempty")
        cur = self.root
        if cur is None or cur.point != branch.points[0]:
            raise BranchNotInTree(f"{branch} is not a branch of the tree")
        for c, p in zip(branch.colors, branch.points[1:]):
            cur = cur.children[c - 1]
            if cur is None or cur.point != p:
                raise BranchNotInTree(f"{branch} is not a branch of the tree")
        return cur


def insert_branch(t: ErdosTree, y: Sequence[int]) -> ColoredList:
    """The new branch created when ``y`` is inserted into ``t``.

    Descends from the root, at each node following the child of the first
    coordinate in which ``y`` decreases below that node's point, and ends
    with ``y`` as a new leaf.
    """
    path, y = t.descent_path(y)
    return ColoredList(
        tuple(n.point for n, _ in path) + (y,),
        tuple(c for _, c in path),
    )


def embed(s: Sequence[Sequence[int]], k: int) -> ErdosTree:
    """Fold a homogeneous sequence into its tree of colored lists.

    One point inserted at a time; each insertion adds exactly one leaf,
    so the embedding is a simulation of sequence extension by one-node
    tree extension.
    """
    if not is_homogeneous(s, k):
        raise NotHomogeneous(f"{[tuple(p) for p in s]} is not homogeneous")
    t = ErdosTree.empty(k)
    for y in s:
        t = t.insert(y)
    return t


@dataclass(frozen=True)
class NodeProfile:
    """Distinct colors on a branch and the nearest ancestor per color."""

    i: int
    colors: tuple[int, ...]
    ancestors: tuple[Point, ...]

    def ancestor(self, color: int) -> Point:
        return self.ancestors[self.colors.index(color)]


def _profile_of_path(points: tuple[Point, ...], colors: tuple[int, ...]) -> NodeProfile:
    nearest: dict[int, Point] = {}
    for p, c in zip(points, colors):
        nearest[c] = p  # later entries are deeper, keep the lowest
    cs = tuple(sorted(nearest))
    return NodeProfile(len(cs), cs, tuple(nearest[c] for c in cs))


def node_profile(t: ErdosTree, branch: ColoredList) -> NodeProfile:
    """Profile of the last node of ``branch``: for each distinct color on
    the branch, the lowest proper ancestor followed by an edge of that
    color. The root is the only 0-color node."""
    t._locate(branch)
    return _profile_of_path(branch.points[:-1], branch.colors)


def label_alpha(t: ErdosTree, branch: ColoredList) -> Ordinal:
    """Ordinal label below ``w * k`` of the last node of ``branch``.

    The root gets ``max(coords) + 1`` plus ``w * (k-1)``; a node whose
    branch uses j distinct colors gets the natural sum of the h-th
    coordinate of its nearest color-h ancestor over those colors, plus
    ``w * (k-j)``.
    """
    node = t._locate(branch)
    profile = _profile_of_path(branch.points[:-1], branch.colors)
    if profile.i == 0:
        finite = max(z + 1 for z in node.point)
        return nat_sum(finite, nat_prod_nat(OMEGA, t.k - 1))
    coords = nat_sum_all(
        profile.ancestor(h)[h - 1] for h in profile.colors
    )
    return nat_sum(coords, nat_prod_nat(OMEGA, t.k - profile.i))


def to_labelled_tree(t: ErdosTree) -> LabelledTree:
    """Same shape as ``t`` (child slot = color) with ordinal labels.

    Labels strictly decrease from parent to child; a violation would
    falsify the labelling construction and raises LabelNotDecreasing.
    """

    def build(
        n: _ENode,
        points: tuple[Point, ...],
        colors: tuple[int, ...],
        parent_label: Ordinal | None,
    ) -> Node:
        profile = _profile_of_path(points, colors)
        if profile.i == 0:
            label = nat_sum(
                max(z + 1 for z in n.point), nat_prod_nat(OMEGA, t.k - 1)
            )
        else:
            label = nat_sum(
                nat_sum_all(profile.ancestor(h)[h - 1] for h in profile.colors),
                nat_prod_nat(OMEGA, t.k - profile.i),
            )
        if parent_label is not None and cmp(label, parent_label) >= 0:
            raise LabelNotDecreasing(
                f"label {label} of {n.point} not below parent label {parent_label}"
            )
        children = tuple(
            build(child, points + (n.point,), colors + (c,), label)
            if child is not None
            else None
            for c, child in enumerate(n.children, start=1)
        )
        return Node(label, children)

    if t.root is None:
        return LabelledTree.empty(t.k)
    return LabelledTree(t.k, build(t.root, (), (), None))


def f_star(s: Sequence[Sequence[int]], k: int) -> Ordinal:
    """Ordinal measure below ``w^k`` of a nonempty homogeneous sequence.

    The height of the labelled image of the sequence's tree among k-trees
    labelled below ``w * k``; strictly decreasing under extension.
    """
    if len(s) == 0:
        raise EmptySequence("the measure is undefined on the empty sequence")
    tree = embed(s, k)
    return height_of_tree(tree)


def height_of_tree(t: ErdosTree) -> Ordinal:
    """Height of an embedded tree's labelled image below ``w * k``."""
    return height_tree(to_labelled_tree(t), nat_prod_nat(OMEGA, t.k))


def f_star_vec(s: Sequence[Sequence[int]], k: int) -> tuple[int, ...]:
    """The measure as a vector of k naturals, lexicographically ordered."""
    return _ordinal_to_vector(f_star(s, k), k)


# --- serialization -----------------------------------------------------------


def erdos_to_json(t: ErdosTree) -> str:
    doc = {
        "k": t.k,
        "branches": [
            {"points": [list(p) for p in b.points], "colors": list(b.colors)}
            for b in t.branches()
        ],
    }
    return json.dumps(doc, sort_keys=True)


def erdos_from_json(text: str) -> ErdosTree:
    doc = json.loads(text)
    k = doc["k"]
    t = ErdosTree.empty(k)

    def add_branch(points: list[Point], colors: list[int]) -> None:
        nonlocal t
        branch = ColoredList(tuple(points), tuple(colors))
        if not branch.is_valid_over(k):
            raise ValueError(f"branch {branch} is not valid over {k} colors")
        try:
            t._locate(branch)
            return
        except BranchNotInTree:
            pass
        expected = insert_branch(t, points[-1])
        if expected != branch:
            raise ValueError(f"branch {branch} is not reachable by insertion")
        t = t.insert(points[-1])

    for b in sorted(doc["branches"], key=lambda b: len(b["points"])):
        add_branch(
            [tuple(p) for p in b["points"]], [int(c) for c in b["colors"]]
        )
    return t
