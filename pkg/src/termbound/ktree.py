"""Finite k-branching trees with strictly decreasing ordinal labels.

A tree is either empty or a node carrying an ordinal label and exactly k
child slots; every occupied slot holds a node labelled strictly below its
parent. Trees with all labels below a bound ``alpha`` form a well-founded
poset under one-node extension, and ``height_tree`` computes the exact
ordinal height of a tree in that poset through the closed forms

    h_k(empty, n)       = (k^n - 1) / (k - 1)          for finite n,
    h_k(empty, l + n)   = k^(l+n) + (k^n - 1)/(k - 1)  for l a limit,
    h_1(empty, a)       = a,

and the natural sum of the slot heights for nonempty trees. No supremum
over label sequences is ever enumerated.

``brute_force_height`` is an independent oracle for finite label bounds:
it enumerates the whole poset and computes heights directly from the
one-node-extension recursion. Heights are invariant under permuting the
child slots of any node, so the enumeration works on slot-sorted
canonical forms; the returned table answers for arbitrary trees by
canonicalizing the key.

Everything here is immutable; ``extend`` shares all unmodified subtrees.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, LabelNotDecreasing, OccupiedSlot, ParseError
from .ordinals import Ordinal, add, cmp, exp_base_k, nat_sum_all


@dataclass(frozen=True)
class Node:
    label: Ordinal
    children: tuple["Node | None", ...]


@dataclass(frozen=True)
class LabelledTree:
    """A k-branching tree; ``root is None`` denotes the empty tree."""

    k: int
    root: Node | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("arity must be at least 1")
        _validate(self.root, self.k, None)

    @classmethod
    def empty(cls, k: int) -> "LabelledTree":
        return cls(k, None)

    @property
    def is_empty(self) -> bool:
        return self.root is None

    def node_count(self) -> int:
        def count(n: Node | None) -> int:
            if n is None:
                return 0
            return 1 + sum(count(c) for c in n.children)

        return count(self.root)

    def empty_slots(self) -> list[tuple[tuple[int, ...], Ordinal]]:
        """All (path, owner label) pairs addressing an empty slot."""
        out: list[tuple[tuple[int, ...], Ordinal]] = []

        def walk(n: Node, path: tuple[int, ...]) -> None:
            for i, child in enumerate(n.children, start=1):
                if child is None:
                    out.append((path + (i,), n.label))
                else:
                    walk(child, path + (i,))

        if self.root is not None:
            walk(self.root, ())
        return out

    def __str__(self) -> str:
        return tree_to_text(self)


def _validate(node: Node | None, k: int, parent_label: Ordinal | None) -> None:
    if node is None:
        return
    if len(node.children) != k:
        raise ValueError(f"node has {len(node.children)} slots, expected {k}")
    if parent_label is not None and cmp(node.label, parent_label) >= 0:
        raise LabelNotDecreasing(
            f"label {node.label} not below parent {parent_label}"
        )
    for child in node.children:
        _validate(child, k, node.label)


def node(label: Ordinal | int, *children: Node | None, k: int | None = None) -> Node:
    """Convenience constructor; missing slots are filled with empties."""
    label = label if isinstance(label, Ordinal) else Ordinal.from_int(label)
    if k is None:
        k = len(children)
    if len(children) > k:
        raise ValueError("more children than slots")
    slots = tuple(children) + (None,) * (k - len(children))
    return Node(label, slots)


def extend(
    t: LabelledTree, path: tuple[int, ...], label: Ordinal | int
) -> LabelledTree:
    """Add one node at an empty slot; the one-step extension of ``t``.

    ``path`` is a sequence of child indices in [1, k]; the empty path
    addresses the root. Raises OccupiedSlot if the path does not lead to
    an empty slot, LabelNotDecreasing if the label is not strictly below
    the owning node's label. The bound on root labels is the caller's
    concern, since a tree does not record which poset it lives in.
    """
    label = label if isinstance(label, Ordinal) else Ordinal.from_int(label)
    path = tuple(path)
    for i in path:
        if not 1 <= i <= t.k:
            raise ValueError(f"path index {i} outside [1, {t.k}]")
    if t.root is None:
        if path:
            raise OccupiedSlot("path does not address a slot of the empty tree")
        return LabelledTree(t.k, Node(label, (None,) * t.k))
    if not path:
        raise OccupiedSlot("root of a nonempty tree is occupied")

    def insert(n: Node, rest: tuple[int, ...]) -> Node:
        idx = rest[0] - 1
        child = n.children[idx]
        if len(rest) == 1:
            if child is not None:
                raise OccupiedSlot(f"slot {path} is occupied")
            if cmp(label, n.label) >= 0:
                raise LabelNotDecreasing(
                    f"label {label} not below parent {n.label}"
                )
            new_child = Node(label, (None,) * t.k)
        else:
            if child is None:
                raise OccupiedSlot(f"path {path} runs past an empty slot")
            new_child = insert(child, rest[1:])
        children = n.children[:idx] + (new_child,) + n.children[idx + 1 :]
        return Node(n.label, children)

    return LabelledTree(t.k, insert(t.root, path))


def height_nil(k: int, alpha: Ordinal | int) -> Ordinal:
    """Ordinal height of the empty tree among k-trees labelled below alpha."""
    if k < 1:
        raise ValueError("arity must be at least 1")
    alpha = alpha if isinstance(alpha, Ordinal) else Ordinal.from_int(alpha)
    if k == 1:
        return alpha
    n = alpha.finite_part
    geometric = (k**n - 1) // (k - 1)
    if alpha.limit_part.is_zero:
        return Ordinal.from_int(geometric)
    return add(exp_base_k(k, alpha), geometric)


def height_tree(t: LabelledTree, alpha: Ordinal | int) -> Ordinal:
    """Ordinal height of ``t`` among k-trees labelled below alpha.

    The natural sum, over every empty slot, of the empty-tree height at
    the slot owner's label; for the empty tree the bound itself owns the
    root slot.
    """
    if t.root is None:
        return height_nil(t.k, alpha)
    return nat_sum_all(
        height_nil(t.k, owner) for _, owner in t.empty_slots()
    )


# --- exhaustive oracle -------------------------------------------------------
#
# Internally trees are interned integers: id 0 is the empty tree, and every
# other id maps to (label, child ids) with the children sorted by a fixed
# key, so structurally equal trees (up to slot permutation) intern to the
# same id. Labels are plain ints because the oracle only handles finite
# label bounds.


class _Interner:
    def __init__(self, k: int, budget: int):
        self.k = k
        self.budget = budget
        self.table: dict[tuple[int, tuple[int, ...]], int] = {}
        self.label: list[int] = [-1]
        self.kids: list[tuple[int, ...]] = [()]

    def sort_key(self, cid: int):
        # Empties last; among nodes, higher labels first, ties by identity.
        if cid == 0:
            return (1, 0, 0)
        return (0, -self.label[cid], cid)

    def make(self, label: int, kids: tuple[int, ...]) -> int:
        kids = tuple(sorted(kids, key=self.sort_key))
        key = (label, kids)
        tid = self.table.get(key)
        if tid is None:
            tid = len(self.label)
            if tid > self.budget:
                raise BudgetExceeded(
                    f"enumeration exceeded {self.budget} distinct trees"
                )
            self.table[key] = tid
            self.label.append(label)
            self.kids.append(kids)
        return tid

    def leaf(self, label: int) -> int:
        return self.make(label, (0,) * self.k)


class HeightTable:
    """Heights of every tree in the poset of k-trees labelled below m.

    Lookup accepts any LabelledTree in the space; slot order is ignored
    since the one-node-extension poset is invariant under permuting the
    children of a node.
    """

    def __init__(self, k: int, m: int, interner: _Interner, heights: dict[int, int]):
        self.k = k
        self.m = m
        self._interner = interner
        self._heights = heights

    def __len__(self) -> int:
        return len(self._heights)

    def _intern_tree(self, n: Node | None) -> int:
        if n is None:
            return 0
        kids = tuple(self._intern_tree(c) for c in n.children)
        return self._interner.make(n.label.to_int(), kids)

    def __getitem__(self, t: LabelledTree) -> int:
        if t.k != self.k:
            raise KeyError(f"tree has arity {t.k}, table holds arity {self.k}")
        before = len(self._interner.label)
        tid = self._intern_tree(t.root)
        if tid not in self._heights or len(self._interner.label) != before:
            raise KeyError(f"tree is not in the space of {self.k}-trees below {self.m}")
        return self._heights[tid]

    def _decode(self, tid: int) -> Node | None:
        if tid == 0:
            return None
        children = tuple(self._decode(c) for c in self._interner.kids[tid])
        return Node(Ordinal.from_int(self._interner.label[tid]), children)

    def items(self):
        """Yield (canonical representative, height) for every tree class."""
        for tid, h in self._heights.items():
            yield LabelledTree(self.k, self._decode(tid)), h


def brute_force_height(k: int, m: int, max_trees: int = 1_000_000) -> HeightTable:
    """Exact heights of the whole poset by exhausting one-node extensions.

    Requires k <= 3 and m <= 4; within that range the slot-sorted
    enumeration stays comfortably below ``max_trees`` classes. Heights
    come from the raw recursion height(T) = max over extensions of
    height + 1, with no reference to the closed forms.
    """
    if not 1 <= k <= 3:
        raise ValueError("oracle supports arities 1..3")
    if not 0 <= m <= 4:
        raise ValueError("oracle supports label bounds 0..4")
    intern = _Interner(k, max_trees)
    ext_memo: dict[int, tuple[int, ...]] = {}

    def extensions(tid: int) -> tuple[int, ...]:
        # Extensions of a nonempty tree; root insertions handled separately.
        cached = ext_memo.get(tid)
        if cached is not None:
            return cached
        label = intern.label[tid]
        kids = intern.kids[tid]
        out: set[int] = set()
        if 0 in kids:
            without_one_empty = list(kids)
            without_one_empty.remove(0)
            for lab in range(label):
                out.add(intern.make(label, tuple(without_one_empty) + (intern.leaf(lab),)))
        for child in set(kids) - {0}:
            rest = list(kids)
            rest.remove(child)
            for ext_child in extensions(child):
                out.add(intern.make(label, tuple(rest) + (ext_child,)))
        result = tuple(sorted(out))
        ext_memo[tid] = result
        return result

    heights: dict[int, int] = {}

    def height(tid: int) -> int:
        cached = heights.get(tid)
        if cached is not None:
            return cached
        if tid == 0:
            succs = tuple(intern.leaf(lab) for lab in range(m))
        else:
            succs = extensions(tid)
        h = 0
        for s in succs:
            h = max(h, height(s) + 1)
        heights[tid] = h
        return h

    height(0)
    return HeightTable(k, m, intern, heights)


# --- serialization -----------------------------------------------------------
#
# Nested parenthesized form ``(label child_1 ... child_k)`` with ``_`` for
# an empty slot; labels use the ordinal grammar. The empty tree is ``_``.


def tree_to_text(t: LabelledTree) -> str:
    def fmt(n: Node | None) -> str:
        if n is None:
            return "_"
        inner = " ".join(fmt(c) for c in n.children)
        return f"({n.label} {inner})"

    return fmt(t.root)


def tree_from_text(text: str, k: int) -> LabelledTree:
    from .ordinals import parse_ordinal

    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def parse_node() -> Node | None:
        nonlocal pos
        skip_ws()
        if pos >= len(text):
            raise ParseError("unexpected end of tree text")
        if text[pos] == "_":
            pos += 1
            return None
        if text[pos] != "(":
            raise ParseError(f"expected '(' or '_' at position {pos}")
        pos += 1
        skip_ws()
        # Labels may contain parentheses (e.g. w^(w)); scan with balance.
        start = pos
        depth = 0
        while pos < len(text):
            ch = text[pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch.isspace() and depth == 0:
                break
            pos += 1
        label = parse_ordinal(text[start:pos])
        children = []
        for _ in range(k):
            children.append(parse_node())
        skip_ws()
        if pos >= len(text) or text[pos] != ")":
            raise ParseError(f"expected ')' at position {pos}")
        pos += 1
        return Node(label, tuple(children))

    root = parse_node()
    skip_ws()
    if pos != len(text):
        raise ParseError(f"trailing input at position {pos}")
    return LabelledTree(k, root)
