"""Data-driven axis-parallel partitions of a joint sample space.

A partition is a binary tree of half-open boxes grown by statistically
equivalent (median) splits until every cell holds at most ``max_cell``
samples, then pruned to a complexity-regularized optimum by exact
bottom-up dynamic programming. Outer cells are unbounded so the leaves
always cover the whole space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator, Optional, Tuple

import numpy as np

from .samples import JointSample


@dataclass(frozen=True)
class CellBox:
    """Half-open coordinate box: lower[k] <= v[k] < upper[k], +-inf allowed."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if not (self.lower < self.upper).all():
            raise ValueError("box requires lower < upper on every coordinate")

    def contains_block(self, data: np.ndarray, start: int, stop: int) -> np.ndarray:
        """Membership mask testing only coordinates start..stop-1."""
        mask = np.ones(data.shape[0], dtype=bool)
        for k in range(start, stop):
            lo, hi = self.lower[k], self.upper[k]
            if lo != -np.inf:
                mask &= data[:, k] >= lo
            if hi != np.inf:
                mask &= data[:, k] < hi
        return mask

    def split(self, axis: int, threshold: float) -> Tuple["CellBox", "CellBox"]:
        left_upper = self.upper.copy()
        left_upper[axis] = threshold
        right_lower = self.lower.copy()
        right_lower[axis] = threshold
        return CellBox(self.lower, left_upper), CellBox(right_lower, self.upper)


@dataclass(frozen=True)
class PartitionNode:
    """Tree node carrying its box and joint/marginal sample counts.

    ``joint_count`` counts samples inside the box; the marginal counts test
    only the input block (first p coordinates) or only the response block
    against the full sample, so ``joint_count <= min(marginal counts)``.
    """

    box: CellBox
    joint_count: int
    x_marginal_count: int
    r_marginal_count: int
    split: Optional[Tuple[int, float]] = None
    children: Optional[Tuple["PartitionNode", "PartitionNode"]] = None

    def __post_init__(self):
        if (self.split is None) != (self.children is None):
            raise ValueError("split and children must be present together")
        if self.joint_count > min(self.x_marginal_count, self.r_marginal_count):
            raise ValueError("joint count cannot exceed either marginal count")

    @property
    def is_leaf(self) -> bool:
        return self.children is None


@dataclass(frozen=True)
class PartitionTree:
    root: PartitionNode
    n: int
    p: int
    q: int

    def leaves(self) -> Iterator[PartitionNode]:
        """Leaves in deterministic left-to-right order."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                yield node
            else:
                stack.append(node.children[1])
                stack.append(node.children[0])

    @property
    def leaf_count(self) -> int:
        return sum(1 for _ in self.leaves())


def cell_term(node: PartitionNode, n: int) -> float:
    """A cell's contribution to the empirical mutual information.

    (joint/n) * ln(joint * n / (x_marginal * r_marginal)); zero for cells
    holding no samples.
    """
    m = node.joint_count
    if m == 0:
        return 0.0
    return (m / n) * math.log(m * n / (node.x_marginal_count * node.r_marginal_count))


def grow_tree(samples: JointSample, max_cell: float, min_split: int = 4) -> PartitionTree:
    """Grow the statistically equivalent partition of a joint sample.

    Nodes holding more than ``max_cell`` samples (and at least ``min_split``)
    are split at the midpoint of the two middle order statistics along a
    depth-round-robin axis; strictly smaller coordinates go left. Axes on
    which the in-cell values cannot be separated (all equal, or the median
    threshold would leave one side empty) are skipped; if no axis separates
    the cell, it stays a leaf. Marginal counts of every node are taken
    against the full sample, testing only the relevant coordinate block.

    Deterministic for a fixed sample multiset, independent of row order.
    """
    if max_cell <= 0:
        raise ValueError("max_cell must be positive")
    if min_split < 2:
        raise ValueError("min_split must be at least 2")

    data = samples.data
    n, dim = data.shape
    p = samples.p

    def build(idx: np.ndarray, x_mask: np.ndarray, r_mask: np.ndarray,
              box: CellBox, depth: int) -> PartitionNode:
        m = idx.size
        xm = int(np.count_nonzero(x_mask))
        rm = int(np.count_nonzero(r_mask))
        if m > max_cell and m >= min_split:
            for offset in range(dim):
                axis = (depth + offset) % dim
                values = data[idx, axis]
                order = np.sort(values)
                k = (m + 1) // 2  # ceil(m/2), 1-indexed order statistic
                threshold = 0.5 * (order[k - 1] + order[k])
                left_sel = values < threshold
                if not left_sel.any():
                    continue  # ties swallowed the lower half; axis unusable
                left_idx, right_idx = idx[left_sel], idx[~left_sel]
                left_box, right_box = box.split(axis, threshold)
                column = data[:, axis]
                if axis < p:
                    xl = x_mask & (column < threshold)
                    xr = x_mask & (column >= threshold)
                    rl = rr = r_mask
                else:
                    rl = r_mask & (column < threshold)
                    rr = r_mask & (column >= threshold)
                    xl = xr = x_mask
                children = (
                    build(left_idx, xl, rl, left_box, depth + 1),
                    build(right_idx, xr, rr, right_box, depth + 1),
                )
                return PartitionNode(box, m, xm, rm, (axis, float(threshold)), children)
        return PartitionNode(box, m, xm, rm)

    full = np.ones(n, dtype=bool)
    root_box = CellBox(np.full(dim, -np.inf), np.full(dim, np.inf))
    root = build(np.arange(n), full, full, root_box, 0)
    return PartitionTree(root, n, p, samples.q)


def prune_tree(tree: PartitionTree, lam: float, leaf_penalty: float) -> PartitionTree:
    """Exact complexity-regularized pruning by bottom-up dynamic programming.

    Selects the pruned subtree maximizing
    sum over leaves of cell_term - lam * leaf_penalty * (number of leaves).
    At each internal node the children's best subtrees are kept only when
    their combined score strictly exceeds the node-as-leaf score; ties
    collapse to the leaf. A zero penalty keeps the tree unchanged (splitting
    never decreases the information sum, so the full tree is optimal).
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if leaf_penalty < 0:
        raise ValueError("leaf_penalty must be non-negative")
    penalty = lam * leaf_penalty
    if penalty == 0.0:
        return tree

    def best(node: PartitionNode) -> Tuple[float, PartitionNode]:
        as_leaf = cell_term(node, tree.n) - penalty
        if node.is_leaf:
            return as_leaf, node
        left_score, left = best(node.children[0])
        right_score, right = best(node.children[1])
        if left_score + right_score > as_leaf:
            return left_score + right_score, replace(node, children=(left, right))
        return as_leaf, replace(node, split=None, children=None)

    _, root = best(tree.root)
    return PartitionTree(root, tree.n, tree.p, tree.q)
