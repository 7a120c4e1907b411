"""
Disjoint-set forest with path compression and union by size.
"""


class UnionFind:
    """Union-find over the integers ``0..size-1``."""

    def __init__(self, size: int):
        self.size = size
        self.parents = list(range(size))
        self.sizes = [1] * size
        self.num_components = size

    def find(self, elem: int) -> int:
        """Return the root of ``elem``, compressing the path taken."""
        root = elem
        while root != self.parents[root]:
            root = self.parents[root]
        while elem != root:
            parent = self.parents[elem]
            self.parents[elem] = root
            elem = parent
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets holding ``a`` and ``b``; False if already joined."""
        root_a = self.find(a)
        root_b = self.find(b)
        if root_a == root_b:
            return False
        if self.sizes[root_a] < self.sizes[root_b]:
            root_a, root_b = root_b, root_a
        self.parents[root_b] = root_a
        self.sizes[root_a] += self.sizes[root_b]
        self.num_components -= 1
        return True

    def components(self) -> list[list[int]]:
        """Members of every set, each sorted, ordered by smallest member."""
        groups: dict[int, list[int]] = {}
        for elem in range(self.size):
            groups.setdefault(self.find(elem), []).append(elem)
        return list(groups.values())
