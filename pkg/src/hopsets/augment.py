"""Sets of augmentation edges (shortcut pairs or weighted hopset triples)."""
import numpy as np

from .errors import InputError


class AugmentSet:
    """Loop-free set of ordered pairs; in weighted mode each pair keeps its lightest weight."""

    def __init__(self, weighted=False):
        self.weighted = weighted
        self._edges = {}

    @classmethod
    def from_pairs(cls, pairs):
        out = cls()
        for u, v in pairs:
            out.add(u, v)
        return out

    @classmethod
    def from_triples(cls, triples):
        out = cls(weighted=True)
        for u, v, w in triples:
            out.add(u, v, w)
        return out

    def add(self, u, v, w=None):
        if u == v:
            return
        if self.weighted:
            if w is None or w < 0:
                raise InputError(f"weighted augment edge ({u}, {v}) needs a non-negative weight")
            key = (int(u), int(v))
            old = self._edges.get(key)
            if old is None or w < old:
                self._edges[key] = int(w)
        else:
            self._edges[(int(u), int(v))] = None

    def add_arrays(self, src, dst, w=None):
        """Bulk insert; ``w`` required in weighted mode."""
        if self.weighted:
            src, dst, w = (np.asarray(a, dtype=np.int64) for a in (src, dst, w))
            keep = src != dst
            src, dst, w = src[keep], dst[keep], w[keep]
            if (w < 0).any():
                raise InputError("weighted augment edges need non-negative weights")
            # lightest weight per pair within the batch, then merge
            order = np.lexsort((w, dst, src))
            src, dst, w = src[order], dst[order], w[order]
            first = np.ones(src.size, dtype=bool)
            first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
            batch = zip(zip(src[first].tolist(), dst[first].tolist()), w[first].tolist())
            edges = self._edges
            if not edges:
                edges.update(batch)
                return
            for key, x in batch:
                old = edges.get(key)
                if old is None or x < old:
                    edges[key] = x
        else:
            keep = src != dst
            self._edges.update(dict.fromkeys(zip(src[keep].tolist(), dst[keep].tolist())))

    def update(self, other):
        if other.weighted != self.weighted:
            raise InputError("cannot merge weighted and unweighted augment sets")
        if not self.weighted:
            self._edges.update(other._edges)
            return
        for key, w in other._edges.items():
            old = self._edges.get(key)
            if old is None or w < old:
                self._edges[key] = w

    def weight(self, u, v):
        return self._edges[(u, v)]

    def __len__(self):
        return len(self._edges)

    def __contains__(self, pair):
        return tuple(pair[:2]) in self._edges

    def __iter__(self):
        return iter(self.sorted())

    def __eq__(self, other):
        if not isinstance(other, AugmentSet):
            return NotImplemented
        return self.weighted == other.weighted and self._edges == other._edges

    __hash__ = None

    def pairs(self):
        return set(self._edges)

    def sorted(self):
        """Pairs (or triples) in ascending (u, v) order."""
        if self.weighted:
            return [(u, v, self._edges[(u, v)]) for u, v in sorted(self._edges)]
        return sorted(self._edges)

    def arrays(self):
        """(src, dst, w) int64 arrays in (u, v) order; w is None when unweighted."""
        keys = sorted(self._edges)
        if keys:
            uv = np.asarray(keys, dtype=np.int64)
        else:
            uv = np.empty((0, 2), dtype=np.int64)
        if not self.weighted:
            return uv[:, 0].copy(), uv[:, 1].copy(), None
        w = np.asarray([self._edges[k] for k in keys], dtype=np.int64)
        return uv[:, 0].copy(), uv[:, 1].copy(), w

    def mapped(self, to_global):
        """Relabel through an index array (local -> global ids)."""
        out = AugmentSet(self.weighted)
        for (u, v), w in self._edges.items():
            out.add(int(to_global[u]), int(to_global[v]), w)
        return out

    def __repr__(self):
        kind = "weighted" if self.weighted else "pairs"
        return f"AugmentSet({kind}, size={len(self)})"
