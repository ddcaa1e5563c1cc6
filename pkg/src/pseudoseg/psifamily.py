"""Curve families with leaf disks.

A PsiFamily holds one curve per unordered leaf pair of a host tree
(pairs {i,i} included), together with the pairwise disjoint disks that
certify which curve visits which leaf. Families are immutable; the
verifier works from raw coordinates only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidSize, MissingDiskData, UnknownId
from .geom import Polyline
from .rational import Rat, rat
from .trees import Tree, all_leaf_paths, pair_id


@dataclass(frozen=True)
class Disk:
    """Closed disk attached to one leaf of the host tree."""

    center: tuple
    radius: Rat
    leaf: str

    def __post_init__(self):
        object.__setattr__(self, "center",
                           (rat(self.center[0]), rat(self.center[1])))
        object.__setattr__(self, "radius", rat(self.radius))
        if not self.radius > 0:
            raise InvalidSize(f"disk {self.leaf}: radius must be positive")


def _disks_disjoint(a, b):
    dx = a.center[0] - b.center[0]
    dy = a.center[1] - b.center[1]
    s = a.radius + b.radius
    return dx * dx + dy * dy > s * s


@dataclass(frozen=True)
class PsiFamily:
    curves: tuple
    disks: tuple = ()
    host_tree: Tree = None
    build_log: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "disks", tuple(self.disks))
        object.__setattr__(self, "build_log", tuple(self.build_log))
        ids = [c.id for c in self.curves]
        if len(set(ids)) != len(ids):
            dup = sorted(i for i in set(ids) if ids.count(i) > 1)
            raise InvalidSize(f"duplicate curve ids {dup}")
        leaves = [d.leaf for d in self.disks]
        if len(set(leaves)) != len(leaves):
            raise InvalidSize("duplicate disk leaves")
        for i, a in enumerate(self.disks):
            for b in self.disks[i + 1:]:
                if not _disks_disjoint(a, b):
                    raise InvalidSize(
                        f"disks {a.leaf} and {b.leaf} are not disjoint")
        if self.host_tree is not None:
            want = {pair_id(p.a, p.b) for p in all_leaf_paths(self.host_tree)}
            if set(ids) != want:
                missing = sorted(want - set(ids))
                extra = sorted(set(ids) - want)
                raise InvalidSize(
                    f"curve ids disagree with the host tree's leaf pairs "
                    f"(missing {missing}, extra {extra})")

    @property
    def curve_ids(self):
        return tuple(c.id for c in self.curves)

    def curve(self, cid):
        for c in self.curves:
            if c.id == cid:
                return c
        raise UnknownId(f"no curve {cid!r}")

    def disk(self, leaf):
        for d in self.disks:
            if d.leaf == leaf:
                return d
        raise MissingDiskData(f"no disk for leaf {leaf!r}")

    def subfamily(self, ids):
        """Induced subfamily; drops the host tree since the curve set is
        no longer complete for it."""
        ids = set(ids)
        unknown = ids - set(self.curve_ids)
        if unknown:
            raise UnknownId(f"no curves {sorted(unknown)}")
        return PsiFamily(tuple(c for c in self.curves if c.id in ids),
                         self.disks, None, self.build_log)

    def with_curves(self, curves):
        return PsiFamily(tuple(curves), self.disks, self.host_tree,
                         self.build_log)
