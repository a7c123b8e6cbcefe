"""Structured vertex names and finite-support renamings.

A name is a base identifier plus a path of small integers, written
``base.i.j``.  Rules derive fresh names by appending path segments, so
names produced from disjoint inputs never collide.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple, Union

from cgd.errors import NonInjectiveRenaming


class VertexName(NamedTuple):
    base: str
    path: tuple[int, ...] = ()

    def child(self, k: int) -> "VertexName":
        return VertexName(self.base, self.path + (k,))

    def extend(self, segments: tuple[int, ...]) -> "VertexName":
        return VertexName(self.base, self.path + tuple(segments))

    def strip(self, depth: int) -> "VertexName | None":
        """Ancestor obtained by removing ``depth`` trailing segments."""
        if depth == 0:
            return self
        if depth > len(self.path):
            return None
        return VertexName(self.base, self.path[:-depth])

    def tail(self, depth: int) -> tuple[int, ...]:
        return self.path[len(self.path) - depth:] if depth else ()

    def __str__(self) -> str:
        if not self.path:
            return self.base
        return self.base + "." + ".".join(map(str, self.path))

    def __repr__(self) -> str:
        return f"VertexName({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "VertexName":
        base, *rest = text.split(".")
        if not base or not base.isalnum() or not base.isascii():
            raise ValueError(f"bad vertex name {text!r}: base must be alphanumeric")
        try:
            path = tuple(int(p) for p in rest)
        except ValueError:
            raise ValueError(f"bad vertex name {text!r}: suffixes must be decimal") from None
        if any(p < 0 or not s.isdigit() for p, s in zip(path, rest)):
            raise ValueError(f"bad vertex name {text!r}: suffixes must be nonnegative")
        return cls(base, path)


NameLike = Union[VertexName, str]


def name(x: NameLike) -> VertexName:
    if isinstance(x, VertexName):
        return x
    return VertexName.parse(x)


class Renaming:
    """Finite-support bijection on names, identity outside its explicit pairs.

    With ``depth > 0`` the renaming acts on derived names: ``w`` is mapped to
    ``R(strip(w, depth))`` followed by the same ``depth`` trailing segments.
    This is the conjugate a rule with that naming depth induces.
    """

    __slots__ = ("mapping", "depth")

    def __init__(self, mapping: Mapping[NameLike, NameLike] | None = None, depth: int = 0):
        m = {name(k): name(v) for k, v in (mapping or {}).items()}
        if len(set(m.values())) != len(m):
            raise NonInjectiveRenaming("renaming maps two names to the same image")
        self.mapping = m
        self.depth = depth

    def __call__(self, w: VertexName) -> VertexName:
        if self.depth == 0:
            return self.mapping.get(w, w)
        anc = w.strip(self.depth)
        if anc is None:
            return w
        return self.mapping.get(anc, anc).extend(w.tail(self.depth))

    def inverse(self) -> "Renaming":
        return Renaming({v: k for k, v in self.mapping.items()}, self.depth)

    def at_depth(self, depth: int) -> "Renaming":
        return Renaming(self.mapping, depth)

    def check_injective(self, names: Iterable[VertexName]) -> None:
        seen: dict[VertexName, VertexName] = {}
        for w in names:
            img = self(w)
            if img in seen and seen[img] != w:
                raise NonInjectiveRenaming(f"{seen[img]} and {w} both map to {img}")
            seen[img] = w

    def __repr__(self) -> str:
        pairs = ", ".join(f"{k}->{v}" for k, v in sorted(self.mapping.items()))
        return f"Renaming({{{pairs}}}, depth={self.depth})"
