"""Interned strings with equality-characterizing identifiers.

A StringStore keeps a collection of strings over an integer alphabet and hands
out dense integer ids such that two ids are equal iff the strings are equal.
Supported updates are explicit insertion and single-character substitution;
substitution is persistent (previously issued ids never change meaning) and
costs O(log len) node rebuilds.

Representation: persistent balanced binary trees with a shape fixed by the
string length (midpoint split), hash-consed so that structurally equal trees
are the same node. Node identity therefore decides string equality exactly,
with no reliance on hash values being collision-free.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class StringId:
    token: int


class StringStore:
    """Single-writer store of interned strings over alphabet [0, alphabet_size)."""

    def __init__(self, alphabet_size: int):
        if alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        self.alphabet_size = alphabet_size
        self._nodes: dict[tuple, int] = {}       # structural key -> node handle
        self._length: list[int] = []             # per node handle
        self._children: list[tuple] = []         # structural key per handle
        self._root_to_id: dict[int, StringId] = {}
        self._id_to_root: list[int] = []
        self._empty_handle = self._intern(("E",), 0)

    # -- node plumbing -----------------------------------------------------

    def _intern(self, key: tuple, length: int) -> int:
        h = self._nodes.get(key)
        if h is None:
            h = len(self._length)
            self._nodes[key] = h
            self._length.append(length)
            self._children.append(key)
        return h

    def _build(self, s: tuple[int, ...]) -> int:
        if not s:
            return self._empty_handle
        if len(s) == 1:
            return self._intern(("L", s[0]), 1)
        mid = len(s) // 2
        left = self._build(s[:mid])
        right = self._build(s[mid:])
        return self._intern(("I", left, right), len(s))

    def _subst(self, handle: int, k: int, c: int) -> int:
        key = self._children[handle]
        if key[0] == "L":
            return self._intern(("L", c), 1)
        _, left, right = key
        llen = self._length[left]
        if k < llen:
            left = self._subst(left, k, c)
        else:
            right = self._subst(right, k - llen, c)
        return self._intern(("I", left, right), self._length[handle])

    def _materialize(self, handle: int, out: list[int]) -> None:
        key = self._children[handle]
        if key[0] == "E":
            return
        if key[0] == "L":
            out.append(key[1])
            return
        self._materialize(key[1], out)
        self._materialize(key[2], out)

    def _issue(self, handle: int) -> StringId:
        sid = self._root_to_id.get(handle)
        if sid is None:
            sid = StringId(len(self._id_to_root))
            self._root_to_id[handle] = sid
            self._id_to_root.append(handle)
        return sid

    # -- public interface --------------------------------------------------

    def insert_explicit(self, s) -> StringId:
        """Intern a full string; equal strings always receive equal ids."""
        s = tuple(s)
        for c in s:
            if not (0 <= c < self.alphabet_size):
                raise ValueError(f"symbol {c} out of alphabet range")
        return self._issue(self._build(s))

    def insert_substitution(self, base: StringId, k: int, c: int) -> StringId:
        """Intern the string equal to base with position k replaced by c."""
        if not (0 <= base.token < len(self._id_to_root)):
            raise KeyError(f"unknown id {base}")
        if not (0 <= c < self.alphabet_size):
            raise ValueError(f"symbol {c} out of alphabet range")
        root = self._id_to_root[base.token]
        if not (0 <= k < self._length[root]):
            raise IndexError(f"substitution index {k} out of bounds")
        return self._issue(self._subst(root, k, c))

    def string_of(self, sid: StringId) -> tuple[int, ...]:
        """Recover the exact interned string for an id."""
        if not (0 <= sid.token < len(self._id_to_root)):
            raise KeyError(f"unknown id {sid}")
        out: list[int] = []
        self._materialize(self._id_to_root[sid.token], out)
        return tuple(out)

    def length_of(self, sid: StringId) -> int:
        if not (0 <= sid.token < len(self._id_to_root)):
            raise KeyError(f"unknown id {sid}")
        return self._length[self._id_to_root[sid.token]]

    def __len__(self) -> int:
        """Number of distinct strings interned so far."""
        return len(self._id_to_root)
