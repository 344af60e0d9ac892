import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfdo.dynstrings import StringId, StringStore


def test_interning_contract():
    store = StringStore(3)
    a = store.insert_explicit([0, 1, 0])
    b = store.insert_explicit([0, 1, 0])
    c = store.insert_explicit([0, 1, 1])
    assert a == b
    assert a != c
    empty = store.insert_explicit([])
    assert empty != a and store.string_of(empty) == ()


def test_substitution_examples():
    store = StringStore(3)
    aba = store.insert_explicit([0, 1, 0])
    aaa = store.insert_substitution(aba, 1, 0)
    assert aaa == store.insert_explicit([0, 0, 0])
    # identity substitution returns the base id
    assert store.insert_substitution(aba, 0, 0) == aba
    # chain of substitutions equals one explicit insert of the result
    cur = store.insert_explicit([2, 2, 2, 2])
    for k, c in [(0, 1), (3, 0), (1, 1), (0, 2)]:
        cur = store.insert_substitution(cur, k, c)
    assert cur == store.insert_explicit([2, 1, 2, 0])


def test_persistence_and_length():
    store = StringStore(2)
    base = store.insert_explicit([0, 1, 1, 0])
    store.insert_substitution(base, 2, 0)
    assert store.string_of(base) == (0, 1, 1, 0)
    assert store.length_of(base) == 4


def test_dense_ids_in_first_issue_order():
    store = StringStore(4)
    ids = [store.insert_explicit(s) for s in ([1], [2], [1], [3, 3])]
    assert [i.token for i in ids] == [0, 1, 0, 2]


def test_errors():
    store = StringStore(2)
    with pytest.raises(ValueError):
        store.insert_explicit([2])
    sid = store.insert_explicit([0, 1])
    with pytest.raises(IndexError):
        store.insert_substitution(sid, 2, 0)
    with pytest.raises(ValueError):
        store.insert_substitution(sid, 0, 5)
    with pytest.raises(KeyError):
        store.string_of(StringId(99))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_differential_against_naive_store(seed):
    rng = random.Random(seed)
    store = StringStore(4)
    known: list[tuple[StringId, tuple[int, ...]]] = []
    canon: dict[tuple[int, ...], StringId] = {}
    for _ in range(40):
        if known and rng.random() < 0.6:
            base, s = known[rng.randrange(len(known))]
            if not s:
                continue
            k = rng.randrange(len(s))
            c = rng.randrange(4)
            sid = store.insert_substitution(base, k, c)
            t = s[:k] + (c,) + s[k + 1:]
        else:
            t = tuple(rng.randrange(4) for _ in range(rng.randint(0, 8)))
            sid = store.insert_explicit(t)
        if t in canon:
            assert canon[t] == sid
        else:
            for other, prev in canon.items():
                assert prev != sid
            canon[t] = sid
        assert store.string_of(sid) == t
        known.append((sid, t))
