import itertools

import pytest

from navlogic.errors import (
    EmptySuccessorSet,
    MalformedSequence,
    MissingTransition,
    NoInstructions,
    NotAHistory,
    UnknownState,
    UnknownView,
)
from navlogic.system import (
    History,
    TransitionSystem,
    class_of,
    class_sequence,
    format_system,
    histories_indistinguishable,
    is_history,
    parse_system,
    star,
    truncate_history,
    validate_system,
)
from navlogic.testkit import SystemParams, random_system

SMALL = """
states p q r
obs p q
instructions x y
edge p x q
edge p y r
edge q x p r
edge q y q
edge r x r
edge r y p
view vP p
view vR r
"""


def test_t0_classes(t0):
    assert t0.classes == (("a", "b"), ("c", "d"), ("e",), ("f",), ("g",), ("h",))


def test_missing_transition():
    text = SMALL.replace("edge r x r\n", "")
    with pytest.raises(MissingTransition):
        parse_system(text)


def test_t0_missing_edge_for_h(t0):
    text = format_system(t0).replace("edge h 0 h\n", "")
    with pytest.raises(MissingTransition):
        parse_system(text)


def test_view_on_undeclared_state():
    with pytest.raises(UnknownState):
        parse_system(SMALL + "view vZ z\n")


def test_obs_and_edge_undeclared_state():
    with pytest.raises(UnknownState):
        parse_system(SMALL + "obs p z\n")
    with pytest.raises(UnknownState):
        parse_system(SMALL + "edge p x z\n")


def test_no_instructions():
    with pytest.raises(NoInstructions):
        validate_system({"states": ["p"], "instructions": [], "edges": []})


def test_empty_successor_set():
    with pytest.raises(EmptySuccessorSet):
        validate_system({"states": ["p"], "instructions": ["x"], "edges": [("p", "x", [])]})


def test_edges_union_and_obs_merge_transitively():
    T = parse_system(
        "states a b c\nobs a b\nobs b c\ninstructions i\n"
        "edge a i b\nedge a i c\nedge b i a\nedge c i c\n"
    )
    assert T.classes == (("a", "b", "c"),)
    assert T.succ("a", "i") == ("b", "c")


def test_format_round_trip(t0):
    assert parse_system(format_system(t0)) == t0
    assert format_system(parse_system(format_system(t0))) == format_system(t0)


def test_class_of(t0):
    assert class_of(t0, "a") == ("a", "b")
    assert class_of(t0, "e") == ("e",)
    with pytest.raises(UnknownState):
        class_of(t0, "z")


def test_star(t0):
    assert star(t0, ["vA", "vC"]) == {("a", "b"), ("c", "d")}
    assert star(t0, []) == frozenset()
    assert star(t0, ["vA", "vB"]) == {("a", "b")}
    with pytest.raises(UnknownView):
        star(t0, ["vZ"])


def test_is_history(t0):
    assert is_history(t0, "g 1 a 1 e 1 c 0 h".split())
    assert is_history(t0, ["a"])
    # a's 0-successor is g
    assert t0.succ("a", "0") == ("g",)
    assert not is_history(t0, ["a", 0, "e"])
    with pytest.raises(MalformedSequence):
        is_history(t0, ["a", "0"])
    with pytest.raises(MalformedSequence):
        is_history(t0, [])


def test_histories_indistinguishable(t0):
    assert histories_indistinguishable(t0, ["a", 0, "g"], ["b", 0, "g"])
    assert not histories_indistinguishable(t0, ["a", 0, "g"], ["a", 1, "e"])
    assert not histories_indistinguishable(t0, ["a"], ["c"])
    with pytest.raises(NotAHistory):
        histories_indistinguishable(t0, ["a", 0, "e"], ["a", 0, "g"])


def test_truncate_history():
    # view b names class [e], as in the worked example
    T = parse_system(format_system(load_t0_with_view_b_on_e()))
    h = History.from_sequence("g 1 a 1 e 1 c 0 h".split())
    assert truncate_history(T, h, ["b"]).to_sequence() == tuple("e 1 c 0 h".split())
    assert truncate_history(T, ["g", 1, "a"], ["vG"]).to_sequence() == ("g", "1", "a")
    assert truncate_history(T, ["g", 1, "a"], ["b"]).to_sequence() == ("a",)


def load_t0_with_view_b_on_e():
    from navlogic.testkit import load_t0

    t0 = load_t0()
    return TransitionSystem.build(
        t0.states, t0.instructions,
        [(s, i, d) for (s, i), d in t0.transitions],
        obs=t0.classes, views=list({"vG": "g", "b": "e"}.items()),
    )


def _histories(T, max_len):
    out = [History(w) for w in T.states]
    frontier = list(out)
    for _ in range(max_len):
        nxt = []
        for h in frontier:
            for i in T.instructions:
                for w in T.succ(h.head, i):
                    nxt.append(History(h.start, h.steps + ((i, w),)))
        out += nxt
        frontier = nxt
    return out


SMALL_PARAMS = SystemParams(max_states=5, max_instructions=2, max_classes=3)


@pytest.mark.parametrize("seed", range(6))
def test_history_properties_exhaustive(seed):
    T = random_system(seed, SMALL_PARAMS)
    hs = _histories(T, 3)
    by_shape = {}
    for h in hs:
        by_shape.setdefault((len(h), h.instructions), []).append(h)
    for group in by_shape.values():
        for h1, h2 in itertools.product(group, repeat=2):
            same = histories_indistinguishable(T, h1, h2)
            assert same == histories_indistinguishable(T, h2, h1)
            if same:
                assert class_sequence(T, h1) == class_sequence(T, h2)
                for v in T.view_names:
                    assert histories_indistinguishable(
                        T, truncate_history(T, h1, [v]), truncate_history(T, h2, [v])
                    )
        assert all(histories_indistinguishable(T, h, h) for h in group)
    for h in hs:
        assert all(is_history(T, h.prefix(n)) for n in range(len(h) + 1))
        for v in T.view_names:
            t = truncate_history(T, h, [v])
            assert is_history(T, t)
            assert h.to_sequence()[-len(t.to_sequence()):] == t.to_sequence()


def test_indistinguishability_transitive_on_small_system():
    T = parse_system(SMALL)
    hs = _histories(T, 3)
    for h1, h2, h3 in itertools.product(hs[:40], repeat=3):
        if histories_indistinguishable(T, h1, h2) and histories_indistinguishable(T, h2, h3):
            assert histories_indistinguishable(T, h1, h3)
