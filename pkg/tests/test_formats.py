import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagcert.errors import InputError
from flagcert.flags import TAU, flag_family, get_type, pair_density_table
from flagcert.formats import (
    flag_from_text,
    flag_to_text,
    fmt_q,
    graph_from_text,
    graph_to_text,
    parse_q,
    read_expressions,
    read_flag_list,
    read_graph_list,
    read_matrix,
    read_pair_density,
    read_tournament_list,
    tournament_from_text,
    write_expressions,
    write_flag_list,
    write_graph_list,
    write_matrix,
    write_pair_density,
    write_tournament_list,
)
from flagcert.hypergraph import ThreeGraph, enumerate_free
from flagcert.lincomb import LinComb
from flagcert.tournaments import enumerate_tournaments


def _via(write, read, obj):
    buf = io.StringIO()
    write(buf, obj)
    buf.seek(0)
    return read(buf)


def test_graph_text():
    g = ThreeGraph(4, ((1, 2, 3), (1, 2, 4)))
    assert graph_to_text(g) == "4:123124"
    assert graph_from_text("4:123124") == g
    assert graph_from_text("5:") == ThreeGraph(5, ())
    big = ThreeGraph(12, ((1, 2, 12), (3, 10, 11)))
    assert graph_to_text(big) == "12:1,2,12;3,10,11"
    assert graph_from_text(graph_to_text(big)) == big
    for bad in ("4", "x:123", "4:12", "4:12a", "4:1,2"):
        with pytest.raises(InputError):
            graph_from_text(bad)


@given(st.fractions())
def test_rational_text_round_trip(x):
    assert parse_q(fmt_q(x)) == x


def test_rational_parse_errors():
    with pytest.raises(InputError):
        parse_q("1/0")
    with pytest.raises(InputError):
        parse_q("abc")


def test_list_round_trips():
    gs = enumerate_free(5)
    assert _via(write_graph_list, read_graph_list, gs) == gs
    flags = flag_family(get_type("sigma1"), 5).flags
    assert _via(write_flag_list, read_flag_list, flags) == flags
    ts = enumerate_tournaments(5)
    assert _via(write_tournament_list, read_tournament_list, ts) == ts
    H = np.array([[1, 1], [-1, 1]])
    assert np.array_equal(_via(write_matrix, read_matrix, H), H)


def test_flag_text_infers_type():
    f = flag_from_text("4:123|root=12")
    assert f.type == TAU and f.root == (1, 2)
    assert flag_to_text(f) == "4:123|root=12"
    assert flag_from_text("5:123124|root=1234").type.name == "sigma2"
    with pytest.raises(InputError):
        flag_from_text("4:123")


def test_pair_density_file():
    tab = pair_density_table(TAU, 3, 3)
    d = _via(write_pair_density, read_pair_density, tab)
    assert d == {("tau", a, b, g): v for (a, b, g), v in tab.as_dict().items()}


def test_expression_file():
    named = [("a", LinComb("F7", {0: Fraction(1, 3), 9: -2})), ("b", LinComb("F7"))]
    back = _via(write_expressions, read_expressions, named)
    assert back == dict(named)


def test_headers_are_checked():
    with pytest.raises(InputError, match="header"):
        read_graph_list(io.StringIO("#flagcert flags v1\n3:123\n"))
    with pytest.raises(InputError):
        read_matrix(io.StringIO("#flagcert matrix v1\n2\n1 1\n"))
    with pytest.raises(InputError):
        tournament_from_text("3:102")
