import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import max_complete_area
from trustspectra import (
    DenseTrustMatrix,
    MissingCellError,
    ScoreTable,
    TrustDataError,
    TrustGraph,
    TrustStatement,
    extract_block,
    greedy_complete_block,
    merge_trustees,
    parse_scores,
)
from trustspectra.model import ingest_scores

TABLE1_WIDE = """,a,b,c,d,e
i,1.25,1.05,1.12,1.57,
j,.83,1.13,1.02,.35,.18
k,0,.35,.21,-.56,1.02
l,-.12,,,,.98
"""

EXAMPLE_M = [[1.25, 1.05, 1.12, 1.57], [.83, 1.13, 1.02, .35], [0, .35, .21, -.56]]


def test_ingest_table1(table1):
    assert table1.rows == ("i", "j", "k", "l")
    assert table1.cols == ("a", "b", "c", "d", "e")
    assert len(table1) == 16
    assert [table1.filled_in_row(r) for r in table1.rows] == [4, 5, 5, 2]


def test_zero_rating_is_kept_and_missing_is_absent(table1):
    assert table1.cells[("k", "a")] == 0.0
    assert ("i", "e") not in table1.cells
    assert ("l", "b") not in table1.cells


def test_headers_only_document():
    table = parse_scores(",a,b\n")
    assert table.cols == ("a", "b")
    assert len(table) == 0


@pytest.mark.parametrize("bad", ["NaN", "nan", "inf", "-Infinity"])
def test_non_finite_value_rejected(bad):
    with pytest.raises(TrustDataError, match="non-finite"):
        parse_scores(f",a,b\ni,{bad},1\n")


@pytest.mark.parametrize(
    "doc",
    [
        ",a\ni,1\ni,2\n",                                   # duplicate row
        ",a,a\ni,1,2\n",                                    # duplicate column
        ",a\ni,x\n",                                        # not a number
        ",a\ni,1,2\n",                                      # too many cells
        "trustor,trustee,rating\na,i,1\na,i,2\n",           # duplicate long cell
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(TrustDataError):
        parse_scores(doc)


def test_formats_agree(table1):
    long_csv = "trustor,trustee,rating\n" + "".join(
        f"{c},{r},{v}\n" for (r, c), v in table1.cells.items()
    )
    from_long = parse_scores(long_csv)
    from_json = parse_scores(json.dumps(table1.to_json()))
    from_wide = parse_scores(TABLE1_WIDE)
    for other in (from_long, from_json, from_wide):
        assert dict(other.cells) == dict(table1.cells)
    assert from_json.rows == table1.rows and from_json.cols == table1.cols


def test_json_schema_errors():
    with pytest.raises(TrustDataError):
        parse_scores('{"subjects": ["a"], "objects": ["i"]}', "json")
    with pytest.raises(TrustDataError):
        parse_scores('{"subjects": ["a"], "objects": ["i"], "cells": [{"trustee": "i"}]}', "json")
    with pytest.raises(TrustDataError, match="undeclared"):
        parse_scores(
            '{"subjects": ["a"], "objects": ["i"],'
            ' "cells": [{"trustee": "x", "trustor": "a", "rating": 1}]}'
        )


def test_ingest_from_path_and_file_object(tmp_path, table1):
    path = tmp_path / "scores.json"
    path.write_text(json.dumps(table1.to_json()))
    assert dict(ingest_scores(path).cells) == dict(table1.cells)
    assert dict(ingest_scores(io.StringIO(TABLE1_WIDE)).cells) == dict(table1.cells)


def test_wide_csv_round_trip(table1):
    again = parse_scores(table1.to_wide_csv())
    assert dict(again.cells) == dict(table1.cells)


def test_graph_round_trip(table1):
    graph = table1.to_graph()
    assert len(graph.edges) == 16
    assert dict(graph.to_table().cells) == dict(table1.cells)


def test_graph_invariants():
    with pytest.raises(TrustDataError):
        TrustGraph(("a",), ("i",), {TrustStatement("b", "i", 1.0)})
    dup = {TrustStatement("a", "i", 1.0, "x"), TrustStatement("a", "i", 2.0, "x")}
    with pytest.raises(TrustDataError):
        TrustGraph(("a",), ("i",), dup)
    two_labels = TrustGraph(("a",), ("i",), {TrustStatement("a", "i", 1.0, "x"),
                                            TrustStatement("a", "i", 2.0, "y")})
    with pytest.raises(TrustDataError):
        two_labels.to_table()
    with pytest.raises(TrustDataError):
        TrustStatement("a", "i", float("nan"))


def test_extract_worked_example_block(table1):
    m = extract_block(table1, ["i", "j", "k"], ["a", "b", "c", "d"])
    np.testing.assert_array_equal(m.values, EXAMPLE_M)
    assert m.rows == ("i", "j", "k")


def test_extract_respects_order(table1):
    m = extract_block(table1, ["k", "i"], ["d", "a"])
    np.testing.assert_array_equal(m.values, [[-.56, 0], [1.57, 1.25]])


def test_extract_single_cell(table1):
    m = extract_block(table1, ["i"], ["a"])
    assert m.values.tolist() == [[1.25]]


def test_extract_names_first_missing_cell(table1):
    with pytest.raises(MissingCellError, match=r"cell \(i,e\) missing") as info:
        extract_block(table1, ["i", "j", "k", "l"], ["a", "b", "c", "d", "e"])
    assert (info.value.obj, info.value.subj) == ("i", "e")


def test_extract_unknown_id(table1):
    with pytest.raises(TrustDataError, match="unknown"):
        extract_block(table1, ["zz"], ["a"])


def test_greedy_block_table1(table1):
    rows, cols = greedy_complete_block(table1)
    assert (rows, cols) == (["i", "j", "k"], ["a", "b", "c", "d"])
    assert len(rows) * len(cols) == max_complete_area(table1.rows, table1.cols, set(table1.cells))


def test_greedy_block_dense_and_single():
    dense = ScoreTable(("x", "y"), ("p", "q"), {("x", "p"): 1, ("x", "q"): 2, ("y", "p"): 3,
                                                ("y", "q"): 4})
    assert greedy_complete_block(dense) == (["x", "y"], ["p", "q"])
    single = ScoreTable(("x", "y"), ("p", "q"), {("y", "q"): 7.0})
    assert greedy_complete_block(single) == (["y"], ["q"])


def test_greedy_block_empty_table():
    with pytest.raises(TrustDataError, match="no non-empty"):
        greedy_complete_block(ScoreTable(("x",), ("p",), {}))


def test_merge_acquisition(example_block):
    merged = merge_trustees(example_block, ["i", "j"], "ij")
    assert merged.rows == ("ij", "k")
    np.testing.assert_allclose(merged.values[0], [1.04, 1.09, 1.07, .96], atol=1e-12)
    np.testing.assert_array_equal(merged.values[1], example_block.values[2])


def test_merge_places_row_at_first_member(example_block):
    merged = merge_trustees(example_block, ["k", "j"], "jk")
    assert merged.rows == ("i", "jk")


def test_merge_identical_rows():
    m = DenseTrustMatrix(("x", "y", "z"), ("p", "q"), [[1, 2], [1, 2], [5, 6]])
    np.testing.assert_array_equal(merge_trustees(m, ["x", "y"], "xy").values, [[1, 2], [5, 6]])


@pytest.mark.parametrize(
    "group,new_id",
    [(["i"], "n"), (["i", "zz"], "n"), (["i", "j"], "k"), (["i", "i"], "n")],
)
def test_merge_errors(example_block, group, new_id):
    with pytest.raises(TrustDataError):
        merge_trustees(example_block, group, new_id)


def test_dense_matrix_invariants():
    with pytest.raises(TrustDataError):
        DenseTrustMatrix(("x",), ("p",), [[np.nan]])
    with pytest.raises(TrustDataError):
        DenseTrustMatrix(("x", "x"), ("p",), [[1], [2]])
    with pytest.raises(TrustDataError):
        DenseTrustMatrix(("x",), ("p", "q"), [[1]])
    m = DenseTrustMatrix(("x",), ("p",), [[1.0]])
    with pytest.raises(ValueError):
        m.values[0, 0] = 2.0


# -- properties --------------------------------------------------------------

ratings = st.floats(-5, 5, allow_nan=False, width=32)


@st.composite
def score_tables(draw):
    n_rows = draw(st.integers(1, 5))
    n_cols = draw(st.integers(1, 5))
    rows = tuple(f"o{i}" for i in range(n_rows))
    cols = tuple(f"s{j}" for j in range(n_cols))
    cells = {}
    for r in rows:
        for c in cols:
            if draw(st.booleans()):
                cells[(r, c)] = draw(ratings)
    return ScoreTable(rows, cols, cells)


@settings(max_examples=200, deadline=None)
@given(score_tables())
def test_greedy_block_always_extracts(table):
    if not len(table):
        with pytest.raises(TrustDataError):
            greedy_complete_block(table)
        return
    rows, cols = greedy_complete_block(table)
    m = extract_block(table, rows, cols)
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            assert m.values[i, j] == table.cells[(r, c)]
    assert m.values.size <= max_complete_area(table.rows, table.cols, set(table.cells))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(1, 4), st.data())
def test_merge_shape(n_rows, n_cols, data):
    values = data.draw(st.lists(st.lists(ratings, min_size=n_cols, max_size=n_cols),
                                min_size=n_rows, max_size=n_rows))
    m = DenseTrustMatrix.from_array(values, [f"o{i}" for i in range(n_rows)])
    size = data.draw(st.integers(2, n_rows))
    group = data.draw(st.permutations(m.rows))[:size]
    merged = merge_trustees(m, group, "merged")
    assert merged.shape == (n_rows - size + 1, n_cols)
