"""Unit tests for the JSON instance format."""

import pytest

from corpus import ground, k3
from polybase import ParseError, materialize, parse_fn, parse_instance


def table_doc():
    return {
        "ground": ["a", "b"],
        "f": {
            "type": "table",
            "values": {"a": 1, "b": 1, "a,b": 1},
        },
        "w": [1, 1],
        "k": 2,
    }


class TestParseInstance:
    def test_table_with_defaulted_empty_set(self):
        inst = parse_instance(table_doc())
        assert inst.fn(0) == 0
        assert inst.fn(0b11) == 1
        assert inst.w == (1, 1)
        assert inst.k == 2

    def test_explicit_empty_key(self):
        doc = table_doc()
        doc["f"]["values"][""] = 0
        assert parse_instance(doc).fn(0) == 0

    def test_missing_subset_key(self):
        doc = table_doc()
        del doc["f"]["values"]["a,b"]
        with pytest.raises(ParseError, match="missing"):
            parse_instance(doc)

    def test_non_canonical_key(self):
        doc = table_doc()
        doc["f"]["values"]["b,a"] = 1
        with pytest.raises(ParseError, match="canonical"):
            parse_instance(doc)

    def test_unknown_node_type(self):
        doc = table_doc()
        doc["f"] = {"type": "mystery"}
        with pytest.raises(ParseError, match="unknown"):
            parse_instance(doc)

    def test_w_length_checked(self):
        doc = table_doc()
        doc["w"] = [1]
        with pytest.raises(ParseError, match="length"):
            parse_instance(doc)

    def test_non_integer_value(self):
        doc = table_doc()
        doc["f"]["values"]["a"] = 1.5
        with pytest.raises(ParseError, match="integer"):
            parse_instance(doc)

    def test_duplicate_ground_names(self):
        doc = table_doc()
        doc["ground"] = ["a", "a"]
        with pytest.raises(ParseError, match="distinct"):
            parse_instance(doc)


class TestNodeKinds:
    def test_uniform(self):
        f = parse_fn(ground(3), {"type": "uniform", "rank": 2})
        assert f(0b111) == 2

    def test_partition(self):
        f = parse_fn(
            ground(4),
            {"type": "partition", "blocks": [["a", "b"], ["c", "d"]], "caps": [1, 1]},
        )
        assert f(0b1111) == 2
        assert f(0b0011) == 1

    def test_graphic(self):
        f = parse_fn(
            ground(3),
            {"type": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]]},
        )
        assert [f(m) for m in range(8)] == [k3()(m) for m in range(8)]

    def test_nested_wrappers(self):
        node = {
            "type": "scale",
            "r": 2,
            "inner": {
                "type": "shift",
                "a": [1, 0, -1],
                "inner": {
                    "type": "dual",
                    "inner": {"type": "uniform", "rank": 2},
                },
            },
        }
        f = parse_fn(ground(3), node)
        expect = ground(3)
        from polybase import UniformRank

        reference = UniformRank(expect, 2).dual().shift((1, 0, -1)).scale(2)
        assert all(f(m) == reference(m) for m in range(8))

    def test_reduce_and_reduce_at(self):
        f = parse_fn(
            ground(2),
            {"type": "reduce", "a": [0, 1], "inner": {"type": "uniform", "rank": 1}},
        )
        g = parse_fn(
            ground(2),
            {"type": "reduce_at", "e": "a", "c": 0,
             "inner": {"type": "uniform", "rank": 1}},
        )
        assert f(0b11) == 1
        assert g(0b01) == 0

    def test_round_trip_through_node_dict(self):
        f = materialize(k3().dual().shift((1, 1, 1)))
        doc = f.to_node_dict()
        again = parse_fn(ground(3), doc)
        assert all(again(m) == f(m) for m in range(8))
