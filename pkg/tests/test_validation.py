"""Schema-gate oracle table: hand-written verdicts for (schema, args) pairs."""

import pytest

from agentkit.errors import SchemaViolation
from agentkit.toolreg import validate_args

S_INT = {"type": "object", "properties": {"x": {"type": "integer"}}, "required": ["x"]}
S_NUM = {"type": "object", "properties": {"v": {"type": "number"}}, "required": ["v"]}
S_STR = {"type": "object", "properties": {"s": {"type": "string"}}, "required": ["s"]}
S_BOOL = {"type": "object", "properties": {"b": {"type": "boolean"}}, "required": ["b"]}
S_ENUM = {
    "type": "object",
    "properties": {"mode": {"type": "string", "enum": ["fast", "slow"]}},
    "required": ["mode"],
}
S_ENUM_NUM = {
    "type": "object",
    "properties": {"n": {"enum": [1, 2, 3]}},
    "required": ["n"],
}
S_ARR = {
    "type": "object",
    "properties": {"items": {"type": "array", "items": {"type": "integer"}}},
    "required": ["items"],
}
S_NESTED = {
    "type": "object",
    "properties": {
        "point": {
            "type": "object",
            "properties": {"x": {"type": "number"}, "y": {"type": "number"}},
            "required": ["x", "y"],
        }
    },
    "required": ["point"],
}
S_OPT = {
    "type": "object",
    "properties": {"a": {"type": "string"}, "b": {"type": "integer"}},
    "required": ["a"],
}
S_EMPTY = {"type": "object", "properties": {}}
S_MOVE = {
    "type": "object",
    "properties": {"dx": {"type": "number"}, "dy": {"type": "number"}},
    "required": ["dx", "dy"],
}

# (schema, args, accept, pointer-of-first-failure-or-None)
ORACLE_TABLE = [
    (S_INT, {"x": 3}, True, None),
    (S_INT, {"x": -17}, True, None),
    (S_INT, {"x": 3.0}, True, None),       # integral float is an integer in JSON
    (S_INT, {"x": 3.5}, False, "/x"),
    (S_INT, {"x": "3"}, False, "/x"),
    (S_INT, {"x": True}, False, "/x"),     # bool is not an integer
    (S_INT, {}, False, "/x"),
    (S_INT, {"x": 3, "y": 1}, False, "/y"),
    (S_INT, {"x": None}, False, "/x"),
    (S_INT, {"x": [3]}, False, "/x"),
    (S_NUM, {"v": 1.5}, True, None),
    (S_NUM, {"v": 2}, True, None),         # integer accepted for number
    (S_NUM, {"v": True}, False, "/v"),
    (S_NUM, {"v": "1.5"}, False, "/v"),
    (S_NUM, {}, False, "/v"),
    (S_STR, {"s": "hello"}, True, None),
    (S_STR, {"s": ""}, True, None),
    (S_STR, {"s": 5}, False, "/s"),
    (S_STR, {"s": None}, False, "/s"),
    (S_STR, {"s": ["a"]}, False, "/s"),
    (S_BOOL, {"b": True}, True, None),
    (S_BOOL, {"b": False}, True, None),
    (S_BOOL, {"b": 1}, False, "/b"),
    (S_BOOL, {"b": "true"}, False, "/b"),
    (S_ENUM, {"mode": "fast"}, True, None),
    (S_ENUM, {"mode": "slow"}, True, None),
    (S_ENUM, {"mode": "medium"}, False, "/mode"),
    (S_ENUM, {"mode": 1}, False, "/mode"),
    (S_ENUM, {}, False, "/mode"),
    (S_ENUM_NUM, {"n": 2}, True, None),
    (S_ENUM_NUM, {"n": 2.0}, True, None),  # numeric equality across int/float
    (S_ENUM_NUM, {"n": 4}, False, "/n"),
    (S_ENUM_NUM, {"n": True}, False, "/n"),  # bool never equals enum number
    (S_ARR, {"items": []}, True, None),
    (S_ARR, {"items": [1, 2, 3]}, True, None),
    (S_ARR, {"items": [1, "2"]}, False, "/items/1"),
    (S_ARR, {"items": "not-a-list"}, False, "/items"),
    (S_ARR, {"items": [1, 2, 3.5]}, False, "/items/2"),
    (S_NESTED, {"point": {"x": 1, "y": 2}}, True, None),
    (S_NESTED, {"point": {"x": 1}}, False, "/point/y"),
    (S_NESTED, {"point": {"x": 1, "y": 2, "z": 3}}, False, "/point/z"),
    (S_NESTED, {"point": [1, 2]}, False, "/point"),
    (S_NESTED, {}, False, "/point"),
    (S_OPT, {"a": "x"}, True, None),
    (S_OPT, {"a": "x", "b": 2}, True, None),
    (S_OPT, {"b": 2}, False, "/a"),
    (S_OPT, {"a": "x", "b": "2"}, False, "/b"),
    (S_OPT, {"a": "x", "c": 1}, False, "/c"),
    (S_EMPTY, {}, True, None),
    (S_EMPTY, {"anything": 1}, False, "/anything"),
    (S_MOVE, {"dx": 10, "dy": -5}, True, None),
    (S_MOVE, {"dx": 10.5, "dy": 0}, True, None),
    (S_MOVE, {"dx": 10}, False, "/dy"),
    (S_MOVE, {"dx": "10", "dy": 0}, False, "/dx"),
    (S_MOVE, {"dx": 1, "dy": 2, "dz": 3}, False, "/dz"),
]


@pytest.mark.parametrize("schema,args,accept,pointer", ORACLE_TABLE)
def test_oracle_table(schema, args, accept, pointer):
    if accept:
        assert validate_args(schema, args) == args
    else:
        with pytest.raises(SchemaViolation) as excinfo:
            validate_args(schema, args)
        assert excinfo.value.path == pointer


def test_non_object_instance():
    with pytest.raises(SchemaViolation) as excinfo:
        validate_args(S_INT, ["not", "an", "object"])
    assert excinfo.value.path == ""


def test_pointer_escaping():
    schema = {"type": "object", "properties": {"a/b": {"type": "string"}}}
    with pytest.raises(SchemaViolation) as excinfo:
        validate_args(schema, {"a/b": 1})
    assert excinfo.value.path == "/a~1b"


def test_table_is_large_enough():
    assert len(ORACLE_TABLE) >= 50
