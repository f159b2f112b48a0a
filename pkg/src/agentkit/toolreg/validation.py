"""Argument validation against the supported JSON Schema subset.

Supported keywords: object roots with `properties`, `required`, `enum`,
`items` for arrays, and scalar types string/number/integer/boolean. Checks
run in a fixed order so the first reported failure is deterministic:

    1. the instance is an object (for object schemas)
    2. required properties, in the schema's `required` order
    3. declared properties, in schema `properties` order (type, enum, nested)
    4. undeclared properties, in instance order (strict mode: rejected)

Failures carry the JSON pointer of the offending location. Integers are
accepted where numbers are expected, and floats with integral value where
integers are expected (JSON has one number kind); booleans are neither.
"""

from __future__ import annotations

from typing import Any

from agentkit.errors import SchemaViolation


def _escape(token: str) -> str:
    return token.replace("~", "~0").replace("/", "~1")


def _json_equal(a: Any, b: Any) -> bool:
    # bool is an int subclass in Python; JSON treats them as distinct types.
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    if isinstance(a, bool):
        return a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return a == b
    return type(a) is type(b) and a == b


def _check_type(value: Any, expected: str, path: str) -> None:
    ok = True
    if expected == "string":
        ok = isinstance(value, str)
    elif expected == "boolean":
        ok = isinstance(value, bool)
    elif expected == "integer":
        ok = (isinstance(value, int) and not isinstance(value, bool)) or (
            isinstance(value, float) and value.is_integer()
        )
    elif expected == "number":
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif expected == "array":
        ok = isinstance(value, list)
    elif expected == "object":
        ok = isinstance(value, dict)
    if not ok:
        raise SchemaViolation(
            f"expected {expected} at {path or '/'}, got {type(value).__name__}",
            path=path,
        )


def _validate_value(schema: dict, value: Any, path: str) -> None:
    expected = schema.get("type")
    if expected is not None:
        _check_type(value, expected, path)
    if "enum" in schema:
        if not any(_json_equal(value, option) for option in schema["enum"]):
            raise SchemaViolation(
                f"value at {path or '/'} is not one of {schema['enum']!r}",
                path=path,
            )
    if expected == "object" or ("properties" in schema and isinstance(value, dict)):
        _validate_object(schema, value, path)
    if expected == "array" and "items" in schema:
        for i, item in enumerate(value):
            _validate_value(schema["items"], item, f"{path}/{i}")


def _validate_object(schema: dict, instance: Any, path: str) -> None:
    if not isinstance(instance, dict):
        raise SchemaViolation(
            f"expected object at {path or '/'}, got {type(instance).__name__}",
            path=path,
        )
    properties = schema.get("properties", {})
    for key in schema.get("required", []):
        if key not in instance:
            raise SchemaViolation(
                f"missing required property {key!r}", path=f"{path}/{_escape(key)}"
            )
    for key, prop_schema in properties.items():
        if key in instance:
            _validate_value(prop_schema, instance[key], f"{path}/{_escape(key)}")
    for key in instance:
        if key not in properties:
            raise SchemaViolation(
                f"unknown property {key!r}", path=f"{path}/{_escape(key)}"
            )


def validate_args(descriptor_or_schema, args: dict) -> dict:
    """Validate args against a tool's input schema; returns the args.

    Raises SchemaViolation carrying the JSON pointer of the first failure.
    """
    schema = getattr(descriptor_or_schema, "input_schema", descriptor_or_schema)
    _validate_object(schema, args, "")
    return args
