import enum
import inspect
import typing

import numpy as np

from ._errors import ParsingError


def to_dict(
    value: typing.Any, data: dict, option: str, write_null: bool = False, **kwargs
):
    """Write `value` into `data[option]`

    Objects with a ``to_dict`` method are converted with it, enum members are
    written as their value, numpy arrays and scalars as plain Python objects.
    ``None`` is skipped unless `write_null` is True.
    """
    if value is not None:
        members = [x[0] for x in inspect.getmembers(value.__class__)]
        if "to_dict" in members:
            data[option] = value.to_dict(**kwargs)
        elif isinstance(value, enum.Enum):
            data[option] = value.value
        elif isinstance(value, (np.ndarray, np.generic)):
            data[option] = value.tolist()
        else:
            data[option] = value
    elif write_null:
        data[option] = None


def boolean(value: typing.Any) -> bool:
    """Accept only ``True`` or ``False``, for use as a `required_type`

    Strings such as ``"false"`` are rejected rather than converted with
    :func:`bool`.
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    raise TypeError(f"{value!r} is not a boolean")


def integer(value: typing.Any) -> int:
    """Accept only integers and integral floats, for use as a `required_type`"""
    if isinstance(value, (bool, np.bool_)):
        raise TypeError(f"{value!r} is not an integer")
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)) and float(value).is_integer():
        return int(value)
    raise TypeError(f"{value!r} is not an integer")


def number(value: typing.Any) -> float:
    """Accept only real numbers, for use as a `required_type`"""
    if isinstance(value, (bool, np.bool_)) or not isinstance(
        value, (int, float, np.integer, np.floating)
    ):
        raise TypeError(f"{value!r} is not a number")
    return float(value)


def _convert(required_type: typing.Any, value: typing.Any, **kwargs):
    members = [x[0] for x in inspect.getmembers(required_type)]
    if "from_dict" in members:
        return required_type.from_dict(value, **kwargs)
    return required_type(value)


def required_from_dict(required_type: typing.Any, data: dict, option: str, **kwargs):
    if option not in data:
        raise ParsingError(
            f"Error parsing dict: missing required '{option}' "
            f"of type '{required_type.__name__}'"
        )
    try:
        value = _convert(required_type, data.get(option), **kwargs)
    except Exception as e:
        raise ParsingError(
            f"Error parsing dict: failed converting required '{option}' "
            f"to type '{required_type.__name__}': {e}"
        ) from e
    return value


def required_array_from_dict(data: dict, option: str, dtype: typing.Any = None):
    if option not in data:
        raise ParsingError(
            f"Error parsing dict: missing required '{option}' of array-like type"
        )
    try:
        value = np.array(data.get(option), dtype=dtype)
    except Exception as e:
        raise ParsingError(
            f"Error parsing dict: failed converting required '{option}' to array"
        ) from e
    return value


def optional_from_dict(
    required_type: typing.Any,
    data: dict,
    option: str,
    default_value: typing.Any = None,
    **kwargs,
):
    value = data.get(option)
    if value is not None:
        try:
            return _convert(required_type, value, **kwargs)
        except Exception as e:
            raise ParsingError(
                f"Error parsing dict: failed converting optional '{option}' "
                f"to type '{required_type.__name__}': {e}"
            ) from e
    return default_value


def enum_from_str(enum_type: typing.Type[enum.Enum], value: typing.Any):
    """Look up an enum member by value or by name, case-insensitive

    Underscores and hyphens are treated alike, so ``"recursive_real"``,
    ``"recursive-real"`` and ``"RecursiveReal"`` all name the same member.
    """
    if isinstance(value, enum_type):
        return value

    def _key(x):
        return str(x).lower().replace("_", "").replace("-", "")

    key = _key(value)
    for member in enum_type:
        if key in (_key(member.value), _key(member.name)):
            return member
    options = [member.value for member in enum_type]
    raise ParsingError(
        f"Error parsing '{value}': not a valid {enum_type.__name__} "
        f"(options: {options})"
    )


def required_enum_from_dict(
    enum_type: typing.Type[enum.Enum],
    data: dict,
    option: str,
):
    if option not in data:
        raise ParsingError(
            f"Error parsing dict: missing required '{option}' "
            f"of type '{enum_type.__name__}'"
        )
    return enum_from_str(enum_type, data.get(option))


def optional_enum_from_dict(
    enum_type: typing.Type[enum.Enum],
    data: dict,
    option: str,
    default_value: typing.Any = None,
):
    value = data.get(option)
    if value is None:
        return default_value
    return enum_from_str(enum_type, value)
