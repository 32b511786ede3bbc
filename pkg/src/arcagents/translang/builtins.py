"""The builtin table: every helper a transform program may call.

Grid and object helpers dispatch straight to the library functions so
sandboxed calls behave identically to direct calls. Library errors map
onto the structured taxonomy: out-of-range coordinates become
index_range (catchable as IndexError), every other rule violation is a
domain error.
"""

import copy as _copy

from .. import gridops, objects
from .errors import ExecError

ITERABLE_TYPES = (list, tuple, str, dict, range)


def _map_exception(name: str, exc: Exception) -> ExecError:
    if isinstance(exc, gridops.BadCoords):
        return ExecError("index_range", exc.message)
    if isinstance(exc, gridops.GridOpError):
        return ExecError("domain", exc.message)
    if isinstance(exc, TypeError):
        return ExecError("type_mismatch", f"bad arguments to {name}(): {exc}")
    if isinstance(exc, (IndexError, KeyError)):
        return ExecError("index_range", f"{name}(): {exc}")
    if isinstance(exc, ValueError):
        return ExecError("domain", f"{name}(): {exc}")
    if isinstance(exc, ZeroDivisionError):
        return ExecError("domain", "integer division or modulo by zero")
    if isinstance(exc, RecursionError):
        return ExecError("domain", f"{name}(): input is nested too deeply")
    return ExecError("domain", f"{name}(): {exc}")


def check_grid(name: str, value) -> None:
    if (
        not isinstance(value, list)
        or not value
        or not all(isinstance(row, list) and row for row in value)
        or len({len(row) for row in value}) != 1
        or not all(isinstance(c, str) and len(c) == 1 for row in value for c in row)
    ):
        raise ExecError(
            "type_mismatch",
            f"{name}() expects a rectangular grid of single-character cells",
        )


def check_object(name: str, value) -> None:
    if not isinstance(value, dict) or "tl" not in value or "grid" not in value:
        raise ExecError(
            "type_mismatch", f"{name}() expects an object record with 'tl' and 'grid'"
        )
    check_grid(name, value["grid"])


def _wrap(fn, grid_params=(), object_params=()):
    name = fn.__name__

    def call(interp, node, args, kwargs):
        for idx in grid_params:
            if idx < len(args):
                check_grid(name, args[idx])
        for idx in object_params:
            if idx < len(args):
                check_object(name, args[idx])
        try:
            return fn(*args, **kwargs)
        except ExecError:
            raise
        except Exception as exc:
            raise _map_exception(name, exc) from None

    return call


def _materialize(interp, name: str, value):
    if not isinstance(value, ITERABLE_TYPES):
        raise ExecError("type_mismatch", f"{name}() expects an iterable, got {type(value).__name__}")
    if isinstance(value, (range, str)) and len(value) > interp.limits.max_collection:
        raise ExecError("domain", f"{name}(): sequence longer than {interp.limits.max_collection}")
    return list(value)


def _key_function(interp, key):
    if key is None:
        return None
    caller = interp.make_callable(key)
    if caller is None:
        raise ExecError("type_mismatch", "key= must be a lambda")
    return caller


def _builtin_len(interp, node, args, kwargs):
    if kwargs or len(args) != 1:
        raise ExecError("type_mismatch", "len() takes exactly one argument")
    value = args[0]
    if not isinstance(value, ITERABLE_TYPES):
        raise ExecError("type_mismatch", f"len() not supported for {type(value).__name__}")
    return len(value)


def _builtin_range(interp, node, args, kwargs):
    if kwargs or not 1 <= len(args) <= 3:
        raise ExecError("type_mismatch", "range() takes one to three integer arguments")
    if not all(isinstance(a, int) and not isinstance(a, bool) for a in args):
        raise ExecError("type_mismatch", "range() arguments must be integers")
    if len(args) == 3 and args[2] == 0:
        raise ExecError("domain", "range() step must not be zero")
    return range(*args)


def _builtin_enumerate(interp, node, args, kwargs):
    if kwargs or not 1 <= len(args) <= 2:
        raise ExecError("type_mismatch", "enumerate() takes an iterable and an optional start")
    items = _materialize(interp, "enumerate", args[0])
    start = args[1] if len(args) == 2 else 0
    if not isinstance(start, int) or isinstance(start, bool):
        raise ExecError("type_mismatch", "enumerate() start must be an integer")
    return [(start + i, item) for i, item in enumerate(items)]


def _builtin_sorted(interp, node, args, kwargs):
    if len(args) != 1:
        raise ExecError("type_mismatch", "sorted() takes exactly one iterable")
    extra = dict(kwargs)
    key = _key_function(interp, extra.pop("key", None))
    reverse = extra.pop("reverse", False)
    if extra:
        raise ExecError("type_mismatch", f"sorted() got unexpected keyword {next(iter(extra))!r}")
    if not isinstance(reverse, bool):
        raise ExecError("type_mismatch", "sorted() reverse= must be True or False")
    items = _materialize(interp, "sorted", args[0])
    try:
        return sorted(items, key=key, reverse=reverse)
    except TypeError as exc:
        raise ExecError("type_mismatch", f"sorted(): {exc}") from None


def _min_max(pyfn, name):
    def call(interp, node, args, kwargs):
        extra = dict(kwargs)
        key = _key_function(interp, extra.pop("key", None))
        if extra:
            raise ExecError("type_mismatch", f"{name}() got unexpected keyword {next(iter(extra))!r}")
        if len(args) == 1:
            values = _materialize(interp, name, args[0])
        elif len(args) >= 2:
            values = list(args)
        else:
            raise ExecError("type_mismatch", f"{name}() needs an iterable or several values")
        if not values:
            raise ExecError("domain", f"{name}() of an empty sequence")
        try:
            return pyfn(values, key=key) if key else pyfn(values)
        except TypeError as exc:
            raise ExecError("type_mismatch", f"{name}(): {exc}") from None

    return call


def _builtin_abs(interp, node, args, kwargs):
    if kwargs or len(args) != 1 or not isinstance(args[0], int) or isinstance(args[0], bool):
        raise ExecError("type_mismatch", "abs() takes exactly one integer")
    return abs(args[0])


def _builtin_copy(interp, node, args, kwargs):
    if kwargs or len(args) != 1:
        raise ExecError("type_mismatch", "copy() takes exactly one argument")
    return _copy.deepcopy(args[0])


def default_builtins() -> dict:
    table = {
        "get_size": _wrap(gridops.get_size, grid_params=(0,)),
        "empty_grid": _wrap(gridops.empty_grid),
        "crop_grid": _wrap(gridops.crop_grid, grid_params=(0,)),
        "tight_fit": _wrap(gridops.tight_fit, grid_params=(0,)),
        "combine_object": _wrap(gridops.combine_object, object_params=(0, 1)),
        "rotate_clockwise": _wrap(gridops.rotate_clockwise, grid_params=(0,)),
        "horizontal_flip": _wrap(gridops.horizontal_flip, grid_params=(0,)),
        "vertical_flip": _wrap(gridops.vertical_flip, grid_params=(0,)),
        "replace": _wrap(gridops.replace, grid_params=(0, 1, 2)),
        "get_object_color": _wrap(gridops.get_object_color, object_params=(0,)),
        "change_object_color": _wrap(gridops.change_object_color, object_params=(0,)),
        "fill_object": _wrap(gridops.fill_object, grid_params=(0,), object_params=(1,)),
        "fill_row": _wrap(gridops.fill_row, grid_params=(0,)),
        "fill_col": _wrap(gridops.fill_col, grid_params=(0,)),
        "fill_between_coords": _wrap(gridops.fill_between_coords, grid_params=(0,)),
        "fill_rect": _wrap(gridops.fill_rect, grid_params=(0,)),
        "fill_value": _wrap(gridops.fill_value, grid_params=(0,)),
        "object_contains_color": _wrap(gridops.object_contains_color, object_params=(0,)),
        "on_same_line": _wrap(gridops.on_same_line),
        "get_objects": _wrap(objects.get_objects, grid_params=(0,)),
        "get_pixel_coords": _wrap(objects.get_pixel_coords, grid_params=(0,)),
        "len": _builtin_len,
        "range": _builtin_range,
        "enumerate": _builtin_enumerate,
        "sorted": _builtin_sorted,
        "min": _min_max(min, "min"),
        "max": _min_max(max, "max"),
        "abs": _builtin_abs,
        "copy": _builtin_copy,
    }
    return table


BUILTIN_NAMES = frozenset(default_builtins())
