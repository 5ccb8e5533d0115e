"""Dataclass experiment configs exposed as command-line options."""

from __future__ import annotations

import argparse
import dataclasses
import typing


def _parser_for(tp):
    origin = typing.get_origin(tp)
    if origin in (list, tuple):
        (inner, *_) = typing.get_args(tp) or (str,)
        return lambda text: [_parser_for(inner)(x) for x in text.split(",") if x.strip()]
    if tp is bool:
        return lambda text: text.lower() in ("1", "true", "yes", "on")
    return tp


def parse_config(cls, argv=None, description: str = None):
    """Build a ``cls`` instance from defaults overridden by ``--field value`` options.

    List fields take comma-separated values, booleans take true/false.
    """
    hints = typing.get_type_hints(cls)
    ap = argparse.ArgumentParser(description=description or (cls.__doc__ or "").strip())
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        ap.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, type=_parser_for(hints[f.name]),
                        default=default, help=f"default: {default!r}")
    return cls(**vars(ap.parse_args(argv)))
