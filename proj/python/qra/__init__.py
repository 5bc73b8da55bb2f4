"""Finite DInFL-algebras, quasi relation algebras and their frames.

Algebras and frames are plain dicts in the same JSON layout the command line
tool reads and writes.
"""

import json

from . import _core
from ._core import (
    BudgetExceeded,
    InternalError,
    NotFound,
    PreconditionError,
    SignatureError,
    StructuralError,
)


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def validate_algebra(algebra):
    return json.loads(_core.validate_algebra(_dump(algebra)))


def validate_frame(frame):
    return json.loads(_core.validate_frame(_dump(frame)))


def classify(algebra):
    return json.loads(_core.classify(_dump(algebra)))


def complex_algebra(frame):
    return json.loads(_core.complex_algebra(_dump(frame)))


def dual_frame(algebra):
    return json.loads(_core.dual_frame(_dump(algebra)))


def roundtrip_algebra(algebra):
    return _core.roundtrip_algebra(_dump(algebra))


def roundtrip_frame(frame):
    return _core.roundtrip_frame(_dump(frame))


def algebra_iso(a, b):
    return _core.algebra_iso(_dump(a), _dump(b))


def frame_iso(a, b):
    return _core.frame_iso(_dump(a), _dump(b))


def enumerate_homs(a, b):
    return _core.enumerate_homs(_dump(a), _dump(b))


def enumerate_frames(poset, signature="dqra"):
    return [json.loads(f) for f in _core.enumerate_frames(poset, signature)]


def count_algebras(n):
    return _core.count_algebras(n)


def catalog(max_size=6):
    return json.loads(_core.catalog(max_size))


def bundled_frame_names():
    return _core.bundled_frame_names()


def bundled_frame(name):
    return json.loads(_core.bundled_frame(name))


def gen_prime_filters(algebra):
    return _core.gen_prime_filters(_dump(algebra))


def priestley_roundtrip(algebra):
    return _core.priestley_roundtrip(_dump(algebra))


def no_finite_rep_filter(algebra):
    return _core.no_finite_rep_filter(_dump(algebra))


def represent(algebra, max_points=2, full_E_only=False, alpha_id_only=False, use_filter=True):
    return json.loads(_core.represent(_dump(algebra), max_points, full_E_only, alpha_id_only, use_filter))


def verify_certificate(algebra, certificate):
    return json.loads(_core.verify_certificate(_dump(algebra), _dump(certificate)))


def family(index):
    return _core.family(index)


def subreduct(index):
    s = _core.subreduct(index)
    return None if s is None else json.loads(s)
