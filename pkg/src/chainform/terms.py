"""Term algebra facade.

Selects the compiled term kernel when it is importable, the pure-Python twin
otherwise.  Set ``CHAINFORM_PURE=1`` to force the fallback.  The reserved
functors are ``tuple`` (argument grouping, rendered with angle brackets) and
``cons``/``nil`` (lists).
"""

from __future__ import annotations

import os

if os.environ.get("CHAINFORM_PURE"):
    from . import _termcore_py as _kernel
else:
    try:
        from . import _termcore as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _termcore_py as _kernel

BACKEND = _kernel.BACKEND

Variable = _kernel.Variable
Constant = _kernel.Constant
Compound = _kernel.Compound
Subst = _kernel.Subst
EMPTY_SUBST = _kernel.EMPTY_SUBST

unify = _kernel.unify
match = _kernel.match
apply_subst = _kernel.apply_subst
rename_apart = _kernel.rename_apart
rename_many = _kernel.rename_many
term_vars = _kernel.term_vars
is_ground = _kernel.is_ground
fresh_var = _kernel.fresh_var

TUPLE_FUNCTOR = "tuple"
CONS_FUNCTOR = "cons"
NIL = Constant("nil")


def mk_tuple(args) -> Compound:
    """Group terms into an argument tuple (never nested in tuple position)."""
    return Compound(TUPLE_FUNCTOR, tuple(args))


def is_tuple(t) -> bool:
    return type(t) is Compound and t.functor == TUPLE_FUNCTOR


def cons(head, tail) -> Compound:
    return Compound(CONS_FUNCTOR, (head, tail))


def is_cons(t) -> bool:
    return type(t) is Compound and t.functor == CONS_FUNCTOR and len(t.args) == 2


def is_nil(t) -> bool:
    return type(t) is Constant and t.symbol == "nil"


def mk_list(items, tail=NIL):
    """Build a cons list from items, onto tail."""
    out = tail
    for item in reversed(tuple(items)):
        out = cons(item, out)
    return out


def list_parts(t):
    """Split a cons chain into (prefix items, tail term).

    A proper list ends with tail nil; an open list ends with its tail
    variable or any other non-cons term.
    """
    items = []
    while is_cons(t):
        items.append(t.args[0])
        t = t.args[1]
    return tuple(items), t


def alpha_equivalent(a, b) -> bool:
    """Structural equality up to a bijective renaming of variables."""
    fwd = {}
    bwd = {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        tx = type(x)
        if tx is not type(y):
            return False
        if tx is Variable:
            if fwd.setdefault(x.serial, y.serial) != y.serial:
                return False
            if bwd.setdefault(y.serial, x.serial) != x.serial:
                return False
        elif tx is Constant:
            if type(x.symbol) is not type(y.symbol) or x.symbol != y.symbol:
                return False
        else:
            if x.functor != y.functor or len(x.args) != len(y.args):
                return False
            stack.extend(zip(x.args, y.args))
    return True


def canonical(t):
    """Rename variables to a canonical first-occurrence numbering, so that
    alpha-equivalent terms become structurally equal (and hashable alike)."""
    numbering = {}

    def walk(s):
        ty = type(s)
        if ty is Variable:
            k = numbering.get(s.serial)
            if k is None:
                k = len(numbering)
                numbering[s.serial] = k
            return Variable("V", -(k + 1))
        if ty is Compound:
            return Compound(s.functor, tuple(walk(a) for a in s.args))
        return s

    return walk(t)
