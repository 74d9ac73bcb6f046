# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernel: the hot twin of _termcore_py.

Same names, same behaviour; the cross-backend test suite keeps the two in
lock step.  Terms are extension types, the recursive operations run with C
dispatch instead of Python attribute lookups.
"""

from sys import intern

BACKEND = "compiled"

cdef long _serial_counter = 0

cdef inline long _next_serial():
    # GIL-protected, hence atomic with respect to other Python threads.
    global _serial_counter
    _serial_counter += 1
    return _serial_counter


cdef class Variable:
    """A logic variable.  Identity is the serial; the name is decoration."""

    cdef readonly str name
    cdef readonly long serial

    def __init__(self, name, serial=None):
        self.name = intern(name)
        self.serial = _next_serial() if serial is None else serial

    def __eq__(self, other):
        if type(other) is not Variable:
            return NotImplemented
        return (<Variable>other).serial == self.serial

    def __hash__(self):
        return hash(self.serial)

    def __repr__(self):
        return "%s#%d" % (self.name, self.serial)


cdef class Constant:
    """An atomic constant: an identifier string or an integer."""

    cdef readonly object symbol

    def __init__(self, symbol):
        self.symbol = intern(symbol) if type(symbol) is str else symbol

    def __eq__(self, other):
        if type(other) is not Constant:
            return NotImplemented
        cdef object o = (<Constant>other).symbol
        return type(o) is type(self.symbol) and o == self.symbol

    def __hash__(self):
        return hash((Constant, self.symbol))

    def __repr__(self):
        return str(self.symbol)


cdef class Compound:
    """A functor applied to a tuple of argument terms."""

    cdef readonly str functor
    cdef readonly tuple args

    def __init__(self, functor, args):
        self.functor = intern(functor)
        self.args = tuple(args)

    def __eq__(self, other):
        if type(other) is not Compound:
            return NotImplemented
        cdef Compound o = <Compound>other
        return o.functor == self.functor and o.args == self.args

    def __hash__(self):
        return hash((self.functor, self.args))

    def __repr__(self):
        if not self.args:
            return self.functor
        return "%s(%s)" % (self.functor, ", ".join([repr(a) for a in self.args]))


def fresh_var(name="_G"):
    """A variable guaranteed distinct from every variable issued so far."""
    return Variable(name)


cdef bint _is_ground(object t):
    if type(t) is Variable:
        return False
    if type(t) is Compound:
        for a in (<Compound>t).args:
            if not _is_ground(a):
                return False
    return True


def is_ground(t):
    """True iff t contains no variable."""
    return _is_ground(t)


def term_vars(t):
    """Variables of t, first occurrence first, without duplicates."""
    cdef list out = []
    cdef set seen = set()
    cdef list stack = [t]
    cdef object s
    while stack:
        s = stack.pop()
        if type(s) is Variable:
            if (<Variable>s).serial not in seen:
                seen.add((<Variable>s).serial)
                out.append(s)
        elif type(s) is Compound:
            stack.extend(reversed((<Compound>s).args))
    return tuple(out)


cdef class Subst:
    """An idempotent substitution: a finite map from variables to terms in
    which no bound variable occurs in any binding's value."""

    cdef readonly dict bindings

    def __init__(self, bindings=None):
        self.bindings = dict(bindings) if bindings else {}

    def apply(self, t):
        """Structural replacement of bound variables throughout t."""
        if not self.bindings:
            return t
        return _apply(self.bindings, t)

    def get(self, v, default=None):
        return self.bindings.get(v, default)

    def items(self):
        return self.bindings.items()

    def restrict(self, variables):
        keep = set(variables)
        return Subst({v: t for v, t in self.bindings.items() if v in keep})

    def __len__(self):
        return len(self.bindings)

    def __contains__(self, v):
        return v in self.bindings

    def __eq__(self, other):
        if not isinstance(other, Subst):
            return NotImplemented
        return (<Subst>other).bindings == self.bindings

    def __repr__(self):
        inner = ", ".join(["%r -> %r" % (v, t) for v, t in self.bindings.items()])
        return "{%s}" % inner


EMPTY_SUBST = Subst()


cdef object _apply(dict bindings, object t):
    cdef Compound c
    cdef tuple args, new
    cdef Py_ssize_t i, n
    cdef bint changed
    if type(t) is Variable:
        return bindings.get(t, t)
    if type(t) is Compound:
        c = <Compound>t
        args = c.args
        n = len(args)
        new = tuple([_apply(bindings, args[i]) for i in range(n)])
        changed = False
        for i in range(n):
            if new[i] is not args[i]:
                changed = True
                break
        if not changed:
            return t
        return Compound(c.functor, new)
    return t


def apply_subst(s, t):
    """Module-level alias for Subst.apply."""
    return s.apply(t)


cdef object _walk(object t, dict bind):
    cdef object nxt
    while type(t) is Variable:
        nxt = bind.get(t)
        if nxt is None:
            return t
        t = nxt
    return t


cdef bint _occurs(Variable v, object t, dict bind):
    cdef list stack = [t]
    cdef object s
    while stack:
        s = _walk(stack.pop(), bind)
        if type(s) is Variable:
            if (<Variable>s).serial == v.serial:
                return True
        elif type(s) is Compound:
            stack.extend((<Compound>s).args)
    return False


cdef object _resolve(object t, dict bind, dict memo):
    cdef Compound c
    cdef tuple args
    cdef list new
    cdef Py_ssize_t i, n
    cdef bint changed
    t = _walk(t, bind)
    if type(t) is Compound:
        c = <Compound>t
        key = id(t)
        hit = memo.get(key)
        if hit is not None:
            return hit
        args = c.args
        n = len(args)
        new = [None] * n
        changed = False
        for i in range(n):
            new[i] = _resolve(args[i], bind, memo)
            if new[i] is not args[i]:
                changed = True
        out = t if not changed else Compound(c.functor, tuple(new))
        memo[key] = out
        return out
    return t


def unify(a, b):
    """Most general unifier of a and b, with occurs check.

    Returns an idempotent Subst, or None when the terms do not unify.
    """
    cdef dict bind = {}
    cdef list stack = [(a, b)]
    cdef object x, y
    cdef Compound cx, cy
    while stack:
        x, y = <tuple>stack.pop()
        x = _walk(x, bind)
        y = _walk(y, bind)
        if type(x) is Variable:
            if type(y) is Variable and (<Variable>y).serial == (<Variable>x).serial:
                continue
            if _occurs(<Variable>x, y, bind):
                return None
            bind[x] = y
        elif type(y) is Variable:
            if _occurs(<Variable>y, x, bind):
                return None
            bind[y] = x
        elif type(x) is Constant and type(y) is Constant:
            if type((<Constant>x).symbol) is not type((<Constant>y).symbol):
                return None
            if (<Constant>x).symbol != (<Constant>y).symbol:
                return None
        elif type(x) is Compound and type(y) is Compound:
            cx = <Compound>x
            cy = <Compound>y
            if cx.functor != cy.functor or len(cx.args) != len(cy.args):
                return None
            stack.extend(zip(cx.args, cy.args))
        else:
            return None
    if not bind:
        return EMPTY_SUBST
    cdef dict memo = {}
    return Subst({v: _resolve(t, bind, memo) for v, t in bind.items()})


cdef bint _struct_eq(object a, object b):
    cdef list stack = [(a, b)]
    cdef object x, y
    cdef Compound cx, cy
    while stack:
        x, y = <tuple>stack.pop()
        if type(x) is not type(y):
            return False
        if type(x) is Variable:
            if (<Variable>x).serial != (<Variable>y).serial:
                return False
        elif type(x) is Constant:
            if type((<Constant>x).symbol) is not type((<Constant>y).symbol):
                return False
            if (<Constant>x).symbol != (<Constant>y).symbol:
                return False
        else:
            cx = <Compound>x
            cy = <Compound>y
            if cx.functor != cy.functor or len(cx.args) != len(cy.args):
                return False
            stack.extend(zip(cx.args, cy.args))
    return True


def match(pattern, subject):
    """One-way unification: a substitution s over vars(pattern) only, such
    that pattern under s equals subject.  None when impossible."""
    cdef dict bind = {}
    cdef list stack = [(pattern, subject)]
    cdef object p, s, prev
    cdef Compound cp
    while stack:
        p, s = <tuple>stack.pop()
        if type(p) is Variable:
            prev = bind.get(p)
            if prev is None:
                bind[p] = s
            elif not _struct_eq(prev, s):
                return None
        elif type(p) is Constant:
            if type(s) is not Constant:
                return None
            if type((<Constant>p).symbol) is not type((<Constant>s).symbol):
                return None
            if (<Constant>p).symbol != (<Constant>s).symbol:
                return None
        else:
            cp = <Compound>p
            if type(s) is not Compound:
                return None
            if (<Compound>s).functor != cp.functor:
                return None
            if len((<Compound>s).args) != len(cp.args):
                return None
            stack.extend(zip(cp.args, (<Compound>s).args))
    return Subst(bind) if bind else EMPTY_SUBST


cdef object _rename(object t, dict mapping):
    cdef Compound c
    cdef object r
    if type(t) is Variable:
        r = mapping.get(t)
        if r is None:
            r = Variable((<Variable>t).name)
            mapping[t] = r
        return r
    if type(t) is Compound:
        c = <Compound>t
        return Compound(c.functor, tuple([_rename(a, mapping) for a in c.args]))
    return t


def rename_many(terms, avoid=()):
    """Alpha-rename a sequence of terms with one shared mapping of fresh
    variables, preserving sharing across the sequence.

    Fresh serials are globally unique, so the result is disjoint from
    ``avoid`` and from every variable issued before the call.
    """
    cdef dict mapping = {}
    return tuple([_rename(t, mapping) for t in terms])


def rename_apart(t, avoid=()):
    """Alpha-variant of t over fresh variables."""
    cdef dict mapping = {}
    return _rename(t, mapping)
