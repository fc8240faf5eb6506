"""Higher-order pattern unification with level annotations.

The solvable fragment: every occurrence of an instantiable variable F^{g,l}
is applied to pairwise-distinct arguments, each one an atom F cannot already
depend on — a λ-bound variable of an enclosing binder, an eigenvariable with
global level above g, or a ∇-index at or above l.  Problems outside the
fragment come back as NonPattern, an error surfaced to the caller, never a
silent failure.

Which variables are instantiable depends on the caller.  Everywhere except
inside an implication's antecedent only logic variables bend
(instantiate_eigen=False); the Level-0 prover running on the left of an
implication performs case analysis on definitions, which may instantiate the
sequent's eigenvariables, so there both kinds bend with the same level side
conditions.

Bindings happen in place and are logged on a trail; undo_to rewinds them in
LIFO order.  On Failure and NonPattern the trail is already rewound to the
state at the unify() call.

Level side conditions when binding F^{g,l} := u (after abstracting F's
pattern arguments): u contains no eigenvariable with global >= g, no ∇-index
at or above l, and no occurrence of F.  A variable H^{g',l'} inside u with
g' > g or l' > l is not rejected but lowered: H is bound to a fresh variable
over the arguments that survive F's horizon, the standard pruning step.
"""

from __future__ import annotations

from .errors import NormalizationDepthExceeded
from .nodes import App, Bound, EigenVar, Lam, LogicVar, NablaIndex, Var, app
from .terms import DEFAULT_NORM_BUDGET, deref, normalize, struct_eq


class Trail:
    """LIFO log of variable bindings for backtracking."""

    __slots__ = ("_entries",)

    def __init__(self):
        self._entries = []

    def mark(self):
        return len(self._entries)

    def push(self, var):
        self._entries.append(var)

    def undo_to(self, mark):
        entries = self._entries
        while len(entries) > mark:
            entries.pop().binding = None

    def bound_since(self, mark):
        """The variables bound after the given mark (most recent last)."""
        return self._entries[mark:]

    def __len__(self):
        return len(self._entries)


class _SuccessType:
    __slots__ = ()

    def __repr__(self):
        return "Success"


class _FailureType:
    __slots__ = ()

    def __repr__(self):
        return "Failure"


SUCCESS = _SuccessType()
FAILURE = _FailureType()


class NonPattern:
    """Unify result for problems outside the pattern fragment."""

    __slots__ = ("lhs", "rhs", "reason")

    def __init__(self, lhs, rhs, reason):
        self.lhs = lhs
        self.rhs = rhs
        self.reason = reason

    def __repr__(self):
        return f"NonPattern({self.reason})"


class _Fail(Exception):
    pass


class _NonPat(Exception):
    def __init__(self, lhs, rhs, reason):
        self.lhs = lhs
        self.rhs = rhs
        self.reason = reason


class UnifyCtx:
    """Minimal state for standalone unification (tests, oracles).

    The engine's State object offers the same three attributes and is passed
    in its place.
    """

    __slots__ = ("sig", "trail", "norm_budget")

    def __init__(self, sig, norm_budget=DEFAULT_NORM_BUDGET):
        self.sig = sig
        self.trail = Trail()
        self.norm_budget = norm_budget


def bind(var, value, trail):
    var.binding = value
    trail.push(var)


def unify(t, s, st, instantiate_eigen=False):
    """Unify two terms in place; returns SUCCESS, FAILURE, or a NonPattern.

    On SUCCESS the accumulated bindings form a most general unifier of the
    level-respecting solutions.  On the other two results the trail has been
    rewound, so the state is exactly as before the call.
    """
    mark = st.trail.mark()
    budget = st.norm_budget
    try:
        _unify(normalize(t, budget), normalize(s, budget), st, instantiate_eigen)
        return SUCCESS
    except _Fail:
        st.trail.undo_to(mark)
        return FAILURE
    except _NonPat as e:
        st.trail.undo_to(mark)
        return NonPattern(e.lhs, e.rhs, e.reason)
    except NormalizationDepthExceeded:
        st.trail.undo_to(mark)
        raise


def _is_flex(h, left):
    if not isinstance(h, Var) or h.binding is not None:
        return False
    return isinstance(h, LogicVar) or (left and isinstance(h, EigenVar))


def _spine(t):
    if type(t) is App:
        return deref(t.head), t.args
    return t, ()


def _eta_body(u):
    """Body of the η-expansion of a non-abstraction u."""
    from .terms import shift

    u = shift(u, 1)
    if type(u) is App:
        return App(u.head, u.args + (Bound(0),))
    return App(u, (Bound(0),))


def _renorm(t, st):
    """Renormalize when bindings made since may have exposed redexes."""
    return normalize(t, st.norm_budget)


def _unify(t, s, st, left):
    t = _renorm(t, st)
    s = _renorm(s, st)
    tl, sl = type(t), type(s)
    if tl is Lam and sl is Lam:
        _unify(t.body, s.body, st, left)
        return
    if tl is Lam:
        _unify(t.body, _eta_body(s), st, left)
        return
    if sl is Lam:
        _unify(_eta_body(t), s.body, st, left)
        return
    th, targs = _spine(t)
    sh, sargs = _spine(s)
    tflex = _is_flex(th, left)
    sflex = _is_flex(sh, left)
    if tflex and sflex:
        if th is sh:
            _same_var(th, targs, sargs, st, t, s)
        else:
            _flex_flex(th, targs, sh, sargs, st, t, s)
    elif tflex:
        _bind_flex(th, targs, s, st, left, t)
    elif sflex:
        _bind_flex(sh, sargs, t, st, left, s)
    else:
        _rigid_rigid(th, targs, sh, sargs, st, left)


def _rigid_rigid(th, targs, sh, sargs, st, left):
    tt, ts = type(th), type(sh)
    if tt is not ts:
        raise _Fail
    if tt is Bound or tt is NablaIndex:
        if th.index != sh.index:
            raise _Fail
    elif isinstance(th, Var):
        if th is not sh:
            raise _Fail
    else:  # Const
        if th.name != sh.name:
            raise _Fail
    if len(targs) != len(sargs):
        raise _Fail
    for a, b in zip(targs, sargs):
        _unify(a, b, st, left)


def _atom_key(a):
    """Identity key for a pattern argument (distinctness, membership)."""
    ta = type(a)
    if ta is Bound:
        return ("b", a.index)
    if ta is NablaIndex:
        return ("n", a.index)
    return ("v", id(a))


def _check_pattern_args(f, args, lhs, rhs):
    """Raise _NonPat unless args satisfy the pattern condition for f."""
    seen = set()
    for a in args:
        a = deref(a)
        ta = type(a)
        if ta is Bound:
            pass
        elif ta is NablaIndex:
            if a.index < f.local_level:
                raise _NonPat(
                    lhs,
                    rhs,
                    "argument #%d is already visible to %s (local level %d)"
                    % (a.index, f.name, f.local_level),
                )
        elif isinstance(a, EigenVar) and a.binding is None:
            if a.global_level <= f.global_level:
                raise _NonPat(
                    lhs,
                    rhs,
                    "argument %s is already visible to %s (global level)"
                    % (a.name, f.name),
                )
        else:
            raise _NonPat(
                lhs,
                rhs,
                "argument of %s is not a λ-bound variable, eigenvariable, "
                "or ∇-index" % f.name,
            )
        k = _atom_key(a)
        if k in seen:
            raise _NonPat(lhs, rhs, "repeated argument of %s" % f.name)
        seen.add(k)


def _visible_to(v, atom):
    """May atom occur in a binding of v under the level discipline?"""
    ta = type(atom)
    if ta is Bound:
        return False
    if ta is NablaIndex:
        return atom.index < v.local_level
    return atom.global_level < v.global_level


def _position(atom, args):
    key = _atom_key(atom)
    for i, a in enumerate(args):
        if _atom_key(deref(a)) == key:
            return i
    return None


def _wrap_lams(body, n):
    for _ in range(n):
        body = Lam(body)
    return body


def _bind_flex(f, fargs, rigid, st, left, flex_term):
    fargs = [deref(a) for a in fargs]
    _check_pattern_args(f, fargs, flex_term, rigid)
    n = len(fargs)
    body = _abstract(rigid, f, fargs, 0, st, left, flex_term, rigid)
    bind(f, _wrap_lams(body, n), st.trail)


def _abstract(u, f, fargs, depth, st, left, lhs, rhs):
    """Rewrite u into the body of f's binding.

    Occurrences of f's pattern arguments become λ-indices of the new binding;
    atoms f can see pass through; instantiable variables beyond f's horizon
    get pruned; anything else has no level-respecting unifier.
    """
    u = deref(u)
    n = len(fargs)
    tu = type(u)
    if tu is Lam:
        return Lam(_abstract(u.body, f, fargs, depth + 1, st, left, lhs, rhs), u.hint)
    if tu is App:
        head = deref(u.head)
        if type(head) is Lam or type(head) is App:
            # A binding made while abstracting a sibling exposed a redex.
            return _abstract(
                _renorm(u, st), f, fargs, depth, st, left, lhs, rhs
            )
        if _is_flex(head, left):
            if head is f:
                raise _Fail  # occurs check
            return _prune_flex(head, u.args, f, fargs, depth, st, lhs, rhs)
        h = _abstract_atom(head, f, fargs, depth, n, left, st, lhs, rhs)
        return app(
            h,
            tuple(
                _abstract(a, f, fargs, depth, st, left, lhs, rhs) for a in u.args
            ),
        )
    if _is_flex(u, left):
        if u is f:
            raise _Fail
        return _prune_flex(u, (), f, fargs, depth, st, lhs, rhs)
    return _abstract_atom(u, f, fargs, depth, n, left, st, lhs, rhs)


def _abstract_atom(a, f, fargs, depth, n, left, st, lhs, rhs):
    ta = type(a)
    if ta is Bound:
        if a.index < depth:
            return a
        pos = _position(Bound(a.index - depth), fargs)
        if pos is None:
            raise _Fail
        return Bound(depth + n - 1 - pos)
    if ta is NablaIndex:
        if a.index < f.local_level:
            return a
        pos = _position(a, fargs)
        if pos is None:
            raise _Fail
        return Bound(depth + n - 1 - pos)
    if isinstance(a, Var):  # rigid eigenvariable (right mode)
        if a.global_level < f.global_level:
            return a
        pos = _position(a, fargs)
        if pos is None:
            raise _Fail
        return Bound(depth + n - 1 - pos)
    return a  # Const


def _prune_flex(h, hargs, f, fargs, depth, st, lhs, rhs):
    """Translate an occurrence of flex h inside f's binding body.

    Arguments of h that f can reach (directly visible, local λ, or one of
    f's own pattern arguments) survive; the rest force h down to a fresh
    variable over the survivors at the pointwise-minimum levels.
    """
    hargs = [deref(a) for a in hargs]
    _check_pattern_args(h, hargs, lhs, rhs)
    n = len(fargs)
    survivors = []  # (position in hargs, translation inside f's body)
    for i, z in enumerate(hargs):
        tz = type(z)
        if tz is Bound:
            if z.index < depth:
                survivors.append((i, z))
            else:
                pos = _position(Bound(z.index - depth), fargs)
                if pos is not None:
                    survivors.append((i, Bound(depth + n - 1 - pos)))
        elif tz is NablaIndex:
            if z.index < f.local_level:
                survivors.append((i, z))
            else:
                pos = _position(z, fargs)
                if pos is not None:
                    survivors.append((i, Bound(depth + n - 1 - pos)))
        else:  # eigenvariable, unbound
            if z.global_level < f.global_level:
                survivors.append((i, z))
            else:
                pos = _position(z, fargs)
                if pos is not None:
                    survivors.append((i, Bound(depth + n - 1 - pos)))
    within_levels = (
        h.global_level <= f.global_level and h.local_level <= f.local_level
    )
    if within_levels and len(survivors) == len(hargs):
        return app(h, tuple(tr for _, tr in survivors))
    hp = st.sig.fresh_like(
        h,
        min(f.global_level, h.global_level),
        min(f.local_level, h.local_level),
    )
    m = len(hargs)
    inner = tuple(Bound(m - 1 - i) for i, _ in survivors)
    bind(h, _wrap_lams(app(hp, inner), m), st.trail)
    return app(hp, tuple(tr for _, tr in survivors))


def _same_var(f, targs, sargs, st, lhs, rhs):
    if len(targs) != len(sargs):
        raise _NonPat(lhs, rhs, "same variable applied at different arities")
    targs = [deref(a) for a in targs]
    sargs = [deref(a) for a in sargs]
    _check_pattern_args(f, targs, lhs, rhs)
    _check_pattern_args(f, sargs, lhs, rhs)
    n = len(targs)
    kept = [
        i for i in range(n) if _atom_key(targs[i]) == _atom_key(sargs[i])
    ]
    if len(kept) == n:
        return  # identical flex terms, nothing to do
    k = st.sig.fresh_like(f, f.global_level, f.local_level)
    body = app(k, tuple(Bound(n - 1 - i) for i in kept))
    bind(f, _wrap_lams(body, n), st.trail)


def _flex_flex(f, targs, h, sargs, st, lhs, rhs):
    targs = [deref(a) for a in targs]
    sargs = [deref(a) for a in sargs]
    _check_pattern_args(f, targs, lhs, rhs)
    _check_pattern_args(h, sargs, lhs, rhs)
    g = min(f.global_level, h.global_level)
    l = min(f.local_level, h.local_level)
    template = f if isinstance(f, LogicVar) else h
    k = st.sig.fresh_like(template, g, l, name=f.name)
    tkeys = [_atom_key(a) for a in targs]
    skeys = [_atom_key(a) for a in sargs]
    sel = []
    selkeys = set()
    for a, ka in zip(targs, tkeys):
        if ka in skeys or _visible_to(h, a):
            sel.append(a)
            selkeys.add(ka)
    for a, ka in zip(sargs, skeys):
        if ka not in selkeys and ka not in tkeys and _visible_to(f, a):
            sel.append(a)
            selkeys.add(ka)

    def mk_binding(args, keys):
        n = len(args)
        out = []
        for a in sel:
            ka = _atom_key(a)
            if ka in keys:
                out.append(Bound(n - 1 - keys.index(ka)))
            else:
                out.append(a)
        return _wrap_lams(app(k, tuple(out)), n)

    bind(f, mk_binding(targs, tkeys), st.trail)
    bind(h, mk_binding(sargs, skeys), st.trail)


def is_pattern(t, nabla_depth=None, instantiate_eigen=False):
    """Is every flex subterm of t applied to legal pattern arguments?

    With nabla_depth given, ∇-index arguments must also be live (below the
    ambient depth).
    """
    t = normalize(t)
    return _is_pattern(t, nabla_depth, instantiate_eigen)


def _is_pattern(t, nd, left):
    tt = type(t)
    if tt is Lam:
        return _is_pattern(t.body, nd, left)
    if tt is App:
        head = deref(t.head)
        if _is_flex(head, left):
            if not _pattern_args_ok(head, t.args, nd):
                return False
            return True
        return _is_pattern(head, nd, left) and all(
            _is_pattern(a, nd, left) for a in t.args
        )
    return True


def _pattern_args_ok(f, args, nd):
    seen = set()
    for a in args:
        a = deref(a)
        ta = type(a)
        if ta is Bound:
            pass
        elif ta is NablaIndex:
            if a.index < f.local_level:
                return False
            if nd is not None and a.index >= nd:
                return False
        elif isinstance(a, EigenVar) and a.binding is None:
            if a.global_level <= f.global_level:
                return False
        else:
            return False
        k = _atom_key(a)
        if k in seen:
            return False
        seen.add(k)
        if not _is_pattern(a, nd, False):
            return False
    return True


class Substitution:
    """Immutable snapshot of bindings for selected variables.

    apply() rewrites a term functionally, without touching binding cells, so
    snapshots stay valid after the trail rewinds past the bindings they
    captured.
    """

    __slots__ = ("_map",)

    def __init__(self, pairs):
        self._map = {id(v): (v, t) for v, t in pairs}

    @classmethod
    def of_vars(cls, variables, budget=None):
        pairs = []
        for v in variables:
            if v.binding is not None:
                pairs.append((v, normalize(v, budget or DEFAULT_NORM_BUDGET)))
        return cls(pairs)

    def get(self, var, default=None):
        entry = self._map.get(id(var))
        return entry[1] if entry is not None else default

    def items(self):
        return [(v, t) for (v, t) in self._map.values()]

    def __len__(self):
        return len(self._map)

    def __contains__(self, var):
        return id(var) in self._map

    def apply(self, t):
        t = deref(t)
        tt = type(t)
        if tt is Lam:
            return Lam(self.apply(t.body), t.hint)
        if tt is App:
            return app(self.apply(t.head), tuple(self.apply(a) for a in t.args))
        if isinstance(t, Var):
            entry = self._map.get(id(t))
            if entry is not None:
                return self.apply(entry[1]) if entry[1] is not t else t
        return t


def equal_terms(t, s, budget=None):
    """Convenience αβη-equality used by tests."""
    from .terms import equal_modulo

    return equal_modulo(t, s, budget)
