"""Formulas, definitions-as-fixed-points, level checking, and unfolding.

The two-level grammar:

    level 0:  ⊤ | atom | = | ∧ | ∨ | ∃ | ∇
    level 1:  additionally ∀ and (level-0 ⊃ level-1)

A definition clause may use a body only up to the level of its head
predicate, so Level-0 goals never grow an implication or a ∀ by unfolding.

Quantifier bodies share the term language's de Bruijn indices: the variable
bound by ∃/∀/∇ occurs as Bound(k) inside the argument terms of the body,
counting formula binders and term-level λs together.  instantiate() closes
the outermost formula binder with a term.

Clause variables (implicitly ∀-quantified at the clause head) are stored as
ClauseVar placeholder terms; unfold() renames them apart into fresh
variables, so two unfolds never share variables.
"""

from __future__ import annotations

from .errors import IllFormedFormula, LevelError, NonPatternError
from .nodes import App, ClauseVar, Lam, Term, app
from .terms import iter_free_vars, subst
from .unify import FAILURE, SUCCESS, unify


# ---------------------------------------------------------------------------
# Formula syntax
# ---------------------------------------------------------------------------

class Formula:
    __slots__ = ()


class Top(Formula):
    __slots__ = ()
    __match_args__ = ()

    def __repr__(self):
        return "Top"


class Atom(Formula):
    __slots__ = ("pred", "args")
    __match_args__ = ("pred", "args")

    def __init__(self, pred: str, args=()):
        self.pred = pred
        self.args = tuple(args)

    def __repr__(self):
        return f"Atom({self.pred}, {list(self.args)})"


class Eq(Formula):
    __slots__ = ("lhs", "rhs")
    __match_args__ = ("lhs", "rhs")

    def __init__(self, lhs: Term, rhs: Term):
        self.lhs = lhs
        self.rhs = rhs

    def __repr__(self):
        return f"Eq({self.lhs!r}, {self.rhs!r})"


class And(Formula):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


class Or(Formula):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


class Imp(Formula):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __repr__(self):
        return f"Imp({self.left!r}, {self.right!r})"


class _Binder(Formula):
    __slots__ = ("name", "body")
    __match_args__ = ("name", "body")

    def __init__(self, name: str, body: Formula):
        self.name = name
        self.body = body

    def __repr__(self):
        return f"{type(self).__name__}({self.name}, {self.body!r})"


class Exists(_Binder):
    __slots__ = ()


class Forall(_Binder):
    __slots__ = ()


class Nabla(_Binder):
    __slots__ = ()


def instantiate(f: Formula, value: Term, depth: int = 0) -> Formula:
    """Close the formula binder at the given depth with a term."""
    tf = type(f)
    if tf is Atom:
        return Atom(f.pred, tuple(subst(a, value, depth) for a in f.args))
    if tf is Eq:
        return Eq(subst(f.lhs, value, depth), subst(f.rhs, value, depth))
    if tf is And or tf is Or or tf is Imp:
        return tf(instantiate(f.left, value, depth), instantiate(f.right, value, depth))
    if tf is Exists or tf is Forall or tf is Nabla:
        return tf(f.name, instantiate(f.body, value, depth + 1))
    return f  # Top


def formula_terms(f):
    """Yield the argument terms of every atom and equation in f."""
    stack = [f]
    while stack:
        g = stack.pop()
        tg = type(g)
        if tg is Atom:
            for a in g.args:
                yield a
        elif tg is Eq:
            yield g.lhs
            yield g.rhs
        elif tg is And or tg is Or or tg is Imp:
            stack.append(g.left)
            stack.append(g.right)
        elif tg is Exists or tg is Forall or tg is Nabla:
            stack.append(g.body)


def free_vars(f):
    """Unbound variables reachable in f, deduplicated, in discovery order."""
    seen = set()
    out = []
    for t in formula_terms(f):
        for v in iter_free_vars(t):
            if id(v) not in seen:
                seen.add(id(v))
                out.append(v)
    return out


def formula_preds(f, acc=None):
    """All predicate names occurring in f."""
    acc = set() if acc is None else acc
    stack = [f]
    while stack:
        g = stack.pop()
        tg = type(g)
        if tg is Atom:
            acc.add(g.pred)
        elif tg is And or tg is Or or tg is Imp:
            stack.append(g.left)
            stack.append(g.right)
        elif tg is Exists or tg is Forall or tg is Nabla:
            stack.append(g.body)
    return acc


def antecedent_preds(f, acc=None):
    """Predicate names occurring inside some implication antecedent of f."""
    acc = set() if acc is None else acc
    tf = type(f)
    if tf is Imp:
        formula_preds(f.left, acc)
        antecedent_preds(f.right, acc)
    elif tf is And or tf is Or:
        antecedent_preds(f.left, acc)
        antecedent_preds(f.right, acc)
    elif tf is Exists or tf is Forall or tf is Nabla:
        antecedent_preds(f.body, acc)
    return acc


# ---------------------------------------------------------------------------
# Level classification
# ---------------------------------------------------------------------------

def classify(f, level_of=None, strict=True) -> int:
    """The least level (0 or 1) whose grammar generates f.

    level_of maps predicate names to their level (missing names count as 0).
    With strict on, an implication whose antecedent is not level 0 raises
    IllFormedFormula; with strict off it is tolerated so level inference can
    iterate to its fixed point before complaining.
    """
    if level_of is None:
        level_of = {}
    getter = level_of.get if hasattr(level_of, "get") else None

    def level(g):
        tg = type(g)
        if tg is Top or tg is Eq:
            return 0
        if tg is Atom:
            return getter(g.pred, 0) if getter else level_of(g.pred)
        if tg is And or tg is Or:
            return max(level(g.left), level(g.right))
        if tg is Exists or tg is Nabla:
            return level(g.body)
        if tg is Forall:
            level(g.body)
            return 1
        if tg is Imp:
            if level(g.left) != 0 and strict:
                raise IllFormedFormula(
                    "the antecedent of an implication must be a level-0 formula"
                )
            level(g.right)
            return 1
        raise TypeError(f"not a formula: {g!r}")

    return level(f)


# ---------------------------------------------------------------------------
# Definitions
# ---------------------------------------------------------------------------

class Clause:
    __slots__ = ("head_args", "body", "var_names", "line")

    def __init__(self, head_args, body, var_names, line=None):
        self.head_args = tuple(head_args)
        self.body = body
        self.var_names = tuple(var_names)
        self.line = line


class Definition:
    __slots__ = ("pred", "clauses", "declared_level", "level", "table_mode")

    def __init__(self, pred):
        self.pred = pred
        self.clauses = []
        self.declared_level = None
        self.level = 0
        self.table_mode = None  # None | "inductive" | "coinductive"


class DefSet:
    """All definitions of a session, with level inference and checks.

    Every predicate name that appears anywhere in loaded input (head, body,
    assertion, directive) is registered here, including ones that never get
    a clause: those unfold to the empty stream, which is how `false` works.
    Unregistered names are rejected at query time as probable typos.
    """

    def __init__(self):
        self.defs: dict[str, Definition] = {}
        self.warnings: list[str] = []
        self._checked = False
        # The canonical empty predicate: `g => false` is how negation is
        # written, so it is predeclared with no clauses.
        self.ensure("false")

    def ensure(self, pred) -> Definition:
        d = self.defs.get(pred)
        if d is None:
            d = Definition(pred)
            self.defs[pred] = d
        return d

    def known(self, pred) -> bool:
        return pred in self.defs

    def register_formula(self, f):
        for p in formula_preds(f):
            self.ensure(p)

    def add_clause(self, pred, head_args, body, var_names, line=None):
        self.ensure(pred).clauses.append(Clause(head_args, body, var_names, line))
        self.register_formula(body)
        self._checked = False

    def declare_level(self, pred, level):
        if level not in (0, 1):
            raise LevelError(f"level of {pred} must be 0 or 1, not {level}")
        self.ensure(pred).declared_level = level
        self._checked = False

    def set_table(self, pred, mode):
        if mode not in ("inductive", "coinductive"):
            raise LevelError(f"unknown table mode: {mode}")
        self.ensure(pred).table_mode = mode

    def level(self, pred) -> int:
        return self.defs[pred].level if pred in self.defs else 0

    def levels(self) -> dict:
        return {p: d.level for p, d in self.defs.items()}

    def check(self):
        """Infer levels, verify clause bodies fit their heads, gather warnings.

        Level inference runs the obvious fixed point: levels start at the
        declared value (or 0) and only ever grow, so at most two passes
        change anything.
        """
        if self._checked:
            return
        for d in self.defs.values():
            d.level = d.declared_level if d.declared_level is not None else 0
        changed = True
        while changed:
            changed = False
            lv = self.levels()
            for d in self.defs.values():
                for c in d.clauses:
                    body_level = classify(c.body, lv, strict=False)
                    if body_level > d.level:
                        if d.declared_level is not None:
                            raise LevelError(
                                f"clause of {d.pred} (line {c.line}) has a level-"
                                f"{body_level} body but {d.pred} is declared level "
                                f"{d.declared_level}"
                            )
                        d.level = body_level
                        changed = True
        # Diagnose negation-through-recursion before the strict pass gets a
        # chance to reject the clause for level reasons: the warning is the
        # useful half of that error message.
        self.warnings = []
        for d in self.defs.values():
            for c in d.clauses:
                if d.pred in antecedent_preds(c.body):
                    self.warnings.append(
                        f"predicate {d.pred} occurs in the antecedent of its own "
                        "definition; stratification is not checked"
                    )
                    break
        # Final strict pass: antecedents must have settled at level 0.
        lv = self.levels()
        for d in self.defs.values():
            for c in d.clauses:
                try:
                    classify(c.body, lv, strict=True)
                except IllFormedFormula as e:
                    raise LevelError(
                        f"clause of {d.pred} (line {c.line}): {e}"
                    ) from None
        self._checked = True


# ---------------------------------------------------------------------------
# Unfolding
# ---------------------------------------------------------------------------

def replace_clause_vars(t, env):
    """Substitute clause-variable placeholders; fresh vars are λ-closed, so
    no index shifting is needed."""
    tt = type(t)
    if tt is ClauseVar:
        return env[t.name]
    if tt is Lam:
        return Lam(replace_clause_vars(t.body, env), t.hint)
    if tt is App:
        return app(
            replace_clause_vars(t.head, env),
            tuple(replace_clause_vars(a, env) for a in t.args),
        )
    return t


def replace_clause_vars_formula(f, env):
    tf = type(f)
    if tf is Atom:
        return Atom(f.pred, tuple(replace_clause_vars(a, env) for a in f.args))
    if tf is Eq:
        return Eq(replace_clause_vars(f.lhs, env), replace_clause_vars(f.rhs, env))
    if tf is And or tf is Or or tf is Imp:
        return tf(
            replace_clause_vars_formula(f.left, env),
            replace_clause_vars_formula(f.right, env),
        )
    if tf is Exists or tf is Forall or tf is Nabla:
        return tf(f.name, replace_clause_vars_formula(f.body, env))
    return f


def unfold(pred, args, st, left=False):
    """Yield the body instance of each clause whose head matches the atom.

    Clauses are tried in source order.  Clause variables are renamed apart
    into fresh variables at the current levels: logic variables normally,
    eigenvariables on the left of an implication, where an unconstrained
    premise variable reads universally.  Head unification happens in place;
    the checkpoint is rewound once the consumer moves on, or if the clause
    does not match.  A non-pattern head unification propagates as an error.
    """
    defn = st.defs.defs.get(pred)
    if defn is None:
        return
    fresh = st.sig.fresh_eigen if left else st.sig.fresh_logic
    for clause in defn.clauses:
        if len(clause.head_args) != len(args):
            continue
        mark = st.checkpoint()
        try:
            env = {name: fresh(name) for name in clause.var_names}
            ok = True
            for pat, arg in zip(clause.head_args, args):
                r = unify(replace_clause_vars(pat, env), arg, st, instantiate_eigen=left)
                if r is SUCCESS:
                    continue
                if r is FAILURE:
                    ok = False
                    break
                raise NonPatternError(r.lhs, r.rhs, r.reason)
            if ok:
                yield replace_clause_vars_formula(clause.body, env)
        finally:
            st.undo_to(mark)
