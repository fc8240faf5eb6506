"""λ-tree term syntax.

Terms use de Bruijn indices for λ-bound variables and a separate family of
∇-indices (#0, #1, ...) for names introduced by the fresh-name quantifier.
Eigenvariables and logic variables carry a (global, local) level pair that
records where along the quantifier prefix they were introduced; the
unification side conditions read quantifier dependencies off these levels.

Application is kept in spine form: App.head is never itself an App.  Use the
app() constructor instead of App() when the head is not known to be atomic.

ClauseVar is a placeholder for an implicitly quantified definition-clause
variable.  It only ever occurs inside stored definitions; unfolding replaces
every ClauseVar with a fresh variable before a term reaches the provers.
"""

from __future__ import annotations


class Term:
    __slots__ = ()


class Const(Term):
    """A constant (object-level constructor or defined-predicate symbol)."""

    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return f"Const({self.name!r})"


class Bound(Term):
    """A λ-bound variable as a de Bruijn index (0 = innermost binder)."""

    __slots__ = ("index",)
    __match_args__ = ("index",)

    def __init__(self, index: int):
        self.index = index

    def __repr__(self):
        return f"Bound({self.index})"


class NablaIndex(Term):
    """The index-th ∇-bound name, counted from the outside in (0-based)."""

    __slots__ = ("index",)
    __match_args__ = ("index",)

    def __init__(self, index: int):
        self.index = index

    def __repr__(self):
        return f"#{self.index}"


class Var(Term):
    """Shared representation of eigen- and logic variables.

    binding is the destructive-unification cell; assignments are recorded on
    the trail so backtracking can reset them.  A term stored in a binding is
    always closed with respect to λ (the unifier abstracts pattern arguments
    before binding), so shifting and substitution never need to enter it.

    Eigenvariables use the cell only while the Level-0 prover runs on the
    left of an implication, where case analysis on a definition may
    instantiate them.
    """

    __slots__ = ("name", "id", "global_level", "local_level", "binding")

    def __init__(self, name: str, vid: int, global_level: int, local_level: int):
        self.name = name
        self.id = vid
        self.global_level = global_level
        self.local_level = local_level
        self.binding = None

    def __repr__(self):
        kind = "E" if isinstance(self, EigenVar) else "L"
        bound = "*" if self.binding is not None else ""
        return (
            f"{kind}({self.name}@{self.id}"
            f"^{{{self.global_level},{self.local_level}}}{bound})"
        )


class EigenVar(Var):
    __slots__ = ()


class LogicVar(Var):
    __slots__ = ()


class Lam(Term):
    """λ-abstraction.  hint is a printing name only; equality ignores it."""

    __slots__ = ("body", "hint")
    __match_args__ = ("body",)

    def __init__(self, body: Term, hint: str | None = None):
        self.body = body
        self.hint = hint

    def __repr__(self):
        return f"Lam({self.body!r})"


class App(Term):
    __slots__ = ("head", "args")
    __match_args__ = ("head", "args")

    def __init__(self, head: Term, args: tuple):
        self.head = head
        self.args = args

    def __repr__(self):
        return f"App({self.head!r}, {list(self.args)!r})"


class ClauseVar(Term):
    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return f"ClauseVar({self.name!r})"


def app(head: Term, args) -> Term:
    """Smart application constructor: flattens spines, drops empty arg lists.

    Does not β-reduce; App(Lam(...), args) is a legal (redex) term.
    """
    args = tuple(args)
    if not args:
        return head
    if type(head) is App:
        return App(head.head, head.args + args)
    return App(head, args)
