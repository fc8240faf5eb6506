"""Tables: memoized atom outcomes that double as proof certificates.

A tabled predicate records, per variable-free call, whether the call was
proved or disproved.  While a call is being established it is marked in
progress; running into the mark again is a loop, and the table's mode
decides what a loop means: an inductive loop fails the branch (a least
fixed point admits no self-supporting proof), a coinductive loop succeeds
(the infinite unfolding is itself the witness).

A loop is an assumption about the looped-on call, and the assumption can
turn out wrong once that call finishes through its other branches.  Every
production therefore tracks the assumptions it consumed.  A call that
finishes while some of them are still open is recorded provisionally,
conditioned on those calls; when an assumed call settles the right way the
condition is discharged, and when it settles the wrong way the dependent
entries are discarded (they recompute on demand) and a still-running
production restarts.  Assumptions a call makes about itself need no
tracking: a least fixed point always has a loop-free proof if it has any,
and dually a greatest fixed point fails outright only if loops cannot save
it.  That argument assumes definitions do not smuggle a predicate into its
own negation through an implication; level checking warns about the direct
case and the rest is the user's contract.

Entries persist across queries, so a finished table is a reusable
certificate of everything it settled; the CLI dumps it in source syntax.
Eligibility: the outcome of a call must be a single bit, so no unbound
logic variable may remain in the arguments, and for a level-0 predicate no
unbound variable at all (on the left of an implication eigenvariables are
instantiable too).  ∇-indices are fine; two calls differing by an
injective renaming of indices or eigenvariables get distinct keys, which
costs sharing, never soundness.  A call abandoned by a resource limit
leaves no entry behind.
"""

from __future__ import annotations

from .terms import has_unbound_logic_var, has_unbound_var, normalize_eta

PROVED = "proved"
DISPROVED = "disproved"


class _Frame:
    """One running production: its key and the loop assumptions it used."""

    __slots__ = ("key", "assumed")

    def __init__(self, key):
        self.key = key
        self.assumed = {}  # key -> assumed status


class _InProgress:
    __slots__ = ("frame", "mode")

    def __init__(self, frame, mode):
        self.frame = frame
        self.mode = mode


class _Cond:
    """A settled outcome still conditioned on open calls."""

    __slots__ = ("status", "deps")

    def __init__(self, status, deps):
        self.status = status
        self.deps = deps  # key -> status this entry needs that call to reach


class Table:
    """Entries of one tabled predicate: canonical call text -> status."""

    __slots__ = ("pred", "mode", "entries")

    def __init__(self, pred, mode):
        self.pred = pred
        self.mode = mode
        self.entries = {}

    def rows(self):
        """Settled entries as source-syntax lines, sorted."""
        return sorted(
            f"{status} {key}."
            for key, status in self.entries.items()
            if status is PROVED or status is DISPROVED
        )

    def counts(self):
        proved = sum(1 for s in self.entries.values() if s is PROVED)
        disproved = sum(1 for s in self.entries.values() if s is DISPROVED)
        return proved, disproved


def eligible(args, level):
    """May a call with these arguments be tabled?"""
    if level == 0:
        return not any(has_unbound_var(a) for a in args)
    return not any(has_unbound_logic_var(a) for a in args)


def canonical_key(pred, args, budget=None):
    """The canonical text of a call: βη-short arguments, printed."""
    from .parser import print_term

    if not args:
        return pred
    parts = [pred] + [
        print_term(normalize_eta(a, budget), prec=3) for a in args
    ]
    return " ".join(parts)


def _lookup(st, key):
    table = st.tables.get(key.split(" ", 1)[0])
    return None if table is None else table.entries.get(key)


def _settle(st, key, status):
    """Propagate a plain settlement through conditional entries."""
    settled = [(key, status)]
    while settled:
        k0, s0 = settled.pop()
        doomed = []
        for table in st.tables.values():
            for k, v in list(table.entries.items()):
                if type(v) is not _Cond or k0 not in v.deps:
                    continue
                if v.deps[k0] is s0:
                    del v.deps[k0]
                    if not v.deps:
                        table.entries[k] = v.status
                        settled.append((k, v.status))
                else:
                    doomed.append(k)
        for k in doomed:
            _discard(st, k)


def _discard(st, key):
    """Drop an entry whose support failed, and everything resting on it."""
    doomed = [key]
    while doomed:
        k0 = doomed.pop()
        table = st.tables.get(k0.split(" ", 1)[0])
        if table is None or k0 not in table.entries:
            continue
        del table.entries[k0]
        for t in st.tables.values():
            for k, v in t.entries.items():
                if type(v) is _Cond and k0 in v.deps:
                    doomed.append(k)


def tabled_prove(st, pred, args, defn, producer):
    """Prove an eligible call through its table.

    producer is a zero-argument callable returning a fresh answer generator
    for the call's unfolding (it must not route back through the table).  A
    settled entry answers immediately; an in-progress entry is a loop and
    answers by mode.  Otherwise the producer runs for at most one answer
    and the outcome is recorded before this call becomes the one answer
    itself.  The call binds nothing: its arguments carry no instantiable
    variable.
    """
    table = st.tables.get(pred)
    if table is None:
        table = st.tables[pred] = Table(pred, defn.table_mode)
    stack = st.tab_stack
    key = canonical_key(pred, args, st.norm_budget)
    entry = table.entries.get(key)
    if entry is PROVED:
        yield
        return
    if entry is DISPROVED:
        return
    if type(entry) is _InProgress:
        assumed = PROVED if entry.mode == "coinductive" else DISPROVED
        if stack:
            stack[-1].assumed[key] = assumed
        if assumed is PROVED:
            yield
        return
    if type(entry) is _Cond:
        if stack:
            stack[-1].assumed.update(entry.deps)
        if entry.status is PROVED:
            yield
        return

    while True:  # restarts when a consumed assumption settles the wrong way
        frame = _Frame(key)
        stack.append(frame)
        table.entries[key] = _InProgress(frame, table.mode)
        try:
            found = False
            gen = producer()
            try:
                for _ in gen:
                    found = True
                    break
            finally:
                gen.close()
        except BaseException:
            stack.pop()
            table.entries.pop(key, None)
            raise
        stack.pop()
        deps = {}
        tainted = False
        for k, s in frame.assumed.items():
            if k == key:
                continue  # self-assumptions discharge themselves
            cur = _lookup(st, k)
            if type(cur) is _InProgress:
                deps[k] = s
            elif type(cur) is _Cond:
                if cur.status is s:
                    deps.update(cur.deps)
                else:
                    tainted = True
                    break
            elif cur is not s:  # settled the other way, or discarded
                tainted = True
                break
        if tainted:
            table.entries.pop(key, None)
            continue
        status = PROVED if found else DISPROVED
        if deps:
            table.entries[key] = _Cond(status, deps)
            if stack:
                stack[-1].assumed.update(deps)
        else:
            table.entries[key] = status
            _settle(st, key, status)
        if found:
            yield
        return


def clear_tables(st):
    st.tables.clear()
    del st.tab_stack[:]


def table_report(st, pred=None):
    """Printable dump of one table (or all), certificate style."""
    lines = []
    preds = [pred] if pred is not None else sorted(st.tables)
    for p in preds:
        table = st.tables.get(p)
        if table is None:
            lines.append(f"% no table for {p}")
            continue
        proved, disproved = table.counts()
        lines.append(
            f"% table {p} ({table.mode}): "
            f"{proved} proved, {disproved} disproved"
        )
        lines.extend(table.rows())
    return "\n".join(lines)
