"""Pattern unification: level side conditions, abstraction, pruning, trail."""

from hypothesis import given, settings, strategies as hs

from nablacheck.nodes import App, Bound, Const, Lam, LogicVar, NablaIndex, app
from nablacheck.terms import (
    Signature,
    deref,
    equal_modulo,
    iter_free_vars,
    normalize,
    struct_eq,
)
from nablacheck.unify import FAILURE, SUCCESS, NonPattern, Trail, UnifyCtx, unify

a, b, f, g = Const("a"), Const("b"), Const("f"), Const("g")


def ctx():
    return UnifyCtx(Signature())


def test_logic_var_binds_to_earlier_eigenvariable():
    st = ctx()
    x = st.sig.fresh_eigen("x")      # global 0
    y = st.sig.fresh_logic("Y")      # global 1: may depend on x
    assert unify(y, x, st) is SUCCESS
    assert deref(y) is x


def test_logic_var_rejects_later_eigenvariable():
    st = ctx()
    y = st.sig.fresh_logic("Y")      # global 0
    st.sig.fresh_eigen("x")
    z = st.sig.fresh_eigen("z")      # global 2: introduced after Y
    assert unify(y, z, st) is FAILURE
    assert deref(y) is y


def test_local_level_guards_nabla_indices():
    st = ctx()
    before = st.sig.fresh_logic("F")          # local 0: #0 is invisible
    st.sig.nabla_depth = 1
    after = st.sig.fresh_logic("G")           # local 1: #0 is visible
    assert unify(before, NablaIndex(0), st) is FAILURE
    assert unify(after, NablaIndex(0), st) is SUCCESS
    assert struct_eq(deref(after), NablaIndex(0))


def test_flex_rigid_abstracts_the_pattern_arguments():
    st = ctx()
    fv = st.sig.fresh_logic("F")              # knows neither x nor #0
    x = st.sig.fresh_eigen("x")
    st.sig.nabla_depth = 1
    lhs = app(fv, (x, NablaIndex(0)))
    rhs = app(g, (x, x, NablaIndex(0)))
    assert unify(lhs, rhs, st) is SUCCESS
    assert struct_eq(
        deref(fv), Lam(Lam(app(g, (Bound(1), Bound(1), Bound(0)))))
    )
    assert equal_modulo(lhs, rhs)


def test_occurs_check_fails():
    st = ctx()
    x = st.sig.fresh_logic("X")
    assert unify(x, app(f, (x,)), st) is FAILURE
    assert deref(x) is x


def test_rigid_occurrence_of_invisible_eigen_fails():
    st = ctx()
    x = st.sig.fresh_logic("X")
    y = st.sig.fresh_eigen("y")               # later: invisible to X
    assert unify(x, app(f, (y,)), st) is FAILURE


def test_flex_occurrence_is_pruned_not_failed():
    st = ctx()
    x = st.sig.fresh_logic("X")               # global 0
    st.sig.fresh_eigen("x")
    later = st.sig.fresh_logic("Y")           # global 2, too permissive
    assert unify(x, app(f, (later,)), st) is SUCCESS
    t = deref(x)
    assert type(t) is App and t.head is f
    (pruned,) = list(iter_free_vars(t))
    assert pruned.global_level <= x.global_level
    assert deref(later) is pruned


def test_rigid_rigid_decomposition_and_clash():
    st = ctx()
    x = st.sig.fresh_logic("X")
    assert unify(app(f, (x, b)), app(f, (a, b)), st) is SUCCESS
    assert struct_eq(deref(x), a)
    assert unify(app(f, (a,)), app(g, (a,)), st) is FAILURE
    assert unify(app(f, (a,)), app(f, (a, b)), st) is FAILURE


def test_eta_expansion_bridges_lam_and_atom():
    st = ctx()
    assert unify(Lam(app(f, (Bound(0),))), f, st) is SUCCESS
    assert unify(Lam(app(f, (Bound(0),))), g, st) is FAILURE


def test_same_var_arity_mismatch_is_non_pattern():
    st = ctx()
    x = st.sig.fresh_logic("X")
    st.sig.nabla_depth = 2
    r = unify(app(x, (NablaIndex(0), NablaIndex(1))), app(x, (NablaIndex(0),)), st)
    assert isinstance(r, NonPattern)


def test_constant_argument_is_non_pattern():
    st = ctx()
    x = st.sig.fresh_logic("X")
    r = unify(app(x, (a,)), a, st)
    assert isinstance(r, NonPattern)
    assert r.lhs is not None and r.rhs is not None


def test_repeated_argument_is_non_pattern():
    st = ctx()
    x = st.sig.fresh_logic("X")
    st.sig.nabla_depth = 1
    r = unify(app(x, (NablaIndex(0), NablaIndex(0))), a, st)
    assert isinstance(r, NonPattern)


def test_same_var_positional_intersection():
    st = ctx()
    x = st.sig.fresh_logic("X")
    st.sig.nabla_depth = 2
    i0, i1 = NablaIndex(0), NablaIndex(1)
    assert unify(app(x, (i0, i1)), app(x, (i1, i0)), st) is SUCCESS
    assert equal_modulo(app(x, (i0, i1)), app(x, (i1, i0)))
    # positions disagree everywhere, so the result ignores both arguments
    assert equal_modulo(app(x, (i0, i1)), app(x, (i0, i0)))


def test_same_var_keeps_agreeing_positions():
    st = ctx()
    x = st.sig.fresh_logic("X")
    st.sig.nabla_depth = 3
    i0, i1, i2 = NablaIndex(0), NablaIndex(1), NablaIndex(2)
    assert unify(app(x, (i0, i1)), app(x, (i0, i2)), st) is SUCCESS
    # the disagreeing second argument is dropped, the first survives
    assert equal_modulo(app(x, (i0, i1)), app(x, (i0, i2)))
    assert not equal_modulo(app(x, (i1, i0)), app(x, (i2, i0)))


def test_different_vars_keep_common_arguments():
    st = ctx()
    x = st.sig.fresh_logic("X")
    y = st.sig.fresh_logic("Y")
    st.sig.nabla_depth = 1
    i0 = NablaIndex(0)
    assert unify(app(x, (i0,)), app(y, (i0,)), st) is SUCCESS
    assert equal_modulo(app(x, (i0,)), app(y, (i0,)))


def test_flex_flex_bare_variables_alias():
    st = ctx()
    x = st.sig.fresh_logic("X")
    y = st.sig.fresh_logic("Y")
    assert unify(x, y, st) is SUCCESS
    assert deref(x) is deref(y)


def test_eigenvariables_are_rigid_unless_asked():
    st = ctx()
    x = st.sig.fresh_eigen("x")
    assert unify(x, a, st) is FAILURE
    assert unify(x, a, st, instantiate_eigen=True) is SUCCESS
    assert struct_eq(deref(x), a)


def test_instantiable_eigens_unify_with_each_other():
    st = ctx()
    r = st.sig.fresh_eigen("r")
    t = st.sig.fresh_eigen("t")
    assert unify(r, t, st, instantiate_eigen=True) is SUCCESS
    assert deref(r) is deref(t)


def test_trail_undo_restores_everything():
    st = ctx()
    x = st.sig.fresh_logic("X")
    y = st.sig.fresh_logic("Y")
    mark = st.trail.mark()
    assert unify(app(f, (x, y)), app(f, (a, b)), st) is SUCCESS
    assert st.trail.bound_since(mark)
    st.trail.undo_to(mark)
    assert deref(x) is x and deref(y) is y
    assert len(st.trail) == mark


def test_failure_leaves_no_bindings():
    st = ctx()
    x = st.sig.fresh_logic("X")
    mark = st.trail.mark()
    # X binds to a first, then b clashes; the trail must be rewound
    assert unify(app(f, (x, x)), app(f, (a, b)), st) is FAILURE
    assert len(st.trail) == mark
    assert deref(x) is x


def test_non_pattern_leaves_no_bindings():
    st = ctx()
    x = st.sig.fresh_logic("X")
    y = st.sig.fresh_logic("Y")
    mark = st.trail.mark()
    r = unify(app(f, (x, app(y, (a,)))), app(f, (b, b)), st)
    assert isinstance(r, NonPattern)
    assert len(st.trail) == mark
    assert deref(x) is x


def test_beta_redexes_normalize_before_unification():
    st = ctx()
    x = st.sig.fresh_logic("X")
    lhs = app(Lam(app(f, (Bound(0),))), (x,))
    assert unify(lhs, app(f, (a,)), st) is SUCCESS
    assert struct_eq(deref(x), a)


# ---------------------------------------------------------------------------
# Randomized: success means the two sides became equal, failure is clean
# ---------------------------------------------------------------------------

def _ground():
    return hs.recursive(
        hs.sampled_from([a, b, NablaIndex(0)]),
        lambda sub: hs.one_of(
            hs.builds(lambda s: app(f, (s,)), sub),
            hs.builds(lambda s, t: app(g, (s, t)), sub, sub),
            hs.builds(Lam, sub),
        ),
        max_leaves=6,
    )


@settings(max_examples=200, deadline=None)
@given(_ground(), _ground(), hs.integers(0, 2))
def test_unify_postconditions(lhs_g, rhs_g, nvars):
    st = ctx()
    st.sig.nabla_depth = 1
    xs = [st.sig.fresh_logic(f"X{i}") for i in range(nvars)]
    lhs = app(f, (lhs_g, *xs))
    rhs = app(f, (rhs_g, *(reversed(xs))))
    mark = st.trail.mark()
    r = unify(lhs, rhs, st)
    if r is SUCCESS:
        assert equal_modulo(lhs, rhs)
    else:
        assert len(st.trail) == mark
    st.trail.undo_to(mark)
