"""Membership checks for the syntactic program classes: moded, chain,
G-chain, prechain.

The moded check works on the mode-grouped view of each clause: the declared
'in' argument places of an atom form its input tuple and the 'out' places its
output tuple, each preserving argument order.  Data flows from the head input
and the body atoms' outputs (the "source" groups) into the body atoms' inputs
and the head output (the "sink" groups).
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import SourceClause, SourceProgram
from .terms import Variable, mk_tuple, term_vars

MODED = "moded"
CHAIN = "chain"
GCHAIN = "gchain"
PRECHAIN = "prechain"

# Condition numbering used in violation entries: 1 is the variable-flow
# condition, 2 the tuple-disjointness condition.  The chain and G-chain
# checks have a single condition each, reported as 1.
COND_FLOW = 1
COND_DISJOINT = 2
COND_SHAPE = 1
COND_UNIT_RANGE = 1


class MissingModeError(LookupError):
    """A predicate is used but carries no mode directive."""


@dataclass
class FormReport:
    form: str
    violations: list  # (clause index, condition id, human-readable detail)

    @property
    def holds(self):
        return not self.violations

    def __str__(self):
        if self.holds:
            return "%s: holds" % self.form
        lines = ["%s: %d violation(s)" % (self.form, len(self.violations))]
        for idx, cond, detail in self.violations:
            lines.append("  clause %d, condition %d: %s" % (idx + 1, cond, detail))
        return "\n".join(lines)


@dataclass(frozen=True)
class ModedAtomView:
    predicate: str
    t_in: object  # input tuple term (a sink for data)
    t_out: object  # output tuple term (a source of data)


@dataclass(frozen=True)
class ModedClauseView:
    predicate: str
    head_in: object  # input tuple of the head
    head_out: object  # output tuple of the head
    body: tuple  # of ModedAtomView


def _group(atom, directive):
    ins = [a for a, m in zip(atom.args, directive.modes) if m == "in"]
    outs = [a for a, m in zip(atom.args, directive.modes) if m == "out"]
    return mk_tuple(ins), mk_tuple(outs)


def moded_view(clause: SourceClause, program: SourceProgram) -> ModedClauseView:
    """The mode-grouped form of a clause.  Raises MissingModeError when a
    used predicate has no directive."""
    views = []
    head_dir = program.mode_for(clause.head.functor)
    if head_dir is None:
        raise MissingModeError(
            "no mode directive for predicate %r" % clause.head.functor
        )
    head_in, head_out = _group(clause.head, head_dir)
    for atom in clause.body:
        d = program.mode_for(atom.functor)
        if d is None:
            raise MissingModeError(
                "no mode directive for predicate %r" % atom.functor
            )
        t_in, t_out = _group(atom, d)
        views.append(ModedAtomView(atom.functor, t_in, t_out))
    return ModedClauseView(clause.head.functor, head_in, head_out, tuple(views))


def source_groups(view: ModedClauseView):
    """The unprimed tuple family: head input first, then each body atom's
    output, left to right."""
    return (view.head_in, *(a.t_out for a in view.body))


def sink_groups(view: ModedClauseView):
    """The primed tuple family: each body atom's input, left to right, then
    the head output."""
    return (*(a.t_in for a in view.body), view.head_out)


def check_moded(p: SourceProgram) -> FormReport:
    """Both moded conditions on the grouped form of every clause:
    1. vars of each sink group are covered by the source groups up to it;
    2. the source groups are pairwise variable-disjoint."""
    violations = []
    for idx, clause in enumerate(p.clauses):
        view = moded_view(clause, p)
        sources = [set(term_vars(t)) for t in source_groups(view)]
        sinks = [set(term_vars(t)) for t in sink_groups(view)]
        available = set()
        for i, sink in enumerate(sinks):
            available |= sources[i]
            extra = sink - available
            if extra:
                violations.append(
                    (
                        idx,
                        COND_FLOW,
                        "sink group %d uses %s not bound by any earlier "
                        "source group" % (i, _var_list(extra)),
                    )
                )
        for i in range(len(sources)):
            for j in range(i + 1, len(sources)):
                shared = sources[i] & sources[j]
                if shared:
                    violations.append(
                        (
                            idx,
                            COND_DISJOINT,
                            "source groups %d and %d share %s"
                            % (i, j, _var_list(shared)),
                        )
                    )
    return FormReport(MODED, violations)


def _var_list(vs):
    return "{%s}" % ", ".join(sorted(v.name for v in vs))


def _as_source(p) -> SourceProgram:
    if isinstance(p, SourceProgram):
        return p
    return p.to_source()


def check_chain(p) -> FormReport:
    """Every clause is either a unit clause over a binary predicate (any
    terms), or a binary-atom clause threading distinct variables from the
    head input to the head output."""
    src = _as_source(p)
    violations = []
    for idx, clause in enumerate(src.clauses):
        detail = _chain_clause_violation(clause)
        if detail:
            violations.append((idx, COND_SHAPE, detail))
    return FormReport(CHAIN, violations)


def _chain_clause_violation(clause):
    if len(clause.head.args) != 2:
        return "head %s is not binary" % clause.head.functor
    if clause.is_unit:
        return None
    for atom in clause.body:
        if len(atom.args) != 2:
            return "body atom %s is not binary" % atom.functor
    xs = [clause.head.args[0]]
    for atom in clause.body:
        xs.append(atom.args[1])
    expected_inputs = xs[:-1]
    for atom, want in zip(clause.body, expected_inputs):
        if atom.args[0] is not want and atom.args[0] != want:
            return "argument threading broken at %s" % atom.functor
    if xs[-1] != clause.head.args[1]:
        return "head output is not the last body output"
    if any(not isinstance(x, Variable) for x in xs):
        return "threaded positions must be variables"
    if len({x.serial for x in xs}) != len(xs):
        return "threading variables are not distinct"
    return None


def check_gchain(p) -> FormReport:
    """Chain shape plus the groundness condition on unit clauses: every
    variable of the output term occurs in the input term."""
    src = _as_source(p)
    chain = check_chain(src)
    violations = [(i, c, d) for i, c, d in chain.violations]
    for idx, clause in enumerate(src.clauses):
        if not clause.is_unit or len(clause.head.args) != 2:
            continue
        t, t_out = clause.head.args
        extra = set(term_vars(t_out)) - set(term_vars(t))
        if extra:
            violations.append(
                (
                    idx,
                    COND_UNIT_RANGE,
                    "unit output uses %s absent from the input"
                    % _var_list(extra),
                )
            )
    return FormReport(GCHAIN, violations)


def check_prechain(p: SourceProgram) -> FormReport:
    """Prechain conditions on binary clauses: each sink term's variables are
    confined to the matching source term, and source terms are pairwise
    disjoint."""
    src = _as_source(p)
    violations = []
    for idx, clause in enumerate(src.clauses):
        atoms = (clause.head, *clause.body)
        bad = [a.functor for a in atoms if len(a.args) != 2]
        if bad:
            violations.append(
                (idx, COND_SHAPE, "non-binary atom(s): %s" % ", ".join(bad))
            )
            continue
        sources = [clause.head.args[0], *(a.args[1] for a in clause.body)]
        sinks = [*(a.args[0] for a in clause.body), clause.head.args[1]]
        src_vars = [set(term_vars(t)) for t in sources]
        for i, sink in enumerate(sinks):
            extra = set(term_vars(sink)) - src_vars[i]
            if extra:
                violations.append(
                    (
                        idx,
                        COND_FLOW,
                        "sink term %d uses %s outside its source term"
                        % (i, _var_list(extra)),
                    )
                )
        for i in range(len(src_vars)):
            for j in range(i + 1, len(src_vars)):
                shared = src_vars[i] & src_vars[j]
                if shared:
                    violations.append(
                        (
                            idx,
                            COND_DISJOINT,
                            "source terms %d and %d share %s"
                            % (i, j, _var_list(shared)),
                        )
                    )
    return FormReport(PRECHAIN, violations)


CHECKERS = {
    MODED: check_moded,
    CHAIN: check_chain,
    GCHAIN: check_gchain,
    PRECHAIN: check_prechain,
}
