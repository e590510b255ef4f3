"""Symmetry computation for the non-abelian Laurent ODE
u_t = uv - uv^-1 - v^-1,  v_t = -vu + vu^-1 + u^-1.

A degree-n flow ansatz u_tau = Q1, v_tau = Q2 carries one fresh unknown per
reduced word of degree <= n.  Requiring the flow to commute with the system
([D_t, D_tau] u = [D_t, D_tau] v = 0), plus the cheaper first-order side
condition D_tau(I) = sum(a_k I^k) for the known first integral
I = u v u^-1 v^-1, yields large sparse linear selection systems for those
unknowns.  This module formulates the conditions, splits them into
equations, and harvests vanishing unknowns straight from a condition
without materializing its system (selective splitting).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFirstIntegralError, TooLargeError
from .linsys import (FORMULATE_MAX_UNKNOWNS, KIND_A, KIND_B, KIND_C,
                     AffineForm, Equation, LinearSystem, UnknownId,
                     canonicalize, unknown_limit)
from .ncalgebra import (EMPTY_WORD, U, U_INV, V, V_INV, Derivation, NCPoly,
                        Word, apply_derivation, word_pow)
from .solver import SolutionState, ZeroRegistry, lsss_solve, prune_zeros

#: Group commutator u v u^-1 v^-1 and its inverse: the generating first
#: integrals of the default system.
COMMUTATOR_UV = Word((U, V, U_INV, V_INV))
COMMUTATOR_VU = Word((V, U, V_INV, U_INV))

DEFAULT_K0 = 3


@dataclass
class ODESystem:
    """The system flow D_t, with unknown-free Laurent polynomial images."""

    dt: Derivation

    def __post_init__(self):
        if self.dt.has_unknowns:
            raise ValueError("system images must be unknown-free")


def kontsevich_system() -> ODESystem:
    p1 = NCPoly({Word((U, V)): 1, Word((U, V_INV)): -1, Word((V_INV,)): -1})
    p2 = NCPoly({Word((V, U)): -1, Word((V, U_INV)): 1, Word((U_INV,)): 1})
    return ODESystem(Derivation(p1, p2, name="Dt"))


def enumerate_words(max_degree: int) -> list[Word]:
    """All reduced words of degree <= max_degree, in deglex order.

    Counts satisfy t(n) = 3 t(n-1) + 2 with t(0) = 1: every shorter word
    extends by the three letters that do not cancel, and the empty word by
    all four.
    """
    words = [EMPTY_WORD]
    level: list[Word] = [EMPTY_WORD]
    for _ in range(max_degree):
        nxt = []
        for w in level:
            last = w[-1] if w else None
            for g in (U, V, U_INV, V_INV):
                if last is None or g != (last ^ 2):
                    nxt.append(Word(w + (g,)))
        words.extend(nxt)
        level = nxt
    return words


def ansatz_term_count(degree: int) -> int:
    """Closed form of the t(n) = 3 t(n-1) + 2 recursion."""
    return 2 * 3 ** degree - 1


@dataclass
class SymmetryAnsatz:
    """Most general degree-n flow with one fresh unknown per term."""

    degree: int
    dtau: Derivation
    words: tuple[Word, ...]
    unknowns: tuple[UnknownId, ...]

    @property
    def unknown_count(self) -> int:
        return len(self.unknowns)


def build_ansatz(degree: int) -> SymmetryAnsatz:
    if degree < 1:
        raise ValueError("ansatz degree must be >= 1")
    words = enumerate_words(degree)
    t = len(words)
    unknowns = tuple(UnknownId(KIND_C, i) for i in range(2 * t))
    q1 = NCPoly._from_acc(
        {w: AffineForm.unknown(unknowns[i]) for i, w in enumerate(words)})
    q2 = NCPoly._from_acc(
        {w: AffineForm.unknown(unknowns[t + i]) for i, w in enumerate(words)})
    return SymmetryAnsatz(degree, Derivation(q1, q2, name="Dtau"),
                          tuple(words), unknowns)


def prune_ncpoly(p: NCPoly, registry: ZeroRegistry) -> NCPoly:
    """Prune every coefficient; words whose coefficient vanishes drop out."""
    if not len(registry):
        return p
    acc = {}
    for w, c in p.terms.items():
        pruned = prune_zeros(c, registry)
        if not pruned.is_zero:
            acc[w] = pruned
    return NCPoly._from_acc(acc)


def _pruned_dtau(ansatz: SymmetryAnsatz,
                 registry: ZeroRegistry | None) -> Derivation:
    if registry is None or not len(registry):
        return ansatz.dtau
    return Derivation(prune_ncpoly(ansatz.dtau.image_u, registry),
                      prune_ncpoly(ansatz.dtau.image_v, registry),
                      name=ansatz.dtau.name)


def formulate_symcon(system: ODESystem, ansatz: SymmetryAnsatz, which: str,
                     registry: ZeroRegistry | None = None) -> NCPoly:
    """The commutator condition D_tau(D_t x) - D_t(D_tau x) for x = u or v.

    Identically zero exactly when the ansatz flow commutes with the system
    on that generator.  A registry prunes the ansatz before formulating.
    """
    dtau = _pruned_dtau(ansatz, registry)
    if which == "u":
        dtx, qx = system.dt.image_u, dtau.image_u
    elif which == "v":
        dtx, qx = system.dt.image_v, dtau.image_v
    else:
        raise ValueError("which must be 'u' or 'v'")
    return apply_derivation(dtau, dtx) - apply_derivation(system.dt, qx)


@dataclass
class NecessaryCondition:
    """Residual of D_tau(target) = sum over k of aux[k0+k] * I^k."""

    target: NCPoly
    k0: int
    aux: tuple[UnknownId, ...]
    residual: NCPoly


def formulate_nc(system: ODESystem, ansatz: SymmetryAnsatz,
                 target: NCPoly | Word, k0: int = DEFAULT_K0,
                 registry: ZeroRegistry | None = None) -> NecessaryCondition:
    """First-order side condition for a first integral target.

    The target must satisfy D_t(target) = 0 (checked).  Fresh auxiliary
    unknowns a (for the commutator integral) or b (for its inverse) absorb
    the span of integral powers; aux[i] multiplies I^(i - k0).
    """
    if isinstance(target, Word):
        target = NCPoly.from_word(target)
    if not apply_derivation(system.dt, target).is_zero:
        raise NotFirstIntegralError(
            "target is not annihilated by the system flow")
    kind = KIND_B if COMMUTATOR_VU in target.terms else KIND_A
    aux = tuple(UnknownId(kind, i) for i in range(2 * k0 + 1))
    dtau = _pruned_dtau(ansatz, registry)
    residual = apply_derivation(dtau, target)
    for i, uid in enumerate(aux):
        power = word_pow(COMMUTATOR_UV, i - k0)
        residual = residual - NCPoly.from_word(power, AffineForm.unknown(uid))
    return NecessaryCondition(target, k0, aux, residual)


def complete_split(p: NCPoly, universe=None, start_id: int = 0) -> LinearSystem:
    """One equation per distinct word with a nonzero coefficient.

    Words are taken in deglex order; equations arising from distinct words
    are never deduplicated even when their content coincides.
    """
    if universe is None:
        universe = p.unknowns()
    equations = [
        canonicalize(Equation(p.terms[w], start_id + i))
        for i, w in enumerate(p.sorted_words())
    ]
    return LinearSystem(equations, frozenset(universe))


def selective_split(p: NCPoly, registry: ZeroRegistry) -> int:
    """Harvest zeros from words whose pruned coefficient is a single term.

    One pass in deglex order; finds registered inside the pass take effect
    immediately, and ``p`` itself is not rewritten.  Returns the number of
    newly registered unknowns.
    """
    found = 0
    for w in p.sorted_words():
        coeff = prune_zeros(p.terms[w], registry)
        if coeff.term_count == 1 and coeff.const == 0:
            (uid,) = coeff.coeffs
            if registry.add(uid):
                found += 1
    return found


def build_symmetry_system(degree: int, include_nc: bool = False,
                          k0: int = DEFAULT_K0) -> LinearSystem:
    """Fully formulated and split system for a degree-n symmetry.

    Both commutator conditions are always included; ``include_nc`` prepends
    the split of the first-integral side condition together with its
    auxiliary unknowns.
    """
    _check_degree_guard(degree)
    system = kontsevich_system()
    ansatz = build_ansatz(degree)
    parts: list[LinearSystem] = []
    universe: set[UnknownId] = set(ansatz.unknowns)
    if include_nc:
        nc = formulate_nc(system, ansatz, COMMUTATOR_UV, k0)
        universe.update(nc.aux)
        parts.append(complete_split(nc.residual))
    parts.append(complete_split(formulate_symcon(system, ansatz, "u")))
    parts.append(complete_split(formulate_symcon(system, ansatz, "v")))
    equations = []
    for part in parts:
        for eq in part.equations:
            equations.append(Equation(eq.lhs, len(equations)))
    return LinearSystem(equations, frozenset(universe))


@dataclass
class SystemStats:
    """One row of the size table for a degree-n symmetry computation.

    Counting convention: equations are counted after combining like words
    within one polynomial; terms count the unknowns occurring per equation.
    e1/t1 cover the split of D_tau(I) (the side condition without its
    auxiliary unknowns); e2/t2 cover both commutator conditions, duplicates
    across the two included.
    """

    n: int
    k: int
    e1: int
    t1: int
    e2: int
    t2: int
    p: int


def _check_degree_guard(degree: int) -> None:
    k = 2 * ansatz_term_count(degree)
    limit = unknown_limit(FORMULATE_MAX_UNKNOWNS)
    if k > limit:
        raise TooLargeError(
            f"degree {degree} needs {k} unknowns, over the guard of {limit}")


def system_stats(degree: int, k0: int = DEFAULT_K0) -> SystemStats:
    """Formulate everything for one degree, count it, and solve for p."""
    _check_degree_guard(degree)
    system = kontsevich_system()
    ansatz = build_ansatz(degree)

    dtau_i = apply_derivation(ansatz.dtau, NCPoly.from_word(COMMUTATOR_UV))
    counted = complete_split(dtau_i)
    e1, t1 = len(counted), counted.term_total

    nc = formulate_nc(system, ansatz, COMMUTATOR_UV, k0)
    split_nc = complete_split(nc.residual)
    split_u = complete_split(formulate_symcon(system, ansatz, "u"))
    split_v = complete_split(formulate_symcon(system, ansatz, "v"))
    e2 = len(split_u) + len(split_v)
    t2 = split_u.term_total + split_v.term_total

    universe = frozenset(ansatz.unknowns) | frozenset(nc.aux)
    equations = []
    for part in (split_nc, split_u, split_v):
        for eq in part.equations:
            equations.append(Equation(eq.lhs, len(equations)))
    state = lsss_solve(LinearSystem(equations, universe))
    return SystemStats(degree, ansatz.unknown_count, e1, t1, e2, t2,
                       state.free_count)


def find_first_integrals(system: ODESystem, degree: int) -> SolutionState:
    """Dimension of the space of first integrals of degree <= n.

    Builds a one-polynomial ansatz with a fresh unknown per word, splits
    D_t(ansatz) completely and solves; the free count is the dimension
    (constants included).
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    words = enumerate_words(degree)
    unknowns = [UnknownId(KIND_C, i) for i in range(len(words))]
    ansatz = NCPoly._from_acc(
        {w: AffineForm.unknown(u) for w, u in zip(words, unknowns)})
    condition = apply_derivation(system.dt, ansatz)
    return lsss_solve(complete_split(condition, universe=unknowns))


def first_integral_basis(system: ODESystem, degree: int) -> list[NCPoly]:
    """Concrete integrals spanning the solution space of the search above."""
    words = enumerate_words(degree)
    unknowns = [UnknownId(KIND_C, i) for i in range(len(words))]
    state = find_first_integrals(system, degree)
    out = []
    for vec in state.basis():
        poly = NCPoly._from_acc(
            {w: AffineForm.constant(vec[u])
             for w, u in zip(words, unknowns) if vec.get(u, 0) != 0})
        out.append(poly)
    return out
