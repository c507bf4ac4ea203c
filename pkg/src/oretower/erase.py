"""Erasing derivations from quantised towers.

The single-level engine removes the top level's delta, producing an
element y with y r = sigma(r) y for everything below.  Three branches, in
order:

* trivial delta: the top delta already vanishes, y = x.
* center moving: a central element c of the ring below with
  u = sigma(c) - c nonzero, central and regular yields y = u x + delta(c)
  (the commutator [x, c]); when u is invertible in the base the
  uncleared shift y = x + u^{-1} delta(c) is used instead.
* inner conjugator (height-1 matrix bases only): sigma is inner via some
  a, a^{-1} delta is an inner derivation via some v, and y = x - a v.

The full pass repeatedly erases the current top level, swaps the new
automorphism-only variable below the remaining delta levels, and finally
reorders so that the output tower lists y_1 ... y_n bottom to top.  Every
claimed relation is re-verified by explicit multiplication in the
original tower.
"""

from __future__ import annotations

import itertools
import warnings as _warnings
from dataclasses import dataclass, field as dc_field

from .errors import (
    CompatibilityFailed,
    HypothesisViolation,
    NotDiagonal,
    QEqualsOne,
    UnsupportedErasure,
)
from .scalars import Matrix, solve_linear_system
from .skewpoly import SkewPoly, apply_level_map, degree_leading, is_central
from .tower import (
    BaseMap,
    OreTower,
    TowerLevel,
    check_swap_compatibility,
    validate_tower,
)


@dataclass
class ErasureWitness:
    """Re-verifiable data backing one erasure step."""

    branch: str  # "trivial_delta" | "center_moving" | "inner"
    c: SkewPoly | None = None
    u: SkewPoly | None = None
    a: Matrix | None = None
    v: Matrix | None = None
    b: object | None = None  # base element shift in y = x - b, when it exists


@dataclass
class ErasureResult:
    y_elements: list[SkewPoly]
    new_tower: OreTower
    witnesses: list[ErasureWitness]
    warnings: list[str] = dc_field(default_factory=list)


def _copy_level(lvl: TowerLevel) -> TowerLevel:
    return TowerLevel(
        name=lvl.name,
        sigma_base=lvl.sigma_base,
        delta_base=lvl.delta_base,
        sigma_vars={j: (a, dict(c)) for j, (a, c) in lvl.sigma_vars.items()},
        delta_vars={j: dict(d) for j, d in lvl.delta_vars.items()},
        q=lvl.q,
    )


def _erased_name(name: str) -> str:
    if name.startswith("x"):
        return "y" + name[1:]
    return "y_" + name


# ---------------------------------------------------------------------------
# single-level erasure


def erase_top(tower: OreTower, search_degree_bound: int = 4):
    """Erase the top level's delta; returns (y, new_tower, witness)."""
    if tower.height == 0:
        raise UnsupportedErasure("tower has no levels")
    top = tower.height - 1
    lvl = tower.levels[top]

    if lvl.delta_is_zero():
        return SkewPoly.variable(tower, top), tower, ErasureWitness("trivial_delta")

    q = lvl.q
    if q is None:
        raise UnsupportedErasure(
            f"level {top + 1} has a nonzero delta but declares no q value"
        )
    if q == tower.base.field.one:
        raise QEqualsOne(f"level {top + 1} declares q = 1")

    found = _center_moving(tower, top, search_degree_bound)
    if found is not None:
        return found
    if tower.height == 1 and tower.base.kind == "matrix":
        return _inner_branch(tower)
    raise UnsupportedErasure(
        f"no central c with regular u = sigma(c) - c up to total degree "
        f"{search_degree_bound}, and the inner-conjugator branch needs a "
        f"height-1 matrix-algebra base"
    )


def _candidates(tower: OreTower, top: int, bound: int):
    """Candidate central elements: generator powers times lower monomials,
    ordered by total degree then lexicographically."""
    gen = tower.base.field.gen if tower.base.kind == "field" else None
    max_gen = bound if gen is not None else 0
    for total in range(bound + 1):
        seen = []
        for gen_pow in range(min(total, max_gen) + 1):
            var_deg = total - gen_pow
            for exp in _exponents(top, var_deg, tower.height):
                seen.append((gen_pow, exp))
        for gen_pow, exp in sorted(seen):
            coeff = tower.base.scalar(gen ** gen_pow) if gen_pow else tower.base.one
            yield SkewPoly(tower, {exp: coeff})


def _exponents(nvars: int, total: int, height: int):
    if nvars == 0:
        if total == 0:
            yield (0,) * height
        return
    for split in itertools.combinations(range(total + nvars - 1), nvars - 1):
        exp = []
        prev = -1
        for s in split:
            exp.append(s - prev - 1)
            prev = s
        exp.append(total + nvars - 2 - prev)
        yield tuple(exp) + (0,) * (height - nvars)


def _center_moving(tower: OreTower, top: int, bound: int):
    base = tower.base
    for c in _candidates(tower, top, bound):
        ok, _ = is_central(c, top_level=top)
        if not ok:
            continue
        u = apply_level_map("sigma", top, c) - c
        if u.is_zero():
            continue
        ok, _ = is_central(u, top_level=top)
        if not ok:
            continue
        if not _is_regular_monomial(tower, u):
            continue
        dc = apply_level_map("delta", top, c)
        x_top = SkewPoly.variable(tower, top)
        shift = None
        if u.is_base_element():
            u0 = u.constant_coefficient()
            u0_inv = base.invert(u0)
            y = x_top + SkewPoly.from_base(tower, u0_inv) * dc
            if dc.is_base_element():
                shift = -(u0_inv * dc.constant_coefficient())
        else:
            y = u * x_top + dc
        _assert_sigma_relation(tower, top, y)
        new_tower = _zero_top_delta(tower)
        return y, new_tower, ErasureWitness("center_moving", c=c, u=u, b=shift)
    return None


def _is_regular_monomial(tower: OreTower, p: SkewPoly) -> bool:
    if len(p.terms) != 1:
        return False
    coeff = next(iter(p.terms.values()))
    return tower.base.is_invertible(coeff)


def _assert_sigma_relation(tower: OreTower, top: int, y: SkewPoly) -> None:
    for g in _below_generators(tower, top):
        if y * g != apply_level_map("sigma", top, g) * y:
            raise UnsupportedErasure(
                f"internal check failed: y r != sigma(r) y for r = {g}"
            )


def _below_generators(tower: OreTower, top: int) -> list[SkewPoly]:
    gens = [SkewPoly.from_base(tower, g) for g in tower.base.generators()]
    gens.extend(SkewPoly.variable(tower, j) for j in range(top))
    return gens


def _zero_top_delta(tower: OreTower) -> OreTower:
    levels = [_copy_level(l) for l in tower.levels]
    top = levels[-1]
    levels[-1] = TowerLevel(
        name=_erased_name(top.name),
        sigma_base=top.sigma_base,
        delta_base=BaseMap.zero(),
        sigma_vars=top.sigma_vars,
        delta_vars={j: {} for j in top.delta_vars},
        q=top.q,
    )
    return OreTower(tower.base, levels)


def _inner_branch(tower: OreTower):
    base = tower.base
    field = base.field
    m = base.size
    lvl = tower.levels[0]
    units = base.basis()

    # delta must kill the center F*I (forced by q != 1; a failure here
    # means the declared maps were never a valid q-skew pair)
    d_one = tower.apply_delta0(0, base.one)
    if not d_one.is_zero():
        raise HypothesisViolation(
            "delta does not vanish on the center; the q-skew hypothesis fails"
        )

    # sigma(r) a = a r as a homogeneous system in the entries of a
    rows = []
    for e in units:
        se = tower.apply_sigma0(0, e)
        for s in range(m):
            for t in range(m):
                row = []
                for k in range(m):
                    for l in range(m):
                        coeff = field.zero
                        if l == t:
                            coeff = coeff + se.rows[s][k]
                        if k == s:
                            coeff = coeff - e.rows[l][t]
                        row.append(coeff)
                rows.append(row)
    a_vec = solve_linear_system(
        Matrix(field, rows), [field.zero] * len(rows)
    )
    a = Matrix(field, [a_vec[i * m : (i + 1) * m] for i in range(m)]) if a_vec else None
    if a is None or not a.is_invertible():
        raise UnsupportedErasure(
            "no invertible conjugator a with sigma(r) a = a r exists; "
            "sigma is not an inner automorphism of the matrix base"
        )
    a_inv = a.inverse()
    for e in units:
        if tower.apply_sigma0(0, e) != a * e * a_inv:
            raise UnsupportedErasure("conjugator solution does not reproduce sigma")

    # a^{-1} delta(r) = v r - r v as an inhomogeneous system in v
    rows, rhs = [], []
    for e in units:
        w = a_inv * tower.apply_delta0(0, e)
        for s in range(m):
            for t in range(m):
                row = []
                for k in range(m):
                    for l in range(m):
                        coeff = field.zero
                        if k == s:
                            coeff = coeff + e.rows[l][t]
                        if l == t:
                            coeff = coeff - e.rows[s][k]
                        row.append(coeff)
                rows.append(row)
                rhs.append(w.rows[s][t])
    v_vec = solve_linear_system(Matrix(field, rows), rhs)
    if v_vec is None:
        raise UnsupportedErasure(
            "a^{-1} delta is not an inner derivation of the matrix base"
        )
    v = Matrix(field, [v_vec[i * m : (i + 1) * m] for i in range(m)])
    b = a * v
    y = SkewPoly.variable(tower, 0) - SkewPoly.from_base(tower, b)
    _assert_sigma_relation(tower, 0, y)
    return y, _zero_top_delta(tower), ErasureWitness("inner", a=a, v=v, b=b)


# ---------------------------------------------------------------------------
# adjacent swaps


def swap_adjacent(tower: OreTower, upper: int) -> OreTower:
    """Exchange levels upper and upper-1 (0-based; the upper level moves down).

    The upper level must be automorphism-only with a diagonal action
    sigma(x_below) = lam * x_below; the moved-up level acquires
    sigma(x_moved) = lam^{-1} * x_moved and delta(x_moved) = 0.  Its q is
    dropped (with a warning) when delta_lower(lam) != 0.
    """
    if not 1 <= upper < tower.height:
        raise ValueError("swap index out of range")
    hi = tower.levels[upper]
    lo = tower.levels[upper - 1]
    if not hi.delta_is_zero():
        raise NotDiagonal(f"level {upper + 1} still carries a delta; cannot move it down")
    lam, c = tower.sigma_var(upper, upper - 1)
    if c:
        raise NotDiagonal(
            f"sigma of level {upper + 1} sends x_{upper} to {lam} * x_{upper} + {c}"
        )
    if not tower.base.is_invertible(lam):
        raise NotDiagonal(f"lambda = {lam} is not invertible in the base")
    compat = check_swap_compatibility(tower, upper, lam)
    if not compat.ok:
        raise CompatibilityFailed(
            f"levels {upper} and {upper + 1} do not commute as required; "
            f"witness {compat.witness}",
            witness=compat.witness,
        )

    p = upper - 1

    def remap_exp(exp: tuple) -> tuple:
        out = list(exp)
        out[p], out[p + 1] = out[p + 1], out[p]
        return tuple(out)

    def remap_terms(terms: dict) -> dict:
        return {remap_exp(e): coeff for e, coeff in terms.items()}

    new_levels = [_copy_level(l) for l in tower.levels[:p]]

    moved_down = TowerLevel(
        name=hi.name,
        sigma_base=hi.sigma_base,
        delta_base=hi.delta_base,
        sigma_vars={j: (a, dict(ct)) for j, (a, ct) in hi.sigma_vars.items() if j < p},
        delta_vars={j: dict(dt) for j, dt in hi.delta_vars.items() if j < p},
        q=hi.q,
    )
    q_kept = lo.q if (lo.q is None or compat.q_preserved) else None
    if lo.q is not None and q_kept is None:
        _warnings.warn(
            f"q of level {upper} dropped: delta({lam}) != 0 so the moved map "
            f"is no longer q-skew",
            stacklevel=2,
        )
    moved_up = TowerLevel(
        name=lo.name,
        sigma_base=lo.sigma_base,
        delta_base=lo.delta_base,
        sigma_vars={
            **{j: (a, dict(ct)) for j, (a, ct) in lo.sigma_vars.items() if j < p},
            p: (tower.base.invert(lam), {}),
        },
        delta_vars={
            **{j: dict(dt) for j, dt in lo.delta_vars.items() if j < p},
            p: {},
        },
        q=q_kept,
    )
    new_levels.extend([moved_down, moved_up])

    for k in range(upper + 1, tower.height):
        old = tower.levels[k]
        sigma_vars, delta_vars = {}, {}
        for j, (a, ct) in old.sigma_vars.items():
            nj = p + 1 if j == p else (p if j == p + 1 else j)
            sigma_vars[nj] = (a, remap_terms(ct))
        for j, dt in old.delta_vars.items():
            nj = p + 1 if j == p else (p if j == p + 1 else j)
            delta_vars[nj] = remap_terms(dt)
        new_levels.append(
            TowerLevel(
                name=old.name,
                sigma_base=old.sigma_base,
                delta_base=old.delta_base,
                sigma_vars=sigma_vars,
                delta_vars=delta_vars,
                q=old.q,
            )
        )
    try:
        return OreTower(tower.base, new_levels)
    except ValueError as exc:
        raise CompatibilityFailed(
            f"swap produced an ill-formed presentation: {exc}"
        ) from exc


# ---------------------------------------------------------------------------
# the full pass


def erase_all(
    tower: OreTower, search_degree_bound: int = 4, verify_degree: int = 4
) -> ErasureResult:
    """Erase every delta, returning the automorphism-only subtower data.

    Requires the diagonal quantised shape: sigma_i(x_j) = lam_ij x_j with
    lam_ij central invertible and fixed by all higher maps, and every
    level with a nonzero delta declaring q != 1.  The output satisfies
    tau_i restricted to the base = sigma_i restricted to the base and
    tau_i(y_j) = lam_ij y_j; all of it is re-verified by multiplication
    inside the original tower.
    """
    _check_erase_hypotheses(tower, search_degree_bound)
    n = tower.height
    collected_warnings: list[str] = []

    working = OreTower(tower.base, [_copy_level(l) for l in tower.levels])
    embed = [SkewPoly.variable(tower, i) for i in range(n)]
    orig = list(range(n))
    y_elements: list[SkewPoly | None] = [None] * n
    witnesses: list[ErasureWitness | None] = [None] * n

    done = 0
    while done < n:
        top = n - 1
        try:
            y_w, new_working, wit = erase_top(working, search_degree_bound)
        except (UnsupportedErasure, QEqualsOne) as exc:
            raise type(exc)(f"erasing level {orig[top] + 1}: {exc}") from exc
        _check_power_independence(working, y_w, wit, verify_degree)
        y_orig = _eval_in(tower, y_w, embed)
        idx = orig[top]
        y_elements[idx] = y_orig
        witnesses[idx] = wit
        embed[top] = y_orig
        working = new_working
        for pos in range(top, done, -1):
            working = _swap_collect(working, pos, collected_warnings)
            embed[pos - 1], embed[pos] = embed[pos], embed[pos - 1]
            orig[pos - 1], orig[pos] = orig[pos], orig[pos - 1]
        done += 1

    # bubble-sort back into original order; every level is sigma-only now
    changed = True
    while changed:
        changed = False
        for pos in range(n - 1):
            if orig[pos] > orig[pos + 1]:
                working = _swap_collect(working, pos + 1, collected_warnings)
                embed[pos], embed[pos + 1] = embed[pos + 1], embed[pos]
                orig[pos], orig[pos + 1] = orig[pos + 1], orig[pos]
                changed = True

    # trivially-erased levels kept their variable name; settle on y names
    renamed = []
    for pos, lvl in enumerate(working.levels):
        target = _erased_name(tower.levels[orig[pos]].name)
        renamed.append(
            lvl if lvl.name == target else TowerLevel(
                name=target,
                sigma_base=lvl.sigma_base,
                delta_base=lvl.delta_base,
                sigma_vars=lvl.sigma_vars,
                delta_vars=lvl.delta_vars,
                q=lvl.q,
            )
        )
    working = OreTower(working.base, renamed)

    report = validate_tower(working)
    if not report.ok:
        raise RuntimeError(
            f"erasure produced an invalid tower: {report.first_failure}"
        )

    _verify_relations(tower, working, y_elements)

    result = ErasureResult(
        y_elements=list(y_elements),
        new_tower=working,
        witnesses=list(witnesses),
        warnings=collected_warnings,
    )
    _attach_quantisation_warning(tower, result)
    return result


def _swap_collect(working: OreTower, upper: int, sink: list[str]) -> OreTower:
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        out = swap_adjacent(working, upper)
    sink.extend(str(w.message) for w in caught)
    return out


def _check_erase_hypotheses(tower: OreTower, search_degree_bound: int) -> None:
    report = validate_tower(tower)
    if not report.ok:
        raise HypothesisViolation(f"tower is invalid: {report.first_failure}")
    base = tower.base
    n = tower.height
    for i in range(n):
        lvl = tower.levels[i]
        for j in range(i):
            lam, c = tower.sigma_var(i, j)
            if c:
                raise HypothesisViolation(
                    f"sigma_{i + 1}(x_{j + 1}) has a nonzero c part; the "
                    f"diagonal hypothesis fails"
                )
            if not base.is_invertible(lam):
                raise HypothesisViolation(f"lambda[{i + 1},{j + 1}] is not invertible")
            if not base.is_central_element(lam):
                raise HypothesisViolation(f"lambda[{i + 1},{j + 1}] is not central")
            for k in range(i, n):
                if tower.apply_sigma0(k, lam) != lam:
                    raise HypothesisViolation(
                        f"sigma_{k + 1} moves lambda[{i + 1},{j + 1}]"
                    )
                dk = tower.apply_delta0(k, lam)
                if not (dk.is_zero() if hasattr(dk, "is_zero") else not dk):
                    raise HypothesisViolation(
                        f"delta_{k + 1} does not kill lambda[{i + 1},{j + 1}]"
                    )
        if lvl.q is not None and lvl.q == base.field.one:
            raise HypothesisViolation(f"level {i + 1} declares q = 1")
        if not lvl.delta_is_zero() and lvl.q is None:
            raise HypothesisViolation(
                f"level {i + 1} has a nonzero delta but declares no q"
            )


def _check_power_independence(
    working: OreTower, y: SkewPoly, wit: ErasureWitness, verify_degree: int
) -> None:
    """Leading coefficient of y^k must be u sigma(u) ... sigma^{k-1}(u) != 0."""
    if wit.branch != "center_moving" or wit.u is None:
        return
    top = working.height - 1
    u = wit.u
    if u.is_base_element():
        return  # uncleared form: y is monic in x_top
    expected = SkewPoly.one(working)
    factor = u
    power = SkewPoly.one(working)
    for k in range(1, verify_degree + 1):
        expected = expected * factor
        factor = apply_level_map("sigma", top, factor)
        power = power * y
        deg, lead = degree_leading(power, top)
        want = expected * SkewPoly.variable(working, top) ** k
        if deg != k or lead != want or lead.is_zero():
            raise RuntimeError(
                f"powers of y are not left-independent at exponent {k}: "
                f"leading form {lead}, expected {want}"
            )


def _eval_in(target: OreTower, p: SkewPoly, images: list[SkewPoly]) -> SkewPoly:
    total = SkewPoly.zero(target)
    for exp, coeff in p.terms.items():
        acc = SkewPoly.from_base(target, coeff)
        for j, e in enumerate(exp):
            if e:
                acc = acc * images[j] ** e
        total = total + acc
    return total


def _verify_relations(tower: OreTower, result_tower: OreTower, ys: list[SkewPoly]) -> None:
    base = tower.base
    n = tower.height
    for i in range(n):
        y_i = ys[i]
        for g in base.generators():
            tau_g = tower.apply_sigma0(i, g)
            lhs = y_i * SkewPoly.from_base(tower, g)
            rhs = SkewPoly.from_base(tower, tau_g) * y_i
            if lhs != rhs:
                raise RuntimeError(
                    f"relation y_{i + 1} r = tau(r) y_{i + 1} fails for r = {g}"
                )
        for j in range(i):
            lam, _ = tower.sigma_var(i, j)
            lhs = y_i * ys[j]
            rhs = SkewPoly.from_base(tower, lam) * ys[j] * y_i
            if lhs != rhs:
                raise RuntimeError(
                    f"relation y_{i + 1} y_{j + 1} = lambda y_{j + 1} y_{i + 1} fails"
                )


def _attach_quantisation_warning(tower: OreTower, result: ErasureResult) -> None:
    from .pi import pi_report

    report = pi_report(tower, order_bound=60)
    if report.verdict != "PI":
        result.warnings.append(
            "finite-order criteria fail: the quotient-ring equivalence is "
            "outside the supported scope (verdict "
            f"{report.verdict})"
        )
