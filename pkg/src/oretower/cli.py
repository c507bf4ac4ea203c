"""Tower-definition files, expression parsing, and the command driver.

Tower files are line-oriented with a ``[base]`` section and one
``[[level]]`` section per variable::

    [base]
    kind = field            # or: matrix (with size = m)
    field = cyclotomic(3)   # Q | gf(p) | cyclotomic(n) | Q(t) | ...

    [[level]]
    var = x1

    [[level]]
    var = x2
    sigma x1 = z * x1       # sigma of this level on a lower variable
    delta x1 = 1            # delta of this level on a lower variable
    q = z                   # optional quantisation value

Base maps take ``sigma_base`` / ``delta_base`` values: ``id`` / ``zero``,
a scalar expression (the image of the field generator), or for matrix
bases ``conj(M)``, ``inner(M)`` and the raw ``linear(L)`` form.

Expressions use + - * / ^, parentheses, integer literals, the field
generator by name, matrix literals ``[[...], [...]]``, and tower
variables; adjacency multiplies, so rendered polynomials such as
``(q - 1) * x1 x2 + 1`` parse back.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings as _warnings

from .errors import (
    FieldMismatch,
    OreError,
    ParseError,
    ScalarError,
    UnknownVariableReference,
)
from .erase import erase_all, erase_top, swap_adjacent
from .graded import associated_graded_tower, level_sigma, rees_closure_check
from .pi import centrality_witness, pi_report
from .scalars import Matrix, Scalar, parse_field
from .skewpoly import SkewPoly, is_central
from .tower import (
    BaseMap,
    BaseRing,
    OreTower,
    TowerLevel,
    map_order,
    validate_tower,
)


# ---------------------------------------------------------------------------
# expression tokens


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}:{self.value}"


_SYMBOLS = "+-*/^()[],"


def _tokenize(text: str, line: int, col_offset: int = 0) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1 + col_offset
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("num", int(text[i:j]), line, col))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, col))
            i = j
        elif ch in _SYMBOLS:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
        else:
            raise ParseError(line, col, f"unexpected character {ch!r}")
    tokens.append(_Token("end", None, line, len(text) + 1 + col_offset))
    return tokens


class _ExprParser:
    """Recursive-descent evaluator for scalar / matrix / polynomial values."""

    def __init__(self, tokens, context):
        self.tokens = tokens
        self.pos = 0
        self.ctx = context

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind) -> _Token:
        tok = self.take()
        if tok.kind != kind:
            raise ParseError(tok.line, tok.col, f"expected {kind!r}, found {tok.value!r}")
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(tok.line, tok.col, f"unexpected {tok.value!r}")
        return value

    # expr := term (('+'|'-') term)*
    def expr(self):
        value = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = self._add(value, rhs, op) if op.kind == "+" else self._sub(value, rhs, op)
        return value

    # term := unary (('*'|'/') unary | <adjacent unary>)*
    def term(self):
        value = self.unary()
        while True:
            tok = self.peek()
            if tok.kind in ("*", "/"):
                op = self.take()
                rhs = self.unary()
                value = self._mul(value, rhs, op) if op.kind == "*" else self._div(value, rhs, op)
            elif tok.kind in ("num", "ident", "(", "["):
                rhs = self.unary()
                value = self._mul(value, rhs, tok)
            else:
                return value

    def unary(self):
        tok = self.peek()
        if tok.kind == "-":
            self.take()
            return self._neg(self.unary())
        return self.power()

    def power(self):
        value = self.primary()
        if self.peek().kind == "^":
            op = self.take()
            sign = 1
            if self.peek().kind == "-":
                self.take()
                sign = -1
            num = self.expect("num")
            value = self._pow(value, sign * num.value, op)
        return value

    def primary(self):
        tok = self.take()
        if tok.kind == "num":
            return self.ctx.field.coerce(tok.value)
        if tok.kind == "(":
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind == "[":
            return self.matrix(tok)
        if tok.kind == "ident":
            return self.ctx.resolve(tok)
        raise ParseError(tok.line, tok.col, f"unexpected {tok.value!r}")

    def matrix(self, opening: _Token) -> Matrix:
        if not self.ctx.allow_matrix:
            raise FieldMismatch("matrix literal where a scalar is required")
        rows = []
        while True:
            self.expect("[")
            row = []
            while True:
                entry = self.expr()
                if not isinstance(entry, Scalar):
                    raise ParseError(opening.line, opening.col, "matrix entries must be scalars")
                row.append(entry)
                if self.peek().kind == ",":
                    self.take()
                    continue
                break
            self.expect("]")
            rows.append(row)
            if self.peek().kind == ",":
                self.take()
                continue
            break
        self.expect("]")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ParseError(opening.line, opening.col, "ragged matrix literal")
        return Matrix(self.ctx.field, rows)

    # -- operations over the scalar/matrix/poly union ---------------------

    def _promote_pair(self, a, b, op):
        if isinstance(a, SkewPoly) or isinstance(b, SkewPoly):
            return self.ctx.as_poly(a, op), self.ctx.as_poly(b, op)
        if isinstance(a, Matrix) or isinstance(b, Matrix):
            return a, b
        return a, b

    def _add(self, a, b, op):
        a, b = self._promote_pair(a, b, op)
        if isinstance(a, Matrix) != isinstance(b, Matrix):
            raise ParseError(op.line, op.col, "cannot add a matrix and a scalar")
        return a + b

    def _sub(self, a, b, op):
        a, b = self._promote_pair(a, b, op)
        if isinstance(a, Matrix) != isinstance(b, Matrix):
            raise ParseError(op.line, op.col, "cannot subtract a matrix and a scalar")
        return a - b

    def _mul(self, a, b, op):
        a, b = self._promote_pair(a, b, op)
        return a * b

    def _div(self, a, b, op):
        if isinstance(b, SkewPoly) or isinstance(b, Matrix):
            raise ParseError(op.line, op.col, "division only by scalars")
        if b.is_zero():
            raise ParseError(op.line, op.col, "division by zero")
        if isinstance(a, SkewPoly):
            return a * SkewPoly.from_base(a.tower, a.tower.base.scalar(b.inverse()))
        return a / b

    def _neg(self, a):
        return -a

    def _pow(self, a, k, op):
        if isinstance(a, SkewPoly) and k < 0:
            raise ParseError(op.line, op.col, "negative powers of polynomials")
        try:
            return a ** k
        except (ScalarError, ValueError) as exc:
            raise ParseError(op.line, op.col, str(exc)) from exc


class _Context:
    """Name resolution for one expression: field generator and tower variables."""

    def __init__(self, field, tower=None, allowed_vars=(), all_vars=(), allow_matrix=False):
        self.field = field
        self.tower = tower
        self.allowed_vars = list(allowed_vars)
        self.all_vars = list(all_vars)
        self.allow_matrix = allow_matrix

    def resolve(self, tok: _Token):
        name = tok.value
        if self.tower is not None and name in self.allowed_vars:
            return SkewPoly.variable(self.tower, self.allowed_vars.index(name))
        gen_name = getattr(self.field, "gen_name", None)
        if gen_name is not None and name == gen_name:
            return self.field.gen
        inner = getattr(self.field, "inner", None)
        seen = set()
        while inner is not None and id(inner) not in seen:
            seen.add(id(inner))
            if getattr(inner, "gen_name", None) == name:
                return self.field.coerce(inner.gen)
            inner = getattr(inner, "inner", None)
        if name in self.all_vars:
            raise UnknownVariableReference(
                tok.line, tok.col, f"variable {name!r} is not in scope here"
            )
        if name[-1].isdigit():
            raise UnknownVariableReference(
                tok.line, tok.col, f"unknown variable {name!r}"
            )
        raise ParseError(tok.line, tok.col, f"unknown name {name!r}")

    def as_poly(self, value, op) -> SkewPoly:
        if isinstance(value, SkewPoly):
            return value
        if self.tower is None:
            raise ParseError(op.line, op.col, "polynomial value in a scalar-only context")
        return SkewPoly.from_base(self.tower, self.tower.base.coerce(value))


def _eval_expr(text, line, context, col_offset=0):
    return _ExprParser(_tokenize(text, line, col_offset), context).parse()


# ---------------------------------------------------------------------------
# tower files


def parse_tower_text(text: str) -> OreTower:
    """Parse a tower definition; returns an unvalidated tower."""
    sections = _split_sections(text)
    if not sections or sections[0][0] != "base":
        raise ParseError(1, 1, "file must start with a [base] section")
    base = _parse_base(sections[0][1])
    level_sections = [s for s in sections[1:]]
    for kind, _items, line in level_sections:
        if kind != "level":
            raise ParseError(line, 1, f"unexpected section [{kind}]")

    names = []
    for _kind, items, line in level_sections:
        var_entry = next((v for k, v, _l in items if k == "var"), None)
        if var_entry is None:
            raise ParseError(line, 1, "level section missing 'var'")
        if not var_entry.strip().isidentifier():
            raise ParseError(line, 1, f"bad variable name {var_entry!r}")
        names.append(var_entry.strip())
    if len(set(names)) != len(names):
        raise ParseError(1, 1, "duplicate variable names")

    levels = [TowerLevel(name) for name in names]
    for i, (_kind, items, _line) in enumerate(level_sections):
        shell = OreTower(base, [_shallow_level(l) for l in levels])
        levels[i] = _parse_level(base, shell, names, i, items)
    return OreTower(base, levels)


def parse_tower_file(path: str) -> OreTower:
    with open(path, encoding="utf-8") as fh:
        return parse_tower_text(fh.read())


def _shallow_level(lvl: TowerLevel) -> TowerLevel:
    return TowerLevel(
        name=lvl.name,
        sigma_base=lvl.sigma_base,
        delta_base=lvl.delta_base,
        sigma_vars={j: (a, dict(c)) for j, (a, c) in lvl.sigma_vars.items()},
        delta_vars={j: dict(d) for j, d in lvl.delta_vars.items()},
        q=lvl.q,
    )


def _split_sections(text: str):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("[["):
            if not stripped.endswith("]]"):
                raise ParseError(lineno, 1, "unterminated section header")
            current = (stripped[2:-2].strip(), [], lineno)
            sections.append(current)
        elif stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError(lineno, 1, "unterminated section header")
            current = (stripped[1:-1].strip(), [], lineno)
            sections.append(current)
        else:
            if current is None:
                raise ParseError(lineno, 1, "content before the first section")
            if "=" not in line:
                raise ParseError(lineno, 1, "expected 'key = value'")
            key, _, value = line.partition("=")
            current[1].append((key.strip(), value.strip(), lineno))
    return sections


def _parse_base(items) -> BaseRing:
    kind = "field"
    field = None
    size = None
    for key, value, line in items:
        if key == "kind":
            if value not in ("field", "matrix"):
                raise ParseError(line, 1, f"unknown base kind {value!r}")
            kind = value
        elif key == "field":
            try:
                field = parse_field(value)
            except ValueError as exc:
                raise ParseError(line, 1, str(exc)) from exc
        elif key == "size":
            if not value.isdigit() or int(value) < 1:
                raise ParseError(line, 1, f"bad matrix size {value!r}")
            size = int(value)
        else:
            raise ParseError(line, 1, f"unknown base key {key!r}")
    if field is None:
        raise ParseError(1, 1, "base section missing 'field'")
    if kind == "matrix":
        if size is None:
            raise ParseError(1, 1, "matrix base missing 'size'")
        return BaseRing.matrix_ring(field, size)
    if size is not None:
        raise ParseError(1, 1, "'size' is only valid for matrix bases")
    return BaseRing.field_ring(field)


def _parse_level(base, shell, names, index, items) -> TowerLevel:
    field = base.field
    sigma_base = BaseMap.identity()
    delta_base = BaseMap.zero()
    sigma_vars: dict = {}
    delta_vars: dict = {}
    q = None
    delta_base_entry = None

    poly_ctx = _Context(
        field,
        tower=shell,
        allowed_vars=names[:index],
        all_vars=names,
        allow_matrix=base.kind == "matrix",
    )
    scalar_ctx = _Context(field, all_vars=names)
    matrix_ctx = _Context(field, all_vars=names, allow_matrix=True)

    for key, value, line in items:
        if key == "var":
            continue
        if key == "sigma_base":
            sigma_base = _parse_base_map("sigma", value, line, base, scalar_ctx, matrix_ctx)
        elif key == "delta_base":
            delta_base_entry = (value, line)
        elif key == "q":
            q_val = _eval_expr(value, line, scalar_ctx)
            if not isinstance(q_val, Scalar):
                raise FieldMismatch("q must be a scalar")
            q = q_val
        elif key.startswith("sigma ") or key.startswith("delta "):
            target = key.split(None, 1)[1].strip()
            if target not in names:
                raise UnknownVariableReference(
                    line, 1, f"unknown variable {target!r}"
                )
            j = names.index(target)
            if j >= index:
                raise UnknownVariableReference(
                    line, 1, f"variable {target!r} is not below level {index + 1}"
                )
            val = poly_ctx.as_poly(
                _eval_expr(value, line, poly_ctx), _Token("=", "=", line, 1)
            )
            if key.startswith("sigma "):
                sigma_vars[j] = _split_sigma_image(val, j, line)
            else:
                _check_support(val, index, line)
                delta_vars[j] = dict(val.terms)
        else:
            raise ParseError(line, 1, f"unknown level key {key!r}")

    if delta_base_entry is not None:
        value, line = delta_base_entry
        delta_base = _parse_base_map(
            "delta", value, line, base, scalar_ctx, matrix_ctx, sigma_base
        )
    return TowerLevel(
        name=names[index],
        sigma_base=sigma_base,
        delta_base=delta_base,
        sigma_vars=sigma_vars,
        delta_vars=delta_vars,
        q=q,
    )


def _split_sigma_image(poly: SkewPoly, j: int, line: int):
    """Decompose sigma(x_j) = a * x_j + c with c below x_j."""
    height = poly.tower.height
    unit = tuple(1 if k == j else 0 for k in range(height))
    a = poly.terms.get(unit, poly.tower.base.zero)
    c_terms = {}
    for exp, coeff in poly.terms.items():
        if exp == unit:
            continue
        if any(exp[k] for k in range(j, height)):
            raise ParseError(
                line, 1, f"sigma image must be a * x{j + 1} + (terms below x{j + 1})"
            )
        c_terms[exp] = coeff
    return a, c_terms


def _check_support(poly: SkewPoly, level: int, line: int) -> None:
    if any(k >= level for k in poly.support_levels()):
        raise ParseError(line, 1, f"delta image must live below level {level + 1}")


def _parse_base_map(kind, value, line, base, scalar_ctx, matrix_ctx, sigma_base=None):
    text = value.strip()
    if kind == "sigma" and text == "id":
        return BaseMap.identity()
    if kind == "delta" and text == "zero":
        return BaseMap.zero()
    for head in ("conj", "inner", "linear"):
        if text.startswith(head + "(") and text.endswith(")"):
            if base.kind != "matrix":
                raise FieldMismatch(f"{head}(...) requires a matrix base")
            inner_text = text[len(head) + 1 : -1]
            m = _eval_expr(inner_text, line, matrix_ctx, col_offset=len(head) + 1)
            if not isinstance(m, Matrix):
                raise ParseError(line, 1, f"{head}(...) takes a matrix")
            if head == "conj":
                if kind != "sigma":
                    raise ParseError(line, 1, "conj(...) is a sigma form")
                return BaseMap.conjugation(m)
            if head == "inner":
                if kind != "delta":
                    raise ParseError(line, 1, "inner(...) is a delta form")
                return BaseMap.inner_derivation(m, sigma_base or BaseMap.identity())
            expected = base.size * base.size
            if m.nrows != expected or m.ncols != expected:
                raise ParseError(
                    line, 1, f"linear(...) needs a {expected}x{expected} matrix"
                )
            return BaseMap.linear(kind, m)
    if base.kind == "matrix":
        raise FieldMismatch(
            f"{kind}_base on a matrix base must be id/zero, conj(...), "
            f"inner(...) or linear(...)"
        )
    image = _eval_expr(text, line, scalar_ctx)
    if not isinstance(image, Scalar):
        raise FieldMismatch(f"{kind}_base image must be a scalar")
    if base.field.gen is None:
        raise FieldMismatch(
            f"{base.field.name} has no generator; only id/zero base maps exist"
        )
    return BaseMap.field_auto(image) if kind == "sigma" else BaseMap.field_deriv(image)


# ---------------------------------------------------------------------------
# rendering towers back to file text


def render_tower_file(tower: OreTower) -> str:
    base = tower.base
    lines = ["[base]"]
    lines.append(f"kind = {base.kind}")
    lines.append(f"field = {base.field.name}")
    if base.kind == "matrix":
        lines.append(f"size = {base.size}")
    names = tower.level_names()
    for i, lvl in enumerate(tower.levels):
        lines.append("")
        lines.append("[[level]]")
        lines.append(f"var = {lvl.name}")
        sb = _render_base_map(lvl.sigma_base)
        if sb is not None:
            lines.append(f"sigma_base = {sb}")
        db = _render_base_map(lvl.delta_base)
        if db is not None:
            lines.append(f"delta_base = {db}")
        for j in range(i):
            a, c = tower.sigma_var(i, j)
            if a == tower.base.one and not c:
                pass
            else:
                entry = f"{_coeff_str(a)} * {names[j]}"
                if c:
                    entry += f" + {c}"
                lines.append(f"sigma {names[j]} = {entry}")
            d = tower.delta_var(i, j)
            if d:
                lines.append(f"delta {names[j]} = {d}")
        if lvl.q is not None:
            lines.append(f"q = {lvl.q}")
    return "\n".join(lines) + "\n"


def _render_base_map(bmap: BaseMap) -> str | None:
    if bmap.linear_action is not None:
        return f"linear({bmap.linear_action})"
    if bmap.field_action is not None:
        return str(bmap.field_action)
    return None


def _coeff_str(el) -> str:
    s = str(el)
    if isinstance(el, Matrix):
        return s
    if any(ch in s[1:] for ch in "+- ") or "/" in s:
        return f"({s})"
    return s


# ---------------------------------------------------------------------------
# command driver


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oretower",
        description="exact computations in iterated Ore extension towers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tower", required=True, help="tower definition file")
        p.add_argument("--json", action="store_true", help="print the JSON report")
        p.add_argument("--out", help="also write the JSON report to this file")

    p = sub.add_parser("validate", help="run the tower axiom checks")
    common(p)
    p.add_argument("--sample-budget", type=int, default=25)

    p = sub.add_parser("mul", help="multiply two polynomial expressions")
    common(p)
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("central", help="test whether an expression is central")
    common(p)
    p.add_argument("expr")

    p = sub.add_parser("order", help="order of a level's base automorphism")
    common(p)
    p.add_argument("--level", type=int, required=True, help="1-based level")
    p.add_argument("--order-bound", type=int, default=60)

    p = sub.add_parser("erase", help="erase the top level's delta")
    common(p)
    p.add_argument("--search-degree", type=int, default=4)

    p = sub.add_parser("erase-all", help="erase every delta in the tower")
    common(p)
    p.add_argument("--search-degree", type=int, default=4)
    p.add_argument("--verify-degree", type=int, default=4)

    p = sub.add_parser("swap", help="exchange a sigma-only level with the one below")
    common(p)
    p.add_argument("--level", type=int, required=True, help="1-based upper level")

    p = sub.add_parser("gr", help="degenerate to the associated graded tower")
    common(p)
    p.add_argument("--rees-degree", type=int, default=4)

    p = sub.add_parser("pi-check", help="finite-order identity criteria")
    common(p)
    p.add_argument("--order-bound", type=int, default=60)
    p.add_argument("--witness-bound", type=int, default=0,
                   help="also search central variable powers up to this bound")
    return parser


def run(argv) -> int:
    """Execute one command; returns the process exit code.

    0 on success (negative verdicts included), 1 on mathematical failure
    (invalid tower, unsupported erasure), 2 on usage or parse errors.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        tower = parse_tower_file(args.tower)
    except FileNotFoundError:
        print(f"error: no such file: {args.tower}", file=sys.stderr)
        return 2
    except (ParseError, FieldMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        report, exit_code, human = _dispatch(args, tower)
    except (ParseError, FieldMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OreError as exc:
        report = {
            "command": args.command,
            "status": "error",
            "kind": type(exc).__name__,
            "error": str(exc),
        }
        _emit(args, report, f"error[{type(exc).__name__}]: {exc}")
        return 1

    _emit(args, report, human)
    return exit_code


def _emit(args, report: dict, human: str) -> None:
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    if args.json:
        sys.stdout.write(payload)
    else:
        print(human)


def _dispatch(args, tower: OreTower):
    command = args.command
    if command == "validate":
        rep = validate_tower(tower, sample_budget=args.sample_budget)
        report = {
            "command": command,
            "valid": rep.ok,
            "checks": [
                {"level": c.level + 1, "name": c.name, "ok": c.ok, "detail": c.detail}
                for c in rep.checks
            ],
        }
        if rep.ok:
            return report, 0, f"valid: all {len(rep.checks)} checks passed"
        ff = rep.first_failure
        return report, 1, (
            f"invalid: level {ff.level + 1} {ff.name}: {ff.detail}"
        )

    if command == "mul":
        ctx = _expr_context(tower)
        left = ctx.as_poly(_eval_expr(args.left, 1, ctx), _Token("=", "=", 1, 1))
        right = ctx.as_poly(_eval_expr(args.right, 1, ctx), _Token("=", "=", 1, 1))
        product = left * right
        return {"command": command, "product": str(product)}, 0, f"{product}"

    if command == "central":
        ctx = _expr_context(tower)
        poly = ctx.as_poly(_eval_expr(args.expr, 1, ctx), _Token("=", "=", 1, 1))
        ok, witness = is_central(poly)
        report = {
            "command": command,
            "central": ok,
            "witness": None if witness is None else str(witness),
        }
        human = "central" if ok else f"not central; fails against {witness}"
        return report, 0, human

    if command == "order":
        level = _level_arg(args, tower)
        order = map_order(tower.base, tower.levels[level].sigma_base, args.order_bound)
        report = {"command": command, "level": level + 1, "order": order}
        human = (
            f"sigma_{level + 1} restricted to the base has order {order}"
            if order is not None
            else f"no order within bound {args.order_bound}"
        )
        return report, 0, human

    if command == "erase":
        y, new_tower, wit = erase_top(tower, args.search_degree)
        report = {
            "command": command,
            "y": str(y),
            "branch": wit.branch,
            "witness": _witness_json(wit),
            "tower": render_tower_file(new_tower),
        }
        human = f"branch {wit.branch}: y = {y}"
        return report, 0, human

    if command == "erase-all":
        result = erase_all(tower, args.search_degree, args.verify_degree)
        polys = {
            new_name: str(poly)
            for new_name, poly in zip(result.new_tower.level_names(), result.y_elements)
        }
        report = {
            "command": command,
            "polynomials": polys,
            "witnesses": [_witness_json(w) for w in result.witnesses],
            "warnings": list(result.warnings),
            "tower": render_tower_file(result.new_tower),
        }
        lines = [f"{name} = {expr}" for name, expr in polys.items()]
        lines.append(f"result tower: {result.new_tower!r}")
        lines.extend(f"warning: {w}" for w in result.warnings)
        return report, 0, "\n".join(lines)

    if command == "swap":
        level = _level_arg(args, tower)
        caught: list[str] = []
        with _warnings.catch_warnings(record=True) as records:
            _warnings.simplefilter("always")
            swapped = swap_adjacent(tower, level)
        caught.extend(str(r.message) for r in records)
        report = {
            "command": command,
            "tower": render_tower_file(swapped),
            "warnings": caught,
        }
        human = f"swapped: {swapped!r}" + "".join(f"\nwarning: {w}" for w in caught)
        return report, 0, human

    if command == "gr":
        pres = associated_graded_tower(tower)
        closure = []
        for i in range(tower.height):
            for lvl in range(i):
                check = rees_closure_check(
                    tower, lvl, level_sigma(tower, i), args.rees_degree
                )
                closure.append(
                    {"sigma": i + 1, "filtration": lvl + 1, "ok": check.ok,
                     "witness": None if check.witness is None else str(check.witness)}
                )
        report = {
            "command": command,
            "tower": render_tower_file(pres.result),
            "steps": [
                {
                    "level": s.level + 1,
                    "dropped_delta_base": s.dropped_delta_base,
                    "dropped_delta_vars": [j + 1 for j in s.dropped_delta_vars],
                    "dropped_c": [[k + 1, j + 1] for k, j in s.dropped_c],
                }
                for s in pres.step_log
            ],
            "closure_checks": closure,
        }
        return report, 0, f"graded tower: {pres.result!r}"

    if command == "pi-check":
        rep = pi_report(tower, args.order_bound)
        witnesses = []
        if args.witness_bound > 0:
            witnesses = [
                {"element": str(p), "exponent": n}
                for p, n in centrality_witness(tower, args.witness_bound)
            ]
        report = {
            "command": command,
            "verdict": rep.verdict,
            "reason": rep.reason,
            "lambda_orders": {
                f"{i + 1},{j + 1}": order
                for (i, j), order in sorted(rep.lambda_orders.items())
            },
            "base_orders": {str(i + 1): order for i, order in sorted(rep.base_orders.items())},
            "witnesses": witnesses,
            "notes": list(rep.notes),
        }
        human = f"verdict: {rep.verdict}"
        if rep.reason:
            human += f" ({rep.reason})"
        return report, 0, human

    raise AssertionError(f"unhandled command {command}")


def _expr_context(tower: OreTower) -> _Context:
    names = tower.level_names()
    return _Context(
        tower.base.field,
        tower=tower,
        allowed_vars=names,
        all_vars=names,
        allow_matrix=tower.base.kind == "matrix",
    )


def _level_arg(args, tower: OreTower) -> int:
    level = args.level - 1
    if not 0 <= level < tower.height:
        raise ParseError(1, 1, f"level {args.level} out of range")
    return level


def _witness_json(wit) -> dict:
    return {
        "branch": wit.branch,
        "c": None if wit.c is None else str(wit.c),
        "u": None if wit.u is None else str(wit.u),
        "a": None if wit.a is None else str(wit.a),
        "v": None if wit.v is None else str(wit.v),
        "b": None if wit.b is None else str(wit.b),
    }


def main() -> None:
    sys.exit(run(sys.argv[1:]))
