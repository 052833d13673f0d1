"""CPLEX-LP text format writer and reader, limited to linear terms.

The writer declares every variable in the Bounds section (index order) and
lists integral variables under Binaries/Generals, so a write -> read round
trip reproduces the variable order exactly.  The reader accepts the common
dialect variations: `<=', `=<', `<' and friends, `\\' comments, wrapped
expressions, and implicit unit coefficients.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from .model import Comparator, IntegerProgram, LinearConstraint, Sense, VariableDef

_NAME_RE = re.compile(r"[A-Za-z!\"#$%&()/,;?@_`'{}|~][A-Za-z0-9!\"#$%&()/,;?@_`'{}|~.]*")
_SECTION_WORDS = {
    "maximize": ("maximize", "max", "maximise"),
    "minimize": ("minimize", "min", "minimise"),
    "subject_to": ("subject to", "such that", "st", "s.t.", "st."),
    "bounds": ("bounds", "bound"),
    "binaries": ("binaries", "binary", "bin"),
    "generals": ("generals", "general", "gen"),
    "end": ("end",),
}


def _fmt(x: float) -> str:
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return repr(float(x))


def _expr_lines(terms, names, label: str) -> list[str]:
    parts: list[str] = []
    for i, c in terms:
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {_fmt(abs(c))} {names[i]}")
    if parts and parts[0].startswith("+"):
        parts[0] = parts[0][2:]
    lines: list[str] = []
    current = f" {label}:"
    for part in parts:
        if len(current) + len(part) + 1 > 240:
            lines.append(current)
            current = "   " + part
        else:
            current += " " + part
    lines.append(current)
    return lines


def write_lp(path, program: IntegerProgram) -> None:
    Path(path).write_text(lp_dumps(program), encoding="utf-8")


def lp_dumps(program: IntegerProgram) -> str:
    names = [v.name for v in program.variables]
    if len(set(names)) != len(names):
        raise ValueError("LP output requires unique variable names")
    out: list[str] = []
    if program.name:
        out.append(f"\\ Problem: {program.name}")
    out.append("Maximize" if program.sense is Sense.MAXIMIZE else "Minimize")
    out.extend(_expr_lines(program.objective, names, "obj"))
    out.append("Subject To")
    for row, con in enumerate(program.constraints):
        lines = _expr_lines(con.coeffs, names, f"c{row}")
        lines[-1] += f" {con.cmp.symbol()} {_fmt(con.rhs)}"
        out.extend(lines)
    out.append("Bounds")
    for v in program.variables:
        out.append(f" {_fmt(v.lower)} <= {v.name} <= {_fmt(v.upper)}")
    binaries = [v.name for v in program.variables if v.is_binary]
    generals = [v.name for v in program.variables if v.integral and not v.is_binary]
    if binaries:
        out.append("Binaries")
        out.append(" " + " ".join(binaries))
    if generals:
        out.append("Generals")
        out.append(" " + " ".join(generals))
    out.append("End")
    return "\n".join(out) + "\n"


class LpParseError(ValueError):
    pass


def read_lp(path) -> IntegerProgram:
    return lp_loads(Path(path).read_text(encoding="utf-8"), name=Path(path).stem)


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    for raw_line in text.splitlines():
        line = raw_line.split("\\", 1)[0]
        line = line.replace("<=", " <= ").replace(">=", " >= ")
        line = line.replace("=<", " <= ").replace("=>", " >= ")
        tokens.extend(line.split())
    return tokens


def _section_of(tokens: list[str], pos: int) -> tuple[str, int] | None:
    lowered = tokens[pos].lower()
    for section, words in _SECTION_WORDS.items():
        for word in words:
            parts = word.split()
            if lowered == parts[0] and [
                t.lower() for t in tokens[pos : pos + len(parts)]
            ] == parts:
                return section, pos + len(parts)
    return None


_CMP_TOKENS = {"<=": Comparator.LE, "<": Comparator.LE, ">=": Comparator.GE, ">": Comparator.GE, "=": Comparator.EQ}


def _is_number(token: str) -> bool:
    try:
        _parse_number(token)
        return True
    except ValueError:
        return False


def _parse_number(token: str) -> float:
    low = token.lower().lstrip("+")
    if low in ("inf", "infinity"):
        return math.inf
    if low in ("-inf", "-infinity"):
        return -math.inf
    return float(token)


class _Registry:
    """Variable table; declaration order defines the index order."""

    def __init__(self) -> None:
        self.order: list[str] = []
        self.index: dict[str, int] = {}
        self.lower: dict[str, float] = {}
        self.upper: dict[str, float] = {}
        self.integral: dict[str, bool] = {}

    def declare(self, name: str) -> int:
        if name not in self.index:
            self.index[name] = len(self.order)
            self.order.append(name)
        return self.index[name]


def _parse_terms(tokens: list[str], pos: int, registry: _Registry, stops) -> tuple[list[tuple[int, float]], int]:
    terms: dict[int, float] = {}
    sign = 1.0
    pending: float | None = None
    while pos < len(tokens):
        tok = tokens[pos]
        if tok in stops or _section_of(tokens, pos):
            break
        if tok == "+":
            pass
        elif tok == "-":
            sign = -sign
        elif _is_number(tok):
            value = _parse_number(tok)
            if pending is not None:
                raise LpParseError(f"two consecutive numbers near token {pos}: {tok!r}")
            pending = sign * value
            sign = 1.0
        else:
            name = tok
            if not _NAME_RE.fullmatch(name):
                raise LpParseError(f"invalid identifier {name!r}")
            idx = registry.declare(name)
            c = pending if pending is not None else sign
            terms[idx] = terms.get(idx, 0.0) + c
            pending = None
            sign = 1.0
        pos += 1
    if pending is not None:
        raise LpParseError("dangling coefficient with no variable")
    return [(i, c) for i, c in sorted(terms.items())], pos


def lp_loads(text: str, name: str = "") -> IntegerProgram:
    tokens = _tokenize(text)
    if not tokens:
        raise LpParseError("empty LP file")

    # Pass 1: variable declarations from Bounds/Binaries/Generals keep the
    # writer's variable order even when the objective mentions few of them.
    registry = _Registry()
    pos = 0
    section = None
    while pos < len(tokens):
        hit = _section_of(tokens, pos)
        if hit:
            section, pos = hit
            continue
        tok = tokens[pos]
        if section in ("bounds", "binaries", "generals") and _NAME_RE.fullmatch(tok) and not _is_number(tok) and tok.lower() != "free":
            registry.declare(tok)
        pos += 1

    sense: Sense | None = None
    objective: list[tuple[int, float]] = []
    constraints: list[LinearConstraint] = []
    pos = 0
    section = None
    while pos < len(tokens):
        hit = _section_of(tokens, pos)
        if hit:
            section, pos = hit
            if section == "end":
                break
            continue
        if section in ("maximize", "minimize"):
            sense = Sense.MAXIMIZE if section == "maximize" else Sense.MINIMIZE
            if pos + 1 < len(tokens) and tokens[pos + 1] == ":":
                pos += 2
            elif tokens[pos].endswith(":"):
                pos += 1
            objective, pos = _parse_terms(tokens, pos, registry, stops=())
            section = "objective_done"
        elif section == "subject_to":
            if pos + 1 < len(tokens) and tokens[pos + 1] == ":":
                pos += 2
            elif tokens[pos].endswith(":") and len(tokens[pos]) > 1:
                pos += 1
            terms, pos = _parse_terms(tokens, pos, registry, stops=_CMP_TOKENS.keys())
            if pos >= len(tokens) or tokens[pos] not in _CMP_TOKENS:
                raise LpParseError(f"constraint without comparator near token {pos}")
            cmp = _CMP_TOKENS[tokens[pos]]
            pos += 1
            if pos >= len(tokens) or not _is_number(tokens[pos].lstrip("+")):
                neg = pos < len(tokens) and tokens[pos] == "-"
                if neg and pos + 1 < len(tokens) and _is_number(tokens[pos + 1]):
                    rhs = -_parse_number(tokens[pos + 1])
                    pos += 2
                else:
                    raise LpParseError(f"constraint without numeric rhs near token {pos}")
            else:
                rhs = _parse_number(tokens[pos])
                pos += 1
            constraints.append(LinearConstraint(tuple(terms), cmp, rhs))
        elif section == "bounds":
            pos = _parse_bound(tokens, pos, registry)
        elif section in ("binaries", "generals"):
            tok = tokens[pos]
            if not _NAME_RE.fullmatch(tok):
                raise LpParseError(f"invalid name {tok!r} in {section}")
            registry.integral[tok] = True
            if section == "binaries":
                registry.lower.setdefault(tok, 0.0)
                registry.upper.setdefault(tok, 1.0)
            pos += 1
        elif section == "objective_done":
            raise LpParseError(f"unexpected token {tokens[pos]!r} after objective")
        else:
            raise LpParseError(f"unexpected token {tokens[pos]!r} before objective section")

    if sense is None:
        raise LpParseError("missing Maximize/Minimize section")

    variables = tuple(
        VariableDef(
            name=nm,
            lower=registry.lower.get(nm, 0.0),
            upper=registry.upper.get(nm, math.inf),
            integral=registry.integral.get(nm, False),
        )
        for nm in registry.order
    )
    return IntegerProgram(
        variables=variables,
        constraints=tuple(constraints),
        objective=tuple(objective),
        sense=sense,
        name=name,
    )


def _parse_bound(tokens: list[str], pos: int, registry: _Registry) -> int:
    # Forms: `lo <= x <= up', `x <= up', `x >= lo', `x = v', `x free'.
    if _is_number(tokens[pos]) or tokens[pos] == "-":
        if tokens[pos] == "-":
            lo = -_parse_number(tokens[pos + 1])
            pos += 2
        else:
            lo = _parse_number(tokens[pos])
            pos += 1
        if tokens[pos] != "<=":
            raise LpParseError("expected <= in bound")
        pos += 1
        name = tokens[pos]
        pos += 1
        registry.declare(name)
        registry.lower[name] = lo
        if pos < len(tokens) and tokens[pos] == "<=":
            pos += 1
            registry.upper[name] = _parse_number(tokens[pos])
            pos += 1
        return pos
    name = tokens[pos]
    if not _NAME_RE.fullmatch(name):
        raise LpParseError(f"invalid bound line near {name!r}")
    registry.declare(name)
    pos += 1
    if pos < len(tokens) and tokens[pos].lower() == "free":
        registry.lower[name] = -math.inf
        registry.upper[name] = math.inf
        return pos + 1
    if pos < len(tokens) and tokens[pos] in ("<=", ">=", "="):
        op = tokens[pos]
        pos += 1
        neg = tokens[pos] == "-"
        if neg:
            pos += 1
        value = _parse_number(tokens[pos]) * (-1.0 if neg else 1.0)
        pos += 1
        if op == "<=":
            registry.upper[name] = value
        elif op == ">=":
            registry.lower[name] = value
        else:
            registry.lower[name] = value
            registry.upper[name] = value
        return pos
    raise LpParseError(f"malformed bound for {name!r}")
