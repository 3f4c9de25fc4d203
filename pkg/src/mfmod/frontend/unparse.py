"""Canonical COBOL-subset source text for a Program.

``parse(unparse(p)) == p`` for every parsed program.
"""

from __future__ import annotations

from mfmod.frontend.nodes import (
    Accept,
    Add,
    And,
    Binary,
    Compare,
    Compute,
    Cond,
    Display,
    Divide,
    Expr,
    Ident,
    If,
    Move,
    Multiply,
    Negate,
    Not,
    NumLit,
    Or,
    Perform,
    Program,
    Stmt,
    StopRun,
    StrLit,
    Subtract,
)
from mfmod.numeric import format_decimal

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def expr_text(e: Expr) -> str:
    if isinstance(e, NumLit):
        return format_decimal(e.value, e.scale)
    if isinstance(e, StrLit):
        if e.text == "":
            return "SPACES"
        return '"' + e.text.replace('"', '""') + '"'
    if isinstance(e, Ident):
        return e.name
    if isinstance(e, Negate):
        inner = expr_text(e.operand)
        if isinstance(e.operand, Binary):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Binary):
        p = _PREC[e.op]
        left, right = expr_text(e.left), expr_text(e.right)
        if isinstance(e.left, Binary) and _PREC[e.left.op] < p:
            left = f"({left})"
        if isinstance(e.right, Binary) and _PREC[e.right.op] <= p:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(e)


def cond_text(c: Cond) -> str:
    if isinstance(c, Compare):
        return f"{expr_text(c.left)} {c.op} {expr_text(c.right)}"
    if isinstance(c, Not):
        return f"NOT ({cond_text(c.operand)})"
    if isinstance(c, And):
        return f"{_paren_if(c.left, Or)} AND {_paren_if(c.right, (Or, And))}"
    if isinstance(c, Or):
        return f"{cond_text(c.left)} OR {_paren_if(c.right, Or)}"
    raise TypeError(c)


def _paren_if(c: Cond, kinds) -> str:
    text = cond_text(c)
    return f"({text})" if isinstance(c, kinds) else text


def _operands(es) -> str:
    return " ".join(expr_text(e) for e in es)


def statement_lines(s: Stmt, indent: str) -> list[str]:
    if isinstance(s, Move):
        return [f"{indent}MOVE {expr_text(s.source)} TO {_operands(s.targets)}"]
    if isinstance(s, Compute):
        return [f"{indent}COMPUTE {s.target.name} = {expr_text(s.expr)}"]
    if isinstance(s, Add):
        tail = s.target.name if s.giving_from is None else f"{expr_text(s.giving_from)} GIVING {s.target.name}"
        return [f"{indent}ADD {_operands(s.addends)} TO {tail}"]
    if isinstance(s, Subtract):
        tail = s.target.name if s.giving_from is None else f"{expr_text(s.giving_from)} GIVING {s.target.name}"
        return [f"{indent}SUBTRACT {_operands(s.subtrahends)} FROM {tail}"]
    if isinstance(s, Multiply):
        tail = s.target.name if s.giving_from is None else f"{expr_text(s.giving_from)} GIVING {s.target.name}"
        return [f"{indent}MULTIPLY {expr_text(s.multiplier)} BY {tail}"]
    if isinstance(s, Divide):
        if s.by:
            return [f"{indent}DIVIDE {expr_text(s.giving_from)} BY {expr_text(s.divisor)} GIVING {s.target.name}"]
        tail = s.target.name if s.giving_from is None else f"{expr_text(s.giving_from)} GIVING {s.target.name}"
        return [f"{indent}DIVIDE {expr_text(s.divisor)} INTO {tail}"]
    if isinstance(s, If):
        lines = [f"{indent}IF {cond_text(s.cond)}"]
        for t in s.then:
            lines += statement_lines(t, indent + "    ")
        if s.orelse:
            lines.append(f"{indent}ELSE")
            for t in s.orelse:
                lines += statement_lines(t, indent + "    ")
        lines.append(f"{indent}END-IF")
        return lines
    if isinstance(s, Perform):
        line = f"{indent}PERFORM {s.target}"
        if s.times is not None:
            line += f" {expr_text(s.times)} TIMES"
        if s.until is not None:
            line += f" UNTIL {cond_text(s.until)}"
        return [line]
    if isinstance(s, Display):
        return [f"{indent}DISPLAY {_operands(s.operands)}"]
    if isinstance(s, Accept):
        return [f"{indent}ACCEPT {s.target.name}"]
    if isinstance(s, StopRun):
        return [f"{indent}STOP RUN"]
    raise TypeError(s)


def unparse(program: Program) -> str:
    lines = ["IDENTIFICATION DIVISION.", f"PROGRAM-ID. {program.program_id}."]
    if program.data_items:
        lines += ["DATA DIVISION.", "WORKING-STORAGE SECTION."]
        group = None
        for d in program.data_items:
            if d.group is not None and d.group != group:
                lines.append(f"01 {d.group}.")
            group = d.group
            entry = f"{'05' if d.level == 5 else '01'} {d.name} PIC {d.picture.text()}"
            if d.initial_value is not None:
                entry += f" VALUE {expr_text(d.initial_value)}"
            lines.append(("    " if d.level == 5 else "") + entry + ".")
    lines.append("PROCEDURE DIVISION.")
    for p in program.paragraphs:
        lines.append(f"{p.name}.")
        for s in p.statements:
            body = statement_lines(s, "    ")
            body[-1] += "."
            lines += body
    return "\n".join(lines) + "\n"
