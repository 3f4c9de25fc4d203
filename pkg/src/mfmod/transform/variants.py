"""Behaviour-preserving rewrites that produce alternative candidates.

* ``V-FOR-TO-WHILE``: a counted loop becomes a while loop over an explicit
  counter.  The bound is captured once into a signed integer temporary, which
  applies the same truncation toward zero as the counted loop.
* ``V-FUSE-ADD``: consecutive ``x = x + a`` assignments are merged into one.
  Only applied when every intermediate value is exact: ``x`` is unsigned and
  every addend is a non-negative literal or an unsigned variable other than
  ``x`` whose scale does not exceed ``x``'s.  Under those conditions high-order
  truncation commutes with addition.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from typing import Callable

from mfmod.frontend.nodes import Program
from mfmod.transform.ir import (
    Assign,
    BinOp,
    Cmp,
    DecimalType,
    For,
    Function,
    Global,
    IfElse,
    ModernIR,
    Num,
    Stmt,
    Var,
    While,
)

_COUNTER_TYPE = DecimalType(18, 0, True)


def _map_blocks(body: tuple[Stmt, ...], fn: Callable[[tuple[Stmt, ...]], tuple[Stmt, ...]]) -> tuple[Stmt, ...]:
    """Apply ``fn`` bottom-up to every statement list in ``body``."""
    out: list[Stmt] = []
    for s in body:
        if isinstance(s, IfElse):
            s = IfElse(s.cond, _map_blocks(s.then, fn), _map_blocks(s.orelse, fn))
        elif isinstance(s, While):
            s = While(s.cond, _map_blocks(s.body, fn))
        elif isinstance(s, For):
            s = For(s.bound, _map_blocks(s.body, fn))
        out.append(s)
    return fn(tuple(out))


def for_to_while(base: ModernIR, program: Program | None = None) -> ModernIR:
    temps: list[Global] = []

    def rewrite(block: tuple[Stmt, ...]) -> tuple[Stmt, ...]:
        out: list[Stmt] = []
        for s in block:
            if not isinstance(s, For):
                out.append(s)
                continue
            n = len(temps) // 2 + 1
            lim, ctr = f"__lim{n}", f"__ctr{n}"
            temps.append(Global(lim, _COUNTER_TYPE, Fraction(0)))
            temps.append(Global(ctr, _COUNTER_TYPE, Fraction(0)))
            step = Assign(ctr, BinOp("+", Var(ctr), Num(Fraction(1))))
            out.append(Assign(lim, s.bound))
            out.append(Assign(ctr, Num(Fraction(0))))
            out.append(While(Cmp("<", Var(ctr), Var(lim)), s.body + (step,)))
        return tuple(out)

    functions = tuple(Function(f.name, _map_blocks(f.body, rewrite)) for f in base.functions)
    if not temps:
        return base
    return replace(base, globals=base.globals + tuple(temps), functions=functions)


def _add_chain(s: Stmt) -> tuple[str, list] | None:
    """If ``s`` is ``x = x + a1 + ... + ak``, return (x, [a1..ak])."""
    if not isinstance(s, Assign):
        return None
    addends = []
    e = s.expr
    while isinstance(e, BinOp) and e.op == "+":
        addends.append(e.right)
        e = e.left
    if not addends or e != Var(s.target):
        return None
    return s.target, addends[::-1]


def _safe_addend(ir: ModernIR, target: DecimalType, target_name: str, a) -> bool:
    if isinstance(a, Num):
        return a.scale <= target.scale
    if isinstance(a, Var) and a.name != target_name:
        t = ir.global_type(a.name)
        return isinstance(t, DecimalType) and not t.signed and t.scale <= target.scale
    return False


def fuse_adds(base: ModernIR, program: Program | None = None) -> ModernIR:
    def fusible(s: Stmt):
        chain = _add_chain(s)
        if chain is None:
            return None
        name, addends = chain
        t = base.global_type(name)
        if not isinstance(t, DecimalType) or t.signed:
            return None
        if not all(_safe_addend(base, t, name, a) for a in addends):
            return None
        return chain

    def rewrite(block: tuple[Stmt, ...]) -> tuple[Stmt, ...]:
        out: list[Stmt] = []
        i = 0
        while i < len(block):
            first = fusible(block[i])
            if first is None:
                out.append(block[i])
                i += 1
                continue
            name, addends = first
            j = i + 1
            while j < len(block):
                nxt = fusible(block[j])
                if nxt is None or nxt[0] != name:
                    break
                addends = addends + nxt[1]
                j += 1
            if j - i == 1:
                out.append(block[i])
            else:
                expr = Var(name)
                for a in addends:
                    expr = BinOp("+", expr, a)
                out.append(Assign(name, expr))
            i = j
        return tuple(out)

    functions = tuple(Function(f.name, _map_blocks(f.body, rewrite)) for f in base.functions)
    return replace(base, functions=functions)


VARIANTS = (
    ("V-FOR-TO-WHILE", "for-to-while", for_to_while),
    ("V-FUSE-ADD", "fuse-add", fuse_adds),
)
