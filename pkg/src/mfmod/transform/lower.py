"""Rule-table lowering from the COBOL-subset AST to ModernIR.

Each rule handles one source construct and is identified by a stable id that
is recorded in the candidate's rule trace.  Paragraph fall-through is made
explicit: the entry function calls every paragraph in declaration order, and
``halt`` (from STOP RUN) ends the whole run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mfmod.frontend import nodes as ast
from mfmod.frontend.nodes import Program
from mfmod.frontend.picture import PictureSpec
from mfmod.transform import ir
from mfmod.transform.ir import ENTRY, ModernIR, ensure_well_formed, mangle
from mfmod.transform.variants import VARIANTS

RULE_ENGINE = "rule-engine"
EXTERNAL_BACKEND = "external-backend"


class UnsupportedConstruct(ValueError):
    code = "unsupported-construct"


@dataclass(frozen=True)
class TransformCandidate:
    ir: ModernIR
    provenance: str = RULE_ENGINE
    rule_trace: tuple[str, ...] = ()
    label: str = field(default="baseline", compare=False)


def ir_type(pic: PictureSpec) -> ir.Type:
    if pic.is_numeric:
        return ir.DecimalType(pic.precision, pic.scale, pic.signed)
    return ir.StringType(pic.width)


class _Lowerer:
    def __init__(self, program: Program):
        self.program = program
        self.trace: list[str] = []

    def used(self, rule: str) -> None:
        if rule not in self.trace:
            self.trace.append(rule)

    def expr(self, e: ast.Expr) -> ir.Expr:
        if isinstance(e, ast.NumLit):
            return ir.Num(e.value, e.scale)
        if isinstance(e, ast.StrLit):
            return ir.Str(e.text)
        if isinstance(e, ast.Ident):
            return ir.Var(mangle(e.name))
        if isinstance(e, ast.Negate):
            return ir.Neg(self.expr(e.operand))
        if isinstance(e, ast.Binary):
            return ir.BinOp(e.op, self.expr(e.left), self.expr(e.right))
        raise UnsupportedConstruct(f"expression {e!r}")

    def cond(self, c: ast.Cond) -> ir.Cond:
        if isinstance(c, ast.Compare):
            op = "==" if c.op == "=" else c.op
            return ir.Cmp(op, self.expr(c.left), self.expr(c.right))
        if isinstance(c, ast.Not):
            return ir.LNot(self.cond(c.operand))
        if isinstance(c, ast.And):
            return ir.LAnd(self.cond(c.left), self.cond(c.right))
        if isinstance(c, ast.Or):
            return ir.LOr(self.cond(c.left), self.cond(c.right))
        raise UnsupportedConstruct(f"condition {c!r}")

    def block(self, stmts: tuple[ast.Stmt, ...]) -> tuple[ir.Stmt, ...]:
        out: list[ir.Stmt] = []
        for s in stmts:
            out.extend(self.statement(s))
        return tuple(out)

    def statement(self, s: ast.Stmt) -> list[ir.Stmt]:
        if isinstance(s, ast.Move):
            self.used("R-MOVE")
            src = self.expr(s.source)
            return [ir.Assign(mangle(t.name), src) for t in s.targets]
        if isinstance(s, ast.ARITHMETIC):
            self.used(f"R-{type(s).__name__.upper()}")
            return [ir.Assign(mangle(s.target.name), self.expr(ast.arithmetic_expr(s)))]
        if isinstance(s, ast.If):
            self.used("R-IF")
            return [ir.IfElse(self.cond(s.cond), self.block(s.then), self.block(s.orelse))]
        if isinstance(s, ast.Perform):
            call = ir.Call(mangle(s.target))
            if s.times is not None:
                self.used("R-PERFORM-TIMES")
                return [ir.For(self.expr(s.times), (call,))]
            if s.until is not None:
                self.used("R-PERFORM-UNTIL")
                return [ir.While(ir.LNot(self.cond(s.until)), (call,))]
            self.used("R-PERFORM")
            return [call]
        if isinstance(s, ast.Display):
            self.used("R-DISPLAY")
            return [ir.Print(tuple(self.expr(o) for o in s.operands))]
        if isinstance(s, ast.Accept):
            self.used("R-ACCEPT")
            return [ir.Read(mangle(s.target.name))]
        if isinstance(s, ast.StopRun):
            self.used("R-STOP")
            return [ir.Halt()]
        raise UnsupportedConstruct(f"statement {type(s).__name__}")

    def program_ir(self) -> ModernIR:
        self.used("R-DATA")
        globals_ = tuple(
            ir.Global(mangle(d.name), ir_type(d.picture), ast.initial_value(d)) for d in self.program.data_items
        )
        self.used("R-ENTRY")
        entry = ir.Function(ENTRY, tuple(ir.Call(mangle(p.name)) for p in self.program.paragraphs))
        functions = [entry]
        for p in self.program.paragraphs:
            self.used("R-PARAGRAPH")
            functions.append(ir.Function(mangle(p.name), self.block(p.statements)))
        return ModernIR(self.program.program_id, globals_, tuple(functions))


def lower_baseline(program: Program) -> TransformCandidate:
    lw = _Lowerer(program)
    result = ensure_well_formed(lw.program_ir())
    return TransformCandidate(result, RULE_ENGINE, tuple(lw.trace), "baseline")


def lower(program: Program) -> list[TransformCandidate]:
    """Baseline candidate first, then each rewrite variant that changes the IR."""
    base = lower_baseline(program)
    out = [base]
    for rule_id, label, rewrite in VARIANTS:
        rewritten = rewrite(base.ir, program)
        if rewritten != base.ir and all(c.ir != rewritten for c in out):
            out.append(
                TransformCandidate(ensure_well_formed(rewritten), RULE_ENGINE, base.rule_trace + (rule_id,), label)
            )
    return out
