"""OpenQASM 2.0 subset parser and emitter.

Supported statements: the OPENQASM 2.0 header, `include "qelib1.inc";`
(ignored), qreg/creg declarations, the gates h x y z s t sx rz u u3 cx
swap, barrier, and measure. Angle expressions take numeric literals,
pi, unary minus, and + - * / with standard precedence. Whole-register
operands broadcast for one-qubit gates, barrier, and measure.

Anything else (gate definitions, if, opaque, reset, register operands
on two-qubit gates) is rejected with an "unsupported" error rather
than partially handled. Qubit indices flatten in register-declaration
order.
"""
from __future__ import annotations

import re

from .circuit import (
    Circuit,
    GateKind,
    GateOp,
    barrier,
    cx,
    measure,
    rz,
    swap,
    u,
)


class QasmError(ValueError):
    """Parse failure with a category and source position.

    Categories: lexical, syntax, undeclared, arity, unsupported, range,
    invalid.
    """

    def __init__(self, category: str, message: str, line: int, col: int):
        self.category = category
        self.line = line
        self.col = col
        super().__init__(f"{category} error at {line}:{col}: {message}")


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<comment>//[^\n]*)
      | (?P<newline>\n)
      | (?P<number>(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?)
      | (?P<id>[a-zA-Z_][a-zA-Z0-9_]*)
      | (?P<string>"[^"\n]*")
      | (?P<arrow>->)
      | (?P<sym>[;,()\[\]{}+\-*/=<>^])
    """,
    re.VERBOSE,
)

_SIMPLE_GATES = {
    "h": GateKind.H,
    "x": GateKind.X,
    "y": GateKind.Y,
    "z": GateKind.Z,
    "s": GateKind.S,
    "t": GateKind.T,
    "sx": GateKind.SX,
}
_UNSUPPORTED_KEYWORDS = {"gate", "if", "opaque", "reset"}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QasmError("lexical", f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "newline":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            tokens.append(_Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.qregs: dict[str, tuple[int, int]] = {}  # name -> (offset, size)
        self.cregs: dict[str, tuple[int, int]] = {}
        self.n_qubits = 0
        self.n_clbits = 0
        self.ops: list[GateOp] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, category: str, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise QasmError(category, message, tok.line, tok.col)

    def expect_sym(self, sym: str) -> _Token:
        tok = self.peek()
        if tok.kind not in ("sym", "arrow") or tok.text != sym:
            self.error("syntax", f"expected {sym!r}, found {tok.text!r}")
        return self.advance()

    def expect_id(self, what: str = "identifier") -> _Token:
        tok = self.peek()
        if tok.kind != "id":
            self.error("syntax", f"expected {what}, found {tok.text!r}")
        return self.advance()

    # -- expressions ---------------------------------------------------

    def parse_expr(self) -> float:
        return self._expr_add()

    def _expr_add(self) -> float:
        value = self._expr_mul()
        while self.peek().text in ("+", "-") and self.peek().kind == "sym":
            op = self.advance().text
            rhs = self._expr_mul()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _expr_mul(self) -> float:
        value = self._expr_unary()
        while self.peek().text in ("*", "/") and self.peek().kind == "sym":
            tok = self.advance()
            rhs = self._expr_unary()
            if tok.text == "*":
                value = value * rhs
            else:
                if rhs == 0.0:
                    self.error("syntax", "division by zero in angle expression", tok)
                value = value / rhs
        return value

    def _expr_unary(self) -> float:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "-":
            self.advance()
            return -self._expr_unary()
        return self._expr_primary()

    def _expr_primary(self) -> float:
        tok = self.advance()
        if tok.kind == "number":
            return float(tok.text)
        if tok.kind == "id" and tok.text == "pi":
            return 3.141592653589793
        if tok.kind == "sym" and tok.text == "(":
            value = self.parse_expr()
            self.expect_sym(")")
            return value
        self.error("syntax", f"expected angle expression, found {tok.text!r}", tok)

    # -- operands ------------------------------------------------------

    def parse_operand(self, regs, what) -> tuple[str, int | None, _Token]:
        """Returns (register name, index or None for whole register, token)."""
        tok = self.expect_id(f"{what} register")
        if tok.text not in regs:
            self.error("undeclared", f"{what} register {tok.text!r} not declared", tok)
        index = None
        if self.peek().text == "[":
            self.advance()
            itok = self.peek()
            if itok.kind != "number" or "." in itok.text or "e" in itok.text.lower():
                self.error("syntax", "register index must be an integer", itok)
            self.advance()
            index = int(itok.text)
            self.expect_sym("]")
            if index >= regs[tok.text][1]:
                self.error(
                    "range",
                    f"index {index} out of range for {tok.text}[{regs[tok.text][1]}]",
                    itok,
                )
        return tok.text, index, tok

    def flat_qubits(self, name: str, index: int | None) -> list[int]:
        offset, size = self.qregs[name]
        if index is None:
            return [offset + i for i in range(size)]
        return [offset + index]

    def flat_clbits(self, name: str, index: int | None) -> list[int]:
        offset, size = self.cregs[name]
        if index is None:
            return [offset + i for i in range(size)]
        return [offset + index]

    # -- statements ----------------------------------------------------

    def parse_header(self):
        tok = self.peek()
        if tok.kind == "id" and tok.text == "OPENQASM":
            self.advance()
            vtok = self.peek()
            if vtok.kind != "number":
                self.error("syntax", "expected version number after OPENQASM")
            self.advance()
            if vtok.text != "2.0":
                self.error("unsupported", f"only OPENQASM 2.0 is supported, got {vtok.text}", vtok)
            self.expect_sym(";")
        else:
            self.error("syntax", "program must start with 'OPENQASM 2.0;'")

    def parse_reg_decl(self, keyword: str):
        tok = self.advance()  # qreg / creg
        name = self.expect_id("register name")
        regs = self.qregs if keyword == "qreg" else self.cregs
        if name.text in self.qregs or name.text in self.cregs:
            self.error("invalid", f"register {name.text!r} already declared", name)
        self.expect_sym("[")
        size_tok = self.peek()
        if size_tok.kind != "number" or "." in size_tok.text:
            self.error("syntax", "register size must be an integer", size_tok)
        self.advance()
        size = int(size_tok.text)
        if size < 1:
            self.error("invalid", "register size must be >= 1", size_tok)
        self.expect_sym("]")
        self.expect_sym(";")
        if keyword == "qreg":
            regs[name.text] = (self.n_qubits, size)
            self.n_qubits += size
        else:
            regs[name.text] = (self.n_clbits, size)
            self.n_clbits += size

    def parse_include(self):
        self.advance()
        tok = self.peek()
        if tok.kind != "string":
            self.error("syntax", "expected file string after include")
        self.advance()
        if tok.text != '"qelib1.inc"':
            self.error("unsupported", f"cannot resolve include {tok.text}", tok)
        self.expect_sym(";")

    def parse_params(self, name_tok: _Token, expected: int) -> list[float]:
        params: list[float] = []
        if self.peek().text == "(":
            self.advance()
            if self.peek().text != ")":
                params.append(self.parse_expr())
                while self.peek().text == ",":
                    self.advance()
                    params.append(self.parse_expr())
            self.expect_sym(")")
        if len(params) != expected:
            self.error(
                "arity",
                f"{name_tok.text} takes {expected} parameter(s), got {len(params)}",
                name_tok,
            )
        return params

    def parse_qargs(self) -> list[tuple[str, int | None, _Token]]:
        args = [self.parse_operand(self.qregs, "quantum")]
        while self.peek().text == ",":
            self.advance()
            args.append(self.parse_operand(self.qregs, "quantum"))
        return args

    def add_op(self, op_factory, tok: _Token):
        try:
            self.ops.append(op_factory())
        except ValueError as exc:
            self.error("invalid", str(exc), tok)

    def parse_gate(self, name_tok: _Token):
        name = name_tok.text
        if name in _SIMPLE_GATES:
            self.parse_params(name_tok, 0)
            args = self.parse_qargs()
            kind = _SIMPLE_GATES[name]
            for reg, idx, _ in args:
                for q in self.flat_qubits(reg, idx):
                    self.add_op(lambda q=q: GateOp(kind, (q,)), name_tok)
        elif name == "rz":
            params = self.parse_params(name_tok, 1)
            args = self.parse_qargs()
            for reg, idx, _ in args:
                for q in self.flat_qubits(reg, idx):
                    self.add_op(lambda q=q: rz(params[0], q), name_tok)
        elif name in ("u", "u3"):
            params = self.parse_params(name_tok, 3)
            args = self.parse_qargs()
            for reg, idx, _ in args:
                for q in self.flat_qubits(reg, idx):
                    self.add_op(lambda q=q: u(params[0], params[1], params[2], q), name_tok)
        elif name in ("cx", "swap"):
            self.parse_params(name_tok, 0)
            args = self.parse_qargs()
            if len(args) != 2:
                self.error("arity", f"{name} takes 2 qubit operands, got {len(args)}", name_tok)
            if args[0][1] is None or args[1][1] is None:
                self.error(
                    "unsupported",
                    f"register operands on two-qubit gate {name}",
                    name_tok,
                )
            qa = self.flat_qubits(args[0][0], args[0][1])[0]
            qb = self.flat_qubits(args[1][0], args[1][1])[0]
            factory = (lambda: cx(qa, qb)) if name == "cx" else (lambda: swap(qa, qb))
            self.add_op(factory, name_tok)
        else:
            self.error("unsupported", f"unsupported gate {name!r}", name_tok)
        self.expect_sym(";")

    def parse_barrier(self, name_tok: _Token):
        args = self.parse_qargs()
        for reg, idx, _ in args:
            for q in self.flat_qubits(reg, idx):
                self.add_op(lambda q=q: barrier(q), name_tok)
        self.expect_sym(";")

    def parse_measure(self, name_tok: _Token):
        qreg, qidx, qtok = self.parse_operand(self.qregs, "quantum")
        self.expect_sym("->")
        creg, cidx, _ = self.parse_operand(self.cregs, "classical")
        qs = self.flat_qubits(qreg, qidx)
        cs = self.flat_clbits(creg, cidx)
        if len(qs) != len(cs):
            self.error(
                "arity",
                f"measure maps {len(qs)} qubit(s) onto {len(cs)} classical bit(s)",
                qtok,
            )
        for q, c in zip(qs, cs):
            self.add_op(lambda q=q, c=c: measure(q, c), name_tok)
        self.expect_sym(";")

    def parse_program(self) -> Circuit:
        self.parse_header()
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "id":
                self.error("syntax", f"expected statement, found {tok.text!r}")
            if tok.text in ("qreg", "creg"):
                self.parse_reg_decl(tok.text)
            elif tok.text == "include":
                self.parse_include()
            elif tok.text in _UNSUPPORTED_KEYWORDS:
                self.error("unsupported", f"unsupported construct {tok.text!r}", tok)
            elif tok.text == "barrier":
                self.advance()
                self.parse_barrier(tok)
            elif tok.text == "measure":
                self.advance()
                self.parse_measure(tok)
            else:
                self.advance()
                self.parse_gate(tok)
        if self.n_qubits == 0:
            self.error("invalid", "program declares no qubits")
        try:
            return Circuit(self.n_qubits, self.n_clbits, tuple(self.ops), name="qasm")
        except ValueError as exc:
            raise QasmError("invalid", str(exc), self.peek().line, self.peek().col)


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2.0 text into a circuit.

    Raises QasmError (never anything else) on malformed input.
    """
    if not isinstance(text, str):
        raise QasmError("lexical", "input must be text", 1, 1)
    return _Parser(text).parse_program()


def emit_qasm(circuit: Circuit) -> str:
    """Serialize a circuit as OpenQASM 2.0 over one qreg and one creg.

    Angles render with 12 significant digits. Injector marks are not
    representable in the format and are dropped.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.n_qubits}];"]
    if circuit.n_clbits > 0:
        lines.append(f"creg c[{circuit.n_clbits}];")
    for op in circuit.ops:
        if op.kind is GateKind.MEASURE:
            lines.append(f"measure q[{op.qubits[0]}] -> c[{op.clbit}];")
        elif op.kind is GateKind.BARRIER:
            lines.append(f"barrier q[{op.qubits[0]}];")
        elif op.kind in (GateKind.CX, GateKind.SWAP):
            a, b = op.qubits
            lines.append(f"{op.kind.value} q[{a}], q[{b}];")
        elif op.params:
            angles = ", ".join("%.12g" % p for p in op.params)
            lines.append(f"{op.kind.value}({angles}) q[{op.qubits[0]}];")
        else:
            lines.append(f"{op.kind.value} q[{op.qubits[0]}];")
    return "\n".join(lines) + "\n"
