"""Recursive-descent parser for scenario files.

The parser is total: any input up to the size cap yields either a Scenario or
a list of ParseErrors, never an exception. On a syntax error it records the
problem and resynchronizes at the next top-level declaration keyword, so one
pass can report several errors in source order.

The configuration-free claim form `yields(subject) = outcome` parses cleanly
into an intrinsic-yields node: rejecting it is the semantic checker's job, so
the distinction between a malformed file and an ill-typed claim is preserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    BridgeDecl,
    BridgeMapEntry,
    ConfigBuiltinBody,
    ConfigDecl,
    EffectEntry,
    EffectTableBody,
    MatrixBody,
    Scenario,
    Span,
    StatementDecl,
    StatementNode,
    StructureBuiltinBody,
    StructureDecl,
    SubjectRef,
    SystemDecl,
    VectorBody,
)
from .lexer import Token, tokenize

MAX_INPUT_BYTES = 1 << 20  # 1 MiB
MAX_COMPOSE_DEPTH = 32

_DECL_KEYWORDS = ("system", "structure", "config", "bridge", "statement")


@dataclass(frozen=True)
class ParseError:
    message: str
    span: Span
    expected: tuple = ()

    def __str__(self) -> str:
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{self.span}: {self.message}{hint}"


@dataclass
class ParseResult:
    scenario: object = None  # Scenario, when errors is empty
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


class _Halt(Exception):
    """Internal signal to resynchronize at the next declaration."""


class _Parser:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0
        self.errors: list = []
        self.depth = 0

    # -- token helpers ------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.text == word

    def span_of(self, tok: Token) -> Span:
        return Span(tok.line, tok.col, max(len(tok.text), 1), tok.offset)

    def span_between(self, start: Token, end: Token) -> Span:
        length = (end.offset + len(end.text)) - start.offset
        return Span(start.line, start.col, max(length, 1), start.offset)

    def fail(self, message: str, tok: Token = None, expected: tuple = ()):
        tok = tok or self.peek()
        shown = tok.text if tok.kind != "EOF" else "end of input"
        self.errors.append(
            ParseError(f"{message}, found {shown!r}", self.span_of(tok), expected)
        )
        raise _Halt()

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {what}", tok, expected=(what,))
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if not self.at_keyword(word):
            self.fail(f"expected '{word}'", tok, expected=(f"'{word}'",))
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        return self.expect("IDENT", what)

    def int_value(self, what: str) -> int:
        tok = self.expect("INT", what)
        try:
            return int(tok.text)
        except ValueError:
            self.fail(f"integer literal too large for {what}", tok)

    # -- numeric literals ---------------------------------------------------

    def _float_text(self, tok: Token) -> float:
        try:
            return float(tok.text)
        except (ValueError, OverflowError):
            self.fail("malformed numeric literal", tok)

    def signed_number(self) -> float:
        sign = 1.0
        if self.peek().kind == "MINUS":
            self.advance()
            sign = -1.0
        elif self.peek().kind == "PLUS":
            self.advance()
        tok = self.peek()
        if tok.kind not in ("INT", "NUMBER"):
            self.fail("expected a number", tok, expected=("number",))
        self.advance()
        return sign * self._float_text(tok)

    def amplitude(self) -> complex:
        """`0.5`, `-1`, `0.5i`, `0.7071 + 0i`, `0.5 - 0.5i`."""
        sign = 1.0
        if self.peek().kind == "MINUS":
            self.advance()
            sign = -1.0
        elif self.peek().kind == "PLUS":
            self.advance()
        tok = self.peek()
        if tok.kind == "IMAG":
            self.advance()
            return complex(0.0, sign * self._float_text(Token("NUMBER", tok.text[:-1], tok.line, tok.col, tok.offset)))
        if tok.kind not in ("INT", "NUMBER"):
            self.fail("expected an amplitude", tok, expected=("number",))
        self.advance()
        real = sign * self._float_text(tok)
        if self.peek().kind in ("PLUS", "MINUS"):
            # Only consume the sign when an imaginary part follows.
            if self.tokens[self.pos + 1].kind == "IMAG":
                op = self.advance()
                imag_tok = self.advance()
                imag = self._float_text(
                    Token("NUMBER", imag_tok.text[:-1], imag_tok.line, imag_tok.col, imag_tok.offset)
                )
                if op.kind == "MINUS":
                    imag = -imag
                return complex(real, imag)
        return complex(real, 0.0)

    def amplitude_rows(self, open_kind: str, close_kind: str, close_text: str) -> tuple:
        """Rows of amplitudes: `a, b ; c, d` between the given brackets."""
        self.expect(open_kind, {"LBRACE": "'{'", "LBRACKET": "'['"}[open_kind])
        rows = []
        current = [self.amplitude()]
        while True:
            kind = self.peek().kind
            if kind == "COMMA":
                self.advance()
                current.append(self.amplitude())
            elif kind == "SEMI":
                self.advance()
                rows.append(tuple(current))
                current = [self.amplitude()]
            elif kind == close_kind:
                self.advance()
                rows.append(tuple(current))
                return tuple(rows)
            else:
                self.fail("expected ',', ';' or closing bracket in table", expected=(close_text,))

    # -- declarations -------------------------------------------------------

    def parse_scenario(self) -> Scenario:
        systems, structures, configs, bridges, statements = [], [], [], [], []
        while self.peek().kind != "EOF":
            tok = self.peek()
            try:
                if self.at_keyword("system"):
                    systems.append(self.system_decl())
                elif self.at_keyword("structure"):
                    structures.append(self.structure_decl())
                elif self.at_keyword("config"):
                    configs.append(self.config_decl())
                elif self.at_keyword("bridge"):
                    bridges.append(self.bridge_decl())
                elif self.at_keyword("statement"):
                    statements.append(self.statement_decl())
                else:
                    self.fail(
                        "expected a declaration",
                        tok,
                        expected=tuple(f"'{w}'" for w in _DECL_KEYWORDS),
                    )
            except _Halt:
                self.resync()
        scenario = Scenario(
            systems=tuple(systems),
            structures=tuple(structures),
            configurations=tuple(configs),
            bridges=tuple(bridges),
            statements=tuple(statements),
        )
        self.check_duplicates(scenario)
        return scenario

    def resync(self) -> None:
        """Skip to the next top-level declaration keyword outside any braces."""
        if self.peek().kind != "EOF":
            self.advance()  # always make progress
        depth = 0
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.kind == "LBRACE":
                depth += 1
            elif tok.kind == "RBRACE":
                depth = max(0, depth - 1)
            elif depth == 0 and tok.kind == "IDENT" and tok.text in _DECL_KEYWORDS:
                return
            self.advance()

    def check_duplicates(self, scenario: Scenario) -> None:
        for name, decls in (
            ("system", scenario.systems),
            ("structure", scenario.structures),
            ("config", scenario.configurations),
            ("bridge", scenario.bridges),
            ("statement", scenario.statements),
        ):
            seen = {}
            for decl in decls:
                if decl.id in seen:
                    self.errors.append(
                        ParseError(f"duplicate {name} identifier {decl.id!r}", decl.span)
                    )
                else:
                    seen[decl.id] = decl

    def system_decl(self) -> SystemDecl:
        start = self.expect_keyword("system")
        name = self.ident("system name")
        self.expect_keyword("dim")
        dim = self.int_value("system dimension")
        factors = None
        end = self.tokens[self.pos - 1]
        if self.peek().kind == "EQUALS":
            self.advance()
            left = self.ident("factor system name")
            sep = self.peek()
            if not (sep.kind == "IDENT" and sep.text == "x"):
                self.fail("expected 'x' between factor systems", sep, expected=("'x'",))
            self.advance()
            right = self.ident("factor system name")
            factors = (left.text, right.text)
            end = right
        return SystemDecl(name.text, dim, factors, self.span_between(start, end))

    def structure_decl(self) -> StructureDecl:
        start = self.expect_keyword("structure")
        name = self.ident("structure name")
        self.expect_keyword("over")
        over = self.ident("system name")
        if self.at_keyword("builtin"):
            self.advance()
            builtin = self.ident("builtin structure name")
            body = StructureBuiltinBody(builtin.text)
            end = builtin
        else:
            rows = self.amplitude_rows("LBRACE", "RBRACE", "'}'")
            end = self.tokens[self.pos - 1]
            if len(rows) == 1:
                body = VectorBody(rows[0])
            else:
                body = MatrixBody(rows)
        return StructureDecl(name.text, over.text, body, self.span_between(start, end))

    def config_decl(self) -> ConfigDecl:
        start = self.expect_keyword("config")
        name = self.ident("config name")
        self.expect_keyword("over")
        over = self.ident("system name")
        if self.at_keyword("builtin"):
            self.advance()
            builtin = self.ident("builtin config name")
            self.expect("LPAREN", "'('")
            args = []
            if self.peek().kind != "RPAREN":
                args.append(self.signed_number())
                while self.peek().kind == "COMMA":
                    self.advance()
                    args.append(self.signed_number())
            end = self.expect("RPAREN", "')'")
            body = ConfigBuiltinBody(builtin.text, tuple(args))
        else:
            self.expect("LBRACE", "'{'")
            effects = []
            while self.peek().kind != "RBRACE":
                label = self.ident("outcome label")
                self.expect("COLON", "':'")
                rows = self.amplitude_rows("LBRACKET", "RBRACKET", "']'")
                entry_end = self.tokens[self.pos - 1]
                effects.append(
                    EffectEntry(label.text, rows, self.span_between(label, entry_end))
                )
                if self.peek().kind == "COMMA":
                    self.advance()
            end = self.expect("RBRACE", "'}'")
            if not effects:
                self.fail("configuration needs at least one effect", end)
            body = EffectTableBody(tuple(effects))
        return ConfigDecl(name.text, over.text, body, self.span_between(start, end))

    def bridge_decl(self) -> BridgeDecl:
        start = self.expect_keyword("bridge")
        name = self.ident("bridge name")
        kind_tok = self.peek()
        if not (kind_tok.kind == "IDENT" and kind_tok.text in ("physical", "epistemic")):
            self.fail("expected bridge kind", kind_tok, expected=("'physical'", "'epistemic'"))
        self.advance()
        self.expect_keyword("via")
        config = self.ident("config name")
        self.expect("LBRACE", "'{'")
        maps = []
        while self.peek().kind != "RBRACE":
            entry_start = self.expect("LPAREN", "'('")
            source = [self.ident("outcome label").text]
            while self.peek().kind == "COMMA":
                self.advance()
                source.append(self.ident("outcome label").text)
            self.expect("RPAREN", "')'")
            self.expect("ARROW", "'->'")
            target = self.outcome_label()
            entry_end = self.tokens[self.pos - 1]
            maps.append(
                BridgeMapEntry(tuple(source), target, self.span_between(entry_start, entry_end))
            )
            if self.peek().kind == "COMMA":
                self.advance()
        end = self.expect("RBRACE", "'}'")
        return BridgeDecl(
            name.text, kind_tok.text, config.text, tuple(maps), self.span_between(start, end)
        )

    # -- statements ---------------------------------------------------------

    def statement_decl(self) -> StatementDecl:
        start = self.expect_keyword("statement")
        name = self.ident("statement name")
        self.expect("LBRACE", "'{'")
        node = self.claim()
        end = self.expect("RBRACE", "'}'")
        return StatementDecl(name.text, node, self.span_between(start, end))

    def claim(self) -> StatementNode:
        tok = self.peek()
        if self.at_keyword("yields"):
            return self.yields_claim()
        if self.at_keyword("compose"):
            return self.compose_claim()
        if self.at_keyword("joint"):
            return self.joint_claim()
        self.fail("expected a claim", tok, expected=("'yields'", "'compose'", "'joint'"))

    def subject(self) -> SubjectRef:
        first = self.ident("subject system")
        if self.peek().kind == "DOT":
            self.advance()
            part = self.ident("subsystem name")
            return SubjectRef(first.text, part.text, self.span_between(first, part))
        return SubjectRef(first.text, None, self.span_of(first))

    def outcome_label(self):
        if self.peek().kind == "LPAREN":
            self.advance()
            labels = [self.ident("outcome label").text]
            while self.peek().kind == "COMMA":
                self.advance()
                labels.append(self.ident("outcome label").text)
            self.expect("RPAREN", "')'")
            if len(labels) < 2:
                self.fail("tuple outcome needs at least two labels")
            return tuple(labels)
        return self.ident("outcome label").text

    def yields_claim(self) -> StatementNode:
        start = self.expect_keyword("yields")
        self.expect("LPAREN", "'('")
        subj = self.subject()
        config = None
        if self.peek().kind == "COMMA":
            self.advance()
            config = self.ident("config name").text
        self.expect("RPAREN", "')'")
        self.expect("EQUALS", "'='")
        outcome = self.outcome_label()
        end = self.tokens[self.pos - 1]
        kind = "yields" if config is not None else "intrinsic-yields"
        return StatementNode(
            kind=kind, subject=subj, config=config, outcome=outcome,
            span=self.span_between(start, end),
        )

    def compose_claim(self) -> StatementNode:
        start = self.expect_keyword("compose")
        self.depth += 1
        try:
            if self.depth > MAX_COMPOSE_DEPTH:
                self.fail("compose nesting too deep", start)
            self.expect("LBRACE", "'{'")
            children = []
            while self.peek().kind != "RBRACE":
                children.append(self.claim())
            end = self.expect("RBRACE", "'}'")
            bridge = None
            if self.at_keyword("using"):
                self.advance()
                bridge_tok = self.ident("bridge name")
                bridge = bridge_tok.text
                end = bridge_tok
            if len(children) < 2:
                self.errors.append(
                    ParseError(
                        "compose needs at least two claims", self.span_between(start, end)
                    )
                )
                raise _Halt()
            return StatementNode(
                kind="composite", children=tuple(children), bridge=bridge,
                span=self.span_between(start, end),
            )
        finally:
            self.depth -= 1

    def joint_claim(self) -> StatementNode:
        start = self.expect_keyword("joint")
        self.expect("LPAREN", "'('")
        subj = self.subject()
        self.expect("COMMA", "','")
        c1 = self.ident("config name")
        self.expect("COMMA", "','")
        c2 = self.ident("config name")
        end = self.expect("RPAREN", "')'")
        return StatementNode(
            kind="joint-request", subject=subj, config=c1.text, config2=c2.text,
            span=self.span_between(start, end),
        )


def parse(text: str) -> ParseResult:
    """Parse scenario source text. Returns a ParseResult carrying either the
    Scenario or one or more ParseErrors with line/column locations."""
    if len(text.encode("utf-8", errors="replace")) > MAX_INPUT_BYTES:
        return ParseResult(
            errors=[ParseError("input exceeds the 1 MiB size cap", Span(1, 1, 1, 0))]
        )
    parser = _Parser(tokenize(text))
    scenario = parser.parse_scenario()
    if parser.errors:
        return ParseResult(errors=parser.errors)
    return ParseResult(scenario=scenario)
