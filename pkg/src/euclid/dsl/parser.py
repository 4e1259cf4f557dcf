"""Parser and static checker for construction programs.

The surface syntax binds each geometric step to a name:

    construction midpoint(point A, point B) {
      let c1 = circle(A; A, B);
      let c2 = circle(B; A, B);
      let [P, Q] = intersect(c1, c2);
      let l = line(P, Q);
      let ab = line(A, B);
      let [M] = intersect(l, ab);
      return M;
    }

Intersection bindings name one or two points in lexicographic order of
the intersection.  `choose(N1, ..., Nk | test)` picks the unique
candidate passing the test.  `arbitrary in_disk(P, q)` and `arbitrary
in_cell(cond, ...)` request oracle points; disk literals are squared
radii, cell conditions are inside(c)/outside(c) for circles and
pos(l)/neg(l) for line sides.  Tests may be prefixed with `not`.
`#` starts a comment; whitespace is insignificant.

Parsing reports syntax problems as ParseError with positions; the
static checker rejects unknown names, arity and kind mismatches,
rebinding outside While bodies, and unbound returns as CheckError.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import CheckError, ParseError
from .ast import (
    CIRCLE,
    LINE,
    POINT,
    TEST_ARITY,
    CellExpr,
    DiskExpr,
    If,
    LetArbitrary,
    LetChoose,
    LetCircle,
    LetIntersect,
    LetLine,
    Param,
    Pos,
    Program,
    Test,
    While,
)

KEYWORDS = frozenset({
    "construction", "let", "line", "circle", "intersect", "choose",
    "arbitrary", "if", "else", "while", "budget", "return",
    "in_disk", "in_cell", "inside", "outside", "pos", "neg", "not",
    "point",
} | set(TEST_ARITY))

PUNCT = "(){}[],;|=/"

COND_KINDS = {"inside": CIRCLE, "outside": CIRCLE, "pos": LINE, "neg": LINE}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word if word in KEYWORDS else "NAME"
            tokens.append(_Token(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in PUNCT:
            tokens.append(_Token(ch, ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def pos(self) -> Pos:
        tok = self.peek()
        return Pos(tok.line, tok.col)

    def name(self) -> str:
        return self.expect("NAME").text

    def namelist(self) -> tuple[str, ...]:
        names = [self.name()]
        while self.at(","):
            self.next()
            names.append(self.name())
        return tuple(names)

    def program(self) -> Program:
        self.expect("construction")
        prog_name = self.name()
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                tok = self.next()
                if tok.kind not in (POINT, LINE, CIRCLE):
                    raise ParseError("parameter needs a point/line/circle kind",
                                     tok.line, tok.col)
                params.append(Param(tok.kind, self.name()))
                if not self.at(","):
                    break
                self.next()
        self.expect(")")
        self.expect("{")
        body = []
        while not self.at("return"):
            body.append(self.stmt())
        self.expect("return")
        returns = self.namelist()
        self.expect(";")
        self.expect("}")
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
        return Program(prog_name, tuple(params), tuple(body), returns)

    def block(self) -> tuple:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.stmt())
        self.expect("}")
        return tuple(stmts)

    def stmt(self):
        tok = self.peek()
        if tok.kind == "let":
            return self.let_stmt()
        if tok.kind == "if":
            pos = self.pos()
            self.next()
            test = self.test()
            then = self.block()
            orelse = ()
            if self.at("else"):
                self.next()
                orelse = self.block()
            return If(test, then, orelse, pos)
        if tok.kind == "while":
            pos = self.pos()
            self.next()
            test = self.test()
            self.expect("budget")
            budget_tok = self.expect("INT")
            body = self.block()
            return While(test, int(budget_tok.text), body, pos)
        raise ParseError(f"expected a statement, found {tok.text or 'end of input'!r}",
                         tok.line, tok.col)

    def let_stmt(self):
        pos = self.pos()
        self.expect("let")
        if self.at("["):
            self.next()
            names = self.namelist()
            self.expect("]")
            self.expect("=")
            self.expect("intersect")
            self.expect("(")
            g = self.name()
            self.expect(",")
            h = self.name()
            self.expect(")")
            self.expect(";")
            if len(names) > 2:
                raise ParseError("intersect binds one or two names",
                                 pos.line, pos.col)
            return LetIntersect(names, g, h, pos)
        target = self.name()
        self.expect("=")
        head = self.next()
        if head.kind == "line":
            self.expect("(")
            p = self.name()
            self.expect(",")
            q = self.name()
            self.expect(")")
            self.expect(";")
            return LetLine(target, p, q, pos)
        if head.kind == "circle":
            self.expect("(")
            center = self.name()
            self.expect(";")
            a = self.name()
            self.expect(",")
            b = self.name()
            self.expect(")")
            self.expect(";")
            return LetCircle(target, center, a, b, pos)
        if head.kind == "choose":
            self.expect("(")
            candidates = self.namelist()
            self.expect("|")
            test = self.test()
            self.expect(")")
            self.expect(";")
            return LetChoose(target, candidates, test, pos)
        if head.kind == "arbitrary":
            region = self.region()
            self.expect(";")
            return LetArbitrary(target, region, pos)
        if head.kind == "intersect":
            raise ParseError("intersect bindings use let [N] = intersect(...)",
                             head.line, head.col)
        raise ParseError(f"unknown statement head {head.text!r}",
                         head.line, head.col)

    def region(self):
        tok = self.next()
        pos = Pos(tok.line, tok.col)
        if tok.kind == "in_disk":
            self.expect("(")
            center = self.name()
            self.expect(",")
            r2 = self.posrational()
            self.expect(")")
            return DiskExpr(center, r2, pos)
        if tok.kind == "in_cell":
            self.expect("(")
            conds = [self.signcond()]
            while self.at(","):
                self.next()
                conds.append(self.signcond())
            self.expect(")")
            return CellExpr(tuple(conds), pos)
        raise ParseError("expected in_disk or in_cell", tok.line, tok.col)

    def signcond(self) -> tuple[str, str]:
        tok = self.next()
        if tok.kind not in COND_KINDS:
            raise ParseError("expected inside/outside/pos/neg",
                             tok.line, tok.col)
        self.expect("(")
        name = self.name()
        self.expect(")")
        return (tok.kind, name)

    def posrational(self) -> Fraction:
        tok = self.expect("INT")
        num = int(tok.text)
        den = 1
        if self.at("/"):
            self.next()
            den_tok = self.expect("INT")
            den = int(den_tok.text)
            if den == 0:
                raise ParseError("zero denominator", den_tok.line, den_tok.col)
        value = Fraction(num, den)
        if value <= 0:
            raise ParseError("radius literal must be positive",
                             tok.line, tok.col)
        return value

    def test(self) -> Test:
        tok = self.peek()
        if tok.kind == "not":
            self.next()
            inner = self.test()
            return Test(inner.kind, inner.args, not inner.negated,
                        Pos(tok.line, tok.col))
        tok = self.next()
        if tok.kind not in TEST_ARITY:
            raise ParseError(f"unknown test {tok.text!r}", tok.line, tok.col)
        self.expect("(")
        args = self.namelist()
        self.expect(")")
        return Test(tok.kind, args, False, Pos(tok.line, tok.col))


def parse_program(text: str, check: bool = True) -> Program:
    """Parse (and by default statically check) a construction program."""
    prog = _Parser(_tokenize(text)).program()
    if check:
        check_program(prog)
    return prog


def _fail(pos: Pos, message: str):
    raise CheckError(f"line {pos.line}, col {pos.col}: {message}")


def _lookup(env: dict, name: str, pos: Pos) -> str:
    if name not in env:
        _fail(pos, f"unknown name {name!r}")
    return env[name]


def _want(env: dict, name: str, kinds, pos: Pos, what: str):
    kind = _lookup(env, name, pos)
    if kind not in kinds:
        _fail(pos, f"{what} needs {' or '.join(kinds)}, but {name!r} is a {kind}")


def _check_test(test: Test, env: dict):
    arity = TEST_ARITY[test.kind]
    if len(test.args) != arity:
        _fail(test.pos, f"{test.kind} takes {arity} arguments, got {len(test.args)}")
    a = test.args
    if test.kind == "equal":
        k0 = _lookup(env, a[0], test.pos)
        k1 = _lookup(env, a[1], test.pos)
        if k0 != k1:
            _fail(test.pos, f"equal compares same-kind objects, got {k0} and {k1}")
    elif test.kind == "on":
        _want(env, a[0], (POINT,), test.pos, "on")
        _want(env, a[1], (LINE, CIRCLE), test.pos, "on")
    elif test.kind == "intersects":
        for name in a:
            _want(env, name, (LINE, CIRCLE), test.pos, "intersects")
    else:   # between, ccw, dist_le, dist_eq
        for name in a:
            _want(env, name, (POINT,), test.pos, test.kind)


def _bind(env: dict, name: str, kind: str, in_loop: bool, pos: Pos):
    if name in env:
        if not in_loop:
            _fail(pos, f"{name!r} is already bound; rebinding is only "
                       "allowed inside while bodies")
        if env[name] != kind:
            _fail(pos, f"rebinding {name!r} changes its kind "
                       f"from {env[name]} to {kind}")
    env[name] = kind


def _check_block(stmts, env: dict, in_loop: bool):
    for st in stmts:
        if isinstance(st, LetLine):
            for name in (st.p, st.q):
                _want(env, name, (POINT,), st.pos, "line")
            if st.p == st.q:
                _fail(st.pos, "line through a point and itself")
            _bind(env, st.name, LINE, in_loop, st.pos)
        elif isinstance(st, LetCircle):
            for name in (st.center, st.a, st.b):
                _want(env, name, (POINT,), st.pos, "circle")
            if st.a == st.b:
                _fail(st.pos, "circle with zero radius pair")
            _bind(env, st.name, CIRCLE, in_loop, st.pos)
        elif isinstance(st, LetIntersect):
            for name in (st.g, st.h):
                _want(env, name, (LINE, CIRCLE), st.pos, "intersect")
            if st.g == st.h:
                _fail(st.pos, "intersect of a curve with itself")
            if len(set(st.names)) != len(st.names):
                _fail(st.pos, "duplicate intersection binding names")
            for name in st.names:
                _bind(env, name, POINT, in_loop, st.pos)
        elif isinstance(st, LetChoose):
            if len(set(st.candidates)) != len(st.candidates):
                _fail(st.pos, "duplicate choose candidates")
            kinds = {_lookup(env, c, st.pos) for c in st.candidates}
            if len(kinds) != 1:
                _fail(st.pos, "choose candidates must share one kind")
            kind = kinds.pop()
            inner = dict(env)
            inner[st.name] = kind
            _check_test(st.test, inner)
            _bind(env, st.name, kind, in_loop, st.pos)
        elif isinstance(st, LetArbitrary):
            region = st.region
            if isinstance(region, DiskExpr):
                _want(env, region.center, (POINT,), region.pos, "in_disk")
            else:
                for cond_kind, name in region.conds:
                    _want(env, name, (COND_KINDS[cond_kind],), region.pos,
                          cond_kind)
            _bind(env, st.name, POINT, in_loop, st.pos)
        elif isinstance(st, If):
            _check_test(st.test, env)
            then_env = dict(env)
            _check_block(st.then, then_env, in_loop)
            else_env = dict(env)
            _check_block(st.orelse, else_env, in_loop)
            merged = {name: kind for name, kind in then_env.items()
                      if else_env.get(name) == kind}
            env.clear()
            env.update(merged)
        elif isinstance(st, While):
            if st.budget < 0:
                _fail(st.pos, "negative while budget")
            _check_test(st.test, env)
            body_env = dict(env)
            _check_block(st.body, body_env, True)
            # names first bound inside the body may never materialize,
            # so only prior bindings survive the loop
        else:       # pragma: no cover - parser emits no other nodes
            raise TypeError(f"unexpected statement {st!r}")


def check_program(prog: Program):
    """Static checks; raises CheckError on the first violation."""
    env: dict[str, str] = {}
    for param in prog.params:
        if param.name in env:
            raise CheckError(f"duplicate parameter {param.name!r}")
        env[param.name] = param.kind
    _check_block(prog.body, env, False)
    for name in prog.returns:
        if name not in env:
            raise CheckError(f"returned name {name!r} is not always bound")
