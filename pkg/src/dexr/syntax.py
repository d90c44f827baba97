"""Concrete syntax for schemas, structures, rules and dependencies.

Grammar::

    document   := (schemaDecl | domainDecl | fact | rule)*
    schemaDecl := "schema" "{" (IDENT "/" INT)+ "}"
    domainDecl := "domain" "{" CONST+ "}"
    fact       := IDENT "(" CONST ("," CONST)* ")" "."
    rule       := (body | "true") "->" (head | "false") "."
    body       := atom ("," atom)*
    head       := disjunct ("|" disjunct)*
    disjunct   := ("exists" VAR+ ".")? atom ("," atom)*  |  VAR "=" VAR
    atom       := IDENT "(" term ("," term)* ")"
    term       := VAR | CONST

Variables start with an upper-case letter, constants with a lower-case letter
or are double-quoted strings; ``a*b`` denotes the pair constant of a product.
``%`` starts a comment.  Names of the form ``_n<k>`` and ``_f<k>`` are reserved
for chase nulls and frozen constants and are rejected in input.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import (Atom, Dexr, Disjunct, DisjunctiveDependency, Equality, Schema, Structure,
                   Var, canonicalize, term_key)
from .errors import (ArityError, ConstantInRule, ParseError, RuleError, SchemaError,
                     UnknownRelation)
from .products import pair, split_pair

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<arrow>->)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*(?:\*[a-z][A-Za-z0-9_]*)*)
  | (?P<punct>[(),.{}/|=])
""", re.VERBOSE)

_RESERVED = re.compile(r"_[nf]\d+$")
_SIMPLE_CONST = re.compile(r"[a-z][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            bad = text[pos]
            if bad == "_":
                raise ParseError("names starting with '_' are reserved", line, col)
            raise ParseError(f"unexpected character {bad!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind if kind != "punct" else chunk, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass(frozen=True)
class Declaration:
    kind: str  # "schema" | "domain" | "fact" | "rule" | "dependency"
    item: object
    line: int
    column: int


@dataclass
class SourceDocument:
    declarations: list = field(default_factory=list)
    schema: Schema | None = None

    @property
    def facts(self) -> list:
        return [d.item for d in self.declarations if d.kind == "fact"]

    @property
    def rules(self) -> list:
        return [d.item for d in self.declarations if d.kind == "rule"]

    @property
    def dependencies(self) -> list:
        return [d.item for d in self.declarations if d.kind == "dependency"]

    @property
    def statements(self) -> list:
        """Rules and dependencies in source order."""
        return [d.item for d in self.declarations if d.kind in ("rule", "dependency")]

    @property
    def declared_domain(self) -> tuple:
        return tuple(c for d in self.declarations if d.kind == "domain" for c in d.item)

    @property
    def structure(self) -> Structure:
        facts = self.facts
        dom = {c for f in facts for c in f.args} | set(self.declared_domain)
        return Structure(self.schema, facts, dom)


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


def _name_const(text: str) -> str:
    parts = text.split("*")
    value = parts[0]
    for part in parts[1:]:
        value = pair(value, part)
    return value


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, expected, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"unexpected {found!r}", tok.line, tok.column, expected)

    def expect(self, kind, expected=None) -> Token:
        if self.tok.kind != kind:
            self.fail([expected or repr(kind)])
        return self.advance()

    def is_keyword(self, word) -> bool:
        return self.tok.kind == "name" and self.tok.text == word and self.peek().kind != "("

    # -- statements --------------------------------------------------------

    def document(self):
        out = []
        while self.tok.kind != "eof":
            start = self.tok
            if self.is_keyword("schema"):
                out.append(("schema", self.schema_decl(), start))
            elif self.is_keyword("domain"):
                out.append(("domain", self.domain_decl(), start))
            else:
                out.append(self.fact_or_rule(start))
        return out

    def schema_decl(self):
        self.advance()
        self.expect("{")
        rels = []
        while self.tok.kind == "name":
            name = self.advance()
            self.expect("/")
            arity = self.expect("int", "arity")
            rels.append((name.text, int(arity.text), name))
        if not rels:
            self.fail(["relation declaration"])
        self.expect("}")
        return rels

    def domain_decl(self):
        self.advance()
        self.expect("{")
        consts = []
        while self.tok.kind in ("name", "string"):
            tok = self.tok
            term = self.term()
            if isinstance(term, Var):
                raise ParseError(f"variable {term} in domain declaration", tok.line, tok.column)
            consts.append(term)
        if not consts:
            self.fail(["constant"])
        self.expect("}")
        return tuple(consts)

    def fact_or_rule(self, start):
        if self.is_keyword("true"):
            self.advance()
            body = []
        else:
            body = [self.atom()]
            while self.tok.kind == ",":
                self.advance()
                body.append(self.atom())
            if self.tok.kind == "." and len(body) == 1:
                self.advance()
                return ("fact", body[0], start)
        self.expect("arrow", "'->'")
        if self.is_keyword("false"):
            self.advance()
            head = []
        else:
            head = [self.disjunct()]
            while self.tok.kind == "|":
                self.advance()
                head.append(self.disjunct())
        self.expect(".", "'.'")
        return ("rule", (body, head), start)

    def disjunct(self):
        tok = self.tok
        if tok.kind == "name" and tok.text[0].isupper() and self.peek().kind == "=":
            left = self.term()
            self.advance()
            right_tok = self.tok
            right = self.term()
            if not isinstance(right, Var):
                raise ConstantInRule(f"constant {right} in equality", right_tok.line, right_tok.column)
            return ("eq", left, right, tok)
        existentials = []
        if self.is_keyword("exists"):
            self.advance()
            while self.tok.kind == "name" and self.tok.text[0].isupper() and "*" not in self.tok.text:
                existentials.append(Var(self.advance().text))
            if not existentials:
                self.fail(["existential variable"])
            self.expect(".", "'.'")
        atoms = [self.atom()]
        while self.tok.kind == ",":
            self.advance()
            atoms.append(self.atom())
        return ("ex", existentials, atoms, tok)

    def atom(self):
        name = self.expect("name", "relation name")
        if "*" in name.text:
            self.fail(["relation name"], name)
        self.expect("(", "'('")
        args = [self.term()]
        while self.tok.kind == ",":
            self.advance()
            args.append(self.term())
        self.expect(")", "')'")
        return (Atom(name.text, tuple(args)), name)

    def term(self):
        tok = self.tok
        if tok.kind == "string":
            self.advance()
            value = _unquote(tok.text)
            if _RESERVED.match(value):
                raise ParseError(f"constant {value!r} is in a reserved namespace", tok.line, tok.column)
            return value
        if tok.kind == "name":
            self.advance()
            if tok.text[0].isupper():
                if "*" in tok.text:
                    raise ParseError(f"malformed pair constant {tok.text!r}", tok.line, tok.column)
                return Var(tok.text)
            return _name_const(tok.text)
        self.fail(["variable", "constant"])


def _check_atom(atom, tok, schema):
    if atom.relation not in schema:
        raise UnknownRelation(f"unknown relation {atom.relation}", tok.line, tok.column)
    if schema.arity(atom.relation) != len(atom.args):
        raise ArityError(f"{atom.relation} has arity {schema.arity(atom.relation)}, "
                         f"used with {len(atom.args)} arguments", tok.line, tok.column)


def parse(text: str, schema: Schema | None = None) -> SourceDocument:
    """Parse a document; ``schema`` supplies the relations when the text does
    not declare its own (e.g. a structure file read against a rules file)."""
    raw = _Parser(text).document()
    declared = [item for kind, item, _ in raw if kind == "schema"]
    if len(declared) > 1:
        tok = [t for kind, _, t in raw if kind == "schema"][1]
        raise ParseError("at most one schema declaration is allowed", tok.line, tok.column)
    if declared:
        try:
            doc_schema = Schema(tuple((n, a) for n, a, _ in declared[0]))
        except SchemaError as exc:
            tok = declared[0][0][2]
            raise ParseError(str(exc), tok.line, tok.column) from None
        if schema is not None:
            doc_schema = schema.union(doc_schema)
    elif schema is not None:
        doc_schema = schema
    else:
        doc_schema = None

    atoms = []
    for kind, item, _ in raw:
        if kind == "fact":
            atoms.append(item)
        elif kind == "rule":
            body, head = item
            atoms.extend(body)
            for d in head:
                if d[0] == "ex":
                    atoms.extend(d[2])
    if doc_schema is None:
        found = {}
        for atom, tok in atoms:
            if found.setdefault(atom.relation, len(atom.args)) != len(atom.args):
                raise ArityError(f"{atom.relation} used with {len(atom.args)} arguments, "
                                 f"earlier with {found[atom.relation]}", tok.line, tok.column)
        doc_schema = Schema(tuple(found.items()))
    for atom, tok in atoms:
        _check_atom(atom, tok, doc_schema)

    doc = SourceDocument(schema=doc_schema)
    for kind, item, tok in raw:
        if kind == "schema":
            doc.declarations.append(Declaration("schema", doc_schema, tok.line, tok.column))
        elif kind == "domain":
            doc.declarations.append(Declaration("domain", item, tok.line, tok.column))
        elif kind == "fact":
            atom, atok = item
            for t in atom.args:
                if isinstance(t, Var):
                    raise ParseError(f"variable {t} in fact {atom}", atok.line, atok.column)
            doc.declarations.append(Declaration("fact", atom, tok.line, tok.column))
        else:
            rule = _build_rule(*item)
            kind = "rule" if isinstance(rule, Dexr) else "dependency"
            doc.declarations.append(Declaration(kind, rule, tok.line, tok.column))
    return doc


def _build_rule(body, head):
    for atom, tok in list(body) + [a for d in head if d[0] == "ex" for a in d[2]]:
        for t in atom.args:
            if not isinstance(t, Var):
                raise ConstantInRule(f"constant {t!r} in rule atom {atom}", tok.line, tok.column)
    disjuncts = []
    for d in head:
        if d[0] == "eq":
            disjuncts.append(Equality(d[1], d[2]))
        else:
            disjuncts.append(Disjunct(frozenset(d[1]), tuple(a for a, _ in d[2])))
    body_atoms = tuple(a for a, _ in body)
    start = body[0][1] if body else (head[0][-1] if head else None)
    try:
        if disjuncts and all(isinstance(d, Disjunct) for d in disjuncts):
            return Dexr(body_atoms, tuple(disjuncts))
        return DisjunctiveDependency(body_atoms, tuple(disjuncts))
    except RuleError as exc:
        line, col = (start.line, start.column) if start else (0, 0)
        raise ParseError(str(exc), line, col) from None


def parse_rule(text: str, schema: Schema | None = None):
    statements = parse(text, schema).statements
    if len(statements) != 1:
        raise ParseError(f"expected exactly one rule, found {len(statements)}")
    return statements[0]


def parse_constant(text: str) -> str:
    p = _Parser(text)
    tok = p.tok
    term = p.term()
    if isinstance(term, Var):
        raise ParseError(f"expected a constant, found variable {term}", tok.line, tok.column)
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return term


def parse_structure(text: str, schema: Schema | None = None) -> Structure:
    doc = parse(text, schema)
    if doc.statements:
        raise ParseError("structure files may not contain rules")
    return doc.structure


# ----------------------------------------------------------------- printing


def format_constant(c: str) -> str:
    if _SIMPLE_CONST.match(c) or _RESERVED.match(c):
        return c
    parts = split_pair(c)
    if parts and all(_SIMPLE_CONST.match(p) for p in parts):
        return f"{parts[0]}*{parts[1]}"
    escaped = c.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def format_term(t) -> str:
    return t.name if isinstance(t, Var) else format_constant(t)


def format_atom(atom: Atom) -> str:
    return f"{atom.relation}({','.join(format_term(t) for t in atom.args)})"


def _format_disjunct(d) -> str:
    if isinstance(d, Equality):
        return f"{format_term(d.left)} = {format_term(d.right)}"
    atoms = ", ".join(format_atom(a) for a in d.atoms)
    if d.existentials:
        exs = [v for v in d.variables if v in d.existentials]
        return f"exists {' '.join(v.name for v in exs)}. {atoms}"
    return atoms


def format_rule(rule, canonical: bool = True) -> str:
    if canonical:
        rule = canonicalize(rule)
    body = ", ".join(format_atom(a) for a in rule.body) or "true"
    head = " | ".join(_format_disjunct(d) for d in rule.disjuncts) or "false"
    return f"{body} -> {head}."


def format_schema(schema: Schema) -> str:
    return "schema { " + " ".join(f"{n}/{a}" for n, a in schema) + " }"


def format_structure(s: Structure, with_schema: bool = False) -> str:
    lines = [format_schema(s.schema)] if with_schema else []
    if s.domain != s.active_domain():
        lines.append("domain { " + " ".join(map(format_constant, s.sorted_domain())) + " }")
    lines.extend(format_atom(f) + "." for f in s.sorted_facts())
    return "\n".join(lines)


def to_text(item, **kwargs) -> str:
    """Render any toolkit object in the concrete syntax."""
    if hasattr(item, "to_text"):
        return item.to_text()
    if isinstance(item, Schema):
        return format_schema(item)
    if isinstance(item, Structure):
        return format_structure(item, **kwargs)
    if isinstance(item, (Dexr, DisjunctiveDependency)):
        return format_rule(item, **kwargs)
    if isinstance(item, Atom):
        return format_atom(item)
    if isinstance(item, (Disjunct, Equality)):
        return _format_disjunct(item)
    if isinstance(item, SourceDocument):
        lines = [format_schema(item.schema)]
        for d in item.declarations:
            if d.kind == "domain":
                lines.append("domain { " + " ".join(map(format_constant, d.item)) + " }")
            elif d.kind == "fact":
                lines.append(format_atom(d.item) + ".")
            elif d.kind in ("rule", "dependency"):
                lines.append(format_rule(d.item))
        return "\n".join(lines)
    if isinstance(item, (list, tuple, set, frozenset)):
        items = sorted(item, key=term_key) if isinstance(item, (set, frozenset)) else item
        return "\n".join(to_text(x, **kwargs) for x in items)
    raise TypeError(f"cannot render {type(item).__name__}")
