"""Parser for the s-expression model language.

A model file is a sequence of parenthesized forms; ``;`` starts a comment
running to the end of the line. The accepted forms are:

    (chunk-type NAME SLOT...)
    (add-dm (NAME isa TYPE SLOT VALUE ...) ...)
    (goal-focus BUFFER CHUNK)
    (p NAME TEST... ==> ACTION...)
    (spp RULE :reward NUMBER)
    (spp RULE :success t)
    (spp RULE :failure t)

A TEST is ``=buffer> isa TYPE SLOT VALUE ...`` where values may be constants
or ``=variables``. An ACTION is either a modification ``=buffer> SLOT VALUE
...``, a clearing ``-buffer>``, a host binding ``!bind! =VAR PROVIDER``
(resolved at apply time by a provider registered with the engine), or an
``!output!`` directive, which is parsed and ignored (logged). Buffer requests
(``+buffer>``) are not supported and rejected at parse time.

Every variable used on the right-hand side must be bound on the left-hand
side or by a ``!bind!`` entry.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .chunks import ChunkType
from .errors import (
    DuplicateBufferTest,
    DuplicateRuleName,
    ModelSyntaxError,
    UnboundRhsVariable,
    UnknownAnnotationTarget,
)

log = logging.getLogger(__name__)

MODIFY = "modify"
CLEAR = "clear"


def is_variable(symbol: str) -> bool:
    return symbol.startswith("=") and not symbol.endswith(">")


@dataclass(frozen=True)
class BufferTest:
    buffer: str
    type: str
    slot_tests: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Action:
    kind: str  # MODIFY or CLEAR
    buffer: str
    slot_updates: tuple[tuple[str, str], ...] = ()
    binds: tuple[tuple[str, str], ...] = ()  # (variable, provider name)


@dataclass(frozen=True)
class Production:
    name: str
    tests: tuple[BufferTest, ...]
    actions: tuple[Action, ...]
    source_index: int


@dataclass(frozen=True)
class ChunkSpec:
    name: str
    type: str
    slot_values: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Annotation:
    reward: Fraction | None = None
    success: bool = False
    failure: bool = False


@dataclass(frozen=True)
class ModelAST:
    chunk_types: tuple[ChunkType, ...] = ()
    initial_chunks: tuple[ChunkSpec, ...] = ()
    buffer_inits: tuple[tuple[str, str], ...] = ()
    productions: tuple[Production, ...] = ()
    annotations: dict = field(default_factory=dict)  # rule name -> Annotation


# -- tokenizer / reader ---------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    start: _Token | None = None

    def flush():
        nonlocal start
        if start is not None:
            tokens.append(start)
            start = None

    while i < n:
        ch = text[i]
        if ch == ";":
            flush()
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            flush()
            tokens.append(_Token(ch, line, col))
        elif ch in " \t\r\n":
            flush()
        elif start is None:
            start = _Token(ch, line, col)
        else:
            start = replace(start, text=start.text + ch)
        if ch == "\n":
            line += 1
            col = 1
        else:
            col += 1
        i += 1
    flush()
    return tokens


def _read_forms(tokens):
    """Group tokens into nested lists; returns the top-level forms."""
    forms = []
    stack = [forms]
    opens = []
    for tok in tokens:
        if tok.text == "(":
            new: list = []
            stack[-1].append(new)
            stack.append(new)
            opens.append(tok)
        elif tok.text == ")":
            if len(stack) == 1:
                raise ModelSyntaxError("unbalanced ')'", tok.line, tok.column)
            stack.pop()
            opens.pop()
        else:
            if len(stack) == 1:
                raise ModelSyntaxError(
                    f"top-level token {tok.text!r} outside any form", tok.line, tok.column
                )
            stack[-1].append(tok)
    if opens:
        raise ModelSyntaxError("unclosed '('", opens[-1].line, opens[-1].column)
    return forms


def _atom(item, what):
    if not isinstance(item, _Token):
        line = column = None
        probe = item
        while isinstance(probe, list) and probe:
            probe = probe[0]
        if isinstance(probe, _Token):
            line, column = probe.line, probe.column
        raise ModelSyntaxError(f"expected {what}, found a nested list", line, column)
    return item


# -- form parsers -----------------------------------------------------------------

class _ModelReader:
    def __init__(self):
        self.chunk_types: list[ChunkType] = []
        self.initial_chunks: list[ChunkSpec] = []
        self.buffer_inits: list[tuple[str, str]] = []
        self.productions: list[Production] = []
        self.annotations: dict[str, Annotation] = {}

    def read(self, forms) -> ModelAST:
        for form in forms:
            if not form or not isinstance(form[0], _Token):
                raise ModelSyntaxError("form must start with a keyword")
            head = form[0]
            handler = {
                "chunk-type": self._chunk_type,
                "add-dm": self._add_dm,
                "goal-focus": self._goal_focus,
                "p": self._production,
                "spp": self._annotation,
            }.get(head.text)
            if handler is None:
                raise ModelSyntaxError(
                    f"unknown form {head.text!r}", head.line, head.column
                )
            handler(form)
        return ModelAST(
            chunk_types=tuple(self.chunk_types),
            initial_chunks=tuple(self.initial_chunks),
            buffer_inits=tuple(self.buffer_inits),
            productions=tuple(self.productions),
            annotations=self.annotations,
        )

    def _chunk_type(self, form):
        head = form[0]
        if len(form) < 2:
            raise ModelSyntaxError("chunk-type needs a name", head.line, head.column)
        name = _atom(form[1], "a type name").text
        slots = tuple(_atom(item, "a slot name").text for item in form[2:])
        self.chunk_types.append(ChunkType(name, slots))

    def _add_dm(self, form):
        head = form[0]
        if len(form) < 2:
            raise ModelSyntaxError("add-dm needs at least one chunk", head.line, head.column)
        for spec in form[1:]:
            if isinstance(spec, _Token):
                raise ModelSyntaxError(
                    "add-dm entries must be parenthesized chunks", spec.line, spec.column
                )
            if len(spec) < 3 or _atom(spec[1], "'isa'").text != "isa":
                raise ModelSyntaxError(
                    "chunk must read (NAME isa TYPE ...)", head.line, head.column
                )
            name = _atom(spec[0], "a chunk name").text
            ctype = _atom(spec[2], "a type name").text
            rest = spec[3:]
            if len(rest) % 2:
                raise ModelSyntaxError(
                    f"chunk {name!r} has a slot without a value", head.line, head.column
                )
            pairs = []
            for i in range(0, len(rest), 2):
                slot = _atom(rest[i], "a slot name").text
                value = _atom(rest[i + 1], "a value").text
                if is_variable(value):
                    raise ModelSyntaxError(
                        f"chunk {name!r} may not hold the variable {value!r}",
                        rest[i + 1].line,
                        rest[i + 1].column,
                    )
                pairs.append((slot, value))
            self.initial_chunks.append(ChunkSpec(name, ctype, tuple(pairs)))

    def _goal_focus(self, form):
        head = form[0]
        if len(form) != 3:
            raise ModelSyntaxError("goal-focus needs BUFFER CHUNK", head.line, head.column)
        buffer = _atom(form[1], "a buffer name").text
        chunk = _atom(form[2], "a chunk name").text
        self.buffer_inits.append((buffer, chunk))

    def _production(self, form):
        head = form[0]
        if len(form) < 2:
            raise ModelSyntaxError("rule needs a name", head.line, head.column)
        name_tok = _atom(form[1], "a rule name")
        name = name_tok.text
        if any(p.name == name for p in self.productions):
            raise DuplicateRuleName(
                f"rule {name!r} declared twice", name_tok.line, name_tok.column
            )
        body = form[2:]
        arrow = [i for i, item in enumerate(body)
                 if isinstance(item, _Token) and item.text == "==>"]
        if len(arrow) != 1:
            raise ModelSyntaxError(
                f"rule {name!r} needs exactly one '==>'", head.line, head.column
            )
        tests = self._tests(name, body[: arrow[0]])
        actions = self._actions(name, tests, body[arrow[0] + 1 :])
        self.productions.append(
            Production(name, tests, actions, len(self.productions))
        )

    def _tests(self, rule, items):
        tests = []
        i = 0
        while i < len(items):
            tok = _atom(items[i], "a buffer test")
            if not (tok.text.startswith("=") and tok.text.endswith(">")):
                raise ModelSyntaxError(
                    f"rule {rule!r}: expected a '=buffer>' test, found {tok.text!r}",
                    tok.line, tok.column,
                )
            buffer = tok.text[1:-1]
            if any(t.buffer == buffer for t in tests):
                raise DuplicateBufferTest(
                    f"rule {rule!r} tests buffer {buffer!r} twice", tok.line, tok.column
                )
            i += 1
            if (i + 1 >= len(items) or _atom(items[i], "'isa'").text != "isa"):
                raise ModelSyntaxError(
                    f"rule {rule!r}: test on {buffer!r} must start with 'isa TYPE'",
                    tok.line, tok.column,
                )
            ctype = _atom(items[i + 1], "a type name").text
            i += 2
            pairs = []
            while i < len(items):
                slot_tok = _atom(items[i], "a slot name")
                if slot_tok.text.endswith(">"):
                    break
                if i + 1 >= len(items):
                    raise ModelSyntaxError(
                        f"rule {rule!r}: slot {slot_tok.text!r} has no value",
                        slot_tok.line, slot_tok.column,
                    )
                value = _atom(items[i + 1], "a value").text
                if any(s == slot_tok.text for s, _ in pairs):
                    raise ModelSyntaxError(
                        f"rule {rule!r} tests slot {slot_tok.text!r} twice",
                        slot_tok.line, slot_tok.column,
                    )
                pairs.append((slot_tok.text, value))
                i += 2
            tests.append(BufferTest(buffer, ctype, tuple(pairs)))
        return tuple(tests)

    def _actions(self, rule, tests, items):
        lhs_vars = {v for t in tests for _, v in t.slot_tests if is_variable(v)}
        bound = set(lhs_vars)
        binds: list[tuple[str, str]] = []  # pending, attached to their consumer
        actions: list[Action] = []
        i = 0
        while i < len(items):
            tok = items[i]
            if not isinstance(tok, _Token):
                raise ModelSyntaxError(f"rule {rule!r}: unexpected list in actions")
            if tok.text == "!bind!":
                if i + 2 >= len(items):
                    raise ModelSyntaxError(
                        f"rule {rule!r}: !bind! needs =VAR PROVIDER", tok.line, tok.column
                    )
                var = _atom(items[i + 1], "a variable").text
                provider = _atom(items[i + 2], "a provider name").text
                if not is_variable(var):
                    raise ModelSyntaxError(
                        f"rule {rule!r}: !bind! target {var!r} is not a variable",
                        tok.line, tok.column,
                    )
                if var in bound:
                    raise ModelSyntaxError(
                        f"rule {rule!r}: variable {var!r} is already bound",
                        tok.line, tok.column,
                    )
                bound.add(var)
                binds.append((var, provider))
                i += 3
            elif tok.text == "!output!":
                if i + 1 >= len(items):
                    raise ModelSyntaxError(
                        f"rule {rule!r}: !output! needs an argument", tok.line, tok.column
                    )
                log.debug("rule %s output directive: %s", rule, _format_output(items[i + 1]))
                i += 2
            elif tok.text.startswith("+") and tok.text.endswith(">"):
                raise ModelSyntaxError(
                    f"rule {rule!r}: buffer requests ({tok.text}) are unsupported",
                    tok.line, tok.column,
                )
            elif tok.text.startswith("-") and tok.text.endswith(">"):
                actions.append(Action(CLEAR, tok.text[1:-1]))
                i += 1
            elif tok.text.startswith("=") and tok.text.endswith(">"):
                buffer = tok.text[1:-1]
                i += 1
                pairs = []
                used_binds = []
                while i < len(items):
                    nxt = items[i]
                    if not isinstance(nxt, _Token) or nxt.text.endswith(">") \
                            or nxt.text in ("!bind!", "!output!"):
                        break
                    if i + 1 >= len(items):
                        raise ModelSyntaxError(
                            f"rule {rule!r}: slot {nxt.text!r} has no value",
                            nxt.line, nxt.column,
                        )
                    value_tok = _atom(items[i + 1], "a value")
                    value = value_tok.text
                    if any(s == nxt.text for s, _ in pairs):
                        raise ModelSyntaxError(
                            f"rule {rule!r} updates slot {nxt.text!r} twice",
                            nxt.line, nxt.column,
                        )
                    if is_variable(value):
                        if value not in bound:
                            raise UnboundRhsVariable(
                                f"rule {rule!r}: {value!r} is not bound on the "
                                "left-hand side or by !bind!",
                                value_tok.line, value_tok.column,
                            )
                        for entry in binds:
                            if entry[0] == value and entry not in used_binds:
                                used_binds.append(entry)
                    pairs.append((nxt.text, value))
                    i += 2
                for entry in used_binds:
                    binds.remove(entry)
                actions.append(Action(MODIFY, buffer, tuple(pairs), tuple(used_binds)))
            else:
                raise ModelSyntaxError(
                    f"rule {rule!r}: unexpected token {tok.text!r} in actions",
                    tok.line, tok.column,
                )
        if binds:
            var = binds[0][0]
            raise ModelSyntaxError(
                f"rule {rule!r}: !bind! variable {var!r} is never used by an action"
            )
        return tuple(actions)

    def _annotation(self, form):
        head = form[0]
        if len(form) != 4:
            raise ModelSyntaxError(
                "spp needs RULE :key VALUE", head.line, head.column
            )
        rule_tok = _atom(form[1], "a rule name")
        rule = rule_tok.text
        if not any(p.name == rule for p in self.productions):
            raise UnknownAnnotationTarget(
                f"spp names unknown rule {rule!r}", rule_tok.line, rule_tok.column
            )
        key = _atom(form[2], "an annotation key").text
        value_tok = _atom(form[3], "an annotation value")
        current = self.annotations.get(rule, Annotation())
        if key == ":reward":
            try:
                amount = Fraction(value_tok.text)
            except ValueError:
                raise ModelSyntaxError(
                    f"reward {value_tok.text!r} is not a number",
                    value_tok.line, value_tok.column,
                ) from None
            if current.reward is not None:
                raise ModelSyntaxError(
                    f"rule {rule!r} has two reward annotations",
                    rule_tok.line, rule_tok.column,
                )
            current = replace(current, reward=amount)
        elif key in (":success", ":failure"):
            if value_tok.text != "t":
                raise ModelSyntaxError(
                    f"{key} takes the literal 't'", value_tok.line, value_tok.column
                )
            current = replace(
                current,
                success=current.success or key == ":success",
                failure=current.failure or key == ":failure",
            )
        else:
            raise ModelSyntaxError(
                f"unknown annotation key {key!r}", head.line, head.column
            )
        self.annotations[rule] = current


def _format_output(item):
    if isinstance(item, _Token):
        return item.text
    return "(" + " ".join(_format_output(sub) for sub in item) + ")"


def parse_model(text: str) -> ModelAST:
    """Parse model text into an AST, preserving source order."""
    return _ModelReader().read(_read_forms(_tokenize(text)))


# -- validation ----------------------------------------------------------------------

def validate_model(ast: ModelAST) -> list[str]:
    """Cross-reference checks; returns diagnostics instead of raising."""
    out = []
    types = {}
    for ctype in ast.chunk_types:
        if ctype.name in types:
            out.append(f"chunk type {ctype.name!r} declared twice")
        if len(set(ctype.slots)) != len(ctype.slots):
            out.append(f"chunk type {ctype.name!r} repeats a slot")
        types[ctype.name] = ctype

    chunks = {}
    for spec in ast.initial_chunks:
        if spec.name in chunks:
            out.append(f"chunk {spec.name!r} declared twice")
        chunks[spec.name] = spec
        ctype = types.get(spec.type)
        if ctype is None:
            out.append(f"chunk {spec.name!r} has unknown type {spec.type!r}")
            continue
        for slot, _ in spec.slot_values:
            if slot not in ctype.slots:
                out.append(f"chunk {spec.name!r} fills unknown slot {slot!r}")

    buffers = set()
    for buffer, chunk in ast.buffer_inits:
        if buffer in buffers:
            out.append(f"buffer {buffer!r} initialized twice")
        buffers.add(buffer)
        if chunk not in chunks:
            out.append(f"buffer {buffer!r} initialized with unknown chunk {chunk!r}")

    for prod in ast.productions:
        tested_type = {}
        for test in prod.tests:
            if test.buffer not in buffers:
                out.append(
                    f"rule {prod.name!r} tests undeclared buffer {test.buffer!r}"
                )
            ctype = types.get(test.type)
            if ctype is None:
                out.append(f"rule {prod.name!r} tests unknown type {test.type!r}")
                continue
            tested_type[test.buffer] = ctype
            for slot, _ in test.slot_tests:
                if slot not in ctype.slots:
                    out.append(
                        f"rule {prod.name!r} tests unknown slot {slot!r} "
                        f"of type {test.type!r}"
                    )
        for action in prod.actions:
            if action.buffer not in buffers:
                out.append(
                    f"rule {prod.name!r} acts on undeclared buffer {action.buffer!r}"
                )
            ctype = tested_type.get(action.buffer)
            if action.kind == MODIFY and ctype is not None:
                for slot, _ in action.slot_updates:
                    if slot not in ctype.slots:
                        out.append(
                            f"rule {prod.name!r} updates unknown slot {slot!r} "
                            f"of type {ctype.name!r}"
                        )

    for rule in ast.annotations:
        if not any(p.name == rule for p in ast.productions):
            out.append(f"annotation targets unknown rule {rule!r}")
    return out


# -- pretty printer --------------------------------------------------------------------

def format_model(ast: ModelAST) -> str:
    """Emit canonical model text; parse(format_model(ast)) == ast."""
    lines = []
    for ctype in ast.chunk_types:
        lines.append("(chunk-type " + " ".join((ctype.name,) + ctype.slots) + ")")
    for spec in ast.initial_chunks:
        pairs = " ".join(f"{s} {v}" for s, v in spec.slot_values)
        body = f"{spec.name} isa {spec.type}" + (f" {pairs}" if pairs else "")
        lines.append(f"(add-dm ({body}))")
    for buffer, chunk in ast.buffer_inits:
        lines.append(f"(goal-focus {buffer} {chunk})")
    for prod in ast.productions:
        lines.append(f"(p {prod.name}")
        for test in prod.tests:
            pairs = " ".join(f"{s} {v}" for s, v in test.slot_tests)
            lines.append(
                f"   ={test.buffer}> isa {test.type}" + (f" {pairs}" if pairs else "")
            )
        lines.append(" ==>")
        for action in prod.actions:
            for var, provider in action.binds:
                lines.append(f"   !bind! {var} {provider}")
            if action.kind == CLEAR:
                lines.append(f"   -{action.buffer}>")
            else:
                pairs = " ".join(f"{s} {v}" for s, v in action.slot_updates)
                lines.append(f"   ={action.buffer}>" + (f" {pairs}" if pairs else ""))
        lines.append(")")
    for rule, ann in ast.annotations.items():
        if ann.reward is not None:
            amount = str(ann.reward) if ann.reward.denominator == 1 else str(float(ann.reward))
            lines.append(f"(spp {rule} :reward {amount})")
        if ann.success:
            lines.append(f"(spp {rule} :success t)")
        if ann.failure:
            lines.append(f"(spp {rule} :failure t)")
    return "\n".join(lines) + "\n"
