"""
Line-oriented sesquiad documents.

A document is a list of ``key value`` headers followed by bracketed
sections; ``#`` starts a comment.  The grammar is described in
docs/document_format.md.
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import parse_expr

from engine_errors import DocumentError, UsageError
from presented_f1 import MODELS, Polynomial, PresentedSesquiad, from_sympy, to_sympy
from sesquiad import (AdditionRelation, FiniteRingDescriptor, MonoidTable, Sesquiad,
                      from_pair, residue_name, validate)

FORMAT_VERSION = 1
HEADERS = ("format", "kind", "name", "zero", "one")
KIND_SECTIONS = {
    "table": ("elements", "products", "relations"),
    "pair": ("moduli", "subset"),
    "presented": ("generators", "relations", "sums", "model"),
    "xb": ("base",),
}

NAME = r"[^\s*+=#\[\]]+"
NAME_RE = re.compile(rf"^{NAME}$")
PRODUCT_RE = re.compile(rf"^({NAME})\s*\*\s*({NAME})\s*=\s*({NAME})$")
TERM_RE = re.compile(rf"^(?:(-?\d+)\s*\*\s*)?({NAME})$")

Term = Tuple[int, str]


@dataclass(frozen=True)
class SesquiadDocument:
    kind: str
    name: str = ""
    format_version: int = FORMAT_VERSION
    elements: Tuple[str, ...] = ()
    zero: str = "0"
    one: str = "1"
    products: Tuple[Tuple[str, str, str], ...] = ()
    relations: Tuple[Tuple[Tuple[Term, ...], str], ...] = ()
    moduli: Tuple[int, ...] = ()
    subset: Tuple[Tuple[int, ...], ...] = ()
    generators: Tuple[str, ...] = ()
    polynomials: Tuple[Polynomial, ...] = ()
    sums: Tuple[Tuple[str, Polynomial], ...] = ()
    model: Optional[Tuple[str, int]] = None
    base: Optional[int] = None


@dataclass
class _Section:
    line: int
    rows: List[Tuple[int, int, str]]


def _column(raw: str, token: str) -> int:
    pos = raw.find(token)
    return pos + 1 if pos >= 0 else 1


def _split(text: str) -> Tuple[Dict[str, Tuple[int, str]], Dict[str, _Section]]:
    headers: Dict[str, Tuple[int, str]] = {}
    sections: Dict[str, _Section] = {}
    current: Optional[_Section] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise DocumentError("unterminated section header", lineno, col)
            name = stripped[1:-1].strip()
            if name in sections:
                raise DocumentError(f"duplicate section [{name}]", lineno, col, code="DuplicateSection")
            current = _Section(lineno, [])
            sections[name] = current
            continue
        if current is not None:
            current.rows.append((lineno, col, stripped))
            continue
        key, _, value = stripped.partition(" ")
        if key not in HEADERS:
            raise DocumentError(f"unknown header {key!r}", lineno, col, code="UnknownHeader")
        if key in headers:
            raise DocumentError(f"duplicate header {key!r}", lineno, col, code="DuplicateHeader")
        if not value.strip():
            raise DocumentError(f"header {key!r} needs a value", lineno, col)
        headers[key] = (lineno, value.strip())
    return headers, sections


def _tokens(section: Optional[_Section]) -> List[Tuple[int, int, str]]:
    out = []
    if section is None:
        return out
    for lineno, col, text in section.rows:
        for match in re.finditer(r"\S+", text):
            out.append((lineno, col + match.start(), match.group()))
    return out


def _int(token: str, lineno: int, col: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise DocumentError(f"{what} must be an integer, got {token!r}", lineno, col)


def _parse_table(headers, sections) -> Dict:
    tokens = _tokens(sections.get("elements"))
    if not tokens:
        line = sections["elements"].line if "elements" in sections else 1
        raise DocumentError("a table document needs an [elements] section", line, code="MissingSection")
    elements: List[str] = []
    for lineno, col, tok in tokens:
        if not NAME_RE.match(tok):
            raise DocumentError(f"bad element name {tok!r}", lineno, col)
        if tok in elements:
            raise DocumentError(f"duplicate element {tok!r}", lineno, col, code="DuplicateElement")
        elements.append(tok)
    index = {name: i for i, name in enumerate(elements)}

    def lookup(name: str, lineno: int, col: int) -> int:
        if name not in index:
            raise DocumentError(f"unknown element {name!r}", lineno, col, code="UnknownElement", element=name)
        return index[name]

    zero_line, zero = headers.get("zero", (1, "0"))
    one_line, one = headers.get("one", (1, "1"))
    z = lookup(zero, zero_line, 1)
    o = lookup(one, one_line, 1)

    n = len(elements)
    mul: List[List[Optional[int]]] = [[None] * n for _ in range(n)]
    for x in range(n):
        mul[z][x] = mul[x][z] = z
    for x in range(n):
        if x != z:
            mul[o][x] = mul[x][o] = x

    products_section = sections.get("products")
    for lineno, col, text in (products_section.rows if products_section else []):
        match = PRODUCT_RE.match(text)
        if not match:
            raise DocumentError("expected 'a * b = c'", lineno, col)
        a, b, c = (lookup(match.group(k), lineno, col + match.start(k)) for k in (1, 2, 3))
        for x, y in ((a, b), (b, a)):
            if mul[x][y] is not None and mul[x][y] != c:
                raise DocumentError(f"conflicting product {elements[a]} * {elements[b]}", lineno, col,
                                    code="ConflictingProduct")
            mul[x][y] = c
    for x in range(n):
        for y in range(n):
            if mul[x][y] is None:
                line = products_section.line if products_section else 1
                raise DocumentError(f"missing product {elements[x]} * {elements[y]}", line,
                                    code="MissingProduct")

    relations = []
    relations_section = sections.get("relations")
    for lineno, col, text in (relations_section.rows if relations_section else []):
        lhs, eq, rhs = text.partition("=")
        if not eq or not rhs.strip():
            raise DocumentError("expected 'a + b = c'", lineno, col)
        terms = []
        for part in lhs.split("+"):
            part = part.strip()
            match = TERM_RE.match(part)
            if not match:
                raise DocumentError(f"bad term {part!r}", lineno, col + _column(text, part) - 1)
            coeff = int(match.group(1)) if match.group(1) else 1
            name = match.group(2)
            lookup(name, lineno, col + _column(text, name) - 1)
            terms.append((coeff, name))
        total = rhs.strip()
        if not NAME_RE.match(total):
            raise DocumentError(f"bad element name {total!r}", lineno, col + _column(text, total) - 1)
        lookup(total, lineno, col + _column(text, total) - 1)
        relations.append((tuple(terms), total))

    canonical = []
    for x in range(n):
        for y in range(x, n):
            if z in (x, y) or o in (x, y):
                continue
            canonical.append((elements[x], elements[y], elements[mul[x][y]]))
    return dict(elements=tuple(elements), zero=zero, one=one, products=tuple(canonical),
                relations=tuple(relations))


def _parse_residue(token: str, count: int, lineno: int, col: int) -> Tuple[int, ...]:
    body = token
    if token.startswith("(") and token.endswith(")"):
        body = token[1:-1]
    parts = body.split(",")
    if len(parts) != count:
        raise DocumentError(f"residue {token!r} needs {count} coordinates", lineno, col,
                            code="DimensionMismatch")
    return tuple(_int(p.strip(), lineno, col, "residue") for p in parts)


def _parse_pair(headers, sections) -> Dict:
    moduli_tokens = _tokens(sections.get("moduli"))
    if not moduli_tokens:
        raise DocumentError("a pair document needs a [moduli] section", 1, code="MissingSection")
    moduli = []
    for lineno, col, tok in moduli_tokens:
        m = _int(tok, lineno, col, "modulus")
        if m < 1:
            raise DocumentError(f"modulus {m} must be positive", lineno, col, code="BadModuli")
        moduli.append(m)
    subset = set()
    for lineno, col, tok in _tokens(sections.get("subset")):
        v = _parse_residue(tok, len(moduli), lineno, col)
        subset.add(tuple(x % m for x, m in zip(v, moduli)))
    return dict(moduli=tuple(moduli), subset=tuple(sorted(subset)))


def _expression(text: str, symbols: Dict[str, sympy.Symbol], lineno: int, col: int):
    try:
        return parse_expr(text, local_dict=dict(symbols), evaluate=True)
    except Exception as e:
        raise DocumentError(f"cannot read polynomial {text!r}: {e}", lineno, col)


def _polynomial(text: str, symbols: Dict[str, sympy.Symbol], gens, lineno: int, col: int) -> Polynomial:
    lhs, eq, rhs = text.partition("=")
    expr = _expression(lhs, symbols, lineno, col)
    if eq:
        expr = expr - _expression(rhs, symbols, lineno, col + len(lhs) + 1)
    try:
        return from_sympy(expr, gens)
    except UsageError as e:
        raise DocumentError(e.message, lineno, col, code=e.code)
    except sympy.PolynomialError as e:
        raise DocumentError(f"not a polynomial in the generators: {e}", lineno, col)


def _parse_presented(headers, sections) -> Dict:
    if "model" in sections:
        if any(k in sections for k in ("generators", "relations", "sums")):
            raise DocumentError("[model] excludes an explicit presentation", sections["model"].line)
        tokens = _tokens(sections["model"])
        if len(tokens) != 2 or tokens[0][2] not in MODELS:
            raise DocumentError("expected '<gl|sp|o> <n>'", sections["model"].line)
        lineno, col, tok = tokens[1]
        return dict(model=(tokens[0][2], _int(tok, lineno, col, "n")))
    gens_tokens = _tokens(sections.get("generators"))
    if not gens_tokens:
        raise DocumentError("a presented document needs [generators] or [model]", 1, code="MissingSection")
    generators = []
    for lineno, col, tok in gens_tokens:
        if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", tok):
            raise DocumentError(f"bad generator name {tok!r}", lineno, col)
        if tok in generators:
            raise DocumentError(f"duplicate generator {tok!r}", lineno, col, code="DuplicateElement")
        generators.append(tok)
    symbols = {g: sympy.Symbol(g) for g in generators}
    gens = [symbols[g] for g in generators]
    polynomials = []
    for lineno, col, text in (sections["relations"].rows if "relations" in sections else []):
        polynomials.append(_polynomial(text, symbols, gens, lineno, col))
    sums = []
    for lineno, col, text in (sections["sums"].rows if "sums" in sections else []):
        name, eq, expr = text.partition("=")
        name = name.strip()
        if not eq or not NAME_RE.match(name):
            raise DocumentError("expected 'name = polynomial'", lineno, col)
        sums.append((name, _polynomial(expr, symbols, gens, lineno, col + len(text) - len(expr))))
    return dict(generators=tuple(generators), polynomials=tuple(polynomials), sums=tuple(sums))


def _parse_xb(headers, sections) -> Dict:
    tokens = _tokens(sections.get("base"))
    if len(tokens) != 1:
        raise DocumentError("an xb document needs one integer in [base]", 1, code="MissingSection")
    lineno, col, tok = tokens[0]
    base = _int(tok, lineno, col, "base")
    if base < 2:
        raise DocumentError("the base must be at least 2", lineno, col, code="BadBase")
    return dict(base=base)


PARSERS = {"table": _parse_table, "pair": _parse_pair, "presented": _parse_presented, "xb": _parse_xb}


def parse(text: str) -> SesquiadDocument:
    """Read a document; raises DocumentError with the line and column of the problem"""
    headers, sections = _split(text)
    if "format" not in headers:
        raise DocumentError("missing 'format' header", 1, code="MissingHeader")
    line, version = headers["format"]
    if version != str(FORMAT_VERSION):
        raise DocumentError(f"unsupported format {version!r}", line, code="UnsupportedFormat")
    if "kind" not in headers:
        raise DocumentError("missing 'kind' header", 1, code="MissingHeader")
    line, kind = headers["kind"]
    if kind not in KIND_SECTIONS:
        raise DocumentError(f"unknown kind {kind!r}", line, code="UnknownKind")
    if kind != "table":
        for key in ("zero", "one"):
            if key in headers:
                raise DocumentError(f"header {key!r} only applies to tables", headers[key][0],
                                    code="UnknownHeader")
    for name, section in sections.items():
        if name not in KIND_SECTIONS[kind]:
            raise DocumentError(f"section [{name}] does not belong to kind {kind}", section.line,
                                code="UnknownSection")
    fields = PARSERS[kind](headers, sections)
    name = headers["name"][1] if "name" in headers else ""
    return SesquiadDocument(kind=kind, name=name, **fields)


def _term(coeff: int, name: str) -> str:
    return name if coeff == 1 else f"{coeff}*{name}"


def serialize(doc: SesquiadDocument) -> str:
    """Canonical text of a document"""
    lines = [f"format {doc.format_version}", f"kind {doc.kind}"]
    if doc.name:
        lines.append(f"name {doc.name}")
    if doc.kind == "table":
        if doc.zero != "0":
            lines.append(f"zero {doc.zero}")
        if doc.one != "1":
            lines.append(f"one {doc.one}")
        lines += ["", "[elements]", " ".join(doc.elements)]
        if doc.products:
            lines += ["", "[products]"] + [f"{a} * {b} = {c}" for a, b, c in doc.products]
        if doc.relations:
            lines += ["", "[relations]"]
            lines += [" + ".join(_term(k, x) for k, x in terms) + f" = {total}"
                      for terms, total in doc.relations]
    elif doc.kind == "pair":
        lines += ["", "[moduli]", " ".join(str(m) for m in doc.moduli)]
        lines += ["", "[subset]", " ".join(residue_name(v) for v in doc.subset)]
    elif doc.kind == "presented":
        if doc.model:
            lines += ["", "[model]", f"{doc.model[0]} {doc.model[1]}"]
        else:
            gens = [sympy.Symbol(g) for g in doc.generators]
            lines += ["", "[generators]", " ".join(doc.generators)]
            if doc.polynomials:
                lines += ["", "[relations]"] + [str(to_sympy(p, gens)) for p in doc.polynomials]
            if doc.sums:
                lines += ["", "[sums]"] + [f"{name} = {to_sympy(p, gens)}" for name, p in doc.sums]
    else:
        lines += ["", "[base]", str(doc.base)]
    return "\n".join(lines) + "\n"


def to_sesquiad(doc: SesquiadDocument) -> Sesquiad:
    """The validated sesquiad of a table or pair document"""
    if doc.kind == "pair":
        return from_pair(FiniteRingDescriptor(doc.moduli, doc.subset))
    if doc.kind != "table":
        raise UsageError("WrongKind", f"a {doc.kind} document does not describe a finite sesquiad",
                         kind=doc.kind)
    index = {name: i for i, name in enumerate(doc.elements)}
    n = len(doc.elements)
    z, o = index[doc.zero], index[doc.one]
    mul = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if z in (x, y):
                mul[x][y] = z
            elif x == o:
                mul[x][y] = y
            elif y == o:
                mul[x][y] = x
    for a, b, c in doc.products:
        mul[index[a]][index[b]] = mul[index[b]][index[a]] = index[c]
    table = MonoidTable(doc.elements, z, o, tuple(tuple(row) for row in mul))
    relations = [AdditionRelation(tuple((k, index[x]) for k, x in terms), index[total])
                 for terms, total in doc.relations]
    return validate(table, relations)


def to_presentation(doc: SesquiadDocument) -> PresentedSesquiad:
    if doc.kind != "presented":
        raise UsageError("WrongKind", f"a {doc.kind} document is not a presentation", kind=doc.kind)
    if doc.model:
        group, n = doc.model
        return MODELS[group](n)
    return PresentedSesquiad(doc.generators, doc.polynomials, doc.sums, doc.name)


def load(text: str) -> Tuple[SesquiadDocument, Union[Sesquiad, PresentedSesquiad, int]]:
    """Parse and build: the sesquiad, the presentation or the X_b base"""
    doc = parse(text)
    if doc.kind == "presented":
        return doc, to_presentation(doc)
    if doc.kind == "xb":
        return doc, doc.base
    return doc, to_sesquiad(doc)
