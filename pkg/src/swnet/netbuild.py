"""Class dependency networks from source-code signatures.

A corpus of Java-style source files is parsed into :class:`ClassModel`
records (one per top-level or nested type declaration), which become the
nodes of a directed network.  A link (i, j) is added when class i

* inherits from j (``extends``/``implements``) -- *inheritance*,
* declares a field of type j -- *composition*, or
* mentions j in a constructor or method signature (parameter or return
  type) -- *dependence*.

Only signatures matter: method bodies, initializer expressions and
visibility modifiers are skipped.  Generic type arguments and array
element types are unwrapped recursively (``List<Pair<A,B>>[]`` references
List, Pair, A and B); primitive types, ``void``, wildcards and in-scope
type-parameter names are ignored.  Type-parameter bounds and ``throws``
clauses are parsed but not recorded as references.  Nested types become
distinct nodes named ``Outer$Inner``.

References are resolved against the corpus only (external library types
drop out): exact qualified name first (dotted nested references also
match their ``$`` forms), then enclosing-scope types, then the same
package, then single imports, then wildcard imports.  ``import static``
lines are ignored.

On top of the explicit links, each class implicitly acquires the outgoing
dependencies of all its ancestors (the inheritance closure); the result is
again reduced to a simple graph.
"""

from __future__ import annotations

import re
import warnings as _warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .graph import DependencyNetwork, largest_component, reduce_to_simple

INHERITANCE = "inheritance"
COMPOSITION = "composition"
DEPENDENCE = "dependence"
DEPENDENCY_KINDS = (INHERITANCE, COMPOSITION, DEPENDENCE)


class CorpusError(ValueError):
    """Raised when a corpus yields no parsable classes."""


@dataclass
class ClassModel:
    qualified_name: str
    kind: str                       # "class" or "interface"
    package: str
    supertypes: tuple[str, ...]     # raw names as written
    field_types: tuple[str, ...]
    signature_types: tuple[str, ...]
    attributes: dict = field(default_factory=dict)
    imports_single: dict = field(default_factory=dict)
    imports_wildcard: tuple[str, ...] = ()
    enclosing: tuple[str, ...] = ()  # qualified names, innermost first


_PRIMITIVES = {
    "boolean", "byte", "char", "double", "float", "int", "long", "short",
    "void", "var",
}
_MODIFIERS = {
    "public", "protected", "private", "static", "final", "abstract",
    "native", "synchronized", "transient", "volatile", "strictfp",
    "default", "sealed",
}
_TYPE_KEYWORDS = {"class", "interface", "enum", "record"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Tokens (kind, value, offset); kinds: ident, punct, doc.

    Comments and literals are stripped; ``/** */`` doc comments survive as
    ``doc`` tokens so declaration attributes can be read from them.
    """
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f":
            i += 1
            continue
        if ch == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                j = text.find("\n", i)
                i = n if j < 0 else j + 1
                continue
            if nxt == "*":
                j = text.find("*/", i + 2)
                end = n if j < 0 else j + 2
                if text.startswith("/**", i):
                    tokens.append(("doc", text[i:end], i))
                i = end
                continue
        if ch == '"':
            if text.startswith('"""', i):  # text block
                j = text.find('"""', i + 3)
                i = n if j < 0 else j + 3
                continue
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            i = j + 1
            continue
        if ch == "'":
            j = i + 1
            while j < n and text[j] != "'":
                j += 2 if text[j] == "\\" else 1
            i = j + 1
            continue
        if ch.isalpha() or ch in "_$":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "._"):
                j += 1
            i = j
            continue
        tokens.append(("punct", ch, i))
        i += 1
    return tokens


class _Stream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0
        self.last_doc: str | None = None

    def _advance_docs(self):
        while self.i < len(self.tokens) and self.tokens[self.i][0] == "doc":
            self.last_doc = self.tokens[self.i][1]
            self.i += 1

    def peek(self, ahead: int = 0):
        j = self.i
        seen = 0
        while j < len(self.tokens):
            if self.tokens[j][0] == "doc":
                j += 1
                continue
            if seen == ahead:
                return self.tokens[j]
            seen += 1
            j += 1
        return ("end", "", -1)

    def next(self):
        self._advance_docs()
        if self.i >= len(self.tokens):
            return ("end", "", -1)
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_end(self) -> bool:
        return self.peek()[0] == "end"

    def take_doc(self) -> str | None:
        doc, self.last_doc = self.last_doc, None
        return doc


_AUTHOR_RE = re.compile(r"@author\s+([^\n*@]+)")
_VERSION_RE = re.compile(r"@version\s+([^\n*@]+)")


def _doc_attributes(doc: str | None) -> dict:
    if not doc:
        return {}
    attrs = {}
    m = _AUTHOR_RE.search(doc)
    if m:
        attrs["author"] = " ".join(m.group(1).split())
    m = _VERSION_RE.search(doc)
    if m:
        attrs["version"] = " ".join(m.group(1).split())
    return attrs


class _FileParser:
    """Recursive-descent signature parser for one source file."""

    def __init__(self, text: str, path: str):
        self.s = _Stream(_tokenize(text))
        self.path = path
        self.package = ""
        self.singles: dict[str, str] = {}
        self.wildcards: list[str] = []
        self.models: list[ClassModel] = []
        self.warnings: list[str] = []

    # -- small helpers -----------------------------------------------------

    def _at(self, kind: str, value: str, ahead: int = 0) -> bool:
        tok = self.s.peek(ahead)
        return tok[0] == kind and tok[1] == value

    def _skip_balanced(self, open_ch: str, close_ch: str):
        depth = 0
        while not self.s.at_end():
            kind, value, _ = self.s.next()
            if kind == "punct" and value == open_ch:
                depth += 1
            elif kind == "punct" and value == close_ch:
                depth -= 1
                if depth == 0:
                    return

    def _skip_to_semicolon(self):
        """Consume through the next ';' at bracket depth zero."""
        depth = 0
        while not self.s.at_end():
            kind, value, _ = self.s.next()
            if kind != "punct":
                continue
            if value in "({[":
                depth += 1
            elif value in ")}]":
                depth -= 1
            elif value == ";" and depth <= 0:
                return

    def _skip_annotation(self):
        self.s.next()  # '@'
        self._dotted_name()
        if self._at("punct", "("):
            self._skip_balanced("(", ")")

    def _dotted_name(self) -> str:
        parts = []
        while True:
            kind, value, _ = self.s.peek()
            if kind != "ident":
                break
            parts.append(value)
            self.s.next()
            nxt = self.s.peek()
            if nxt[0] == "punct" and nxt[1] == "." and self.s.peek(1)[0] == "ident":
                self.s.next()
            else:
                break
        return ".".join(parts)

    # -- type references ----------------------------------------------------

    def _parse_type(self, scope: set[str], sink: list[str] | None) -> str | None:
        """Parse a type expression; record referenced names into ``sink``.

        Returns the base name (dotted as written) or None for primitives,
        wildcards and type parameters in ``scope``.
        """
        kind, value, _ = self.s.peek()
        if kind == "punct" and value == "?":
            self.s.next()
            nxt = self.s.peek()
            if nxt[0] == "ident" and nxt[1] in ("extends", "super"):
                self.s.next()
                self._parse_type(scope, sink)
            return None
        if kind != "ident":
            return None
        base = self._dotted_name()
        if self._at("punct", "<"):
            self.s.next()
            while True:
                nxt = self.s.peek()
                if nxt[0] == "end":
                    break
                if nxt[0] == "punct" and nxt[1] == ">":
                    self.s.next()
                    break
                if nxt[0] == "punct" and nxt[1] == ",":
                    self.s.next()
                    continue
                if not self._parse_type(scope, sink) and self.s.peek() == nxt:
                    self.s.next()  # resync inside malformed generics
        while self._at("punct", "["):
            self.s.next()
            if self._at("punct", "]"):
                self.s.next()
        recordable = (
            base
            and not ("." not in base and base in scope)
            and base not in _PRIMITIVES
        )
        if recordable and sink is not None:
            sink.append(base)
        return base if base else None

    def _parse_type_params(self, scope: set[str]):
        """`<T extends Bound & Other, U>`: declare names, discard bounds."""
        self.s.next()  # '<'
        depth = 1
        expecting_name = True
        while depth > 0 and not self.s.at_end():
            kind, value, _ = self.s.peek()
            if kind == "punct" and value == "<":
                depth += 1
                self.s.next()
            elif kind == "punct" and value == ">":
                depth -= 1
                self.s.next()
            elif kind == "ident" and expecting_name and depth == 1:
                scope.add(value)
                expecting_name = False
                self.s.next()
            elif kind == "punct" and value == "," and depth == 1:
                expecting_name = True
                self.s.next()
            else:
                self.s.next()

    # -- declarations --------------------------------------------------------

    def parse(self):
        while not self.s.at_end():
            kind, value, _ = self.s.peek()
            if kind == "ident" and value == "package":
                self.s.next()
                self.package = self._dotted_name()
                self._skip_to_semicolon()
            elif kind == "ident" and value == "import":
                self._parse_import()
            elif kind == "punct" and value == "@":
                if self._at("ident", "interface", ahead=1):
                    self.s.next()
                    self._parse_type_decl((), set())
                else:
                    self._skip_annotation()
            elif kind == "ident" and value in _MODIFIERS:
                self.s.next()
            elif kind == "ident" and value == "non":
                self.s.next()  # 'non-sealed' arrives as non, -, sealed
            elif kind == "ident" and value in _TYPE_KEYWORDS:
                self._parse_type_decl((), set())
            else:
                self.s.next()
        return self.models

    def _parse_import(self):
        self.s.next()
        if self._at("ident", "static"):
            self._skip_to_semicolon()
            return
        name = self._dotted_name()
        if self._at("punct", "."):
            self.s.next()
            if self._at("punct", "*"):
                self.s.next()
                self.wildcards.append(name)
                self._skip_to_semicolon()
                return
        if name:
            self.singles[name.rsplit(".", 1)[-1]] = name
        self._skip_to_semicolon()

    def _parse_type_decl(self, enclosing: tuple[str, ...], outer_scope: set[str]):
        kw = self.s.next()[1]  # class | interface | enum | record | interface(@)
        doc = self.s.take_doc()  # most recent doc comment before the keyword
        kind = "interface" if kw == "interface" else "class"
        name_tok = self.s.next()
        if name_tok[0] != "ident":
            self.warnings.append(f"{self.path}: type declaration without a name")
            return
        name = name_tok[1]
        if enclosing:
            qualified = f"{enclosing[0]}${name}"
        elif self.package:
            qualified = f"{self.package}.{name}"
        else:
            qualified = name
        scope = set(outer_scope)
        if self._at("punct", "<"):
            self._parse_type_params(scope)
        if kw == "record" and self._at("punct", "("):
            self._skip_balanced("(", ")")  # record components: out of subset
        supertypes: list[str] = []
        discard: list[str] = []
        while self.s.peek()[0] == "ident" and self.s.peek()[1] in ("extends", "implements", "permits"):
            clause = self.s.next()[1]
            while True:
                base = self._parse_type(scope, discard if clause != "permits" else None)
                if base and clause != "permits":
                    supertypes.append(base)
                if self._at("punct", ","):
                    self.s.next()
                    continue
                break
        model = ClassModel(
            qualified_name=qualified,
            kind=kind,
            package=self.package,
            supertypes=tuple(supertypes),
            field_types=(),
            signature_types=(),
            attributes=_doc_attributes(doc),
            imports_single=dict(self.singles),
            imports_wildcard=tuple(self.wildcards),
            enclosing=(qualified,) + enclosing,
        )
        if not self._at("punct", "{"):
            self.warnings.append(f"{self.path}: missing body for {qualified}")
            self.models.append(self._finalize(model, [], []))
            return
        self.s.next()  # '{'
        fields_raw: list[str] = []
        sigs_raw: list[str] = []
        if kw == "enum":
            self._skip_enum_constants()
        self._parse_members(model, scope, fields_raw, sigs_raw)
        self.models.append(self._finalize(model, fields_raw, sigs_raw))

    def _finalize(self, model: ClassModel, fields_raw, sigs_raw) -> ClassModel:
        model.field_types = tuple(fields_raw)
        model.signature_types = tuple(sigs_raw)
        return model

    def _skip_enum_constants(self):
        while not self.s.at_end():
            kind, value, _ = self.s.peek()
            if kind == "punct" and value == "@":
                self._skip_annotation()
            elif kind == "ident":
                self.s.next()
                if self._at("punct", "("):
                    self._skip_balanced("(", ")")
                if self._at("punct", "{"):
                    self._skip_balanced("{", "}")
            elif kind == "punct" and value == ",":
                self.s.next()
            elif kind == "punct" and value == ";":
                self.s.next()
                return
            else:
                return  # '}' or anything else: no member section marker

    def _parse_members(self, model: ClassModel, class_scope: set[str], fields_raw, sigs_raw):
        simple_name = model.qualified_name.rsplit("$", 1)[-1].rsplit(".", 1)[-1]
        while not self.s.at_end():
            kind, value, _ = self.s.peek()
            if kind == "punct" and value == "}":
                self.s.next()
                return
            if kind == "punct" and value == ";":
                self.s.next()
                continue
            if kind == "punct" and value == "@":
                if self._at("ident", "interface", ahead=1):
                    self.s.next()
                    self._parse_type_decl(model.enclosing, class_scope)
                else:
                    self._skip_annotation()
                continue
            if kind == "ident" and value in _MODIFIERS:
                self.s.next()
                continue
            if kind == "ident" and value == "non":
                self.s.next()
                continue
            if kind == "ident" and value in _TYPE_KEYWORDS:
                self._parse_type_decl(model.enclosing, class_scope)
                continue
            if kind == "punct" and value == "{":
                self._skip_balanced("{", "}")  # initializer block
                continue
            member_scope = set(class_scope)
            if kind == "punct" and value == "<":
                self._parse_type_params(member_scope)
                kind, value, _ = self.s.peek()
            if kind != "ident":
                self.warnings.append(
                    f"{self.path}: unexpected token {value!r} in {model.qualified_name}"
                )
                self.s.next()
                continue
            # constructor: class name directly followed by '('
            if value == simple_name and self._at("punct", "(", ahead=1):
                self.s.next()
                self._parse_params(member_scope, sigs_raw)
                self._finish_method()
                continue
            type_refs: list[str] = []
            base = self._parse_type(member_scope, type_refs)
            if base is None and not type_refs:
                nxt = self.s.peek()
                if not (nxt[0] == "ident"):
                    self.warnings.append(
                        f"{self.path}: skipped member fragment in {model.qualified_name}"
                    )
                    self._skip_to_semicolon()
                    continue
            nxt = self.s.peek()
            if nxt[0] == "ident":
                self.s.next()  # member name
                after = self.s.peek()
                if after[0] == "punct" and after[1] == "(":
                    sigs_raw.extend(type_refs)  # return type
                    self._parse_params(member_scope, sigs_raw)
                    self._finish_method()
                else:
                    fields_raw.extend(type_refs)
                    self._skip_to_semicolon()
                self.s.take_doc()  # member docs never label a later type
            else:
                self.warnings.append(
                    f"{self.path}: skipped member fragment in {model.qualified_name}"
                )
                self._skip_to_semicolon()

    def _parse_params(self, scope: set[str], sink: list[str]):
        self.s.next()  # '('
        while not self.s.at_end():
            kind, value, _ = self.s.peek()
            if kind == "punct" and value == ")":
                self.s.next()
                return
            if kind == "punct" and value == ",":
                self.s.next()
                continue
            if kind == "punct" and value == "@":
                self._skip_annotation()
                continue
            if kind == "ident" and value in _MODIFIERS:
                self.s.next()
                continue
            base = self._parse_type(scope, sink)
            while self._at("punct", "."):
                self.s.next()  # varargs dots
            if self.s.peek()[0] == "ident":
                self.s.next()  # parameter name
                while self._at("punct", "["):
                    self.s.next()
                    if self._at("punct", "]"):
                        self.s.next()
            elif base is None:
                self.s.next()  # resync

    def _finish_method(self):
        """After the parameter list: skip throws clause and the body or ';'."""
        while not self.s.at_end():
            kind, value, _ = self.s.peek()
            if kind == "ident" and value == "throws":
                self.s.next()
                while True:
                    self._parse_type(set(), None)
                    if self._at("punct", ","):
                        self.s.next()
                        continue
                    break
                continue
            if kind == "punct" and value == "{":
                self._skip_balanced("{", "}")
                return
            if kind == "punct" and value == ";":
                self.s.next()
                return
            self.s.next()  # annotation defaults and similar trailers


def parse_signatures(corpus) -> tuple[list[ClassModel], list[str], list[str]]:
    """Parse a directory (recursively, ``*.java``) or iterable of paths.

    Returns (models, warnings, per-file errors).  Duplicate qualified names
    keep the first occurrence with a warning.  No classes at all raises
    :class:`CorpusError`.
    """
    if isinstance(corpus, (str, Path)):
        paths = sorted(Path(corpus).rglob("*.java"))
    else:
        paths = [Path(p) for p in corpus]
    models: list[ClassModel] = []
    seen: set[str] = set()
    warnings: list[str] = []
    errors: list[str] = []
    for path in paths:
        try:
            text = path.read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            errors.append(f"{path}: {exc}")
            continue
        parser = _FileParser(text, str(path))
        try:
            file_models = parser.parse()
        except RecursionError:
            errors.append(f"{path}: parser recursion limit")
            continue
        warnings.extend(parser.warnings)
        for model in file_models:
            if model.qualified_name in seen:
                warnings.append(f"duplicate class {model.qualified_name} ignored ({path})")
                continue
            seen.add(model.qualified_name)
            models.append(model)
    if not models:
        raise CorpusError("no classes parsed from corpus")
    return models, warnings, errors


# -- reference resolution ------------------------------------------------------


class _Resolver:
    def __init__(self, models: list[ClassModel]):
        self.index = {m.qualified_name: i for i, m in enumerate(models)}

    @staticmethod
    def _dollar_variants(raw: str):
        parts = raw.split(".")
        yield raw
        for cut in range(len(parts) - 1, 0, -1):
            yield ".".join(parts[:cut]) + "$" + "$".join(parts[cut:])

    def resolve(self, model: ClassModel, raw: str) -> int | None:
        if not raw:
            return None
        dollar = raw.replace(".", "$")
        if "." in raw:
            for cand in self._dollar_variants(raw):
                if cand in self.index:
                    return self.index[cand]
        elif raw in self.index:
            return self.index[raw]
        for container in model.enclosing:
            cand = f"{container}${dollar}"
            if cand in self.index:
                return self.index[cand]
            if container.rsplit("$", 1)[-1].rsplit(".", 1)[-1] == raw:
                return self.index.get(container)
        pkg_cand = f"{model.package}.{dollar}" if model.package else dollar
        if pkg_cand in self.index:
            return self.index[pkg_cand]
        first, _, rest = raw.partition(".")
        if first in model.imports_single:
            target = model.imports_single[first]
            cand = target + (f"${rest.replace('.', '$')}" if rest else "")
            if cand in self.index:
                return self.index[cand]
        for pkg in model.imports_wildcard:
            cand = f"{pkg}.{dollar}"
            if cand in self.index:
                return self.index[cand]
        return None


def explicit_edges(models: list[ClassModel]) -> tuple[DependencyNetwork, dict]:
    """Directed simple network of resolved in-corpus references.

    Nodes are models sorted by qualified name (dense ids in that order).
    Also returns a map (i, j) -> set of dependency kinds behind the link.
    """
    order = sorted(range(len(models)), key=lambda i: models[i].qualified_name)
    models = [models[i] for i in order]
    resolver = _Resolver(models)
    kinds: dict[tuple[int, int], set[str]] = {}
    for i, model in enumerate(models):
        for raw_list, kind in (
            (model.supertypes, INHERITANCE),
            (model.field_types, COMPOSITION),
            (model.signature_types, DEPENDENCE),
        ):
            for raw in raw_list:
                j = resolver.resolve(model, raw)
                if j is None or j == i:
                    continue
                kinds.setdefault((i, j), set()).add(kind)
    edges = np.array(sorted(kinds), dtype=np.int64).reshape(-1, 2)
    names = [m.qualified_name for m in models]
    attrs = [
        {
            "package": m.package,
            "kind": m.kind,
            **{k: v for k, v in m.attributes.items() if k in ("author", "version")},
        }
        for m in models
    ]
    net = DependencyNetwork(len(models), edges, directed=True, names=names,
                            node_attributes=attrs, _validated=True)
    return net, kinds


def _inheritance_dag(models: list[ClassModel], resolver: _Resolver, names: list[str]):
    """Resolved child->parents lists with cycles broken deterministically."""
    n = len(models)
    parents = [[] for _ in range(n)]
    for i, model in enumerate(models):
        for raw in model.supertypes:
            j = resolver.resolve(model, raw)
            if j is not None and j != i and j not in parents[i]:
                parents[i].append(j)
    while True:
        rows, cols = [], []
        for c, ps in enumerate(parents):
            for p in ps:
                rows.append(c)
                cols.append(p)
        if not rows:
            break
        mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        n_comp, labels = connected_components(mat, directed=True, connection="strong")
        sizes = np.bincount(labels, minlength=n_comp)
        bad = np.flatnonzero(sizes > 1)
        if bad.size == 0:
            break
        comp = int(bad[0])
        members = set(np.flatnonzero(labels == comp))
        cycle_edges = [
            (names[c], names[p], c, p)
            for c in members for p in parents[c] if p in members
        ]
        child_name, parent_name, c, p = max(cycle_edges)
        _warnings.warn(
            f"inheritance cycle broken at {child_name} -> {parent_name}",
            stacklevel=3,
        )
        parents[c].remove(p)
    return parents


def propagate_implicit(
    net: DependencyNetwork,
    models: list[ClassModel],
    include_inheritance: bool = True,
) -> DependencyNetwork:
    """Add each class's ancestors' outgoing links (inheritance closure).

    ``include_inheritance=False`` copies only the non-inheritance links of
    ancestors (their own extends/implements links are not inherited).
    Idempotent; the result is simple.
    """
    models = sorted(models, key=lambda m: m.qualified_name)
    names = [m.qualified_name for m in models]
    if list(net.names) != names:
        raise ValueError("network does not match the model list")
    resolver = _Resolver(models)
    n = net.n
    parents = _inheritance_dag(models, resolver, names)
    children = [[] for _ in range(n)]
    pending = np.zeros(n, dtype=np.int64)
    for c, ps in enumerate(parents):
        pending[c] = len(ps)
        for p in ps:
            children[p].append(c)
    out_sets = [set() for _ in range(n)]
    for a, b in net.edges:
        out_sets[int(a)].add(int(b))
    inh_sets = [set(ps) for ps in parents]
    queue = [v for v in range(n) if pending[v] == 0]
    seen = 0
    while queue:
        p = queue.pop()
        seen += 1
        gift = out_sets[p] if include_inheritance else out_sets[p] - inh_sets[p]
        for c in children[p]:
            out_sets[c] |= gift
            pending[c] -= 1
            if pending[c] == 0:
                queue.append(c)
    assert seen == n, "inheritance relation still cyclic after breaking"
    links = [(i, j) for i in range(n) for j in sorted(out_sets[i]) if j != i]
    edges = np.array(links, dtype=np.int64).reshape(-1, 2)
    edges, _ = reduce_to_simple(edges, n, directed=True)
    return DependencyNetwork(n, edges, directed=True, names=net._names,
                             node_attributes=net._attributes, _validated=True)


@dataclass
class BuildResult:
    network: DependencyNetwork          # final (component-reduced) network
    models: list[ClassModel]
    explicit_network: DependencyNetwork  # pre-implicit, all classes
    explicit_links: int                 # explicit links on the final node set
    total_links: int                    # final link count
    corpus_explicit_links: int          # before component reduction
    corpus_total_links: int
    kept: np.ndarray                    # original ids surviving reduction
    warnings: list[str]
    errors: list[str]


def build_network(
    corpus,
    implicit: bool = True,
    keep_components: bool = False,
    include_inheritance: bool = True,
) -> BuildResult:
    """Full pipeline: parse, explicit links, implicit closure, reduction."""
    models, warnings, errors = parse_signatures(corpus)
    explicit_net, _ = explicit_edges(models)
    full = propagate_implicit(explicit_net, models, include_inheritance) if implicit else explicit_net
    if keep_components:
        final, kept = full, np.arange(full.n, dtype=np.int64)
    else:
        final, kept = largest_component(full)
    explicit_pairs = {(int(a), int(b)) for a, b in explicit_net.edges}
    kept_set = {int(v): i for i, v in enumerate(kept)}
    explicit_on_final = sum(
        1 for a, b in explicit_pairs if a in kept_set and b in kept_set
    )
    return BuildResult(
        network=final,
        models=sorted(models, key=lambda m: m.qualified_name),
        explicit_network=explicit_net,
        explicit_links=explicit_on_final,
        total_links=final.m,
        corpus_explicit_links=explicit_net.m,
        corpus_total_links=full.m,
        kept=kept,
        warnings=warnings,
        errors=errors,
    )
