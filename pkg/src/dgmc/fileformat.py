"""Text format for category descriptions (``.cat`` files).

A description is a JSON document::

    {
      "format": "dgcat/1",
      "ring": {"field": "Q"},
      "vanishing_bound": 2,
      "objects": ["E"],
      "homs": [
        {"source": "E", "target": "E", "dims": {"0": 3, "1": 2, "2": 1},
         "differential": {"0": [[row, col, coef], ...]}}
      ],
      "compositions": [
        {"objects": ["E", "E", "E"], "degrees": [1, 1],
         "entries": [[b, a, c, coef], ...]}
      ],
      "identities": {"E": [[index, coef], ...]}
    }

``differential[i]`` lists the nonzero entries of d: P^i -> P^{i+1} (column
``col`` is the basis vector of P^i).  A composition block with objects
[E, F, G] and degrees [j, i] says that basis element ``b`` of P^j(F, G)
composed with basis element ``a`` of P^i(E, F) has coefficient ``coef`` on
basis element ``c`` of P^{i+j}(E, G).  Coefficients are integers or
"p/q" strings; ring-valued differential entries may be lists of base
coordinates.  Only ``differential`` and ``compositions`` may be omitted.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .dgcat import DGCategory
from .scalars import Field, RingError, parse_ring, ring_spec

FORMAT = "dgcat/1"
TOP_KEYS = ("format", "ring", "vanishing_bound", "objects", "homs", "compositions", "identities")
OPTIONAL = {"compositions"}
HOM_KEYS = ("source", "target", "dims", "differential")


class ParseError(ValueError):
    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def _line_col(doc: str, pos: int) -> str:
    line = doc.count("\n", 0, pos) + 1
    col = pos - (doc.rfind("\n", 0, pos) + 1) + 1
    return f"line {line}, column {col}"


class _Duplicate(Exception):
    def __init__(self, key):
        self.key = key


def _no_duplicates(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise _Duplicate(k)
        seen[k] = v
    return seen


def loads(doc: str, what: str = "document"):
    """json.loads with duplicate-key rejection and line/column errors."""
    if not doc.strip():
        raise ParseError(f"empty {what}", "line 1, column 1")
    try:
        return json.loads(doc, object_pairs_hook=_no_duplicates)
    except _Duplicate as e:
        hits = [m.start() for m in re.finditer(re.escape(json.dumps(e.key)) + r"\s*:", doc)]
        where = _line_col(doc, hits[1]) if len(hits) > 1 else None
        raise ParseError(f"duplicate key {e.key!r}", where) from None
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"line {e.lineno}, column {e.colno}") from None


def _keys(obj, path, required, optional=()):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path)
    allowed = set(required) | set(optional)
    for k in obj:
        if k not in allowed:
            raise ParseError(f"unknown key {k!r}", path)
    for k in required:
        if k not in obj:
            raise ParseError(f"missing key {k!r}", path)


def _list(x, path):
    if not isinstance(x, list):
        raise ParseError("expected an array", path)
    return x


def _int(x, path):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"expected an integer, got {x!r}", path)
    return x


def _scalar(x, path):
    if isinstance(x, bool):
        raise ParseError(f"bad coefficient {x!r}", path)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(f"bad coefficient {x!r}", path)


def parse_category(doc: str) -> dict:
    """Parse and shape-check a description; returns the raw (ordered) dict."""
    raw = loads(doc, "category description")
    _keys(raw, "$", [k for k in TOP_KEYS if k not in OPTIONAL], OPTIONAL)
    if raw["format"] != FORMAT:
        raise ParseError(f"unsupported format {raw['format']!r}, expected {FORMAT!r}", "$.format")
    if not isinstance(raw["ring"], dict):
        raise ParseError("expected an object", "$.ring")
    try:
        parse_ring(raw["ring"])
    except (RingError, ValueError, TypeError, IndexError) as e:
        raise ParseError(str(e), "$.ring") from None
    if _int(raw["vanishing_bound"], "$.vanishing_bound") < 1:
        raise ParseError("must be >= 1", "$.vanishing_bound")
    objects = _list(raw["objects"], "$.objects")
    if not objects:
        raise ParseError("no objects", "$.objects")
    seen = set()
    for n, o in enumerate(objects):
        if not isinstance(o, str) or not o:
            raise ParseError("object labels are non-empty strings", f"$.objects[{n}]")
        if o in seen:
            raise ParseError(f"duplicate object label {o!r}", f"$.objects[{n}]")
        seen.add(o)
    pairs = {}
    for n, h in enumerate(_list(raw["homs"], "$.homs")):
        p = f"$.homs[{n}]"
        _keys(h, p, ("source", "target", "dims"), ("differential",))
        for end in ("source", "target"):
            if h[end] not in seen:
                raise ParseError(f"unknown object {h[end]!r}", f"{p}.{end}")
        if (h["source"], h["target"]) in pairs:
            raise ParseError(f"duplicate hom {h['source']} -> {h['target']}", p)
        dims = h["dims"]
        if not isinstance(dims, dict):
            raise ParseError("expected an object", f"{p}.dims")
        pairs[(h["source"], h["target"])] = dims
        for i, d in dims.items():
            _degree(i, f"{p}.dims")
            if _int(d, f"{p}.dims.{i}") < 0:
                raise ParseError("negative dimension", f"{p}.dims.{i}")
        for i, ents in h.get("differential", {}).items():
            q = f"{p}.differential.{i}"
            deg = _degree(i, f"{p}.differential")
            for e, ent in enumerate(_list(ents, q)):
                ent = _list(ent, f"{q}[{e}]")
                if len(ent) != 3:
                    raise ParseError("expected [row, col, coef]", f"{q}[{e}]")
                r, c = _int(ent[0], f"{q}[{e}]"), _int(ent[1], f"{q}[{e}]")
                if not (0 <= c < dims.get(str(deg), 0) and 0 <= r < dims.get(str(deg + 1), 0)):
                    raise ParseError(f"entry ({r}, {c}) out of range", f"{q}[{e}]")
                if isinstance(ent[2], list):
                    [_scalar(x, f"{q}[{e}]") for x in ent[2]]
                else:
                    _scalar(ent[2], f"{q}[{e}]")
    blocks = set()
    for n, blk in enumerate(_list(raw.get("compositions", []), "$.compositions")):
        p = f"$.compositions[{n}]"
        _keys(blk, p, ("objects", "degrees", "entries"))
        objs = _list(blk["objects"], f"{p}.objects")
        if len(objs) != 3 or any(o not in seen for o in objs):
            raise ParseError("expected three declared objects", f"{p}.objects")
        degs = _list(blk["degrees"], f"{p}.degrees")
        if len(degs) != 2:
            raise ParseError("expected [j, i]", f"{p}.degrees")
        j, i = (_int(x, f"{p}.degrees") for x in degs)
        key = (tuple(objs), j, i)
        if key in blocks:
            raise ParseError("duplicate composition block", p)
        blocks.add(key)
        for e, ent in enumerate(_list(blk["entries"], f"{p}.entries")):
            ent = _list(ent, f"{p}.entries[{e}]")
            if len(ent) != 4:
                raise ParseError("expected [b, a, c, coef]", f"{p}.entries[{e}]")
            b, a, c = (_int(x, f"{p}.entries[{e}]") for x in ent[:3])
            E, F, G = objs
            bounds = ((b, F, G, j), (a, E, F, i), (c, E, G, i + j))
            if any(not 0 <= x < _dim(pairs, X, Y, deg) for x, X, Y, deg in bounds):
                raise ParseError(f"entry ({b}, {a}, {c}) out of range", f"{p}.entries[{e}]")
            _scalar(ent[3], f"{p}.entries[{e}]")
    ids = raw["identities"]
    if not isinstance(ids, dict):
        raise ParseError("expected an object", "$.identities")
    for o, ents in ids.items():
        if o not in seen:
            raise ParseError(f"unknown object {o!r}", "$.identities")
        for e, ent in enumerate(_list(ents, f"$.identities.{o}")):
            ent = _list(ent, f"$.identities.{o}[{e}]")
            if len(ent) != 2:
                raise ParseError("expected [index, coef]", f"$.identities.{o}[{e}]")
            _int(ent[0], f"$.identities.{o}[{e}]")
            _scalar(ent[1], f"$.identities.{o}[{e}]")
    for o in objects:
        if o not in ids:
            raise ParseError(f"missing identity for {o!r}", "$.identities")
    return raw


def _dim(pairs, X, Y, deg):
    dims = pairs.get((X, Y), {})
    for key, d in dims.items():
        if int(key) == deg:
            return d
    return 0


def _degree(s, path):
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"degree keys are integers, got {s!r}", path) from None


def build_category(raw: dict) -> DGCategory:
    """The DGCategory described by a parsed description (not yet validated)."""
    R = parse_ring(raw["ring"])
    objects = raw["objects"]
    dims, diffs = {}, {}
    for h in raw["homs"]:
        pair = (h["source"], h["target"])
        dims[pair] = {int(i): d for i, d in h["dims"].items()}
        by = {}
        for i, ents in h.get("differential", {}).items():
            i = int(i)
            cols = [dict() for _ in range(dims[pair].get(i, 0))]
            for r, c, coef in ents:
                cols[c][r] = R.coerce(tuple(R.base.coerce(x) for x in coef) if isinstance(coef, list) else _scalar(coef, ""))
            by[i] = cols
        diffs[pair] = by
    k = R.base
    comps = {}
    for blk in raw.get("compositions", []):
        j, i = blk["degrees"]
        table = comps.setdefault(tuple(blk["objects"]), {}).setdefault((j, i), {})
        for b, a, c, coef in blk["entries"]:
            table.setdefault((b, a), {})[c] = k.coerce(_scalar(coef, ""))
    ids = {}
    for o in objects:
        n0 = dims.get((o, o), {}).get(0, 0)
        v = [k.zero] * n0
        for idx, coef in raw["identities"][o]:
            if not 0 <= idx < n0:
                raise ParseError(f"identity index {idx} out of range", f"$.identities.{o}")
            v[idx] = k.coerce(_scalar(coef, ""))
        ids[o] = tuple(v)
    return DGCategory(R, objects, dims, diffs, comps, ids, raw["vanishing_bound"])


def load_category(path) -> DGCategory:
    with open(path) as fh:
        return build_category(parse_category(fh.read()))


def _coef(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return c


def category_to_raw(cat: DGCategory) -> dict:
    R = cat.ring
    homs = []
    for E in cat.objects:
        for F in cat.objects:
            by = cat.dims.get((E, F))
            if not by:
                continue
            h = {"source": E, "target": F, "dims": {str(i): by[i] for i in sorted(by)}}
            diff = {}
            for i, cols in sorted(cat.d.get((E, F), {}).items()):
                ents = []
                for c, col in enumerate(cols):
                    for r, v in sorted(col.items()):
                        v = list(map(_coef, R.to_base(v))) if R.dim > 1 else _coef(v)
                        ents.append([r, c, v])
                ents.sort()
                if ents:
                    diff[str(i)] = ents
            if diff:
                h["differential"] = diff
            homs.append(h)
    comps = []
    for E in cat.objects:
        for F in cat.objects:
            for G in cat.objects:
                for (j, i), table in sorted(cat.comp.get((E, F, G), {}).items()):
                    ents = sorted([b, a, c, _coef(v)] for (b, a), out in table.items() for c, v in out.items())
                    if ents:
                        comps.append({"objects": [E, F, G], "degrees": [j, i], "entries": ents})
    ids = {E: [[n, _coef(c)] for n, c in enumerate(cat.identities.get(E, ())) if c != 0] for E in cat.objects}
    return {
        "format": FORMAT,
        "ring": ring_spec(R),
        "vanishing_bound": cat.bound,
        "objects": list(cat.objects),
        "homs": homs,
        "compositions": comps,
        "identities": ids,
    }


def _is_flat(x):
    return not isinstance(x, (dict, list)) or (isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x))


def emit(raw, indent: int = 0) -> str:
    """Canonical rendering: objects one key per line, arrays of scalars and
    arrays of such arrays kept on one line."""
    pad = "  " * indent
    if isinstance(raw, dict):
        if not raw:
            return "{}"
        if all(_is_flat(v) for v in raw.values()) and len(raw) <= 8 and indent > 1:
            return "{" + ", ".join(f"{json.dumps(k)}: {json.dumps(v)}" for k, v in raw.items()) + "}"
        inner = ",\n".join(f"{pad}  {json.dumps(k)}: {emit(v, indent + 1)}" for k, v in raw.items())
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(raw, list):
        if all(_is_flat(v) for v in raw):
            if len(json.dumps(raw)) <= 100 or all(not isinstance(v, list) for v in raw):
                return json.dumps(raw)
        inner = ",\n".join(f"{pad}  {emit(v, indent + 1)}" for v in raw)
        return "[\n" + inner + "\n" + pad + "]"
    return json.dumps(raw)


def emit_category(cat_or_raw) -> str:
    raw = category_to_raw(cat_or_raw) if isinstance(cat_or_raw, DGCategory) else cat_or_raw
    return emit(raw) + "\n"


def parse_coefficients(text: str, R) -> list:
    """Comma-separated coefficients; ring elements as colon-separated base
    coordinates (``1:1`` is 1 + t in the dual numbers)."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            raise ParseError(f"empty coefficient in {text!r}")
        try:
            if ":" in tok:
                out.append(R.coerce(tuple(R.base.coerce(Fraction(x)) for x in tok.split(":"))))
            else:
                out.append(R.coerce(Fraction(tok)))
        except (ValueError, ZeroDivisionError, RingError) as e:
            raise ParseError(f"bad coefficient {tok!r}: {e}") from None
    return out


def is_field(R) -> bool:
    return isinstance(R, Field)
