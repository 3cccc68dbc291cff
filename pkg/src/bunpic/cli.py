"""Command-line front end.

A job names a group, the genus ``g``, the number of marked points ``n``, a
degree and a command.  Jobs come from a JSON file (``--spec``; a single job
object or a list of them) or from inline flags.  Exit codes: 0 success,
2 invalid input, 3 failed internal verification.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Any, Sequence

from .abelian import IntMatrix, hnf_basis, reduce_mod_lattice, snf
from .picard import (
    PicardPresentation,
    VerificationError,
    rpic,
    rpic_nonreductive,
    rpic_torus,
)
from .rootdata import (
    RootDatum,
    RootDatumError,
    WeylCapExceeded,
    build_classical,
    build_torus,
    derived_lattices,
    from_json,
    pi1,
    product,
    weyl_enumerate,
)
from .symforms import (
    Sym2Element,
    b_map,
    basic_inner_product,
    find_lift,
    sc_datum,
    sym2_action,
    sym2_invariants,
    sym2_pairs,
)
from .taut import (
    RegimeError,
    fiber_restriction_data,
    g0_basis,
    gamma,
    normalize,
    parse_class,
    rpic_basis,
    weight,
    weight_matrix,
)

SCHEMA_VERSION = "1.0"
COMMANDS = ("pi1", "sym2-invariants", "basic-form", "picard", "weight-image", "taut-normalize", "fiber-data")
EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 2, 3


class JobError(ValueError):
    """Invalid job description; the message names the offending field."""


# ---------------------------------------------------------------------------
# job parsing
# ---------------------------------------------------------------------------

@dataclass
class Group:
    datum: RootDatum
    reduction_of: str | None = None  # description when given as a reductive quotient


@dataclass
class JobSpec:
    group: Group
    g: int
    n: int
    command: str
    degree_kind: str  # "class" or "lift"
    degree: tuple[int, ...]
    expression: str | None = None
    where: str = "job"


_SHORT = re.compile(r"^(sl|gl|pgl|sp|so|torus|[ABCDEFG])(\d+)(?::(sc|ad))?$")


def parse_group_shorthand(text: str) -> RootDatum:
    """``sl2``, ``gl3``, ``pgl2``, ``sp4``, ``so5``, ``torus1``, ``A2``, ``B3:ad``; ``x`` for products."""
    parts = [p.strip() for p in text.split("x") if p.strip()]
    if not parts:
        raise JobError(f"empty group name {text!r}")
    out = []
    for p in parts:
        m = _SHORT.match(p)
        if not m:
            raise JobError(f"cannot read group name {p!r}")
        name, k, iso = m.group(1), int(m.group(2)), m.group(3)
        if iso and name not in "ABCDEFG":
            raise JobError(f"isogeny suffix only applies to Cartan types: {p!r}")
        try:
            if name in "ABCDEFG":
                out.append(build_classical(name, k, iso or "sc"))
            elif name == "torus":
                out.append(build_torus(k))
            else:
                out.append(from_json({"kind": name, "n": k}))
        except RootDatumError as exc:
            raise JobError(f"{p}: {exc}") from None
    return out[0] if len(out) == 1 else product(*out)


def _int(value: Any, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, str) and re.fullmatch(r"[+-]?\d+", value.strip()):
            value = int(value)
        else:
            raise JobError(f"{where}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise JobError(f"{where}: must be >= {minimum}, got {value}")
    return value


def _vector(value: Any, where: str, length: int) -> tuple[int, ...]:
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list):
        raise JobError(f"{where}: expected a list of integers")
    v = tuple(_int(x, f"{where}[{i}]") for i, x in enumerate(value))
    if len(v) != length:
        raise JobError(f"{where}: degree vector length {len(v)} does not match rank {length}")
    return v


def parse_group(obj: Any, where: str) -> Group:
    try:
        if isinstance(obj, str):
            return Group(parse_group_shorthand(obj))
        if isinstance(obj, dict) and obj.get("kind") == "reductive_quotient_of":
            desc = str(obj.get("description", ""))
            q = obj.get("quotient")
            datum = build_torus(0) if q is None else parse_group(q, f"{where}.quotient").datum
            return Group(datum, desc or "a connected group")
        return Group(from_json(obj))
    except JobError as exc:
        raise JobError(f"{where}: {exc}") from None
    except (RootDatumError, ValueError) as exc:
        raise JobError(f"{where}: {exc}") from None


def parse_job(obj: Any, where: str = "job", defaults: dict[str, Any] | None = None) -> JobSpec:
    if not isinstance(obj, dict):
        raise JobError(f"{where}: a job must be a JSON object")
    obj = {**(defaults or {}), **{k: v for k, v in obj.items() if v is not None}}
    if "group" not in obj:
        raise JobError(f"{where}.group: missing")
    group = parse_group(obj["group"], f"{where}.group")
    command = obj.get("command")
    if command not in COMMANDS:
        raise JobError(f"{where}.command: expected one of {', '.join(COMMANDS)}, got {command!r}")
    g = _int(obj.get("g", 0), f"{where}.g", 0)
    n = _int(obj.get("n", 0), f"{where}.n", 0)
    r = group.datum.rank
    degree = obj.get("degree", {"class": [0] * r})
    if not isinstance(degree, dict) or len(degree) != 1 or next(iter(degree)) not in ("class", "lift"):
        raise JobError(f"{where}.degree: expected {{\"class\": [...]}} or {{\"lift\": [...]}}")
    kind = next(iter(degree))
    vec = _vector(degree[kind], f"{where}.degree.{kind}", r)
    expr = obj.get("expression")
    if command == "taut-normalize":
        if not isinstance(expr, str):
            raise JobError(f"{where}.expression: taut-normalize needs a class expression string")
    if command == "fiber-data" and g < 1:
        raise JobError(f"{where}.g: fiber-data needs g >= 1")
    return JobSpec(group, g, n, command, kind, vec, expr, where)


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def js_int(x: int) -> str:
    return str(int(x))


def js_vec(v: Sequence[int]) -> list[str]:
    return [js_int(x) for x in v]


def js_mat(M: IntMatrix) -> list[list[str]]:
    return [js_vec(r) for r in M.rows]


def js_cols(M: IntMatrix) -> list[list[str]]:
    return [js_vec(c) for c in M.columns()]


def js_sym2(r: int, coeffs: Sequence[int]) -> dict[str, str]:
    return Sym2Element(r, tuple(coeffs)).to_json()


def char_names(rd: RootDatum) -> list[str]:
    """``ϖ`` names when characters are fundamental weights, else ``e_i``."""
    r, l = rd.rank, rd.semisimple_rank
    if l == r and r and rd.simple_coroots == IntMatrix.identity(r):
        return ["ϖ"] if r == 1 else [f"ϖ_{i + 1}" for i in range(r)]
    return [f"e_{i + 1}" for i in range(r)]


def format_form(coeffs: Sequence[int], names: Sequence[str]) -> str:
    r = len(names)
    terms = []
    for (i, j), c in zip(sym2_pairs(r), coeffs):
        if c:
            mono = f"{names[i]}²" if i == j else f"{names[i]}{names[j]}"
            terms.append((c, mono))
    return _combine(terms)


def format_combination(coeffs: Sequence[int], labels: Sequence[str]) -> str:
    return _combine([(c, lab) for c, lab in zip(coeffs, labels) if c])


def _combine(terms: list[tuple[int, str]]) -> str:
    if not terms:
        return "0"
    out = ""
    for k, (c, t) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}"
        mag = mag + ("*" if mag else "")
        out += (f" {sign} " if k else ("-" if c < 0 else "")) + mag + t
    return out


def group_info(grp: Group) -> dict[str, Any]:
    rd = grp.datum
    info = {
        "label": rd.label,
        "rank": rd.rank,
        "semisimple_rank": rd.semisimple_rank,
        "factors": [f.name for f in rd.factors],
        "simple_roots": js_mat(rd.simple_roots),
        "simple_coroots": js_mat(rd.simple_coroots),
    }
    if grp.reduction_of is not None:
        info["reductive_quotient_of"] = grp.reduction_of
    return info


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@dataclass
class Options:
    verify: bool = False
    weyl_cap: int = 10**6


def _degree(job: JobSpec) -> tuple[tuple[int, ...] | None, tuple[int, ...]]:
    """Return ``(class representative or None, lift)``."""
    rd = job.group.datum
    if job.degree_kind == "lift":
        return None, job.degree
    cls = reduce_mod_lattice(job.degree, derived_lattices(rd).corootL)
    if job.g == 0 and job.command in ("picard", "weight-image"):
        return cls, find_lift(rd, cls)
    return cls, cls


def cmd_pi1(job: JobSpec, opts: Options) -> tuple[dict, list[str]]:
    p = pi1(job.group.datum)
    res = {
        "invariant_factors": js_vec(p.group.invariant_factors),
        "free_rank": p.group.free_rank,
        "torsion": js_vec(p.group.torsion),
        "torsion_part": js_vec(p.torsion_part.invariant_factors),
        "free_quotient_rank": p.free_quotient.free_rank,
        "sequence_exact": p.exact(),
    }
    text = [
        f"pi_1 = {p.group}",
        f"torsion part (derived group) = {p.torsion_part}",
        f"torsion-free quotient = {p.free_quotient}",
        f"sequence exact: {'yes' if p.exact() else 'NO'}",
    ]
    return res, text


def _weyl_check(rd: RootDatum, basis: IntMatrix, opts: Options) -> tuple[bool | None, str]:
    """Invariance of Sym² vectors under the full Weyl group, if it is small enough."""
    if rd.weyl_order > opts.weyl_cap:
        return None, f"full Weyl check skipped: |W| = {rd.weyl_order} exceeds cap {opts.weyl_cap}"
    try:
        elements = weyl_enumerate(rd, opts.weyl_cap)
    except WeylCapExceeded as exc:
        return None, f"full Weyl check skipped: {exc}"
    ok = all(sym2_action(w) @ basis == basis for w in elements)
    return ok, f"full Weyl check over {len(elements)} elements: {'passed' if ok else 'FAILED'}"


def cmd_sym2(job: JobSpec, opts: Options) -> tuple[dict, list[str]]:
    rd = job.group.datum
    inv = sym2_invariants(rd)
    names = char_names(rd)
    wnames = ["ϖ"] if rd.semisimple_rank == 1 else [f"ϖ_{i + 1}" for i in range(rd.semisimple_rank)]
    res = {
        "on_char": [js_sym2(rd.rank, c) for c in inv.on_char.columns()],
        "on_sc": [js_sym2(rd.semisimple_rank, c) for c in inv.on_sc.columns()],
        "rank_on_char": inv.on_char.ncols,
        "rank_on_sc": inv.on_sc.ncols,
        "simple_factors": rd.n_factors,
    }
    text = [f"Sym^2 of characters, W-invariant lattice of rank {inv.on_char.ncols}:"]
    text += [f"  {format_form(c, names)}" for c in inv.on_char.columns()]
    text.append(f"Sym^2 of the weight lattice, W-invariant lattice of rank {inv.on_sc.ncols}:")
    text += [f"  {format_form(c, wnames)}" for c in inv.on_sc.columns()]
    if opts.verify:
        ok, msg = _weyl_check(rd, inv.on_char, opts)
        if ok is False:
            raise VerificationError(msg)
        res["weyl_check"] = msg
        text.append(msg)
    return res, text


def cmd_basic_form(job: JobSpec, opts: Options) -> tuple[dict, list[str]]:
    rd = job.group.datum
    l = rd.semisimple_rank
    wnames = ["ϖ"] if l == 1 else [f"ϖ_{i + 1}" for i in range(l)]
    out, text = [], []
    for f in rd.factors:
        Q = basic_inner_product(rd, f)
        G = b_map(Q).gram
        out.append(
            {
                "factor": f.name,
                "indices": [i + 1 for i in f.indices],
                "form": Q.to_json(),
                "gram_on_coroots": js_mat(G),
            }
        )
        text.append(f"{f.name} (simple roots {', '.join(str(i + 1) for i in f.indices)}): {format_form(Q.coeffs, wnames)}")
        text.append(f"  Gram matrix on coroots: {G.tolist()}")
    res: dict[str, Any] = {"factors": out}
    if opts.verify and l:
        sc = sc_datum(rd)
        basis = IntMatrix.from_columns([basic_inner_product(rd, f).coeffs for f in rd.factors], len(sym2_pairs(l)))
        ok, msg = _weyl_check(sc, basis, opts)
        if ok is False:
            raise VerificationError(msg)
        res["weyl_check"] = msg
        text.append(msg)
    if not rd.factors:
        text.append("no simple factors")
    return res, text


def _rank_law(rd: RootDatum, pres: PicardPresentation) -> tuple[bool, str]:
    A = derived_lattices(rd).ab_charL
    ab = rpic_torus(build_torus(A.ncols), pres.g, pres.n, A.T @ pres.d, verify=False)
    want = ab.free_rank + rd.n_factors
    ok = pres.free_rank == want
    return ok, f"rank law: {pres.free_rank} = {ab.free_rank} + {rd.n_factors}: {'holds' if ok else 'FAILS'}"


def _picard(job: JobSpec, opts: Options) -> PicardPresentation:
    cls, lift = _degree(job)
    if job.group.reduction_of is not None:
        return rpic_nonreductive(job.group.datum, job.g, job.n, d=lift, description=job.group.reduction_of)
    return rpic(job.group.datum, job.g, job.n, d=lift)


def _degree_info(job: JobSpec, pres: PicardPresentation) -> dict[str, Any]:
    cls, _ = _degree(job)
    out: dict[str, Any] = {"lift": js_vec(pres.d)}
    if cls is not None:
        out["class"] = js_vec(cls)
    return out


def cmd_picard(job: JobSpec, opts: Options) -> tuple[dict, list[str]]:
    rd = job.group.datum
    pres = _picard(job, opts)
    names = char_names(rd)
    deg = _degree_info(job, pres)
    res: dict[str, Any] = {
        "regime": "g>=2" if job.g >= 2 else ("g=1" if job.g == 1 else ("g=0,n>=1" if job.n else "g=0,n=0")),
        "degree": deg,
        "free_rank": pres.free_rank,
        "torsion": js_vec(pres.torsion),
        "notes": list(pres.notes),
    }
    if pres.provenance:
        res["provenance"] = pres.provenance
    text = [f"degree: {'class ' + str(list(map(int, deg['class']))) + ', ' if 'class' in deg else ''}lift {list(pres.d)}"]
    text.append(f"RPic is free of rank {pres.free_rank}")
    if pres.provenance:
        text.append(pres.provenance)
    if job.g >= 1:
        basis = pres.basis
        labels = basis.labels
        gens = pres.generators
        tau = pres.transgression_matrix
        V = pres.sym2_inv_basis
        tau_of = {}
        for j, col in enumerate(tau.columns()):
            nz = [i for i, x in enumerate(col) if x]
            if len(nz) == 1 and col[nz[0]] == 1:
                tau_of.setdefault(nz[0], j)
        gen_out = []
        text.append("generators (in the torus lattice):")
        for i, col in enumerate(gens.columns()):
            expr = format_combination(col, labels)
            line = f"  G_{i + 1} = {expr}"
            nz = [k for k, x in enumerate(col) if x]
            if len(nz) == 1 and col[nz[0]] == 1:
                line += f" = {basis.describe(nz[0], names)}"
            if i in tau_of:
                line += f" = τ({format_form(V.col(tau_of[i]), names)})"
            text.append(line)
            gen_out.append({"label": f"G_{i + 1}", "expression": expr, "coordinates": js_vec(col)})
        res["torus_basis"] = [
            {"label": lab, "meaning": basis.describe(k, names)} for k, lab in enumerate(labels)
        ]
        res["generators"] = gen_out
        res["transgression"] = [
            {"form": js_sym2(rd.rank, V.col(j)), "image": js_vec(tau.col(j))} for j in range(V.ncols)
        ]
        text.append("transgression:")
        for j in range(V.ncols):
            img = format_combination(tau.col(j), [f"G_{i + 1}" for i in range(gens.ncols)])
            text.append(f"  τ({format_form(V.col(j), names)}) = {img}")
        res["ab_pullback"] = js_mat(pres.ab_pullback_matrix)
        res["saturation_index"] = js_int(pres.saturation_index)
        rep = pres.pushout_report
        res["pushout"] = {
            "ok": rep.ok,
            "failures": list(rep.failures),
            "invariant_factors": js_vec(rep.pushout_invariant_factors),
        }
        text.append(f"push-out check: {'passed' if rep.ok else 'failed: ' + '; '.join(rep.failures)}")
        if opts.verify:
            ok, msg = _rank_law(rd, pres)
            res["rank_law"] = msg
            text.append(msg)
            if not ok:
                raise VerificationError(msg)
    else:
        res["weight_image"] = js_cols(pres.weight_image)
        res["star_holds"] = pres.star_holds
        res["injectivity_guaranteed"] = pres.injectivity_guaranteed
        text.append(f"image of the weight map, basis: {[list(c) for c in pres.weight_image.columns()]}")
        text.append(f"index in the character lattice: {_index(pres.weight_image)}")
        if pres.weight_image.ncols == 1 and rd.rank == 1:
            k = pres.weight_image[0, 0]
            text.append(f"image = {'ℤ' if k == 1 else str(k) + 'ℤ'}")
    for note in pres.notes:
        text.append(f"note: {note}")
    return res, text


def _index(M: IntMatrix) -> str:
    if M.ncols < M.nrows:
        return "infinite"
    S = snf(M)[0]
    out = 1
    for i in range(min(S.shape)):
        out *= S[i, i]
    return str(out)


def cmd_weight_image(job: JobSpec, opts: Options) -> tuple[dict, list[str]]:
    pres = _picard(job, opts)
    if job.g == 0:
        W = pres.weight_image
    else:
        W = hnf_basis(weight_matrix(pres.basis) @ pres.generators)
    res = {
        "degree": _degree_info(job, pres),
        "basis": js_cols(W),
        "rank": W.ncols,
        "index": _index(W),
        "injectivity_guaranteed": pres.injectivity_guaranteed,
    }
    cls = res["degree"].get("class")
    text = [
        f"degree: {'class ' + str([int(x) for x in cls]) + ', ' if cls else ''}lift {list(pres.d)}",
        f"image of the weight map: basis {[list(c) for c in W.columns()]}",
        f"index in the character lattice: {res['index']}",
    ]
    text += [f"note: {x}" for x in pres.notes]
    return res, text


def cmd_taut_normalize(job: JobSpec, opts: Options) -> tuple[dict, list[str]]:
    rd = job.group.datum
    r, g, n = rd.rank, job.g, job.n
    _, d = _degree(job)
    c = parse_class(job.expression, r, n)
    basis = g0_basis(r, n, d) if g == 0 else rpic_basis(r, g, n, d)
    coords = normalize(c, basis)
    w = weight(c, d, g, n)
    gm = gamma(c, r)
    res = {
        "basis": list(basis.labels),
        "coordinates": js_vec(coords),
        "normal_form": format_combination(coords, basis.labels),
        "weight": js_vec(w),
        "gamma": js_sym2(r, gm),
    }
    text = [
        f"class: {c}",
        f"normal form: {res['normal_form']}",
        f"weight: {list(w)}",
        f"gamma (Gram coordinates G_ij, i<=j): {list(gm)}",
    ]
    return res, text


def cmd_fiber_data(job: JobSpec, opts: Options) -> tuple[dict, list[str]]:
    rd = job.group.datum
    _, d = _degree(job)
    fd = fiber_restriction_data(rd.rank, job.g, job.n, d)
    res = {
        "kernel": js_cols(fd.kernel),
        "kernel_rank": fd.kernel.ncols,
        "H_basis": js_cols(fd.H_basis),
        "image_invariant_factors": None if fd.image_invariant_factors is None else js_vec(fd.image_invariant_factors),
    }
    text = [
        f"kernel of weight + gamma: rank {fd.kernel.ncols}",
        f"H basis (m, zeta): {[list(c) for c in fd.H_basis.columns()]}",
    ]
    if fd.image_invariant_factors is not None:
        text.append(f"image invariant factors: {list(fd.image_invariant_factors)}")
    return res, text


HANDLERS = {
    "pi1": cmd_pi1,
    "sym2-invariants": cmd_sym2,
    "basic-form": cmd_basic_form,
    "picard": cmd_picard,
    "weight-image": cmd_weight_image,
    "taut-normalize": cmd_taut_normalize,
    "fiber-data": cmd_fiber_data,
}


def run(job: JobSpec, opts: Options) -> tuple[dict[str, Any], list[str]]:
    """Run one job; returns the JSON report and the text lines."""
    try:
        result, text = HANDLERS[job.command](job, opts)
    except (RegimeError, RootDatumError) as exc:
        raise JobError(f"{job.where}: {exc}") from None
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": job.command,
        "group": group_info(job.group),
        "g": job.g,
        "n": job.n,
        "result": result,
    }
    rd = job.group.datum
    head = f"{job.command}: {rd.label} (rank {rd.rank}, factors {', '.join(f.name for f in rd.factors) or 'none'})"
    if job.command in ("picard", "weight-image", "taut-normalize", "fiber-data"):
        head += f", g = {job.g}, n = {job.n}"
    return report, [head] + text


def load_schema() -> dict[str, Any]:
    return json.loads(resources.files("bunpic").joinpath("schema/report.schema.json").read_text())


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bunpic",
        description="Relative Picard groups of moduli of G-bundles on pointed curves.",
    )
    p.add_argument("--spec", help="JSON file with a job object or a list of jobs ('-' for stdin)")
    p.add_argument("--command", choices=COMMANDS, help="command (overrides the job file)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--verify", action="store_true", help="run push-out, rank-law and Weyl checks")
    p.add_argument("--weyl-cap", type=int, default=10**6, help="largest Weyl group to enumerate")
    p.add_argument("--group", help="group: JSON object or name such as sl2, gl3, pgl2, sp4, so5, torus1, B3:ad, sl2xtorus1")
    p.add_argument("--g", type=int, help="genus")
    p.add_argument("--n", type=int, help="number of marked points")
    deg = p.add_mutually_exclusive_group()
    deg.add_argument("--class", dest="degree_class", help="degree class, comma-separated (reduced mod coroots)")
    deg.add_argument("--lift", help="degree lift, comma-separated")
    p.add_argument("--expression", help="tautological class for taut-normalize, e.g. 'L([1]; []) - P([1],[] | [1],[])'")
    return p


def _inline_overrides(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if args.group is not None:
        text = args.group.strip()
        if text.startswith("{"):
            try:
                out["group"] = json.loads(text)
            except json.JSONDecodeError as exc:
                raise JobError(f"--group: invalid JSON at column {exc.colno}: {exc.msg}") from None
        else:
            out["group"] = text
    if args.command:
        out["command"] = args.command
    if args.g is not None:
        out["g"] = args.g
    if args.n is not None:
        out["n"] = args.n
    for key, val in (("class", args.degree_class), ("lift", args.lift)):
        if val is not None:
            parts = [x for x in val.replace(" ", "").split(",") if x]
            out["degree"] = {key: parts}
    if args.expression is not None:
        out["expression"] = args.expression
    return out


def _load_jobs(args: argparse.Namespace) -> tuple[list[JobSpec], bool]:
    overrides = _inline_overrides(args)
    if args.spec:
        try:
            raw = sys.stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
        except OSError as exc:
            raise JobError(f"--spec: cannot read {args.spec}: {exc.strerror}") from None
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise JobError(f"{args.spec}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if isinstance(data, dict) and "jobs" in data:
            data = data["jobs"]
        if isinstance(data, list):
            jobs = [parse_job({**j, **overrides} if isinstance(j, dict) else j, f"jobs[{i}]") for i, j in enumerate(data)]
            return jobs, True
        return [parse_job({**data, **overrides} if isinstance(data, dict) else data)], False
    if "group" not in overrides:
        raise JobError("give --spec FILE or at least --group and --command")
    return [parse_job(overrides)], False


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = Options(verify=args.verify, weyl_cap=args.weyl_cap)
    try:
        jobs, batch = _load_jobs(args)
        reports, texts = [], []
        for job in jobs:
            rep, txt = run(job, opts)
            reports.append(rep)
            texts.append(txt)
    except JobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    if args.format == "json":
        payload: Any = {"schema_version": SCHEMA_VERSION, "reports": reports} if batch else reports[0]
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print("\n\n".join("\n".join(t) for t in texts))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
