"""Command-line driver: ``invariant-forge <command> [options]``.

Exit codes: 0 success, 2 domain error, 64 usage error or unknown command,
74 I/O error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import closure as closure_mod
from .autlie import aut_lie_algebra
from .errors import ForgeError, SchemaError
from .fileio import parse_structure_file, read_json, structure_to_json, write_structure
from .identities import graded_identity_space, multilinear_identity_space
from .morphcalc import PresentedMap, PresentedSpace, eval_program
from .scalars import QQ, field_from_descriptor, parse_scalar, scalar_str
from .structures import (
    Cocycle2,
    GroupTable,
    TaftFactor,
    TaftParams,
    TaftProductParams,
    abelian_group,
    alpha_tilde,
    build_taft,
    build_taft_product,
    build_twisted_group_algebra,
    check_cocycle,
    commutator_scalar,
    extract_product_invariants,
    extract_taft_invariants,
    galois_twist,
    mu_and_generic_form,
    twisted_from_structure,
    zeta_cocycle,
)
from .tensors import Tensor
from .traceinv import CycleInvariantSpec, formanek_D, formanek_f, procesi_T

EX_DOMAIN, EX_USAGE, EX_IOERR = 2, 64, 74

COMMANDS = (
    "closure",
    "invariant-field",
    "aut-lie",
    "identities",
    "graded-identities",
    "eval",
    "twisted-group",
    "generic-form",
    "taft-build",
    "taft-extract",
    "taft-product",
    "galois-twist",
    "procesi",
    "formanek",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="invariant-forge", description="Exact invariants of structure tensors.")
    p.add_argument("command", help=", ".join(COMMANDS))
    p.add_argument("--structure", help="structure file (JSON)")
    p.add_argument("--job", help="job file (JSON)")
    p.add_argument("--bound", help="closure bound P,Q")
    p.add_argument("--max-rounds", type=int, default=64)
    p.add_argument("--degree", type=int, help="identity degree")
    p.add_argument("--grades", help="comma-separated grade labels for graded identities")
    p.add_argument("--k", type=int, help="Galois index for galois-twist")
    p.add_argument("--output", help="write a produced structure to this file")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, help="work budget (command specific)")
    p.add_argument("--force-large", action="store_true")
    return p


# ---------------------------------------------------------------------------
# helpers


class Context:
    def __init__(self, args):
        self.args = args
        self.job = None
        self.job_dir = Path(".")
        if args.job:
            self.job = read_json(args.job)
            if not isinstance(self.job, dict):
                raise SchemaError(f"{args.job}: job must be a JSON object")
            if self.job.get("schema_version") != 1:
                raise SchemaError(f"{args.job}: schema_version 1 required")
            self.job_dir = Path(args.job).parent
        self.rng = random.Random(args.seed)

    def get(self, key, default=None):
        return (self.job or {}).get(key, default)

    def structure(self):
        path = self.args.structure
        if path is None and self.job is not None and "structure" in self.job:
            path = self.job_dir / self.job["structure"]
        if path is None:
            raise UsageError("this command needs --structure or a job with a 'structure' field")
        return parse_structure_file(path)

    def field(self):
        desc = self.get("field")
        if desc is None:
            raise SchemaError("job needs a 'field' descriptor")
        return field_from_descriptor(desc)


def _bound(ctx):
    text = ctx.args.bound or ctx.get("bound")
    if text is None:
        raise UsageError("--bound P,Q is required")
    if isinstance(text, list):
        P, Q = text
    else:
        try:
            P, Q = (int(x) for x in str(text).split(","))
        except ValueError:
            raise UsageError(f"bad --bound {text!r}; expected P,Q") from None
    return closure_mod.DegreeBound(P, Q, ctx.args.max_rounds)


def _matrix(rows, field):
    return [[parse_scalar(v, field) for v in r] for r in rows]


def _mat_str(M):
    return [[scalar_str(v) for v in r] for r in M]


def _group_and_cocycle(ctx, field):
    gd = ctx.get("group")
    cd = ctx.get("cocycle")
    if gd is None or cd is None:
        raise SchemaError("job needs 'group' and 'cocycle'")
    if "zeta_power" in cd:
        orders = gd.get("cyclic_orders")
        if not orders or len(orders) != 2 or orders[0] != orders[1]:
            raise SchemaError("zeta_power cocycles need group.cyclic_orders = [n, n]")
        return zeta_cocycle(orders[0], field, int(cd["zeta_power"]))
    if "cyclic_orders" in gd:
        G = abelian_group(gd["cyclic_orders"])
    else:
        G = GroupTable(
            gd["table"],
            gd.get("identity", 0),
            [tuple(x) for x in gd["decomposition"]] if "decomposition" in gd else None,
            gd.get("labels"),
        )
    vals = cd.get("values")
    if vals is None:
        raise SchemaError("cocycle needs 'values' (N x N scalar strings) or 'zeta_power'")
    return G, Cocycle2(_matrix(vals, field))


def _elem(G, x):
    if isinstance(x, int):
        return x
    if x in G.labels:
        return G.labels.index(x)
    raise SchemaError(f"unknown group element {x!r}")


# ---------------------------------------------------------------------------
# commands


def cmd_closure(ctx, report_field=False):
    s = ctx.structure()
    st = closure_mod.compute_closure(s, _bound(ctx), budget=ctx.args.budget or 2_000_000)
    if report_field:
        return closure_mod.invariant_field_report(st).to_json()
    return {
        "bound": [st.bound.P, st.bound.Q],
        "converged": st.converged,
        "rounds": st.rounds,
        "dimensions": {f"{p},{q}": d for (p, q), d in st.dimensions().items()},
        "x00_basis": [scalar_str(v) for v in st.scalars()],
    }


def cmd_aut_lie(ctx):
    return aut_lie_algebra(ctx.structure()).to_json()


def cmd_identities(ctx):
    d = ctx.args.degree or ctx.get("degree")
    if d is None:
        raise UsageError("--degree is required")
    kw = {"budget": ctx.args.budget} if ctx.args.budget else {}
    return multilinear_identity_space(ctx.structure(), int(d), **kw).to_json()


def cmd_graded(ctx):
    grades = ctx.args.grades.split(",") if ctx.args.grades else ctx.get("grades")
    if not grades:
        raise UsageError("--grades g1,g2,... is required")
    return graded_identity_space(ctx.structure(), grades).to_json()


def _render_value(v):
    if isinstance(v, PresentedSpace):
        return {"kind": "space", "dimension": v.qdim, "arity": v.arity}
    if isinstance(v, PresentedMap):
        return {"kind": "map", "matrix": _mat_str(v.matrix)}
    if isinstance(v, Tensor):
        return {
            "kind": "tensor",
            "type": [v.p, v.q],
            "entries": [{"up": list(u), "down": list(d), "value": scalar_str(x)} for (u, d), x in v.items()],
        }
    return {"kind": "scalar", "value": scalar_str(v)}


def cmd_eval(ctx):
    if ctx.job is None:
        raise UsageError("eval needs --job")
    s = ctx.structure()
    bindings = ctx.get("bindings", [])
    if isinstance(bindings, dict):
        bindings = list(bindings.items())
    else:
        bindings = [tuple(b) for b in bindings]
    expr = ctx.get("expression")
    if not isinstance(expr, str):
        raise SchemaError("job needs an 'expression' string")
    v = eval_program(bindings, expr, s)
    out = {"expression": expr, "result": _render_value(v)}
    if not isinstance(v, (PresentedSpace, PresentedMap, Tensor)):
        out["trace" if expr.strip().startswith("trace") else "value"] = scalar_str(v)
        specs = ctx.get("specialize", [])
        if specs:
            pts = [parse_scalar(x, QQ) for x in specs]
            out["specializations"] = [{"at": scalar_str(p), "value": scalar_str(v(p))} for p in pts]
    return out


def cmd_twisted_group(ctx):
    F = ctx.field()
    G, alpha = _group_and_cocycle(ctx, F)
    chk = check_cocycle(G, alpha)
    out = {"order": G.order, "cocycle_ok": chk.ok}
    if not chk.ok:
        out["violation"] = list(chk.witness)
        return out
    W = build_twisted_group_algebra(G, alpha, F)
    out["dimension"] = W.structure.dim
    out["associative"] = True
    pairs = ctx.get("commutators")
    if pairs is None and G.decomposition:
        gens = [g for g, _ in G.decomposition]
        pairs = [[g, h] for g in gens for h in gens]
    out["commutators"] = [
        {"g": G.labels[_elem(G, g)], "h": G.labels[_elem(G, h)], "c": scalar_str(commutator_scalar(W, _elem(G, g), _elem(G, h)))}
        for g, h in pairs or []
    ]
    words = ctx.get("words", [])
    out["alpha_tilde"] = [
        scalar_str(alpha_tilde(W, [(_elem(G, g), _elem(G, h)) for g, h in w])) for w in words
    ]
    if ctx.args.output:
        write_structure(W.structure, ctx.args.output)
        out["structure_written"] = ctx.args.output
    return out


def cmd_generic_form(ctx):
    F = ctx.field()
    G, alpha = _group_and_cocycle(ctx, F)
    W = build_twisted_group_algebra(G, alpha, F)
    return mu_and_generic_form(W).to_json()


def cmd_taft_build(ctx):
    F = ctx.field()
    n = ctx.get("n")
    if n is None:
        raise SchemaError("job needs 'n', 'a', 'b'")
    p = TaftParams(int(n), parse_scalar(ctx.get("a", "1"), F), parse_scalar(ctx.get("b", "0"), F))
    alg = build_taft(p, F)
    out = {
        "dimension": alg.structure.dim,
        "checks": ["associativity", "gamma order n", "xi^n = 0", "gamma xi gamma^-1 = zeta xi", "coaction multiplicative"],
        "basis": [f"g^{al[0]} t^{be[0]}" for al, be in alg.monomials],
    }
    if ctx.args.output:
        write_structure(alg.structure, ctx.args.output)
        out["structure_written"] = ctx.args.output
    else:
        out["structure"] = structure_to_json(alg.structure)
    return out


def cmd_taft_extract(ctx):
    n = ctx.get("n")
    return extract_taft_invariants(ctx.structure(), int(n) if n else None).to_json()


def cmd_taft_product(ctx):
    F = ctx.field()
    facs = ctx.get("factors")
    if not facs:
        raise SchemaError("job needs 'factors'")
    factors = [
        TaftFactor(int(f["n"]), int(f["c"]), parse_scalar(f.get("a", "1"), F), parse_scalar(f.get("b", "0"), F))
        for f in facs
    ]
    z = len(factors)
    bexp = ctx.get("b_exponents", [[0] * z for _ in range(z)])
    lam = _matrix(ctx.get("lambda", [["0"] * z for _ in range(z)]), F)
    params = TaftProductParams(factors, bexp, lam)
    alg = build_taft_product(params, F)
    inv = extract_product_invariants(alg.structure, [(f.n, f.c) for f in factors])
    out = {"dimension": alg.structure.dim, "associative": True, "invariants": inv.to_json()}
    if ctx.args.output:
        write_structure(alg.structure, ctx.args.output)
        out["structure_written"] = ctx.args.output
    return out


def cmd_galois_twist(ctx):
    k = ctx.args.k if ctx.args.k is not None else ctx.get("k")
    if k is None:
        raise UsageError("--k is required")
    k = int(k)
    if ctx.args.structure is None and ctx.get("structure") is None and ctx.get("group") is not None:
        return _galois_twist_group(ctx, k)
    s = galois_twist(ctx.structure(), k)
    if ctx.args.output:
        write_structure(s, ctx.args.output)
        return {"k": k, "structure_written": ctx.args.output}
    return {"k": k, "structure": structure_to_json(s)}


def _galois_twist_group(ctx, k):
    """Twist a twisted group algebra and compare its generic-form data with the original."""
    F = ctx.field()
    G, alpha = _group_and_cocycle(ctx, F)
    W = build_twisted_group_algebra(G, alpha, F)
    before = mu_and_generic_form(W)
    after = mu_and_generic_form(twisted_from_structure(W, galois_twist(W.structure, k)))
    return {
        "k": k,
        "mu": scalar_str(before.mu),
        "mu_twisted": scalar_str(after.mu),
        "sigma_k_mu": scalar_str(F.galois(k, before.mu)),
        "k_fixes_k0": k in before.stabilizer,
        "invariants_preserved": after.mu == before.mu and after.commutation == before.commutation,
    }


def cmd_procesi(ctx):
    F = ctx.field()
    mats = [_matrix(M, F) for M in ctx.get("matrices", [])]
    spec = CycleInvariantSpec.parse(ctx.get("cycles", ""), len(mats))
    return {"cycles": ctx.get("cycles"), "value": scalar_str(F.coerce(procesi_T(spec, mats)))}


def cmd_formanek(ctx):
    F = ctx.field()
    force = ctx.args.force_large
    if "X" in (ctx.job or {}):
        X, Y = _matrix(ctx.get("X"), F), _matrix(ctx.get("Y"), F)
        val = F.coerce(formanek_D(X, Y, force=force))
        return {"D": scalar_str(val), "basis": bool(val)}
    mats = [_matrix(M, F) for M in ctx.get("matrices", [])]
    val = F.coerce(formanek_f(mats, force=force))
    return {"f": scalar_str(val), "basis": bool(val)}


HANDLERS = {
    "closure": cmd_closure,
    "invariant-field": lambda ctx: cmd_closure(ctx, report_field=True),
    "aut-lie": cmd_aut_lie,
    "identities": cmd_identities,
    "graded-identities": cmd_graded,
    "eval": cmd_eval,
    "twisted-group": cmd_twisted_group,
    "generic-form": cmd_generic_form,
    "taft-build": cmd_taft_build,
    "taft-extract": cmd_taft_extract,
    "taft-product": cmd_taft_product,
    "galois-twist": cmd_galois_twist,
    "procesi": cmd_procesi,
    "formanek": cmd_formanek,
}


def render_text(obj, indent=0) -> str:
    if isinstance(obj, dict) and "text" in obj and isinstance(obj["text"], str):
        return obj["text"]
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def run(command, args) -> tuple[int, dict]:
    """Execute one command; returns (exit code, report)."""
    if command not in HANDLERS:
        return EX_USAGE, {"error": "UnknownCommand", "message": f"unknown command {command!r}"}
    try:
        ctx = Context(args)
        return 0, HANDLERS[command](ctx)
    except UsageError as exc:
        return EX_USAGE, {"error": "UsageError", "message": str(exc)}
    except OSError as exc:
        return EX_IOERR, {"error": type(exc).__name__, "message": str(exc)}
    except ForgeError as exc:
        return EX_DOMAIN, {"error": type(exc).__name__, "message": str(exc)}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(json.dumps({"error": "UsageError", "message": str(exc)}), file=sys.stderr)
        return EX_USAGE
    code, report = run(args.command, args)
    stream = sys.stdout if code == 0 else sys.stderr
    if args.format == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False), file=stream)
    else:
        print(render_text(report), file=stream)
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
