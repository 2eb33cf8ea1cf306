"""Command-line front end: ``lmod <subcommand> ...``.

Exit codes: 0 success, 1 bad input, 2 validation failure, 3 the two
micro-support computations disagree.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import kostant, l2, lmodule, realform
from .parabolic import InternalInconsistency, NotComparable, Parabolic, ParabolicLattice, delta, split_basis
from .rootdata import GroupTooLarge, InvalidCartanType, NotDominant, RankMismatch, build_root_datum

SCHEMA_VERSION = 1
COMMANDS = ("roots", "parabolics", "kostant", "validate", "microsupport", "l2", "report")

DEFAULTS = {
    "cartan": None,
    "lambda": None,
    "levi": None,
    "upper": None,
    "module": None,
    "realform": None,
    "flat_rank": "full",
    "output": "json",
    "seed": 0,
    "mode": "both",
    "weak": False,
}


class InputError(ValueError):
    pass


class ValidationFailed(RuntimeError):
    def __init__(self, payload):
        super().__init__("validation failed")
        self.payload = payload


# ---------------------------------------------------------------------------
# parsing helpers


def parse_lambda(rd, text):
    if text is None or text == "":
        return rd.zero_weight()
    if isinstance(text, (list, tuple)):
        parts = [str(t) for t in text]
    else:
        parts = [t for t in str(text).replace(" ", "").split(",") if t]
    try:
        vals = [Fraction(t) for t in parts]
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad weight {text!r}: {e}") from None
    if len(vals) == 1 and rd.rank > 1 and vals[0] == 0:
        vals = vals * rd.rank
    n = rd.rank
    return rd.weight(vals[:n], vals[n:])


def parse_levi(rd, text, default_top=True) -> Parabolic:
    if text is None:
        return Parabolic(range(rd.rank)) if default_top else Parabolic()
    if isinstance(text, (list, tuple)):
        idx = [int(i) for i in text]
    else:
        t = str(text).strip().strip("[]")
        if t.upper() == "G":
            return Parabolic(range(rd.rank))
        if t.upper() in ("", "B", "P0"):
            return Parabolic()
        try:
            idx = [int(i) for i in t.split(",") if i.strip()]
        except ValueError:
            raise InputError(f"bad Levi subset {text!r}") from None
    if any(i < 0 or i >= rd.rank for i in idx):
        raise InputError(f"Levi index out of range 0..{rd.rank - 1}: {text!r}")
    return Parabolic(idx)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, Parabolic):
        return x.to_json()
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


def dump(payload) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True)


def _rd(opts):
    if not opts["cartan"]:
        raise InputError("--cartan is required")
    return build_root_datum(opts["cartan"])


def _entry(rd, opts):
    return realform.load_entry(rd, opts["realform"], opts["flat_rank"])


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, tsv rows)


def cmd_roots(opts):
    rd = _rd(opts)
    W = rd.weyl_enumerate()
    pos = rd.positive_root_coeffs
    payload = {
        "cartan_matrix": [list(r) for r in rd.cartan_matrix],
        "rank": rd.rank,
        "central_rank": rd.central_rank,
        "weyl_order": len(W),
        "longest_length": W[-1].length,
        "rho": rd.rho.to_json(),
        "positive_roots": [{"coeffs": list(c), "weight": rd.root_from_coeffs(c).to_json()} for c in pos],
    }
    rows = [("coeffs", "weight")] + [
        (",".join(map(str, r["coeffs"])), ",".join(r["weight"])) for r in payload["positive_roots"]
    ]
    return payload, rows


def cmd_parabolics(opts):
    rd = _rd(opts)
    G = Parabolic(range(rd.rank))
    out = []
    for P in ParabolicLattice(rd).elements():
        sb = split_basis(rd, P)
        out.append(
            {
                "P": P.label(rd.rank),
                "levi": P.to_json(),
                "delta_P": list(delta(rd, P)),
                "rho_P": sb.rho_P.to_json(),
                "n_dim": kostant.n_dim(rd, P, G),
                "coset_reps": len(kostant.coset_reps(rd, P, G)),
            }
        )
    rows = [("P", "delta_P", "rho_P", "n_dim", "coset_reps")] + [
        (r["P"], ",".join(map(str, r["delta_P"])), ",".join(r["rho_P"]), r["n_dim"], r["coset_reps"]) for r in out
    ]
    return {"parabolics": out}, rows


def cmd_kostant(opts):
    rd = _rd(opts)
    lam = parse_lambda(rd, opts["lambda"])
    P = parse_levi(rd, opts["levi"], default_top=False)
    Q = parse_levi(rd, opts["upper"])
    if not P <= Q:
        raise InputError(f"{P} is not below {Q}")
    dec = kostant.kostant_cohomology(rd, P, Q, lam)
    payload = dec.to_json()
    payload["degrees"] = {str(k): v for k, v in sorted(dec.degrees().items())}
    rows = [("degree", "word", "weight")] + [
        (p.degree, ",".join(map(str, p.word)) or "e", ",".join(p.weight.to_json())) for p in dec.pieces
    ]
    return payload, rows


def _load_module(opts):
    if not opts["module"]:
        raise InputError("--module is required")
    try:
        data = json.loads(Path(opts["module"]).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read module: {e}") from None
    cartan = opts["cartan"] or data.get("cartan")
    if not cartan:
        raise InputError("module has no cartan field and --cartan not given")
    rd = build_root_datum(cartan)
    try:
        return lmodule.module_from_json(rd, data)
    except (KeyError, TypeError, IndexError) as e:
        raise InputError(f"malformed module: {e!r}") from None


def _violation_rows(rd, vs):
    return [
        {"P": v["P"].label(rd.rank), "R": v["R"].label(rd.rank), "weight": v["weight"].to_json(), "degree": v["degree"]}
        for v in vs
    ]


def cmd_validate(opts):
    M = _load_module(opts)
    ok, vs = M.validate()
    payload = {"ok": ok, "violations": _violation_rows(M.rd, vs)}
    if not ok:
        raise ValidationFailed(payload)
    return payload, [("ok",), (ok,)]


def cmd_microsupport(opts):
    if opts["module"]:
        M = _load_module(opts)
        ok, vs = M.validate()
        if not ok:
            raise ValidationFailed({"ok": False, "violations": _violation_rows(M.rd, vs)})
        entry = _entry(M.rd, opts)
        sigma = lmodule.micro_support_generic(M, entry, weak=opts["weak"])
        bounds = lmodule.vanishing_bounds(M, entry, sigma)
        payload = {
            "microsupport": [s.to_json(M.rd.rank) for s in sigma],
            "bounds": None if bounds is None else list(bounds),
        }
        rows = [("P", "mu")] + [(s.P.label(M.rd.rank), ",".join(s.weight.to_json())) for s in sigma]
        return payload, rows
    rd = _rd(opts)
    lam = parse_lambda(rd, opts["lambda"])
    entry = _entry(rd, opts)
    if opts["mode"] == "both":
        sigma = l2.micro_support_both(rd, lam, entry, weak=opts["weak"])
    else:
        sigma = l2.micro_support_l2(rd, lam, opts["mode"], entry, weak=opts["weak"])
    payload = {"mode": opts["mode"], "microsupport": [x.to_json(rd.rank) for x in sigma]}
    rows = [("P", "mu", "kostant_degree")] + [
        (x.P.label(rd.rank), ",".join(x.mu.to_json()), x.degree) for x in sigma
    ]
    return payload, rows


def cmd_l2(opts):
    rd = _rd(opts)
    lam = parse_lambda(rd, opts["lambda"])
    rep = l2.l2_report(rd, lam, _entry(rd, opts))
    rows = [("P", "mu", "c", "d")]
    br = rep["bracket"] or ["", ""]
    for m in rep["microsupport"]:
        rows.append((m["P"], ",".join(m["mu"]), br[0], br[1]))
    return rep, rows


def cmd_report(opts):
    roots, _ = cmd_roots(opts)
    pars, _ = cmd_parabolics(opts)
    rd = _rd(opts)
    lam = parse_lambda(rd, opts["lambda"])
    G = Parabolic(range(rd.rank))
    kos = {P.label(rd.rank): kostant.kostant_cohomology(rd, P, G, lam).to_json() for P in ParabolicLattice(rd).elements()}
    rep, rows = cmd_l2(opts)
    payload = {"roots": roots, "parabolics": pars["parabolics"], "kostant": kos, "l2": rep}
    return payload, rows


HANDLERS = {
    "roots": cmd_roots,
    "parabolics": cmd_parabolics,
    "kostant": cmd_kostant,
    "validate": cmd_validate,
    "microsupport": cmd_microsupport,
    "l2": cmd_l2,
    "report": cmd_report,
}


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors (exit 1); 2 is reserved for failed validation
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _glue_negative(argv):
    """Let ``--lambda -1,0`` through: argparse would read ``-1,0`` as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--lambda", "--levi", "--upper"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lmod", description="Exact L-module and L2-cohomology calculator.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--cartan", help='Cartan type, e.g. "A2", "B2xA1+t1"')
    p.add_argument("--lambda", dest="lambda_", metavar="LAMBDA", help='highest weight, e.g. "1,0" or "1/2,0"')
    p.add_argument("--levi", help='Levi subset of the lower parabolic, e.g. "0" or "0,2" ("" = Borel)')
    p.add_argument("--upper", help="Levi subset of the upper parabolic (default G)")
    p.add_argument("--module", help="L-module JSON file")
    p.add_argument("--realform", help="real-form table JSON")
    p.add_argument("--flat-rank", dest="flat_rank", choices=realform.FLAT_RANK_MODES)
    p.add_argument("--mode", choices=("characterization", "definitional", "both"))
    p.add_argument("--weak", action="store_true", default=None, help="skip the self-duality condition")
    p.add_argument("--output", choices=("json", "tsv"))
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="JSON file of defaults; command-line flags win")
    return p


def resolve_options(ns: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if ns.config:
        try:
            cfg = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read config: {e}") from None
        for k, v in cfg.items():
            k = k.replace("-", "_")
            if k not in opts:
                raise InputError(f"unknown config key {k!r}")
            opts[k] = v
    given = vars(ns).copy()
    given["lambda"] = given.pop("lambda_")
    for k in DEFAULTS:
        if given.get(k) is not None:
            opts[k] = given[k]
    return opts


def _emit(payload, rows, fmt, out):
    if fmt == "tsv":
        for r in rows:
            out.write("\t".join("" if x is None else str(_jsonable(x)) for x in r) + "\n")
    else:
        out.write(dump(payload) + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = build_parser().parse_args(_glue_negative(argv))
    out, err = sys.stdout, sys.stderr
    try:
        opts = resolve_options(ns)
        random.seed(opts["seed"])
        payload, rows = HANDLERS[ns.command](opts)
        code = 0
    except ValidationFailed as e:
        payload, rows, code = e.payload, [("P", "R", "weight", "degree")], 2
        rows += [(v["P"], v["R"], ",".join(v["weight"]), v["degree"]) for v in e.payload["violations"]]
        for v in e.payload["violations"]:
            err.write(f"module condition fails at P={v['P']} R={v['R']} weight={v['weight']} degree={v['degree']}\n")
    except l2.ModeDisagreement as e:
        err.write(f"mode disagreement: {e}\n")
        return 3
    except InternalInconsistency as e:
        err.write(f"internal check failed: {e}\n")
        return 2
    except (
        InputError,
        InvalidCartanType,
        RankMismatch,
        NotDominant,
        NotComparable,
        GroupTooLarge,
        realform.MissingEntry,
        l2.WeightNotPresent,
        lmodule.InvalidModule,
        lmodule.NotInSupport,
        OSError,
        ValueError,
    ) as e:
        err.write(f"error: {e}\n")
        return 1
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": ns.command,
        "input": {k: opts[k] for k in sorted(opts) if opts[k] is not None},
    }
    envelope.update(payload)
    _emit(envelope, rows, opts["output"], out)
    return code


if __name__ == "__main__":
    sys.exit(main())
