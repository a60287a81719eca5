"""Command-line front end: JSON experiment configs in, JSON/CSV reports out.

Subcommands: places, height, weil, twisted, sweep, solve, scatter,
ruvojta, audit.  One config file describes one experiment; reports are
deterministic (byte-identical across runs), embed the config digest, and
serialize every rational as a string.  Exit code 0 on success, 2 when any
verdict was indeterminate, 1 on error.
"""

import argparse
import csv
import hashlib
import json
import random
import sys
from fractions import Fraction

from . import exceptional, ruvojta, scattering
from .errors import ConfigInvalid, LinscatError
from .fieldarith import nf_create
from .heights import (
    HyperplanePresentation,
    LinearForm,
    ProjectivePoint,
    log_height,
    mult_height,
    weil_hyperplane,
)
from .places import INF, log_abs, places_above, product_formula_defect
from .twisted import TwistedHeightSpec, log_twisted_report, q_sweep, twisted_height

SCHEMA = 1


def _frac(s, where=""):
    try:
        if isinstance(s, str):
            return Fraction(s)
        if isinstance(s, int):
            return Fraction(s)
    except (ValueError, ZeroDivisionError):
        pass
    raise ConfigInvalid("expected a rational string at %s, got %r" % (where, s))


def _normalize_place(v, where=""):
    if v in ("inf", "oo", "infinity"):
        return INF
    if isinstance(v, int):
        return v
    if isinstance(v, str) and v.isdigit():
        return int(v)
    raise ConfigInvalid("bad place %r at %s" % (v, where))


def _place_key(v):
    return "inf" if v == INF else str(v)


def _load_config(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigInvalid("cannot read config %s: %s" % (path, exc))
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid("config %s is not valid JSON: %s" % (path, exc))
    if not isinstance(cfg, dict):
        raise ConfigInvalid("config root must be an object")
    digest = hashlib.sha256(raw).hexdigest()
    return cfg, digest


def _get_field(cfg):
    if "field" not in cfg:
        raise ConfigInvalid("config needs a 'field' minimal polynomial")
    try:
        return nf_create([int(c) for c in cfg["field"]])
    except LinscatError:
        raise
    except (TypeError, ValueError):
        raise ConfigInvalid("'field' must be a list of integers")


def _get_points(cfg, key="points"):
    pts = []
    for row in cfg.get(key, []):
        try:
            pts.append(ProjectivePoint([_frac(c, key) if isinstance(c, str) else c
                                        for c in row]))
        except LinscatError as exc:
            raise ConfigInvalid("bad point %r: %s" % (row, exc))
    return pts


def _parse_form(field, coeff_list, where):
    coeffs = []
    for c in coeff_list:
        if isinstance(c, list):
            if len(c) != field.degree:
                raise ConfigInvalid(
                    "coefficient %r at %s needs %d basis entries"
                    % (c, where, field.degree))
            coeffs.append(field.element([_frac(x, where) for x in c]))
        else:
            coeffs.append(field.from_rational(_frac(c, where)))
    try:
        return LinearForm(field, coeffs)
    except LinscatError as exc:
        raise ConfigInvalid("bad form at %s: %s" % (where, exc))


def _get_S(cfg):
    if "S" not in cfg or not cfg["S"]:
        raise ConfigInvalid("config needs a nonempty 'S'")
    return [_normalize_place(v, "S") for v in cfg["S"]]


def _get_forms(cfg, field, S):
    if "forms" not in cfg:
        raise ConfigInvalid("config needs 'forms' per place")
    out = {}
    for v in S:
        key = _place_key(v)
        if key not in cfg["forms"]:
            raise ConfigInvalid("no forms for place %s" % key)
        out[v] = [_parse_form(field, f, "forms[%s]" % key) for f in cfg["forms"][key]]
    return out


def _get_weights(cfg, S):
    if "weights" not in cfg:
        raise ConfigInvalid("config needs 'weights' per place")
    out = {}
    for v in S:
        key = _place_key(v)
        if key not in cfg["weights"]:
            raise ConfigInvalid("no weight row for place %s" % key)
        row = [_frac(c, "weights[%s]" % key) for c in cfg["weights"][key]]
        if sum(row) != 0:
            raise ConfigInvalid(
                "weight row at place %s sums to %s, not 0" % (key, sum(row)))
        out[v] = row
    return out


def _get_w_choices(cfg):
    return {_normalize_place(k, "w_choices"): int(ix)
            for k, ix in cfg.get("w_choices", {}).items()}


def _float(x):
    return float(x)


def _report(payload, cfg_digest, precision, out_path=None):
    doc = {"schema": SCHEMA, "config_digest": cfg_digest,
           "precision": precision}
    doc.update(payload)
    text = json.dumps(doc, sort_keys=True, indent=2, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return doc


def _exit_code(doc):
    def walk(node):
        if isinstance(node, dict):
            for k, val in node.items():
                if k == "indeterminate" and val:
                    return True
                if walk(val):
                    return True
        elif isinstance(node, list):
            for val in node:
                if walk(val):
                    return True
        return False
    return 2 if walk(doc) else 0


# ---------------------------------------------------------------------------
# subcommands

def cmd_places(cfg, digest, precision, outdir):
    field = _get_field(cfg)
    vs = [_normalize_place(v, "places") for v in cfg.get("places", cfg.get("S", []))]
    if not vs:
        raise ConfigInvalid("'places' (or 'S') must list the places to factor")
    rows = []
    for v in vs:
        ws = places_above(field, v, precision if v != INF else max(30, precision))
        rows.append({"v": _place_key(v),
                     "above": [w.serial() for w in ws],
                     "sum_ef": sum(w.e * w.f for w in ws)})
    return _report({"places": rows, "field": list(field.min_poly)},
                   digest, precision, _out(outdir, "places.json"))


def cmd_height(cfg, digest, precision, outdir):
    pts = _get_points(cfg)
    if not pts:
        raise ConfigInvalid("'points' must be nonempty")
    rows = [{"point": list(p.coords), "H": str(mult_height(p)),
             "h": _float(log_height(p, precision))} for p in sorted(set(pts))]
    return _report({"heights": rows}, digest, precision, _out(outdir, "height.json"))


def cmd_weil(cfg, digest, precision, outdir):
    field = _get_field(cfg)
    S = _get_S(cfg)
    if "form" not in cfg:
        raise ConfigInvalid("config needs a 'form'")
    form = _parse_form(field, cfg["form"], "form")
    pres = HyperplanePresentation(form)
    w_choices = _get_w_choices(cfg)
    pts = _get_points(cfg)
    rows = []
    for p in sorted(set(pts)):
        lam = {}
        for v in S:
            lam[_place_key(v)] = _float(weil_hyperplane(
                pres, p, v, w_index=w_choices.get(v, 0), precision=precision))
        rows.append({"point": list(p.coords),
                     "h": _float(log_height(p, precision)), "lambda": lam})
    return _report({"weil": rows}, digest, precision, _out(outdir, "weil.json"))


def _twisted_spec(cfg, precision):
    field = _get_field(cfg)
    S = _get_S(cfg)
    forms = _get_forms(cfg, field, S)
    weights = _get_weights(cfg, S)
    try:
        return TwistedHeightSpec(
            field, S, forms, weights,
            epsilon=_frac(cfg.get("epsilon", "1/10"), "epsilon"),
            Q=_frac(cfg.get("Q", 1), "Q"),
            w_choices=_get_w_choices(cfg), precision=precision)
    except LinscatError as exc:
        raise ConfigInvalid(str(exc))


def cmd_twisted(cfg, digest, precision, outdir):
    spec = _twisted_spec(cfg, precision)
    pts = _get_points(cfg)
    rows = []
    for p in sorted(set(pts)):
        rep = log_twisted_report(spec, p, precision)
        rows.append({
            "point": list(p.coords),
            "H_Q": _float(twisted_height(spec, p, precision)),
            "per_place": {_place_key(v): _float(val)
                          for v, val in rep["per_place"].items()},
            "lhs": _float(rep["lhs"]), "rhs": _float(rep["rhs"]),
            "h": _float(rep["h"]),
            "verdict": rep["verdict"],
            "identity_residual": rep["identity_residual"],
        })
    return _report({"Q": str(spec.Q), "epsilon": str(spec.epsilon),
                    "twisted": rows}, digest, precision,
                   _out(outdir, "twisted.json"))


def cmd_sweep(cfg, digest, precision, outdir):
    spec = _twisted_spec(cfg, precision)
    grid = [_frac(q, "Q_grid") for q in cfg.get("Q_grid", [])]
    if not grid:
        raise ConfigInvalid("'Q_grid' must be a nonempty ascending list")
    pts = _get_points(cfg)
    if not pts and "height_bound" in cfg:
        pts = exceptional.enumerate_points(spec.n, int(cfg["height_bound"]))
    rows = q_sweep(spec, grid, pts, precision)
    payload = [{"Q": str(r["Q"]),
                "solutions": [list(p.coords) for p in r["solutions"]],
                "indeterminate": [list(p.coords) for p in r["indeterminate"]]}
               for r in rows]
    return _report({"sweep": payload, "epsilon": str(spec.epsilon)},
                   digest, precision, _out(outdir, "sweep.json"))


def cmd_solve(cfg, digest, precision, outdir):
    mode = cfg.get("mode")
    if mode not in ("schmidt", "fw", "parametric"):
        raise ConfigInvalid("'mode' must be schmidt, fw or parametric")
    slack = _frac(cfg.get("slack", 0), "slack")
    pts = _get_points(cfg) or None
    bound = int(cfg["height_bound"]) if "height_bound" in cfg else None
    if mode == "parametric":
        spec = _twisted_spec(cfg, precision)
        ss = exceptional.filter_solutions(
            "parametric", spec, points=pts, height_bound=bound,
            slack=float(slack), precision=precision)
    else:
        field = _get_field(cfg)
        S = _get_S(cfg)
        forms = _get_forms(cfg, field, S)
        try:
            fspec = exceptional.FormSystemSpec(
                field, S, forms, w_choices=_get_w_choices(cfg),
                precision=precision)
        except LinscatError as exc:
            raise ConfigInvalid(str(exc))
        if mode == "schmidt":
            ss = exceptional.filter_solutions(
                "schmidt", fspec, points=pts, height_bound=bound,
                epsilon=_frac(cfg.get("epsilon", "1/10"), "epsilon"),
                slack=float(slack), precision=precision)
        else:
            S_norm = fspec.S
            dmat = [[_frac(c, "d_weights") for c in cfg["d_weights"][_place_key(v)]]
                    for v in S_norm] if "d_weights" in cfg else None
            if dmat is None:
                raise ConfigInvalid("fw mode needs 'd_weights'")
            ss = exceptional.filter_solutions(
                "fw", fspec, points=pts, height_bound=bound, d_weights=dmat,
                slack=float(slack), precision=precision)
    payload = {
        "mode": mode,
        "solutions": [list(p.coords) for p in ss.points],
        "indeterminate": [list(p.coords) for p in ss.indeterminate],
        "support": [list(p.coords) for p in ss.support],
        "slack": str(slack),
        "spec_digest": ss.spec_digest,
    }
    if ss.points and cfg.get("cover", True):
        cover = exceptional.subspace_cover(ss, mode=cfg.get("cover_mode", "exact"))
        payload["cover"] = cover.serial()
        payload["density"] = exceptional.density_report(ss, cover)
    if outdir and cfg.get("csv", True):
        _solve_csv(ss, _out(outdir, "solve.csv"), precision)
    return _report(payload, digest, precision, _out(outdir, "solve.json"))


def _solve_csv(ss, path, precision):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["point", "h", "bucket"])
        for bucket, pts in (("solution", ss.points),
                            ("indeterminate", ss.indeterminate),
                            ("support", ss.support)):
            for p in pts:
                wr.writerow([":".join(str(c) for c in p.coords),
                             repr(log_height(p, precision)), bucket])


def cmd_scatter(cfg, digest, precision, outdir):
    if "profiles" not in cfg:
        raise ConfigInvalid("scatter needs 'profiles' "
                            "(label, lambda matrix, h) entries")
    profiles = []
    for k, prof in enumerate(cfg["profiles"]):
        lam = [[_frac(c, "profiles[%d]" % k) for c in row]
               for row in prof["lambda"]]
        profiles.append((prof.get("label", "p%d" % k), lam,
                         _frac(prof["h"], "profiles[%d].h" % k)))
    n = int(cfg["n"])
    S_size = int(cfg.get("S_size", len(profiles[0][1])))
    eps = _frac(cfg.get("epsilon", "1/2"), "epsilon")
    slack = _frac(cfg.get("slack", 0), "slack")
    d_v = [_frac(c, "d_v") for c in cfg["d_v"]] if "d_v" in cfg else None
    classes, rejected = scattering.scatter_partition(
        profiles, n, eps, S_size, slack=slack, d_v=d_v)
    return _report({"classes": [c.serial() for c in classes],
                    "rejected": rejected, "epsilon": str(eps)},
                   digest, precision, _out(outdir, "scatter.json"))


def cmd_ruvojta(cfg, digest, precision, outdir):
    n = int(cfg.get("n", 1))
    m_max = int(cfg.get("m_max", 10))
    table, gamma, beta_sup = ruvojta.gamma_beta(n, m_max)
    payload = {
        "n": n,
        "gamma": str(gamma),
        "beta_sup": str(beta_sup),
        "ratio_table": {str(m): str(r) for m, r in table.items()},
    }
    if "betas" in cfg and "b" in cfg:
        betas = [_frac(x, "betas") for x in cfg["betas"]]
        tuples = ruvojta.delta_sigma(betas, int(cfg["b"]))
        payload["delta_sigma"] = [[str(a) for a in tup] for tup in tuples]
        if "m" in cfg and "epsilon1" in cfg and "epsilon" in cfg:
            ok, lhs, rhs = ruvojta.feasibility(
                n, int(cfg["m"]), betas, int(cfg["b"]),
                _frac(cfg["epsilon1"], "epsilon1"), _frac(cfg["epsilon"], "epsilon"))
            payload["feasible"] = ok
            payload["feasibility_lhs"] = str(lhs)
            payload["feasibility_rhs"] = str(rhs)
    if "m" in cfg and "sigma" in cfg and "a" in cfg:
        prof = ruvojta.filtration_dims(
            n, int(cfg["m"]), [int(i) for i in cfg["sigma"]],
            [_frac(x, "a") for x in cfg["a"]])
        payload["filtration"] = prof.serial()
    return _report(payload, digest, precision, _out(outdir, "ruvojta.json"))


def cmd_audit(cfg, digest, precision, outdir):
    """Identity and product-formula audits over seeded random samples."""
    seed = int(cfg.get("seed", 0))
    rng = random.Random(seed)
    payload = {"seed": seed}
    fields = [nf_create([int(c) for c in f]) for f in
              cfg.get("fields", [[0, 1], [-2, 0, 1]])]
    n_pf = int(cfg.get("product_formula_samples", 50))
    worst_pf = 0.0
    for field in fields:
        for _ in range(n_pf):
            coeffs = [Fraction(rng.randint(-30, 30), rng.randint(1, 12))
                      for _ in range(field.degree)]
            if not any(coeffs):
                coeffs[0] = Fraction(1)
            try:
                d = product_formula_defect(field, field.element(coeffs))
            except LinscatError:
                continue
            worst_pf = max(worst_pf, d)
    payload["product_formula_max_defect"] = worst_pf

    n_id = int(cfg.get("identity_samples", 40))
    worst_id = 0.0
    for _ in range(n_id):
        field = rng.choice(fields)
        nvars = rng.choice([2, 3])
        spec = None
        while spec is None:
            try:
                cand = []
                for _i in range(nvars):
                    cand.append(LinearForm(field, [
                        field.element([Fraction(rng.randint(-4, 4))
                                       for _ in range(field.degree)])
                        if rng.random() < 0.7 else field.from_rational(rng.randint(-4, 4))
                        for _ in range(nvars)]))
                spec = TwistedHeightSpec(
                    field, [INF], {INF: cand},
                    {INF: _random_zero_row(rng, nvars)},
                    epsilon=Fraction(1, 10),
                    Q=rng.choice([1, 2, 10, 1000]),
                    w_choices={INF: 0})
            except LinscatError:
                spec = None
        for _j in range(5):
            coords = [rng.randint(-500, 500) for _ in range(nvars)]
            if not any(coords):
                coords[0] = 1
            p = ProjectivePoint(coords)
            try:
                rep = log_twisted_report(spec, p, precision)
            except LinscatError:
                continue
            worst_id = max(worst_id, rep["identity_residual"])
    payload["identity_max_residual"] = worst_id
    payload["identity_samples"] = n_id
    return _report(payload, digest, precision, _out(outdir, "audit.json"))


def _random_zero_row(rng, nvars):
    row = [Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(nvars - 1)]
    row.append(-sum(row))
    return row


def _out(outdir, name):
    if not outdir:
        return None
    import os
    os.makedirs(outdir, exist_ok=True)
    return os.path.join(outdir, name)


COMMANDS = {
    "places": cmd_places,
    "height": cmd_height,
    "weil": cmd_weil,
    "twisted": cmd_twisted,
    "sweep": cmd_sweep,
    "solve": cmd_solve,
    "scatter": cmd_scatter,
    "ruvojta": cmd_ruvojta,
    "audit": cmd_audit,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="linscat",
        description="height / Weil-function / twisted-height experiments "
                    "on projective space")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--precision", type=int, default=40,
                        help="working decimal digits (default 40)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel workers (reserved; merge is deterministic)")
    parser.add_argument("--out", default=None, help="report output directory")
    args = parser.parse_args(argv)
    try:
        cfg, digest = _load_config(args.config)
        precision = int(cfg.get("precision", args.precision))
        doc = COMMANDS[args.command](cfg, digest, precision, args.out)
    except LinscatError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    return _exit_code(doc)


if __name__ == "__main__":
    sys.exit(main())
