"""Command-line entry point.

Exit codes: 0 success, 1 an exact identity failed, 2 bad arguments,
3 the tuple or system violates a hypothesis of the requested operation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import gaussborel as gb
from . import jacobi as jc
from . import markov as mk
from . import padesummations as ps
from . import transforms as tf
from .checks import CheckResult
from .exactnum import fmt_rational
from .hyperfun import HyperTuple, ParameterError, PoleError, uniform_weight_closed_form
from .sim import NotSimulableError, SimConfig, simulate

SCHEMA = "mopsrw/1"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_HYPOTHESIS = 0, 1, 2, 3

HYPOTHESIS_ERRORS = (ParameterError, PoleError, gb.NotPerfectError, mk.AssumptionError,
                     mk.WindowError, NotSimulableError)


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ output

def jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return fmt_rational(v)
    if isinstance(v, float):
        return v
    if isinstance(v, HyperTuple):
        return str(v)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, CheckResult):
        return {"name": v.name, "ok": v.ok, "cases": v.cases, "counterexample": jsonable(v.counterexample)}
    return str(v)


def dumps(payload: dict) -> str:
    return json.dumps(jsonable({"schema": SCHEMA, **payload}), sort_keys=True, indent=2)


def _text(v) -> str:
    v = jsonable(v)
    if isinstance(v, list):
        return ", ".join(_text(x) if not isinstance(x, list) else "[" + _text(x) + "]" for x in v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text(x)}" for k, x in sorted(v.items())) + "}"
    return str(v)


def render(payload: dict, fmt: str, rows=None, header=None) -> str:
    if fmt == "json":
        return dumps(payload)
    if fmt == "csv":
        if rows is None:
            raise UsageError("csv output is not available for this command")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([jsonable(x) for x in r])
        return buf.getvalue().rstrip("\n")
    return "\n".join(f"{k}: {_text(payload[k])}" for k in sorted(payload))


def _dense(P, N=None):
    N = N or P.N
    return [[P[i, j] for j in range(N)] for i in range(N)]


def _balance(b):
    return b if isinstance(b, str) else {"kind": b[0], "amount": b[1]}


# ---------------------------------------------------------------- commands

def cmd_jacobi(a):
    bands = jc.band_coefficients(a.tuple, a.n)
    payload = {
        "tuple": a.tuple,
        "beta": bands.beta[: a.n],
        "alpha": bands.alpha[1: a.n + 1],
        "gamma": bands.gamma[1: a.n + 1],
        "almost_uniform": jc.is_almost_uniform(bands, a.n),
        "nonnegative_region": jc.nonnegativity_region(a.tuple),
    }
    rows = [(n, bands.beta[n], bands.alpha[n + 1], bands.gamma[n + 1]) for n in range(a.n)]
    return render(payload, a.format, rows, ("n", "beta", "alpha", "gamma")), EXIT_OK


def _system(a, N):
    if getattr(a, "uniform_sigma", False):
        P1, P2 = mk.semi_stochastic_uniform(a.tuple, N)
        return P1 if a.type == "I" else P2
    return mk.stochastic_system(a.tuple, a.type, N)


def cmd_stochastic(a):
    s = _system(a, a.n)
    payload = {
        "tuple": a.tuple, "type": a.type, "sigma": s.sigma[: s.N], "P": _dense(s.P),
        "rowBalance": [_balance(mk.classify_row(s.P.row_sum(i))) for i in s.interior_rows()],
    }
    return render(payload, a.format), EXIT_OK


def cmd_factorize(a):
    if a.gauss_borel:
        mt = gb.moments(a.tuple)
        f = gb.factorize(mt, a.n)
        return render({"tuple": a.tuple, **gb.to_json(f, gb.extract_sequences(f))}, a.format), EXIT_OK
    fac = mk.stochastic_lu(a.tuple, a.type, a.n)
    payload = {"tuple": a.tuple, "type": a.type,
               "factors": {name: _dense(F, a.n) for name, F in zip(fac.names, fac.factors)}}
    return render(payload, a.format), EXIT_OK


def cmd_kmcg(a):
    N = a.n + 3 * a.r + 2  # reachable m <= n + 2r, plus the r-step window
    s = mk.stochastic_system(a.tuple, a.type, N)
    ms = [a.m] if a.m is not None else sorted(mk.transition_table(s, a.n, a.r))
    table, ok = [], True
    for m in ms:
        k = mk.kmcg_transition(a.tuple, a.n, m, a.r, a.type)
        p = mk.matrix_power_transition(s, a.n, m, a.r)
        ok &= k == p
        table.append({"m": m, "kmcg": k, "power": p, "difference": k - p})
    payload = {"tuple": a.tuple, "type": a.type, "n": a.n, "r": a.r, "table": table, "agree": ok}
    rows = [(t["m"], t["kmcg"], t["power"]) for t in table]
    return render(payload, a.format, rows, ("m", "kmcg", "power")), EXIT_OK if ok else EXIT_FAIL


def cmd_series(a):
    s = mk.stochastic_system(a.tuple, a.type, max(a.n, a.m) + a.R + 3)
    ser = mk.generating_series(s, a.n, a.m, a.R)
    payload = {"tuple": a.tuple, "type": a.type, "n": a.n, "m": a.m,
               "series": {"P": ser.P, "F": ser.F}}
    return render(payload, a.format), EXIT_OK


def cmd_classify(a):
    label = mk.classify(a.tuple)
    if a.format == "text":
        return f"{label} (delta={fmt_rational(a.tuple.delta)})", EXIT_OK
    return render({"tuple": a.tuple, "class": label, "delta": a.tuple.delta}, a.format), EXIT_OK


def cmd_steady(a):
    uv = mk.UnityValues.for_tuple(a.tuple, a.n + 3)
    s = mk.stochastic_normalize(jc.band_coefficients(a.tuple, a.n + 3), uv, a.type, a.n)
    res = mk.steady_vector_check(uv, s)
    payload = {"tuple": a.tuple, "type": a.type, "pi": mk.steady_vector(uv, a.n),
               "partial_sums": mk.steady_partial_sums(uv, a.n), "check": res}
    return render(payload, a.format), EXIT_OK if res else EXIT_FAIL


def cmd_uniform(a):
    if a.action == "list":
        ents = jc.uniform_tuples()
        payload = {"tuples": [{"tuple": e.tuple, "family": e.family, "partner": e.partner} for e in ents]}
        rows = [(str(e.tuple), e.family, str(e.partner)) for e in ents]
        return render(payload, a.format, rows, ("tuple", "family", "partner")), EXIT_OK
    if a.tuple is None:
        raise UsageError(f"uniform {a.action} needs --tuple")
    if not jc.in_registry(a.tuple):
        raise ParameterError(f"{a.tuple} is not one of the twelve uniform tuples")
    if a.action == "weights":
        xs = [(k + 1) / (a.points + 1) for k in range(a.points)]
        rows = [(x, uniform_weight_closed_form(a.tuple, "W1", x), uniform_weight_closed_form(a.tuple, "W2", x))
                for x in xs]
        payload = {"tuple": a.tuple, "x": xs, "W1": [r[1] for r in rows], "W2": [r[2] for r in rows]}
        return render(payload, a.format, rows, ("x", "W1", "W2")), EXIT_OK
    if a.action == "typeI":
        A1, A2 = tf.uniform_typeI(a.tuple, a.n)
        return render({"tuple": a.tuple, "A1": A1, "A2": A2}, a.format), EXIT_OK
    closed = tf.b_at_unity_closed_forms(a.tuple, a.n)
    rec = mk.b_at_unity_recurrence(jc.band_coefficients(a.tuple, a.n), a.n)
    ok = closed == rec[: a.n]
    payload = {"tuple": a.tuple, "B_at_1": closed, "agrees_with_recurrence": ok}
    rows = list(enumerate(closed))
    return render(payload, a.format, rows, ("n", "B_at_1")), EXIT_OK if ok else EXIT_FAIL


def cmd_christoffel(a):
    steps = tf.CHAINS[a.chain]
    checks = [tf.christoffel_step_check(st, a.n) for st in steps]
    closure = tf.chain_closure_check(a.chain, a.n)
    payload = {
        "chain": a.chain,
        "steps": [{"name": st.name, "source": st.source, "target": st.target, "scales": st.scales,
                   "ok": r.ok, "counterexample": r.counterexample} for st, r in zip(steps, checks)],
        "closure": closure,
    }
    ok = all(checks) and bool(closure)
    return render(payload, a.format), EXIT_OK if ok else EXIT_FAIL


def cmd_moments(a):
    if not a.generalized:
        mt = gb.moments(a.tuple)
        rho1, rho2 = mt.table(a.n + 1)
        rows = [(k, rho1[k], rho2[k]) for k in range(a.n + 1)]
        return render({"tuple": a.tuple, "rho1": rho1, "rho2": rho2}, a.format, rows,
                      ("n", "rho1", "rho2")), EXIT_OK
    d = ps.eta_direct(a.tuple, a.n, a.m, a.weight)
    kp = ps.eta_karp_prilepkina(a.tuple, a.n, a.m, a.weight)
    payload = {"tuple": a.tuple, "n": a.n, "m": a.m, "weight": a.weight,
               "direct": d, "theta_sum": kp, "difference": d - kp}
    return render(payload, a.format), EXIT_OK if d == kp else EXIT_FAIL


def cmd_simulate(a):
    N = a.start + 2 * a.steps + 3
    cfg = SimConfig(_system(a, N), a.start, a.steps, a.samples, a.seed)
    rep = simulate(cfg)
    payload = {
        "tuple": a.tuple, "type": a.type, "start": a.start, "steps": a.steps,
        "samples": a.samples, "seed": a.seed, "counts": rep.counts, "exact": rep.exact,
        "destroyed": rep.destroyed, "exact_destroyed": rep.exact_destroyed,
        "zscores": {m: rep.zscores[m] for m in sorted(rep.zscores)},
        "within_4sigma": rep.within(4.0),
    }
    rows = [(m, rep.counts.get(m, 0), float(rep.exact.get(m, 0)), rep.zscores[m]) for m in sorted(rep.zscores)]
    return render(payload, a.format, rows, ("m", "count", "exact", "z")), EXIT_OK


# ------------------------------------------------------------------ verify

VERIFY_TUPLES = ("4/3,5/3,2,5/2", "1/3,2/3,1/2,1", "1,2,3,7/2")
ETA_TUPLE = "1,3/2,5/2,3"


def _suite_summations(n):
    return [tf.summation_formulas_check(max(n, 1)), *(_b_unity(e.tuple, n) for e in jc.uniform_tuples())]


def _b_unity(t, n):
    res = CheckResult(f"B(1) closed form {t}")
    rec = mk.b_at_unity_recurrence(jc.band_coefficients(t, n + 1), n + 1)
    for k, v in enumerate(tf.b_at_unity_closed_forms(t, n + 1)):
        res.record(v == rec[k], {"n": k})
    return res


def _suite_contiguous(n):
    return [tf.contiguous_relations_check(n)]


def _suite_gauge(n):
    out = []
    for t in tf.GAUGE_TABLE:
        out.append(tf.gauge_invariance_check(t, n))
        g = tf.gauge_solve(t, N=n)
        r = CheckResult(f"gauge coefficients {t}")
        r.record((g.alpha, g.beta) == tf.GAUGE_TABLE[t], {"solved": (g.alpha, g.beta)})
        out.append(r)
    return out


def _suite_core(n):
    out = []
    for s in VERIFY_TUPLES:
        t = HyperTuple.parse(s)
        mt, _, seqs = gb.sequences_for(t, n + 1)
        out.append(gb.biorthogonality_check(seqs, mt, n + 1))
        r = CheckResult(f"H and B closed forms {t}")
        f = gb.factorize(mt, n + 1)
        for k in range(n + 1):
            r.record(f.H[k] == gb.H_closed_form(t, k), {"H": k})
            r.record(seqs.B[k] == gb.B_explicit(t, k), {"B": k})
        out.append(r)
        out.append(jc.recurrence_check(seqs, jc.band_coefficients(t, n + 1), n))
        out.append(mk.cd_identity_check(t, min(n, 6)))
        for kind in ("I", "II"):
            s_ = mk.stochastic_system(t, kind, 2 * n + 4)
            r = CheckResult(f"Karlin-McGregor {t} {kind}")
            for rr in range(min(n, 4) + 1):
                for m in mk.transition_table(s_, 2, rr):
                    if m <= n:
                        r.record(mk.kmcg_transition(t, 2, m, rr, kind) == mk.matrix_power_transition(s_, 2, m, rr),
                                 {"m": m, "r": rr})
            out.append(r)
    for e in jc.uniform_tuples():
        out.append(tf.uniform_typeI_check(e.tuple, n))
    r = CheckResult("e_n routes")
    en = tf.en_polynomials(n + 1)
    for k in range(n + 1):
        r.record(en[k] == tf.en_trinomial(k) == tf.en_diophantine(k), {"n": k})
    out.append(r)
    return out


def _suite_christoffel(n):
    out = [tf.christoffel_step_check(st, n, min(n, 10)) for st in tf.all_steps()]
    return out + [tf.chain_closure_check(c, n) for c in tf.CHAINS]


def _suite_eta(n):
    return [ps.eta_dual_route_check(HyperTuple.parse(ETA_TUPLE), nmax=min(n, 5) // 2 + 1, mmax=2)]


SUITES = {
    "summations": [_suite_summations],
    "contiguous": [_suite_contiguous],
    "gauge": [_suite_gauge],
    "all": [_suite_core, _suite_summations, _suite_contiguous, _suite_gauge, _suite_christoffel, _suite_eta],
}


def cmd_verify(a):
    results = []
    for suite in SUITES[a.suite]:
        results.extend(suite(a.n))
    failed = next((r for r in results if not r.ok), None)
    if a.format == "json":
        out = dumps({"suite": a.suite, "n": a.n, "ok": failed is None, "checks": results})
    else:
        lines = [f"{'PASS' if r.ok else 'FAIL'} {r.name} ({r.cases} cases)" for r in results]
        if failed is not None:
            lines.append(f"first counterexample [{failed.name}]: {_text(failed.counterexample)}")
        out = "\n".join(lines)
    return out, EXIT_OK if failed is None else EXIT_FAIL


def cmd_ratio(a):
    if a.format == "csv":
        q = mk.q_at_unity(a.tuple, a.n + 2)
        B = mk.b_at_unity_recurrence(jc.band_coefficients(a.tuple, a.n + 2), a.n + 2)
        rows = [(k, float(q[k + 1] / q[k]), float(B[k + 1] / B[k])) for k in range(a.n + 1)]
        return render({}, "csv", rows, ("n", "q_ratio", "B_ratio")), EXIT_OK
    rep = mk.ratio_convergence(a.tuple, a.n, a.x)
    return render({"tuple": a.tuple, **rep}, a.format), EXIT_OK


# ------------------------------------------------------------------ parser

def _tuple_arg(s: str) -> HyperTuple:
    try:
        return HyperTuple.parse(s)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mopsrw", description=__doc__.splitlines()[0])
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, tuple_required=True, fmt=("text", "json", "csv"), n=None, kind=False):
        sp = sub.add_parser(name)
        sp.set_defaults(func=fn)
        sp.add_argument("--tuple", type=_tuple_arg, required=tuple_required)
        sp.add_argument("--format", choices=fmt, default="text")
        if n is not None:
            sp.add_argument("--n", type=int, default=n)
        if kind:
            sp.add_argument("--type", choices=("I", "II"), default="II")
        return sp

    add("jacobi", cmd_jacobi, n=10)
    sp = add("stochastic", cmd_stochastic, n=10, kind=True)
    sp.add_argument("--uniform-sigma", action="store_true", help="semi-stochastic uniform normalization")
    sp = add("factorize", cmd_factorize, n=8, kind=True)
    sp.add_argument("--gauss-borel", action="store_true", help="emit the moment-matrix factorization")
    sp = add("kmcg", cmd_kmcg, n=2, kind=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--r", type=int, default=4)
    sp = add("series", cmd_series, n=0, kind=True)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--R", type=int, default=8)
    add("classify", cmd_classify)
    add("steady", cmd_steady, n=20, kind=True)
    sp = add("uniform", cmd_uniform, tuple_required=False, n=10)
    sp.add_argument("action", choices=("list", "weights", "typeI", "batunity"))
    sp.add_argument("--points", type=int, default=20)
    sp = add("christoffel", cmd_christoffel, tuple_required=False, n=20)
    sp.add_argument("--chain", choices=tuple(tf.CHAINS), required=True)
    sp = add("moments", cmd_moments, n=4)
    sp.add_argument("--generalized", action="store_true")
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--weight", type=int, choices=(1, 2), default=1)
    sp = add("simulate", cmd_simulate, kind=True)
    sp.add_argument("--uniform-sigma", action="store_true")
    sp.add_argument("--start", type=int, default=0)
    sp.add_argument("--steps", type=int, default=6)
    sp.add_argument("--samples", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("verify", cmd_verify, tuple_required=False, fmt=("text", "json"), n=10)
    sp.add_argument("suite", choices=tuple(SUITES))
    sp = add("ratio", cmd_ratio, n=100)
    sp.add_argument("--x", type=float)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        for name in ("n", "m", "r", "R", "steps", "samples", "start", "points"):
            v = getattr(args, name, None)
            if v is not None and v < 0:
                raise UsageError(f"--{name} must be nonnegative")
        text, code = args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    except HYPOTHESIS_ERRORS as e:
        print(f"hypothesis violated: {e}", file=stderr)
        return EXIT_HYPOTHESIS
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    return code


def main():
    sys.exit(run())
