"""Command-line interface: ``privchan <command> [flags]``.

Exit codes: 0 success, 1 I/O failure, 2 parse error, 3 invalid state,
4 infeasible theta, 5 channel not completely positive (or not a channel).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import apqc, pqc, protocol
from .channels import (
    PauliDiagonal,
    RandomUnitaryChannel,
    UnitalChannel,
)
from .errors import (
    InfeasibleThetaError,
    InvalidDistributionError,
    InvalidRotationError,
    InvalidStateError,
    NotCompletelyPositiveError,
    NotUnitaryError,
)
from .qmath import QubitUnitary

log = logging.getLogger("privchan")

EXIT_IO = 1
EXIT_PARSE = 2
EXIT_STATE = 3
EXIT_THETA = 4
EXIT_CP = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, f"{path}: top level must be an object")
    return doc


def load_states(path: str) -> pqc.PlaintextSet:
    doc = _read_json(path)
    raw = doc.get("states")
    if not isinstance(raw, list) or not raw:
        raise CliError(EXIT_PARSE, f"{path}: 'states' must be a nonempty list")
    try:
        arr = [[float(c) for c in r] for r in raw]
    except (TypeError, ValueError):
        raise CliError(EXIT_PARSE, f"{path}: every state must be a list of numbers") from None
    if any(len(r) != 3 for r in arr):
        raise CliError(EXIT_PARSE, f"{path}: every state must have three components")
    try:
        return pqc.PlaintextSet.from_arrays(arr)
    except InvalidStateError as exc:
        raise CliError(EXIT_STATE, f"{path}: {exc}") from None


def _rotation(doc: dict, key: str, path: str) -> np.ndarray:
    if key not in doc:
        return np.eye(3)
    try:
        r = np.array(doc[key], dtype=float)
    except (TypeError, ValueError):
        raise CliError(EXIT_PARSE, f"{path}: '{key}' must be a 3x3 array") from None
    if r.shape != (3, 3):
        raise CliError(EXIT_PARSE, f"{path}: '{key}' must be a 3x3 array")
    return r


def load_channel(path: str) -> RandomUnitaryChannel:
    """Read a channel file; ``terms`` wins over ``lambdas`` when both are present."""
    doc = _read_json(path)
    try:
        if "terms" in doc:
            terms = []
            for t in doc["terms"]:
                u = np.array([complex(re, im) for re, im in t["u"]]).reshape(2, 2)
                terms.append((float(t["p"]), QubitUnitary(u)))
            return RandomUnitaryChannel(tuple(terms))
        if "lambdas" in doc:
            lam = PauliDiagonal(*[float(v) for v in doc["lambdas"]])
            rl = _rotation(doc, "rot_left", path)
            rr = _rotation(doc, "rot_right", path)
            return UnitalChannel(rl, lam, rr).decomposition()
    except (
        NotCompletelyPositiveError,
        NotUnitaryError,
        InvalidDistributionError,
        InvalidRotationError,
    ) as exc:
        raise CliError(EXIT_CP, f"{path}: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"{path}: malformed channel: {exc}") from None
    raise CliError(EXIT_PARSE, f"{path}: need 'lambdas' or 'terms'")


def channel_to_json(ch: RandomUnitaryChannel, unital: UnitalChannel | None = None) -> dict:
    doc: dict = {}
    if unital is not None:
        doc["lambdas"] = unital.diag.tolist()
        doc["rot_left"] = unital.rot_left.tolist()
        doc["rot_right"] = unital.rot_right.tolist()
    doc["terms"] = [
        {"p": p, "u": [[float(z.real), float(z.imag)] for z in u.m.ravel()]} for p, u in ch.terms
    ]
    return doc


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _open_csv(path: str):
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def _write_csv(path: str, header: list[str], rows) -> None:
    with _open_csv(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def cmd_classify(args) -> int:
    hull = pqc.classify(load_states(args.states), args.tol if args.tol is not None else pqc.TOL_RANK)
    _emit({
        "dim": hull.affine_dim,
        "delta": hull.delta,
        "anchor": hull.anchor.tolist(),
        "basis": [b.tolist() for b in hull.basis],
    })
    return 0


def cmd_optimal(args) -> int:
    hull = pqc.classify(load_states(args.states), args.tol if args.tol is not None else pqc.TOL_RANK)
    theta = hull.delta if args.theta is None else args.theta
    try:
        sol = pqc.optimal_pqc(hull, theta)
    except InfeasibleThetaError as exc:
        raise CliError(EXIT_THETA, str(exc)) from None
    doc = channel_to_json(sol.decomposition, sol.channel)
    doc.update({
        "dim": hull.affine_dim,
        "delta": hull.delta,
        "theta": sol.theta,
        "entropy": sol.key_entropy,
        "ciphertext": sol.ciphertext.tolist(),
    })
    _emit(doc)
    return 0


def cmd_verify(args) -> int:
    ch = load_channel(args.channel)
    states = load_states(args.states)
    tol = args.epsilon if args.epsilon is not None else (args.tol if args.tol is not None else 1e-9)
    res = pqc.verify_pqc(ch, states, tol)
    eps = apqc.epsilon_for_set(ch, states)
    ok = res.ok if args.epsilon is None else eps <= tol
    _emit({
        "ok": bool(ok),
        "ciphertext": res.ciphertext.tolist(),
        "max_deviation": res.max_deviation,
        "epsilon": eps,
    })
    return 0


def cmd_frontier(args) -> int:
    if not 0 < args.step <= 0.02:
        raise CliError(EXIT_PARSE, "--step must lie in (0, 0.02]")
    if args.bin < args.step:
        raise CliError(EXIT_PARSE, "--bin must be at least --step")
    fh = _open_csv(args.out)
    fh.close()
    nbins = int(np.floor(2.0 / args.bin + 1e-9)) + 1
    centers = [min((k + 0.5) * args.bin, 2.0) for k in range(nbins)]
    if not args.brute:
        rows = [(c, float(apqc.analytic_frontier(c))) for c in centers]
        _write_csv(args.out, ["epsilon", "H_analytic"], rows)
        return 0
    curve = apqc.brute_force_frontier(
        args.step,
        args.bin,
        reference=apqc.analytic_frontier,
        workers=args.jobs,
        cp_tol=args.tol if args.tol is not None else 1e-12,
    )
    by_center = dict(zip(curve.centers, curve.points))
    rows = []
    for c in centers:
        pt = by_center.get(c)
        if pt is None:
            rows.append((c, float(apqc.analytic_frontier(c)), None, None, None, None))
        else:
            rows.append((c, float(apqc.analytic_frontier(c)), pt.entropy, *pt.lam.tolist()))
    _write_csv(args.out, ["epsilon", "H_analytic", "H_brute", "lx", "ly", "lz"], rows)
    log.info("minimum margin below the analytic frontier: %.3g", curve.min_margin)
    return 0


def figure_rows(which: int, step: float | None = None):
    """(header, rows) for one of the three trade-off figures."""
    if which == 1:
        n = 100 if step is None else int(round(1.0 / step))
        ts = [k / n for k in range(n + 1)]
        plane = dict(pqc.optimal_entropy_curve("plane", 1.0, ts))
        line = dict(pqc.optimal_entropy_curve("line", 1.0, ts))
        return ["theta_over_delta", "H_line", "H_plane"], [(t, line[t], plane[t]) for t in ts]
    n = 2000 if step is None else int(round(2.0 / step))
    eps = [2.0 * k / n for k in range(n + 1)]
    if which == 2:
        return ["epsilon", "H"], apqc.depolarizing_curve(eps)
    if which == 3:
        return ["epsilon", "H"], [(e, float(apqc.analytic_frontier(e))) for e in eps]
    raise CliError(EXIT_PARSE, f"--which must be 1, 2 or 3, got {which}")


def cmd_figure(args) -> int:
    header, rows = figure_rows(args.which, args.step)
    _write_csv(args.out, header, rows)
    return 0


def cmd_simulate(args) -> int:
    ch = load_channel(args.channel)
    states = load_states(args.states)
    n = len(states.states) if args.n is None else args.n
    if n < 0:
        raise CliError(EXIT_PARSE, "--n must be non-negative")
    msg = protocol.message_from_states(states, n)
    key = protocol.generate_key(ch, n, args.seed)
    report = protocol.audit(msg, ch, key)
    doc = report.to_dict()
    doc["seed"] = key.seed
    _emit(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="privchan", description="Single-qubit private quantum channel toolkit")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="affine hull type and delta of a plaintext set")
    p.add_argument("--states", required=True)
    p.add_argument("--tol", type=float, default=None, help="rank threshold (default 1e-7)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("optimal", help="minimum-entropy PQC for a plaintext set")
    p.add_argument("--states", required=True)
    p.add_argument("--theta", type=float, default=None, help="ciphertext distance from I/2 (default delta)")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("verify", help="check a channel against a plaintext set")
    p.add_argument("--channel", required=True)
    p.add_argument("--states", required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("frontier", help="security/entropy frontier as CSV")
    p.add_argument("--step", type=float, default=0.005)
    p.add_argument("--bin", type=float, default=0.01)
    p.add_argument("--out", required=True)
    p.add_argument("--brute", action="store_true", help="add the exhaustive-search columns")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=None, help="complete-positivity slack on the Pauli weights")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("figure", help="data behind the trade-off plots")
    p.add_argument("--which", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--out", required=True)
    p.add_argument("--step", type=float, default=None, help="grid spacing (default 0.01 for figure 1, 0.001 otherwise)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("simulate", help="encrypt/decrypt a message and audit the eavesdropper view")
    p.add_argument("--channel", required=True)
    p.add_argument("--states", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"privchan: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
