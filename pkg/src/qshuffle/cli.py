"""Command-line driver: every verification as a subcommand with JSON/CSV output.

Exit status is 0 exactly when every check in the run matched.  Set
``QSHUFFLE_WORKERS`` to fan per-weight tasks out to a process pool; results
are merged in a fixed order, so output does not depend on the worker count.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

from . import cartan as ct
from .coeff import DEFAULT_PRECISION
from .current import check_relation_6, check_relation_7, check_relation_rational, fo_graded_rank, fo_word_image
from .currentpair import (loop_words_in_window, residue_pair, serre_orthogonality, tpair,
                          windowed_canonical, windowed_gram, window_basis)
from .pairing import Inconclusive, canonical_tensor, pairing_rank, valuation_of
from .shuffle import graded_rank, linear_image, serre_element, words_of_weight
from .toroidal import a11_defect, jacobi_check, simple_brackets

FINITE = ["A1", "A2", "B2", "G2"]
AFFINE = ["A1^(1)", "A2^(1)"]

DEFAULT_HEIGHT = {"dims": 6, "gram": 5, "fo": 3, "pairing": 3}
DEFAULT_WINDOW = {"fo": (-2, 2), "pairing": (-2, 2), "toroidal": (-3, 3)}


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("QSHUFFLE_WORKERS", "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Sequence) -> list:
    items = list(items)
    n = _workers()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _alpha_str(a) -> str:
    return "(" + ",".join(str(x) for x in a) + ")"


def _weights(c: ct.CartanDatum, H: int):
    return [a for h in range(1, H + 1) for a in ct.weights_of_height(c.n, h)]


# --------------------------------------------------------------------------
# per-task workers (top level so they can be pickled)
# --------------------------------------------------------------------------


def _dims_row(task):
    c, a = task
    r, _ = graded_rank(a, c)
    k = ct.kostant_dim(c, a)
    return {"cartan": str(c), "alpha": _alpha_str(a), "words": len(words_of_weight(a)),
            "rank": r, "kostant": k, "match": r == k}


def _gram_row(task):
    c, a, prec = task
    r = pairing_rank(a, c)
    k = ct.kostant_dim(c, a)
    row = {"cartan": str(c), "alpha": _alpha_str(a), "rank": r, "kostant": k,
           "nondegenerate": r == k}
    try:
        mp = ct.min_parts(c, a)
    except ct.CartanError:
        mp = None
    row["min_parts"] = mp
    if r == k and k > 0:
        try:
            row["valuation"] = valuation_of(canonical_tensor(a, c, prec))
        except Inconclusive:
            row["valuation"] = None
    else:
        row["valuation"] = None
    row["match"] = row["nondegenerate"] and (k == 0 or row["valuation"] == mp)
    return row


def _fo_rank_row(task):
    c, a, d = task
    r = fo_graded_rank(a, d, c)
    e = ct.loop_kostant_dim(c, a, d)
    return {"cartan": str(c), "check": "rank", "alpha": _alpha_str(a), "d": d,
            "rank": r, "expected": e, "match": r == e}


def _factorization_row(task):
    c, a, lo, hi = task
    words = loop_words_in_window(a, lo, hi)
    by_deg: dict[int, list] = {}
    for w in words:
        by_deg.setdefault(sum(k for _, k in w), []).append(w)
    n = bad = 0
    for u in words:
        P = fo_word_image(u, c)
        for w in by_deg.get(-sum(k for _, k in u), []):
            n += 1
            if residue_pair(P, w, c) != tpair(u, w, c):
                bad += 1
    return {"cartan": str(c), "check": "factorization", "alpha": _alpha_str(a),
            "window": f"{lo}:{hi}", "pairs": n, "mismatches": bad, "match": bad == 0}


def _windowed_rows(task):
    c, a, lo, hi = task
    g = windowed_gram(a, lo, hi, c)
    basis = window_basis(a, lo, hi, c)
    rows = []
    for d, (ri, ci) in g.blocks().items():
        from .linalg import Echelon

        cols = [g.cols[b] for b in ci]
        ech = Echelon(cols)
        for ra in ri:
            ech.add({g.cols[b]: g.M[ra][b] for b in ci if not g.M[ra][b].is_zero()})
        expected = len(basis.get(d, []))
        rows.append({"cartan": str(c), "check": "windowed_gram", "alpha": _alpha_str(a),
                     "window": f"{lo}:{hi}", "block_degree": d, "rank": ech.rank,
                     "expected": expected, "match": ech.rank == expected})
    return rows


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_dims(cartans: list[ct.CartanDatum], H: int) -> list[dict]:
    tasks = []
    for c in cartans:
        if not c.finite_type:
            raise ct.CartanError(f"dims needs a finite-type Cartan matrix, got {c}")
        tasks += [(c, a) for a in _weights(c, H)]
    return _pmap(_dims_row, tasks)


def cmd_gram(cartans: list[ct.CartanDatum], H: int, precision: int) -> list[dict]:
    tasks = []
    for c in cartans:
        if not c.finite_type:
            raise ct.CartanError(f"gram needs a finite-type Cartan matrix, got {c}")
        tasks += [(c, a, precision) for a in _weights(c, H)]
    return _pmap(_gram_row, tasks)


def cmd_serre(cartans: list[ct.CartanDatum]) -> list[dict]:
    rows = []
    for c in cartans:
        for i in range(c.n):
            for j in range(c.n):
                if i != j:
                    z = linear_image(serre_element(i, j, c), c).is_zero()
                    rows.append({"cartan": str(c), "check": "serre", "i": i + 1, "j": j + 1,
                                 "match": z})
    return rows


def cmd_fo(cartans: list[ct.CartanDatum], H: int, window: tuple[int, int],
           rational_window: tuple[int, int] = (0, 2), dmax: int = 3) -> list[dict]:
    rows = []
    for c in cartans:
        for i in range(c.n):
            for j in range(c.n):
                for r in check_relation_6(i, j, window, c):
                    rows.append({"cartan": str(c), **r.as_dict(), "match": r.residual_zero})
                if i != j:
                    for r in check_relation_7(i, j, window, c):
                        rows.append({"cartan": str(c), **r.as_dict(), "match": r.residual_zero})
                for r in check_relation_rational(i, j, rational_window, c):
                    rows.append({"cartan": str(c), **r.as_dict(), "match": r.residual_zero})
    tasks = [(c, a, d) for c in cartans if c.finite_type
             for a in _weights(c, H) for d in range(dmax + 1)]
    rows += _pmap(_fo_rank_row, tasks)
    return rows


def cmd_pairing(cartans: list[ct.CartanDatum], H: int, window: tuple[int, int],
                precision: int) -> list[dict]:
    lo, hi = window
    rows = []
    tasks = [(c, a, lo, hi) for c in cartans for a in _weights(c, H)]
    rows += _pmap(_factorization_row, tasks)
    for c in cartans:
        for i in range(c.n):
            for j in range(c.n):
                if i != j:
                    rep = serre_orthogonality(i, j, (max(lo, -1), min(hi, 1)), c)
                    rows.append({"cartan": str(c), "check": "serre_orthogonality",
                                 "i": i + 1, "j": j + 1, "pairs": rep.checked,
                                 "mismatches": len(rep.witnesses), "match": rep.ok})
    gram_tasks = [(c, a, lo, hi) for c in cartans if c.finite_type
                  for a in _weights(c, min(H, 2))]
    for part in _pmap(_windowed_rows, gram_tasks):
        rows += part
    for c in cartans:
        if c.n == 1 and c.finite_type:
            P = windowed_canonical((1,), lo, hi, c, precision)
            expect = {(((0, k),), ((0, -k),)) for k in range(lo, hi + 1)}
            got = {(u, w) for u, w, s in P.terms}
            shape = got == expect and all(
                s.order == 1 and s.coeffs[0] == 1 and not any(s.coeffs[1:]) for _, _, s in P.terms)
            rows.append({"cartan": str(c), "check": "windowed_canonical", "alpha": "(1)",
                         "window": f"{lo}:{hi}", "terms": len(P.terms), "match": shape})
    return rows


def cmd_toroidal(window: tuple[int, int], trials: int, seed: int) -> list[dict]:
    from .toroidal import central_elem

    lo, hi = window
    rows = []
    for l in range(lo, hi + 1):
        for m in range(lo, hi + 1):
            d = a11_defect(l, m)
            ok = d == central_elem(2, 1, l + m + 1)
            rows.append({"cartan": "A1^(1)", "check": "defect", "l": l, "m": m,
                         "value": str(d), "match": ok})
    rep = simple_brackets("A2^(1)", window)
    rows.append({"cartan": "A2^(1)", "check": "simple_brackets",
                 "central_terms": len(rep.central_hits), "match": rep.ok})
    for name, size in (("A1^(1)", 2), ("A2^(1)", 3)):
        j = jacobi_check(trials, seed, size=size)
        rows.append({"cartan": name, "check": "jacobi", "trials": trials, "seed": seed,
                     "failures": len(j.failures), "match": j.ok})
    return rows


# --------------------------------------------------------------------------
# argument handling and output
# --------------------------------------------------------------------------


def _window(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        a, b = int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"window must look like a:b, got {text!r}") from exc
    if a > b:
        raise argparse.ArgumentTypeError("window needs a <= b")
    return a, b


def _cartan_arg(text: str) -> ct.CartanDatum:
    if os.path.isfile(text):
        with open(text) as fh:
            return ct.validate(json.load(fh), os.path.basename(text))
    try:
        return ct.load(text)
    except ct.CartanError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qshuffle", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cartan", type=_cartan_arg, action="append",
                        help="preset name or JSON matrix/file; repeatable")
    common.add_argument("--height", type=int, help="height cap H (>= 0)")
    common.add_argument("--window", type=_window, help="mode window a:b")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="hbar terms (>= 2)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=1000, help="Jacobi fuzz triples")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="output file (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in [("dims", "PBW ranks of the shuffle image vs Kostant counts"),
                      ("gram", "pairing nondegeneracy and canonical-tensor valuations"),
                      ("fo", "current-algebra relations and graded ranks"),
                      ("pairing", "residue pairing checks"),
                      ("toroidal", "toroidal bracket checks"),
                      ("verify-all", "every check with default settings")]:
        sub.add_parser(name, parents=[common], help=hlp)
    return p


def _render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1, sort_keys=True, default=str) + "\n"
    keys: list[str] = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def run(args) -> list[dict]:
    cmd = args.command
    H = args.height if args.height is not None else DEFAULT_HEIGHT.get(cmd, 5)
    window = args.window or DEFAULT_WINDOW.get(cmd, (-2, 2))
    if cmd == "dims":
        return cmd_dims(args.cartan or [ct.preset("A2")], H)
    if cmd == "gram":
        return cmd_gram(args.cartan or [ct.preset("A2")], H, args.precision)
    if cmd == "fo":
        return cmd_fo(args.cartan or [ct.preset("A1")], H, window)
    if cmd == "pairing":
        return cmd_pairing(args.cartan or [ct.preset("A1")], H, window, args.precision)
    if cmd == "toroidal":
        return cmd_toroidal(window, args.trials, args.seed)
    if cmd == "verify-all":
        return verify_all(args)
    raise ValueError(f"unknown command {cmd}")


def verify_all(args) -> list[dict]:
    finite = [ct.preset(n) for n in FINITE]
    low = [ct.preset("A1"), ct.preset("A2")]
    H = args.height
    out = []
    sections = [
        ("dims", lambda: cmd_dims(finite, 6 if H is None else H)),
        ("serre", lambda: cmd_serre(finite + [ct.preset(n) for n in AFFINE])),
        ("gram", lambda: cmd_gram(finite, 5 if H is None else H, args.precision)),
        ("fo", lambda: cmd_fo(low, 3, args.window or (-2, 2))),
        ("pairing", lambda: cmd_pairing(low, 3, args.window or (-2, 2), args.precision)),
        ("toroidal", lambda: cmd_toroidal((-3, 3), args.trials, args.seed)),
    ]
    for name, fn in sections:
        for row in fn():
            out.append({"command": name, **row})
    return out


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.height is not None and args.height < 0:
        parser.error("--height must be >= 0")
    if args.precision < 2:
        parser.error("--precision must be >= 2")
    if args.trials < 0:
        parser.error("--trials must be >= 0")
    try:
        rows = run(args)
    except ct.CartanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(rows, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.get("match", True) for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
