"""Command-line driver: build states, run analyses, emit machine-readable reports.

Subcommands
-----------
enumerate   list coverings of a family (all | nn | pnn) as covering-set JSON
state       build a state and emit its polynomial JSON
analyze     decide genuine entanglement of a built state; verdict JSON
ggm         geometric entanglement of a built state; report JSON
sweep       grid of (nu, gamma) runs; CSV table

Exit codes: 0 genuinely entangled (or, with --cut, not a product there),
10 product in some cut, 2 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import List, Optional, Tuple

from . import coverings as cov
from . import entanglement_analysis as ana
from . import oracle as orc
from . import rvb_states as rvb
from .bitsets import mask_from_sites, sites_from_mask
from .exceptions import RvbPolyError, TooSmall
from .multilinear_poly import Cut, MultilinearPoly, to_json_dict
from .rvb_states import RvbBuild

EXIT_GENUINE = 0
EXIT_PRODUCT = 10
EXIT_ERROR = 2

GGM_MAX_SITES = 16


def _default_threads() -> int:
    env = os.environ.get("RVB_POLY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# state construction from CLI arguments
# ---------------------------------------------------------------------------


def _load_covering_set(args) -> Tuple[cov.CoveringSet, dict]:
    if args.file:
        with open(args.file) as fh:
            psi = cov.from_json_dict(json.load(fh))
        spec = {"set": "file", "path": args.file, "nu": psi.nu}
    else:
        if args.nu is None:
            raise RvbPolyError("--nu is required when --set is used")
        kind = args.set or "nn"
        families = {
            "all": cov.enumerate_all,
            "nn": cov.enumerate_nn,
            "pnn": cov.enumerate_pnn,
        }
        if kind not in families:
            raise RvbPolyError(f"unknown covering family {kind!r}")
        psi = cov.covering_set(families[kind](args.nu))
        spec = {"set": kind, "nu": args.nu}
    if getattr(args, "weights", None):
        with open(args.weights) as fh:
            entries = json.load(fh)
        weights = []
        for a, b in entries:
            if isinstance(a, int) and isinstance(b, int):
                weights.append(Fraction(a, b))
            else:
                weights.append(complex(float(a), float(b)))
        psi = psi.with_weights(weights)
        spec["weights"] = args.weights
    gamma = getattr(args, "gamma", 0) or 0
    spec["gamma"] = gamma
    return psi, spec


def _state_from_args(args) -> Tuple[MultilinearPoly, RvbBuild, dict]:
    psi, spec = _load_covering_set(args)
    build = RvbBuild(psi, spec["gamma"])
    return rvb.build_state(build), build, spec


def _parse_cut(text: str, n: int) -> Cut:
    sites = [int(s) for s in text.replace(" ", "").split(",") if s]
    return Cut(n, mask_from_sites(sites))


def _cut_json(cut: Cut) -> dict:
    return {"mask": cut.mask_E, "sites_E": sites_from_mask(cut.mask_E)}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_enumerate(args) -> Tuple[dict, int]:
    families = {"all": cov.enumerate_all, "nn": cov.enumerate_nn, "pnn": cov.enumerate_pnn}
    if args.kind not in families:
        raise RvbPolyError(f"unknown covering family {args.kind!r}")
    covs = families[args.kind](args.nu)
    payload = cov.to_json_dict(cov.covering_set(covs))
    payload["count"] = len(covs)
    payload["kind"] = args.kind
    return payload, EXIT_GENUINE


def cmd_state(args) -> Tuple[dict, int]:
    state, _, spec = _state_from_args(args)
    payload = to_json_dict(state)
    payload["state_spec"] = spec
    return payload, EXIT_GENUINE


def _diagnostics(psi: cov.CoveringSet, tol: float) -> dict:
    out: dict = {"decomposable_cuts": [], "classifications": {}, "criss_cross": []}
    try:
        cuts = cov.decomposable_cuts(psi)
    except TooSmall:
        return out
    for cut in cuts:
        out["decomposable_cuts"].append(_cut_json(cut))
        shapes = sorted(cov.classify(psi, cut))
        out["classifications"][str(cut.mask_E)] = shapes
        if not set(shapes) & {cov.GridShape.FLAT, cov.GridShape.POLE}:
            res = ana.criss_cross_check(psi, cut)
            entry = {"cut": _cut_json(cut), "satisfied": res.satisfied}
            if not res.satisfied:
                w = res.witnesses[-1]
                entry["violation"] = {
                    "A1": sites_from_mask(w.a1), "B1": sites_from_mask(w.b1),
                    "A2": sites_from_mask(w.a2), "B2": sites_from_mask(w.b2),
                    "u": w.u, "v": w.v, "w": w.w, "z": w.z,
                }
            out["criss_cross"].append(entry)
    return out


def cmd_analyze(args) -> Tuple[dict, int]:
    state, build, spec = _state_from_args(args)
    psi = build.psi_set
    tol = args.tol
    payload: dict = {"state_spec": spec}

    if state.is_zero:
        payload["zero_state"] = True
        payload["genuinely_entangled"] = False
        return payload, EXIT_PRODUCT

    if args.cut:
        cut = _parse_cut(args.cut, state.n)
        verdict = ana.product_in_cut_rvb(state, cut, tol)
        payload["cut"] = _cut_json(cut)
        payload["product_in_cut"] = verdict.is_product
        payload["reason"] = verdict.reason
        code = EXIT_PRODUCT if verdict.is_product else EXIT_GENUINE
    else:
        verdict = ana.genuine_entanglement_rvb(
            state, psi_set=psi if psi.uniform else None, gamma=build.gamma, tol=tol
        )
        payload["genuinely_entangled"] = verdict.genuinely_entangled
        witness: dict = {}
        if verdict.missing_sites:
            witness["missing_vars"] = sites_from_mask(verdict.missing_sites)
        if verdict.witness_cut is not None:
            witness["cut"] = _cut_json(verdict.witness_cut)
        if verdict.factors is not None:
            witness["factors"] = [to_json_dict(f) for f in verdict.factors]
        if witness:
            payload["witness"] = witness
        code = EXIT_GENUINE if verdict.genuinely_entangled else EXIT_PRODUCT

    payload["diagnostics"] = _diagnostics(psi, tol)

    if args.ggm:
        if state.n > GGM_MAX_SITES:
            raise RvbPolyError(f"ggm capped at {GGM_MAX_SITES} sites")
        rep = ana.ggm(state, threads=args.threads)
        payload["ggm"] = {"value": rep.value, "argmax_cut": _cut_json(rep.argmax_cut)}

    if args.oracle:
        dense = orc.to_dense(state)
        if args.cut:
            cut = _parse_cut(args.cut, state.n)
            oracle_product = orc.product_in_cut_oracle(dense, cut, tol=tol)
            agrees = oracle_product == payload["product_in_cut"]
            payload["oracle"] = {"product_in_cut": oracle_product, "agrees": agrees}
        else:
            ok, wit = orc.is_genuinely_entangled_oracle(dense, tol=tol)
            agrees = ok == payload["genuinely_entangled"]
            payload["oracle"] = {"genuinely_entangled": ok, "agrees": agrees}
            if wit is not None:
                payload["oracle"]["witness_cut"] = _cut_json(wit)
        if not agrees:
            raise RvbPolyError("oracle disagrees with the symbolic verdict")
    return payload, code


def cmd_ggm(args) -> Tuple[dict, int]:
    state, build, spec = _state_from_args(args)
    if state.is_zero:
        raise RvbPolyError("state is the zero vector")
    if state.n > GGM_MAX_SITES:
        raise RvbPolyError(f"ggm capped at {GGM_MAX_SITES} sites")
    rep = ana.ggm(state, threads=args.threads)
    payload = {
        "state_spec": spec,
        "ggm": {"value": rep.value, "argmax_cut": _cut_json(rep.argmax_cut)},
    }
    if args.oracle:
        dense = orc.to_dense(state)
        oracle_val = orc.ggm_oracle(dense, threads=args.threads)
        payload["oracle"] = {"value": oracle_val, "agrees": abs(oracle_val - rep.value) < 1e-9}
        if not payload["oracle"]["agrees"]:
            raise RvbPolyError("oracle GGM disagrees beyond 1e-9")
    return payload, EXIT_GENUINE


def _parse_range(text: str) -> List[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def cmd_sweep(args) -> Tuple[str, int]:
    kinds = {"all": cov.enumerate_all, "nn": cov.enumerate_nn, "pnn": cov.enumerate_pnn}
    kind = args.set or "nn"
    if kind not in kinds:
        raise RvbPolyError(f"unknown covering family {kind!r}")
    rows = []
    for nu in _parse_range(args.nu):
        for gamma in _parse_range(args.gamma or "0"):
            if gamma >= nu:
                continue
            started = time.perf_counter()
            psi = cov.covering_set(kinds[kind](nu))
            build = RvbBuild(psi, gamma)
            state = rvb.build_state(build)
            verdict = ana.genuine_entanglement_rvb(state, psi, gamma, args.tol)
            if state.n <= GGM_MAX_SITES:
                rep = ana.ggm(state, threads=args.threads)
                gval, gcut = f"{rep.value:.12g}", rep.argmax_cut.mask_E
            else:
                gval, gcut = "", ""
            ms = int((time.perf_counter() - started) * 1000)
            rows.append(
                [nu, gamma, kind, 2 * nu, str(verdict.genuinely_entangled).lower(), gval, gcut, ms]
            )
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["nu", "gamma", "set_kind", "n", "genuinely_entangled", "ggm", "argmax_cut_mask", "runtime_ms"]
    )
    writer.writerows(rows)
    return buf.getvalue(), EXIT_GENUINE


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------


def _add_state_flags(p: argparse.ArgumentParser, nu_type=int) -> None:
    p.add_argument("--set", choices=["all", "nn", "pnn"], help="covering family")
    p.add_argument("--nu", type=nu_type, help="rungs (half the site count)")
    p.add_argument(
        "--gamma", type=nu_type, default=nu_type(0), help="hole pairs (default 0)"
    )
    p.add_argument("--weights", help="JSON file with per-covering weights")
    p.add_argument("--file", help="covering-set JSON file instead of --set")
    p.add_argument("--tol", type=float, default=1e-9, help="numerical rank tolerance")
    p.add_argument("--threads", type=int, default=_default_threads(), help="cut-scan parallelism")
    p.add_argument("--oracle", action="store_true", help="cross-validate against the dense SVD oracle")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], help="output format")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rvbpoly", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="list a covering family")
    p_enum.add_argument("kind", choices=["all", "nn", "pnn"])
    p_enum.add_argument("nu", type=int)
    p_enum.add_argument("--out")
    p_enum.add_argument("--format", choices=["json", "csv"], default="json")

    p_state = sub.add_parser("state", help="emit a built state's polynomial JSON")
    _add_state_flags(p_state)

    p_an = sub.add_parser("analyze", help="decide genuine entanglement")
    _add_state_flags(p_an)
    p_an.add_argument("--cut", help="test only this cut (comma-separated sites of E)")
    p_an.add_argument("--ggm", action="store_true", help="include the entanglement measure")

    p_ggm = sub.add_parser("ggm", help="geometric entanglement measure")
    _add_state_flags(p_ggm)

    p_sw = sub.add_parser("sweep", help="CSV over a (nu, gamma) grid")
    _add_state_flags(p_sw, nu_type=str)
    return ap


def _emit(payload, out: Optional[str]) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        fmt = getattr(args, "format", None)
        if fmt == "csv" and args.command != "sweep":
            raise RvbPolyError(f"{args.command} emits JSON only")
        if fmt == "json" and args.command == "sweep":
            raise RvbPolyError("sweep emits CSV only")
        if args.command == "enumerate":
            payload, code = cmd_enumerate(args)
        elif args.command == "state":
            payload, code = cmd_state(args)
        elif args.command == "analyze":
            payload, code = cmd_analyze(args)
        elif args.command == "ggm":
            payload, code = cmd_ggm(args)
        elif args.command == "sweep":
            if args.nu is None:
                raise RvbPolyError("sweep requires --nu (a value or a lo..hi range)")
            payload, code = cmd_sweep(args)
        else:  # pragma: no cover
            raise RvbPolyError(f"unknown command {args.command}")
    except (RvbPolyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(payload, args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
