"""Command line front end.

Exit status: 0 when every check passes, 1 when a verification fails,
2 on malformed input or a structural precondition (no central candidate,
invalid model, bad flags).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .dimer import (
    DimerModel,
    DimerStructureError,
    check_consistency,
    compute_faces,
    quiver_of,
    validate_dimer,
    zigzag_paths,
)
from .exceptional import (
    NonInteriorMatchingError,
    build_collection,
    cross_check_endomorphism_algebra,
    fullness_rank_check,
    verify_strong_exceptional,
)
from .figures import emit_figures, write_figures
from .io import FIXTURES, DimerParseError, load_dimer, load_fixture
from .matchings import (
    BoundaryMultiplicityError,
    DegeneratePolygonError,
    NoCentralCandidateError,
    NoMatchingError,
    characteristic_polygon,
    classify_matchings,
    enumerate_matchings,
)
from .paths import InfiniteDimensionError
from .superpotential import a0_dim_truncated, curved_diagram, small_cycle, superpotential_centrality
from .toric import FanError

COMMANDS = (
    "validate",
    "quiver",
    "zigzag",
    "matchings",
    "polygon",
    "collection",
    "verify",
    "crosscheck",
    "superpotential",
    "curved-diagram",
    "report",
)

STRUCTURAL = (
    DimerStructureError,
    NoCentralCandidateError,
    NonInteriorMatchingError,
    BoundaryMultiplicityError,
    DegeneratePolygonError,
    NoMatchingError,
    FanError,
    OSError,
)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    fixture: str | None = None
    pm: int | None = None
    origin: tuple[int, int] | None = None
    format: str = "text"
    figures: str | None = None
    seed: int = 0
    lift_bound: int = 1

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if (self.input is None) == (self.fixture is None):
            raise UsageError("give exactly one of an input file or --fixture")
        if self.fixture is not None and self.fixture not in FIXTURES:
            raise UsageError(f"unknown fixture {self.fixture!r}; known: {', '.join(FIXTURES)}")
        if self.format not in ("text", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.lift_bound < 0:
            raise UsageError("--lift-bound must be non-negative")
        if self.figures is not None and self.command != "report":
            raise UsageError("--figures only applies to the report command")


@dataclass
class Outcome:
    status: int
    data: dict
    text: list[str]


def _load(cfg: RunConfig) -> DimerModel:
    return load_fixture(cfg.fixture) if cfg.fixture else load_dimer(cfg.input)


def _require_valid(model: DimerModel) -> None:
    rep = validate_dimer(model)
    if not rep.passed:
        raise DimerStructureError("invalid dimer model: " + "; ".join(rep.violations))


def _pick_pm(model: DimerModel, cfg: RunConfig) -> int:
    pms = enumerate_matchings(model)
    if cfg.pm is None:
        return classify_matchings(model, cfg.origin).central_candidates[0]
    if not 0 <= cfg.pm < len(pms):
        raise UsageError(f"--pm {cfg.pm} out of range: the model has {len(pms)} perfect matchings")
    return cfg.pm


def _vec(v) -> str:
    return f"({v[0]},{v[1]})"


def _cmd_validate(model, cfg) -> Outcome:
    rep = validate_dimer(model)
    data = {"passed": rep.passed, "violations": rep.violations, "warnings": rep.warnings, "faces": rep.num_faces}
    text = [f"validate: {'pass' if rep.passed else 'FAIL'}", f"faces: {rep.num_faces}"]
    text += [f"violation: {v}" for v in rep.violations] + [f"warning: {w}" for w in rep.warnings]
    return Outcome(0 if rep.passed else 2, data, text)


def _cmd_quiver(model, cfg) -> Outcome:
    _require_valid(model)
    q = quiver_of(model)
    arrows = [
        {"id": a.id, "source": a.source, "target": a.target, "lift": list(a.lift),
         "p_plus": list(q.relations[a.id][0]), "p_minus": list(q.relations[a.id][1])}
        for a in q.arrows.values()
    ]
    text = [f"vertices: {len(q.vertices)}", f"arrows: {len(q.arrows)}"]
    text += [
        f"{x['id']}: {x['source']} -> {x['target']} lift {_vec(x['lift'])}  p+ {' '.join(x['p_plus'])} | p- {' '.join(x['p_minus'])}"
        for x in arrows
    ]
    return Outcome(0, {"vertices": list(q.vertices), "arrows": arrows}, text)


def _cmd_zigzag(model, cfg) -> Outcome:
    _require_valid(model)
    zz = zigzag_paths(model)
    rep = check_consistency(model)
    data = {
        "paths": [{"edges": list(z.edges), "class": list(z.homology)} for z in zz],
        "consistency": rep.criteria(),
        "passed": rep.passed,
    }
    text = [f"zigzag {i}: class {_vec(z.homology)} edges {' '.join(z.edges)}" for i, z in enumerate(zz)]
    text += [f"{k}: {'pass' if v else 'FAIL'}" for k, v in rep.criteria().items()]
    return Outcome(0 if rep.passed else 1, data, text)


def _cmd_matchings(model, cfg) -> Outcome:
    _require_valid(model)
    pms = enumerate_matchings(model)
    poly = characteristic_polygon(model)
    data = {"matchings": [{"id": p.id, "edges": list(p.sorted_edges()), "class": list(poly.classes[p.id])} for p in pms]}
    text = [f"matchings: {len(pms)}"]
    text += [f"{p.id}: {{{', '.join(p.sorted_edges())}}} class {_vec(poly.classes[p.id])}" for p in pms]
    return Outcome(0, data, text)


def _cmd_polygon(model, cfg) -> Outcome:
    _require_valid(model)
    poly = characteristic_polygon(model)
    data = {
        "vertices": [list(v) for v in poly.vertices],
        "multiplicity": [[list(p), m] for p, m in poly.multiplicity.items()],
        "boundary_points": [list(p) for p in poly.boundary_points],
        "interior_points": [list(p) for p in poly.interior_points],
        "twice_area": poly.twice_area,
    }
    text = [
        "vertices: " + " ".join(_vec(v) for v in poly.vertices),
        "twice area: " + str(poly.twice_area),
        "multiplicities: " + " ".join(f"{_vec(p)}x{m}" for p, m in poly.multiplicity.items()),
    ]
    try:
        rep = classify_matchings(model, cfg.origin)
    except (NoCentralCandidateError, BoundaryMultiplicityError) as exc:
        data["classification_error"] = str(exc)
        text.append(f"classification: {exc}")
    else:
        data["labels"] = {str(k): v for k, v in rep.labels.items()}
        data["origin"] = list(rep.origin)
        data["central_candidates"] = rep.central_candidates
        text.append("labels: " + " ".join(f"{k}:{v}" for k, v in rep.labels.items()))
        text.append(f"central candidates at {_vec(rep.origin)}: {rep.central_candidates}")
    return Outcome(0, data, text)


def _collection(model, cfg):
    _require_valid(model)
    d0 = _pick_pm(model, cfg)
    return d0, build_collection(model, d0)


def _cmd_collection(model, cfg) -> Outcome:
    d0, coll = _collection(model, cfg)
    text = [f"d0: {d0}", "rays: " + " ".join(_vec(v) for v in coll.fan.rays)]
    text += [f"E_{v}: {list(d.coefficients)}  normal form {list(d.normal_form)}" for v, d in coll.bundles.items()]
    return Outcome(0, coll.to_dict(), text)


def _cmd_verify(model, cfg) -> Outcome:
    d0, coll = _collection(model, cfg)
    rep = verify_strong_exceptional(coll)
    full = fullness_rank_check(coll, model)
    data = {"d0": d0, "collection": coll.to_dict(), "verification": rep.to_dict(), "rank_check": full}
    text = [f"verify d0={d0}: {'pass' if rep.passed else 'FAIL'}", f"order: {rep.order}", f"rank check: {'pass' if full else 'FAIL'}"]
    text += [f"reason: {r}" for r in rep.reasons]
    return Outcome(0 if rep.passed and full else 1, data, text)


def _cmd_crosscheck(model, cfg) -> Outcome:
    d0, coll = _collection(model, cfg)
    try:
        rep = cross_check_endomorphism_algebra(model, d0, coll)
    except InfiniteDimensionError as exc:
        return Outcome(1, {"d0": d0, "equal": False, "error": str(exc), "witness": list(exc.witness)}, [f"crosscheck: FAIL ({exc})"])
    data = {"d0": d0, **rep.to_dict()}
    text = [f"crosscheck d0={d0}: {'tables equal' if rep.equal else 'MISMATCH'}",
            f"total: path {rep.path_table.total}, toric {rep.toric_table.total}"]
    text += ["path:  " + " ".join(map(str, row)) for row in rep.path_table.rows()]
    text += ["toric: " + " ".join(map(str, row)) for row in rep.toric_table.rows()]
    if rep.mismatches:
        v, w, a, b = rep.first_mismatch
        text.append(f"first mismatch at ({v}, {w}): path {a}, toric {b}")
    return Outcome(0 if rep.equal else 1, data, text)


def _cmd_superpotential(model, cfg) -> Outcome:
    _require_valid(model)
    q = quiver_of(model)
    cycles = [small_cycle(model, v) for v in q.vertices]
    cen = superpotential_centrality(model)
    dims = {f"{i}->{j}": a0_dim_truncated(model, i, j, cfg.lift_bound) for i in q.vertices for j in q.vertices}
    data = {
        "small_cycles": [{"vertex": c.vertex, "path": list(c.path.arrows), "lift": list(c.cls.lift), "ref_weight": c.cls.ref_weight} for c in cycles],
        "central": cen.passed,
        "failures": cen.failures,
        "lift_bound": cfg.lift_bound,
        "a0_dims": dims,
    }
    text = [f"omega_{c.vertex}: {' '.join(c.path.arrows)}" for c in cycles]
    text.append(f"W central: {'pass' if cen.passed else 'FAIL ' + ' '.join(cen.failures)}")
    text += [f"dim A0 {k} (lift <= {cfg.lift_bound}): {d}" for k, d in dims.items()]
    return Outcome(0 if cen.passed else 1, data, text)


def _cmd_curved(model, cfg) -> Outcome:
    _require_valid(model)
    cd = curved_diagram(model)
    text = [f"objects: {len(cd.edges)} edges, {len(cd.nodes)} nodes; morphisms: {len(cd.morphisms)}"]
    for alg in cd.nodes.values():
        text.append(f"{alg.name}: W = " + " + ".join(".".join(t) for t in alg.curvature))
    text += [f"problem: {p}" for p in cd.problems]
    return Outcome(0 if cd.well_formed else 1, cd.to_dict(), text)


def _cmd_report(model, cfg) -> Outcome:
    _require_valid(model)
    poly = characteristic_polygon(model)
    status = 0
    data: dict = {"faces": len(compute_faces(model)), "matchings": len(enumerate_matchings(model))}
    text = [f"faces: {data['faces']}", f"matchings: {data['matchings']}"]
    verification = None
    try:
        d0, coll = _collection(model, cfg)
    except (NoCentralCandidateError, NonInteriorMatchingError) as exc:
        data["collection"] = str(exc)
        text.append(f"collection: {exc}")
    else:
        verification = verify_strong_exceptional(coll)
        cross = cross_check_endomorphism_algebra(model, d0, coll)
        data["verify"] = verification.passed
        data["crosscheck"] = cross.equal
        text += [f"verify d0={d0}: {'pass' if verification.passed else 'FAIL'}",
                 f"crosscheck: {'tables equal' if cross.equal else 'MISMATCH'}"]
        if not (verification.passed and cross.equal):
            status = 1
    if cfg.figures:
        figs = emit_figures(model, poly, verification, seed=cfg.seed)
        paths = write_figures(figs, cfg.figures)
        data["figures"] = [str(p) for p in paths]
        text += [f"figure: {p}" for p in paths]
    return Outcome(status, data, text)


HANDLERS = {
    "validate": _cmd_validate,
    "quiver": _cmd_quiver,
    "zigzag": _cmd_zigzag,
    "matchings": _cmd_matchings,
    "polygon": _cmd_polygon,
    "collection": _cmd_collection,
    "verify": _cmd_verify,
    "crosscheck": _cmd_crosscheck,
    "superpotential": _cmd_superpotential,
    "curved-diagram": _cmd_curved,
    "report": _cmd_report,
}


def run(cfg: RunConfig) -> Outcome:
    try:
        cfg.validate()
        model = _load(cfg)
        return HANDLERS[cfg.command](model, cfg)
    except UsageError as exc:
        return Outcome(2, {"error": str(exc)}, [f"error: {exc}"])
    except DimerParseError as exc:
        return Outcome(2, {"error": str(exc), "location": exc.location}, [f"error: {exc}"])
    except STRUCTURAL as exc:
        return Outcome(2, {"error": str(exc)}, [f"error: {exc}"])


def _origin(text: str) -> tuple[int, int]:
    try:
        x, y = text.split(",")
        return int(x), int(y)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected x,y with integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dimerex", description="Dimer models, quivers and exceptional collections.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="dimer document (JSON)")
    p.add_argument("--fixture", choices=FIXTURES, help="use a bundled model instead of a file")
    p.add_argument("--pm", type=int, help="perfect matching id used as D0")
    p.add_argument("--origin", type=_origin, help="interior lattice point x,y used as the origin")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--figures", metavar="DIR", help="report: write SVG figures into DIR")
    p.add_argument("--seed", type=int, default=0, help="layout seed for figures without positions")
    p.add_argument("--lift-bound", type=int, default=1, help="superpotential: lift bound for truncated dimensions")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = RunConfig(
        command=ns.command,
        input=ns.input,
        fixture=ns.fixture,
        pm=ns.pm,
        origin=ns.origin,
        format=ns.format,
        figures=ns.figures,
        seed=ns.seed,
        lift_bound=ns.lift_bound,
    )
    out = run(cfg)
    if cfg.format == "json":
        sys.stdout.write(json.dumps({"command": cfg.command, "status": out.status, **out.data}, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(out.text) + "\n")
    return out.status


if __name__ == "__main__":
    sys.exit(main())
