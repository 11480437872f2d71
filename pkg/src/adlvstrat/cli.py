"""Command line front end.

Usage::

    adlvstrat COMMAND [CONFIG] [--preset NAME] [--radius N] [--margin N]
                      [--search-radius N] [--field P M]

CONFIG is a YAML document with the datum keys ``type``, ``rank``,
``sigma``, ``mu``, ``removed_node`` (or ``preset`` plus ``n``/``m``) and
command specific keys.  Every result is printed as one JSON object per
line with the fields ``command``, ``input``, ``payload`` and ``status``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Iterator

import yaml

from .affine_weyl import AffineElement, AffineWeylGroup, admissible_set, sort_elements
from .building_geometry import (
    Hyperplane,
    Residue,
    acute_cone_member,
    distance,
    enumerate_dr_subset,
    gate,
)
from .finite_flag_lab import lusztig_containment_check, moore_criterion, moore_equivalence_check
from .root_datum import build_root_datum
from .sigma_structures import (
    CoxeterDatum,
    bt_vs_j_check,
    enumerate_eo,
    find_separator,
    make_eo,
    rational_elements,
    ramified_unitary,
    is_sigma_straight,
    unramified_unitary,
)

COMMANDS = (
    "adm",
    "eo",
    "sigma-w",
    "gate",
    "cone",
    "dr-enum",
    "rational",
    "straight",
    "separator",
    "bt-check",
    "dl-check",
    "moore",
)

PRESETS = {
    "example-3.1": ("n", 9),
    "example-3.2": ("m", 6),
    "example-1.3": ("n", 4),
}


class CliError(ValueError):
    pass


# -- config --------------------------------------------------------------------------------------


def load_config(text: str | None) -> dict:
    if not text:
        return {}
    data = yaml.safe_load(text)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise CliError("configuration must be a mapping")
    return data


def build_datum(cfg: dict) -> CoxeterDatum:
    preset = cfg.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise CliError(f"unknown preset {preset!r}; choose one of {sorted(PRESETS)}")
        key, default = PRESETS[preset]
        param = int(cfg.get(key, default))
        if preset == "example-1.3" and param != 4:
            raise CliError("preset example-1.3 is the n = 4 case")
        return unramified_unitary(param) if key == "n" else ramified_unitary(param)
    for k in ("type", "rank"):
        if k not in cfg:
            raise CliError(f"configuration needs {k!r} (or a preset)")
    d = build_root_datum(str(cfg["type"]), int(cfg["rank"]))
    mu = cfg.get("mu", [0] * d.rank)
    return CoxeterDatum(d, cfg.get("sigma"), mu, int(cfg.get("removed_node", 0)))


def parse_element(group: AffineWeylGroup, value: Any) -> AffineElement:
    """An element given as a word list or as {word: [...], omega: k} / {lam: [...], fin: [...]}."""
    if value is None:
        return group.identity
    if isinstance(value, list):
        return group.from_word([int(i) for i in value])
    if isinstance(value, dict):
        if "lam" in value:
            fin = group.finite_element(int(i) for i in value.get("fin", []))
            return group.element([int(x) for x in value["lam"]], fin)
        omega = value.get("omega", 0)
        if isinstance(omega, str):
            omega = int(omega.split("^")[1])
        return group.from_word([int(i) for i in value.get("word", [])], int(omega))
    raise CliError(f"cannot parse element {value!r}")


def omega_str(k: int) -> str:
    return f"tau^{k}"


def element_payload(x: AffineElement) -> dict:
    return {"word": list(x.reduced_word()), "omega": omega_str(x.omega), "length": x.length}


def nodes(s) -> list[int]:
    return sorted(int(i) for i in s)


# -- commands -----------------------------------------------------------------------------------------


def _cmd_adm(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    for x in admissible_set(cd.datum, cd.mu):
        yield element_payload(x)


def _cmd_eo(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    for e in enumerate_eo(cd):
        p = element_payload(e.w)
        p["sigma_support"] = nodes(e.sigma_supp)
        p["sigma_w"] = nodes(e.sigma_w)
        yield p


def _cmd_sigma_w(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    if "w" in cfg:
        items = [make_eo(parse_element(cd.group, cfg["w"]), cd)]
    else:
        items = enumerate_eo(cd)
    for e in items:
        yield {**element_payload(e.w), "sigma_w": nodes(e.sigma_w)}


def _cmd_gate(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    g = cd.group
    b = parse_element(g, cfg.get("b"))
    res = cfg.get("residue", {})
    R = Residue(parse_element(g, res.get("base")), res.get("type", []))
    x = gate(b, R)
    yield {"gate": element_payload(x), "distance": distance(b, x)}


def _cmd_cone(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    g = cd.group
    b = parse_element(g, cfg.get("b"))
    w = g.finite_element(int(i) for i in cfg.get("w", []))
    if "x" in cfg:
        x = parse_element(g, cfg["x"])
        yield {"x": element_payload(x), "member": acute_cone_member(b, w, x)}
        return
    for x in g.ball(args.radius):
        y = b * x
        if acute_cone_member(b, w, y):
            yield {"x": element_payload(y), "member": True}


def _cmd_dr_enum(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    hs = [Hyperplane.normalized([int(a) for a in h[:-1]], int(h[-1])) for h in cfg.get("hyperplanes", [])]
    res = enumerate_dr_subset(cd.datum, hs, args.radius)
    yield {
        "alcoves": [list(x.reduced_word()) for x in res.alcoves],
        "counts": list(res.counts),
        "stabilized": res.stabilized,
    }


def _cmd_rational(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    for x in rational_elements(cd, args.radius):
        yield element_payload(x)


def _cmd_straight(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    g = cd.group
    if "w" in cfg:
        xs = [parse_element(g, cfg["w"])]
    else:
        xs = sort_elements(x for k in range(cd.datum.omega_order) for x in g.ball(args.radius, k))
    for x in xs:
        yield {**element_payload(x), "straight": is_sigma_straight(x, cd)}


def _cmd_separator(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    g = cd.group
    tau = cd.tau
    e1 = make_eo(g.from_word(cfg.get("w1", [])) * tau, cd)
    e2 = make_eo(g.from_word(cfg.get("w2", [])) * tau, cd)
    jp = parse_element(g, cfg.get("jprime"))
    sep = find_separator(cd, e1, e2, jp, args.search_radius)
    yield {
        "j": element_payload(sep.j),
        "val1": element_payload(sep.val1),
        "val2": element_payload(sep.val2),
        "scanned": sep.scanned,
        "chain": list(sep.chain) if sep.chain else None,
        "support_certificate": sep.support_certificate,
    }


def _cmd_bt_check(cfg, args) -> Iterator[dict]:
    cd = build_datum(cfg)
    rep = bt_vs_j_check(cd, args.radius, args.search_radius)
    yield {
        "labels": rep.labels,
        "pairs": rep.pairs,
        "separated": rep.separated,
        "failures": [
            {"w": list(a.eo.word), "i": list(a.coset_rep.reduced_word()),
             "w2": list(b.eo.word), "i2": list(b.coset_rep.reduced_word()), "reason": msg}
            for a, b, msg in rep.failures
        ],
        "max_separator_length": rep.max_separator_length,
        "success": rep.success,
    }


def _field(cfg, args) -> tuple[int, int, int]:
    n = int(cfg.get("n", 3))
    p, m = args.field if args.field else (int(cfg.get("p", 2)), int(cfg.get("m", 3)))
    return n, p, m


def _cmd_dl_check(cfg, args) -> Iterator[dict]:
    n, p, m = _field(cfg, args)
    rep = lusztig_containment_check(n, p, m)
    yield {"n": n, "p": p, "m": m, "points": rep.points, "violations": rep.violations, "passed": rep.passed}


def _cmd_moore(cfg, args) -> Iterator[dict]:
    n, p, m = _field(cfg, args)
    if "a" in cfg:
        a = [int(x) for x in cfg["a"]]
        yield {"a": a, "independent": moore_criterion(a, p, m)}
        return
    rep = moore_equivalence_check(n, p, m)
    yield {"n": n, "p": p, "m": m, "lines": rep.lines, "members": rep.members, "mismatches": rep.mismatches}


HANDLERS = {
    "adm": _cmd_adm,
    "eo": _cmd_eo,
    "sigma-w": _cmd_sigma_w,
    "gate": _cmd_gate,
    "cone": _cmd_cone,
    "dr-enum": _cmd_dr_enum,
    "rational": _cmd_rational,
    "straight": _cmd_straight,
    "separator": _cmd_separator,
    "bt-check": _cmd_bt_check,
    "dl-check": _cmd_dl_check,
    "moore": _cmd_moore,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise CliError(message)


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="adlvstrat", description="Affine Weyl group and building combinatorics engine")
    ap.add_argument("command")
    ap.add_argument("config", nargs="?", help="YAML configuration file ('-' for stdin)")
    ap.add_argument("--preset")
    ap.add_argument("--n", type=int, help="parameter n of a preset or flag dimension")
    ap.add_argument("--m", type=int, help="parameter m of a preset")
    ap.add_argument("--radius", type=int, default=4)
    ap.add_argument("--margin", type=int, default=1)
    ap.add_argument("--search-radius", type=int, default=12)
    ap.add_argument("--field", type=int, nargs=2, metavar=("P", "M"))
    return ap


def run(command: str, cfg: dict, args: argparse.Namespace) -> Iterator[dict]:
    """Yield result records (without error handling)."""
    echo = {**cfg, "radius": args.radius, "margin": args.margin, "search_radius": args.search_radius}
    if args.field:
        echo["field"] = list(args.field)
    for payload in HANDLERS[command](cfg, args):
        yield {"command": command, "input": echo, "payload": payload, "status": "ok"}


def _error(command: str, config: Any, exc: Exception) -> int:
    err = {"command": command, "input": {"config": config}, "payload": {"error": str(exc)}, "status": "error"}
    print(json.dumps(err, sort_keys=True))
    print(f"error: {exc}", file=sys.stderr)
    return 1


def main(argv: list[str] | None = None) -> int:
    ap = make_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = ap.parse_args(argv)
        if args.command not in HANDLERS:
            raise CliError(f"unknown command {args.command!r}; choose one of {', '.join(COMMANDS)}")
    except CliError as exc:
        return _error(argv[0] if argv else "", None, exc)
    try:
        if args.config == "-":
            cfg = load_config(sys.stdin.read())
        elif args.config:
            with open(args.config, encoding="utf-8") as fh:
                cfg = load_config(fh.read())
        else:
            cfg = {}
        if args.preset:
            cfg["preset"] = args.preset
        if args.n is not None:
            cfg["n"] = args.n
        if args.m is not None:
            cfg["m"] = args.m
        records = list(run(args.command, cfg, args))
    except (ValueError, OSError, yaml.YAMLError) as exc:
        return _error(args.command, args.config, exc)
    for rec in records:
        print(json.dumps(rec, sort_keys=True))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
