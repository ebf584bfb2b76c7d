"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 a computation contradicted a proven
statement, 3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .bitset import elements_of, mask_of
from .catalog import parse_rack, random_rack, resolve, serialize_rack
from .complement import find_complement, verify_empty_core
from .errors import CapExceededError, RackInputError, TheoremViolation
from .lattice import DEFAULT_ENUM_CAP, enumerate_subracks
from .props import (
    DEFAULT_ORTHO_NODES,
    FLAGS,
    check_equivalences,
    is_boolean,
    is_complemented,
    is_distributive,
    is_pseudocomplemented,
    is_uniquely_complemented,
    property_report,
)
from .racks import closure, g_rack_check, is_subrack, verify_rack
from .topology import DEFAULT_FACE_CAP, nerve_of_maximal_cover, order_complex, reduced_homology, verify_sphere

EXIT_OK, EXIT_INPUT, EXIT_CONTRADICTION, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunConfig:
    rack: Optional[str] = None
    file: Optional[Path] = None
    enum_cap: int = DEFAULT_ENUM_CAP
    ortho_nodes: int = DEFAULT_ORTHO_NODES
    face_cap: int = DEFAULT_FACE_CAP
    format: str = "human"
    witness: bool = False
    nerve: bool = False
    extra: dict = field(default_factory=dict)

    def load(self):
        if self.file is not None:
            try:
                text = Path(self.file).read_text()
            except OSError as exc:
                raise RackInputError(f"cannot read {self.file}: {exc}") from exc
            return parse_rack(text)
        if not self.rack:
            raise RackInputError("give a builtin rack name or --file")
        return resolve(self.rack)


def caps_from_env(env: Optional[str]) -> dict[str, int]:
    """Parse ``RACKKIT_CAPS`` such as ``enum=4096,ortho=100000,faces=1000000``."""
    keys = {"enum": "enum_cap", "ortho": "ortho_nodes", "faces": "face_cap"}
    out: dict[str, int] = {}
    if not env:
        return out
    for part in env.split(","):
        if not part.strip():
            continue
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in keys:
            raise RackInputError(f"unknown cap {key!r} in RACKKIT_CAPS; use enum, ortho or faces")
        try:
            v = int(value)
        except ValueError as exc:
            raise RackInputError(f"cap {key} must be an integer") from exc
        if v <= 0:
            raise RackInputError(f"cap {key} must be positive")
        out[keys[key]] = v
    return out


def parse_elements(text: str, r) -> int:
    """``all``, ``none``/empty, or comma-separated element indices."""
    text = text.strip()
    if text == "all":
        return r.full
    if text in ("", "none"):
        return 0
    try:
        xs = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise RackInputError(f"bad element list {text!r}") from exc
    for x in xs:
        if not 0 <= x < r.n:
            raise RackInputError(f"element {x} out of range 0..{r.n - 1}")
    return mask_of(xs)


def _emit(obj) -> None:
    print(json.dumps(obj))


def cmd_report(cfg: RunConfig) -> int:
    r = cfg.load()
    L = enumerate_subracks(r, cfg.enum_cap)
    rep = property_report(r, L, ortho_nodes=cfg.ortho_nodes)
    if cfg.format == "json":
        _emit(rep.to_dict(with_witnesses=cfg.witness))
        return EXIT_OK
    print(f"rack: {rep.label} (n = {rep.n})")
    if rep.label.startswith("conj:"):
        print("identity: " + ("removed" if rep.label.endswith(":noid") else "included"))
    print(f"subracks: {rep.subrack_count}")
    width = max(len(k) for k in FLAGS)
    witnesses = rep.to_dict(with_witnesses=True)["witnesses"] if cfg.witness else {}
    for k in FLAGS:
        v = rep.flags[k]
        shown = "undecided" if v is None else str(v).lower()
        line = f"  {k:<{width}}  {shown}"
        if cfg.witness and k in witnesses and k != "graded":
            line += f"    witness: {json.dumps(witnesses[k])}"
        print(line)
    return EXIT_OK


def cmd_complement(cfg: RunConfig) -> int:
    r = cfg.load()
    q1 = parse_elements(cfg.extra["q1"], r)
    q2 = parse_elements(cfg.extra["q2"], r)
    if cfg.extra.get("generate"):
        q1, q2 = closure(r, q1), closure(r, q2)
    for name, q in (("q1", q1), ("q2", q2)):
        if not is_subrack(r, q):
            raise RackInputError(
                f"{name} = {elements_of(q)} is not a subrack; pass --generate to use the subrack it generates"
            )
    _, trace = find_complement(r, q1, q2)
    sys.stdout.write(trace.to_json_lines())
    return EXIT_OK


def cmd_homology(cfg: RunConfig) -> int:
    r = cfg.load()
    L = enumerate_subracks(r, cfg.enum_cap)
    K = nerve_of_maximal_cover(r, L) if cfg.nerve else order_complex(L, cfg.face_cap)
    H = reduced_homology(K)
    sphere = None
    if g_rack_check(r).holds:
        sphere = verify_sphere(r, L, cfg.face_cap)
    if cfg.format == "json":
        out = {
            "schema": 1,
            "rack": r.label,
            "complex": "nerve" if cfg.nerve else "order_complex",
            "rows": [
                {"dim": d, "faces": f, "betti": b, "torsion": list(t)} for d, f, b, t in H.rows()
            ],
            "euler_reduced": H.euler_reduced,
        }
        if sphere is not None:
            out["orbits"] = sphere.c
            out["sphere_dimension"] = sphere.c - 2
            out["homology_consistent_with_sphere"] = sphere.ok
        _emit(out)
    else:
        kind = "nerve of maximal subracks" if cfg.nerve else "order complex of proper nonempty subracks"
        print(f"rack: {r.label}; {kind}")
        print(f"{'dim':>4} | {'faces':>8} | {'betti':>5} | torsion")
        for d, f, b, t in H.rows():
            tors = " + ".join(f"Z/{q}" for q in t) or "-"
            print(f"{d:>4} | {f:>8} | {b:>5} | {tors}")
        print(f"reduced Euler characteristic: {H.euler_reduced}")
        if sphere is not None:
            verdict = "consistent" if sphere.ok else "NOT consistent"
            print(f"G-rack with c = {sphere.c} orbits: homology {verdict} with S^{sphere.c - 2}")
    if sphere is not None and not sphere.ok:
        return EXIT_CONTRADICTION
    return EXIT_OK


def cmd_hasse(cfg: RunConfig) -> int:
    r = cfg.load()
    L = enumerate_subracks(r, cfg.enum_cap)
    if cfg.format == "json":
        _emit(L.to_dict())
    else:
        sys.stdout.write(L.to_dot())
    return EXIT_OK


def cmd_axioms(cfg: RunConfig) -> int:
    if cfg.file is not None:
        try:
            data = json.loads(Path(cfg.file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise RackInputError(f"cannot read rack JSON from {cfg.file}: {exc}") from exc
        if not isinstance(data, dict) or "table" not in data:
            raise RackInputError('rack JSON must be an object with a "table" field')
        table = data["table"]
    else:
        table = cfg.load().table
    rep = verify_rack(table)
    if cfg.format == "json":
        _emit({"schema": 1, "valid": rep.valid, "reason": rep.reason, "witness": list(rep.witness)})
    else:
        print(rep.message)
    return EXIT_OK if rep.valid else EXIT_INPUT


def falsify(count: int, seed: int, max_n: int, enum_cap: int = DEFAULT_ENUM_CAP) -> list[dict]:
    """Random racks through the finite-rack theorems; returns the violations found."""
    rng = random.Random(seed)
    violations = []
    for _ in range(count):
        n = rng.randint(1, max_n)
        r = random_rack(n, rng)
        problems = []
        try:
            L = enumerate_subracks(r, enum_cap)
            verify_empty_core(r, L)
            if not is_complemented(L):
                problems.append("lattice not complemented")
            for q in range(len(L)):
                res, _ = find_complement(r, L.elems[q], r.full, L)
                if closure(r, res | L.elems[q]) != r.full or res & L.elems[q]:
                    problems.append(f"descent failed for {elements_of(L.elems[q])}")
            flags = {
                "boolean": is_boolean(L).holds,
                "distributive": is_distributive(L).holds,
                "pseudocomplemented": is_pseudocomplemented(L).holds,
                "uniquely_complemented": is_uniquely_complemented(L).holds,
                "complemented": is_complemented(L).holds,
                "g_rack": False,
            }
            check_equivalences(r.label, flags)
        except TheoremViolation as exc:
            problems.append(str(exc))
        if problems:
            violations.append({"rack": json.loads(serialize_rack(r)), "problems": problems})
    return violations


def cmd_falsify(cfg: RunConfig) -> int:
    count, seed, max_n = cfg.extra["count"], cfg.extra["seed"], cfg.extra["n"]
    if not 1 <= max_n <= 7:
        raise RackInputError("--n must be between 1 and 7")
    violations = falsify(count, seed, max_n, cfg.enum_cap)
    if cfg.format == "json":
        _emit({"schema": 1, "count": count, "seed": seed, "n": max_n,
               "violations": len(violations), "offenders": violations})
    else:
        print(f"checked {count} random racks (n <= {max_n}, seed {seed}): {len(violations)} violations")
        for v in violations:
            print(json.dumps(v))
    return EXIT_CONTRADICTION if violations else EXIT_OK


COMMANDS = {
    "report": cmd_report,
    "complement": cmd_complement,
    "homology": cmd_homology,
    "hasse": cmd_hasse,
    "falsify": cmd_falsify,
    "axioms": cmd_axioms,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rackkit", description="Subrack lattices of finite racks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "json"], default=None)
    common.add_argument("--enum-cap", type=int, help="maximum number of subracks to enumerate")
    common.add_argument("--ortho-nodes", type=int, help="orthocomplementation search node cap")
    common.add_argument("--face-cap", type=int, help="maximum faces in a simplicial complex")
    rack_args = argparse.ArgumentParser(add_help=False)
    rack_args.add_argument("rack", nargs="?", help="builtin, e.g. dihedral:8, conj:S3:noid, trivial:4")
    rack_args.add_argument("--file", type=Path, help="rack JSON file instead of a builtin")

    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("report", parents=[common, rack_args], help="all lattice properties")
    s.add_argument("--witness", action="store_true", help="include witnesses")
    s = sub.add_parser("complement", parents=[common, rack_args], help="complement descent trace")
    s.add_argument("--q1", required=True, help="element indices, 'all' or 'none'")
    s.add_argument("--q2", default="all")
    s.add_argument("--generate", action="store_true", help="replace q1, q2 by the subracks they generate")
    s = sub.add_parser("homology", parents=[common, rack_args], help="reduced homology table")
    s.add_argument("--nerve", action="store_true", help="use the nerve of the maximal subracks")
    s = sub.add_parser("hasse", parents=[common, rack_args], help="Hasse diagram (DOT) or lattice JSON")
    s = sub.add_parser("falsify", parents=[common], help="random-rack theorem checks")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=5, help="maximum rack size")
    sub.add_parser("axioms", parents=[common, rack_args], help="check the rack axioms of a table")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(**caps_from_env(os.environ.get("RACKKIT_CAPS")))
    cfg.rack = getattr(args, "rack", None)
    cfg.file = getattr(args, "file", None)
    cfg.format = args.format or "human"
    for name in ("enum_cap", "ortho_nodes", "face_cap"):
        v = getattr(args, name)
        if v is not None:
            if v <= 0:
                raise RackInputError(f"--{name.replace('_', '-')} must be positive")
            setattr(cfg, name, v)
    cfg.witness = getattr(args, "witness", False)
    cfg.nerve = getattr(args, "nerve", False)
    for name in ("q1", "q2", "generate", "count", "seed", "n"):
        if hasattr(args, name):
            cfg.extra[name] = getattr(args, name)
    return cfg


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg)
    except TheoremViolation as exc:
        print(f"CONTRADICTION: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except RackInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
