"""Command-line front end: deterministic sweeps, reports and the verify suite.

Subcommands: exact-sweep, hmf-sweep, nhmf-sweep, case-study, transmission,
verify.  Every artifact embeds the effective configuration and tool version;
numeric output uses 17 significant digits and no locale-dependent formatting,
so repeated runs are byte-identical.  Exit codes: 0 success, 1 invariant
failure, 2 usage/config error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import InputError, ModelError
from .hubbard_exact import ModelParams, exact_spectrum, exact_sweep
from .meanfield import bond_current, orbital_energies
from .numerics import eig_small
from .ssp_transport import SSPConfig, exact_transmission_curve, mf_transmission_curves
from .stationary_search import (
    SearchConfig,
    find_hmf_stationary,
    find_nhmf_stationary,
    first_excited_point,
    sweep_branches,
)
from .verify import run_invariant_suite

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    """Effective run configuration; defaults are the standard study values."""

    model: dict = field(
        default_factory=lambda: {
            "t": 1.0,
            "u": 0.5,
            "h_up_a": 0.25,
            "h_up_b": -0.25,
            "h_dn_a": 0.0,
            "h_dn_b": 0.0,
        }
    )
    search: dict = field(default_factory=dict)
    ssp: dict = field(
        default_factory=lambda: {"beta": 0.1, "e_min": -3.0, "e_max": 3.0, "e_step": 0.005, "shift": "auto"}
    )
    sweep: dict = field(default_factory=lambda: {"u_min": 0.05, "u_max": 10.0, "u_step": 0.05})
    output: dict = field(default_factory=lambda: {"path": "-", "format": "csv", "plot": False})

    def model_params(self) -> ModelParams:
        m = self.model
        return ModelParams(
            t=float(m["t"]),
            u=float(m["u"]),
            h_up_a=complex(m["h_up_a"]),
            h_up_b=complex(m["h_up_b"]),
            h_dn_a=complex(m["h_dn_a"]),
            h_dn_b=complex(m["h_dn_b"]),
        )

    def search_config(self) -> SearchConfig:
        return SearchConfig(**self.search)

    def ssp_config(self) -> SSPConfig:
        s = self.ssp
        grid = np.arange(float(s["e_min"]), float(s["e_max"]) + 1e-12, float(s["e_step"]))
        shift = s["shift"]
        if shift != "auto":
            shift = float(shift)
        return SSPConfig(beta=float(s["beta"]), e_grid=grid, shift_mode=shift)

    def u_grid(self) -> np.ndarray:
        s = self.sweep
        return np.round(
            np.arange(float(s["u_min"]), float(s["u_max"]) + 1e-12, float(s["u_step"])), 12
        )

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _load_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    with open(path) as fh:
        data = json.load(fh)
    for section in ("model", "search", "ssp", "sweep", "output"):
        if section in data:
            unknown = set(data[section]) - set(getattr(cfg, section))
            if section != "search" and unknown:
                raise InputError(f"unknown config keys in [{section}]: {sorted(unknown)}")
            getattr(cfg, section).update(data[section])
    return cfg


def _apply_flags(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    if args.u is not None:
        cfg.model["u"] = args.u
    for name, key in (("u_min", "u_min"), ("u_max", "u_max"), ("u_step", "u_step")):
        v = getattr(args, name)
        if v is not None:
            cfg.sweep[key] = v
    for name in ("beta", "e_min", "e_max", "e_step", "shift"):
        v = getattr(args, name, None)
        if v is not None:
            cfg.ssp[name] = v
    if args.seed is not None:
        cfg.search["rng_seed"] = args.seed
    if args.starts is not None:
        cfg.search["random_starts"] = args.starts
    if args.format is not None:
        cfg.output["format"] = args.format
    if args.out is not None:
        cfg.output["path"] = args.out
    if args.plot:
        cfg.output["plot"] = True
    return cfg


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _config_json(cfg: RunConfig) -> str:
    def default(o):
        if isinstance(o, complex):
            return {"re": o.real, "im": o.imag}
        raise TypeError(f"not serializable: {o!r}")

    return json.dumps(cfg.as_dict(), sort_keys=True, default=default)


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _write_table(cfg: RunConfig, header: list[str], rows: list[list], meta: dict | None = None):
    """Emit one tabular artifact in the configured format, with config echo."""
    path = cfg.output["path"]
    fmt = cfg.output["format"]
    fh, close = _open_out(path)
    try:
        if fmt == "csv":
            fh.write(f"# nhmf-dimer {__version__}\n")
            fh.write(f"# config: {_config_json(cfg)}\n")
            for k, v in (meta or {}).items():
                fh.write(f"# {k}: {json.dumps(v, sort_keys=True)}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([c if isinstance(c, str) else _fmt(c) for c in row])
        else:
            doc = {
                "tool": {"name": "nhmf-dimer", "version": __version__},
                "config": json.loads(_config_json(cfg)),
                "meta": meta or {},
                "columns": header,
                "data": [
                    [c if isinstance(c, str) else float(c) for c in row] for row in rows
                ],
            }
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    finally:
        if close:
            fh.close()
    if cfg.output["plot"] and close and fmt == "csv":
        _plot_csv(path, header)


def _plot_csv(path: str, header: list[str]):
    """Render a vector-graphics companion from the emitted CSV itself."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                continue
            rows.append(line.rstrip("\n").split(","))
    body = rows[1:]
    fig, ax = plt.subplots(figsize=(6, 4))
    if header[0] == "u" or header[0] == "U":
        label_col = 1 if header[1] == "branch_id" else None
        ycols = [i for i, name in enumerate(header) if name.endswith("_re") or name == "e_hermitian"]
        if label_col is None:
            xs = [float(r[0]) for r in body]
            for i in ycols:
                ax.plot(xs, [float(r[i]) for r in body], label=header[i])
        else:
            labels = sorted({r[label_col] for r in body})
            for lab in labels:
                sel = [r for r in body if r[label_col] == lab]
                ax.plot([float(r[0]) for r in sel], [float(r[2]) for r in sel], label=lab)
        ax.set_xlabel(header[0])
        ax.set_ylabel("energy")
    else:
        labels = sorted({r[1] for r in body})
        for lab in labels:
            sel = [r for r in body if r[1] == lab and r[4] != "nan"]
            ax.plot([float(r[0]) for r in sel], [float(r[4]) for r in sel], label=lab)
        ax.set_xlabel("E")
        ax.set_ylabel("T")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path.rsplit(".", 1)[0] + ".svg")
    plt.close(fig)


def cmd_exact_sweep(cfg: RunConfig) -> int:
    params = cfg.model_params()
    rows = []
    for spectrum in exact_sweep(params, cfg.u_grid()):
        row = [spectrum.params.u]
        for pair in spectrum.eigenpairs:
            row.extend([pair.value.real, pair.value.imag])
        rows.append(row)
    header = ["U"]
    for k in range(1, 5):
        header += [f"lam{k}_re", f"lam{k}_im"]
    _write_table(cfg, header, rows)
    return EXIT_OK


def _sweep_rows(families, kind: str):
    rows = []
    label_by_id = {}
    for fam in families:
        for k, p in enumerate(fam.points):
            if p is not None:
                label_by_id[id(p)] = fam.label
    for fam in families:
        for k, p in enumerate(fam.points):
            if p is None:
                continue
            row = [
                float(fam.u_values[k]),
                fam.label,
                p.nh_energy.real,
                p.nh_energy.imag,
                p.h_energy_at_point,
                p.point_class,
                p.grad_residual,
            ]
            if kind == "nhmf":
                partner_label = fam.label
                if p.partner is not None:
                    # partner indexes the census at this U; recover its family
                    # by matching conjugate orbitals among same-U points
                    conj = p.orb.conjugate()
                    from .numerics import projective_distance

                    best, best_lab = 1e9, fam.label
                    for other in families:
                        q = other.points[k]
                        if q is None:
                            continue
                        d = max(
                            projective_distance(conj.up, q.orb.up),
                            projective_distance(conj.dn, q.orb.dn),
                        )
                        if d < best:
                            best, best_lab = d, other.label
                    partner_label = best_lab
                row.append(partner_label)
            rows.append(row)
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def cmd_hmf_sweep(cfg: RunConfig) -> int:
    params = cfg.model_params()
    grid = cfg.u_grid()
    search = cfg.search_config()
    families = []
    prev_pts: list = []
    from .stationary_search import BranchFamily

    # the Hermitian census is cheap enough to rerun per grid point; branch
    # matching reuses the NH sweep machinery via a thin local loop
    points_per_u = [find_hmf_stationary(params.with_u(float(u)), search) for u in grid]
    families = _match_families(grid, points_per_u)
    _write_table(
        cfg,
        ["u", "branch_id", "e_re", "e_im", "e_hermitian", "class", "grad_residual"],
        _sweep_rows(families, "hmf"),
    )
    return EXIT_OK


def _match_families(u_grid, points_per_u):
    from .numerics import projective_distance
    from .stationary_search import BRANCH_MATCH_TOL, BranchFamily

    families: list = []
    for k, points in enumerate(points_per_u):
        pairs = []
        for fi, fam in enumerate(families):
            last = next((p for p in reversed(fam.points) if p is not None), None)
            if last is None:
                continue
            for pi, p in enumerate(points):
                d = max(
                    projective_distance(last.orb.up, p.orb.up),
                    projective_distance(last.orb.dn, p.orb.dn),
                )
                if d <= BRANCH_MATCH_TOL:
                    pairs.append((d, fi, pi))
        taken_f, taken_p = set(), set()
        for d, fi, pi in sorted(pairs):
            if fi in taken_f or pi in taken_p:
                continue
            families[fi].points.append(points[pi])
            taken_f.add(fi)
            taken_p.add(pi)
        for fi, fam in enumerate(families):
            if fi not in taken_f:
                fam.points.append(None)
        for pi, p in enumerate(points):
            if pi not in taken_p:
                families.append(
                    BranchFamily(u_values=np.asarray(u_grid, float), points=[None] * k + [p], label=f"b{len(families):02d}")
                )
    return families


def cmd_nhmf_sweep(cfg: RunConfig) -> int:
    params = cfg.model_params()
    families = sweep_branches(params, cfg.u_grid(), cfg.search_config())
    _write_table(
        cfg,
        ["u", "branch_id", "e_re", "e_im", "e_hermitian", "class", "grad_residual", "partner_branch"],
        _sweep_rows(families, "nhmf"),
    )
    return EXIT_OK


def _complex_obj(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _matrix_obj(m: np.ndarray) -> list:
    return [[_complex_obj(m[i, j]) for j in range(m.shape[1])] for i in range(m.shape[0])]


def cmd_case_study(cfg: RunConfig) -> int:
    params = cfg.model_params()
    if not params.u > 0:
        raise InputError("case study requires U > 0")
    points = find_nhmf_stationary(params, cfg.search_config())
    point = first_excited_point(params, points)
    exact = exact_spectrum(params)
    e1 = sorted(exact.energies, key=lambda z: (z.real, z.imag))[1]
    occ = orbital_energies(point.fock, point.orb)
    j_up, j_dn = bond_current(point.orb, params.t)
    doc = {
        "tool": {"name": "nhmf-dimer", "version": __version__},
        "config": json.loads(_config_json(cfg)),
        "u": params.u,
        "state": {
            "class": point.point_class,
            "nh_energy": _complex_obj(point.nh_energy),
            "gamma": point.gamma,
            "hermitian_energy": point.h_energy_at_point,
            "exact_first_excited": _complex_obj(e1),
            "orbitals": {
                "up": [_complex_obj(point.orb.a), _complex_obj(point.orb.b)],
                "dn": [_complex_obj(point.orb.c), _complex_obj(point.orb.d)],
            },
            "fock_up": _matrix_obj(point.fock.up),
            "fock_dn": _matrix_obj(point.fock.dn),
            "fock_up_eigen": [
                {"value": _complex_obj(p.value), "vector": [_complex_obj(v) for v in p.vector]}
                for p in eig_small(point.fock.up)
            ],
            "fock_dn_eigen": [
                {"value": _complex_obj(p.value), "vector": [_complex_obj(v) for v in p.vector]}
                for p in eig_small(point.fock.dn)
            ],
            "occupied_orbital_energies": [_complex_obj(occ[0]), _complex_obj(occ[1])],
            "bond_currents": {"up": j_up, "dn": j_dn},
            "grad_residual": point.grad_residual,
            "self_consistency_residual": point.sc_residual,
        },
    }
    fh, close = _open_out(cfg.output["path"])
    try:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_transmission(cfg: RunConfig) -> int:
    params = cfg.model_params()
    ssp = cfg.ssp_config()
    search = cfg.search_config()
    curves = [
        exact_transmission_curve(params, ssp, "ground", search),
        exact_transmission_curve(params, ssp, "excited", search),
    ]
    curves.extend(mf_transmission_curves(params, ssp, search))
    rows = []
    shifts = {}
    for c in curves:
        shifts[c.state_label] = c.shift
        for pt in c.points:
            rows.append(
                [
                    pt.energy,
                    c.state_label,
                    pt.r.real,
                    pt.r.imag,
                    pt.transmission,
                    "1" if pt.branch_flag else "0",
                ]
            )
    _write_table(
        cfg,
        ["E", "curve_label", "r_re", "r_im", "T", "flagged_ok"],
        rows,
        meta={"shifts": shifts, "beta": ssp.beta},
    )
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = run_invariant_suite(cfg.model_params(), cfg.search_config())
    fh, close = _open_out(cfg.output["path"])
    try:
        fh.write(f"# nhmf-dimer {__version__}\n")
        fh.write(f"# config: {_config_json(cfg)}\n")
        failed = 0
        for r in results:
            fh.write(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.measured}\n")
            failed += 0 if r.passed else 1
        fh.write(f"# {len(results) - failed}/{len(results)} checks passed\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK if failed == 0 else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhmf-dimer",
        description="Two-site Hubbard mean-field stationary points and SSP transmission",
    )
    parser.add_argument("--config", help="JSON configuration file")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("exact-sweep", cmd_exact_sweep),
        ("hmf-sweep", cmd_hmf_sweep),
        ("nhmf-sweep", cmd_nhmf_sweep),
        ("case-study", cmd_case_study),
        ("transmission", cmd_transmission),
        ("verify", cmd_verify),
    ):
        p = sub.add_parser(name)
        p.set_defaults(func=fn)
        p.add_argument("--u", type=float, help="interaction strength")
        p.add_argument("--u-min", type=float)
        p.add_argument("--u-max", type=float)
        p.add_argument("--u-step", type=float)
        p.add_argument("--beta", type=float, help="contact coupling")
        p.add_argument("--e-min", type=float)
        p.add_argument("--e-max", type=float)
        p.add_argument("--e-step", type=float)
        p.add_argument("--shift", help="'auto' or a fixed shift value")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--out", help="output path ('-' for stdout)")
        p.add_argument("--seed", type=int, help="rng seed for supplementary starts")
        p.add_argument("--starts", type=int, help="number of supplementary random starts")
        p.add_argument("--plot", action="store_true", help="emit an SVG next to the CSV")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _apply_flags(_load_config(args.config), args)
        return args.func(cfg)
    except (InputError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
