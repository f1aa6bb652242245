"""Batch command-line front-end emitting reproducible CSV tables.

Subcommands: plr (loss rate per rate point), rate (optimal-rate search
per blocklength), slope (rate curves fitted to a saturating exponential),
fit (fit a points file directly), simulate (Monte Carlo with both
statistics). Every output is byte-reproducible from (config, seed): rows
follow scenario order whatever the worker count, floats are formatted
with a fixed rule, and a leading comment line records the seed and a hash
of the effective configuration.

Exit codes: 0 success, 2 configuration error, 3 rate search found no
feasible rate anywhere in the scenario.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import montecarlo, optimizer, rateanalysis
from .analytic import plr_rlnc, plr_rlnc_bounds
from .gf import DEFAULT_POLYNOMIALS, GfField
from .network import LineNetwork
from .schemes import CodeSpec, Scheme

SEED_ENV_VAR = "FLNC_SEED"

PLR_HEADER = ["scheme", "hops", "delta", "N", "K", "rho", "plr", "ci", "method"]
RATE_HEADER = [
    "scheme",
    "hops",
    "delta",
    "target",
    "N",
    "rho_star",
    "K_star",
    "achieved_plr",
    "evaluations",
]
SLOPE_HEADER = [
    "scheme",
    "hops",
    "delta",
    "target",
    "a",
    "b",
    "c",
    "residual",
    "theta",
    "N1",
    "N2",
]
FIT_HEADER = ["a", "b", "c", "residual", "theta", "N1", "N2"]
SIM_HEADER = [
    "scheme",
    "hops",
    "delta",
    "N",
    "K",
    "rho",
    "trials",
    "plr_packet",
    "ci_packet",
    "plr_generation",
    "ci_generation",
]


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".12g")


def _fmt_delta(net: LineNetwork) -> str:
    return "|".join(format(p, "g") for p in net.erasure_probs)


def _parse_int_list(text: str, field_name: str) -> list[int]:
    """Accept "8,16,24" or a range "8..64" / "8..64..8"."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            pieces = part.split("..")
            if len(pieces) not in (2, 3):
                raise ConfigError(f"{field_name}: bad range syntax {part!r}")
            try:
                lo, hi = int(pieces[0]), int(pieces[1])
                step = int(pieces[2]) if len(pieces) == 3 else 1
            except ValueError:
                raise ConfigError(f"{field_name}: bad range syntax {part!r}") from None
            if step < 1 or hi < lo:
                raise ConfigError(f"{field_name}: empty range {part!r}")
            out.extend(range(lo, hi + 1, step))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise ConfigError(f"{field_name}: {part!r} is not an integer") from None
    if not out:
        raise ConfigError(f"{field_name}: empty list")
    return out


def _parse_float_list(text: str, field_name: str) -> list[float]:
    try:
        vals = [float(p) for p in str(text).split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"{field_name}: expected comma-separated numbers") from None
    if not vals:
        raise ConfigError(f"{field_name}: empty list")
    return vals


_SCENARIO_KEYS = {
    "schemes",
    "scheme",
    "q",
    "delta",
    "hops",
    "N",
    "K",
    "targets",
    "target",
    "trials",
    "seed",
    "groups",
    "warmup_groups",
    "w_d",
    "method",
    "N1",
    "N2",
    "output",
    "jobs",
}


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ConfigError(f"config: cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config: {path} line {e.lineno}: {e.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a JSON object")
    for key in raw:
        if key not in _SCENARIO_KEYS:
            raise ConfigError(f"config: unknown key {key!r}")
    return raw


class Scenario:
    """Normalized, validated parameter set for one CLI run."""

    def __init__(self, args):
        cfg = _load_config(args.config) if args.config else {}

        def pick(flag_name, cfg_name, default=None):
            v = getattr(args, flag_name, None)
            if v is not None:
                return v
            if cfg_name in cfg and cfg[cfg_name] is not None:
                return cfg[cfg_name]
            return default

        schemes_raw = pick("scheme", "schemes", pick("scheme", "scheme", "RLNC"))
        if isinstance(schemes_raw, str):
            schemes_raw = [s for s in schemes_raw.split(",") if s.strip()]
        try:
            self.schemes = [Scheme.parse(s) for s in schemes_raw]
        except ValueError as e:
            raise ConfigError(f"scheme: {e}") from None

        q_raw = pick("q", "q", 256)
        if isinstance(q_raw, str) and q_raw.strip().lower() in ("infinite", "inf"):
            self.q = math.inf
        else:
            try:
                self.q = int(q_raw)
            except (TypeError, ValueError):
                raise ConfigError(f"q: expected an integer or 'infinite', got {q_raw!r}") from None
        self.field = None
        if not math.isinf(self.q):
            m = self.q.bit_length() - 1
            if self.q != 1 << m or m not in DEFAULT_POLYNOMIALS:
                supported = sorted(1 << mm for mm in DEFAULT_POLYNOMIALS)
                raise ConfigError(f"q: must be one of {supported} or 'infinite', got {self.q}")
            self.field = GfField(m)

        delta_raw = pick("delta", "delta", 0.05)
        if isinstance(delta_raw, str):
            delta_raw = _parse_float_list(delta_raw, "delta")
            if len(delta_raw) == 1:
                delta_raw = delta_raw[0]
        hops_raw = pick("hops", "hops", None)
        try:
            if isinstance(delta_raw, (int, float)):
                if hops_raw is None:
                    hops_raw = [1]
                if isinstance(hops_raw, str):
                    hops_raw = _parse_int_list(hops_raw, "hops")
                elif isinstance(hops_raw, int):
                    hops_raw = [hops_raw]
                self.networks = [
                    LineNetwork.uniform(float(delta_raw), int(h)) for h in hops_raw
                ]
            elif isinstance(delta_raw, list) and delta_raw and isinstance(delta_raw[0], list):
                if hops_raw is not None:
                    raise ConfigError("hops: not allowed when delta lists links explicitly")
                self.networks = [LineNetwork(d) for d in delta_raw]
            elif isinstance(delta_raw, list):
                if hops_raw is not None:
                    raise ConfigError("hops: not allowed when delta lists links explicitly")
                self.networks = [LineNetwork(delta_raw)]
            else:
                raise ConfigError(f"delta: unsupported value {delta_raw!r}")
        except ValueError as e:
            raise ConfigError(f"delta: {e}") from None

        n_raw = pick("N", "N", None)
        if n_raw is None:
            self.N_list = None  # commands that sweep N check for this
        elif isinstance(n_raw, int):
            self.N_list = [n_raw]
        elif isinstance(n_raw, str):
            self.N_list = _parse_int_list(n_raw, "N")
        elif isinstance(n_raw, list):
            self.N_list = [int(n) for n in n_raw]
        else:
            raise ConfigError(f"N: unsupported value {n_raw!r}")

        k_raw = pick("K", "K", None)
        if k_raw is None:
            self.K_list = None
        elif isinstance(k_raw, int):
            self.K_list = [k_raw]
        elif isinstance(k_raw, str):
            self.K_list = _parse_int_list(k_raw, "K")
        elif isinstance(k_raw, list):
            self.K_list = [int(k) for k in k_raw]
        else:
            raise ConfigError(f"K: unsupported value {k_raw!r}")

        targets_raw = pick("target", "targets", pick("target", "target", [1e-3]))
        if isinstance(targets_raw, (int, float)):
            targets_raw = [float(targets_raw)]
        elif isinstance(targets_raw, str):
            targets_raw = _parse_float_list(targets_raw, "target")
        self.targets = [float(t) for t in targets_raw]
        for t in self.targets:
            if not (0.0 <= t <= 1.0):
                raise ConfigError(f"target: {t} outside [0, 1]")

        seed = pick("seed", "seed", None)
        if seed is None:
            seed = os.environ.get(SEED_ENV_VAR, 0)
        try:
            self.seed = int(seed)
        except (TypeError, ValueError):
            raise ConfigError(f"seed: expected an integer, got {seed!r}") from None
        if not (0 <= self.seed < 1 << 63):
            raise ConfigError(f"seed: must lie in [0, 2^63), got {self.seed}")

        self.trials = pick("trials", "trials", None)
        if self.trials is not None:
            self.trials = int(self.trials)
            if self.trials < 1:
                raise ConfigError("trials: must be at least 1")
        self.groups = int(pick("groups", "groups", montecarlo.DEFAULT_GROUPS))
        self.warmup_groups = int(
            pick("warmup_groups", "warmup_groups", montecarlo.DEFAULT_WARMUP_GROUPS)
        )
        if self.groups <= self.warmup_groups:
            raise ConfigError(
                f"groups: need more than warmup_groups={self.warmup_groups}, got {self.groups}"
            )
        wd = pick("w_d", "w_d", None)
        self.w_d = int(wd) if wd is not None else None
        self.method = str(pick("method", "method", "auto"))
        if self.method not in ("auto", "exact", "bound", "montecarlo"):
            raise ConfigError(
                f"method: expected auto|exact|bound|montecarlo, got {self.method!r}"
            )
        self.N1 = pick("N1", "N1", None)
        self.N2 = pick("N2", "N2", None)
        self.N1 = float(self.N1) if self.N1 is not None else None
        self.N2 = float(self.N2) if self.N2 is not None else None
        self.output = pick("output", "output", None)
        self.jobs = int(pick("jobs", "jobs", 1))
        if self.jobs < 1:
            raise ConfigError("jobs: must be at least 1")

    def default_trials(self, command: str) -> int:
        if self.trials is not None:
            return self.trials
        return 2000 if command in ("rate", "slope") else 10000

    def require_N(self) -> list[int]:
        if self.N_list is None:
            raise ConfigError("N: required (blocklength list)")
        return self.N_list

    def make_spec(self, scheme: Scheme, K: int, N: int) -> CodeSpec:
        if self.field is None:
            raise ConfigError("q: simulation needs a finite field, not 'infinite'")
        w_d = self.w_d if scheme is Scheme.SWNC else None
        try:
            return CodeSpec(scheme=scheme, K=K, N=N, field=self.field, w_d=w_d)
        except ValueError as e:
            raise ConfigError(f"K/N: {e}") from None

    def fingerprint(self, command: str) -> dict:
        return {
            "command": command,
            "schemes": [s.value for s in self.schemes],
            "q": "infinite" if math.isinf(self.q) else self.q,
            "networks": [list(n.erasure_probs) for n in self.networks],
            "N": self.N_list,
            "K": self.K_list,
            "targets": self.targets,
            "trials": self.default_trials(command),
            "seed": self.seed,
            "groups": self.groups,
            "warmup_groups": self.warmup_groups,
            "w_d": self.w_d,
            "method": self.method,
            "N1": self.N1,
            "N2": self.N2,
        }


def _config_hash(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _write_table(output, seed: int, cfg_hash: str, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write(f"# seed={seed} config={cfg_hash}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_parallel(fn, payloads, jobs):
    if jobs <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, payloads))


# ---------------------------------------------------------------------------
# plr


def _plr_row_method(scenario: Scenario, scheme: Scheme) -> str:
    if scenario.method == "auto":
        return "analytic-exact" if scheme is Scheme.RLNC else "montecarlo"
    if scenario.method == "exact":
        if scheme is not Scheme.RLNC:
            raise ConfigError(
                f"method: no closed-form loss rate for {scheme.value}; use montecarlo"
            )
        return "analytic-exact"
    if scenario.method == "bound":
        if scheme is not Scheme.RLNC:
            raise ConfigError(f"method: bounds only exist for RLNC, not {scheme.value}")
        return "analytic-bound"
    return "montecarlo"


def _worker_plr(payload):
    spec, net, method, trials, seed, groups, warmup, infinite = payload
    if method == "analytic-exact":
        return (plr_rlnc(spec, net, infinite_field=infinite), None)
    if method == "analytic-bound":
        return (plr_rlnc_bounds(spec, net).upper, None)
    est = montecarlo.estimate_plr(
        spec, net, trials, seed, groups=groups, warmup_groups=warmup
    )
    return (est.mean, est.ci_halfwidth)


def _k_sweep(scenario: Scenario, scheme: Scheme, N: int) -> list[int]:
    if scenario.K_list is not None:
        return scenario.K_list
    return list(optimizer.RateSet.for_scheme(scheme, N).ks)


def cmd_plr(scenario: Scenario):
    trials = scenario.default_trials("plr")
    infinite = math.isinf(scenario.q)
    N_list = scenario.require_N()
    tasks = []
    meta = []
    for scheme in scenario.schemes:
        method = _plr_row_method(scenario, scheme)
        if method == "montecarlo" and infinite:
            raise ConfigError("q: simulation needs a finite field, not 'infinite'")
        for net in scenario.networks:
            for N in N_list:
                for K in _k_sweep(scenario, scheme, N):
                    if method.startswith("analytic") and infinite:
                        # analytic path never touches the field tables
                        spec = CodeSpec(scheme=scheme, K=K, N=N)
                    else:
                        spec = scenario.make_spec(scheme, K, N)
                    tasks.append(
                        (
                            spec,
                            net,
                            method,
                            trials,
                            scenario.seed,
                            scenario.groups,
                            scenario.warmup_groups,
                            infinite,
                        )
                    )
                    meta.append((scheme, net, N, K, method))
    results = _run_parallel(_worker_plr, tasks, scenario.jobs)
    rows = []
    for (scheme, net, N, K, method), (plr, ci) in zip(meta, results):
        rows.append(
            [scheme.value, net.hops, _fmt_delta(net), N, K, K / N, plr, ci, method]
        )
    return PLR_HEADER, rows, 0


# ---------------------------------------------------------------------------
# rate / slope


def _worker_rate(payload):
    scheme, net, target, N, field, method, trials, seed, groups, warmup, infinite = payload
    evaluator = optimizer.make_evaluator(
        scheme,
        N,
        net,
        field=field,
        method=method,
        trials=trials,
        seed=seed,
        groups=groups,
        warmup_groups=warmup,
        infinite_field=infinite,
    )
    psi = optimizer.RateSet.for_scheme(scheme, N)
    return optimizer.optimal_rate(evaluator, psi, target)


def _rate_results(scenario: Scenario):
    trials = scenario.default_trials("rate")
    N_list = scenario.require_N()
    infinite = math.isinf(scenario.q)
    method = scenario.method
    if method in ("exact", "bound"):
        method = "analytic"
    field = scenario.field
    if field is None:
        for scheme in scenario.schemes:
            if scheme is not Scheme.RLNC or method == "montecarlo":
                raise ConfigError("q: simulation needs a finite field, not 'infinite'")
        field = GfField(8)  # placeholder; analytic path ignores it
    tasks = []
    meta = []
    for scheme in scenario.schemes:
        if method == "analytic" and scheme is not Scheme.RLNC:
            raise ConfigError(
                f"method: no closed-form loss rate for {scheme.value}; use montecarlo"
            )
        for net in scenario.networks:
            for target in scenario.targets:
                for N in N_list:
                    tasks.append(
                        (
                            scheme,
                            net,
                            target,
                            N,
                            field,
                            method,
                            trials,
                            scenario.seed,
                            scenario.groups,
                            scenario.warmup_groups,
                            infinite,
                        )
                    )
                    meta.append((scheme, net, target, N))
    results = _run_parallel(_worker_rate, tasks, scenario.jobs)
    return meta, results


def cmd_rate(scenario: Scenario):
    meta, results = _rate_results(scenario)
    rows = []
    any_feasible = False
    for (scheme, net, target, N), res in zip(meta, results):
        any_feasible = any_feasible or res.feasible
        rows.append(
            [
                scheme.value,
                net.hops,
                _fmt_delta(net),
                target,
                N,
                res.rho_star,
                res.K_star,
                res.achieved_plr,
                res.evaluations,
            ]
        )
    return RATE_HEADER, rows, 0 if any_feasible else 3


def _fit_window(scenario: Scenario, ns: list[float]) -> tuple[float, float]:
    n1 = scenario.N1 if scenario.N1 is not None else min(ns)
    n2 = scenario.N2 if scenario.N2 is not None else max(ns)
    if not n1 < n2:
        raise ConfigError(f"N1/N2: need N1 < N2, got ({n1}, {n2})")
    return n1, n2


def _slope_rows_from_curves(scenario: Scenario, curves):
    """curves: list of (label_tuple, points) in scenario order."""
    rows = []
    for (scheme_name, hops, delta_s, target), pts in curves:
        if len(pts) < 4:
            raise ConfigError(
                f"N: curve {scheme_name}/{delta_s}/target={_fmt(target)} has "
                f"{len(pts)} feasible points; at least 4 needed for a fit"
            )
        fit = rateanalysis.fit_saturating_exp(pts)
        n1, n2 = _fit_window(scenario, [p[0] for p in pts])
        theta = rateanalysis.average_slope(fit, n1, n2).theta
        rows.append(
            [
                scheme_name,
                hops,
                delta_s,
                target,
                fit.a,
                fit.b,
                fit.c,
                fit.residual,
                theta,
                n1,
                n2,
            ]
        )
    return rows


def _parse_rate_file(path: str):
    """Rows and seed comment from a rate-table CSV."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise ConfigError(f"from-rate: cannot read {path}: {e}") from None
    seed = None
    data_lines = []
    for ln in lines:
        if ln.startswith("#"):
            for tok in ln[1:].split():
                if tok.startswith("seed="):
                    try:
                        seed = int(tok[5:])
                    except ValueError:
                        pass
            continue
        if ln.strip():
            data_lines.append(ln)
    if not data_lines:
        raise ConfigError(f"from-rate: {path} has no rows")
    reader = csv.DictReader(data_lines)
    if reader.fieldnames is None or set(RATE_HEADER) - set(reader.fieldnames):
        raise ConfigError(
            f"from-rate: {path} must carry the rate-table columns {RATE_HEADER}"
        )
    rows = list(reader)
    return rows, seed


def _curves_from_rate_rows(rows):
    curves: dict[tuple, list] = {}
    order = []
    for r in rows:
        key = (r["scheme"], int(r["hops"]), r["delta"], float(r["target"]))
        if key not in curves:
            curves[key] = []
            order.append(key)
        if r["rho_star"]:
            curves[key].append((float(r["N"]), float(r["rho_star"])))
    return [(key, curves[key]) for key in order]


def cmd_slope(scenario: Scenario, from_rate: str | None):
    if from_rate:
        raw_rows, file_seed = _parse_rate_file(from_rate)
        seed = file_seed if file_seed is not None else scenario.seed
        rate_rows = [[r[col] for col in RATE_HEADER] for r in raw_rows]
    else:
        meta, results = _rate_results(scenario)
        seed = scenario.seed
        rate_rows = []
        for (scheme, net, target, N), res in zip(meta, results):
            rate_rows.append(
                [
                    scheme.value,
                    net.hops,
                    _fmt_delta(net),
                    _fmt(target),
                    str(N),
                    _fmt(res.rho_star),
                    _fmt(res.K_star),
                    _fmt(res.achieved_plr),
                    _fmt(res.evaluations),
                ]
            )
        rate_rows = [[str(v) for v in row] for row in rate_rows]
    dict_rows = [dict(zip(RATE_HEADER, [str(v) for v in row])) for row in rate_rows]
    curves = _curves_from_rate_rows(dict_rows)
    if not any(pts for _, pts in curves):
        return SLOPE_HEADER, [], 3, seed, None
    rows = _slope_rows_from_curves(scenario, curves)
    # hash over the fitted table plus the window, so a file-fed run and a
    # fused run of the same scenario produce identical bytes
    cfg_hash = _config_hash(
        {
            "rate_rows": [[str(v) for v in row] for row in rate_rows],
            "window": [scenario.N1, scenario.N2],
        }
    )
    return SLOPE_HEADER, rows, 0, seed, cfg_hash


# ---------------------------------------------------------------------------
# fit


def _parse_points_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    except OSError as e:
        raise ConfigError(f"points: cannot read {path}: {e}") from None
    data = [ln for ln in lines if not ln.startswith("#")]
    if not data:
        raise ConfigError(f"points: {path} has no rows")
    reader = csv.DictReader(data)
    names = reader.fieldnames or []
    if "N" in names and "rho" in names:
        ncol, rcol = "N", "rho"
    elif "N" in names and "rho_star" in names:
        ncol, rcol = "N", "rho_star"
    else:
        raise ConfigError(f"points: {path} needs columns (N, rho) or (N, rho_star)")
    pts = []
    for r in reader:
        if r[rcol]:
            pts.append((float(r[ncol]), float(r[rcol])))
    return pts


def cmd_fit(scenario: Scenario, points_path: str):
    pts = _parse_points_file(points_path)
    if len(pts) < 4:
        raise ConfigError(f"points: need at least 4 points to fit, got {len(pts)}")
    try:
        fit = rateanalysis.fit_saturating_exp(pts)
    except ValueError as e:
        raise ConfigError(f"points: {e}") from None
    n1, n2 = _fit_window(scenario, [p[0] for p in pts])
    theta = rateanalysis.average_slope(fit, n1, n2).theta
    rows = [[fit.a, fit.b, fit.c, fit.residual, theta, n1, n2]]
    cfg_hash = _config_hash({"points": pts, "window": [n1, n2]})
    return FIT_HEADER, rows, 0, cfg_hash


# ---------------------------------------------------------------------------
# simulate


def _worker_sim(payload):
    spec, net, trials, seed, groups, warmup = payload
    packet = montecarlo.estimate_plr(
        spec, net, trials, seed, statistic="packet", groups=groups, warmup_groups=warmup
    )
    generation = montecarlo.estimate_plr(
        spec,
        net,
        trials,
        seed,
        statistic="generation",
        groups=groups,
        warmup_groups=warmup,
    )
    return packet, generation


def cmd_simulate(scenario: Scenario):
    trials = scenario.default_trials("simulate")
    N_list = scenario.require_N()
    tasks = []
    meta = []
    for scheme in scenario.schemes:
        for net in scenario.networks:
            for N in N_list:
                for K in _k_sweep(scenario, scheme, N):
                    spec = scenario.make_spec(scheme, K, N)
                    tasks.append(
                        (spec, net, trials, scenario.seed, scenario.groups, scenario.warmup_groups)
                    )
                    meta.append((scheme, net, N, K))
    results = _run_parallel(_worker_sim, tasks, scenario.jobs)
    rows = []
    for (scheme, net, N, K), (packet, generation) in zip(meta, results):
        rows.append(
            [
                scheme.value,
                net.hops,
                _fmt_delta(net),
                N,
                K,
                K / N,
                trials,
                packet.mean,
                packet.ci_halfwidth,
                generation.mean,
                generation.ci_halfwidth,
            ]
        )
    return SIM_HEADER, rows, 0


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(p: argparse.ArgumentParser, with_k: bool = True):
    p.add_argument("--config", help="JSON scenario file; flags override its keys")
    p.add_argument("--scheme", help="comma list: RLNC,SNC,SNC-S,SWNC (default RLNC)")
    p.add_argument("--q", help="field size (2, 16, 256, 65536) or 'infinite' (default 256)")
    p.add_argument(
        "--delta",
        help="erasure probability: one value for uniform links, or a comma list "
        "giving every link (default 0.05)",
    )
    p.add_argument(
        "--hops",
        help="comma list of hop counts for uniform-delta networks (default 1)",
    )
    p.add_argument("--N", help="blocklengths: comma list and/or lo..hi..step ranges")
    if with_k:
        p.add_argument(
            "--K", help="information packets per block: comma list/ranges "
            "(default: every valid K at each N)"
        )
    p.add_argument("--target", help="loss-rate target list (rate/slope; default 1e-3)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    p.add_argument("--seed", type=int, help=f"RNG seed (default ${SEED_ENV_VAR} or 0)")
    p.add_argument("--groups", type=int, help="SWNC stream length in groups (default 12)")
    p.add_argument(
        "--warmup-groups",
        dest="warmup_groups",
        type=int,
        help="SWNC groups excluded from statistics (default 2)",
    )
    p.add_argument("--w-d", dest="w_d", type=int, help="SWNC decoder window in packets")
    p.add_argument(
        "--method",
        choices=["auto", "exact", "bound", "montecarlo"],
        help="loss-rate evaluation method (default auto)",
    )
    p.add_argument("--N1", type=float, help="average-slope window start (default data min)")
    p.add_argument("--N2", type=float, help="average-slope window end (default data max)")
    p.add_argument("--output", "-o", help="output CSV path (default stdout)")
    p.add_argument("--jobs", type=int, help="worker processes (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flnc",
        description="Finite-length network coding toolkit: loss rates, optimal "
        "rates, and rate-curve slopes over lossy line networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plr", help="loss rate per (scheme, network, N, K) point")
    _add_common(p)
    p = sub.add_parser("rate", help="optimal coding rate per blocklength")
    _add_common(p, with_k=False)
    p = sub.add_parser("slope", help="fit rate curves and report average slopes")
    _add_common(p, with_k=False)
    p.add_argument("--from-rate", dest="from_rate", help="fit an existing rate CSV")
    p = sub.add_parser("fit", help="fit a saturating exponential to a points CSV")
    _add_common(p, with_k=False)
    p.add_argument("--points", required=True, help="CSV with columns (N, rho) or (N, rho_star)")
    p = sub.add_parser("simulate", help="Monte Carlo both-statistics table")
    _add_common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = Scenario(args)
        if args.command == "plr":
            header, rows, code = cmd_plr(scenario)
            cfg_hash = _config_hash(scenario.fingerprint("plr"))
            seed = scenario.seed
        elif args.command == "rate":
            header, rows, code = cmd_rate(scenario)
            cfg_hash = _config_hash(scenario.fingerprint("rate"))
            seed = scenario.seed
        elif args.command == "slope":
            header, rows, code, seed, cfg_hash = cmd_slope(scenario, args.from_rate)
            if cfg_hash is None:
                cfg_hash = _config_hash(scenario.fingerprint("slope"))
        elif args.command == "fit":
            header, rows, code, cfg_hash = cmd_fit(scenario, args.points)
            seed = scenario.seed
        else:
            header, rows, code = cmd_simulate(scenario)
            cfg_hash = _config_hash(scenario.fingerprint("simulate"))
            seed = scenario.seed
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    _write_table(scenario.output, seed, cfg_hash, header, rows)
    return code


if __name__ == "__main__":
    sys.exit(main())
