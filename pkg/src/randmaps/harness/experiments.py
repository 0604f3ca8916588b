"""Experiment orchestration.

Each experiment is a per-sample function (pure in ``(params, index)``,
drawing randomness only from streams derived from ``(seed, index)``) plus
a reducer that turns the ordered list of sample payloads into CSV rows and
a summary. Samples may run in a process pool; results are always reduced
in index order, so output files do not depend on the worker count.
"""

from __future__ import annotations

import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from ..baker import BakerSpec, baker_bulk_spectrum, random_phases, sstep_singular_spectrum
from ..channels import random_composition, spectrum_bulk
from ..ensembles import GinibreParams, RngStream, sample_ginibre
from ..errors import ConfigError, ContractViolation
from ..laws import (
    VARIANTS,
    RadialLawParams,
    fc_cdf,
    fc_mean_entropy,
    ginibre_radial_cdf,
    product_radial_cdf,
)
from ..spectral import (
    count_real_eigenvalues,
    eigenvalues,
    matrix_power,
    matrix_product,
    shannon_entropy_rel,
    SpectrumSample,
    wishart_normalize,
)
from ..stats import fit_q, histogram, ks_distance, sample_finite_size_radii
from . import curves
from .config import ExperimentConfig
from .output import write_csv, write_manifest

__all__ = ["RunResult", "run"]

_CONTRACT_TOL = 1e-10


@dataclass
class RunResult:
    summary: dict
    files: list = field(default_factory=list)
    manifest_path: Path | None = None


# --------------------------------------------------------------------------
# per-sample functions


def _ginibre_factors(P, i, s):
    # each factor scaled so the product has scale xi
    scale = P.get("xi", 1.0) ** (1.0 / s)
    kind = P.get("kind", "complex")
    return [sample_ginibre(GinibreParams(P["N"], scale, kind), RngStream(P["seed"], i * s + k))
            for k in range(s)]


def _sample_ginibre(P, i):
    return eigenvalues(_ginibre_factors(P, i, 1)[0]).values


def _sample_product(P, i):
    return eigenvalues(matrix_product(_ginibre_factors(P, i, P["s"]))).values


def _sample_power(P, i):
    g = _ginibre_factors(P, i, P["s"])[0]
    return eigenvalues(matrix_power(g, P["s"])).values


def _random_map(P, i):
    sop = random_composition(P["d"], P["M"], P["s"], P["seed"], i)
    err = sop.trace_preservation_error()
    if err > _CONTRACT_TOL:
        raise ContractViolation(f"sample {i}: composed map is not trace preserving ({err:.3g})")
    return sop


def _sample_map_spectrum(P, i):
    return spectrum_bulk(_random_map(P, i)).values


def _sample_map_singular(P, i):
    return wishart_normalize(_random_map(P, i).matrix, drop_leading=True).rescaled


def _sample_map_entropy(P, i):
    return shannon_entropy_rel(wishart_normalize(_random_map(P, i).matrix, drop_leading=True))


def parse_phases(mode: str):
    if mode == "random":
        return None
    if mode.startswith("fixed:"):
        try:
            p1, p2 = (float(v) for v in mode[len("fixed:"):].split(","))
        except ValueError:
            raise ConfigError(f"bad phases {mode!r}; expected fixed:PHI1,PHI2") from None
        return p1, p2
    raise ConfigError(f"bad phases {mode!r}; expected 'random' or 'fixed:PHI1,PHI2'")


def _baker_spec(P, i):
    fixed = parse_phases(P.get("phases", "random"))
    p1, p2 = fixed if fixed is not None else random_phases(RngStream(P["seed"], i))
    return BakerSpec(P["d"], P["M"], P["L"], p1, p2, P["s"])


def _sample_baker_spectrum(P, i):
    return baker_bulk_spectrum(_baker_spec(P, i)).values


def _sample_baker_singular(P, i):
    return sstep_singular_spectrum(_baker_spec(P, i), drop_leading=True).rescaled


_FIT_SOURCES = {
    "maps": _sample_map_spectrum,
    "baker": _sample_baker_spectrum,
    "ginibre": _sample_product,
}


def _sample_fit(P, i):
    if P["source"] == "synthetic":
        p = RadialLawParams(P.get("s", 1), P.get("xi", 1.0), P["N"], P["q"])
        return sample_finite_size_radii(p, P["samples"], RngStream(P["seed"], 0), P["variant"])
    return _FIT_SOURCES[P["source"]](P, i)


def _sample_product_power(P, i):
    gs = _ginibre_factors(P, i, P["s"])
    return (eigenvalues(matrix_product(gs)).values, eigenvalues(matrix_power(gs[0], P["s"])).values)


SAMPLERS = {
    "ginibre-spectrum": _sample_ginibre,
    "product-spectrum": _sample_product,
    "power-spectrum": _sample_power,
    "map-spectrum": _sample_map_spectrum,
    "map-singular": _sample_map_singular,
    "map-entropy": _sample_map_entropy,
    "baker-spectrum": _sample_baker_spectrum,
    "baker-singular": _sample_baker_singular,
    "fit-q": _sample_fit,
    "product-power-test": _sample_product_power,
}


def _call(task):
    experiment, params, index = task
    return SAMPLERS[experiment](params, index)


def _n_tasks(experiment, P):
    if experiment == "fc-density":
        return 0
    if experiment == "fit-q" and P["source"] == "synthetic":
        return 1
    return P["samples"]


def collect_samples(experiment, P, workers=1):
    tasks = [(experiment, P, i) for i in range(_n_tasks(experiment, P))]
    if workers <= 1 or len(tasks) <= 1:
        return [_call(t) for t in tasks]
    ctx = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(_call, tasks))


# --------------------------------------------------------------------------
# reducers


def _eigen_rows(payloads):
    for i, z in enumerate(payloads):
        for v in z:
            yield (i, v.real, v.imag)


def _value_rows(payloads):
    for i, xs in enumerate(payloads):
        for v in np.atleast_1d(xs):
            yield (i, v)


def _disk_summary(z, R, s):
    r = np.abs(z)
    return {
        "radius_prediction": R,
        "max_modulus": float(r.max()),
        "max_modulus_over_radius": float(r.max() / R),
        "fraction_outside_1.25R": float(np.mean(r > 1.25 * R)),
        "ks_radial_law": ks_distance(r, lambda x: product_radial_cdf(x, s, R)),
    }


def _mean_real(payloads):
    return float(np.mean([count_real_eigenvalues(SpectrumSample(z)) for z in payloads]))


def _reduce_ginibre(P, payloads):
    r = np.concatenate([np.abs(z) for z in payloads]) / P["xi"]
    summary = {
        "ks_circular_law": ks_distance(r, lambda x: product_radial_cdf(x, 1)),
        "ks_finite_n": ks_distance(r, lambda x: ginibre_radial_cdf(x, P["N"])),
        "mean_real_eigenvalues": _mean_real(payloads),
    }
    return [("eigenvalues", "", _eigen_rows(payloads))], summary


def _reduce_product(P, payloads):
    r = np.concatenate([np.abs(z) for z in payloads])
    summary = {"ks_radial_law": ks_distance(r, lambda x: product_radial_cdf(x, P["s"], P["xi"]))}
    return [("eigenvalues", "", _eigen_rows(payloads))], summary


def _reduce_map_spectrum(P, payloads):
    z = np.concatenate(payloads)
    summary = _disk_summary(z, P["M"] ** (-P["s"] / 2.0), P["s"])
    summary["mean_real_eigenvalues"] = _mean_real(payloads)
    return [("eigenvalues", "", _eigen_rows(payloads))], summary


def _fc_summary(x, order):
    if 1 <= order <= 3:
        return {"fc_order": order, "ks_fc": ks_distance(x, lambda t: fc_cdf(t, order))}
    return {"fc_order": order, "ks_fc": None}


def _reduce_map_singular(P, payloads):
    x = np.concatenate(payloads)
    summary = dict(_fc_summary(x, P["s"]), mean_x=float(x.mean()))
    return [("singular", "", _value_rows(payloads))], summary


def _reduce_entropy(P, payloads):
    e = np.asarray(payloads, dtype=float)
    ref = fc_mean_entropy(P["s"]) if P["s"] <= 3 else None
    summary = {
        "mean_entropy": float(e.mean()),
        "stderr_entropy": float(e.std(ddof=1) / math.sqrt(e.size)) if e.size > 1 else None,
        "fc_mean_entropy": ref,
    }
    return [("entropy", "", _value_rows(payloads))], summary


def _reduce_baker_spectrum(P, payloads):
    z = np.concatenate(payloads)
    summary = _disk_summary(z, P["M"] ** (-P["s"] / 2.0), P["s"])
    return [("eigenvalues", "", _eigen_rows(payloads))], summary


def _reduce_baker_singular(P, payloads):
    x = np.concatenate(payloads)
    summary = dict(_fc_summary(x, P["s"] - 1), mean_x=float(x.mean()))
    return [("singular", "", _value_rows(payloads))], summary


def _fit_setup(P):
    src = P["source"]
    s = P.get("s", 1)
    if src in ("maps", "baker"):
        return RadialLawParams(s, P["M"] ** (-s / 2.0), P["d"] ** 2 - 1)
    if src in ("ginibre", "synthetic"):
        if "N" not in P:
            raise ConfigError(f"fit-q source {src!r} needs N")
        return RadialLawParams(s, P.get("xi", 1.0), P["N"])
    raise ConfigError(f"unknown fit-q source {src!r}")


def _reduce_fit(P, payloads):
    law = _fit_setup(P)
    r = np.concatenate([np.abs(np.asarray(z)) for z in payloads])
    hist = histogram(r, P["bins"])
    fit = fit_q(hist, law, P["variant"])
    rows = zip(hist.edges[:-1], hist.edges[1:], hist.density)
    summary = {"q": fit.q, "residual": fit.residual, "iterations": fit.iterations,
               "converged": fit.converged, "N": law.N, "xi": law.xi, "n_points": int(r.size)}
    return [("histogram", "", rows)], summary


def _reduce_product_power(P, payloads):
    prod = [p[0] for p in payloads]
    power = [p[1] for p in payloads]
    ks = ks_distance(np.abs(np.concatenate(prod)), np.abs(np.concatenate(power)))
    summary = {"ks_product_vs_power": ks}
    return [("eigenvalues", "", _eigen_rows(prod)), ("eigenvalues", "_power", _eigen_rows(power))], summary


def _reduce_fc_density(P, _payloads):
    law = P.get("law", f"fc{P['order']}")
    data = curves.emit_density_curve(law, P, P["points"], P.get("spacing", "auto"))
    summary = {"law": law, "trapezoid_integral": float(np.trapezoid(data[:, 1], data[:, 0]))}
    return [("curve", "", map(tuple, data))], summary


REDUCERS = {
    "ginibre-spectrum": _reduce_ginibre,
    "product-spectrum": _reduce_product,
    "power-spectrum": _reduce_product,
    "map-spectrum": _reduce_map_spectrum,
    "map-singular": _reduce_map_singular,
    "map-entropy": _reduce_entropy,
    "baker-spectrum": _reduce_baker_spectrum,
    "baker-singular": _reduce_baker_singular,
    "fc-density": _reduce_fc_density,
    "fit-q": _reduce_fit,
    "product-power-test": _reduce_product_power,
}


def _validate(config):
    P = config.parameters
    if "variant" in P and P["variant"] not in VARIANTS:
        raise ConfigError(f"unknown variant {P['variant']!r}")
    if "phases" in P:
        parse_phases(P["phases"])
    if config.experiment == "fit-q":
        _fit_setup(P)
    if config.experiment == "fc-density" and P.get("law", f"fc{P['order']}") not in curves.LAWS:
        raise ConfigError(f"unknown law {P.get('law')!r}")


def run(config: ExperimentConfig, workers: int = 1) -> RunResult:
    """Run one experiment, write its CSV file(s) and manifest, return the summary."""
    _validate(config)
    P = config.parameters
    out = Path(config.output_path or f"{config.experiment}.csv")
    t0 = time.perf_counter()
    payloads = collect_samples(config.experiment, P, workers)
    outputs, summary = REDUCERS[config.experiment](P, payloads)
    files = []
    for schema, suffix, rows in outputs:
        target = out.with_name(out.stem + suffix + out.suffix) if suffix else out
        files.append(str(write_csv(target, schema, rows, config.experiment, P)))
    manifest = {
        "experiment": config.experiment,
        "parameters": P,
        "version": __version__,
        "elapsed_seconds": time.perf_counter() - t0,
        "files": files,
        "summary": summary,
    }
    mpath = write_manifest(out.with_name(out.stem + ".manifest.json"), manifest)
    return RunResult(summary=summary, files=files, manifest_path=mpath)
