"""Command-line front end.

Subcommands: ``bias`` (edge-list bias tables), ``pcs`` (partially
completed star-graphs, gluing, catalogue), ``zeta-curve`` (sparse limit
curve), ``exact`` (closed-form and oracle expectations), ``mc`` (Monte
Carlo experiments from a JSON config), ``graphon`` (dense-limit values
and sampling).

Records stream out as CSV (fixed column order, header first) or JSON
lines; exact rationals print as ``num/den`` in lowest terms, reals with
17 significant digits.  Exit codes: 0 success, 1 input error, 2 domain or
hypothesis violation, 3 internal invariant failure.
"""

from __future__ import annotations

import csv
import json
import sys
from fractions import Fraction

import click
import numpy as np

from . import __version__
from .errors import DomainError, GraphInputError, InvariantError
from .graphon import (
    ConstantGraphon,
    RankOneGraphon,
    TwoBlockGraphon,
    dense_bias_limit,
    graphon_from_json,
    sample_graph,
    two_block_factors,
)
from .graphs import (
    Multigraph,
    attribute_bias,
    parse_edge_list,
    triangle_bias,
    triangle_counts,
    wedge_counts,
)
from .mc import ExperimentConfig, run_mc
from .sparse import (
    DegreeSequence,
    configuration_model_mean_bias,
    configuration_model_mean_bias_enumerated,
    cm_triangle_free_limit,
    er_triangle_free_limit,
    erdos_renyi_mean_bias,
    erdos_renyi_mean_bias_enumerated,
    zeta_cm,
    zeta_er,
)
from .star import (
    PartialStarSpec,
    build_partial_star,
    glue_breakdown,
    glue_partial_stars,
    glue_vertex_by_role,
    low_bias_catalogue,
    partial_star_bias,
)


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


class RecordWriter:
    """Stream flat records to stdout as CSV rows or JSON lines."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self._header = None
        self._csv = csv.writer(sys.stdout, lineterminator="\n")

    def write(self, record: dict) -> None:
        if self.fmt == "json":
            click.echo(json.dumps({k: _fmt(v) for k, v in record.items()}))
            return
        if self._header is None:
            self._header = list(record)
            self._csv.writerow(self._header)
        self._csv.writerow([_fmt(record.get(k, "")) for k in self._header])


@click.group(name="tribias")
@click.version_option(__version__)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              help="Output format for record streams.")
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed.")
@click.option("--trials", type=int, default=None, help="Override trial count.")
@click.option("--workers", default=None, help="Worker count or 'auto'.")
@click.option("--quadrature-n", type=int, default=256, show_default=True,
              help="Cell count for generic quadrature.")
@click.pass_context
def cli(ctx, fmt, seed, trials, workers, quadrature_n):
    """Friendship-bias computations on graphs and random-graph models."""
    if workers is not None and workers != "auto":
        workers = int(workers)
    ctx.obj = {
        "writer": RecordWriter(fmt),
        "seed": seed,
        "trials": trials,
        "workers": workers,
        "quadrature_n": quadrature_n,
    }


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise GraphInputError(f"cannot parse rational value {text!r}") from None


def _attribute_vector(g: Multigraph, attribute: str):
    if attribute == "degree":
        return list(g.degrees()), "degree"
    if attribute == "wedge":
        return wedge_counts(g), "wedge"
    if attribute == "triangle":
        return triangle_counts(g), "triangle"
    if attribute.startswith("file:"):
        path = attribute[len("file:"):]
        try:
            with open(path) as fh:
                values = [_parse_rational(line.strip()) for line in fh if line.strip()]
        except OSError as exc:
            raise GraphInputError(f"cannot read attribute file: {exc}") from None
        return values, "custom"
    raise GraphInputError(
        f"unknown attribute {attribute!r}; use degree|wedge|triangle|file:<path>"
    )


@cli.command(name="bias")
@click.argument("edge_list", type=click.Path(exists=True, dir_okay=False))
@click.option("--attribute", default="triangle", show_default=True,
              help="degree|wedge|triangle|file:<path>")
@click.pass_obj
def cmd_bias(obj, edge_list, attribute):
    """Per-vertex and average bias of an attribute on an edge-list graph."""
    with open(edge_list) as fh:
        g = parse_edge_list(fh.read())
    values, kind = _attribute_vector(g, attribute)
    report = attribute_bias(g, values, kind=kind)
    w = obj["writer"]
    for i in range(g.n):
        w.write({
            "vertex": i,
            "degree": g.degree(i),
            "attribute": Fraction(values[i]),
            "bias": report.per_vertex[i],
        })
    w.write({"vertex": "average", "degree": "", "attribute": "", "bias": report.average})


@cli.command(name="pcs")
@click.argument("spec_text", required=False)
@click.option("--glue", "glue_text", default=None, help="Second spec to glue onto the first.")
@click.option("--at", "at_text", default=None,
              help="Gluing vertices 'V1,V2': ids or end|mid|tadpole|iso[:index].")
@click.option("--catalogue", "catalogue_max", type=int, default=None,
              help="List all specs up to this many vertices with total bias < 3/2.")
@click.pass_obj
def cmd_pcs(obj, spec_text, glue_text, at_text, catalogue_max):
    """Closed-form and direct bias of partially completed star-graphs."""
    w = obj["writer"]
    if catalogue_max is not None:
        for spec, total in low_bias_catalogue(catalogue_max):
            w.write({
                "spec": str(spec),
                "vertices": spec.total_vertices,
                "triangles": spec.triangles,
                "total_bias": total,
                "average_bias": total / spec.total_vertices,
            })
        return
    if spec_text is None:
        raise GraphInputError("give a spec string (or --catalogue N)")
    spec = PartialStarSpec.parse(spec_text)
    if glue_text is None:
        total, average = partial_star_bias(spec)
        g = build_partial_star(spec)
        from .graphs import total_triangle_bias

        direct = total_triangle_bias(g) / g.n
        w.write({
            "spec": str(spec),
            "vertices": spec.total_vertices,
            "triangles": spec.triangles,
            "total_bias": total,
            "average_bias": average,
            "direct_average": direct,
        })
        return
    other = PartialStarSpec.parse(glue_text)
    if at_text is None:
        raise GraphInputError("--glue needs --at V1,V2")
    parts = at_text.split(",")
    if len(parts) != 2:
        raise GraphInputError(f"--at needs two comma-separated selectors, got {at_text!r}")

    def resolve(sp, token):
        token = token.strip()
        if token.isdigit():
            return int(token)
        return glue_vertex_by_role(sp, token)

    va, vb = resolve(spec, parts[0]), resolve(other, parts[1])
    ga, gb = build_partial_star(spec), build_partial_star(other)
    glued = glue_partial_stars(ga, va, gb, vb)
    bd = glue_breakdown(spec, va, other, vb)
    from .graphs import total_triangle_bias

    direct_total = total_triangle_bias(glued)
    if direct_total != bd.total_after:
        raise InvariantError(
            f"glue decomposition mismatch: {bd.total_after} vs direct {direct_total}"
        )
    w.write({
        "spec_a": str(spec),
        "vertex_a": va,
        "spec_b": str(other),
        "vertex_b": vb,
        "old_total_a": bd.total_before_a,
        "old_total_b": bd.total_before_b,
        "center_term": bd.center_term,
        "hub_term": bd.hub_term,
        "local_term": bd.local_term,
        "new_total": bd.total_after,
        "average_bias": direct_total / glued.n,
    })


@cli.command(name="zeta-curve")
@click.argument("lambda_min", type=float)
@click.argument("lambda_max", type=float)
@click.argument("points", type=int)
@click.option("--log-scale/--linear", default=True, show_default=True)
@click.pass_obj
def cmd_zeta_curve(obj, lambda_min, lambda_max, points, log_scale):
    """Rows (lambda, zeta) of the sparse Erdos-Renyi limit curve."""
    if not (0 < lambda_min < lambda_max):
        raise GraphInputError(
            f"need 0 < lambda_min < lambda_max, got {lambda_min}, {lambda_max}"
        )
    if points < 1:
        raise GraphInputError(f"need at least one point, got {points}")
    if points == 1:
        grid = [lambda_min]
    elif log_scale:
        grid = np.geomspace(lambda_min, lambda_max, points)
    else:
        grid = np.linspace(lambda_min, lambda_max, points)
    w = obj["writer"]
    for lam in grid:
        w.write({"lambda": float(lam), "zeta": zeta_er(float(lam))})


@cli.group(name="exact")
def cmd_exact():
    """Closed-form expectations and their enumeration oracles."""


def _parse_p(p_text: str | None, rate: float | None, n: int):
    if (p_text is None) == (rate is None):
        raise GraphInputError("give exactly one of --p or --rate")
    if p_text is not None:
        return _parse_rational(p_text)
    return rate / n


@cmd_exact.command(name="errg")
@click.option("--n", type=int, required=True)
@click.option("--p", "p_text", default=None, help="Edge probability, e.g. 0.5 or 1/3.")
@click.option("--rate", type=float, default=None, help="Mean degree; p = rate/n.")
@click.pass_obj
def cmd_exact_errg(obj, n, p_text, rate):
    """Expected average triangle bias of the Erdos-Renyi model."""
    p = _parse_p(p_text, rate, n)
    value = erdos_renyi_mean_bias(n, p)
    obj["writer"].write({"model": "errg", "n": n, "p": float(p), "mean": float(value)})


@cmd_exact.command(name="errg-oracle")
@click.option("--n", type=int, required=True)
@click.option("--p", "p_text", default=None)
@click.option("--rate", type=float, default=None)
@click.pass_obj
def cmd_exact_errg_oracle(obj, n, p_text, rate):
    """Same expectation by weighted enumeration of all graphs (n <= 5)."""
    p = _parse_p(p_text, rate, n)
    value = erdos_renyi_mean_bias_enumerated(n, p)
    obj["writer"].write({"model": "errg-oracle", "n": n, "p": float(p), "mean": float(value)})


def _degree_sequence(degrees, degrees_file, distribution, n) -> DegreeSequence:
    given = [x is not None for x in (degrees, degrees_file, distribution)]
    if sum(given) != 1:
        raise GraphInputError("give exactly one of --degrees, --degrees-file, --distribution")
    if degrees is not None:
        return DegreeSequence(tuple(int(d) for d in degrees.split(",")))
    if degrees_file is not None:
        with open(degrees_file) as fh:
            return DegreeSequence.from_text(fh.read())
    if n is None:
        raise GraphInputError("--distribution needs --n")
    return DegreeSequence.parse_distribution(distribution, n)


@cmd_exact.command(name="cm")
@click.option("--degrees", default=None, help="Comma-separated degree sequence.")
@click.option("--degrees-file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--distribution", default=None, help="regular:d or two-point:a,b,frac")
@click.option("--n", type=int, default=None)
@click.pass_obj
def cmd_exact_cm(obj, degrees, degrees_file, distribution, n):
    """Expected average triangle bias of the configuration model."""
    ds = _degree_sequence(degrees, degrees_file, distribution, n)
    value = configuration_model_mean_bias(ds)
    obj["writer"].write({
        "model": "cm", "n": ds.n, "m1": ds.moment(1), "mean": float(value),
        "mean_exact": value,
    })


@cmd_exact.command(name="cm-oracle")
@click.option("--degrees", default=None)
@click.option("--degrees-file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--distribution", default=None)
@click.option("--n", type=int, default=None)
@click.pass_obj
def cmd_exact_cm_oracle(obj, degrees, degrees_file, distribution, n):
    """Same expectation by enumerating all pairings (m1 <= 12)."""
    ds = _degree_sequence(degrees, degrees_file, distribution, n)
    value = configuration_model_mean_bias_enumerated(ds)
    obj["writer"].write({
        "model": "cm-oracle", "n": ds.n, "m1": ds.moment(1), "mean": float(value),
        "mean_exact": value,
    })


@cmd_exact.command(name="zeta-cm")
@click.option("--c1", type=float, required=True)
@click.option("--c2", type=float, required=True)
@click.option("--c3", type=float, required=True)
@click.pass_obj
def cmd_exact_zeta_cm(obj, c1, c2, c3):
    """Configuration-model limit of n times the expected bias."""
    obj["writer"].write({"c1": c1, "c2": c2, "c3": c3, "zeta": zeta_cm(c1, c2, c3)})


@cmd_exact.command(name="triangle-free")
@click.option("--kind", type=click.Choice(["errg", "cm"]), required=True)
@click.option("--rate", type=float, default=None, help="Mean degree (errg).")
@click.option("--c1", type=float, default=None)
@click.option("--c2", type=float, default=None)
@click.pass_obj
def cmd_exact_triangle_free(obj, kind, rate, c1, c2):
    """Limiting probability that the sparse model is triangle-free."""
    if kind == "errg":
        if rate is None:
            raise GraphInputError("errg needs --rate")
        obj["writer"].write({"kind": "errg", "rate": rate,
                             "triangle_free_limit": er_triangle_free_limit(rate)})
    else:
        if c1 is None or c2 is None:
            raise GraphInputError("cm needs --c1 and --c2")
        obj["writer"].write({"kind": "cm", "c1": c1, "c2": c2,
                             "triangle_free_limit": cm_triangle_free_limit(c1, c2)})


@cli.command(name="mc")
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def cmd_mc(obj, config_path):
    """Run a Monte Carlo experiment described by a JSON config file."""
    with open(config_path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphInputError(f"bad experiment JSON: {exc}") from None
    if obj["trials"] is not None:
        data["trials"] = obj["trials"]
    if obj["workers"] is not None:
        data["workers"] = obj["workers"]
    data.setdefault("master_seed", obj["seed"])
    config = ExperimentConfig.from_json(data)
    est = run_mc(config)
    obj["writer"].write({
        "model": data["model"]["kind"],
        "statistic": config.statistic,
        "power": config.power,
        "trials": est.trials,
        "master_seed": est.master_seed,
        "mean": est.mean,
        "stderr": est.stderr,
    })


@cli.group(name="graphon")
def cmd_graphon():
    """Dense-limit values; sampling of graphon random graphs."""


def _emit_graphon(obj, kernel, sample_n):
    w = obj["writer"]
    chi = dense_bias_limit(kernel, cells=obj["quadrature_n"])
    record = {"chi": chi}
    if isinstance(kernel, TwoBlockGraphon):
        f = two_block_factors(kernel.alpha, kernel.beta, kernel.gamma, kernel.p)
        record = {
            "chi": f.product,
            "prefactor": f.prefactor,
            "degree_gap": f.degree_gap,
            "cubic_term": f.cubic_term,
        }
    w.write(record)
    if sample_n:
        g = sample_graph(sample_n, kernel, obj["seed"])
        rep = triangle_bias(g)
        w.write({
            "sampled_n": sample_n,
            "edges": g.edge_count(),
            "average_bias": rep.average,
            "scaled_bias": float(rep.average) / sample_n**2,
        })


@cmd_graphon.command(name="file")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--sample", "sample_n", type=int, default=None)
@click.pass_obj
def cmd_graphon_file(obj, path, sample_n):
    """Evaluate a graphon described by a JSON file."""
    with open(path) as fh:
        kernel = graphon_from_json(fh.read())
    _emit_graphon(obj, kernel, sample_n)


@cmd_graphon.command(name="constant")
@click.option("--p", type=float, required=True)
@click.option("--sample", "sample_n", type=int, default=None)
@click.pass_obj
def cmd_graphon_constant(obj, p, sample_n):
    _emit_graphon(obj, ConstantGraphon(p), sample_n)


@cmd_graphon.command(name="two-block")
@click.option("--alpha", type=float, required=True)
@click.option("--beta", type=float, required=True)
@click.option("--gamma", type=float, required=True)
@click.option("--p", type=float, required=True)
@click.option("--sample", "sample_n", type=int, default=None)
@click.pass_obj
def cmd_graphon_two_block(obj, alpha, beta, gamma, p, sample_n):
    _emit_graphon(obj, TwoBlockGraphon(alpha, beta, gamma, p), sample_n)


@cmd_graphon.command(name="rank1")
@click.option("--profile", required=True, help="Comma-separated cell values of the profile.")
@click.option("--sample", "sample_n", type=int, default=None)
@click.pass_obj
def cmd_graphon_rank1(obj, profile, sample_n):
    values = tuple(float(v) for v in profile.split(","))
    _emit_graphon(obj, RankOneGraphon(values), sample_n)


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except GraphInputError as exc:
        click.echo(f"input error: {exc}", err=True)
        return 1
    except DomainError as exc:
        click.echo(f"domain error: {exc}", err=True)
        return 2
    except InvariantError as exc:
        click.echo(f"invariant violation: {exc}", err=True)
        return 3
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.exceptions.Abort:
        return 1
    except OSError as exc:
        click.echo(f"input error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
