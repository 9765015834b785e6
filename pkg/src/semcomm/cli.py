"""Command-line front end.

Six subcommands: ``analyze`` (content and surprise entropies over evidence
files or a story collection), ``compress`` / ``decompress`` (the lossless
container), ``lossy`` (rate against transmitted content), ``pac`` (sample
bounds for hypothesis identification), and ``converge`` (posterior trace
along an observation stream).

Everything here is deterministic.  ``--seed`` is accepted and recorded in
reports for provenance, but no command draws random numbers.  Set the
``SEMCOMM_LOG`` environment variable (e.g. ``info`` or ``debug``) to get
progress logging on stderr.
"""

from __future__ import annotations

import csv
import functools
import hashlib
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from .dataset import Story, load_evidence, load_manifest
from .errors import DecodeError, SemcommError, UnsupportedConfigError
from .fol import EvidenceSet, parse_evidence
from .inductive import (CONSTANT, PROPORTIONAL, InductiveModel, InductiveParams,
                        check_convergence, pac_error, pac_sample_bound)
from .lossless import (gzip_bits, lossless_decode, lossless_encode_report,
                       shannon_baseline)
from .lossy import (LossyConfig, candidate_reconstructions, content_cap,
                    lossy_optimize, rd_sweep, receiver_prior,
                    relative_informativeness)
from .measures import (MessagePartition, UniverseSignature, cont_entropy,
                       inf_entropy, scale_entropies)
from .sublang import SubLanguageConfig, build_sublanguage

log = logging.getLogger("semcomm.cli")


def _parse_lambda(text: str) -> tuple[str, float | None]:
    """Smoothing-weight spec: "w" or "const:<value>" ("inf" allowed)."""
    if text == "w":
        return PROPORTIONAL, None
    if text.startswith("const:"):
        raw = text[len("const:"):]
        try:
            value = float(raw)
        except ValueError:
            raise click.BadParameter(f"not a number: {raw!r}", param_hint="--lam")
        if not value > 0:
            raise click.BadParameter("constant weight must be positive",
                                     param_hint="--lam")
        return CONSTANT, value
    raise click.BadParameter(f"expected 'w' or 'const:<value>', got {text!r}",
                             param_hint="--lam")


def _make_params(lam: str, alpha: float) -> InductiveParams:
    policy, value = _parse_lambda(lam)
    return InductiveParams(lambda_policy=policy, lambda_value=value, alpha=alpha)


def _params_record(lam: str, alpha: float, slack: int, partition: str,
                   seed: int | None) -> tuple[dict, str]:
    record = {"lambda": lam, "alpha": alpha, "slack": slack,
              "partition": partition, "seed": seed}
    digest = hashlib.sha256(
        json.dumps(record, sort_keys=True).encode()).hexdigest()[:16]
    return record, digest


def _check_partition(partition: str) -> None:
    if partition != "constituents":
        raise UnsupportedConfigError(
            f"partition {partition!r} is not implemented; the hypothesis "
            "partition ('constituents') is the only supported message space")


def _friendly(fn):
    """Surface library errors as clean one-line failures (exit code 1)."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SemcommError as exc:
            raise click.ClickException(str(exc)) from exc
    return wrapper


_lam_option = click.option("--lam", default="w", show_default=True,
                           help="Smoothing weight: 'w' (width-proportional) "
                                "or 'const:<value>'; 'const:inf' gives the "
                                "dogmatic endpoint.")
_alpha_option = click.option("--alpha", default=0.0, show_default=True,
                             help="Prior sample-size weight.")
_partition_option = click.option(
    "--partition", default="constituents", show_default=True,
    type=click.Choice(["constituents", "state_descriptions"]),
    help="Message space for entropy measures.")


@click.group()
@click.option("--seed", type=int, default=None,
              help="Recorded in reports; no command uses randomness.")
@click.version_option(package_name="semcomm", prog_name="semcomm")
@click.pass_context
def main(ctx, seed):
    """Semantic information measures and semantic compression."""
    level = os.environ.get("SEMCOMM_LOG")
    if level:
        logging.basicConfig(
            level=getattr(logging, level.upper(), logging.INFO),
            format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"seed": seed}


# --- analyze -----------------------------------------------------------


def _load_story_evidence(story: Story) -> tuple[EvidenceSet, str]:
    return load_evidence(story.evidence_path, story.observations)


def _analyze_one(ev: EvidenceSet, fmt: str, slack: int,
                 params: InductiveParams, observations: int | None) -> dict:
    sl = build_sublanguage(ev, SubLanguageConfig(slack=slack))
    summary = sl.summary
    scaled = observations is not None and observations != summary.n
    if observations is not None:
        summary = summary.scaled_to(observations)
    model = InductiveModel(sl, params, summary)
    part = MessagePartition.from_model(model)
    sig = UniverseSignature(len(ev.predicates), len(ev.entities))
    ce = cont_entropy(part, sig)
    record = {
        "source_id": ev.source_id,
        "format": fmt,
        "evidence": {
            "entities": len(ev.entities),
            "predicates": len(ev.predicates),
            "statements": len(ev.statements),
            "distinct_statements": len(ev.distinct_statements),
            "kinds_observed": sl.summary.c,
            "big_k": sl.big_k,
            "observations": observations,
        },
        "universe": sig.as_json(),
        "inf_entropy_bits": inf_entropy(part.probs),
        "cont_entropy": ce.as_json(),
    }
    if scaled:
        record["evidence"]["note"] = (
            "kind counts reapportioned to the declared observation volume; "
            "each statement stream stands in for that many individuals")
    return record, ce.normalized


@main.command()
@click.argument("paths", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("--slack", default=1, show_default=True,
              help="Unexemplified cells kept in the hypothesis space.")
@_lam_option
@_alpha_option
@_partition_option
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Directory for per-source JSON reports and summary.csv.")
@click.pass_context
@_friendly
def analyze(ctx, paths, slack, lam, alpha, partition, out):
    """Entropy measures for evidence files or a story collection.

    PATHS is either one directory holding a manifest.json, or one or more
    evidence files (.fol line syntax or .json statement lists).  Scaled
    columns compare the sources analyzed in this run against each other.
    """
    _check_partition(partition)
    params = _make_params(lam, alpha)
    record_params, digest = _params_record(lam, alpha, slack, partition,
                                           ctx.obj["seed"])

    dirs = [p for p in paths if Path(p).is_dir()]
    if dirs and len(paths) > 1:
        raise click.UsageError("pass one dataset directory or only files")

    if dirs:
        try:
            stories = load_manifest(dirs[0])
        except (FileNotFoundError, ValueError) as exc:
            raise click.UsageError(str(exc))
        with ThreadPoolExecutor(max_workers=min(8, len(stories))) as pool:
            loaded = list(pool.map(_load_story_evidence, stories))
        jobs = [(ev, fmt, st.observations, st.story_id)
                for st, (ev, fmt) in zip(stories, loaded)]
    else:
        jobs = []
        for p in paths:
            ev, fmt = load_evidence(p)
            jobs.append((ev, fmt, ev.observations, Path(p).stem))

    rows = []
    normalized = []
    for ev, fmt, observations, label in jobs:
        record, value = _analyze_one(ev, fmt, slack, params, observations)
        record["params"] = record_params
        record["params_hash"] = digest
        rows.append((label, record, value))
        normalized.append(value)

    scaled = scale_entropies(normalized)
    header = f"{'source':<12}{'normalized':>14}{'min_scaled':>14}{'max_scaled':>14}"
    click.echo(header)
    for (label, record, value), lo, hi in zip(rows, scaled["min_scaled"],
                                              scaled["max_scaled"]):
        click.echo(f"{label:<12}{value.format_scientific():>14}"
                   f"{lo.format_scientific():>14}{hi.format_scientific():>14}")
    best = max(rows, key=lambda r: r[2])
    worst = min(rows, key=lambda r: r[2])
    click.echo(f"most informative:  {best[0]}")
    click.echo(f"least informative: {worst[0]}")

    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        for (label, record, value), lo, hi in zip(rows, scaled["min_scaled"],
                                                  scaled["max_scaled"]):
            record["scaled"] = {"min_scaled": lo.as_json(),
                                "max_scaled": hi.as_json()}
            path = outdir / f"{label}.json"
            path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
        with open(outdir / "summary.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["story", "normalized", "min_scaled", "max_scaled"])
            for (label, record, value), lo, hi in zip(
                    rows, scaled["min_scaled"], scaled["max_scaled"]):
                writer.writerow([label, value.format_scientific(),
                                 lo.format_scientific(), hi.format_scientific()])
        log.info("wrote %d reports to %s", len(rows), outdir)


# --- compress / decompress ---------------------------------------------


def _compress_one(ev: EvidenceSet, text: bytes | None) -> tuple[bytes, dict]:
    blob, report = lossless_encode_report(ev)
    decoded = lossless_decode(blob)
    if decoded.normalized_text() != ev.normalized_text():
        raise click.ClickException(
            "round-trip audit failed: decoded statements differ from input")
    fol = ev.normalized_text().encode()
    if text is None:
        baseline_bytes, baseline_source = fol, "normalized-evidence"
    else:
        baseline_bytes, baseline_source = text, "narrative"
    shannon = shannon_baseline(baseline_bytes)
    semantic = report.semantic_bits
    record = {
        "semantic_bits": semantic,
        "shannon_bits": shannon,
        "ratio": (shannon / semantic) if semantic else None,
        "baseline_source": baseline_source,
        "breakdown": report.as_json(),
        "fol_text_bits": len(fol) * 8,
        "gzip_bits": gzip_bits(baseline_bytes),
        "stage1_ratio": (shannon / (len(fol) * 8)) if fol else None,
        "stage2_ratio": ((len(fol) * 8) / semantic) if semantic else None,
    }
    return blob, record


@main.command()
@click.argument("source", type=click.Path(exists=True))
@click.option("--text", type=click.Path(exists=True), default=None,
              help="Narrative file for the byte-level baseline "
                   "(single-file mode only; datasets carry their own).")
@click.option("--out", type=click.Path(), default=None,
              help="Container path (single file) or output directory "
                   "(dataset).")
@_friendly
def compress(source, text, out):
    """Encode evidence into a .semc container, with baseline comparison.

    SOURCE is an evidence file or a dataset directory with a manifest.
    The container is written only after an in-memory decode reproduces
    the input statements exactly.
    """
    src = Path(source)
    if src.is_dir():
        if text:
            raise click.UsageError("--text applies to single-file mode only")
        try:
            stories = load_manifest(src)
        except (FileNotFoundError, ValueError) as exc:
            raise click.UsageError(str(exc))
        outdir = Path(out) if out else Path("compressed")
        outdir.mkdir(parents=True, exist_ok=True)
        rows = []
        for story in stories:
            ev, _ = load_evidence(story.evidence_path, story.observations)
            blob, record = _compress_one(ev, story.read_text())
            (outdir / f"{story.story_id}.semc").write_bytes(blob)
            (outdir / f"{story.story_id}.report.json").write_text(
                json.dumps(record, indent=2, sort_keys=True) + "\n")
            rows.append((story.story_id, record))
        with open(outdir / "compression.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["story", "semantic_bits", "shannon_bits", "ratio"])
            for label, record in rows:
                writer.writerow([label, record["semantic_bits"],
                                 record["shannon_bits"],
                                 f"{record['ratio']:.2f}"])
        click.echo(f"{'story':<12}{'semantic':>10}{'shannon':>10}{'ratio':>8}")
        for label, record in rows:
            click.echo(f"{label:<12}{record['semantic_bits']:>10}"
                       f"{record['shannon_bits']:>10}"
                       f"{record['ratio']:>8.2f}")
        mean = sum(r["ratio"] for _, r in rows) / len(rows)
        click.echo(f"mean ratio: {mean:.2f}")
        return

    ev, _ = load_evidence(src)
    narrative = Path(text).read_bytes() if text else None
    blob, record = _compress_one(ev, narrative)
    target = Path(out) if out else src.with_suffix(".semc")
    target.write_bytes(blob)
    target.with_suffix(".report.json").write_text(
        json.dumps(record, indent=2, sort_keys=True) + "\n")
    click.echo(f"wrote {target} ({len(blob)} bytes)")
    click.echo(f"semantic_bits={record['semantic_bits']} "
               f"shannon_bits={record['shannon_bits']} "
               f"ratio={record['ratio']:.2f} "
               f"(baseline: {record['baseline_source']})")


@main.command()
@click.argument("container", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None,
              help="Where to write the recovered statements.")
@_friendly
def decompress(container, out):
    """Recover the statement stream from a .semc container."""
    blob = Path(container).read_bytes()
    try:
        ev = lossless_decode(blob)
    except DecodeError as exc:
        raise click.ClickException(
            f"container rejected ({exc}); the checksum guards against "
            "truncation and bit corruption")
    target = Path(out) if out else Path(container).with_suffix(".fol")
    target.write_text(ev.normalized_text())
    click.echo(f"recovered {len(ev.statements)} statements to {target}")


# --- lossy -------------------------------------------------------------


@main.command()
@click.argument("evidence", type=click.Path(exists=True))
@click.option("--slack", default=3, show_default=True,
              help="Unexemplified cells kept in the hypothesis space.")
@_lam_option
@_alpha_option
@click.option("--betas", default=None,
              help="Comma-separated multiplier grid (default: 0 and powers "
                   "of two up to 8192).")
@click.option("--dstar", type=float, default=None,
              help="Fidelity floor: report the cheapest channel whose "
                   "transmitted content reaches this value.")
@click.option("--out", type=click.Path(), default=None,
              help="CSV path for the sweep (default: <evidence>.rd.csv).")
@_friendly
def lossy(evidence, slack, lam, alpha, betas, dstar, out):
    """Rate against transmitted content for one evidence source.

    The sender's message space is the hypothesis partition under the
    posterior; reconstructions are truthful weakenings, valued by what
    they rule out for a receiver who has seen no evidence.
    """
    params = _make_params(lam, alpha)
    ev, _ = load_evidence(evidence)
    sl = build_sublanguage(ev, SubLanguageConfig(slack=slack))
    model = InductiveModel(sl, params)
    source = MessagePartition.from_model(model)
    receiver = receiver_prior(sl, params)
    alphabet = candidate_reconstructions(model)
    log.info("alphabet: %d reconstruction sentences", len(alphabet))

    if betas is not None:
        try:
            grid = tuple(sorted(float(b) for b in betas.split(",")))
        except ValueError:
            raise click.BadParameter("expected comma-separated numbers",
                                     param_hint="--betas")
    else:
        grid = LossyConfig().beta_grid

    cap = content_cap(source, alphabet, receiver)
    if dstar is not None:
        cfg = LossyConfig(d_star=dstar, beta_grid=grid)
        point = lossy_optimize(source, alphabet, cfg, receiver)
        click.echo(f"target {dstar:g}: rate={point.rate_bits:.4f} bits, "
                   f"content={point.cont_info:.6f} "
                   f"(beta={point.beta:g}, cap={cap.cont_info:.6f})")
        return

    cfg = LossyConfig(beta_grid=grid)
    points = rd_sweep(source, alphabet, cfg, receiver)
    header = f"{'beta':>10}{'rate_bits':>12}{'cont_info':>12}{'relative':>10}"
    click.echo(header)
    rows = []
    for pt in points:
        rel = relative_informativeness(pt, cap.cont_info)
        rows.append((pt.beta, pt.rate_bits, pt.cont_info, rel))
        click.echo(f"{pt.beta:>10g}{pt.rate_bits:>12.4f}"
                   f"{pt.cont_info:>12.6f}{rel:>10.4f}")
    target = Path(out) if out else Path(evidence).with_suffix(".rd.csv")
    with open(target, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["beta", "rate_bits", "cont_info_normalized",
                         "relative_informativeness"])
        for beta, rate, info, rel in rows:
            writer.writerow([f"{beta:g}", f"{rate:.6f}", f"{info:.9f}",
                             f"{rel:.6f}"])
    click.echo(f"wrote {target}")


# --- pac ---------------------------------------------------------------


@main.command()
@click.argument("k", type=int)
@click.option("--alpha", default=0.0, show_default=True,
              help="Prior sample-size weight.")
@click.option("--epsilon", default=1e-3, show_default=True,
              help="Error budget, in (0, 1).")
@click.option("--out", type=click.Path(), default=None,
              help="CSV path for the bound curve.")
@_friendly
def pac(k, alpha, epsilon, out):
    """Sample size guaranteeing the over-wide error stays under budget."""
    if k < 1:
        raise click.UsageError("K must be at least 1")
    if not 0.0 < epsilon < 1.0:
        raise click.UsageError("epsilon must lie strictly between 0 and 1")
    n0 = pac_sample_bound(k, alpha, epsilon)
    click.echo(f"K={k} alpha={alpha:g} epsilon={epsilon:g} -> n0={n0}")
    click.echo("smallest n at which the worst-case posterior error on "
               "over-wide hypotheses drops below the budget")
    rows = [(n, pac_error(k, n, alpha)) for n in range(1, n0 + 5)]
    for n, bound in rows:
        marker = " <- n0" if n == n0 else ""
        click.echo(f"  n={n:<4d} bound={bound:.3e}{marker}")
    if out:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "error_bound"])
            for n, bound in rows:
                writer.writerow([n, f"{bound:.9e}"])
        click.echo(f"wrote {out}")


# --- converge ----------------------------------------------------------


@main.command()
@click.argument("evidence", type=click.Path(exists=True))
@click.option("--slack", default=1, show_default=True,
              help="Unexemplified cells kept in the hypothesis space.")
@_lam_option
@_alpha_option
@click.option("--threshold", default=0.99, show_default=True,
              help="Posterior level counted as identification.")
@click.option("--out", type=click.Path(), default=None,
              help="CSV path for the posterior trace.")
@_friendly
def converge(evidence, slack, lam, alpha, threshold, out):
    """Posterior of the exact-evidence hypothesis along the stream.

    Individuals arrive in first-appearance order; after each one the
    hypothesis matching everything seen so far is re-priced.
    """
    params = _make_params(lam, alpha)
    ev, _ = load_evidence(evidence)
    sl = build_sublanguage(ev, SubLanguageConfig(slack=slack))
    kinds = [sl.kind_of(e) for e in ev.entities]
    report = check_convergence(kinds, sl.big_k, params, threshold)
    for pt in report.points:
        click.echo(f"  n={pt.n:<4d} kinds_seen={pt.c_seen:<3d} "
                   f"posterior={pt.posterior:.6f}")
    reached = (f"reached {threshold:g} at n={report.reached_at}"
               if report.reached_at is not None
               else f"did not reach {threshold:g}")
    click.echo(f"{reached}; final posterior {report.final_posterior:.6f}; "
               f"monotone tail: {report.eventually_monotone}")
    if out:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "kinds_seen", "posterior"])
            for pt in report.points:
                writer.writerow([pt.n, pt.c_seen, f"{pt.posterior:.9f}"])
        click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
