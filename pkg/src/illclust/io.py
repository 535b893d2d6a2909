"""CSV ingestion, JSON report emission, and tab-separated plot exports.

Reports carry a schema_version, a full config echo, and numbers rendered
to 6 significant digits in a fixed key order, so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import os

import numpy as np

from .config import PipelineConfig
from .errors import EmptyFile, NonNumericCell, RaggedRows
from .experiment import ExperimentReport, Variant, VariantResult
from .matrix import DataMatrix

SCHEMA_VERSION = 1


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_csv(path: str, transpose: bool = False) -> DataMatrix:
    """Read a rectangular numeric grid; header row and label column are
    auto-detected by a non-numeric first cell."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)]
    rows = [row for row in rows if row]  # drop blank lines
    if not rows:
        raise EmptyFile(f"{path} contains no data")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(i + 1)

    has_header = False
    has_labels = False
    if not _is_number(rows[0][0].strip()):
        has_header = len(rows) > 1 and width > 1 and not _is_number(rows[0][1].strip())
        data_start = 1 if has_header else 0
        if data_start < len(rows):
            has_labels = not _is_number(rows[data_start][0].strip())
        if not has_header and not has_labels:
            raise NonNumericCell(1, 1)

    data_rows = rows[1:] if has_header else rows
    if not data_rows:
        raise EmptyFile(f"{path} has a header but no data rows")
    labels = None
    if has_labels:
        labels = tuple(row[0].strip() for row in data_rows)
    col_start = 1 if has_labels else 0

    values = np.empty((len(data_rows), width - col_start))
    for i, row in enumerate(data_rows):
        for j in range(col_start, width):
            cell = row[j].strip()
            try:
                values[i, j - col_start] = float(cell)
            except ValueError:
                line = i + (2 if has_header else 1)
                raise NonNumericCell(line, j + 1) from None
    if transpose:
        values = values.T
        labels = None
    return DataMatrix(values, row_labels=labels)


def write_csv(m: DataMatrix, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for i in range(m.n_vars):
            row = [f"{x:.17g}" for x in m.values[i]]
            if m.row_labels is not None:
                row = [m.row_labels[i]] + row
            writer.writerow(row)


def _f6(x) -> float | str:
    """Render to 6 significant digits; infinities become the string 'inf'."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.6g}")


def _f6_list(xs) -> list:
    return [_f6(x) for x in xs]


def _variant_dict(vr: VariantResult) -> dict:
    out = {
        "variant": vr.variant.label,
        "condition": {
            "lambda_max": _f6(vr.condition.lambda_max),
            "lambda_min": _f6(vr.condition.lambda_min),
            "condition_number": _f6(vr.condition.condition_number),
        },
        "n_components": vr.n_components,
        "n_samples": vr.n_samples,
        "passthrough_rows": list(vr.passthrough_rows),
        "eigenvalues": _f6_list(vr.spectrum_summary),
    }
    if vr.sweep is not None:
        out["k_star"] = vr.sweep.optimal_k
        out["k_values"] = list(vr.sweep.k_values)
        out["db_scores"] = _f6_list(vr.sweep.db_scores)
    return out


def report_dict(report: ExperimentReport | VariantResult, config: PipelineConfig | None = None) -> dict:
    """Assemble the serializable report structure with a fixed key order."""
    if isinstance(report, VariantResult):
        bound = report.bound
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": (config or PipelineConfig()).to_dict(),
            "wishart": {
                "ratio": _f6(bound.ratio_r),
                "lambda_plus": _f6(bound.lambda_plus),
                "lambda_minus": _f6(bound.lambda_minus),
            },
            "variants": [_variant_dict(report)],
        }
        return doc

    cfg = config or report.config
    bound = report.variants[0].bound if report.variants else None
    ordered = sorted(
        report.variants,
        key=lambda v: ("raw", "emd", "pca-k", "pca-w").index(v.variant.value),
    )
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
    }
    if bound is not None:
        doc["wishart"] = {
            "ratio": _f6(bound.ratio_r),
            "lambda_plus": _f6(bound.lambda_plus),
            "lambda_minus": _f6(bound.lambda_minus),
        }
    doc["condition_numbers"] = {
        vr.variant.label: _f6(vr.condition.condition_number) for vr in ordered
    }
    if report.empty_wishart:
        doc["condition_numbers"]["PCA-W"] = "no_informative_components"
    doc["variants"] = [_variant_dict(vr) for vr in ordered]
    doc["components"] = {}
    pca_w = next((v for v in ordered if v.variant is Variant.PCA_W), None)
    pca_k = next((v for v in ordered if v.variant is Variant.PCA_K), None)
    if pca_k is not None:
        doc["components"]["kaiser"] = pca_k.n_components
    if pca_w is not None:
        doc["components"]["wishart"] = pca_w.n_components
    elif report.empty_wishart:
        doc["components"]["wishart"] = "no_informative_components"
    doc["cluster_counts"] = {
        vr.variant.label: vr.sweep.optimal_k
        for vr in ordered
        if vr.sweep is not None
    }
    if report.verdict is not None:
        v = report.verdict
        doc["theorem"] = {
            "k_star": v.k_star,
            "c_kaiser": v.c_kaiser,
            "c_wishart": v.c_wishart,
            "gap_kaiser": v.gap_kaiser,
            "gap_wishart": v.gap_wishart,
            "similarity_tolerance": v.similarity_tolerance,
            "verdict_kaiser": v.verdict_kaiser,
            "verdict_wishart": v.verdict_wishart,
        }
    elif report.empty_wishart:
        doc["theorem"] = "no_informative_components"
    doc["bound_checks"] = [
        {
            "variant": vr.variant.label,
            "k": chk.k,
            "total_variance": _f6(chk.total_variance),
            "eigen_sum": _f6(chk.eigen_sum),
            "lower": _f6(chk.lower),
            "j_k": _f6(chk.j_k),
            "satisfied": chk.satisfied,
            "lower_strict": chk.lower_strict,
            "upper_strict": chk.upper_strict,
        }
        for vr, chk in zip(
            [v for v in report.variants if v.sweep is not None], report.bound_checks
        )
    ]
    return doc


def write_report(
    report: ExperimentReport | VariantResult,
    path: str,
    config: PipelineConfig | None = None,
) -> None:
    doc = report_dict(report, config)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def export_plot_data(reports, out_dir: str) -> None:
    """Write tab-separated stand-ins for the spectrum, K*, and C figures.

    Accepts one report or a list of replicate reports; replicate tables are
    ordered by replicate id.
    """
    if isinstance(reports, (ExperimentReport, VariantResult)):
        reports = [reports]
    os.makedirs(out_dir, exist_ok=True)

    first = reports[0]
    variants = first.variants if isinstance(first, ExperimentReport) else (first,)
    for vr in variants:
        fname = os.path.join(out_dir, f"spectrum_{vr.variant.value}.tsv")
        with open(fname, "w", encoding="utf-8") as fh:
            fh.write("rank\teigenvalue\tkaiser_line\twishart_line\n")
            for rank, lam in enumerate(vr.spectrum_summary, start=1):
                fh.write(
                    f"{rank}\t{_f6(lam)}\t1.0\t{_f6(vr.bound.lambda_plus)}\n"
                )

    full = [r for r in reports if isinstance(r, ExperimentReport)]
    if full:
        with open(os.path.join(out_dir, "clusters.tsv"), "w", encoding="utf-8") as fh:
            fh.write("replicate\traw\temd\tpca_k\tpca_w\n")
            for rep, r in enumerate(full):
                stars = {
                    vr.variant.value: vr.sweep.optimal_k
                    for vr in r.variants
                    if vr.sweep is not None
                }
                fh.write(
                    f"{rep}\t{stars.get('raw', '')}\t{stars.get('emd', '')}\t"
                    f"{stars.get('pca-k', '')}\t{stars.get('pca-w', '')}\n"
                )
        with open(os.path.join(out_dir, "components.tsv"), "w", encoding="utf-8") as fh:
            fh.write("replicate\tkaiser\twishart\n")
            for rep, r in enumerate(full):
                counts = {
                    vr.variant.value: vr.n_components
                    for vr in r.variants
                    if vr.variant in (Variant.PCA_K, Variant.PCA_W)
                }
                fh.write(
                    f"{rep}\t{counts.get('pca-k', '')}\t{counts.get('pca-w', '')}\n"
                )
