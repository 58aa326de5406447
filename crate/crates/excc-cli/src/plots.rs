//! Plot-script generation: writes self-contained Python scripts next to
//! existing artifacts.
//!
//! The binary itself never draws anything; it inspects an artifact
//! directory and emits matplotlib scripts whose file lists are baked in
//! at generation time. Running the scripts is an offline step that
//! needs Python with matplotlib and nothing from this crate.

use std::fs;
use std::path::Path;

use crate::CliError;

const FIELDS_TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Field plots: modulus-plane views of sampled estimator values."""
import csv
import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

FILES = @FILES@


def read(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    data = [[float(x) for x in row] for row in rows[1:]]
    return header, data


for name in FILES:
    header, data = read(name)
    value_cols = [i for i, h in enumerate(header) if not h.startswith("z")]
    axis_count = (len(header) - len(value_cols)) // 2
    r1 = [math.hypot(row[0], row[1]) for row in data]
    plt.figure(figsize=(6, 4.5))
    if axis_count == 1:
        for ci in value_cols:
            plt.plot(r1, [row[ci] for row in data], ".", label=header[ci])
        plt.xlabel("|z1|")
        plt.legend()
    else:
        r2 = [math.hypot(row[2], row[3]) for row in data]
        values = [row[value_cols[0]] for row in data]
        try:
            tc = plt.tricontourf(r1, r2, values, levels=24)
            plt.colorbar(tc, label=header[value_cols[0]])
        except (ValueError, RuntimeError):
            sc = plt.scatter(r1, r2, c=values, s=16)
            plt.colorbar(sc, label=header[value_cols[0]])
        plt.xlabel("|z1|")
        plt.ylabel("|z2|")
    plt.title(name)
    out = name.rsplit(".", 1)[0] + ".png"
    plt.savefig(out, dpi=150, bbox_inches="tight")
    plt.close()
    print("wrote", out)
"#;

const CONVERGENCE_TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Convergence plot: estimator errors against the bracket width."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

with open("errors.csv", newline="") as fh:
    rows = list(csv.reader(fh))
header = rows[0]
data = [[float(x) for x in row] for row in rows[1:]]
n = [row[0] for row in data]
col = {name: i for i, name in enumerate(header)}

plt.figure(figsize=(6, 4.5))
plt.semilogy(n, [row[col["sup_error"]] for row in data], "o-", label="sup error")
plt.semilogy(n, [row[col["mean_error"]] for row in data], "s-", label="mean error")
plt.semilogy(n, [row[col["bracket_width"]] for row in data], "k--", label="bracket width")
plt.xlabel("n")
plt.ylabel("error")
plt.legend()
plt.savefig("errors.png", dpi=150, bbox_inches="tight")
print("wrote errors.png")
"#;

const RATES_TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Rate plot: approximation error curves on a log scale."""
import csv
import json
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

plt.figure(figsize=(6, 4.5))
if os.path.exists("rates.csv"):
    with open("rates.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    data = rows[1:]
    n = [int(row[0]) for row in data]
    plt.semilogy(n, [float(row[1]) for row in data], "o-", label="L2 error")
    plt.semilogy(n, [float(row[2]) for row in data], "s-", label="sup error")
if os.path.exists("rates_normalized.csv"):
    with open("rates_normalized.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    data = rows[1:]
    n = [int(row[0]) for row in data]
    plt.semilogy(n, [float(row[1]) for row in data], "o-", label="lp body")
    plt.semilogy(n, [float(row[2]) for row in data], "s-", label="tangent triangle")
if os.path.exists("rates_summary.json"):
    with open("rates_summary.json") as fh:
        summary = json.load(fh)
    keys = [k for k in ("l2_fitted", "target", "lp_fitted", "tri_fitted") if k in summary]
    note = ", ".join("%s=%.6g" % (k, summary[k]) for k in keys)
    plt.title(note, fontsize=9)
plt.xlabel("n")
plt.ylabel("error")
plt.legend()
plt.savefig("rates.png", dpi=150, bbox_inches="tight")
print("wrote rates.png")
"#;

const BALL_TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Diagonal sandwich plot: lower bound, estimate, upper bound."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

with open("ball_study.csv", newline="") as fh:
    rows = list(csv.reader(fh))
data = [[float(x) for x in row] for row in rows[1:]]
r = [row[0] for row in data]

plt.figure(figsize=(6, 4.5))
plt.plot(r, [row[1] for row in data], "v-", label="lower bound")
plt.plot(r, [row[2] for row in data], "o-", label="estimate")
plt.plot(r, [row[3] for row in data], "^-", label="upper bound")
plt.xlabel("r")
plt.ylabel("growth value at (r, r)")
plt.legend()
plt.savefig("ball_study.png", dpi=150, bbox_inches="tight")
print("wrote ball_study.png")
"#;

const MINIMAX_TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Minimax gap against degree, with the 1/4 limit line."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

with open("minimax.csv", newline="") as fh:
    rows = list(csv.reader(fh))
data = [[float(x) for x in row] for row in rows[1:]]

plt.figure(figsize=(6, 4.5))
plt.plot([row[0] for row in data], [row[1] for row in data], "o-", label="gap")
plt.axhline(0.25, color="k", linestyle="--", label="1/4")
plt.xlabel("degree")
plt.ylabel("best uniform gap")
plt.legend()
plt.savefig("minimax.png", dpi=150, bbox_inches="tight")
print("wrote minimax.png")
"#;

const ROOTS_TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Slice-root scatter with the unit circle for reference."""
import csv
import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

with open("roots.csv", newline="") as fh:
    rows = list(csv.reader(fh))
data = [[float(x) for x in row] for row in rows[1:]]

plt.figure(figsize=(5.5, 5.5))
plt.scatter([row[0] for row in data], [row[1] for row in data], s=6, alpha=0.5)
angles = [2.0 * math.pi * k / 512 for k in range(513)]
plt.plot([math.cos(a) for a in angles], [math.sin(a) for a in angles], "k--", linewidth=0.8)
plt.gca().set_aspect("equal")
plt.xlabel("Re")
plt.ylabel("Im")
plt.savefig("roots.png", dpi=150, bbox_inches="tight")
print("wrote roots.png")
"#;

/// Artifact groups and the script each one triggers.
const SCRIPT_RULES: &[(&str, &str)] = &[
    ("errors.csv", "plot_convergence.py"),
    ("rates.csv", "plot_rates.py"),
    ("rates_normalized.csv", "plot_rates.py"),
    ("ball_study.csv", "plot_ball_study.py"),
    ("minimax.csv", "plot_minimax.py"),
    ("roots.csv", "plot_roots.py"),
];

fn is_field_csv(name: &str) -> bool {
    name == "reference.csv"
        || name == "ensemble_mean.csv"
        || name == "envelope.csv"
        || (name.starts_with("field_n") && name.ends_with(".csv"))
}

/// Writes plot scripts for every recognized artifact in `dir`. Returns
/// the number of scripts written; a directory without any known
/// artifact is a validation error.
pub fn emit(dir: &Path) -> Result<usize, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| {
        CliError::Validation(format!("cannot read artifact directory {}: {e}", dir.display()))
    })?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .collect();
    names.sort();

    let mut written = 0usize;
    let field_files: Vec<&String> = names.iter().filter(|n| is_field_csv(n)).collect();
    if !field_files.is_empty() {
        let list = field_files
            .iter()
            .map(|n| format!("\"{n}\""))
            .collect::<Vec<String>>()
            .join(", ");
        let script = FIELDS_TEMPLATE.replace("@FILES@", &format!("[{list}]"));
        write_script(dir, "plot_fields.py", &script)?;
        written += 1;
    }
    for (artifact, script_name) in SCRIPT_RULES {
        if !names.iter().any(|n| n == artifact) {
            continue;
        }
        let body = match *script_name {
            "plot_convergence.py" => CONVERGENCE_TEMPLATE,
            "plot_rates.py" => RATES_TEMPLATE,
            "plot_ball_study.py" => BALL_TEMPLATE,
            "plot_minimax.py" => MINIMAX_TEMPLATE,
            "plot_roots.py" => ROOTS_TEMPLATE,
            _ => unreachable!("rule table and dispatch table must agree"),
        };
        if dir.join(script_name).exists() && *artifact == "rates_normalized.csv" {
            // Both rate artifacts map to the same script.
            continue;
        }
        write_script(dir, script_name, body)?;
        written += 1;
    }
    if written == 0 {
        return Err(CliError::Validation(format!(
            "no recognized artifacts in {}; run an experiment first",
            dir.display()
        )));
    }
    Ok(written)
}

fn write_script(dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    fs::write(dir.join(name), body).map_err(|e| {
        CliError::Validation(format!("cannot write {}: {e}", dir.join(name).display()))
    })
}
