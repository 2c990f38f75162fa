#include "bohmlab/cli/commands.hpp"
#include "bohmlab/cli/io.hpp"

namespace bohmlab::cli {

namespace {

// Shared CSV/heatmap helpers embedded in every emitted script.
constexpr const char* kCommon = R"PY(import csv
import json
import os

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(name):
    with open(name, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return header, body


def column(header, body, name, cast=float):
    i = header.index(name)
    return [cast(row[i]) for row in body]


def draw_density(ax):
    """rho(x,t) heatmap from density.csv when present."""
    if not os.path.exists("density.csv"):
        return False
    header, body = read_csv("density.csv")
    xs = np.array([float(v) for v in header[1:]])
    ts = np.array([float(row[0]) for row in body])
    rho = np.array([[float(v) for v in row[1:]] for row in body])
    mesh = ax.pcolormesh(xs, ts, rho, shading="auto", cmap="magma")
    plt.colorbar(mesh, ax=ax, label="rho(x,t)")
    return True


def draw_trajectories(ax, method_filter=None):
    header, body = read_csv("trajectories.csv")
    runs = {}
    for row in body:
        p0, method, t, x = row[1], row[2], float(row[3]), float(row[4])
        if method_filter is not None and method != method_filter:
            continue
        runs.setdefault((p0, method), ([], []))
        runs[(p0, method)][0].append(t)
        runs[(p0, method)][1].append(x)
    for (p0, method), (ts, xs) in sorted(runs.items()):
        style = "-" if method == "quantile" else "--"
        ax.plot(xs, ts, style, lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
)PY";

constexpr const char* kProtect = R"PY(
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 5))

draw_density(ax1)
draw_trajectories(ax1, method_filter="quantile")
ax1.set_title("trajectories over rho(x,t)")

with open("summary.json") as fh:
    summary = json.load(fh)

header, body = read_csv("frames.csv")
ts = column(header, body, "t")
probs = column(header, body, "interval_prob")
ax2.plot(ts, probs, label="ensemble P[a<=x<=b](t)")
ax2.axhline(summary["time_avg_interval_prob"], ls="--", c="C1",
            label="time-avg ensemble prob")
ax2.axhline(0.0, ls=":", c="C2", label="never-entering trajectory occupancy")
ax2.set_xlabel("t")
ax2.set_ylabel("interval probability")
ax2.set_title("time average vs ensemble average")
ax2.legend(loc="best", fontsize=8)

fig.tight_layout()
fig.savefig("protect.png", dpi=150)
print("wrote protect.png")
)PY";

constexpr const char* kTrajectories = R"PY(
fig, ax = plt.subplots(figsize=(7, 6))
draw_density(ax)
draw_trajectories(ax)
ax.set_title("Bohmian trajectories")
fig.tight_layout()
fig.savefig("trajectories.png", dpi=150)
print("wrote trajectories.png")
)PY";

constexpr const char* kLemma = R"PY(
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 5))

draw_density(ax1)
draw_trajectories(ax1)
ax1.set_title("dual-method trajectories (solid quantile, dashed ODE)")

header, body = read_csv("lemma.csv")
p0s = column(header, body, "p0")
sup = column(header, body, "sup_diff")
drift = column(header, body, "max_quantile_drift")
ax2.plot(p0s, sup, "o-", label="sup |x_ode - x_quantile|")
ax2.plot(p0s, drift, "s--", label="max quantile drift")
ax2.set_xlabel("initial quantile p0")
ax2.set_yscale("log")
ax2.set_title("quantile-conservation check")
ax2.legend(loc="best", fontsize=8)

fig.tight_layout()
fig.savefig("lemma.png", dpi=150)
print("wrote lemma.png")
)PY";

}  // namespace

void emit_plot_script(PlotKind kind, const std::filesystem::path& run_dir) {
  std::string script = "#!/usr/bin/env python3\n";
  switch (kind) {
    case PlotKind::Protect:
      script += "\"\"\"Protective-measurement run plots (run inside the run directory).\"\"\"\n";
      break;
    case PlotKind::Trajectories:
      script += "\"\"\"Trajectory run plots (run inside the run directory).\"\"\"\n";
      break;
    case PlotKind::Lemma:
      script += "\"\"\"Lemma-check run plots (run inside the run directory).\"\"\"\n";
      break;
  }
  script += kCommon;
  switch (kind) {
    case PlotKind::Protect:
      script += kProtect;
      break;
    case PlotKind::Trajectories:
      script += kTrajectories;
      break;
    case PlotKind::Lemma:
      script += kLemma;
      break;
  }
  write_text_file(run_dir / "plot.py", script);
}

}  // namespace bohmlab::cli
