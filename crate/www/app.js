// Plain-DOM glue between the page and the wasm module. Build the module
// first:
//
//   wasm-pack build crates/demo --target web --out-dir ../../www/pkg
//
// then serve this directory (any static server) and open index.html.

import init, {
  scenarioCatalog,
  evaluateScenario,
  queueChartSvg,
  strictnessSweep,
} from "./pkg/fsbp_demo.js";

const $ = (id) => document.getElementById(id);

const METRIC_LABELS = {
  utilization: "utilization",
  avg_queue_length: "avg queue length",
  dropped: "dropped requests",
  avg_time_in_system_days: "time in system (days)",
};

function verdictPhrase(row) {
  const pct = row.delta_percent == null ? null : Math.round(Math.abs(row.delta_percent));
  switch (row.verdict) {
    case "increased":
      return `Increased by ${pct}%`;
    case "decreased":
      return `Decreased by ${pct}%`;
    case "unchanged":
      return "Unchanged";
    case "removed":
      return "-----";
    case "added":
      return row.before == null ? "Added" : "Added load";
    default:
      return row.verdict;
  }
}

function fmt(x, digits = 3) {
  if (x == null) return "—";
  return Number(x).toFixed(digits).replace(/\.?0+$/, "") || "0";
}

function el(tag, attrs = {}, children = []) {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    if (k === "class") node.className = v;
    else if (k === "text") node.textContent = v;
    else node.setAttribute(k, v);
  }
  for (const child of children) node.appendChild(child);
  return node;
}

function comparisonTable(comparison) {
  const head = el("tr", {}, [
    el("th", { text: "block" }),
    el("th", { text: "metric" }),
    el("th", { class: "num", text: "before" }),
    el("th", { class: "num", text: "after" }),
    el("th", { text: "change" }),
  ]);
  const body = comparison.rows.map((row) => {
    const isSystem = row.block_id == null && row.block_name == null;
    return el("tr", { class: isSystem ? "system-row" : "" }, [
      el("td", { text: row.block_name ?? row.block_id ?? "whole process" }),
      el("td", { text: METRIC_LABELS[row.metric] ?? row.metric }),
      el("td", { class: "num", text: fmt(row.before) }),
      el("td", { class: "num", text: fmt(row.after) }),
      el("td", {}, [
        el("span", { class: `verdict-${row.verdict}`, text: verdictPhrase(row) }),
      ]),
    ]);
  });
  return el("table", {}, [head, ...body]);
}

function assessmentChips(title, assessment) {
  const wrap = el("div");
  wrap.appendChild(el("h3", { text: title }));
  for (const [vector, indicators] of [
    ["S", assessment.S],
    ["O", assessment.O],
    ["L", assessment.L],
  ]) {
    if (!indicators.length) continue;
    const chips = el("div", { class: "chips" });
    for (const ind of indicators) {
      const chip = el("span", {
        class: "chip",
        title: ind.evidence,
      });
      chip.appendChild(el("b", { text: `${vector}·${ind.name} ${ind.value}` }));
      chip.appendChild(document.createTextNode(` ${ind.label}`));
      chips.appendChild(chip);
    }
    wrap.appendChild(chips);
  }
  return wrap;
}

function checkList(checks) {
  const wrap = el("div");
  wrap.appendChild(el("h3", { text: "Expected effects" }));
  for (const check of checks) {
    const state = check.passed == null ? "skip" : check.passed ? "pass" : "fail";
    const line = el("div", { class: "check" });
    line.appendChild(el("span", { class: `tag ${state}`, text: state.toUpperCase() }));
    line.appendChild(document.createTextNode(check.description));
    const details = [];
    if (check.before != null) details.push(`before ${fmt(check.before)}`);
    if (check.after != null) details.push(`after ${fmt(check.after)}`);
    if (check.pair_fraction != null)
      details.push(`${Math.round(check.pair_fraction * 100)}% of pairs`);
    if (details.length) {
      line.appendChild(el("span", { class: "muted", text: ` (${details.join(", ")})` }));
    }
    wrap.appendChild(line);
  }
  return wrap;
}

function sweepTable(sweep) {
  const head = el("tr", {}, [
    el("th", { class: "num", text: "strictness" }),
    el("th", { text: "block" }),
    el("th", { class: "num", text: "utilization" }),
    el("th", { class: "num", text: "queue" }),
    el("th", { class: "num", text: "valid fwd" }),
    el("th", { class: "num", text: "defective fwd" }),
    el("th", { class: "num", text: "rejected" }),
    el("th", { class: "num", text: "timeout drops" }),
    el("th", { class: "num", text: "objective" }),
  ]);
  const rows = sweep.rows.map((row) => {
    const isBest = sweep.best[row.block] === row.strictness;
    const objective = el("td", { class: "num" });
    objective.appendChild(
      el("span", { class: isBest ? "best" : "", text: fmt(row.objective, 1) })
    );
    if (isBest) objective.appendChild(document.createTextNode(" ★"));
    return el("tr", {}, [
      el("td", { class: "num", text: fmt(row.strictness, 2) }),
      el("td", { text: row.block }),
      el("td", { class: "num", text: fmt(row.utilization) }),
      el("td", { class: "num", text: fmt(row.avg_queue_length) }),
      el("td", { class: "num", text: fmt(row.forwarded_valid, 1) }),
      el("td", { class: "num", text: fmt(row.forwarded_defective, 1) }),
      el("td", { class: "num", text: fmt(row.rejected_by_control, 1) }),
      el("td", { class: "num", text: fmt(row.dropped_timeout, 1) }),
      objective,
    ]);
  });
  const note = el("p", {
    class: "muted",
    text: `Best shared setting across all control blocks: strictness ${fmt(sweep.global_best, 2)}.`,
  });
  const wrap = el("div", {}, [el("table", {}, [head, ...rows])]);
  wrap.appendChild(note);
  return wrap;
}

async function busy(button, status, work) {
  button.disabled = true;
  status.textContent = "running…";
  status.className = "muted";
  // Let the browser paint the status before the (synchronous) wasm call.
  await new Promise((resolve) => setTimeout(resolve, 20));
  try {
    await work();
    status.textContent = "";
  } catch (err) {
    status.textContent = String(err);
    status.className = "error";
  } finally {
    button.disabled = false;
  }
}

function currentScenario() {
  return $("scenario").value;
}

function refreshBlurb(catalog) {
  const entry = catalog.find((e) => e.id === currentScenario());
  $("scenario-blurb").textContent = entry ? entry.description : "";
  $("eval-output").replaceChildren();
  $("chart-holder").replaceChildren();
  $("sweep-output").replaceChildren();
}

async function main() {
  await init();
  const catalog = JSON.parse(scenarioCatalog());
  const select = $("scenario");
  for (const entry of catalog) {
    select.appendChild(el("option", { value: entry.id, text: entry.id }));
  }
  select.addEventListener("change", () => refreshBlurb(catalog));
  refreshBlurb(catalog);

  $("eval-run").addEventListener("click", () =>
    busy($("eval-run"), $("eval-status"), async () => {
      const reps = Number($("eval-reps").value) || 20;
      const report = JSON.parse(evaluateScenario(currentScenario(), reps));
      const out = $("eval-output");
      out.replaceChildren();
      if (report.comparison) {
        out.appendChild(comparisonTable(report.comparison));
      } else {
        out.appendChild(
          el("p", { class: "muted", text: "This scenario has no re-engineered variant; showing checks and indicators for the as-is model." })
        );
      }
      out.appendChild(assessmentChips("Indicators — as-is", report.assessment_as_is));
      if (report.assessment_as_will_be) {
        out.appendChild(assessmentChips("Indicators — as-will-be", report.assessment_as_will_be));
      }
      if (report.checks.length) out.appendChild(checkList(report.checks));
    })
  );

  $("chart-run").addEventListener("click", () =>
    busy($("chart-run"), $("chart-status"), async () => {
      const svg = queueChartSvg(
        currentScenario(),
        $("chart-variant").value,
        BigInt(Math.max(0, Number($("chart-seed").value) || 0))
      );
      $("chart-holder").innerHTML = svg;
    })
  );

  $("sweep-run").addEventListener("click", () =>
    busy($("sweep-run"), $("sweep-status"), async () => {
      const reps = Number($("sweep-reps").value) || 10;
      const sweep = JSON.parse(strictnessSweep(currentScenario(), $("sweep-grid").value, reps));
      const out = $("sweep-output");
      out.replaceChildren();
      out.appendChild(sweepTable(sweep));
    })
  );
}

main().catch((err) => {
  document.body.insertAdjacentHTML(
    "afterbegin",
    `<p class="error" style="padding:1rem">Failed to load the wasm module: ${err}. Did you run wasm-pack (see app.js header)?</p>`
  );
});
