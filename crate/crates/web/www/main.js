import init, { potential_curves, spectrum_table, oracle_compare } from "./pkg/dirac_sphere_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = { A_u: "#1f77b4", Veff1: "#d62728", Veff2: "#2ca02c" };

function config() {
  const num = (id) => ($(id).value === "" ? undefined : Number($(id).value));
  const model = Number($("model").value);
  const cfg = { model, R: num("R"), k: num("k"), levels: num("levels"), grid: { L: num("L"), N: 1201 } };
  if (num("C1") !== undefined) cfg.C1 = num("C1");
  if (model === 1) {
    cfg.branch = $("branch").value;
  } else if (num("alpha") !== undefined && num("beta") !== undefined) {
    cfg.alpha = num("alpha");
    cfg.beta = num("beta");
  }
  return JSON.stringify(cfg);
}

function guarded(f) {
  return () => {
    $("error").textContent = "";
    try {
      f();
    } catch (e) {
      $("error").textContent = String(e);
    }
  };
}

// Robust vertical range: clip the outer 2% so poles do not flatten the plot.
function yRange(series) {
  const all = series.flat().filter((v) => v !== null).sort((a, b) => a - b);
  if (all.length === 0) return [-1, 1];
  const lo = all[Math.floor(0.02 * (all.length - 1))];
  const hi = all[Math.ceil(0.98 * (all.length - 1))];
  const pad = 0.08 * (hi - lo || 1);
  return [lo - pad, hi + pad];
}

function plotCurves() {
  const data = JSON.parse(potential_curves(config(), 1201));
  const canvas = $("plot");
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const w = data.w;
  const keys = ["A_u", "Veff1", "Veff2"];
  const [ymin, ymax] = yRange(keys.map((k) => data[k]));
  const sx = (x) => ((x - w[0]) / (w[w.length - 1] - w[0])) * (width - 50) + 40;
  const sy = (y) => height - 20 - ((y - ymin) / (ymax - ymin)) * (height - 30);

  ctx.strokeStyle = "#aaa";
  ctx.fillStyle = "#555";
  ctx.beginPath();
  ctx.moveTo(sx(0), 0);
  ctx.lineTo(sx(0), height);
  if (ymin < 0 && ymax > 0) {
    ctx.moveTo(0, sy(0));
    ctx.lineTo(width, sy(0));
  }
  ctx.stroke();
  ctx.fillText(ymax.toPrecision(3), 2, 12);
  ctx.fillText(ymin.toPrecision(3), 2, height - 22);
  ctx.fillText(`w = ${w[0].toFixed(1)}`, 40, height - 4);
  ctx.fillText(`w = ${w[w.length - 1].toFixed(1)}`, width - 70, height - 4);

  for (const key of keys) {
    ctx.strokeStyle = COLORS[key];
    ctx.beginPath();
    let pen = false;
    data[key].forEach((y, i) => {
      if (y === null || y < ymin - 10 * (ymax - ymin) || y > ymax + 10 * (ymax - ymin)) {
        pen = false;
        return;
      }
      if (pen) ctx.lineTo(sx(w[i]), sy(y));
      else ctx.moveTo(sx(w[i]), sy(y));
      pen = true;
    });
    ctx.stroke();
  }
  ctx.strokeStyle = "#999";
  ctx.setLineDash([4, 4]);
  for (const p of data.poles) {
    ctx.beginPath();
    ctx.moveTo(sx(p), 0);
    ctx.lineTo(sx(p), height);
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function renderTable(rows, columns) {
  const fmt = (v) => (v === null || v === undefined ? "-" : typeof v === "number" ? v.toPrecision(8) : String(v));
  const head = columns.map((c) => `<th>${c}</th>`).join("");
  const body = rows.map((r) => `<tr>${columns.map((c) => `<td>${fmt(r[c])}</td>`).join("")}</tr>`).join("");
  $("table").innerHTML = `<table><tr>${head}</tr>${body}</table>`;
}

function showSpectrum() {
  renderTable(JSON.parse(spectrum_table(config())), ["level", "E_sq_bar", "E_minus", "E_plus", "physical", "reason"]);
}

function showComparison() {
  const data = JSON.parse(oracle_compare(config()));
  renderTable(data.levels, ["level", "closed", "oracle", "difference"]);
  $("table").insertAdjacentHTML("beforeend", `<p>grid L = ${data.grid.L}, N = ${data.grid.N}</p>`);
}

await init();
$("curves").addEventListener("click", guarded(plotCurves));
$("spectrum").addEventListener("click", guarded(showSpectrum));
$("compare").addEventListener("click", guarded(showComparison));
guarded(plotCurves)();
