import init, { binaryCurves, ternaryMap, analyze } from "./pkg/possibility_demo.js";

const COLORS = ["#1f77b4", "#2ca02c", "#d62728"];
const GRID_POINTS = 199;
const MAP_STEP = 0.01;

// Sliders run over log10(n) in [0, 2].
const sliderExponent = (input) => Math.round(10 ** Number(input.value) * 100) / 100;

function drawCurves() {
  const input = document.getElementById("curve-n");
  const n = sliderExponent(input);
  document.getElementById("curve-n-value").textContent = n.toFixed(2);
  const rows = binaryCurves(new Float64Array([n]), GRID_POINTS);
  const width = 4;

  const canvas = document.getElementById("curve");
  const ctx = canvas.getContext("2d");
  const pad = 30;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const x = (p) => pad + p * w;
  const y = (v) => pad + (1 - v) * h;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#555";
  ctx.fillText("0", pad - 10, y(0) + 4);
  ctx.fillText("1", pad - 10, y(1) + 4);
  ctx.fillText("p", x(1) - 4, y(0) + 16);

  for (let column = 1; column < width; column++) {
    ctx.strokeStyle = COLORS[column - 1];
    ctx.beginPath();
    for (let r = 0; r < rows.length / width; r++) {
      const px = x(rows[r * width]);
      const py = y(rows[r * width + column]);
      if (r === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
    }
    ctx.stroke();
  }
}

function drawMap() {
  const input = document.getElementById("map-n");
  const n = sliderExponent(input);
  document.getElementById("map-n-value").textContent = n.toFixed(2);
  const rows = ternaryMap(n, MAP_STEP);

  const canvas = document.getElementById("map");
  const ctx = canvas.getContext("2d");
  const pad = 20;
  const size = canvas.width - 2 * pad;
  const cell = Math.ceil(size * MAP_STEP) + 1;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (let r = 0; r < rows.length / 3; r++) {
    const p1 = rows[3 * r];
    const p2 = rows[3 * r + 1];
    const shade = Math.round(255 * (1 - rows[3 * r + 2]));
    ctx.fillStyle = `rgb(${shade}, ${shade}, 255)`;
    ctx.fillRect(pad + p1 * size, pad + (1 - p2) * size - cell, cell, cell);
  }
  ctx.fillStyle = "#555";
  ctx.fillText("p₁", canvas.width - pad - 10, canvas.height - 4);
  ctx.fillText("p₂", 2, pad + 4);
}

function fmt(v) {
  return v.toFixed(6);
}

function runAnalysis() {
  const out = document.getElementById("analysis");
  try {
    const masses = document.getElementById("masses").value
      .split(/[,\s]+/)
      .filter((s) => s.length > 0)
      .map(Number);
    const n = Number(document.getElementById("analyze-n").value);
    const a = analyze(new Float64Array(masses), n);
    const columns = [
      ["p", a.probability],
      ["symmetric", a.symmetric],
      ["optimal", a.optimal],
      [`generalized n=${n}`, a.generalized],
      ["recovered p", a.recovered],
    ];
    let html = "<table><tr><th>outcome</th>" + columns.map(([name]) => `<th>${name}</th>`).join("") + "</tr>";
    for (let i = 0; i < a.probability.length; i++) {
      html += `<tr><td>${i}</td>` + columns.map(([, values]) => `<td>${fmt(values[i])}</td>`).join("") + "</tr>";
    }
    html += "</table>";
    html += `<p>specificity: symmetric ${fmt(a.specificitySymmetric)}, generalized ${fmt(a.specificityGeneralized)}</p>`;
    html += `<p>converse: ${a.solverConverged ? "converged" : "did not converge"} after ${a.solverIterations} iterations</p>`;
    out.innerHTML = html;
    a.free();
  } catch (err) {
    out.innerHTML = `<p class="error">${err.message ?? err}</p>`;
  }
}

await init();
document.getElementById("curve-n").addEventListener("input", drawCurves);
document.getElementById("map-n").addEventListener("input", drawMap);
document.getElementById("analyze").addEventListener("click", runAnalysis);
drawCurves();
drawMap();
runAnalysis();
