import init, { sampleNetwork, mapNetwork, reportMarkdown, titleSimilarity } from "./pkg/scimap_web.js";

const $ = (id) => document.getElementById(id);
const PALETTE = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0",
                 "#f032e6", "#bcf60c", "#008080", "#9a6324", "#800000", "#000075"];

function fail(e) {
  $("error").textContent = e instanceof Error ? e.message : String(e);
}

function timed(label, f) {
  $("error").textContent = "";
  const t = performance.now();
  try {
    f();
    $("status").textContent = `${label} in ${(performance.now() - t).toFixed(0)} ms`;
  } catch (e) {
    fail(e);
  }
}

function draw(map) {
  const canvas = $("canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const maxDegree = Math.max(1, ...map.nodes.map((n) => n.degree));
  ctx.strokeStyle = "rgba(0, 0, 0, 0.12)";
  for (const [s, t] of map.edges) {
    const a = map.nodes[s], b = map.nodes[t];
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }
  for (const n of map.nodes) {
    ctx.fillStyle = n.cluster < PALETTE.length ? PALETTE[n.cluster] : "#999";
    ctx.beginPath();
    ctx.arc(n.x, n.y, 2 + 8 * Math.sqrt(n.degree / maxDegree), 0, 2 * Math.PI);
    ctx.fill();
  }
  // Label the best-connected node of each cluster.
  const hubs = new Map();
  for (const n of map.nodes) {
    const h = hubs.get(n.cluster);
    if (!h || n.degree > h.degree) hubs.set(n.cluster, n);
  }
  ctx.fillStyle = "#222";
  ctx.font = "12px system-ui";
  for (const n of hubs.values()) ctx.fillText(n.label, n.x + 8, n.y - 8);
}

function layOut() {
  timed("laid out", () => {
    const canvas = $("canvas");
    const json = mapNetwork($("edges").value, canvas.width, canvas.height,
                            Number($("iterations").value), Number($("seed").value));
    const map = JSON.parse(json);
    draw(map);
    const q = map.modularity === null ? "n/a" : map.modularity.toFixed(4);
    $("report-out").textContent = `${map.nodes.length} nodes, ${map.edges.length} edges, ` +
      `${map.clusters} clusters, modularity ${q}`;
  });
}

function sample() {
  timed("generated", () => {
    $("edges").value = sampleNetwork($("kind").value, Number($("records").value),
                                     Number($("sample-seed").value));
  });
  layOut();
}

function similarity() {
  const s = titleSimilarity($("title-a").value, $("title-b").value);
  $("similarity").textContent = Number.isNaN(s) ? "undefined (both empty)" : `${s.toFixed(2)}%`;
}

await init();
$("sample").addEventListener("click", sample);
$("map").addEventListener("click", layOut);
$("report").addEventListener("click", () =>
  timed("analyzed", () => {
    $("report-out").textContent = reportMarkdown($("edges").value, 1.0, Number($("seed").value));
  }));
$("title-a").addEventListener("input", similarity);
$("title-b").addEventListener("input", similarity);
similarity();
sample();
