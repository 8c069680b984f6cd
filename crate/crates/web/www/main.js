import init, { randomTriangulation, checkGenus3, census } from "./pkg/tropimod_web.js";

const $ = (id) => document.getElementById(id);

function fail(el, e) {
  el.textContent = String(e.message ?? e);
  el.className = "error";
}

function draw(canvas, triangles) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const pts = triangles.flat();
  const xs = pts.map((p) => p[0]), ys = pts.map((p) => p[1]);
  const [x0, y0] = [Math.min(...xs), Math.min(...ys)];
  const span = Math.max(Math.max(...xs) - x0, Math.max(...ys) - y0, 1);
  const pad = 20, s = (canvas.width - 2 * pad) / span;
  const at = ([x, y]) => [pad + (x - x0) * s, canvas.height - pad - (y - y0) * s];
  ctx.strokeStyle = "#335";
  for (const t of triangles) {
    ctx.beginPath();
    t.forEach((p, i) => (i ? ctx.lineTo(...at(p)) : ctx.moveTo(...at(p))));
    ctx.closePath();
    ctx.stroke();
  }
  ctx.fillStyle = "#c33";
  for (const p of pts) {
    const [x, y] = at(p);
    ctx.beginPath();
    ctx.arc(x, y, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

await init();

$("tri-go").onclick = () => {
  const info = $("tri-info");
  info.className = "";
  try {
    const r = JSON.parse(randomTriangulation($("tri-poly").value, Number($("tri-seed").value), Number($("tri-steps").value)));
    const dim = r.regular ? `moduli cone dimension ${r.dimension}` : "not regular";
    info.textContent = `genus ${r.genus}, skeleton ${r.skeleton || "-"}, ${dim}`;
    draw($("tri-canvas"), r.triangles);
  } catch (e) {
    fail(info, e);
  }
};

$("chk-go").onclick = () => {
  const out = $("chk-out");
  out.className = "";
  try {
    const r = JSON.parse(checkGenus3($("chk-graph").value, $("chk-lengths").value));
    const word = (b) => (b ? "realizable" : "not realizable");
    out.textContent = `${r.graph}: ${word(r.quartic)} by a quartic, ${word(r.hyperelliptic)} by a hyperelliptic curve`;
  } catch (e) {
    fail(out, e);
  }
};

$("cen-go").onclick = () => {
  const out = $("cen-out");
  out.className = "";
  try {
    out.textContent = census($("cen-poly").value);
  } catch (e) {
    fail(out, e);
  }
};

$("tri-go").click();
