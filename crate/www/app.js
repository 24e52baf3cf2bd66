import init, { decide, covering_grid, sieve } from "./pkg/locus_web.js";

const $ = (id) => document.getElementById(id);

function show(el, text, cls = "") {
  el.textContent = text;
  el.className = "summary " + cls;
}

function bind(formId, run) {
  $(formId).addEventListener("submit", (ev) => {
    ev.preventDefault();
    run(new FormData(ev.target));
  });
}

function onDecide(data) {
  const out = $("decide-out");
  try {
    const doc = JSON.parse(decide(data.get("set"), +data.get("n"), +data.get("bound")));
    let text = `${doc.status}: ${doc.certificate.kind.replaceAll("_", " ")}`;
    if (doc.counterexample) text += `; fails at p = ${doc.counterexample}`;
    text += doc.verified ? " (certificate checks out)" : " (certificate did not re-check)";
    show($("decide-summary"), text, doc.status);
    out.textContent = JSON.stringify(doc, null, 2);
  } catch (e) {
    show($("decide-summary"), e.message ?? String(e), "error");
    out.textContent = "";
  }
}

function onGrid(data) {
  const box = $("grid");
  box.replaceChildren();
  let g;
  try {
    g = JSON.parse(covering_grid(data.get("set"), +data.get("q")));
  } catch (e) {
    show($("grid-summary"), e.message ?? String(e), "error");
    return;
  }
  const axes = g.support.length ? g.support.map(String) : ["-", "-"];
  const reps = g.reps.map((r) => r.replace(/\/1$/, ""));
  show(
    $("grid-summary"),
    (g.covered ? "Covered" : "Not covered") +
      ` over F_${g.q}^2; rows are exponents of ${axes[0]}, columns of ${axes[1] ?? "-"}. ` +
      `Forms: ${reps.map((r, i) => `${r} = (${g.forms[i].join(", ")})`).join(", ")}`,
    g.covered ? "holds" : "fails",
  );
  const table = document.createElement("table");
  table.className = "grid";
  const head = table.insertRow();
  head.appendChild(document.createElement("th"));
  for (let b = 0; b < g.q; b++) head.appendChild(Object.assign(document.createElement("th"), { textContent: b }));
  g.rows.forEach((row, a) => {
    const tr = table.insertRow();
    tr.appendChild(Object.assign(document.createElement("th"), { textContent: a }));
    row.forEach((hits, b) => {
      const td = tr.insertCell();
      td.className = hits.length ? "hit" : "miss";
      td.textContent = hits.length ? hits.length : "";
      td.title = hits.length
        ? `(${a}, ${b}) lies on the lines of ${hits.map((i) => reps[i]).join(", ")}`
        : `(${a}, ${b}) is uncovered`;
    });
  });
  box.appendChild(table);
}

function onSieve(data) {
  try {
    const r = JSON.parse(sieve(data.get("set"), +data.get("n"), +data.get("lo"), +data.get("hi")));
    show(
      $("sieve-summary"),
      `${r.failing_primes.length} of ${r.tested_count} primes tested have no ${r.params.k}-th power residue in the set` +
        ` (excluded: ${r.params.excluded.join(", ") || "none"})`,
      r.failing_primes.length ? "fails" : "holds",
    );
    $("sieve-out").textContent = r.failing_primes.join(" ");
  } catch (e) {
    show($("sieve-summary"), e.message ?? String(e), "error");
    $("sieve-out").textContent = "";
  }
}

await init();
bind("decide-form", onDecide);
bind("grid-form", onGrid);
bind("sieve-form", onSieve);
for (const id of ["decide-form", "grid-form", "sieve-form"]) $(id).requestSubmit();
