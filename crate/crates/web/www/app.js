// Build the bindings with `wasm-pack build crates/web --target web --out-dir www/pkg`.
import init, { check, evaluate, examples } from "./pkg/foundalog_web.js";

const $ = (id) => document.getElementById(id);

// Declaration choices the user made, by predicate, e.g. "p/1" -> {certain, complete, closed}.
let chosen = new Map();
let lastDecls = [];

function overrides() {
  const specs = [];
  for (const [pred, d] of chosen) {
    if (d.certain) {
      specs.push(`${pred}=certain`);
    } else {
      specs.push(`${pred}=uncertain,${d.complete ? "complete" : "not-complete"},${d.closed ? "closed" : "not-closed"}`);
    }
  }
  return specs.join(";");
}

function el(tag, attrs = {}, ...children) {
  const node = document.createElement(tag);
  Object.assign(node, attrs);
  node.append(...children);
  return node;
}

function toggle(pred, field, value) {
  const current = lastDecls.find((d) => d.pred === pred);
  const d = chosen.get(pred) ?? { certain: current.certain, complete: current.complete, closed: current.closed };
  d[field] = value;
  if (field === "certain" && !value && !chosen.has(pred)) {
    d.complete = true;
  }
  chosen.set(pred, d);
  run();
}

function renderDecls(decls) {
  lastDecls = decls;
  const rows = decls.map((d) => {
    const box = (field, label, enabled) => {
      const input = el("input", { type: "checkbox", checked: d[field], disabled: !enabled });
      input.addEventListener("change", () => toggle(d.pred, field, input.checked));
      return el("td", {}, el("label", { className: enabled ? "" : "off" }, input, " " + label));
    };
    const uncertain = !d.certain;
    const certainBox = el("input", { type: "checkbox", checked: d.certain, disabled: !d.may_be_certain && !d.certain });
    certainBox.addEventListener("change", () => toggle(d.pred, "certain", certainBox.checked));
    return el(
      "tr",
      {},
      el("td", { className: "pred" }, d.pred),
      el("td", {}, el("label", { className: d.may_be_certain ? "" : "off" }, certainBox, " certain")),
      box("complete", "complete", uncertain),
      box("closed", "closed", uncertain),
    );
  });
  $("decls").replaceChildren(el("table", {}, ...rows));
}

function atomList(title, cls, atoms) {
  return [el("h2", { className: cls }, `${title} (${atoms.length})`), el("div", { className: "atoms " + cls }, atoms.join("\n") || "(none)")];
}

function certainPreds() {
  return new Set(lastDecls.filter((d) => d.certain).map((d) => d.pred.split("/")[0]));
}

function renderReport(report) {
  const out = [];
  if (report.founded) {
    const certain = certainPreds();
    const showAll = $("show-false").checked;
    const falseAtoms = report.founded.false.filter((a) => showAll || !certain.has(a.split("(")[0]));
    const hidden = report.founded.false.length - falseAtoms.length;
    out.push(el("h2", {}, "Founded model"));
    out.push(...atomList("true", "T", report.founded.true));
    out.push(...atomList("undefined", "UD", report.founded.undefined));
    out.push(...atomList(hidden ? `false, ${hidden} hidden` : "false", "F", falseAtoms));
  }
  if (report.constraint_models) {
    const n = report.constraint_models.length;
    out.push(el("h2", {}, `Constraint models: ${n}${report.truncated ? ", truncated" : ""}`));
    const lines = report.constraint_models.map((m) => "{" + m.join(", ") + "}");
    out.push(el("div", { className: "atoms" }, lines.join("\n") || "(none)"));
  }
  $("output").replaceChildren(...out);
}

function run() {
  const result = JSON.parse(evaluate($("source").value, overrides(), $("semantics").value, Number($("max-models").value) || 1));
  if (result.error) {
    $("output").replaceChildren(el("div", { className: "error" }, result.error));
    return;
  }
  renderDecls(result.declarations);
  renderReport(result.report);
}

function load(example) {
  $("source").value = example.source;
  chosen = new Map();
  for (const spec of example.declare) {
    const [pred, words] = spec.split("=");
    const list = words.split(",");
    const certain = list.includes("certain");
    chosen.set(pred, { certain, complete: !list.includes("not-complete"), closed: list.includes("closed") });
  }
  run();
}

await init();
const all = JSON.parse(examples());
for (const [i, ex] of all.entries()) {
  $("example").append(el("option", { value: i }, ex.name));
}
$("example").addEventListener("change", () => load(all[Number($("example").value)]));
// Keep declaration choices for predicates the edited program still has.
$("run").addEventListener("click", () => {
  const checked = JSON.parse(check($("source").value, ""));
  if (!checked.error) {
    const present = new Set(checked.declarations.map((d) => d.pred));
    chosen = new Map([...chosen].filter(([pred]) => present.has(pred)));
  }
  run();
});
for (const id of ["semantics", "max-models", "show-false"]) {
  $(id).addEventListener("change", run);
}
load(all[0]);
