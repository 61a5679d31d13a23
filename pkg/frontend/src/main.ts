/** Browser entry point: hash-routed views over the workbench API. */

import { AnnotateController } from "./annotate.js";
import { ApiClient } from "./api.js";
import { DashboardController, kappaDisplay } from "./dashboard.js";
import { escapeHtml, highlightTokens } from "./highlight.js";
import { bindKeys } from "./keyboard.js";
import { TriageController } from "./triage.js";

const api = new ApiClient("");
const root = document.getElementById("app") as HTMLElement;
let unbindKeys: (() => void) | null = null;

function toast(message: string): void {
  const element = document.createElement("div");
  element.className = "toast";
  element.textContent = message;
  document.body.appendChild(element);
  setTimeout(() => element.remove(), 4000);
}

function params(): URLSearchParams {
  const hash = window.location.hash;
  const queryStart = hash.indexOf("?");
  return new URLSearchParams(queryStart >= 0 ? hash.slice(queryStart + 1) : "");
}

function navBar(active: string): string {
  const links = [
    ["#/dashboard", "dashboard"],
    ["#/triage", "triage"],
    ["#/annotate", "annotate"],
  ];
  return `<nav>${links
    .map(([href, name]) => `<a href="${href}" class="${name === active ? "active" : ""}">${name}</a>`)
    .join("")}</nav>`;
}

// ---------------------------------------------------------------------------
// Triage view
// ---------------------------------------------------------------------------

async function renderTriage(): Promise<void> {
  const session = params().get("session") ?? "triage";
  const annotator = params().get("annotator") ?? undefined;
  const controller = new TriageController(api, session, annotator, toast);
  try {
    await controller.load();
  } catch (error) {
    root.innerHTML = `${navBar("triage")}<p class="error">cannot load session "${escapeHtml(
      session,
    )}": ${escapeHtml(String(error))}</p>`;
    return;
  }

  const draw = () => {
    const state = controller.state();
    if (state.done) {
      root.innerHTML = `
        ${navBar("triage")}
        <section class="card">
          <h2>Triage complete</h2>
          <p>${state.labeled} of ${state.total} candidates labeled.</p>
          <p>
            <button id="export">Export seeds</button>
            <span class="hint">U undoes the last label</span>
          </p>
          <pre id="export-preview" class="preview"></pre>
        </section>`;
      wireExport();
      return;
    }
    const candidate = state.current!;
    const samples = candidate.samples
      .map(
        (sample) =>
          `<li><span class="tokens">${highlightTokens(sample.tokens, sample.span)}</span>
           <span class="raw">${escapeHtml(sample.raw)}</span></li>`,
      )
      .join("");
    root.innerHTML = `
      ${navBar("triage")}
      <section class="card">
        <div class="progress">candidate ${state.position + 1} / ${state.total}
          <span class="tally">R ${state.tally["relevance"] ?? 0} ·
           I ${state.tally["irrelevance"] ?? 0} · N ${state.tally["neither"] ?? 0}</span>
        </div>
        <h2 class="pattern">${escapeHtml(candidate.text)}</h2>
        <div class="meta">n=${candidate.n} · score ${candidate.score} ·
          matches ${candidate.match_count}</div>
        <ul class="samples">${samples || "<li class='none'>no sample sentences</li>"}</ul>
        <div class="keys">
          <button data-key="r">R relevance</button>
          <button data-key="i">I irrelevance</button>
          <button data-key="n">N neither</button>
          <button data-key="u">U undo</button>
          <button id="export">Export seeds</button>
        </div>
        <pre id="export-preview" class="preview"></pre>
      </section>`;
    for (const button of root.querySelectorAll<HTMLButtonElement>("button[data-key]")) {
      button.onclick = () => void press(button.dataset.key!);
    }
    wireExport();
  };

  const wireExport = () => {
    const button = root.querySelector<HTMLButtonElement>("#export");
    if (!button) return;
    button.onclick = async () => {
      try {
        const { content, redundant } = await controller.exportSeeds();
        if (redundant.length > 0) {
          toast(`redundant selections kept: ${redundant.join(", ")}`);
        }
        const preview = root.querySelector<HTMLElement>("#export-preview");
        if (preview) preview.textContent = content || "(no agreed seeds yet)";
      } catch (error) {
        toast(String(error));
      }
    };
  };

  const press = async (key: string) => {
    await controller.handleKey(key);
    draw();
  };

  unbindKeys?.();
  unbindKeys = bindKeys(document, {
    r: () => void press("r"),
    i: () => void press("i"),
    n: () => void press("n"),
    u: () => void press("u"),
  });
  draw();
}

// ---------------------------------------------------------------------------
// Annotation view
// ---------------------------------------------------------------------------

let guidelinesShown = false;

async function showGuidelines(): Promise<void> {
  const { guidelines } = await api.guidelines();
  const overlay = document.createElement("div");
  overlay.className = "overlay";
  overlay.innerHTML = `
    <div class="modal">
      <h2>Annotation guidelines</h2>
      <pre>${escapeHtml(guidelines)}</pre>
      <button id="close-guidelines">Start (R relevant · I irrelevant)</button>
    </div>`;
  document.body.appendChild(overlay);
  await new Promise<void>((resolve) => {
    (overlay.querySelector("#close-guidelines") as HTMLButtonElement).onclick = () => {
      overlay.remove();
      resolve();
    };
  });
}

async function renderAnnotate(): Promise<void> {
  const session = params().get("session") ?? "annotate";
  const annotator = params().get("annotator") ?? "default";
  const controller = new AnnotateController(api, session, annotator, toast);
  try {
    await controller.load();
  } catch (error) {
    root.innerHTML = `${navBar("annotate")}<p class="error">cannot load session "${escapeHtml(
      session,
    )}": ${escapeHtml(String(error))}</p>`;
    return;
  }
  if (!guidelinesShown) {
    guidelinesShown = true;
    await showGuidelines();
  }

  const draw = () => {
    const state = controller.state();
    if (state.done) {
      root.innerHTML = `
        ${navBar("annotate")}
        <section class="card">
          <h2>Batch complete</h2>
          <p>All ${state.total} sentences labeled. Thank you.</p>
        </section>`;
      return;
    }
    root.innerHTML = `
      ${navBar("annotate")}
      <section class="card">
        <div class="progress">sentence ${state.index + 1} / ${state.total}
          <span class="annotator">annotator: ${escapeHtml(annotator)}</span></div>
        <p class="sentence">${escapeHtml(state.text ?? "")}</p>
        <div class="keys">
          <button data-key="r">R relevant</button>
          <button data-key="i">I irrelevant</button>
        </div>
        <p class="hint">Judge only whether the sentence contributes to the
          author's argument. Nothing about its origin is shown, by design.</p>
      </section>`;
    for (const button of root.querySelectorAll<HTMLButtonElement>("button[data-key]")) {
      button.onclick = () => void press(button.dataset.key!);
    }
  };

  const press = async (key: string) => {
    await controller.handleKey(key);
    draw();
  };

  unbindKeys?.();
  unbindKeys = bindKeys(document, {
    r: () => void press("r"),
    i: () => void press("i"),
  });
  draw();
}

// ---------------------------------------------------------------------------
// Dashboard view
// ---------------------------------------------------------------------------

async function renderDashboard(): Promise<void> {
  unbindKeys?.();
  unbindKeys = null;
  const controller = new DashboardController(api);
  let state;
  try {
    state = await controller.load();
  } catch (error) {
    root.innerHTML = `${navBar("dashboard")}<p class="error">${escapeHtml(String(error))}</p>`;
    return;
  }
  const cards = state.sessions
    .map((session) => {
      if (session.kind === "triage") {
        const tally = session.tally ?? {};
        return `
          <section class="card">
            <h2>${escapeHtml(session.session)} <small>triage</small></h2>
            <p>${session.total} candidates ·
               R ${tally["relevance"] ?? 0} · I ${tally["irrelevance"] ?? 0} ·
               N ${tally["neither"] ?? 0} · unlabeled ${tally["unlabeled"] ?? 0}</p>
            <a href="#/triage?session=${encodeURIComponent(session.session)}">open</a>
          </section>`;
      }
      const progress = Object.entries(session.progress ?? {})
        .map(([annotator, count]) => `${escapeHtml(annotator)}: ${count}/${session.total}`)
        .join(" · ");
      const agreement = session.agreement;
      const pairwise = Object.entries(agreement?.pairwise_cohen ?? {})
        .map(([pair, value]) => `${escapeHtml(pair)} ${kappaDisplay(value)}`)
        .join(" · ");
      return `
        <section class="card">
          <h2>${escapeHtml(session.session)} <small>annotation</small></h2>
          <p>${progress || "no labels yet"}</p>
          <p>Fleiss kappa: ${kappaDisplay(agreement?.fleiss_kappa, agreement?.reason)}</p>
          <p>Pairwise: ${pairwise || "-"}</p>
          <a href="#/annotate?session=${encodeURIComponent(session.session)}">open</a>
        </section>`;
    })
    .join("");
  root.innerHTML = `${navBar("dashboard")}${cards || "<p>No sessions.</p>"}`;
}

// ---------------------------------------------------------------------------

async function route(): Promise<void> {
  const hash = window.location.hash || "#/dashboard";
  if (hash.startsWith("#/triage")) return renderTriage();
  if (hash.startsWith("#/annotate")) return renderAnnotate();
  return renderDashboard();
}

window.addEventListener("hashchange", () => void route());
void route();
