/**
 * Single-page wiring.  All state lives in one UiState object; rendering is a
 * function of that state; every displayed number comes from the API verbatim.
 */

import {
  api,
  ApiError,
  type ModelSummary,
  type PointCloud,
  type ProbeResult,
  type SliderSummary,
} from "./api.js";
import { debounce } from "./debounce.js";
import { createRequestGate, dispatchLatest } from "./gate.js";
import { decodeBase64Pgm } from "./pgm.js";
import {
  COORD_MAX,
  COORD_MIN,
  renderAssociations,
  renderGrayImage,
  renderPointCloud,
} from "./views.js";

const PROBE_DEBOUNCE_MS = 150;
const JOB_POLL_MS = 500;

interface UiState {
  corpusId: string | null;
  models: ModelSummary[];
  selectedModel: ModelSummary | null;
  sliders: SliderSummary[];
  activeSlider: SliderSummary | null;
  t: number;
  baseWord: string;
  k: number;
  lastProbe: ProbeResult | null;
  cloud: PointCloud | null;
  pending: boolean;
}

const state: UiState = {
  corpusId: null,
  models: [],
  selectedModel: null,
  sliders: [],
  activeSlider: null,
  t: 0,
  baseWord: "",
  k: 10,
  lastProbe: null,
  cloud: null,
  pending: false,
};

const probeGate = createRequestGate();

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

/* ---------------- error banner ---------------- */

function showBanner(code: string, detail: string): void {
  const slot = byId<HTMLDivElement>("banner-slot");
  slot.textContent = "";
  const banner = document.createElement("div");
  banner.className = "banner";
  const msg = document.createElement("span");
  msg.textContent = `${code}: ${detail}`;
  const dismiss = document.createElement("button");
  dismiss.type = "button";
  dismiss.textContent = "dismiss";
  dismiss.addEventListener("click", () => banner.remove());
  banner.append(msg, dismiss);
  slot.appendChild(banner);
}

function showError(err: unknown): void {
  if (err instanceof ApiError) showBanner(err.code, err.detail);
  else showBanner("Error", String(err));
}

/* ---------------- probing ---------------- */

function setPending(pending: boolean): void {
  state.pending = pending;
  byId<HTMLDivElement>("probe-output").classList.toggle("pending", pending);
}

function renderProbe(): void {
  const probe = state.lastProbe;
  const slider = state.activeSlider;
  const out = byId<HTMLDivElement>("probe-output");
  if (probe === null || slider === null) {
    out.textContent = "";
    return;
  }
  let content: HTMLElement;
  try {
    if (probe.associations !== undefined) {
      content = renderAssociations(
        probe.associations,
        slider.pole_a_label,
        slider.pole_b_label,
      );
    } else if (probe.image_pgm !== undefined) {
      content = renderGrayImage(decodeBase64Pgm(probe.image_pgm));
    } else {
      throw new Error("probe result carries neither associations nor an image");
    }
  } catch (err) {
    showError(err); // malformed payload: banner, keep the previous view
    return;
  }
  out.textContent = "";
  out.appendChild(content);
}

function issueProbe(): void {
  const model = state.selectedModel;
  const slider = state.activeSlider;
  if (model === null || slider === null) return;
  const wordsModel = model.model_type === "words";
  if (wordsModel && state.baseWord === "") return;
  setPending(true);
  void dispatchLatest(
    probeGate,
    () =>
      api.probe(
        model.model_id,
        slider.slider_id,
        state.t,
        wordsModel ? state.baseWord : null,
        state.k,
      ),
    (result) => {
      setPending(false);
      state.lastProbe = result;
      renderProbe();
    },
    (err) => {
      setPending(false);
      showError(err); // previous results stay on screen
    },
  );
}

const probeOnChange = debounce(issueProbe, PROBE_DEBOUNCE_MS);

/* ---------------- models and sliders ---------------- */

function renderModelPicker(): void {
  const select = byId<HTMLSelectElement>("model-select");
  select.textContent = "";
  for (const m of state.models) {
    const option = document.createElement("option");
    option.value = m.model_id;
    option.textContent = `${m.model_id} (${m.model_type})`;
    select.appendChild(option);
  }
  if (state.selectedModel !== null) select.value = state.selectedModel.model_id;
}

function renderSliderPicker(): void {
  const select = byId<HTMLSelectElement>("slider-select");
  select.textContent = "";
  for (const s of state.sliders) {
    const option = document.createElement("option");
    option.value = s.slider_id;
    option.textContent = `${s.slider_id}: ${s.pole_a_label} / ${s.pole_b_label}`;
    select.appendChild(option);
  }
  if (state.activeSlider !== null) select.value = state.activeSlider.slider_id;
}

function updateModeVisibility(): void {
  const words = state.selectedModel?.model_type === "words";
  for (const node of document.querySelectorAll<HTMLElement>(".words-only")) {
    node.classList.toggle("hidden", !words);
  }
}

async function refreshModels(selectId?: string): Promise<void> {
  try {
    state.models = await api.models();
  } catch (err) {
    showError(err);
    return;
  }
  const wanted = selectId ?? state.selectedModel?.model_id;
  state.selectedModel =
    state.models.find((m) => m.model_id === wanted) ?? state.models[0] ?? null;
  renderModelPicker();
  await onModelSelected();
}

async function onModelSelected(): Promise<void> {
  probeGate.invalidate();
  probeOnChange.cancel();
  state.sliders = [];
  state.activeSlider = null;
  state.lastProbe = null;
  state.cloud = null;
  setPending(false);
  const model = state.selectedModel;
  if (model !== null) {
    try {
      state.sliders = await api.sliders(model.model_id);
    } catch (err) {
      showError(err);
    }
    state.activeSlider = state.sliders[0] ?? null;
  }
  renderSliderPicker();
  updateModeVisibility();
  renderProbe();
  renderCloud();
  issueProbe();
}

function onSliderSelected(): void {
  const select = byId<HTMLSelectElement>("slider-select");
  state.activeSlider =
    state.sliders.find((s) => s.slider_id === select.value) ?? null;
  probeGate.invalidate();
  probeOnChange.cancel();
  issueProbe();
}

/* ---------------- training jobs ---------------- */

function pollJob(
  jobId: string,
  statusEl: HTMLElement,
  onDone: (modelId: string) => void,
): void {
  statusEl.textContent = `job ${jobId}: queued`;
  const timer = setInterval(() => {
    void (async () => {
      let job;
      try {
        job = await api.job(jobId);
      } catch (err) {
        clearInterval(timer);
        showError(err);
        return;
      }
      statusEl.textContent = `job ${jobId}: ${job.status}`;
      if (job.status === "done" && job.model_id !== null) {
        clearInterval(timer);
        statusEl.textContent = `job ${jobId}: done -> ${job.model_id}`;
        onDone(job.model_id);
      } else if (job.status === "failed") {
        clearInterval(timer);
        statusEl.textContent = `job ${jobId} failed: ${job.error ?? "unknown"}`;
      }
    })();
  }, JOB_POLL_MS);
}

/* ---------------- forms ---------------- */

function splitWords(raw: string): string[] {
  return raw
    .split(",")
    .map((w) => w.trim())
    .filter((w) => w !== "");
}

function wireCorpusForm(): void {
  const text = byId<HTMLTextAreaElement>("corpus-text");
  const file = byId<HTMLInputElement>("corpus-file");
  const upload = byId<HTMLButtonElement>("corpus-upload");
  const status = byId<HTMLSpanElement>("corpus-status");

  file.addEventListener("change", () => {
    const chosen = file.files?.[0];
    if (chosen === undefined) return;
    void chosen.text().then((content) => {
      text.value = content;
    });
  });

  upload.addEventListener("click", () => {
    const body = text.value;
    if (body.trim() === "") {
      showBanner("EmptyCorpus", "paste or load some text first");
      return;
    }
    void api
      .uploadCorpus(body)
      .then((resp) => {
        state.corpusId = resp.corpus_id;
        status.textContent = `corpus ${resp.corpus_id} (${body.length} chars)`;
        byId<HTMLButtonElement>("train-start").disabled = false;
      })
      .catch(showError);
  });
}

const WORDS_CONFIG_FIELDS: Array<[string, string]> = [
  ["dim", "cfg-dim"],
  ["window", "cfg-window"],
  ["negatives", "cfg-negatives"],
  ["epochs", "cfg-epochs"],
  ["min_count", "cfg-min-count"],
  ["seed", "cfg-seed"],
];

function wireWordsTraining(): void {
  const start = byId<HTMLButtonElement>("train-start");
  const status = byId<HTMLSpanElement>("train-status");
  start.addEventListener("click", () => {
    if (state.corpusId === null) return;
    const config: Record<string, number> = {};
    for (const [key, id] of WORDS_CONFIG_FIELDS) {
      const raw = byId<HTMLInputElement>(id).value.trim();
      if (raw !== "") config[key] = Number(raw);
    }
    void api
      .trainWords(state.corpusId, config)
      .then((resp) =>
        pollJob(resp.job_id, status, (modelId) => void refreshModels(modelId)),
      )
      .catch(showError);
  });
}

function fileToBase64(file: File): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => {
      const url = String(reader.result);
      resolve(url.slice(url.indexOf(",") + 1));
    };
    reader.onerror = () => reject(reader.error);
    reader.readAsDataURL(file);
  });
}

function wireImageTraining(): void {
  const filesA = byId<HTMLInputElement>("class-a-files");
  const filesB = byId<HTMLInputElement>("class-b-files");
  const qInput = byId<HTMLInputElement>("q-input");
  const start = byId<HTMLButtonElement>("image-start");
  const msg = byId<HTMLSpanElement>("image-msg");
  const status = byId<HTMLSpanElement>("image-status");

  const validate = () => {
    const problems: string[] = [];
    if ((filesA.files?.length ?? 0) === 0 || (filesB.files?.length ?? 0) === 0) {
      problems.push("pick PGM files for both classes");
    }
    const q = Number(qInput.value);
    if (!Number.isInteger(q) || q < 1) problems.push("q must be an integer >= 1");
    start.disabled = problems.length > 0;
    msg.textContent = problems.join("; ");
  };
  filesA.addEventListener("change", validate);
  filesB.addEventListener("change", validate);
  qInput.addEventListener("input", validate);
  validate();

  start.addEventListener("click", () => {
    void (async () => {
      const toList = (input: HTMLInputElement) =>
        Promise.all(Array.from(input.files ?? []).map(fileToBase64));
      try {
        const [classA, classB] = await Promise.all([
          toList(filesA),
          toList(filesB),
        ]);
        const resp = await api.trainImages(classA, classB, Number(qInput.value));
        pollJob(resp.job_id, status, (modelId) => void refreshModels(modelId));
      } catch (err) {
        showError(err);
      }
    })();
  });
}

function wireSliderCreation(): void {
  const poleA = byId<HTMLInputElement>("pole-a");
  const poleB = byId<HTMLInputElement>("pole-b");
  const labelA = byId<HTMLInputElement>("label-a");
  const labelB = byId<HTMLInputElement>("label-b");
  const create = byId<HTMLButtonElement>("slider-create");
  const msg = byId<HTMLSpanElement>("slider-msg");

  const validate = () => {
    const ok = splitWords(poleA.value).length > 0 && splitWords(poleB.value).length > 0;
    create.disabled = !ok;
    msg.textContent = ok ? "" : "both pole lists need at least one word";
  };
  poleA.addEventListener("input", validate);
  poleB.addEventListener("input", validate);
  validate();

  create.addEventListener("click", () => {
    const model = state.selectedModel;
    if (model === null) return;
    const la = labelA.value.trim();
    const lb = labelB.value.trim();
    const labels: [string, string] | null =
      la !== "" && lb !== "" ? [la, lb] : null;
    void api
      .createSlider(model.model_id, splitWords(poleA.value), splitWords(poleB.value), labels)
      .then(async (resp) => {
        state.sliders = await api.sliders(model.model_id);
        state.activeSlider =
          state.sliders.find((s) => s.slider_id === resp.slider_id) ?? null;
        renderSliderPicker(); // new slider appears without a reload
        issueProbe();
      })
      .catch(showError);
  });
}

/* ---------------- probe controls ---------------- */

function wireProbeControls(): void {
  const range = byId<HTMLInputElement>("t-range");
  const readout = byId<HTMLSpanElement>("t-readout");
  range.min = String(COORD_MIN);
  range.max = String(COORD_MAX);
  range.step = "0.01";
  range.value = "0";
  range.addEventListener("input", () => {
    state.t = Number(range.value);
    readout.textContent = state.t.toFixed(2);
    probeOnChange();
  });

  const base = byId<HTMLInputElement>("base-word");
  base.addEventListener("input", () => {
    state.baseWord = base.value.trim();
    probeOnChange();
  });

  const k = byId<HTMLInputElement>("k-input");
  k.addEventListener("change", () => {
    const value = Number(k.value);
    if (Number.isInteger(value) && value >= 1) {
      state.k = value;
      probeOnChange();
    }
  });

  byId<HTMLSelectElement>("slider-select").addEventListener(
    "change",
    onSliderSelected,
  );
}

/* ---------------- point cloud ---------------- */

function renderCloud(): void {
  const out = byId<HTMLDivElement>("cloud-output");
  out.textContent = "";
  if (state.cloud !== null) out.appendChild(renderPointCloud(state.cloud));
}

function wireCloud(): void {
  byId<HTMLButtonElement>("cloud-load").addEventListener("click", () => {
    const model = state.selectedModel;
    if (model === null) return;
    const maxPoints = Number(byId<HTMLInputElement>("max-points").value) || 200;
    void api
      .pointcloud(model.model_id, state.activeSlider?.slider_id ?? null, maxPoints)
      .then((cloud) => {
        state.cloud = cloud;
        renderCloud();
      })
      .catch(showError);
  });
}

/* ---------------- boot ---------------- */

document.addEventListener("DOMContentLoaded", () => {
  wireCorpusForm();
  wireWordsTraining();
  wireImageTraining();
  wireSliderCreation();
  wireProbeControls();
  wireCloud();
  byId<HTMLSelectElement>("model-select").addEventListener("change", () => {
    const select = byId<HTMLSelectElement>("model-select");
    state.selectedModel =
      state.models.find((m) => m.model_id === select.value) ?? null;
    void onModelSelected();
  });
  byId<HTMLButtonElement>("refresh-models").addEventListener(
    "click",
    () => void refreshModels(),
  );
  void refreshModels();
});
