// App wiring: boots from the API, renders the scatter and panels, keeps the
// view state in the URL, and drives successive queries from user clicks.

import {
  ApiClient,
  type LearningGraphResponse,
  type ProjectionResponse,
  type StudentAggregate,
  type StudentEntry,
} from "./api";
import { attributeRange, scaleColor, type Range } from "./colors";
import { renderCohortPanel, renderNeighborPanel, renderStudentCard } from "./panels";
import { ScatterView } from "./scatter";
import {
  COLOR_ATTRIBUTES,
  decodeView,
  defaultView,
  encodeView,
  type ColorAttribute,
  type ViewState,
} from "./state";

export interface AppElements {
  topicSelect: HTMLSelectElement;
  colorSelect: HTMLSelectElement;
  neighborK: HTMLInputElement;
  cohortK: HTMLInputElement;
  kError: HTMLElement;
  errorBanner: HTMLElement;
  errorText: HTMLElement;
  retryButton: HTMLButtonElement;
  scatterHost: HTMLElement;
  legend: HTMLElement;
  studentCard: HTMLElement;
  neighborPanel: HTMLElement;
  cohortStatus: HTMLElement;
  cohortSwap: HTMLButtonElement;
  cohortClear: HTMLButtonElement;
  cohortPanel: HTMLElement;
}

export function collectElements(root: Document): AppElements {
  const get = <T extends HTMLElement>(id: string): T => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  };
  return {
    topicSelect: get<HTMLSelectElement>("topic-select"),
    colorSelect: get<HTMLSelectElement>("color-select"),
    neighborK: get<HTMLInputElement>("neighbor-k"),
    cohortK: get<HTMLInputElement>("cohort-k"),
    kError: get("k-error"),
    errorBanner: get("error-banner"),
    errorText: get("error-text"),
    retryButton: get<HTMLButtonElement>("retry-button"),
    scatterHost: get("scatter-host"),
    legend: get("legend"),
    studentCard: get("student-card"),
    neighborPanel: get("neighbor-panel"),
    cohortStatus: get("cohort-status"),
    cohortSwap: get<HTMLButtonElement>("cohort-swap"),
    cohortClear: get<HTMLButtonElement>("cohort-clear"),
    cohortPanel: get("cohort-panel"),
  };
}

export class ExplorerApp {
  readonly api: ApiClient;
  view: ViewState;
  scatter: ScatterView;
  students: StudentEntry[] = [];
  aggregates = new Map<string, StudentAggregate>();
  projection: ProjectionResponse | null = null;
  private neighborSeq = 0;
  private cohortSeq = 0;
  private graphCache = new Map<string, LearningGraphResponse>();
  private syncUrl: (view: ViewState) => void;

  constructor(
    private els: AppElements,
    options: {
      baseUrl?: string;
      initialQuery?: string;
      onUrlChange?: (query: string) => void;
    } = {},
  ) {
    this.api = new ApiClient(options.baseUrl ?? "");
    this.view = options.initialQuery ? decodeView(options.initialQuery) : defaultView();
    const onUrlChange = options.onUrlChange;
    this.syncUrl = (view) => onUrlChange?.(encodeView(view));
    this.scatter = new ScatterView(els.scatterHost, this.view.camera, {
      onSelect: (student) => void this.selectStudent(student),
      onCameraChange: (camera) => {
        this.view.camera = { ...camera };
        this.syncUrl(this.view);
      },
    });
    this.bindControls();
  }

  private bindControls(): void {
    for (const attribute of COLOR_ATTRIBUTES) {
      const option = document.createElement("option");
      option.value = attribute;
      option.textContent = attribute.replace("_", " ");
      this.els.colorSelect.appendChild(option);
    }
    this.els.colorSelect.value = this.view.color;
    this.els.neighborK.value = String(this.view.neighborK);
    this.els.cohortK.value = String(this.view.cohortK);

    this.els.colorSelect.addEventListener("change", () => {
      this.view.color = this.els.colorSelect.value as ColorAttribute;
      this.applyColors();
      this.syncUrl(this.view);
    });
    this.els.neighborK.addEventListener("change", () => {
      const k = Number(this.els.neighborK.value);
      if (!this.validNeighborK(k)) return;
      this.view.neighborK = k;
      this.syncUrl(this.view);
      if (this.view.selected) void this.selectStudent(this.view.selected);
    });
    this.els.cohortK.addEventListener("change", () => {
      const k = Number(this.els.cohortK.value);
      if (!Number.isInteger(k) || k < 1 || k > this.students.length - 2) {
        this.showKError(`cohort k must be between 1 and ${this.students.length - 2}`);
        return;
      }
      this.showKError("");
      this.view.cohortK = k;
      this.syncUrl(this.view);
      void this.refreshCohort();
    });
    this.els.cohortSwap.addEventListener("click", () => {
      const { cohortStart, cohortEnd } = this.view;
      this.view.cohortStart = cohortEnd;
      this.view.cohortEnd = cohortStart;
      this.syncUrl(this.view);
      void this.refreshCohort();
    });
    this.els.cohortClear.addEventListener("click", () => {
      this.view.cohortStart = null;
      this.view.cohortEnd = null;
      this.els.cohortPanel.replaceChildren();
      this.updateCohortStatus("");
      this.syncUrl(this.view);
    });
    this.els.retryButton.addEventListener("click", () => void this.boot());
  }

  private validNeighborK(k: number): boolean {
    const max = this.students.length - 1;
    if (!Number.isInteger(k) || k < 1 || k > max) {
      this.showKError(`k must be an integer between 1 and ${max}`);
      return false;
    }
    this.showKError("");
    return true;
  }

  private showKError(message: string): void {
    this.els.kError.textContent = message;
    this.els.kError.toggleAttribute("hidden", message === "");
  }

  private showError(message: string): void {
    this.els.errorText.textContent = message;
    this.els.errorBanner.removeAttribute("hidden");
  }

  private clearError(): void {
    this.els.errorBanner.setAttribute("hidden", "");
  }

  async boot(): Promise<void> {
    this.clearError();
    try {
      const { topics } = await this.api.topics();
      if (this.view.topic === null || !topics.includes(this.view.topic)) {
        this.view.topic = topics[0] ?? null;
      }
      this.els.topicSelect.replaceChildren();
      for (const topic of topics) {
        const option = document.createElement("option");
        option.value = topic;
        option.textContent = topic;
        this.els.topicSelect.appendChild(option);
      }
      if (this.view.topic) this.els.topicSelect.value = this.view.topic;

      const topic = this.view.topic ?? undefined;
      const [students, projection] = await Promise.all([
        this.api.students(topic),
        this.api.projection(topic),
      ]);
      this.students = students.students;
      this.aggregates = new Map(this.students.map((s) => [s.id, s.aggregate]));
      this.projection = projection;
      this.applyColors();
      this.syncUrl(this.view);
      if (this.view.selected && this.aggregates.has(this.view.selected)) {
        await this.selectStudent(this.view.selected, { keepCamera: true });
      }
      if (this.view.cohortStart && this.view.cohortEnd) {
        await this.refreshCohort();
      }
    } catch (error) {
      this.showError(`could not reach the profiling service: ${String(error)}`);
    }
  }

  colorRange(): Range {
    return attributeRange(this.students, this.view.color);
  }

  private applyColors(): void {
    if (!this.projection) return;
    const range = this.colorRange();
    const colors = this.projection.students.map((id) => {
      const aggregate = this.aggregates.get(id);
      return aggregate ? scaleColor(aggregate[this.view.color], range) : "#999";
    });
    this.scatter.setData(this.projection.students, this.projection.coordinates, colors);
    if (this.view.selected) this.scatter.setSelected(this.view.selected);
    this.renderLegend(range);
  }

  private renderLegend(range: Range): void {
    this.els.legend.replaceChildren();
    const label = document.createElement("span");
    label.className = "legend-label";
    label.textContent = this.view.color.replace("_", " ");
    const bar = document.createElement("span");
    bar.className = "legend-bar";
    const low = document.createElement("span");
    low.className = "legend-min";
    low.textContent = String(range.min);
    const high = document.createElement("span");
    high.className = "legend-max";
    high.textContent = String(range.max);
    this.els.legend.append(label, low, bar, high);
  }

  async selectStudent(student: string, options: { keepCamera?: boolean } = {}): Promise<void> {
    void options;
    this.view.selected = student;
    this.scatter.setSelected(student);
    renderStudentCard(this.els.studentCard, student, this.aggregates.get(student), {
      onCohortStart: () => {
        if (this.view.cohortEnd === student) {
          this.updateCohortStatus("start and end must be different students");
          return;
        }
        this.view.cohortStart = student;
        this.syncUrl(this.view);
        void this.refreshCohort();
      },
      onCohortEnd: () => {
        if (this.view.cohortStart === student) {
          this.updateCohortStatus("start and end must be different students");
          return;
        }
        this.view.cohortEnd = student;
        this.syncUrl(this.view);
        void this.refreshCohort();
      },
    });
    this.syncUrl(this.view);
    if (!this.validNeighborK(this.view.neighborK)) return;

    const seq = ++this.neighborSeq;
    try {
      const payload = await this.api.neighbors(student, this.view.neighborK);
      if (seq !== this.neighborSeq) return; // stale response
      const { highlightColors } = renderNeighborPanel(
        this.els.neighborPanel,
        payload,
        this.aggregates,
        (next) => void this.selectStudent(next),
      );
      this.scatter.setHighlights(highlightColors);
    } catch (error) {
      if (seq !== this.neighborSeq) return;
      this.showError(`neighbor query failed: ${String(error)}`);
    }
  }

  private updateCohortStatus(message: string): void {
    const { cohortStart, cohortEnd } = this.view;
    const chosen = `start: ${cohortStart ?? "—"}  end: ${cohortEnd ?? "—"}`;
    this.els.cohortStatus.textContent = message ? `${chosen}  (${message})` : chosen;
  }

  async refreshCohort(): Promise<void> {
    const { cohortStart, cohortEnd, cohortK } = this.view;
    this.updateCohortStatus("");
    if (!cohortStart || !cohortEnd) return;
    if (cohortStart === cohortEnd) {
      this.updateCohortStatus("start and end must be different students");
      return;
    }
    const seq = ++this.cohortSeq;
    try {
      const payload = await this.api.cohort(cohortStart, cohortEnd, cohortK);
      const graphs = new Map<string, LearningGraphResponse>();
      await Promise.all(
        payload.members.map(async (member) => {
          let graph = this.graphCache.get(member.student);
          if (!graph) {
            graph = await this.api.graph(member.student);
            this.graphCache.set(member.student, graph);
          }
          graphs.set(member.student, graph);
        }),
      );
      if (seq !== this.cohortSeq) return; // stale response
      renderCohortPanel(this.els.cohortPanel, payload, graphs);
    } catch (error) {
      if (seq !== this.cohortSeq) return;
      this.updateCohortStatus(`cohort query failed: ${String(error)}`);
    }
  }
}

export function startBrowserApp(): void {
  const els = collectElements(document);
  const app = new ExplorerApp(els, {
    initialQuery: window.location.hash.slice(1),
    onUrlChange: (query) => {
      window.history.replaceState(null, "", `#${query}`);
    },
  });
  window.addEventListener("hashchange", () => {
    app.view = decodeView(window.location.hash.slice(1));
    void app.boot();
  });
  void app.boot();
}

declare global {
  interface Window {
    __EDULENS_TEST__?: boolean;
  }
}

if (typeof window !== "undefined" && !window.__EDULENS_TEST__) {
  startBrowserApp();
}
