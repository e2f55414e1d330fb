// Side panels: selected-student card, neighbor list, cohort comparison.
// Values render verbatim from API payloads (exact strings in data attributes).

import type {
  CohortResponse,
  LearningGraphResponse,
  NeighborsResponse,
  StudentAggregate,
} from "./api";
import { neighborGradient } from "./colors";
import { renderLearningGraph } from "./graphview";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function aggregateSummary(aggregate: StudentAggregate): HTMLElement {
  const list = el("dl", "aggregate");
  const rows: [string, string][] = [
    ["avg accuracy", aggregate.avg_accuracy.toFixed(3)],
    ["concepts", String(aggregate.concept_count)],
    ["attempts", String(aggregate.total_attempts)],
    ["median week", String(aggregate.median_week)],
  ];
  for (const [label, value] of rows) {
    list.appendChild(el("dt", undefined, label));
    list.appendChild(el("dd", undefined, value));
  }
  return list;
}

export function renderStudentCard(
  host: HTMLElement,
  student: string,
  aggregate: StudentAggregate | undefined,
  actions: { onCohortStart: () => void; onCohortEnd: () => void },
): void {
  host.replaceChildren();
  host.appendChild(el("h3", undefined, student));
  if (aggregate) host.appendChild(aggregateSummary(aggregate));
  const buttons = el("div", "card-actions");
  const startBtn = el("button", undefined, "set cohort start") as HTMLButtonElement;
  startBtn.id = "set-cohort-start";
  startBtn.addEventListener("click", actions.onCohortStart);
  const endBtn = el("button", undefined, "set cohort end") as HTMLButtonElement;
  endBtn.id = "set-cohort-end";
  endBtn.addEventListener("click", actions.onCohortEnd);
  buttons.append(startBtn, endBtn);
  host.appendChild(buttons);
}

export interface NeighborPanelResult {
  /** student -> highlight color, in payload (ascending distance) order */
  highlightColors: Map<string, string>;
}

export function renderNeighborPanel(
  host: HTMLElement,
  payload: NeighborsResponse,
  aggregates: Map<string, StudentAggregate>,
  onSelect: (student: string) => void,
): NeighborPanelResult {
  host.replaceChildren();
  host.appendChild(el("h3", undefined, `${payload.k} nearest to ${payload.student}`));
  const gradient = neighborGradient(payload.neighbors.length);
  const highlightColors = new Map<string, string>();
  const list = el("ol", "neighbor-list");
  payload.neighbors.forEach((neighbor, rank) => {
    highlightColors.set(neighbor.student, gradient[rank]);
    const item = el("li", "neighbor-item");
    item.dataset.student = neighbor.student;
    item.dataset.distance = String(neighbor.distance);
    const swatch = el("span", "swatch");
    swatch.style.backgroundColor = gradient[rank];
    const label = el("span", "neighbor-id", neighbor.student);
    const distance = el(
      "span",
      "neighbor-distance",
      `d = ${String(neighbor.distance)}`,
    );
    item.append(swatch, label, distance);
    const aggregate = aggregates.get(neighbor.student);
    if (aggregate) item.appendChild(aggregateSummary(aggregate));
    item.addEventListener("click", () => onSelect(neighbor.student));
    list.appendChild(item);
  });
  host.appendChild(list);
  return { highlightColors };
}

export function renderCohortPanel(
  host: HTMLElement,
  payload: CohortResponse,
  graphs: Map<string, LearningGraphResponse>,
): void {
  host.replaceChildren();
  host.appendChild(
    el("h3", undefined, `cohort along ${payload.start} → ${payload.end} (k = ${payload.k})`),
  );
  const strip = el("div", "cohort-strip");
  for (const member of payload.members) {
    const card = el("div", `cohort-member cohort-${member.role}`);
    card.dataset.student = member.student;
    card.dataset.role = member.role;
    const heading = el("h4", undefined, `${member.student} (${member.role})`);
    card.appendChild(heading);
    if (member.distance !== null) {
      const d = el("div", "cohort-distance", `d = ${String(member.distance)}`);
      d.dataset.distance = String(member.distance);
      card.appendChild(d);
    }
    const graph = graphs.get(member.student);
    if (graph) card.appendChild(renderLearningGraph(graph));
    strip.appendChild(card);
  }
  host.appendChild(strip);
}
