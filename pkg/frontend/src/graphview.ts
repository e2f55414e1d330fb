// Renders one student's learning graph as an SVG with a layered layout.
// Node boxes carry the raw tracing attributes straight from the payload.

import type { LearningGraphResponse } from "./api";
import { rampColor } from "./colors";
import { layeredLayout, layoutExtent, NODE_HEIGHT, NODE_WIDTH } from "./layout";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends string>(tag: K): SVGElement {
  return document.createElementNS(SVG_NS, tag) as SVGElement;
}

export function renderLearningGraph(graph: LearningGraphResponse): SVGSVGElement {
  const positions = layeredLayout(graph.nodes.length, graph.edges);
  const extent = layoutExtent(positions);
  const pad = 10;
  const svg = svgEl("svg") as SVGSVGElement;
  svg.setAttribute(
    "viewBox",
    `${-pad} ${-pad} ${extent.width + 2 * pad} ${extent.height + 2 * pad}`,
  );
  svg.setAttribute("width", String(extent.width + 2 * pad));
  svg.setAttribute("class", "learning-graph");
  svg.setAttribute("data-student", graph.student);

  for (const [a, b] of graph.edges) {
    const from = positions[a];
    const to = positions[b];
    const line = svgEl("line");
    line.setAttribute("x1", String(from.x + NODE_WIDTH));
    line.setAttribute("y1", String(from.y + NODE_HEIGHT / 2));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y + NODE_HEIGHT / 2));
    line.setAttribute("class", "graph-edge");
    line.setAttribute("marker-end", "url(#arrow)");
    svg.appendChild(line);
  }

  const defs = svgEl("defs");
  defs.innerHTML =
    '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" ' +
    'markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker>';
  svg.insertBefore(defs, svg.firstChild);

  for (const node of graph.nodes) {
    const pos = positions[graph.nodes.indexOf(node)];
    const group = svgEl("g");
    group.setAttribute("transform", `translate(${pos.x}, ${pos.y})`);
    group.setAttribute("class", "graph-node");
    group.setAttribute("data-concept", node.concept);

    const [accuracy, attempts, week] = node.raw;
    const box = svgEl("rect");
    box.setAttribute("width", String(NODE_WIDTH));
    box.setAttribute("height", String(NODE_HEIGHT));
    box.setAttribute("rx", "6");
    box.setAttribute("fill", rampColor(accuracy));
    box.setAttribute("fill-opacity", "0.35");
    box.setAttribute("stroke", "#555");
    group.appendChild(box);

    const title = svgEl("text");
    title.setAttribute("x", "6");
    title.setAttribute("y", "16");
    title.setAttribute("class", "graph-node-title");
    title.textContent = node.concept;
    group.appendChild(title);

    const stats = svgEl("text");
    stats.setAttribute("x", "6");
    stats.setAttribute("y", "34");
    stats.setAttribute("class", "graph-node-stats");
    stats.setAttribute("data-accuracy", String(accuracy));
    stats.setAttribute("data-attempts", String(attempts));
    stats.setAttribute("data-week", String(week));
    stats.textContent = `acc ${accuracy.toFixed(2)} · n ${attempts} · wk ${week}`;
    group.appendChild(stats);

    svg.appendChild(group);
  }
  return svg;
}
