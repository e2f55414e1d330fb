// Interactive 3-d scatter of the server-computed projection, drawn as SVG:
// orthographic view with drag-to-rotate and wheel zoom. Point geometry comes
// from the /projection payload; this module only applies view transforms.

import type { CameraState } from "./state";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ProjectedPoint {
  x: number;
  y: number;
  depth: number; // larger = closer to the viewer
}

export function rotatePoint(
  point: [number, number, number],
  camera: CameraState,
): [number, number, number] {
  const [x, y, z] = point;
  const cy = Math.cos(camera.yaw);
  const sy = Math.sin(camera.yaw);
  const cp = Math.cos(camera.pitch);
  const sp = Math.sin(camera.pitch);
  // yaw about the vertical axis, then pitch about the horizontal axis
  const x1 = cy * x + sy * z;
  const z1 = -sy * x + cy * z;
  const y2 = cp * y - sp * z1;
  const z2 = sp * y + cp * z1;
  return [x1, y2, z2];
}

export function projectPoint(
  point: [number, number, number],
  camera: CameraState,
  viewport: { width: number; height: number },
): ProjectedPoint {
  const [x, y, z] = rotatePoint(point, camera);
  const radius = 0.42 * Math.min(viewport.width, viewport.height) * camera.zoom;
  return {
    x: viewport.width / 2 + x * radius,
    y: viewport.height / 2 - y * radius,
    depth: z,
  };
}

export interface ScatterCallbacks {
  onSelect?: (student: string) => void;
  onCameraChange?: (camera: CameraState) => void;
}

interface PointDatum {
  student: string;
  unit: [number, number, number];
  color: string;
}

export class ScatterView {
  readonly svg: SVGSVGElement;
  private points: PointDatum[] = [];
  private highlights = new Map<string, string>();
  private selected: string | null = null;
  private message = "";
  camera: CameraState;

  constructor(
    host: HTMLElement,
    camera: CameraState,
    private callbacks: ScatterCallbacks = {},
    private viewport = { width: 640, height: 480 },
  ) {
    this.camera = { ...camera };
    this.svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.svg.setAttribute("viewBox", `0 0 ${viewport.width} ${viewport.height}`);
    this.svg.setAttribute("class", "scatter");
    host.appendChild(this.svg);
    this.attachCameraControls();
  }

  /** Normalize payload coordinates to a unit-ish cube for a stable view. */
  setData(students: string[], coordinates: number[][], colors: string[]): void {
    if (students.length === 0) {
      this.points = [];
      this.message = "no students in this snapshot";
      this.render();
      return;
    }
    this.message = "";
    const center = [0, 1, 2].map(
      (axis) => coordinates.reduce((acc, c) => acc + c[axis], 0) / coordinates.length,
    );
    let scale = 0;
    for (const c of coordinates) {
      const d = Math.hypot(c[0] - center[0], c[1] - center[1], c[2] - center[2]);
      scale = Math.max(scale, d);
    }
    if (scale === 0) scale = 1;
    this.points = students.map((student, i) => ({
      student,
      unit: [
        (coordinates[i][0] - center[0]) / scale,
        (coordinates[i][1] - center[1]) / scale,
        (coordinates[i][2] - center[2]) / scale,
      ] as [number, number, number],
      color: colors[i],
    }));
    this.render();
  }

  setColors(colors: Map<string, string>): void {
    for (const p of this.points) {
      const color = colors.get(p.student);
      if (color) p.color = color;
    }
    this.render();
  }

  /** Neighbor highlighting: student -> gradient color, ordered by distance. */
  setHighlights(highlights: Map<string, string>): void {
    this.highlights = highlights;
    this.render();
  }

  setSelected(student: string | null): void {
    this.selected = student;
    this.render();
  }

  setCamera(camera: CameraState): void {
    this.camera = { ...camera };
    this.render();
  }

  render(): void {
    while (this.svg.firstChild) this.svg.removeChild(this.svg.firstChild);
    if (this.message) {
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(this.viewport.width / 2));
      text.setAttribute("y", String(this.viewport.height / 2));
      text.setAttribute("text-anchor", "middle");
      text.setAttribute("class", "scatter-message");
      text.textContent = this.message;
      this.svg.appendChild(text);
      return;
    }
    const projected = this.points
      .map((p) => ({ p, s: projectPoint(p.unit, this.camera, this.viewport) }))
      .sort((a, b) => a.s.depth - b.s.depth); // far points first
    for (const { p, s } of projected) {
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", s.x.toFixed(2));
      circle.setAttribute("cy", s.y.toFixed(2));
      const base = p.student === this.selected ? 8 : 5;
      circle.setAttribute("r", String(base + s.depth * 1.5));
      circle.setAttribute("fill", this.highlights.get(p.student) ?? p.color);
      circle.setAttribute("data-student", p.student);
      circle.setAttribute("class", "scatter-point");
      if (p.student === this.selected) {
        circle.setAttribute("stroke", "#ff3366");
        circle.setAttribute("stroke-width", "3");
      } else if (this.highlights.has(p.student)) {
        circle.setAttribute("stroke", "#222");
        circle.setAttribute("stroke-width", "1.5");
      }
      circle.addEventListener("click", () => this.callbacks.onSelect?.(p.student));
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = p.student;
      circle.appendChild(title);
      this.svg.appendChild(circle);
    }
  }

  private attachCameraControls(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.svg.addEventListener("mousedown", (event) => {
      dragging = true;
      lastX = (event as MouseEvent).clientX;
      lastY = (event as MouseEvent).clientY;
    });
    this.svg.addEventListener("mousemove", (event) => {
      if (!dragging) return;
      const e = event as MouseEvent;
      this.camera.yaw += (e.clientX - lastX) * 0.008;
      this.camera.pitch = Math.min(
        1.5,
        Math.max(-1.5, this.camera.pitch + (e.clientY - lastY) * 0.008),
      );
      lastX = e.clientX;
      lastY = e.clientY;
      this.render();
      this.callbacks.onCameraChange?.(this.camera);
    });
    const stop = () => {
      dragging = false;
    };
    this.svg.addEventListener("mouseup", stop);
    this.svg.addEventListener("mouseleave", stop);
    this.svg.addEventListener("wheel", (event) => {
      const e = event as WheelEvent;
      e.preventDefault();
      const factor = e.deltaY < 0 ? 1.1 : 1 / 1.1;
      this.camera.zoom = Math.min(8, Math.max(0.2, this.camera.zoom * factor));
      this.render();
      this.callbacks.onCameraChange?.(this.camera);
    });
  }
}
