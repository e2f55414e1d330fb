// View state with URL round-tripping: a shared link reproduces the same
// selection, color coding, cohort endpoints, and camera pose.

export type ColorAttribute = "avg_accuracy" | "total_attempts" | "median_week";

export const COLOR_ATTRIBUTES: ColorAttribute[] = [
  "avg_accuracy",
  "total_attempts",
  "median_week",
];

export interface CameraState {
  yaw: number;
  pitch: number;
  zoom: number;
}

export interface ViewState {
  topic: string | null;
  color: ColorAttribute;
  selected: string | null;
  neighborK: number;
  cohortStart: string | null;
  cohortEnd: string | null;
  cohortK: number;
  camera: CameraState;
}

export const DEFAULT_CAMERA: CameraState = { yaw: 0.6, pitch: 0.35, zoom: 1 };

export function defaultView(): ViewState {
  return {
    topic: null,
    color: "avg_accuracy",
    selected: null,
    neighborK: 10,
    cohortStart: null,
    cohortEnd: null,
    cohortK: 5,
    camera: { ...DEFAULT_CAMERA },
  };
}

const round = (value: number) => Math.round(value * 1000) / 1000;

export function encodeView(view: ViewState): string {
  const params = new URLSearchParams();
  if (view.topic) params.set("topic", view.topic);
  params.set("color", view.color);
  if (view.selected) params.set("student", view.selected);
  params.set("k", String(view.neighborK));
  if (view.cohortStart) params.set("start", view.cohortStart);
  if (view.cohortEnd) params.set("end", view.cohortEnd);
  params.set("ck", String(view.cohortK));
  params.set(
    "cam",
    [round(view.camera.yaw), round(view.camera.pitch), round(view.camera.zoom)].join(","),
  );
  return params.toString();
}

export function decodeView(query: string): ViewState {
  const params = new URLSearchParams(query.replace(/^[#?]/, ""));
  const view = defaultView();
  view.topic = params.get("topic");
  const color = params.get("color");
  if (color && (COLOR_ATTRIBUTES as string[]).includes(color)) {
    view.color = color as ColorAttribute;
  }
  view.selected = params.get("student");
  const k = Number(params.get("k"));
  if (Number.isInteger(k) && k >= 1) view.neighborK = k;
  view.cohortStart = params.get("start");
  view.cohortEnd = params.get("end");
  // distinct-endpoint invariant: drop a duplicated end rather than keep it
  if (view.cohortEnd !== null && view.cohortEnd === view.cohortStart) {
    view.cohortEnd = null;
  }
  const ck = Number(params.get("ck"));
  if (Number.isInteger(ck) && ck >= 1) view.cohortK = ck;
  const cam = (params.get("cam") ?? "").split(",").map(Number);
  if (cam.length === 3 && cam.every((v) => Number.isFinite(v)) && cam[2] > 0) {
    view.camera = { yaw: cam[0], pitch: cam[1], zoom: cam[2] };
  }
  return view;
}
