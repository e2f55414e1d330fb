// Typed client for the read-only profiling API. Every number the UI shows
// comes from these payloads; the client never post-processes values.

export interface StudentAggregate {
  avg_accuracy: number;
  concept_count: number;
  total_attempts: number;
  median_week: number;
}

export interface StudentEntry {
  id: string;
  aggregate: StudentAggregate;
}

export interface StudentsResponse {
  topic: string;
  students: StudentEntry[];
}

export interface ProjectionResponse {
  topic: string;
  students: string[];
  coordinates: number[][];
  explained_variance: number[];
}

export interface NeighborEntry {
  student: string;
  distance: number;
}

export interface NeighborsResponse {
  topic: string;
  student: string;
  k: number;
  neighbors: NeighborEntry[];
}

export type CohortRole = "start" | "interior" | "end";

export interface CohortMember {
  student: string;
  distance: number | null;
  role: CohortRole;
}

export interface CohortResponse {
  topic: string;
  start: string;
  end: string;
  k: number;
  members: CohortMember[];
}

export interface GraphNode {
  concept: string;
  ordinal: number;
  raw: number[]; // [avg_accuracy, attempt_count, median_week]
  scaled: number[] | null;
}

export interface LearningGraphResponse {
  student: string;
  topic: string;
  nodes: GraphNode[];
  edges: [number, number][];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(readonly baseUrl: string = "") {}

  private async fetchJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  /** GET with identical concurrent requests collapsed onto one fetch. */
  private getJson<T>(path: string): Promise<T> {
    const pending = this.inflight.get(path);
    if (pending) return pending as Promise<T>;
    const request = this.fetchJson<T>(path).finally(() => this.inflight.delete(path));
    this.inflight.set(path, request);
    return request;
  }

  topics(): Promise<{ topics: string[] }> {
    return this.getJson("/topics");
  }

  students(topic?: string): Promise<StudentsResponse> {
    const query = topic ? `?topic=${encodeURIComponent(topic)}` : "";
    return this.getJson(`/students${query}`);
  }

  projection(topic?: string): Promise<ProjectionResponse> {
    const query = topic ? `?topic=${encodeURIComponent(topic)}` : "";
    return this.getJson(`/projection${query}`);
  }

  graph(student: string): Promise<LearningGraphResponse> {
    return this.getJson(`/students/${encodeURIComponent(student)}/graph`);
  }

  neighbors(student: string, k: number): Promise<NeighborsResponse> {
    return this.getJson(`/neighbors?student=${encodeURIComponent(student)}&k=${k}`);
  }

  cohort(start: string, end: string, k: number): Promise<CohortResponse> {
    return this.fetchJson("/cohort", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ start, end, k }),
    });
  }

  outliers(k: number): Promise<{ topic: string; k: number; scores: { student: string; score: number }[] }> {
    return this.getJson(`/outliers?k=${k}`);
  }
}
