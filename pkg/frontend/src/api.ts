import type {
  AnswerPayload,
  ExerciseSummary,
  GradeResultView,
  MasterySummaryEntry,
  SubmissionView,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

/** Thin typed client over the service's four endpoints. */
export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(private readonly baseUrl: string = "", fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `network error: ${String(err)}`);
    }
    const text = await response.text();
    let body: unknown = null;
    try {
      body = text ? JSON.parse(text) : null;
    } catch {
      body = null;
    }
    if (!response.ok) {
      const detail =
        body && typeof body === "object" && "error" in body
          ? String((body as { error: unknown }).error)
          : `${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  listExercises(): Promise<ExerciseSummary[]> {
    return this.request("/api/exercises");
  }

  submit(exerciseId: string, learnerId: string, code: string): Promise<SubmissionView> {
    return this.request(`/api/exercises/${encodeURIComponent(exerciseId)}/submissions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ learnerId, code }),
    });
  }

  answer(
    submissionId: string,
    questionId: string,
    payload: AnswerPayload,
  ): Promise<GradeResultView> {
    return this.request(`/api/submissions/${encodeURIComponent(submissionId)}/answers`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ questionId, payload }),
    });
  }

  history(learnerId: string): Promise<MasterySummaryEntry[]> {
    return this.request(`/api/learners/${encodeURIComponent(learnerId)}/history`);
  }
}
