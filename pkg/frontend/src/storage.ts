// Draft persistence: a reload must not lose typed answers or editor text.

export interface DraftStore {
  loadCode(exerciseId: string): string | null;
  saveCode(exerciseId: string, code: string): void;
  loadAnswer(submissionId: string, questionId: string): string | null;
  saveAnswer(submissionId: string, questionId: string, draft: string): void;
  clearAnswer(submissionId: string, questionId: string): void;
}

const CODE_PREFIX = "qlc:code:";
const ANSWER_PREFIX = "qlc:draft:";

export class LocalDraftStore implements DraftStore {
  constructor(private readonly backing: Storage = localStorage) {}

  loadCode(exerciseId: string): string | null {
    return this.backing.getItem(CODE_PREFIX + exerciseId);
  }

  saveCode(exerciseId: string, code: string): void {
    this.backing.setItem(CODE_PREFIX + exerciseId, code);
  }

  loadAnswer(submissionId: string, questionId: string): string | null {
    return this.backing.getItem(`${ANSWER_PREFIX}${submissionId}:${questionId}`);
  }

  saveAnswer(submissionId: string, questionId: string, draft: string): void {
    this.backing.setItem(`${ANSWER_PREFIX}${submissionId}:${questionId}`, draft);
  }

  clearAnswer(submissionId: string, questionId: string): void {
    this.backing.removeItem(`${ANSWER_PREFIX}${submissionId}:${questionId}`);
  }
}

/** In-memory stand-in for environments without localStorage. */
export class MemoryDraftStore implements DraftStore {
  private readonly map = new Map<string, string>();

  loadCode(exerciseId: string): string | null {
    return this.map.get(CODE_PREFIX + exerciseId) ?? null;
  }

  saveCode(exerciseId: string, code: string): void {
    this.map.set(CODE_PREFIX + exerciseId, code);
  }

  loadAnswer(submissionId: string, questionId: string): string | null {
    return this.map.get(`${ANSWER_PREFIX}${submissionId}:${questionId}`) ?? null;
  }

  saveAnswer(submissionId: string, questionId: string, draft: string): void {
    this.map.set(`${ANSWER_PREFIX}${submissionId}:${questionId}`, draft);
  }

  clearAnswer(submissionId: string, questionId: string): void {
    this.map.delete(`${ANSWER_PREFIX}${submissionId}:${questionId}`);
  }
}
