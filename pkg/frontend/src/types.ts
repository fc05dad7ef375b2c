// Wire types for the four service endpoints.

export interface ExerciseSummary {
  exerciseId: string;
  title: string;
  statement: string;
  starterCode: string | null;
}

export interface CheckResult {
  entry: string;
  expected: string;
  actual: string;
  pass: boolean;
}

export interface SourceSpan {
  startLine: number;
  startCol: number;
  endLine: number;
  endCol: number;
}

export interface OptionView {
  id: string;
  text: string;
}

export type AnswerType =
  | "multipleChoice"
  | "multiSelect"
  | "singleValue"
  | "selectInCode"
  | "openEnded";

export interface QuestionView {
  questionId: string;
  templateId: string;
  tag: { scale: string; dimension: string };
  answerType: AnswerType;
  text: string;
  options: OptionView[];
  sourceRefs: SourceSpan[];
  attempts: number;
  finalized: boolean;
  skipped: boolean;
}

export type SubmissionState = "failedChecks" | "awaitingAnswers" | "complete";

export interface SubmissionView {
  submissionId: string;
  exerciseId: string;
  learnerId: string;
  receivedAt: string;
  state: SubmissionState;
  checkResults: CheckResult[];
  diagnostics: string[];
  questions: QuestionView[];
}

export type AnswerPayload =
  | { kind: "text"; value: string; selfAssessed?: boolean }
  | { kind: "options"; optionIds: string[] }
  | { kind: "region"; span: SourceSpan }
  | { kind: "skip" };

export interface GradeResultView {
  verdict: "correct" | "incorrect" | "notAutoGradable" | "skipped";
  feedback: string;
  canonicalAnswer: string | null;
}

export interface MasterySummaryEntry {
  templateId: string;
  correct: number;
  incorrect: number;
  mastered?: boolean;
}
