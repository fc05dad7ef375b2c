import { ApiClient } from "./api.js";
import type { DraftStore } from "./storage.js";
import type {
  CheckResult,
  ExerciseSummary,
  QuestionView,
  SubmissionView,
} from "./types.js";
import { renderQuestion } from "./widgets.js";

export interface AppDeps {
  root: HTMLElement;
  api: ApiClient;
  drafts: DraftStore;
  learnerId?: string;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/**
 * One learner session: choose an exercise, edit code, submit, read the
 * check results, then answer the generated questions with inline feedback.
 *
 * Every asynchronous interaction updates `lastAction`, so scripted
 * sessions (and tests) can await quiescence after a click.
 */
export class QlcApp {
  lastAction: Promise<unknown> = Promise.resolve();

  private exercises: ExerciseSummary[] = [];
  private current: ExerciseSummary | null = null;
  private submission: SubmissionView | null = null;

  private picker!: HTMLSelectElement;
  private statement!: HTMLElement;
  private editor!: HTMLTextAreaElement;
  private submitButton!: HTMLButtonElement;
  private submitError!: HTMLElement;
  private checksPanel!: HTMLElement;
  private questionsPanel!: HTMLElement;
  private statusLine!: HTMLElement;

  constructor(private readonly deps: AppDeps) {}

  async init(): Promise<void> {
    this.buildSkeleton();
    this.exercises = await this.deps.api.listExercises();
    this.picker.innerHTML = "";
    for (const exercise of this.exercises) {
      const option = document.createElement("option");
      option.value = exercise.exerciseId;
      option.textContent = exercise.title;
      this.picker.appendChild(option);
    }
    if (this.exercises.length > 0) {
      this.selectExercise(this.exercises[0]!.exerciseId);
    }
  }

  private buildSkeleton(): void {
    const root = this.deps.root;
    root.innerHTML = "";
    root.classList.add("qlc-app");

    const header = el("header");
    header.appendChild(el("h1", undefined, "Questions about your code"));
    root.appendChild(header);

    const pickerSection = el("section", "qlc-picker");
    const pickerLabel = el("label", undefined, "Exercise: ");
    this.picker = document.createElement("select");
    this.picker.id = "exercise-select";
    this.picker.addEventListener("change", () => this.selectExercise(this.picker.value));
    pickerLabel.appendChild(this.picker);
    pickerSection.appendChild(pickerLabel);
    this.statement = el("p", "qlc-statement");
    pickerSection.appendChild(this.statement);
    root.appendChild(pickerSection);

    const editorSection = el("section", "qlc-editor");
    const editorLabel = el("label", undefined, "Your code:");
    this.editor = document.createElement("textarea");
    this.editor.id = "code-editor";
    this.editor.rows = 16;
    this.editor.spellcheck = false;
    this.editor.addEventListener("input", () => {
      if (this.current) {
        this.deps.drafts.saveCode(this.current.exerciseId, this.editor.value);
      }
    });
    editorLabel.appendChild(this.editor);
    editorSection.appendChild(editorLabel);
    this.submitButton = el("button", "qlc-submit-code", "Submit for checking");
    this.submitButton.id = "submit-code";
    this.submitButton.type = "button";
    this.submitButton.addEventListener("click", () => {
      this.lastAction = this.submitFlow();
    });
    editorSection.appendChild(this.submitButton);
    this.submitError = el("div", "qlc-submit-error");
    this.submitError.setAttribute("role", "alert");
    editorSection.appendChild(this.submitError);
    root.appendChild(editorSection);

    this.statusLine = el("p", "qlc-status");
    root.appendChild(this.statusLine);

    this.checksPanel = el("section", "qlc-checks");
    this.checksPanel.id = "checks-panel";
    root.appendChild(this.checksPanel);

    this.questionsPanel = el("section", "qlc-questions");
    this.questionsPanel.id = "questions-panel";
    this.questionsPanel.hidden = true;
    root.appendChild(this.questionsPanel);
  }

  selectExercise(exerciseId: string): void {
    const exercise = this.exercises.find((e) => e.exerciseId === exerciseId);
    if (!exercise) return;
    this.current = exercise;
    this.picker.value = exerciseId;
    this.statement.textContent = exercise.statement;
    const draft = this.deps.drafts.loadCode(exerciseId);
    this.editor.value = draft ?? exercise.starterCode ?? "";
    this.submission = null;
    this.checksPanel.innerHTML = "";
    this.questionsPanel.innerHTML = "";
    this.questionsPanel.hidden = true;
    this.statusLine.textContent = "";
    this.submitError.textContent = "";
  }

  async submitFlow(): Promise<void> {
    if (!this.current) return;
    this.submitError.textContent = "";
    this.submitButton.disabled = true;
    try {
      this.submission = await this.deps.api.submit(
        this.current.exerciseId,
        this.deps.learnerId ?? "student",
        this.editor.value,
      );
    } catch (err) {
      this.submitError.textContent = `Submission failed: ${String(err)}. Your code is still here - try again.`;
      return;
    } finally {
      this.submitButton.disabled = false;
    }
    this.renderSubmission();
  }

  private renderSubmission(): void {
    const submission = this.submission;
    if (!submission) return;

    this.checksPanel.innerHTML = "";
    this.checksPanel.appendChild(el("h2", undefined, "Check results"));
    if (submission.diagnostics.length > 0) {
      const diagnostics = el("ul", "qlc-diagnostics");
      for (const line of submission.diagnostics) {
        diagnostics.appendChild(el("li", "qlc-diagnostic", line));
      }
      this.checksPanel.appendChild(diagnostics);
    }
    if (submission.checkResults.length > 0) {
      const table = el("ul", "qlc-check-list");
      for (const check of submission.checkResults) {
        table.appendChild(this.renderCheck(check));
      }
      this.checksPanel.appendChild(table);
    }

    // The question panel only exists once checks pass.
    if (submission.state === "failedChecks") {
      this.statusLine.textContent =
        "Some checks failed. Fix your code and submit again.";
      this.questionsPanel.hidden = true;
      this.questionsPanel.innerHTML = "";
      return;
    }

    this.statusLine.textContent =
      submission.questions.length > 0
        ? "All checks passed. A few questions about the code you just wrote:"
        : "All checks passed. No questions this time.";
    this.questionsPanel.innerHTML = "";
    this.questionsPanel.hidden = false;
    this.questionsPanel.appendChild(el("h2", undefined, "About your code"));
    for (const question of submission.questions) {
      this.questionsPanel.appendChild(this.renderQuestionWidget(question));
    }
    this.questionsPanel.addEventListener("qlc-action", (event) => {
      const detail = (event as CustomEvent<Promise<unknown>>).detail;
      this.lastAction = detail;
    });
  }

  private renderCheck(check: CheckResult): HTMLElement {
    const item = el("li", check.pass ? "qlc-check-pass" : "qlc-check-fail");
    const mark = check.pass ? "PASS" : "FAIL";
    item.textContent = `${mark}  ${check.entry}  expected ${check.expected}, got ${check.actual}`;
    return item;
  }

  private renderQuestionWidget(question: QuestionView): HTMLElement {
    const submission = this.submission!;
    return renderQuestion({
      question,
      code: submission.questions.length > 0 ? this.editorCodeFor(submission) : "",
      submitAnswer: (payload) =>
        this.deps.api.answer(submission.submissionId, question.questionId, payload),
      draft: {
        load: () => this.deps.drafts.loadAnswer(submission.submissionId, question.questionId),
        save: (value) =>
          this.deps.drafts.saveAnswer(submission.submissionId, question.questionId, value),
        clear: () =>
          this.deps.drafts.clearAnswer(submission.submissionId, question.questionId),
      },
    });
  }

  private editorCodeFor(submission: SubmissionView): string {
    // The service does not echo the code back; the editor content at
    // submission time is the same text.
    return this.editor.value;
  }
}
