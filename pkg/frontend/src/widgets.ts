import type {
  AnswerPayload,
  GradeResultView,
  QuestionView,
  SourceSpan,
} from "./types.js";

export interface QuestionDraft {
  load(): string | null;
  save(value: string): void;
  clear(): void;
}

export interface QuestionWidgetDeps {
  question: QuestionView;
  /** The submitted program text; needed to render selectable code lines. */
  code: string;
  submitAnswer: (payload: AnswerPayload) => Promise<GradeResultView>;
  draft: QuestionDraft;
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
 * Build the interactive widget for one question. The widget submits
 * answers through `deps.submitAnswer`, shows feedback inline, allows one
 * retry after an incorrect answer, and locks itself once the question is
 * resolved (correct, revealed, recorded, or skipped).
 */
export function renderQuestion(deps: QuestionWidgetDeps): HTMLElement {
  const { question } = deps;
  const container = el("fieldset", "qlc-question");
  container.dataset.questionId = question.questionId;
  container.dataset.answerType = question.answerType;
  const legend = el("legend", "qlc-question-text", question.text);
  container.appendChild(legend);

  const body = el("div", "qlc-question-body");
  container.appendChild(body);

  let collect: () => AnswerPayload | null;

  switch (question.answerType) {
    case "multipleChoice":
    case "multiSelect":
      collect = buildChoiceInputs(body, deps);
      break;
    case "singleValue":
      collect = buildSingleValueInput(body, deps);
      break;
    case "openEnded":
      collect = buildOpenEndedInput(body, deps);
      break;
    case "selectInCode":
      collect = buildCodeSelector(body, deps);
      break;
    default: {
      const error = el(
        "div",
        "qlc-error",
        `This question uses an answer type (${question.answerType}) this ` +
          "interface does not know how to display.",
      );
      error.setAttribute("role", "alert");
      container.appendChild(error);
      return container;
    }
  }

  const controls = el("div", "qlc-controls");
  const submit = el("button", "qlc-submit", "Submit answer");
  submit.type = "button";
  const skip = el("button", "qlc-skip", "Skip");
  skip.type = "button";
  controls.appendChild(submit);
  controls.appendChild(skip);
  container.appendChild(controls);

  const feedback = el("div", "qlc-feedback");
  feedback.setAttribute("role", "status");
  container.appendChild(feedback);

  const finalize = () => {
    for (const input of container.querySelectorAll("input, textarea, button")) {
      (input as HTMLInputElement).disabled = true;
    }
    container.classList.add("qlc-resolved");
    deps.draft.clear();
  };

  const showResult = (result: GradeResultView) => {
    feedback.textContent = result.feedback;
    feedback.className = `qlc-feedback qlc-${result.verdict}`;
    if (result.canonicalAnswer !== null && result.verdict === "incorrect") {
      const reveal = el(
        "div",
        "qlc-reveal",
        `The expected answer was: ${result.canonicalAnswer}`,
      );
      container.appendChild(reveal);
      finalize();
    } else if (result.verdict === "incorrect") {
      feedback.textContent = `${result.feedback} (You may try once more.)`;
    } else {
      finalize();
    }
  };

  const act = (payload: AnswerPayload) => {
    submit.disabled = true;
    const done = deps
      .submitAnswer(payload)
      .then(showResult)
      .catch((err: unknown) => {
        feedback.textContent = `Could not send your answer: ${String(err)}. Try again.`;
        feedback.className = "qlc-feedback qlc-error";
      })
      .finally(() => {
        if (!container.classList.contains("qlc-resolved")) {
          submit.disabled = false;
        }
      });
    container.dispatchEvent(new CustomEvent("qlc-action", { detail: done, bubbles: true }));
    return done;
  };

  submit.addEventListener("click", () => {
    const payload = collect();
    if (payload === null) {
      feedback.textContent = "Enter or select an answer first.";
      feedback.className = "qlc-feedback qlc-hint";
      return;
    }
    void act(payload);
  });

  skip.addEventListener("click", () => {
    void act({ kind: "skip" });
  });

  if (question.finalized || question.skipped) {
    finalize();
  }
  return container;
}

function buildChoiceInputs(
  body: HTMLElement,
  deps: QuestionWidgetDeps,
): () => AnswerPayload | null {
  const { question } = deps;
  const multi = question.answerType === "multiSelect";
  const saved = new Set<string>(JSON.parse(deps.draft.load() ?? "[]") as string[]);
  const inputs: HTMLInputElement[] = [];
  const list = el("ul", "qlc-options");
  for (const option of question.options) {
    const item = el("li");
    const label = el("label");
    const input = el("input");
    input.type = multi ? "checkbox" : "radio";
    input.name = `answer-${question.questionId}`;
    input.value = option.id;
    input.checked = saved.has(option.id);
    input.addEventListener("change", () => {
      const chosen = inputs.filter((i) => i.checked).map((i) => i.value);
      deps.draft.save(JSON.stringify(chosen));
    });
    inputs.push(input);
    label.appendChild(input);
    label.appendChild(el("span", "qlc-option-label", ` ${option.id}) ${option.text}`));
    item.appendChild(label);
    list.appendChild(item);
  }
  body.appendChild(list);
  return () => {
    const chosen = inputs.filter((i) => i.checked).map((i) => i.value);
    if (chosen.length === 0) return null;
    return { kind: "options", optionIds: chosen };
  };
}

function buildSingleValueInput(
  body: HTMLElement,
  deps: QuestionWidgetDeps,
): () => AnswerPayload | null {
  const label = el("label", "qlc-single-value");
  label.appendChild(el("span", undefined, "Your answer: "));
  const input = el("input");
  input.type = "text";
  input.value = deps.draft.load() ?? "";
  input.addEventListener("input", () => deps.draft.save(input.value));
  label.appendChild(input);
  body.appendChild(label);
  return () => {
    if (input.value.trim() === "") return null;
    return { kind: "text", value: input.value };
  };
}

function buildOpenEndedInput(
  body: HTMLElement,
  deps: QuestionWidgetDeps,
): () => AnswerPayload | null {
  const area = el("textarea", "qlc-open-ended");
  area.rows = 4;
  area.value = deps.draft.load() ?? "";
  area.addEventListener("input", () => deps.draft.save(area.value));
  body.appendChild(area);
  const selfCheck = el("label", "qlc-self-check");
  const box = el("input");
  box.type = "checkbox";
  selfCheck.appendChild(box);
  selfCheck.appendChild(
    el("span", undefined, " I checked my explanation against my code"),
  );
  body.appendChild(selfCheck);
  return () => {
    if (area.value.trim() === "") return null;
    return { kind: "text", value: area.value, selfAssessed: box.checked };
  };
}

function buildCodeSelector(
  body: HTMLElement,
  deps: QuestionWidgetDeps,
): () => AnswerPayload | null {
  const lines = deps.code.replace(/\r\n/g, "\n").split("\n");
  let anchor: number | null = null;
  let range: [number, number] | null = null;
  const saved = deps.draft.load();
  if (saved) {
    const parsed = JSON.parse(saved) as [number, number];
    range = parsed;
  }

  const pre = el("div", "qlc-code-select");
  pre.setAttribute("role", "listbox");
  pre.setAttribute("aria-label", "Select the relevant lines of your code");
  const rows: HTMLElement[] = [];

  const paint = () => {
    rows.forEach((row, index) => {
      const line = index + 1;
      const inside = range !== null && line >= range[0] && line <= range[1];
      row.classList.toggle("qlc-line-selected", inside);
      row.setAttribute("aria-selected", inside ? "true" : "false");
    });
  };

  const pick = (line: number) => {
    if (anchor === null) {
      anchor = line;
      range = [line, line];
    } else {
      range = [Math.min(anchor, line), Math.max(anchor, line)];
      anchor = null;
    }
    deps.draft.save(JSON.stringify(range));
    paint();
  };

  lines.forEach((text, index) => {
    const line = index + 1;
    const row = el("div", "qlc-code-line");
    row.tabIndex = 0;
    row.dataset.line = String(line);
    row.appendChild(el("span", "qlc-line-number", String(line)));
    row.appendChild(el("span", "qlc-line-text", text === "" ? " " : text));
    row.addEventListener("mousedown", () => {
      anchor = line;
      range = [line, line];
      paint();
    });
    row.addEventListener("mouseup", () => {
      if (anchor !== null) {
        range = [Math.min(anchor, line), Math.max(anchor, line)];
        anchor = null;
        deps.draft.save(JSON.stringify(range));
        paint();
      }
    });
    row.addEventListener("keydown", (event) => {
      if (event.key === "Enter" || event.key === " ") {
        event.preventDefault();
        pick(line);
      }
    });
    rows.push(row);
    pre.appendChild(row);
  });
  body.appendChild(pre);
  paint();

  return () => {
    if (range === null) return null;
    const [startLine, endLine] = range;
    const endText = lines[endLine - 1] ?? "";
    const span: SourceSpan = {
      startLine,
      startCol: 1,
      endLine,
      endCol: Math.max(1, endText.length),
    };
    return { kind: "region", span };
  };
}
