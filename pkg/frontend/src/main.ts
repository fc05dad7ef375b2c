import { ApiClient } from "./api.js";
import { QlcApp } from "./app.js";
import { LocalDraftStore, MemoryDraftStore } from "./storage.js";

document.addEventListener("DOMContentLoaded", () => {
  const root = document.querySelector<HTMLElement>("#app");
  if (!root) {
    return;
  }
  const params = new URLSearchParams(window.location.search);
  const drafts = (() => {
    try {
      return new LocalDraftStore(window.localStorage);
    } catch {
      return new MemoryDraftStore();
    }
  })();
  const app = new QlcApp({
    root,
    api: new ApiClient(""),
    drafts,
    learnerId: params.get("learner") ?? "student",
  });
  void app.init().catch((err) => {
    root.textContent = `Could not load exercises: ${String(err)}`;
  });
});
