/** Page entry point: wire the model file picker to a workspace. */

import { Client } from "./api.js";
import { Workspace } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service") ?? "http://127.0.0.1:8000";

const root = document.getElementById("workspace")!;
const picker = document.getElementById("model-file") as HTMLInputElement;
const rawToggle = document.getElementById("raw-priorities") as HTMLInputElement;

const workspace = new Workspace(root, new Client(baseUrl));

picker.addEventListener("change", () => {
  const file = picker.files?.[0];
  if (!file) return;
  void file.text().then(async (text) => {
    let doc: unknown;
    try {
      doc = JSON.parse(text);
    } catch (error) {
      workspace.showError(error);
      return;
    }
    await workspace.load(doc, rawToggle.checked);
  });
});
