import { browserSpeechPort } from "./speech.js";
import { App } from "./view.js";

const mount = document.getElementById("app");
if (mount === null) {
  throw new Error("missing #app mount point");
}
new App(mount, browserSpeechPort());
