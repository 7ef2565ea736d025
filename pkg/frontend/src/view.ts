/** DOM wiring: search bar, Result field, Visualisation field.
 *
 * The page keeps a single ViewState and re-renders the two panels after each
 * transition. Zoom and pan live outside ViewState; they are purely
 * presentational and survive collapse toggles.
 */

import { ApiFailure, fetchDefinition, fetchGraphDocument, fetchHealth } from "./api.js";
import { renderTree } from "./layout.js";
import { pronounce } from "./speech.js";
import type { SpeechPort } from "./speech.js";
import { initialState, reduce, validateKeyword } from "./state.js";
import type { Action, ViewState } from "./state.js";
import { MalformedTreeError, parseTree } from "./treeParse.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const MIN_SCALE = 0.25;
const MAX_SCALE = 4;

interface Camera {
  scale: number;
  tx: number;
  ty: number;
}

export class App {
  private state: ViewState = initialState;
  private camera: Camera = { scale: 1, tx: 0, ty: 0 };
  private inflight: AbortController | null = null;
  private readonly speech: SpeechPort | null;

  private readonly input: HTMLInputElement;
  private readonly sayButton: HTMLButtonElement;
  private readonly resultPanel: HTMLElement;
  private readonly vizPanel: HTMLElement;
  private readonly tooltip: HTMLDivElement;

  constructor(rootElement: HTMLElement, speech: SpeechPort | null) {
    this.speech = speech;
    rootElement.innerHTML = `
      <header>
        <h1>defigraph <small id="service-status"></small></h1>
        <form id="search-form" autocomplete="off">
          <input id="search-input" type="search" placeholder="Search a word, e.g. Dog" aria-label="keyword" />
          <button type="submit">Search</button>
          <button type="button" id="say-button" disabled>Pronounce</button>
        </form>
      </header>
      <details id="result-section" open>
        <summary>Result</summary>
        <div id="result-panel" class="panel"><p class="hint">Definitions of a single word, straight from the knowledge base.</p></div>
      </details>
      <details id="viz-section" open>
        <summary>Visualisation</summary>
        <div id="viz-panel" class="panel"><p class="hint">The result tree appears here. Click nodes to collapse, scroll to zoom, drag to pan.</p></div>
      </details>
      <div id="tooltip" class="tooltip" hidden></div>
    `;
    this.input = rootElement.querySelector("#search-input") as HTMLInputElement;
    this.sayButton = rootElement.querySelector("#say-button") as HTMLButtonElement;
    this.resultPanel = rootElement.querySelector("#result-panel") as HTMLElement;
    this.vizPanel = rootElement.querySelector("#viz-panel") as HTMLElement;
    this.tooltip = rootElement.querySelector("#tooltip") as HTMLDivElement;

    if (this.speech === null) {
      this.sayButton.title = "Speech synthesis is not available in this browser";
    }
    const form = rootElement.querySelector("#search-form") as HTMLFormElement;
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit(this.input.value);
    });
    this.sayButton.addEventListener("click", () => {
      if (this.speech !== null && this.state.definition !== null) {
        pronounce(this.state.definition.label, this.state.definition.language, this.speech);
      }
    });

    const status = rootElement.querySelector("#service-status") as HTMLElement;
    void fetchHealth().then((health) => {
      status.textContent = health === null ? "service unreachable" : `service ${health.status} · v${health.version}`;
    });
  }

  dispatch(action: Action): void {
    this.state = reduce(this.state, action);
    this.render();
  }

  async submit(text: string): Promise<void> {
    const invalid = validateKeyword(text);
    if (invalid !== null) {
      this.dispatch({ type: "searchFailed", error: invalid }); // no network call
      return;
    }
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    this.camera = { scale: 1, tx: 0, ty: 0 };
    this.dispatch({ type: "searchStarted", query: text });
    try {
      const definition = await fetchDefinition(text.trim(), controller.signal);
      if (controller.signal.aborted) return;
      this.dispatch({ type: "definitionLoaded", definition });
      const document_ = await fetchGraphDocument(text.trim(), controller.signal);
      if (controller.signal.aborted) return;
      this.dispatch({ type: "treeLoaded", tree: parseTree(document_) });
    } catch (error) {
      if (controller.signal.aborted) return;
      if (error instanceof ApiFailure) {
        this.dispatch({ type: "searchFailed", error: error.body });
      } else if (error instanceof MalformedTreeError) {
        this.dispatch({ type: "searchFailed", error: { code: "malformed_tree", message: error.message } });
      } else {
        this.dispatch({ type: "searchFailed", error: { code: "unexpected_error", message: String(error) } });
      }
    }
  }

  private render(): void {
    this.renderResult();
    this.renderViz();
    this.sayButton.disabled = this.speech === null || this.state.definition === null;
  }

  private renderResult(): void {
    const { error, loading, definition } = this.state;
    this.resultPanel.replaceChildren();
    if (error !== null) {
      const banner = el("div", "error-banner");
      banner.append(el("code", "", error.code), el("span", "", ` ${error.message}`));
      this.resultPanel.append(banner);
      return;
    }
    if (loading && definition === null) {
      this.resultPanel.append(el("p", "hint", "Looking it up..."));
      return;
    }
    if (definition === null) {
      this.resultPanel.append(el("p", "hint", "Definitions of a single word, straight from the knowledge base."));
      return;
    }
    const heading = el("h2", "", definition.label);
    const abstract = el("p", "abstract", definition.abstract || "(no abstract in this language)");
    this.resultPanel.append(heading);
    if (definition.thumbnail !== undefined) {
      const img = document.createElement("img");
      img.src = definition.thumbnail;
      img.alt = definition.label;
      img.className = "thumbnail";
      this.resultPanel.append(img);
    }
    this.resultPanel.append(abstract);
    if (definition.truncated) {
      this.resultPanel.append(el("p", "hint", "Shortened to the first few sentences."));
    }
  }

  private renderViz(): void {
    const { tree, collapsed } = this.state;
    this.vizPanel.replaceChildren();
    if (tree === null) {
      this.vizPanel.append(el("p", "hint", "The result tree appears here. Click nodes to collapse, scroll to zoom, drag to pan."));
      return;
    }
    const scene = renderTree(tree, collapsed);

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("class", "scene");
    svg.setAttribute("viewBox", `0 0 ${scene.width} ${scene.height}`);
    const layer = document.createElementNS(SVG_NS, "g");
    this.applyCamera(layer);
    svg.append(layer);

    for (const edge of scene.edges) {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(edge.x1));
      line.setAttribute("y1", String(edge.y1));
      line.setAttribute("x2", String(edge.x2));
      line.setAttribute("y2", String(edge.y2));
      line.setAttribute("class", "edge");
      layer.append(line);
    }

    for (const node of scene.nodes) {
      const group = document.createElementNS(SVG_NS, "g");
      group.setAttribute("transform", `translate(${node.x}, ${node.y})`);
      group.setAttribute("data-node-id", node.id);

      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("r", node.hasChildren ? "9" : "6");
      circle.setAttribute("fill", node.fill);
      circle.setAttribute("class", node.collapsed ? "node collapsed" : "node");

      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", "14");
      text.setAttribute("dy", "0.32em");
      text.textContent = node.collapsed ? `${node.label} …` : node.label;

      if (node.isLink && node.url !== undefined) {
        // external sources open in a new browsing context; color change on
        // hover comes from the .link-node style
        const anchor = document.createElementNS(SVG_NS, "a");
        anchor.setAttribute("href", node.url);
        anchor.setAttribute("target", "_blank");
        anchor.setAttribute("rel", "noopener");
        anchor.setAttribute("class", "link-node");
        anchor.append(circle, text);
        group.append(anchor);
      } else {
        group.append(circle, text);
        group.addEventListener("click", () => this.dispatch({ type: "toggleNode", id: node.id }));
        group.classList.add("toggleable");
      }

      if (node.tooltip !== undefined) {
        group.addEventListener("mouseenter", (event) => this.showTooltip(event as MouseEvent, node.tooltip ?? ""));
        group.addEventListener("mouseleave", () => this.hideTooltip());
      }
      layer.append(group);
    }

    this.attachCameraHandlers(svg, layer);
    this.vizPanel.append(svg);
  }

  private applyCamera(layer: SVGGElement): void {
    layer.setAttribute(
      "transform",
      `translate(${this.camera.tx}, ${this.camera.ty}) scale(${this.camera.scale})`,
    );
  }

  private attachCameraHandlers(svg: SVGSVGElement, layer: SVGGElement): void {
    svg.addEventListener(
      "wheel",
      (event) => {
        event.preventDefault();
        const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
        this.camera.scale = Math.min(MAX_SCALE, Math.max(MIN_SCALE, this.camera.scale * factor));
        this.applyCamera(layer);
      },
      { passive: false },
    );
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    svg.addEventListener("pointerdown", (event) => {
      dragging = true;
      lastX = event.clientX;
      lastY = event.clientY;
      svg.setPointerCapture(event.pointerId);
    });
    svg.addEventListener("pointermove", (event) => {
      if (!dragging) return;
      this.camera.tx += event.clientX - lastX;
      this.camera.ty += event.clientY - lastY;
      lastX = event.clientX;
      lastY = event.clientY;
      this.applyCamera(layer);
    });
    svg.addEventListener("pointerup", () => {
      dragging = false;
    });
  }

  private showTooltip(event: MouseEvent, text: string): void {
    this.tooltip.textContent = text;
    this.tooltip.style.left = `${event.pageX + 12}px`;
    this.tooltip.style.top = `${event.pageY + 12}px`;
    this.tooltip.hidden = false;
  }

  private hideTooltip(): void {
    this.tooltip.hidden = true;
  }
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const element = document.createElement(tag);
  if (className) element.className = className;
  if (text !== undefined) element.textContent = text;
  return element;
}
