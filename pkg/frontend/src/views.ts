/**
 * Pure DOM builders: each view is a function of API data, nothing else.
 */

import type { Association, PointCloud } from "./api.js";
import type { GrayImage } from "./pgm.js";
import { toRgba } from "./pgm.js";

/** UI coordinate range; the poles sit at -1 and +1 inside it. */
export const COORD_MIN = -2;
export const COORD_MAX = 2;

function coordPercent(coord: number): number {
  const clamped = Math.min(COORD_MAX, Math.max(COORD_MIN, coord));
  return ((clamped - COORD_MIN) / (COORD_MAX - COORD_MIN)) * 100;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className !== undefined) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Horizontal axis with the pole labels anchored at coordinates -1 and +1. */
export function renderAxisHeader(poleA: string, poleB: string): HTMLElement {
  const header = el("div", "axis-header");
  header.appendChild(el("div", "axis-line"));
  const poles: Array<[string, number]> = [
    [poleA, -1],
    [poleB, 1],
  ];
  for (const [label, coord] of poles) {
    const mark = el("span", "pole-label", label);
    mark.style.left = `${coordPercent(coord)}%`;
    header.appendChild(mark);
  }
  return header;
}

/** One row per association, in response order: word, similarity, coord tick. */
export function renderAssociations(
  items: Association[],
  poleA: string,
  poleB: string,
): HTMLElement {
  const box = el("div", "associations");
  box.appendChild(renderAxisHeader(poleA, poleB));
  for (const a of items) {
    const row = el("div", "assoc-row");
    row.appendChild(el("span", "assoc-word", a.word));
    row.appendChild(el("span", "assoc-sim", a.similarity.toFixed(3)));
    const strip = el("div", "axis-strip");
    for (const pole of [-1, 1]) {
      const guide = el("span", "pole-guide");
      guide.style.left = `${coordPercent(pole)}%`;
      strip.appendChild(guide);
    }
    const tick = el("span", "coord-tick");
    tick.style.left = `${coordPercent(a.coord)}%`;
    tick.title = `coord ${a.coord.toFixed(3)}`;
    strip.appendChild(tick);
    row.appendChild(strip);
    box.appendChild(row);
  }
  return box;
}

/** Native-resolution canvas, upscaled on screen with nearest-neighbor. */
export function renderGrayImage(
  image: GrayImage,
  displayScale = 8,
): HTMLCanvasElement {
  const canvas = document.createElement("canvas");
  canvas.className = "gray-canvas";
  canvas.width = image.width;
  canvas.height = image.height;
  canvas.style.width = `${image.width * displayScale}px`;
  const ctx = canvas.getContext("2d");
  if (ctx !== null) {
    ctx.putImageData(
      new ImageData(toRgba(image), image.width, image.height),
      0,
      0,
    );
  }
  return canvas;
}

function coordColor(coord: number | null): string {
  if (coord === null) return "#8a8a8a";
  const s = Math.min(1, Math.max(0, (coord - COORD_MIN) / (COORD_MAX - COORD_MIN)));
  const r = Math.round(40 + 200 * s);
  const b = Math.round(240 - 200 * s);
  return `rgb(${r}, 80, ${b})`;
}

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

/**
 * Scatter of the flattened vocabulary: hover a point for its label, points
 * colored by slider coordinate when one is attached, pole markers annotated.
 */
export function renderPointCloud(
  cloud: PointCloud,
  width = 440,
  height = 380,
): SVGSVGElement {
  const xs = cloud.points.map((p) => p.x);
  const ys = cloud.points.map((p) => p.y);
  if (cloud.axis !== null) {
    xs.push(cloud.axis.a_xy[0], cloud.axis.b_xy[0]);
    ys.push(cloud.axis.a_xy[1], cloud.axis.b_xy[1]);
  }
  const xMin = Math.min(...xs, 0);
  const xMax = Math.max(...xs, 0);
  const yMin = Math.min(...ys, 0);
  const yMax = Math.max(...ys, 0);
  const xPad = Math.max(xMax - xMin, 1e-9) * 0.12;
  const yPad = Math.max(yMax - yMin, 1e-9) * 0.12;
  const sx = (x: number) =>
    ((x - xMin + xPad) / (xMax - xMin + 2 * xPad)) * width;
  const sy = (y: number) =>
    height - ((y - yMin + yPad) / (yMax - yMin + 2 * yPad)) * height;

  const svg = svgEl("svg");
  svg.setAttribute("class", "cloud");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));

  if (cloud.axis !== null) {
    const poles: Array<[string, [number, number]]> = [
      [cloud.axis.pole_a_label, cloud.axis.a_xy],
      [cloud.axis.pole_b_label, cloud.axis.b_xy],
    ];
    const line = svgEl("line");
    line.setAttribute("class", "cloud-axis-line");
    line.setAttribute("x1", String(sx(cloud.axis.a_xy[0])));
    line.setAttribute("y1", String(sy(cloud.axis.a_xy[1])));
    line.setAttribute("x2", String(sx(cloud.axis.b_xy[0])));
    line.setAttribute("y2", String(sy(cloud.axis.b_xy[1])));
    svg.appendChild(line);
    for (const [label, [px, py]] of poles) {
      const marker = svgEl("rect");
      marker.setAttribute("class", "pole-marker");
      marker.setAttribute("x", String(sx(px) - 4));
      marker.setAttribute("y", String(sy(py) - 4));
      marker.setAttribute("width", "8");
      marker.setAttribute("height", "8");
      marker.setAttribute(
        "transform",
        `rotate(45 ${sx(px)} ${sy(py)})`,
      );
      svg.appendChild(marker);
      const text = svgEl("text");
      text.setAttribute("class", "pole-marker-label");
      text.setAttribute("x", String(sx(px) + 8));
      text.setAttribute("y", String(sy(py) - 8));
      text.textContent = label;
      svg.appendChild(text);
    }
  }

  for (const p of cloud.points) {
    const dot = svgEl("circle");
    dot.setAttribute("class", "cloud-point");
    dot.setAttribute("cx", String(sx(p.x)));
    dot.setAttribute("cy", String(sy(p.y)));
    dot.setAttribute("r", "4.5");
    dot.setAttribute("fill", coordColor(p.coord));
    const tip = svgEl("title");
    tip.textContent =
      p.coord === null ? p.label : `${p.label} (coord ${p.coord.toFixed(3)})`;
    dot.appendChild(tip);
    svg.appendChild(dot);
  }

  return svg;
}
