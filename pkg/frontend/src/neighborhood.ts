/**
 * Ontology-neighborhood view: every ancestor of a term laid out as a
 * layered DAG above it, direct children below. When a term has 10 or more
 * children they are represented by a single collapsed circle labeled with
 * the count, which expands on click.
 */

import { Neighborhood } from './api.js';

export const CHILD_COLLAPSE_THRESHOLD = 10;

const NODE_WIDTH = 150;
const NODE_HEIGHT = 34;
const H_GAP = 14;
const V_GAP = 52;

interface Placed {
  iri: string;
  label: string;
  level: number; // 0 = focus, positive = ancestors, -1 = children
  x: number;
  y: number;
  kind: 'focus' | 'ancestor' | 'child' | 'collapsed' | 'instance';
  count?: number;
}

/** Longest-path layering of the ancestor DAG, focus at level 0. */
export function ancestorLevels(data: Neighborhood): Map<string, number> {
  const parentsOf = new Map<string, string[]>();
  for (const edge of data.edges) {
    const list = parentsOf.get(edge.source) ?? [];
    list.push(edge.target);
    parentsOf.set(edge.source, list);
  }
  const ancestorSet = new Set(data.ancestors.map((a) => a.iri));
  const levels = new Map<string, number>([[data.iri, 0]]);
  // relax until stable; neighborhoods are small
  for (let pass = 0; pass <= data.ancestors.length + 1; pass++) {
    let changed = false;
    for (const [child, parents] of parentsOf) {
      const childLevel = levels.get(child);
      if (childLevel === undefined) continue;
      for (const parent of parents) {
        if (!ancestorSet.has(parent)) continue;
        const proposed = childLevel + 1;
        if ((levels.get(parent) ?? 0) < proposed) {
          levels.set(parent, proposed);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  for (const ancestor of data.ancestors) {
    if (!levels.has(ancestor.iri)) levels.set(ancestor.iri, 1);
  }
  return levels;
}

function svgElement<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS('http://www.w3.org/2000/svg', tag);
}

export interface NeighborhoodView {
  element: HTMLElement;
  childrenExpanded: boolean;
  expandChildren(): void;
}

export function renderNeighborhood(
  container: HTMLElement,
  data: Neighborhood,
  threshold: number = CHILD_COLLAPSE_THRESHOLD,
): NeighborhoodView {
  const view: NeighborhoodView = {
    element: container,
    childrenExpanded: data.children.length < threshold,
    expandChildren() {
      view.childrenExpanded = true;
      render();
    },
  };

  function placeRow(nodes: Placed[], level: number): void {
    const total = nodes.length * NODE_WIDTH + (nodes.length - 1) * H_GAP;
    let x = -total / 2;
    for (const node of nodes) {
      node.x = x;
      node.level = level;
      x += NODE_WIDTH + H_GAP;
    }
  }

  function layout(): { placed: Placed[]; maxLevel: number } {
    const levels = ancestorLevels(data);
    const focusLabel = data.labels[0] ?? data.iri;
    const byLevel = new Map<number, Placed[]>();
    const push = (node: Placed) => {
      const list = byLevel.get(node.level) ?? [];
      list.push(node);
      byLevel.set(node.level, list);
    };
    push({ iri: data.iri, label: focusLabel, level: 0, x: 0, y: 0, kind: 'focus' });
    for (const ancestor of data.ancestors) {
      push({
        iri: ancestor.iri,
        label: ancestor.label || ancestor.curie,
        level: levels.get(ancestor.iri) ?? 1,
        x: 0,
        y: 0,
        kind: 'ancestor',
      });
    }
    if (data.children.length) {
      if (view.childrenExpanded) {
        for (const child of data.children) {
          push({
            iri: child.iri,
            label: child.label || child.curie,
            level: -1,
            x: 0,
            y: 0,
            kind: 'child',
          });
        }
      } else {
        push({
          iri: '__children__',
          label: `${data.children.length} subclasses`,
          level: -1,
          x: 0,
          y: 0,
          kind: 'collapsed',
          count: data.children.length,
        });
      }
    }
    let maxLevel = 0;
    const placed: Placed[] = [];
    for (const [level, nodes] of byLevel) {
      nodes.sort((a, b) => a.label.localeCompare(b.label));
      placeRow(nodes, level);
      maxLevel = Math.max(maxLevel, level);
      placed.push(...nodes);
    }
    for (const node of placed) {
      node.y = (maxLevel - node.level) * (NODE_HEIGHT + V_GAP);
    }
    return { placed, maxLevel };
  }

  function render(): void {
    container.replaceChildren();
    container.classList.add('neighborhood');
    const { placed } = layout();
    const positions = new Map(placed.map((node) => [node.iri, node]));

    const minX = Math.min(...placed.map((n) => n.x));
    const maxX = Math.max(...placed.map((n) => n.x + NODE_WIDTH));
    const maxY = Math.max(...placed.map((n) => n.y + NODE_HEIGHT));
    const svg = svgElement('svg');
    svg.setAttribute('viewBox', `${minX - 10} -10 ${maxX - minX + 20} ${maxY + 20}`);
    svg.setAttribute('width', String(Math.min(900, maxX - minX + 20)));
    svg.dataset.testid = 'neighborhood-svg';

    const center = (node: Placed) => ({
      x: node.x + NODE_WIDTH / 2,
      y: node.y + NODE_HEIGHT / 2,
    });

    for (const edge of data.edges) {
      const from = positions.get(edge.source);
      const to = positions.get(edge.target);
      if (!from || !to) continue;
      const line = svgElement('line');
      const a = center(from);
      const b = center(to);
      line.setAttribute('x1', String(a.x));
      line.setAttribute('y1', String(a.y));
      line.setAttribute('x2', String(b.x));
      line.setAttribute('y2', String(b.y));
      line.setAttribute('class', 'edge');
      svg.appendChild(line);
    }
    // child-to-focus links (plus the collapsed bundle when present)
    const focusCenter = center(positions.get(data.iri)!);
    for (const node of placed) {
      if (node.kind !== 'child' && node.kind !== 'collapsed') continue;
      const line = svgElement('line');
      const a = center(node);
      line.setAttribute('x1', String(a.x));
      line.setAttribute('y1', String(a.y));
      line.setAttribute('x2', String(focusCenter.x));
      line.setAttribute('y2', String(focusCenter.y));
      line.setAttribute('class', 'edge child-edge');
      svg.appendChild(line);
    }

    for (const node of placed) {
      const group = svgElement('g');
      group.dataset.testid = 'node';
      group.dataset.kind = node.kind;
      group.dataset.iri = node.iri;
      if (node.kind === 'collapsed') {
        group.dataset.collapsedChildren = String(node.count);
        const circle = svgElement('circle');
        const c = center(node);
        circle.setAttribute('cx', String(c.x));
        circle.setAttribute('cy', String(c.y));
        circle.setAttribute('r', String(NODE_HEIGHT / 2 + 6));
        circle.setAttribute('class', 'collapsed-circle');
        group.appendChild(circle);
        group.addEventListener('click', () => view.expandChildren());
      } else {
        const rect = svgElement('rect');
        rect.setAttribute('x', String(node.x));
        rect.setAttribute('y', String(node.y));
        rect.setAttribute('width', String(NODE_WIDTH));
        rect.setAttribute('height', String(NODE_HEIGHT));
        rect.setAttribute('rx', '6');
        rect.setAttribute('class', `node-${node.kind}`);
        group.appendChild(rect);
      }
      const text = svgElement('text');
      const c = center(node);
      text.setAttribute('x', String(c.x));
      text.setAttribute('y', String(c.y + 4));
      text.setAttribute('text-anchor', 'middle');
      text.textContent =
        node.label.length > 22 ? node.label.slice(0, 21) + '…' : node.label;
      group.appendChild(text);
      svg.appendChild(group);
    }
    container.appendChild(svg);
  }

  render();
  return view;
}
