/**
 * The curation table: one row per source term showing its top mapping, an
 * expander revealing the lower-scored alternates, mapping-type and approval
 * selectors, and download buttons. Client-side pagination, 50 terms a page.
 */

import { MappingRow, TermGroup } from './api.js';
import { SessionStore } from './state.js';

export const PAGE_SIZE = 50;

export const MAPPING_TYPES = ['Exact', 'Broad', 'Narrow'];
export const APPROVALS = ['Unapproved', 'Approved', 'Rejected'];

export interface TableCallbacks {
  /** Receives the CSV text after a download completes (tests capture it). */
  onDownloadedMappings?: (filename: string, text: string) => void;
  onDownloadedGraphs?: (filename: string, text: string) => void;
  onShowNeighborhood?: (iri: string) => void;
  onError?: (message: string) => void;
}

export interface TableView {
  refresh(): void;
  setPage(page: number): void;
  page: number;
  pageCount(): number;
}

function saveToDisk(filename: string, text: string, mediaType: string): void {
  // jsdom has no createObjectURL; tests capture downloads via callbacks
  if (typeof URL.createObjectURL !== 'function') return;
  const blob = new Blob([text], { type: mediaType });
  const anchor = document.createElement('a');
  anchor.href = URL.createObjectURL(blob);
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
}

function formatScore(score: number | null): string {
  return score === null ? '' : score.toFixed(3);
}

function mappedTermText(row: MappingRow): string {
  return row.label ? `${row.label} [${row.curie}]` : row.curie;
}

export function renderResultsTable(
  container: HTMLElement,
  store: SessionStore,
  callbacks: TableCallbacks = {},
): TableView {
  const expanded = new Set<string>();
  const view: TableView = {
    page: 0,
    refresh: render,
    setPage(page: number) {
      view.page = Math.max(0, Math.min(page, view.pageCount() - 1));
      render();
    },
    pageCount(): number {
      return Math.max(1, Math.ceil(store.result.terms.length / PAGE_SIZE));
    },
  };

  function groupKey(group: TermGroup): string {
    const first = group.mappings[0];
    return first ? `row-${first.row}` : `term-${group.source_term}`;
  }

  function reportError(error: unknown): void {
    const message = error instanceof Error ? error.message : String(error);
    callbacks.onError?.(message);
    const box = container.querySelector('.table-error') as HTMLElement | null;
    if (box) {
      box.textContent = message;
      box.hidden = !message;
    }
  }

  function makeSelect(
    row: MappingRow,
    choices: string[],
    current: string,
    apply: (value: string) => Promise<void>,
    testId: string,
  ): HTMLSelectElement {
    const select = document.createElement('select');
    select.dataset.testid = testId;
    select.dataset.row = String(row.row);
    for (const choice of choices) {
      const option = document.createElement('option');
      option.value = choice;
      option.textContent = choice;
      option.selected = choice === current;
      select.appendChild(option);
    }
    select.addEventListener('change', () => {
      apply(select.value).catch((error) => {
        reportError(error);
        render();
      });
    });
    return select;
  }

  function primaryRowCells(group: TermGroup, tr: HTMLTableRowElement): void {
    const primary = group.mappings[0] ?? null;
    const key = groupKey(group);

    const expanderCell = tr.insertCell();
    if (group.mappings.length > 1) {
      const button = document.createElement('button');
      button.dataset.testid = 'expander';
      button.textContent = expanded.has(key) ? '−' : '+';
      button.title = 'view alternate mappings';
      button.addEventListener('click', () => {
        if (expanded.has(key)) expanded.delete(key);
        else expanded.add(key);
        render();
      });
      expanderCell.appendChild(button);
    }

    const sourceCell = tr.insertCell();
    sourceCell.dataset.testid = 'source-term';
    sourceCell.textContent = group.source_term;
    if (group.tags.length) {
      const badge = document.createElement('span');
      badge.className = 'tags';
      badge.textContent = ` (${group.tags.join(', ')})`;
      sourceCell.appendChild(badge);
    }

    if (!primary) {
      const emptyCell = tr.insertCell();
      emptyCell.colSpan = 5;
      emptyCell.className = 'no-mapping';
      emptyCell.textContent = group.tags.includes('ignored') ? 'ignored' : 'no mapping';
      return;
    }

    const mappedCell = tr.insertCell();
    mappedCell.dataset.testid = 'mapped-term';
    mappedCell.textContent = mappedTermText(primary);

    const scoreCell = tr.insertCell();
    scoreCell.dataset.testid = 'score';
    scoreCell.textContent = formatScore(primary.score);

    const ontologyCell = tr.insertCell();
    ontologyCell.dataset.testid = 'ontology';
    const acronym = document.createElement('span');
    acronym.textContent = store.ontologyAcronym;
    ontologyCell.appendChild(acronym);
    if (callbacks.onShowNeighborhood) {
      const graphButton = document.createElement('button');
      graphButton.dataset.testid = 'show-graph';
      graphButton.textContent = 'graph';
      graphButton.addEventListener('click', () => callbacks.onShowNeighborhood!(primary.iri));
      ontologyCell.appendChild(graphButton);
    }

    tr.insertCell().appendChild(
      makeSelect(primary, MAPPING_TYPES, primary.mapping_type, (value) =>
        store.setMappingType(primary.row, value), 'mapping-type'),
    );
    tr.insertCell().appendChild(
      makeSelect(primary, APPROVALS, primary.approval, (value) =>
        store.setApproval(primary.row, value), 'approval'),
    );
  }

  function alternateRow(group: TermGroup, alternate: MappingRow, tbody: HTMLTableSectionElement): void {
    const tr = tbody.insertRow();
    tr.className = 'alternate';
    tr.dataset.testid = 'alternate-row';
    tr.dataset.row = String(alternate.row);
    tr.insertCell();
    const labelCell = tr.insertCell();
    labelCell.className = 'alternate-label';
    labelCell.textContent = '↳ alternate';
    const mappedCell = tr.insertCell();
    mappedCell.dataset.testid = 'mapped-term';
    mappedCell.textContent = mappedTermText(alternate);
    const scoreCell = tr.insertCell();
    scoreCell.dataset.testid = 'score';
    scoreCell.textContent = formatScore(alternate.score);
    const actionCell = tr.insertCell();
    actionCell.colSpan = 3;
    const useButton = document.createElement('button');
    useButton.dataset.testid = 'use-alternate';
    useButton.textContent = 'use as primary';
    useButton.addEventListener('click', () => {
      const primary = group.mappings[0];
      store.swapAlternate(primary.row, alternate.iri).catch(reportError);
    });
    actionCell.appendChild(useButton);
  }

  function render(): void {
    container.replaceChildren();
    container.classList.add('results-table');

    const controls = document.createElement('div');
    controls.className = 'controls';

    const downloadMappings = document.createElement('button');
    downloadMappings.dataset.testid = 'download-mappings';
    downloadMappings.textContent = 'Download Mappings';
    downloadMappings.addEventListener('click', async () => {
      try {
        const csv = await store.downloadCsv();
        const filename = `${store.sessionId}.csv`;
        saveToDisk(filename, csv, 'text/csv');
        callbacks.onDownloadedMappings?.(filename, csv);
      } catch (error) {
        reportError(error);
      }
    });
    controls.appendChild(downloadMappings);

    const downloadGraphs = document.createElement('button');
    downloadGraphs.dataset.testid = 'download-graphs';
    downloadGraphs.textContent = 'Download Term Graphs';
    downloadGraphs.disabled = store.jobId === null;
    downloadGraphs.addEventListener('click', async () => {
      if (store.jobId === null) return;
      try {
        const graphs = JSON.stringify(await store.api.jobGraphs(store.jobId), null, 2);
        const filename = `${store.jobId}.graphs.json`;
        saveToDisk(filename, graphs, 'application/json');
        callbacks.onDownloadedGraphs?.(filename, graphs);
      } catch (error) {
        reportError(error);
      }
    });
    controls.appendChild(downloadGraphs);

    const pageCount = view.pageCount();
    const pager = document.createElement('span');
    pager.className = 'pager';
    const prev = document.createElement('button');
    prev.dataset.testid = 'prev-page';
    prev.textContent = '<';
    prev.disabled = view.page === 0;
    prev.addEventListener('click', () => view.setPage(view.page - 1));
    const next = document.createElement('button');
    next.dataset.testid = 'next-page';
    next.textContent = '>';
    next.disabled = view.page >= pageCount - 1;
    next.addEventListener('click', () => view.setPage(view.page + 1));
    const label = document.createElement('span');
    label.dataset.testid = 'page-label';
    label.textContent = ` Page ${view.page + 1} of ${pageCount} `;
    pager.append(prev, label, next);
    controls.appendChild(pager);
    container.appendChild(controls);

    const errorBox = document.createElement('div');
    errorBox.className = 'table-error';
    errorBox.hidden = true;
    container.appendChild(errorBox);

    const table = document.createElement('table');
    const head = table.createTHead().insertRow();
    for (const title of [
      '', 'Source Term', 'Mapped Term', 'Score', 'Ontology', 'Mapping Type', 'Approval',
    ]) {
      const th = document.createElement('th');
      th.textContent = title;
      head.appendChild(th);
    }
    const tbody = table.createTBody();
    const start = view.page * PAGE_SIZE;
    for (const group of store.result.terms.slice(start, start + PAGE_SIZE)) {
      const tr = tbody.insertRow();
      tr.dataset.testid = 'term-row';
      if (group.mappings[0]) tr.dataset.row = String(group.mappings[0].row);
      primaryRowCells(group, tr);
      if (expanded.has(groupKey(group))) {
        for (const alternate of group.mappings.slice(1)) {
          alternateRow(group, alternate, tbody);
        }
      }
    }
    container.appendChild(table);

    if (store.result.unmapped.length) {
      const unmapped = document.createElement('div');
      unmapped.className = 'unmapped';
      unmapped.dataset.testid = 'unmapped';
      unmapped.textContent =
        'Unmapped: ' + store.result.unmapped.map((t) => t.text).join(', ');
      container.appendChild(unmapped);
    }
  }

  store.subscribe(render);
  render();
  return view;
}
