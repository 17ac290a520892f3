/** Shared fixtures and DOM helpers for the UI tests. */

import { ApiClient, SessionResult } from '../src/api.js';
import { SessionStore } from '../src/state.js';

export function serviceUrl(): string {
  const url = process.env.TG_SERVICE_URL;
  if (!url) throw new Error('TG_SERVICE_URL not set; globalSetup did not run');
  return url;
}

export function apiClient(): ApiClient {
  return new ApiClient(serviceUrl());
}

/** Small disease hierarchy in term-table CSV form (the service parses it). */
export function diseaseOntologyCsv(): string {
  return [
    'iri,label,exact_synonyms,parents',
    'EX:0001,disorder,,',
    'EX:0002,heart disease,cardiac disease,EX:0001',
    'EX:0003,heart failure,cardiac failure,EX:0002',
    'EX:0004,lung disease,,EX:0001',
    'EX:0005,asthma,,EX:0004',
  ].join('\n') + '\n';
}

/** Hub term with a configurable number of children. */
export function hubOntologyCsv(childCount: number): string {
  const lines = ['iri,label,parents', 'EX:hub,hub term,'];
  for (let i = 0; i < childCount; i++) {
    lines.push(`EX:c${String(i).padStart(2, '0')},child ${i},EX:hub`);
  }
  return lines.join('\n') + '\n';
}

export async function runFixtureJob(
  sourceText: string,
  ontologyCsv: string,
  options: Record<string, unknown> = {},
): Promise<{ store: SessionStore; jobId: string }> {
  const api = apiClient();
  const jobId = await api.submitJob({
    sourceText,
    ontologyFile: { name: 'fixture.csv', content: ontologyCsv },
    maxMappings: 3,
    minScore: 0,
    ...options,
  });
  const status = await api.waitForJob(jobId);
  if (status.state !== 'Done') {
    throw new Error(`fixture job failed: ${status.error}`);
  }
  const result: SessionResult = await api.jobResult(jobId);
  return { store: new SessionStore(api, result, jobId), jobId };
}

export function mount(): HTMLElement {
  const host = document.createElement('div');
  document.body.appendChild(host);
  return host;
}

export function queryAll(root: HTMLElement, testId: string): HTMLElement[] {
  return Array.from(root.querySelectorAll(`[data-testid="${testId}"]`));
}

export function query(root: HTMLElement, testId: string): HTMLElement {
  const found = queryAll(root, testId);
  if (!found.length) throw new Error(`no element with data-testid=${testId}`);
  return found[0];
}

export function setSelect(select: HTMLElement, value: string): void {
  (select as HTMLSelectElement).value = value;
  select.dispatchEvent(new Event('change', { bubbles: true }));
}

/** Wait until the predicate holds (the UI applies PATCHes asynchronously). */
export async function until(
  predicate: () => boolean,
  timeoutMs = 10_000,
  what = 'condition',
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!predicate()) {
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

/**
 * Visible curation state of the rendered table, for exact comparisons
 * across download/resume round trips. Expanders must be in the same state
 * on both sides; scores compare as displayed (three decimals).
 */
export function tableSnapshot(root: HTMLElement): unknown[] {
  const rows: unknown[] = [];
  for (const tr of Array.from(root.querySelectorAll('tbody tr'))) {
    const cells = Array.from(tr.querySelectorAll('td'));
    const selects = Array.from(tr.querySelectorAll('select')) as HTMLSelectElement[];
    rows.push({
      kind: tr.getAttribute('data-testid') ?? tr.className,
      text: cells.map((td) => {
        const clone = td.cloneNode(true) as HTMLElement;
        for (const control of Array.from(clone.querySelectorAll('button, select'))) {
          control.remove();
        }
        return clone.textContent?.trim() ?? '';
      }),
      selects: selects.map((s) => s.value),
    });
  }
  return rows;
}
