/**
 * Full curation round trip against the live service: approve rows, change a
 * mapping type, promote an alternate, download, resume from the download,
 * and verify the rendered table is identical to the pre-download state and
 * the downloaded CSV is byte-equal to the raw /result.csv endpoint.
 */

import { beforeEach, expect, test } from 'vitest';

import { renderResultsTable } from '../src/resultsTable.js';
import { SessionStore } from '../src/state.js';
import {
  apiClient,
  diseaseOntologyCsv,
  mount,
  query,
  queryAll,
  runFixtureJob,
  setSelect,
  tableSnapshot,
  until,
} from './helpers.js';

beforeEach(() => {
  document.body.replaceChildren();
});

function selectOnRow(root: HTMLElement, rowIndex: number, testId: string): HTMLSelectElement {
  const match = root.querySelector(
    `select[data-testid="${testId}"][data-row="${rowIndex}"]`,
  );
  if (!match) throw new Error(`no ${testId} select for row ${rowIndex}`);
  return match as HTMLSelectElement;
}

test('curate, download, resume: identical table and byte-equal CSV', async () => {
  const { store, jobId } = await runFixtureJob(
    'heart disease\nheart failure\nasthma\n',
    diseaseOntologyCsv(),
  );
  const host = mount();
  const downloads: string[] = [];
  renderResultsTable(host, store, {
    onDownloadedMappings: (_name, text) => downloads.push(text),
  });

  const termRows = queryAll(host, 'term-row');
  expect(termRows.length).toBe(3);

  // approve two rows
  const firstRow = Number(termRows[0].getAttribute('data-row'));
  const secondRow = Number(termRows[1].getAttribute('data-row'));
  setSelect(selectOnRow(host, firstRow, 'approval'), 'Approved');
  await until(() => store.findRow(firstRow)?.version === 1, 10_000, 'first approval');
  setSelect(selectOnRow(host, secondRow, 'approval'), 'Approved');
  await until(() => store.findRow(secondRow)?.version === 1, 10_000, 'second approval');

  // set one mapping type to Broad
  setSelect(selectOnRow(host, firstRow, 'mapping-type'), 'Broad');
  await until(() => store.findRow(firstRow)?.mapping_type === 'Broad', 10_000, 'broad type');

  // promote an alternate of "heart disease" to rank 1
  const heartGroup = store.result.terms.find((t) => t.source_term === 'heart disease')!;
  expect(heartGroup.mappings.length).toBeGreaterThan(1);
  const groupRow = heartGroup.mappings[0].row;
  const alternateIri = heartGroup.mappings[1].iri;
  const expander = host.querySelector(
    `tr[data-row="${groupRow}"] button[data-testid="expander"]`,
  ) as HTMLButtonElement;
  expander.click();
  const useButtons = queryAll(host, 'use-alternate');
  expect(useButtons.length).toBeGreaterThan(0);
  useButtons[0].click();
  await until(
    () =>
      store.result.terms.find((t) => t.source_term === 'heart disease')!.mappings[0].iri ===
      alternateIri,
    10_000,
    'alternate swap',
  );

  // stabilize the view for the comparison: expand the heart disease group
  const expandAll = () => {
    for (const button of queryAll(host, 'expander')) {
      if (button.textContent === '+') (button as HTMLButtonElement).click();
    }
  };
  expandAll();
  const beforeSnapshot = tableSnapshot(host);

  // download through the UI button
  query(host, 'download-mappings').click();
  await until(() => downloads.length === 1, 10_000, 'download');
  const downloadedCsv = downloads[0];

  // byte-equality with the raw endpoint
  const endpointCsv = await apiClient().jobCsv(jobId);
  expect(downloadedCsv).toBe(endpointCsv);
  expect(downloadedCsv).toContain('Approved');
  expect(downloadedCsv).toContain('Broad');

  // resume from the downloaded file into a fresh table
  const resumed = await apiClient().resume('downloaded.csv', downloadedCsv);
  const resumedStore = new SessionStore(apiClient(), resumed, null);
  const resumedHost = mount();
  const resumedDownloads: string[] = [];
  renderResultsTable(resumedHost, resumedStore, {
    onDownloadedMappings: (_name, text) => resumedDownloads.push(text),
  });
  for (const button of queryAll(resumedHost, 'expander')) {
    if (button.textContent === '+') (button as HTMLButtonElement).click();
  }
  const afterSnapshot = tableSnapshot(resumedHost);
  expect(afterSnapshot).toEqual(beforeSnapshot);

  // and the resumed session serves the same bytes again
  query(resumedHost, 'download-mappings').click();
  await until(() => resumedDownloads.length === 1, 10_000, 'resumed download');
  expect(resumedDownloads[0]).toBe(downloadedCsv);
});

test('edits persist across a page reload of the same session', async () => {
  const { store, jobId } = await runFixtureJob('asthma\n', diseaseOntologyCsv());
  const host = mount();
  renderResultsTable(host, store);
  const row = store.result.terms[0].mappings[0].row;
  setSelect(selectOnRow(host, row, 'approval'), 'Rejected');
  await until(() => store.findRow(row)?.version === 1, 10_000, 'patch applied');

  // simulate reload: fetch the session fresh and re-render
  const fresh = await apiClient().sessionResult(jobId);
  const freshStore = new SessionStore(apiClient(), fresh, jobId);
  const freshHost = mount();
  renderResultsTable(freshHost, freshStore);
  expect(selectOnRow(freshHost, row, 'approval').value).toBe('Rejected');
});

test('score cells render service scores with three decimals', async () => {
  const { store } = await runFixtureJob('hart diseas\n', diseaseOntologyCsv());
  const host = mount();
  renderResultsTable(host, store);
  const scores = queryAll(host, 'score').map((cell) => cell.textContent);
  expect(scores.length).toBeGreaterThan(0);
  for (const text of scores) {
    expect(text).toMatch(/^\d\.\d{3}$/);
  }
  // the rendered value is exactly the service score, formatted
  const serviceScore = store.result.terms[0].mappings[0].score!;
  expect(scores[0]).toBe(serviceScore.toFixed(3));
});
