/**
 * Pure rendering behaviors of the results table, driven by a stubbed
 * session (no service round trips): pagination, expanders, formatting.
 */

import { beforeEach, expect, test } from 'vitest';

import { ApiClient, MappingRow, SessionResult } from '../src/api.js';
import { PAGE_SIZE, renderResultsTable } from '../src/resultsTable.js';
import { SessionStore } from '../src/state.js';
import { mount, query, queryAll } from './helpers.js';

beforeEach(() => {
  document.body.replaceChildren();
});

function stubRow(row: number, term: string, rank: number, score: number): MappingRow {
  return {
    row,
    version: 0,
    source_term: term,
    source_term_id: null,
    tags: [],
    iri: `EX:${row}`,
    curie: `EX:${row}`,
    label: `label ${row}`,
    score,
    rank,
    mapper: 'tfidf',
    matched_string: `label ${row}`,
    mapping_type: 'Exact',
    approval: 'Unapproved',
  };
}

function stubSession(termCount: number, alternatesPerTerm = 1): SessionStore {
  const result: SessionResult = {
    session_id: 'stub',
    metadata: { ontology_acronym: 'EX' },
    terms: [],
    unmapped: [],
  };
  let rowIndex = 0;
  for (let t = 0; t < termCount; t++) {
    const mappings = [];
    for (let rank = 1; rank <= alternatesPerTerm; rank++) {
      mappings.push(stubRow(rowIndex++, `term ${t}`, rank, 1 - 0.1 * (rank - 1)));
    }
    result.terms.push({
      source_term: `term ${t}`,
      source_term_id: null,
      tags: [],
      mappings,
    });
  }
  return new SessionStore(new ApiClient('http://stub.invalid'), result, null);
}

test('pagination shows 50 terms per page', () => {
  const store = stubSession(120);
  const host = mount();
  const view = renderResultsTable(host, store);

  expect(view.pageCount()).toBe(3);
  expect(queryAll(host, 'term-row').length).toBe(PAGE_SIZE);
  expect(query(host, 'page-label').textContent).toContain('Page 1 of 3');
  expect((query(host, 'prev-page') as HTMLButtonElement).disabled).toBe(true);

  query(host, 'next-page').click();
  expect(query(host, 'page-label').textContent).toContain('Page 2 of 3');
  expect(queryAll(host, 'term-row')[0].textContent).toContain('term 50');

  view.setPage(2);
  expect(queryAll(host, 'term-row').length).toBe(20);
  expect((query(host, 'next-page') as HTMLButtonElement).disabled).toBe(true);
});

test('expander reveals only lower-ranked alternates', () => {
  const store = stubSession(1, 3);
  const host = mount();
  renderResultsTable(host, store);

  expect(queryAll(host, 'alternate-row').length).toBe(0);
  query(host, 'expander').click();
  const alternates = queryAll(host, 'alternate-row');
  expect(alternates.length).toBe(2);
  const scores = alternates.map((tr) =>
    tr.querySelector('[data-testid="score"]')!.textContent,
  );
  expect(scores).toEqual(['0.900', '0.800']); // strictly below the primary 1.000
  query(host, 'expander').click();
  expect(queryAll(host, 'alternate-row').length).toBe(0);
});

test('terms without alternates have no expander', () => {
  const store = stubSession(2, 1);
  const host = mount();
  renderResultsTable(host, store);
  expect(queryAll(host, 'expander').length).toBe(0);
});

test('ontology column shows the acronym', () => {
  const store = stubSession(1);
  const host = mount();
  renderResultsTable(host, store);
  expect(query(host, 'ontology').textContent).toContain('EX');
});

test('graphs download is disabled for resumed sessions', () => {
  const store = stubSession(1); // jobId === null, as after a resume
  const host = mount();
  renderResultsTable(host, store);
  expect((query(host, 'download-graphs') as HTMLButtonElement).disabled).toBe(true);
});

test('ignored terms render as rows without mapping controls', () => {
  const store = stubSession(1);
  store.result.terms.push({
    source_term: 'N/A',
    source_term_id: null,
    tags: ['ignored'],
    mappings: [],
  });
  const host = mount();
  renderResultsTable(host, store);
  const rows = queryAll(host, 'term-row');
  expect(rows.length).toBe(2);
  expect(rows[1].textContent).toContain('ignored');
  expect(rows[1].querySelectorAll('select').length).toBe(0);
});

test('unmapped terms are listed below the table', () => {
  const store = stubSession(1);
  store.result.unmapped.push({ text: 'mystery phrase', id: null, tags: ['unmapped'] });
  const host = mount();
  renderResultsTable(host, store);
  expect(query(host, 'unmapped').textContent).toContain('mystery phrase');
});
