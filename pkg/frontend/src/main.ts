/**
 * Application shell: wires the input page, results table, and the
 * neighborhood side panel together against one service base URL.
 */

import { ApiClient } from './api.js';
import { renderInputPage } from './inputPage.js';
import { renderNeighborhood } from './neighborhood.js';
import { renderResultsTable } from './resultsTable.js';
import { SessionStore } from './state.js';

export function mountApp(root: HTMLElement, baseUrl: string): void {
  const api = new ApiClient(baseUrl);

  function showInputPage(): void {
    root.replaceChildren();
    const page = document.createElement('div');
    root.appendChild(page);
    renderInputPage(page, api, { onResults: showResults });
  }

  function showResults(store: SessionStore): void {
    root.replaceChildren();

    const bar = document.createElement('div');
    bar.className = 'topbar';
    const back = document.createElement('a');
    back.href = '#';
    back.textContent = '← new mapping';
    back.addEventListener('click', (event) => {
      event.preventDefault();
      showInputPage();
    });
    bar.appendChild(back);
    root.appendChild(bar);

    const layout = document.createElement('div');
    layout.className = 'layout';
    const tableHost = document.createElement('div');
    tableHost.className = 'table-host';
    const sidePanel = document.createElement('div');
    sidePanel.className = 'side-panel';
    layout.append(tableHost, sidePanel);
    root.appendChild(layout);

    renderResultsTable(tableHost, store, {
      onShowNeighborhood: async (iri) => {
        if (store.jobId === null) {
          sidePanel.textContent = 'neighborhood graphs need the originating mapping job';
          return;
        }
        sidePanel.textContent = 'loading graph...';
        try {
          const data = await store.api.neighborhood(store.jobId, iri);
          sidePanel.replaceChildren();
          renderNeighborhood(sidePanel, data);
        } catch (cause) {
          sidePanel.textContent = String(cause);
        }
      },
    });
  }

  showInputPage();
}

declare global {
  interface Window {
    TERMGROUNDER_SERVICE_URL?: string;
  }
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  mountApp(
    document.getElementById('app')!,
    window.TERMGROUNDER_SERVICE_URL ?? 'http://127.0.0.1:8008',
  );
}
