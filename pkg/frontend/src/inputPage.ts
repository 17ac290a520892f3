/**
 * Input page: source terms (raw text or file), target ontology (file, URL,
 * or cached acronym), basic options, and the resume-from-CSV path. Submits
 * a job, polls it, and hands the finished session to the results callback.
 */

import { ApiClient, ApiError, SessionResult } from './api.js';
import { SessionStore } from './state.js';

export interface InputPageCallbacks {
  onResults: (store: SessionStore) => void;
}

async function readFileText(file: File): Promise<string> {
  if (typeof file.text === 'function') return file.text();
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result));
    reader.onerror = () => reject(reader.error);
    reader.readAsText(file);
  });
}

function field(labelText: string, input: HTMLElement): HTMLElement {
  const wrapper = document.createElement('label');
  wrapper.className = 'field';
  const caption = document.createElement('span');
  caption.textContent = labelText;
  wrapper.append(caption, input);
  return wrapper;
}

export function renderInputPage(
  container: HTMLElement,
  api: ApiClient,
  callbacks: InputPageCallbacks,
): void {
  container.replaceChildren();
  container.classList.add('input-page');

  const form = document.createElement('form');
  form.dataset.testid = 'input-form';

  const sourceText = document.createElement('textarea');
  sourceText.dataset.testid = 'source-text';
  sourceText.placeholder = 'one term per line';
  sourceText.rows = 6;

  const sourceFile = document.createElement('input');
  sourceFile.type = 'file';
  sourceFile.dataset.testid = 'source-file';

  const ontologyFile = document.createElement('input');
  ontologyFile.type = 'file';
  ontologyFile.dataset.testid = 'ontology-file';

  const ontologyUrl = document.createElement('input');
  ontologyUrl.type = 'text';
  ontologyUrl.dataset.testid = 'ontology-url';
  ontologyUrl.placeholder = 'https://... (ontology document)';

  const ontologyAcronym = document.createElement('input');
  ontologyAcronym.type = 'text';
  ontologyAcronym.dataset.testid = 'ontology-acronym';
  ontologyAcronym.placeholder = 'cached acronym, e.g. EFO';

  const mapper = document.createElement('select');
  mapper.dataset.testid = 'mapper';
  for (const name of [
    'tfidf', 'levenshtein', 'jaro', 'jarowinkler', 'jaccard', 'indel', 'zooma', 'bioportal',
  ]) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    mapper.appendChild(option);
  }

  const maxMappings = document.createElement('input');
  maxMappings.type = 'number';
  maxMappings.dataset.testid = 'max-mappings';
  maxMappings.min = '1';
  maxMappings.value = '3';

  const minScore = document.createElement('input');
  minScore.type = 'number';
  minScore.dataset.testid = 'min-score';
  minScore.step = '0.05';
  minScore.min = '0';
  minScore.max = '1';
  minScore.value = '0.3';

  const submit = document.createElement('button');
  submit.type = 'submit';
  submit.dataset.testid = 'submit';
  submit.textContent = 'Map Terms';

  const status = document.createElement('div');
  status.className = 'status';
  status.dataset.testid = 'status';

  const error = document.createElement('div');
  error.className = 'error';
  error.dataset.testid = 'error';
  error.hidden = true;

  function showError(message: string): void {
    error.textContent = message;
    error.hidden = !message;
    status.textContent = '';
  }

  form.append(
    field('Source terms', sourceText),
    field('... or upload a term file', sourceFile),
    field('Ontology file', ontologyFile),
    field('... or ontology URL', ontologyUrl),
    field('... or cached ontology acronym', ontologyAcronym),
    field('Mapper', mapper),
    field('Mappings per term', maxMappings),
    field('Minimum score', minScore),
    submit,
    status,
    error,
  );

  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    showError('');
    try {
      const options: Parameters<ApiClient['submitJob']>[0] = {
        mapper: mapper.value,
        maxMappings: Number(maxMappings.value),
        minScore: Number(minScore.value),
      };
      if (sourceFile.files?.[0]) {
        options.sourceFile = {
          name: sourceFile.files[0].name,
          content: await readFileText(sourceFile.files[0]),
        };
      } else if (sourceText.value.trim()) {
        options.sourceText = sourceText.value;
      }
      if (ontologyFile.files?.[0]) {
        options.ontologyFile = {
          name: ontologyFile.files[0].name,
          content: await readFileText(ontologyFile.files[0]),
        };
      } else if (ontologyUrl.value.trim()) {
        options.ontologyUrl = ontologyUrl.value.trim();
      } else if (ontologyAcronym.value.trim()) {
        options.ontologyAcronym = ontologyAcronym.value.trim();
      }

      status.textContent = 'submitting...';
      const jobId = await api.submitJob(options);
      status.textContent = 'job queued...';
      const finished = await api.waitForJob(jobId);
      if (finished.state === 'Failed') {
        showError(`mapping failed: ${finished.error ?? 'unknown error'}`);
        return;
      }
      status.textContent = 'loading results...';
      const result: SessionResult = await api.jobResult(jobId);
      callbacks.onResults(new SessionStore(api, result, jobId));
    } catch (cause) {
      showError(cause instanceof ApiError ? cause.message : String(cause));
    }
  });

  const resume = document.createElement('div');
  resume.className = 'resume';
  const resumeLink = document.createElement('a');
  resumeLink.href = '#resume';
  resumeLink.dataset.testid = 'resume-link';
  resumeLink.textContent = 'Resume Mapping';
  const resumeFile = document.createElement('input');
  resumeFile.type = 'file';
  resumeFile.dataset.testid = 'resume-file';
  resumeFile.hidden = true;
  resumeLink.addEventListener('click', (event) => {
    event.preventDefault();
    resumeFile.hidden = false;
    resumeFile.click();
  });
  resumeFile.addEventListener('change', async () => {
    const file = resumeFile.files?.[0];
    if (!file) return;
    try {
      const result = await api.resume(file.name, await readFileText(file));
      callbacks.onResults(new SessionStore(api, result, null));
    } catch (cause) {
      showError(cause instanceof ApiError ? cause.message : String(cause));
    }
  });
  resume.append(resumeLink, resumeFile);

  container.append(form, resume);
}
