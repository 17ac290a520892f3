/**
 * Typed client for the mapping service HTTP API.
 *
 * Multipart bodies are assembled by hand as plain strings: the uploaded
 * artifacts (term lists, ontology tables, mapping CSVs) are all UTF-8 text,
 * and a string body behaves identically in browsers and in test runners.
 */

export interface MappingRow {
  row: number;
  version: number;
  source_term: string;
  source_term_id: string | null;
  tags: string[];
  iri: string;
  curie: string;
  label: string;
  score: number | null;
  rank: number | null;
  mapper: string | null;
  matched_string: string;
  mapping_type: string;
  approval: string;
}

export interface TermGroup {
  source_term: string;
  source_term_id: string | null;
  tags: string[];
  mappings: MappingRow[];
}

export interface UnmappedTerm {
  text: string;
  id: string | null;
  tags: string[];
}

export interface SessionResult {
  session_id: string;
  metadata: Record<string, string>;
  terms: TermGroup[];
  unmapped: UnmappedTerm[];
}

export interface JobStatus {
  job_id: string;
  state: 'Queued' | 'Running' | 'Done' | 'Failed';
  submitted_at: number;
  error: string | null;
}

export interface GraphNode {
  iri: string;
  curie: string;
  label: string;
}

export interface Neighborhood {
  iri: string;
  labels: string[];
  ancestors: GraphNode[];
  children: GraphNode[];
  instances: GraphNode[];
  edges: Array<{ source: string; target: string }>;
}

export interface JobOptions {
  sourceText?: string;
  sourceFile?: { name: string; content: string };
  ontologyFile?: { name: string; content: string };
  ontologyUrl?: string;
  ontologyAcronym?: string;
  mapper?: string;
  maxMappings?: number;
  minScore?: number;
  exclDeprecated?: boolean;
  inclUnmapped?: boolean;
}

export interface RowPatch {
  mapping_type?: string;
  approval?: string;
  swap_with_iri?: string;
}

interface MultipartField {
  name: string;
  value: string;
  filename?: string;
  contentType?: string;
}

export function multipartBody(fields: MultipartField[]): { body: string; contentType: string } {
  const boundary = '----termgrounder' + Math.random().toString(36).slice(2);
  let body = '';
  for (const field of fields) {
    body += `--${boundary}\r\n`;
    body += `Content-Disposition: form-data; name="${field.name}"`;
    if (field.filename !== undefined) {
      body += `; filename="${field.filename.replace(/"/g, '%22')}"`;
    }
    body += '\r\n';
    if (field.filename !== undefined) {
      body += `Content-Type: ${field.contentType ?? 'text/plain; charset=utf-8'}\r\n`;
    }
    body += `\r\n${field.value}\r\n`;
  }
  body += `--${boundary}--\r\n`;
  return { body, contentType: `multipart/form-data; boundary=${boundary}` };
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function raiseForStatus(response: Response): Promise<Response> {
  if (response.ok) return response;
  let detail = `HTTP ${response.status}`;
  try {
    const payload = await response.json();
    if (payload && typeof payload.detail === 'string') detail = payload.detail;
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(public baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
  }

  private async postMultipart(path: string, fields: MultipartField[]): Promise<Response> {
    const { body, contentType } = multipartBody(fields);
    const response = await fetch(this.baseUrl + path, {
      method: 'POST',
      headers: { 'Content-Type': contentType },
      body,
    });
    return raiseForStatus(response);
  }

  async submitJob(options: JobOptions): Promise<string> {
    const fields: MultipartField[] = [];
    if (options.sourceFile) {
      fields.push({
        name: 'source_file',
        value: options.sourceFile.content,
        filename: options.sourceFile.name,
      });
    } else if (options.sourceText !== undefined) {
      fields.push({ name: 'source_text', value: options.sourceText });
    }
    if (options.ontologyFile) {
      fields.push({
        name: 'ontology_file',
        value: options.ontologyFile.content,
        filename: options.ontologyFile.name,
        contentType: 'text/csv',
      });
    }
    if (options.ontologyUrl) fields.push({ name: 'ontology_url', value: options.ontologyUrl });
    if (options.ontologyAcronym) {
      fields.push({ name: 'ontology_acronym', value: options.ontologyAcronym });
    }
    if (options.mapper) fields.push({ name: 'mapper', value: options.mapper });
    if (options.maxMappings !== undefined) {
      fields.push({ name: 'max_mappings', value: String(options.maxMappings) });
    }
    if (options.minScore !== undefined) {
      fields.push({ name: 'min_score', value: String(options.minScore) });
    }
    if (options.exclDeprecated !== undefined) {
      fields.push({ name: 'excl_deprecated', value: String(options.exclDeprecated) });
    }
    if (options.inclUnmapped !== undefined) {
      fields.push({ name: 'incl_unmapped', value: String(options.inclUnmapped) });
    }
    const response = await this.postMultipart('/api/jobs', fields);
    const payload = await response.json();
    return payload.job_id as string;
  }

  async jobStatus(jobId: string): Promise<JobStatus> {
    const response = await raiseForStatus(await fetch(`${this.baseUrl}/api/jobs/${jobId}`));
    return response.json();
  }

  /** Poll until the job leaves the queue; returns the terminal status. */
  async waitForJob(jobId: string, timeoutMs = 60_000, pollMs = 150): Promise<JobStatus> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const status = await this.jobStatus(jobId);
      if (status.state === 'Done' || status.state === 'Failed') return status;
      if (Date.now() > deadline) throw new ApiError(408, `job ${jobId} timed out`);
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
  }

  async jobResult(jobId: string): Promise<SessionResult> {
    const response = await raiseForStatus(
      await fetch(`${this.baseUrl}/api/jobs/${jobId}/result`),
    );
    return response.json();
  }

  async sessionResult(sessionId: string): Promise<SessionResult> {
    const response = await raiseForStatus(
      await fetch(`${this.baseUrl}/api/sessions/${sessionId}`),
    );
    return response.json();
  }

  async sessionCsv(sessionId: string): Promise<string> {
    const response = await raiseForStatus(
      await fetch(`${this.baseUrl}/api/sessions/${sessionId}/result.csv`),
    );
    return response.text();
  }

  async jobCsv(jobId: string): Promise<string> {
    const response = await raiseForStatus(
      await fetch(`${this.baseUrl}/api/jobs/${jobId}/result.csv`),
    );
    return response.text();
  }

  async jobGraphs(jobId: string): Promise<unknown> {
    const response = await raiseForStatus(
      await fetch(`${this.baseUrl}/api/jobs/${jobId}/graphs`),
    );
    return response.json();
  }

  async resume(filename: string, content: string): Promise<SessionResult> {
    const response = await this.postMultipart('/api/sessions/resume', [
      { name: 'table_file', value: content, filename, contentType: 'text/csv' },
    ]);
    return response.json();
  }

  async patchRow(sessionId: string, row: number, patch: RowPatch): Promise<MappingRow> {
    const response = await raiseForStatus(
      await fetch(`${this.baseUrl}/api/sessions/${sessionId}/rows/${row}`, {
        method: 'PATCH',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(patch),
      }),
    );
    return response.json();
  }

  async neighborhood(jobId: string, iri: string): Promise<Neighborhood> {
    const params = new URLSearchParams({ iri, job: jobId });
    const response = await raiseForStatus(
      await fetch(`${this.baseUrl}/api/terms/neighborhood?${params}`),
    );
    return response.json();
  }
}
