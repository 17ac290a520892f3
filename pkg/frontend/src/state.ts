/**
 * Client-side session state: one mapping table under curation.
 *
 * The store never computes scores or derives mappings; it only mirrors what
 * the service returns. Row edits are optimistic (the UI updates first, then
 * reconciles with the PATCH response and its version counter; on failure the
 * previous value is restored).
 */

import { ApiClient, MappingRow, SessionResult } from './api.js';

export type Listener = () => void;

export class SessionStore {
  listeners: Listener[] = [];

  constructor(
    public api: ApiClient,
    public result: SessionResult,
    public jobId: string | null = null,
  ) {}

  get sessionId(): string {
    return this.result.session_id;
  }

  get ontologyAcronym(): string {
    return this.result.metadata['ontology_acronym'] ?? '';
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  findRow(rowIndex: number): MappingRow | null {
    for (const group of this.result.terms) {
      for (const mapping of group.mappings) {
        if (mapping.row === rowIndex) return mapping;
      }
    }
    return null;
  }

  private replaceRow(updated: MappingRow): void {
    for (const group of this.result.terms) {
      const at = group.mappings.findIndex((m) => m.row === updated.row);
      if (at >= 0) {
        group.mappings[at] = updated;
        return;
      }
    }
  }

  async setApproval(rowIndex: number, approval: string): Promise<void> {
    await this.patchField(rowIndex, 'approval', approval);
  }

  async setMappingType(rowIndex: number, mappingType: string): Promise<void> {
    await this.patchField(rowIndex, 'mapping_type', mappingType);
  }

  private async patchField(
    rowIndex: number,
    field: 'approval' | 'mapping_type',
    value: string,
  ): Promise<void> {
    const row = this.findRow(rowIndex);
    if (!row) throw new Error(`no row ${rowIndex} in session`);
    const previous = row[field];
    row[field] = value; // optimistic
    this.notify();
    try {
      const updated = await this.api.patchRow(this.sessionId, rowIndex, { [field]: value });
      this.replaceRow(updated);
    } catch (error) {
      row[field] = previous;
      this.notify();
      throw error;
    }
    this.notify();
  }

  /**
   * Promote an alternate to rank 1. The service reorders the group, so the
   * whole session result is re-fetched to stay the single source of truth.
   */
  async swapAlternate(anyRowInGroup: number, alternateIri: string): Promise<void> {
    await this.api.patchRow(this.sessionId, anyRowInGroup, { swap_with_iri: alternateIri });
    this.result = await this.api.sessionResult(this.sessionId);
    this.notify();
  }

  async refresh(): Promise<void> {
    this.result = await this.api.sessionResult(this.sessionId);
    this.notify();
  }

  async downloadCsv(): Promise<string> {
    return this.api.sessionCsv(this.sessionId);
  }
}
