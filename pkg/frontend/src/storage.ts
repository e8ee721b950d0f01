/**
 * Draft persistence. Unsubmitted grades live in localStorage so a
 * reload (or crash) loses nothing that was drafted; submitted topics
 * clear their drafts. The storage backend is a minimal key-value
 * facade so tests can substitute an in-memory stub.
 */

import type { Grade } from "./contract";
import { isGrade } from "./contract";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export class MemoryStore implements KeyValueStore {
  private readonly data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.has(key) ? this.data.get(key)! : null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }

  removeItem(key: string): void {
    this.data.delete(key);
  }
}

interface DraftRecord {
  /** stable per (assessor, topic): reused across reloads so a retried
   *  submission deduplicates on the server */
  idempotencyKey: string;
  grades: Record<string, Grade>;
}

export class DraftBook {
  constructor(
    private readonly store: KeyValueStore,
    private readonly assessor: string,
  ) {}

  private key(topicId: number): string {
    return `assess-ui/drafts/${this.assessor}/${topicId}`;
  }

  load(topicId: number): DraftRecord {
    const raw = this.store.getItem(this.key(topicId));
    if (raw !== null) {
      try {
        const parsed = JSON.parse(raw) as DraftRecord;
        if (parsed && typeof parsed.idempotencyKey === "string" && parsed.grades) {
          const grades: Record<string, Grade> = {};
          for (const [docno, grade] of Object.entries(parsed.grades)) {
            if (isGrade(grade)) grades[docno] = grade;
          }
          return { idempotencyKey: parsed.idempotencyKey, grades };
        }
      } catch {
        // corrupt drafts are discarded, never fatal
      }
    }
    return { idempotencyKey: newIdempotencyKey(this.assessor, topicId), grades: {} };
  }

  save(topicId: number, record: DraftRecord): void {
    this.store.setItem(this.key(topicId), JSON.stringify(record));
  }

  clear(topicId: number): void {
    this.store.removeItem(this.key(topicId));
  }
}

function newIdempotencyKey(assessor: string, topicId: number): string {
  const entropy =
    globalThis.crypto?.randomUUID?.() ??
    `${Date.now().toString(36)}-${Math.random().toString(36).slice(2)}`;
  return `${assessor}-${topicId}-${entropy}`;
}
