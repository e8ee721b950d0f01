/**
 * UI state and actions for one assessor session.
 *
 * Invariants enforced here rather than in the views:
 *  - submit is enabled only when every pooled document has a draft grade,
 *    and the outgoing payload passes the same validation the service runs;
 *  - locked (completed) topics are read-only;
 *  - drafts persist through the DraftBook on every change, so no
 *    assessment state lives only in the DOM;
 *  - a stable idempotency key per (assessor, topic) makes double-clicked
 *    or retried submissions collapse into one persisted submission;
 *  - second-round votes are restricted to the tie's two offered options.
 */

import { ApiError, JudgeApi } from "./api";
import type { Grade, PoolPayload, TieRow, TopicSummary } from "./contract";
import { isGrade, submissionProblems, tieVoteProblems } from "./contract";
import { DraftBook } from "./storage";

export const TIES_PER_PAGE = 50;

export interface SessionState {
  assessor: string | null;
  topics: TopicSummary[];
  activeTopic: PoolPayload | null;
  drafts: Record<string, Grade>;
  submitting: boolean;
  /** retryable banner, e.g. a failed pool fetch */
  error: string | null;
  /** non-destructive message, e.g. an already-locked conflict */
  notice: string | null;
  ties: TieRow[];
  tieCount: number;
  tiePage: number;
}

type Listener = (state: SessionState) => void;

export class AssessmentSession {
  private state: SessionState = {
    assessor: null,
    topics: [],
    activeTopic: null,
    drafts: {},
    submitting: false,
    error: null,
    notice: null,
    ties: [],
    tieCount: 0,
    tiePage: 0,
  };

  private listeners: Listener[] = [];
  private idempotencyKey = "";

  constructor(
    private readonly api: JudgeApi,
    private readonly drafts: DraftBook,
  ) {}

  snapshot(): SessionState {
    return { ...this.state, drafts: { ...this.state.drafts } };
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(partial: Partial<SessionState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.snapshot());
  }

  // -- topic list -----------------------------------------------------

  async loadTopics(): Promise<void> {
    try {
      const { assessor, topics } = await this.api.topics();
      this.update({ assessor, topics, error: null });
    } catch (err) {
      this.update({ error: describe(err) });
    }
  }

  // -- judging screen ---------------------------------------------------

  async openTopic(topicId: number): Promise<void> {
    this.update({ error: null, notice: null });
    try {
      const pool = await this.api.pool(topicId);
      const saved = this.drafts.load(topicId);
      const poolSet = new Set(pool.documents.map((d) => d.docno));
      const grades: Record<string, Grade> = {};
      for (const [docno, grade] of Object.entries(saved.grades)) {
        if (poolSet.has(docno)) grades[docno] = grade;
      }
      this.idempotencyKey = saved.idempotencyKey;
      this.update({ activeTopic: pool, drafts: grades, submitting: false });
    } catch (err) {
      // retryable: the banner keeps the topic id so "retry" can re-fetch
      this.update({ error: `could not load topic ${topicId}: ${describe(err)}` });
    }
  }

  closeTopic(): void {
    this.update({ activeTopic: null, drafts: {}, notice: null, error: null });
  }

  get activeLocked(): boolean {
    return this.state.activeTopic?.locked ?? false;
  }

  setGrade(docno: string, grade: number): void {
    const topic = this.state.activeTopic;
    if (!topic) throw new Error("no active topic");
    if (topic.locked) return; // read-only; selector should be disabled anyway
    if (!isGrade(grade)) throw new Error(`grade out of range: ${grade}`);
    if (!topic.documents.some((d) => d.docno === docno)) {
      throw new Error(`document ${docno} is not in the pool`);
    }
    const drafts = { ...this.state.drafts, [docno]: grade };
    this.drafts.save(topic.topic_id, {
      idempotencyKey: this.idempotencyKey,
      grades: drafts,
    });
    this.update({ drafts });
  }

  gradedCount(): number {
    return Object.keys(this.state.drafts).length;
  }

  submissionProblems(): string[] {
    const topic = this.state.activeTopic;
    if (!topic) return ["no active topic"];
    return submissionProblems(
      this.state.drafts,
      topic.documents.map((d) => d.docno),
    );
  }

  canSubmit(): boolean {
    const topic = this.state.activeTopic;
    if (!topic || topic.locked || this.state.submitting) return false;
    return this.submissionProblems().length === 0;
  }

  async submit(): Promise<boolean> {
    const topic = this.state.activeTopic;
    if (!topic) return false;
    if (!this.canSubmit()) return false;
    this.update({ submitting: true, error: null, notice: null });
    try {
      await this.api.submitJudgments(
        topic.topic_id,
        this.state.drafts,
        this.idempotencyKey,
      );
      this.drafts.clear(topic.topic_id);
      this.update({
        submitting: false,
        activeTopic: { ...topic, locked: true },
        notice: `topic ${topic.topic_id} submitted`,
      });
      await this.loadTopics(); // completion flags refresh; topic no longer enterable
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.isConflict) {
        // already locked elsewhere: non-destructive, just reflect it
        this.update({
          submitting: false,
          activeTopic: { ...topic, locked: true },
          notice: `topic ${topic.topic_id} was already completed`,
        });
        await this.loadTopics();
        return false;
      }
      // network or server failure: drafts stay persisted for retry
      this.update({ submitting: false, error: describe(err) });
      return false;
    }
  }

  // -- tie resolution ----------------------------------------------------

  async loadTies(page = 0): Promise<void> {
    try {
      const { count, ties } = await this.api.ties(
        page * TIES_PER_PAGE,
        TIES_PER_PAGE,
      );
      this.update({ ties, tieCount: count, tiePage: page, error: null });
    } catch (err) {
      this.update({ error: describe(err) });
    }
  }

  tiePageCount(): number {
    return Math.max(1, Math.ceil(this.state.tieCount / TIES_PER_PAGE));
  }

  /** the two offered grades, exactly as the service stated them */
  tieOptions(pair: string): number[] {
    const tie = this.state.ties.find((t) => t.pair === pair);
    if (!tie) throw new Error(`unknown tied pair ${pair}`);
    return [...tie.options];
  }

  async resolveTie(pair: string, grade: number): Promise<boolean> {
    const problems = tieVoteProblems(grade, this.tieOptions(pair));
    if (problems.length > 0) {
      this.update({ error: problems.join("; ") });
      return false;
    }
    try {
      await this.api.resolveTie(pair, grade);
      await this.loadTies(this.state.tiePage);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.isConflict) {
        this.update({ notice: `tie ${pair}: vote already recorded` });
        await this.loadTies(this.state.tiePage);
        return false;
      }
      this.update({ error: describe(err) });
      return false;
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  if (err instanceof Error) return err.message;
  return String(err);
}
