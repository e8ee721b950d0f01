/**
 * Contract tests against a live judgment service instance.
 *
 * The suite boots the Python service on a synthetic fixture (a
 * 100-document pool), then drives a scripted assessor session through
 * the real HTTP API: grade everything, submit once (idempotent under a
 * double-click), observe the lock, manufacture and resolve a tie from
 * exactly two options, and prove drafts survive a page reload.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { JudgeApi } from "../src/api";
import { AssessmentSession } from "../src/state";
import { DraftBook, MemoryStore } from "../src/storage";

const PORT = 8400 + Math.floor(Math.random() * 400);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

function api(assessor: number): JudgeApi {
  return new JudgeApi({ baseUrl: BASE, token: `tok${assessor}` });
}

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/topics`);
      if (response.status === 401) return; // up, auth enforced
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("judgment service did not come up within 30s");
}

beforeAll(async () => {
  const stateDir = mkdtempSync(join(tmpdir(), "assess-ui-contract-"));
  server = spawn(
    "python3",
    [join(__dirname, "..", "scripts", "serve_fixture.py"),
     "--port", String(PORT), "--state-dir", stateDir],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stderr?.on("data", (chunk: Buffer) => {
    const text = chunk.toString();
    if (!text.includes("INFO")) process.stderr.write(text);
  });
  await waitForService();
}, 40_000);

afterAll(() => {
  server?.kill();
});

describe("scripted session against the live service", () => {
  const storage = new MemoryStore(); // stands in for window.localStorage

  it("grades a 100-document pool, submits once, and sees the lock", async () => {
    const session = new AssessmentSession(api(0), new DraftBook(storage, "a0"));
    await session.loadTopics();
    expect(session.snapshot().assessor).toBe("a0");
    expect(session.snapshot().topics.map((t) => t.topic_id)).toEqual([1, 2]);

    await session.openTopic(1);
    const pool = session.snapshot().activeTopic!;
    expect(pool.documents).toHaveLength(100);
    expect(pool.locked).toBe(false);

    // grade everything but one; the submit gate must hold
    for (const doc of pool.documents.slice(0, 99)) {
      session.setGrade(doc.docno, 2);
    }
    expect(session.canSubmit()).toBe(false);
    session.setGrade(pool.documents[99]!.docno, 3);
    expect(session.canSubmit()).toBe(true);

    // double-click: exactly one persisted submission
    const outcomes = await Promise.all([session.submit(), session.submit()]);
    expect(outcomes.filter(Boolean)).toHaveLength(1);

    const listing = session.snapshot().topics.find((t) => t.topic_id === 1)!;
    expect(listing.completed).toBe(true);

    // the topic is no longer enterable for writing
    await session.openTopic(1);
    expect(session.snapshot().activeTopic?.locked).toBe(true);
    expect(session.canSubmit()).toBe(false);

    // a raw re-submission without the idempotency key conflicts server-side
    const grades: Record<string, number> = {};
    for (const doc of pool.documents) grades[doc.docno] = 1;
    await expect(
      api(0).submitJudgments(1, grades, "different-key"),
    ).rejects.toMatchObject({ status: 409 });
  }, 30_000);

  it("resolves a tie from exactly the two offered options", async () => {
    // four more assessors complete topic 1; the first document splits
    // 3/3/1/1/0 across the five of them, producing one tie
    const perAssessor = [3, 1, 1, 0]; // a1..a4 (a0 already graded it 2... )
    // fetch the authoritative pool order first
    const referencePool = await api(1).pool(1);
    const docnos = referencePool.documents.map((d) => d.docno);
    const target = docnos[0]!;
    for (let i = 1; i <= 4; i += 1) {
      const grades: Record<string, number> = {};
      for (const docno of docnos) grades[docno] = 2;
      grades[target] = perAssessor[i - 1]!;
      await api(i).submitJudgments(1, grades, `a${i}-topic1`);
    }
    // votes on target: a0=2, a1=3, a2=1, a3=1, a4=0 -> tie, options (1, 3)
    const session = new AssessmentSession(api(0), new DraftBook(new MemoryStore(), "a0"));
    await session.loadTies(0);
    const state = session.snapshot();
    expect(state.tieCount).toBe(1);
    const tie = state.ties[0]!;
    expect(tie.docno).toBe(target);
    expect(tie.options).toHaveLength(2);
    expect(new Set(tie.options)).toEqual(new Set([1, 3]));

    // an off-option vote never reaches the service
    expect(await session.resolveTie(tie.pair, 0)).toBe(false);

    // three second-round assessors choose between exactly the two options
    expect(await session.resolveTie(tie.pair, 3)).toBe(true);
    const a1session = new AssessmentSession(api(1), new DraftBook(new MemoryStore(), "a1"));
    await a1session.loadTies(0);
    expect(await a1session.resolveTie(tie.pair, 3)).toBe(true);
    const a2session = new AssessmentSession(api(2), new DraftBook(new MemoryStore(), "a2"));
    await a2session.loadTies(0);
    expect(await a2session.resolveTie(tie.pair, 1)).toBe(true);

    await session.loadTies(0);
    const resolved = session.snapshot().ties[0]!;
    expect(resolved.resolved).toBe(true);
    // combined votes: 2,3,1,1,0 + 3,3,1 -> 3 has 3, 1 has 3 -> higher wins
    expect(resolved.final_grade).toBe(3);
    expect(resolved.status).toBe("tie_broken");

    // a fourth vote (or a repeat) conflicts without corrupting anything
    await expect(api(0).resolveTie(tie.pair, 3)).rejects.toMatchObject({
      status: 409,
    });
  }, 30_000);

  it("keeps drafts across a page reload", async () => {
    const sharedStorage = new MemoryStore();
    const before = new AssessmentSession(api(3), new DraftBook(sharedStorage, "a3"));
    await before.openTopic(2);
    const docs = before.snapshot().activeTopic!.documents;
    before.setGrade(docs[0]!.docno, 3);
    before.setGrade(docs[1]!.docno, 0);

    // reload: a fresh session object over the same storage
    const after = new AssessmentSession(api(3), new DraftBook(sharedStorage, "a3"));
    await after.openTopic(2);
    expect(after.snapshot().drafts).toEqual({
      [docs[0]!.docno]: 3,
      [docs[1]!.docno]: 0,
    });
    expect(after.canSubmit()).toBe(false); // 8 documents still ungraded
  }, 30_000);
});
