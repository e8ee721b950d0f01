/**
 * Types and client-side validation mirroring the judgment service's
 * HTTP contract. The UI validates every payload with these helpers
 * before sending, so a structurally invalid request never leaves the
 * browser; the contract tests run the same checks against a live
 * service instance.
 */

export const SCHEMA_VERSION = 1;

export const GRADES = [3, 2, 1, 0] as const; // selector order: best first
export type Grade = 0 | 1 | 2 | 3;

export const GRADE_LABELS: Record<Grade, string> = {
  3: "highly relevant",
  2: "relevant",
  1: "marginally relevant",
  0: "irrelevant",
};

export interface TopicSummary {
  topic_id: number;
  title: string;
  description: string;
  narrative: string;
  pool_size: number;
  completed: boolean;
}

export interface PoolDocument {
  docno: string;
  title: string;
  content: string;
  url: string;
}

export interface PoolPayload {
  topic_id: number;
  title: string;
  description: string;
  narrative: string;
  documents: PoolDocument[];
  locked: boolean;
}

export interface SubmissionAck {
  topic_id: number;
  locked: boolean;
  accepted: number;
}

export interface TieRow {
  pair: string;
  topic_id: number;
  docno: string;
  options: number[];
  round1_votes: number[];
  second_round_votes: number;
  resolved: boolean;
  final_grade?: number;
  status?: string;
}

export interface TieResolutionAck {
  pair: string;
  votes: number;
  needed: number;
}

export interface AgreementPayload {
  assessors: string[];
  pairwise: Record<string, number>;
  average: number;
}

export function isGrade(value: number): value is Grade {
  return value === 0 || value === 1 || value === 2 || value === 3;
}

/**
 * Problems that would make the service reject a judgment submission.
 * Empty result means the payload is structurally acceptable.
 */
export function submissionProblems(
  grades: Record<string, number>,
  poolDocnos: string[],
): string[] {
  const problems: string[] = [];
  const graded = new Set(Object.keys(grades));
  const pool = new Set(poolDocnos);
  const missing = poolDocnos.filter((d) => !graded.has(d));
  if (missing.length > 0) {
    problems.push(`missing grades for ${missing.length} document(s)`);
  }
  for (const docno of graded) {
    if (!pool.has(docno)) {
      problems.push(`grade for document outside the pool: ${docno}`);
    }
  }
  for (const [docno, grade] of Object.entries(grades)) {
    if (!isGrade(grade)) {
      problems.push(`grade for ${docno} outside 0..3: ${grade}`);
    }
  }
  return problems;
}

/** A second-round vote must be one of the pair's two offered options. */
export function tieVoteProblems(grade: number, options: number[]): string[] {
  if (options.length !== 2) {
    return [`tie offers ${options.length} options, expected exactly 2`];
  }
  if (!options.includes(grade)) {
    return [`grade ${grade} is not among the offered options ${options.join("/")}`];
  }
  return [];
}
