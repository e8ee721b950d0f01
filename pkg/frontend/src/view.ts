/**
 * DOM rendering. Views are plain functions from state to elements;
 * every mutation goes back through the AssessmentSession so nothing
 * assessment-related lives only in the DOM.
 */

import type { Grade, PoolDocument, TieRow, TopicSummary } from "./contract";
import { GRADES, GRADE_LABELS } from "./contract";
import type { AssessmentSession, SessionState } from "./state";
import { TIES_PER_PAGE } from "./state";

const PREVIEW_CHARS = 160;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Long text collapses to a preview with an expandable detail view. */
function expandable(text: string, summaryLabel: string): HTMLElement {
  if (text.length <= PREVIEW_CHARS) {
    return el("p", "text", text);
  }
  const details = el("details", "expandable");
  const summary = el("summary");
  summary.textContent = `${text.slice(0, PREVIEW_CHARS)}… (${summaryLabel})`;
  details.append(summary, el("p", "text", text));
  return details;
}

export function renderBanner(state: SessionState, onRetry: () => void): HTMLElement {
  const banner = el("div", "banners");
  if (state.error) {
    const box = el("div", "banner error");
    box.append(el("span", undefined, state.error));
    const retry = el("button", "retry", "retry");
    retry.addEventListener("click", onRetry);
    box.append(retry);
    banner.append(box);
  }
  if (state.notice) {
    banner.append(el("div", "banner notice", state.notice));
  }
  return banner;
}

export function renderTopicList(
  state: SessionState,
  onOpen: (topicId: number) => void,
  onTies: () => void,
): HTMLElement {
  const root = el("section", "topic-list");
  root.append(el("h2", undefined, `topics for ${state.assessor ?? "…"}`));
  const list = el("ul");
  for (const topic of state.topics) {
    const item = el("li", topic.completed ? "topic done" : "topic");
    const open = el("button", "open");
    open.textContent = `${topic.topic_id}. ${topic.title} (${topic.pool_size} docs)`;
    open.addEventListener("click", () => onOpen(topic.topic_id));
    item.append(open);
    if (topic.completed) {
      item.append(el("span", "badge", "completed"));
    }
    list.append(item);
  }
  root.append(list);
  const ties = el("button", "nav-ties", "second-round ties");
  ties.addEventListener("click", onTies);
  root.append(ties);
  return root;
}

function gradeSelector(
  doc: PoolDocument,
  current: Grade | undefined,
  locked: boolean,
  onGrade: (docno: string, grade: Grade) => void,
): HTMLElement {
  const box = el("div", "grades");
  // fixed order 3 -> 0 top-to-bottom, color-coded by grade
  for (const grade of GRADES) {
    const label = el("label", `grade grade-${grade}`);
    const input = el("input");
    input.type = "radio";
    input.name = `grade-${doc.docno}`;
    input.value = String(grade);
    input.checked = current === grade;
    input.disabled = locked;
    input.addEventListener("change", () => onGrade(doc.docno, grade));
    label.append(input, el("span", undefined, `${grade} ${GRADE_LABELS[grade]}`));
    box.append(label);
  }
  return box;
}

export function renderJudgeScreen(
  state: SessionState,
  session: AssessmentSession,
  onBack: () => void,
): HTMLElement {
  const topic = state.activeTopic;
  const root = el("section", "judge-screen");
  if (!topic) return root;

  const back = el("button", "back", "← topics");
  back.addEventListener("click", onBack);
  root.append(back);

  root.append(el("h2", undefined, `${topic.topic_id}. ${topic.title}`));
  const need = el("div", "information-need");
  need.append(el("h3", undefined, "information need"));
  need.append(expandable(topic.description, "full description"));
  need.append(el("h3", undefined, "relevance criteria"));
  need.append(expandable(topic.narrative, "full criteria"));
  root.append(need);

  if (topic.locked) {
    root.append(el("div", "badge locked", "completed — read only"));
  }

  const progress = el("div", "progress");
  progress.textContent = `${session.gradedCount()} / ${topic.documents.length} graded`;
  root.append(progress);

  const list = el("ol", "documents");
  for (const doc of topic.documents) {
    const item = el("li", "document");
    item.append(el("h4", undefined, doc.title || doc.docno));
    item.append(el("div", "docno", doc.docno));
    item.append(expandable(doc.content, "full document"));
    item.append(
      gradeSelector(doc, state.drafts[doc.docno], topic.locked, (docno, grade) =>
        session.setGrade(docno, grade),
      ),
    );
    list.append(item);
  }
  root.append(list);

  const submit = el("button", "submit");
  submit.textContent = topic.locked ? "completed" : "submit judgments";
  submit.disabled = !session.canSubmit();
  submit.addEventListener("click", () => void session.submit());
  root.append(submit);
  return root;
}

export function renderTieScreen(
  state: SessionState,
  session: AssessmentSession,
  onBack: () => void,
): HTMLElement {
  const root = el("section", "tie-screen");
  const back = el("button", "back", "← topics");
  back.addEventListener("click", onBack);
  root.append(back);
  root.append(el("h2", undefined, `tied pairs (${state.tieCount})`));

  const list = el("ul", "ties");
  for (const tie of state.ties) {
    list.append(renderTieRow(tie, session));
  }
  root.append(list);

  if (state.tieCount > TIES_PER_PAGE) {
    const pager = el("div", "pager");
    for (let page = 0; page < session.tiePageCount(); page += 1) {
      const button = el("button", page === state.tiePage ? "page current" : "page");
      button.textContent = String(page + 1);
      button.addEventListener("click", () => void session.loadTies(page));
      pager.append(button);
    }
    root.append(pager);
  }
  return root;
}

function renderTieRow(tie: TieRow, session: AssessmentSession): HTMLElement {
  const item = el("li", "tie");
  item.append(
    el("span", "pair", `topic ${tie.topic_id}, doc ${tie.docno}: `),
  );
  if (tie.resolved) {
    item.append(
      el("span", "badge resolved", `final grade ${tie.final_grade} (${tie.status})`),
    );
    return item;
  }
  // exactly the two offered grades, keyboard-navigable buttons
  for (const grade of tie.options) {
    const button = el("button", `vote grade-${grade}`);
    button.textContent = `grade ${grade}`;
    button.addEventListener("click", () => void session.resolveTie(tie.pair, grade));
    button.addEventListener("keydown", (event) => {
      if (event.key === "Enter" || event.key === " ") {
        event.preventDefault();
        void session.resolveTie(tie.pair, grade);
      }
    });
    item.append(button);
  }
  item.append(
    el("span", "votes", `${tie.second_round_votes} of 3 second-round votes`),
  );
  return item;
}
