/**
 * Bootstrap: token login, session wiring, and screen switching.
 * The service base URL defaults to same-origin and can be overridden
 * with ?service=http://host:port for local development.
 */

import { JudgeApi } from "./api";
import { AssessmentSession } from "./state";
import { DraftBook } from "./storage";
import { renderBanner, renderJudgeScreen, renderTieScreen, renderTopicList } from "./view";

type Screen = "topics" | "judge" | "ties";

function serviceBaseUrl(): string {
  const override = new URLSearchParams(window.location.search).get("service");
  return override ?? window.location.origin;
}

function renderLogin(root: HTMLElement, onToken: (token: string) => void): void {
  root.replaceChildren();
  const form = document.createElement("form");
  form.className = "login";
  const label = document.createElement("label");
  label.textContent = "assessor token";
  const input = document.createElement("input");
  input.type = "password";
  input.autofocus = true;
  const button = document.createElement("button");
  button.textContent = "sign in";
  form.append(label, input, button);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (input.value.trim()) onToken(input.value.trim());
  });
  root.append(form);
}

async function start(root: HTMLElement, token: string): Promise<void> {
  const api = new JudgeApi({ baseUrl: serviceBaseUrl(), token });
  let screen: Screen = "topics";

  // the assessor id arrives with the first topic listing; drafts are
  // re-keyed once it is known
  let session = new AssessmentSession(api, new DraftBook(window.localStorage, "anon"));
  await session.loadTopics();
  const assessor = session.snapshot().assessor;
  if (assessor === null) {
    renderLogin(root, (next) => void start(root, next));
    const banner = document.createElement("div");
    banner.className = "banner error";
    banner.textContent = "sign-in failed; check the token";
    root.prepend(banner);
    return;
  }
  session = new AssessmentSession(api, new DraftBook(window.localStorage, assessor));
  window.sessionStorage.setItem("assess-ui/token", token);

  const rerender = () => {
    const state = session.snapshot();
    root.replaceChildren();
    root.append(
      renderBanner(state, () => {
        if (screen === "judge" && state.activeTopic) {
          void session.openTopic(state.activeTopic.topic_id);
        } else if (screen === "ties") {
          void session.loadTies(state.tiePage);
        } else {
          void session.loadTopics();
        }
      }),
    );
    if (screen === "judge" && state.activeTopic) {
      root.append(
        renderJudgeScreen(state, session, () => {
          screen = "topics";
          session.closeTopic();
          void session.loadTopics();
        }),
      );
    } else if (screen === "ties") {
      root.append(
        renderTieScreen(state, session, () => {
          screen = "topics";
          void session.loadTopics();
        }),
      );
    } else {
      root.append(
        renderTopicList(
          state,
          (topicId) => {
            screen = "judge";
            void session.openTopic(topicId);
          },
          () => {
            screen = "ties";
            void session.loadTies(0);
          },
        ),
      );
    }
  };

  session.subscribe(rerender);
  await session.loadTopics();
}

export function boot(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const saved = window.sessionStorage.getItem("assess-ui/token");
  if (saved) {
    void start(root, saved);
  } else {
    renderLogin(root, (token) => void start(root, token));
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
