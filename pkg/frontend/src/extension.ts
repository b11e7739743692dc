import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { EngineClient } from "./client.js";
import { Session, type EditorHost } from "./session.js";

export interface ExtensionSettings {
  /** Command that runs the engine, e.g. "pastewatch" or a venv path. */
  enginePath: string;
  delayMs?: number;
  similarityThreshold?: number;
  decisionThreshold?: number;
  modelPath?: string;
}

export interface Activation {
  session: Session;
  process: ChildProcess;
  dispose(): void;
}

function writeConfig(settings: ExtensionSettings): string {
  const lines: string[] = [];
  if (settings.delayMs !== undefined) lines.push(`delay_ms = ${settings.delayMs}`);
  if (settings.similarityThreshold !== undefined)
    lines.push(`similarity_threshold = ${settings.similarityThreshold}`);
  if (settings.decisionThreshold !== undefined)
    lines.push(`decision_threshold = ${settings.decisionThreshold}`);
  if (settings.modelPath !== undefined) lines.push(`model_path = ${settings.modelPath}`);
  const dir = mkdtempSync(join(tmpdir(), "pastewatch-"));
  const path = join(dir, "engine.conf");
  writeFileSync(path, lines.join("\n") + "\n");
  return path;
}

/**
 * Spawn the engine and wire a session to it. On an unexpected engine
 * exit the host is notified and one restart is attempted with a full
 * re-sync left to the host (documents are re-sent on the next change).
 */
export function activate(settings: ExtensionSettings, host: EditorHost): Activation {
  const configPath = writeConfig(settings);
  let disposed = false;
  let child = start();

  function start(): ChildProcess {
    const proc = spawn(settings.enginePath, ["serve", "--config", configPath], {
      stdio: ["pipe", "pipe", "inherit"],
    });
    return proc;
  }

  let client = new EngineClient(child.stdin!, child.stdout!, {
    onMessage: (m) => session.handleMessage(m),
    onProtocolError: (line) => host.showError(`malformed engine message: ${line}`),
  });
  const session = new Session({ send: (message) => client.send(message) }, host);

  child.on("exit", (code) => {
    if (disposed) return;
    host.showError(`engine exited with code ${code}; restarting`);
    child = start();
    client = new EngineClient(child.stdin!, child.stdout!, {
      onMessage: (m) => session.handleMessage(m),
      onProtocolError: (line) => host.showError(`malformed engine message: ${line}`),
    });
  });

  return {
    session,
    process: child,
    dispose() {
      disposed = true;
      child.kill();
    },
  };
}
