import type {
  EditsMessage,
  InboundMessage,
  OutboundMessage,
  RecommendationMessage,
  TextEdit,
} from "./protocol.js";

export interface MessageSender {
  send(message: OutboundMessage): void;
}

export interface NotificationActions {
  extract(): void;
  dismiss(): void;
}

/** What the host editor must provide; kept minimal so tests can fake it. */
export interface EditorHost {
  showNotification(rec: RecommendationMessage, actions: NotificationActions): unknown;
  removeNotification(handle: unknown): void;
  promptMethodName(defaultName: string): Promise<string | null>;
  applyEdits(edits: TextEdit[]): Promise<void>;
  showError(message: string): void;
}

const DEFAULT_METHOD_NAME = "extracted";

/**
 * Client-side session state: document sync, paste forwarding, one visible
 * notification per file, and edit application only after an accept.
 */
export class Session {
  private pasteCounter = 0;
  private documentVersions = new Map<string, number>();
  private notifications = new Map<string, { path: string; handle: unknown }>();
  private acceptedIds = new Set<string>();

  constructor(
    private readonly client: MessageSender,
    private readonly host: EditorHost,
  ) {}

  /** Full-text sync; must precede any paste for the same path. */
  syncDocument(path: string, text: string): void {
    this.documentVersions.set(path, (this.documentVersions.get(path) ?? 0) + 1);
    this.client.send({ kind: "doc", path, text });
  }

  documentVersion(path: string): number {
    return this.documentVersions.get(path) ?? 0;
  }

  paste(path: string, text: string, offset: number): string {
    if (!this.documentVersions.has(path)) {
      throw new Error(`paste before document sync for ${path}`);
    }
    const id = `paste-${++this.pasteCounter}`;
    this.client.send({ kind: "paste", id, path, text, offset });
    return id;
  }

  handleMessage(message: InboundMessage): void {
    switch (message.kind) {
      case "recommendation":
        this.onRecommendation(message);
        return;
      case "edits":
        this.onEdits(message);
        return;
      case "expired":
        this.dropNotification(message.id);
        return;
      case "error":
        this.host.showError(message.message);
        return;
    }
  }

  private onRecommendation(rec: RecommendationMessage): void {
    for (const [id, entry] of this.notifications) {
      if (entry.path === rec.path) {
        this.host.removeNotification(entry.handle);
        this.notifications.delete(id);
      }
    }
    const handle = this.host.showNotification(rec, {
      extract: () => void this.extract(rec.id),
      dismiss: () => this.dismiss(rec.id),
    });
    this.notifications.set(rec.id, { path: rec.path, handle });
  }

  private async extract(id: string): Promise<void> {
    const name = await this.host.promptMethodName(DEFAULT_METHOD_NAME);
    if (name === null) {
      this.dismiss(id);
      return;
    }
    this.acceptedIds.add(id);
    this.client.send({ kind: "accept", id, name: name || DEFAULT_METHOD_NAME });
    this.dropNotification(id);
  }

  private dismiss(id: string): void {
    this.client.send({ kind: "dismiss", id });
    this.dropNotification(id);
  }

  private onEdits(message: EditsMessage): void {
    if (!this.acceptedIds.has(message.id)) {
      this.host.showError(`unsolicited edits for ${message.id} ignored`);
      return;
    }
    this.acceptedIds.delete(message.id);
    void this.host.applyEdits(message.edits);
  }

  private dropNotification(id: string): void {
    const entry = this.notifications.get(id);
    if (entry) {
      this.host.removeNotification(entry.handle);
      this.notifications.delete(id);
    }
  }

  visibleNotificationCount(): number {
    return this.notifications.size;
  }
}
