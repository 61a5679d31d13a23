/** Keyboard dispatch: maps keys to actions, ignoring typing contexts. */

export type KeyHandler = (key: string) => void;

export function bindKeys(target: EventTarget, bindings: Record<string, () => void>): () => void {
  const handler = (event: Event) => {
    const keyboard = event as KeyboardEvent;
    const element = keyboard.target as HTMLElement | null;
    if (element && (element.tagName === "INPUT" || element.tagName === "TEXTAREA")) return;
    if (keyboard.metaKey || keyboard.ctrlKey || keyboard.altKey) return;
    const action = bindings[keyboard.key.toLowerCase()];
    if (action) {
      keyboard.preventDefault();
      action();
    }
  };
  target.addEventListener("keydown", handler);
  return () => target.removeEventListener("keydown", handler);
}
