/** Keyboard dispatch: maps keys to actions, ignoring typing contexts. */
export function bindKeys(target, bindings) {
    const handler = (event) => {
        const keyboard = event;
        const element = keyboard.target;
        if (element && (element.tagName === "INPUT" || element.tagName === "TEXTAREA"))
            return;
        if (keyboard.metaKey || keyboard.ctrlKey || keyboard.altKey)
            return;
        const action = bindings[keyboard.key.toLowerCase()];
        if (action) {
            keyboard.preventDefault();
            action();
        }
    };
    target.addEventListener("keydown", handler);
    return () => target.removeEventListener("keydown", handler);
}
