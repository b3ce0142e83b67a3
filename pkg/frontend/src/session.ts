/** Session identity: a cookie is the only state the client keeps.
 *
 * The server mints a session when none is presented; we mint one eagerly on
 * the client so the very first request already belongs to a stable session,
 * and every page load reuses it. Reloading any page must reproduce it purely
 * from server state plus this id.
 */

const COOKIE = "litscout_session";

function randomId(): string {
  const bytes = new Uint8Array(16);
  crypto.getRandomValues(bytes);
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}

export function currentSessionId(): string {
  const match = document.cookie.match(new RegExp(`(?:^|; )${COOKIE}=([^;]+)`));
  if (match && match[1]) {
    return match[1];
  }
  const fresh = randomId();
  document.cookie = `${COOKIE}=${fresh}; path=/; samesite=lax`;
  return fresh;
}
