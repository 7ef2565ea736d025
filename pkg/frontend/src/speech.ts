/** Pronunciation via the browser's speech synthesis.
 *
 * The port interface keeps the logic testable: exactly one utterance is
 * pending at a time, so a rapid second click cancels the first.
 */

export interface SpeechPort {
  cancel(): void;
  speak(text: string, lang: string): void;
}

export function browserSpeechPort(): SpeechPort | null {
  if (typeof window === "undefined" || !("speechSynthesis" in window)) {
    return null;
  }
  const synthesis = window.speechSynthesis;
  return {
    cancel: () => synthesis.cancel(),
    speak: (text, lang) => {
      const utterance = new SpeechSynthesisUtterance(text);
      utterance.lang = lang;
      synthesis.speak(utterance);
    },
  };
}

export function pronounce(label: string, lang: string, port: SpeechPort): void {
  port.cancel(); // never overlap with a pending utterance
  port.speak(label, lang);
}
