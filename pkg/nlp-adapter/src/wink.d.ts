declare module "wink-pos-tagger" {
  export interface WinkToken {
    value: string;
    tag: string;
    normal?: string;
    pos?: string;
    lemma?: string;
  }
  export interface WinkTagger {
    tagSentence(sentence: string): WinkToken[];
    tagRawTokens(tokens: string[]): WinkToken[];
  }
  export default function posTagger(): WinkTagger;
}

declare module "sbd" {
  export interface SbdOptions {
    newline_boundaries?: boolean;
    sanitize?: boolean;
  }
  export function sentences(text: string, options?: SbdOptions): string[];
}
