//! Pashto text normalization, tokenization, and fixed-length sequences.
//!
//! Normalization strips URLs, digits (Western and Eastern-Arabic), Latin
//! letters, and symbols outside the Pashto alphabet, then collapses
//! whitespace. The tokenizer splits on whitespace and detaches residual
//! punctuation into single-character tokens. All functions are pure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Zero-width non-joiner; orthographically meaningful in Arabic-script text.
pub const ZWNJ: char = '\u{200C}';

/// The Pashto alphabet: the Arabic base letters plus the Pashto-specific
/// letters (retroflexes, `ښ`, `ګ`, `ڼ`, the ye series, ...).
pub const PASHTO_LETTERS: &[char] = &[
    'ا', 'ب', 'پ', 'ت', 'ټ', 'ث', 'ج', 'چ', 'ح', 'خ', 'څ', 'ځ', 'د', 'ډ', 'ذ', 'ر', 'ړ', 'ز',
    'ژ', 'ږ', 'س', 'ش', 'ښ', 'ص', 'ض', 'ط', 'ظ', 'ع', 'غ', 'ف', 'ق', 'ک', 'ګ', 'ل', 'م', 'ن',
    'ڼ', 'و', 'ه', 'ي', 'ې', 'ی', 'ۍ', 'ئ',
];

/// Character classes used by [`normalize`] and [`tokenize`].
///
/// The kept set is the Pashto alphabet (Arabic-block letters plus the
/// extended letters above), the zero-width non-joiner, and the space.
/// Digits of either script and ASCII letters are never in the kept set.
pub struct CharClassTable;

impl CharClassTable {
    /// True for letters of the Pashto alphabet (including Arabic base
    /// letters and common Perso-Arabic variants such as `گ`).
    pub fn is_letter(c: char) -> bool {
        matches!(c,
            '\u{0621}'..='\u{063A}' |          // hamza .. ghain
            '\u{0641}'..='\u{064A}' |          // feh .. yeh
            '\u{067C}' |                       // ټ
            '\u{067E}' |                       // پ
            '\u{0681}' |                       // ځ
            '\u{0685}' |                       // څ
            '\u{0686}' |                       // چ
            '\u{0689}' |                       // ډ
            '\u{0693}' |                       // ړ
            '\u{0696}' |                       // ږ
            '\u{0698}' |                       // ژ
            '\u{069A}' |                       // ښ
            '\u{06A9}' |                       // ک
            '\u{06AB}' |                       // ګ
            '\u{06AF}' |                       // گ
            '\u{06BC}' |                       // ڼ
            '\u{06CC}' |                       // ی
            '\u{06CD}' |                       // ۍ
            '\u{06D0}'                         // ې
        )
    }

    /// True for Western (`0-9`) and Eastern-Arabic (`٠-٩`, `۰-۹`) digits.
    pub fn is_digit(c: char) -> bool {
        c.is_ascii_digit() || matches!(c, '\u{0660}'..='\u{0669}' | '\u{06F0}'..='\u{06F9}')
    }

    /// Arabic combining marks (harakat and friends); treated as part of the
    /// surrounding word by the tokenizer.
    pub fn is_combining_mark(c: char) -> bool {
        matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}')
    }

    /// Membership in the kept set: Pashto letter, ZWNJ, or space.
    pub fn is_kept(c: char) -> bool {
        Self::is_letter(c) || c == ZWNJ || c == ' '
    }
}

/// Flags controlling [`normalize`]. All stripping flags default to on, which
/// is the full preprocessing pipeline; `strip_zwnj` defaults to off because
/// the zero-width non-joiner carries orthographic meaning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormalizationConfig {
    pub strip_urls: bool,
    pub strip_digits: bool,
    pub strip_latin: bool,
    pub strip_symbols: bool,
    pub collapse_whitespace: bool,
    pub strip_zwnj: bool,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        NormalizationConfig {
            strip_urls: true,
            strip_digits: true,
            strip_latin: true,
            strip_symbols: true,
            collapse_whitespace: true,
            strip_zwnj: false,
        }
    }
}

/// A token list with an optional fixed length, produced by [`pad_truncate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    pub fixed_length: Option<usize>,
    pub pad_token: String,
}

/// Normalizes `text`: URLs are removed first, then characters outside the
/// kept set are replaced by spaces according to the flags, then whitespace
/// runs collapse to single spaces and the ends are trimmed.
///
/// Total function; the empty string maps to itself. Idempotent for any
/// configuration.
pub fn normalize(text: &str, config: &NormalizationConfig) -> String {
    let cleaned = if config.strip_urls {
        strip_urls(text)
    } else {
        text.to_string()
    };

    let mut out = String::with_capacity(cleaned.len());
    for c in cleaned.chars() {
        if c.is_whitespace() {
            out.push(c);
        } else if c == ZWNJ {
            // Deleting (not spacing) the joiner keeps the word intact.
            if !config.strip_zwnj {
                out.push(c);
            }
        } else if CharClassTable::is_letter(c) {
            out.push(c);
        } else if CharClassTable::is_digit(c) {
            if config.strip_digits {
                out.push(' ');
            } else {
                out.push(c);
            }
        } else if c.is_ascii_alphabetic() {
            if config.strip_latin {
                out.push(' ');
            } else {
                out.push(c);
            }
        } else if config.strip_symbols {
            out.push(' ');
        } else {
            out.push(c);
        }
    }

    if config.collapse_whitespace {
        collapse_whitespace(&out)
    } else {
        out
    }
}

fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_space = false;
    for c in text.chars() {
        if c.is_whitespace() {
            in_space = true;
        } else {
            if in_space && !out.is_empty() {
                out.push(' ');
            }
            in_space = false;
            out.push(c);
        }
    }
    out
}

/// Removes URL spans: `scheme://...` or `www. ...` up to the next
/// whitespace, replaced by a single space. The scheme is the longest
/// alpha-started run of `[A-Za-z0-9+.-]` before `://`, matching the usual
/// regular pattern, so a URL glued to other text is still caught.
fn strip_urls(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let is_scheme_char = |c: char| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.');

    let mut keep = vec![true; chars.len()];
    let mut i = 0;
    while i < chars.len() {
        // Candidate start of a URL at position `start`.
        let mut start = None;
        if chars[i] == ':' && chars.get(i + 1) == Some(&'/') && chars.get(i + 2) == Some(&'/') {
            let mut s = i;
            while s > 0 && is_scheme_char(chars[s - 1]) {
                s -= 1;
            }
            while s < i && !chars[s].is_ascii_alphabetic() {
                s += 1;
            }
            if s < i {
                start = Some(s);
            }
        } else if chars[i].eq_ignore_ascii_case(&'w')
            && chars.get(i + 1).is_some_and(|c| c.eq_ignore_ascii_case(&'w'))
            && chars.get(i + 2).is_some_and(|c| c.eq_ignore_ascii_case(&'w'))
            && chars.get(i + 3) == Some(&'.')
        {
            start = Some(i);
        }

        if let Some(s) = start {
            let mut end = i;
            while end < chars.len() && !chars[end].is_whitespace() {
                end += 1;
            }
            for flag in keep.iter_mut().take(end).skip(s) {
                *flag = false;
            }
            i = end;
        } else {
            i += 1;
        }
    }

    let mut out = String::with_capacity(text.len());
    let mut removed = false;
    for (c, k) in chars.into_iter().zip(keep) {
        if k {
            if removed {
                out.push(' ');
                removed = false;
            }
            out.push(c);
        } else {
            removed = true;
        }
    }
    if removed {
        out.push(' ');
    }
    out
}

/// Splits `text` on whitespace; residual punctuation characters detach into
/// their own single-character tokens. Never yields an empty token.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if c.is_whitespace() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
        } else if c.is_alphanumeric() || c == ZWNJ || CharClassTable::is_combining_mark(c) {
            current.push(c);
        } else {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            tokens.push(c.to_string());
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Fits `tokens` to exactly `max_len` entries: longer sequences keep their
/// first `max_len` tokens, shorter ones are padded at the end with
/// `pad_token`.
pub fn pad_truncate(tokens: &[String], max_len: usize, pad_token: &str) -> Result<TokenSequence> {
    if max_len == 0 {
        return Err(Error::NonPositiveLength);
    }
    let mut out: Vec<String> = tokens.iter().take(max_len).cloned().collect();
    while out.len() < max_len {
        out.push(pad_token.to_string());
    }
    Ok(TokenSequence {
        tokens: out,
        fixed_length: Some(max_len),
        pad_token: pad_token.to_string(),
    })
}
