//! Lemmatization: an explicit conflation lexicon for irregular and
//! derivational forms, then inflectional suffix rules for everything else.
//!
//! Lexicon targets are terminal: a token that is already a lexicon target is
//! returned unchanged, and lexicon chains (`a -> b`, `b -> c`) are resolved
//! when the lexicon is built. Suffix rules only ever shorten a token and are
//! applied until none fires, so [`lemmatize`] is idempotent.

use std::collections::{BTreeMap, BTreeSet};

/// Token -> lemma map with chains resolved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConflationLexicon {
    map: BTreeMap<String, String>,
    lemmas: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("line {line}: expected `token lemma`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("{0:?} is not a lowercase alphabetic word")]
    NotAWord(String),
    #[error("conflicting targets for {token:?}: {first:?} and {second:?}")]
    Conflict {
        token: String,
        first: String,
        second: String,
    },
    #[error("conflation cycle through {0:?}")]
    Cycle(String),
}

pub(crate) fn is_lemma_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphabetic() && !c.is_uppercase())
}

impl ConflationLexicon {
    pub fn new<I, K, V>(pairs: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in pairs {
            let (k, v) = (k.into(), v.into());
            for w in [&k, &v] {
                if !is_lemma_word(w) {
                    return Err(LexiconError::NotAWord(w.clone()));
                }
            }
            if let Some(prev) = raw.get(&k) {
                if *prev != v {
                    return Err(LexiconError::Conflict {
                        token: k,
                        first: prev.clone(),
                        second: v,
                    });
                }
            }
            raw.insert(k, v);
        }

        let mut map = BTreeMap::new();
        for key in raw.keys() {
            let mut cur = key;
            let mut steps = 0usize;
            while let Some(next) = raw.get(cur) {
                if next == cur {
                    break;
                }
                steps += 1;
                if steps > raw.len() {
                    return Err(LexiconError::Cycle(key.clone()));
                }
                cur = next;
            }
            map.insert(key.clone(), cur.clone());
        }
        let lemmas = map.values().cloned().collect();
        Ok(Self { map, lemmas })
    }

    /// Parses `token lemma` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut pairs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = strip_comment(line);
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(t), Some(l), None) => pairs.push((t.to_owned(), l.to_owned())),
                _ => {
                    return Err(LexiconError::Syntax {
                        line: idx + 1,
                        text: line.to_owned(),
                    })
                }
            }
        }
        Self::new(pairs)
    }

    /// The bundled lexicon.
    pub fn shipped() -> Self {
        Self::parse(include_str!("../../data/conflation.txt")).expect("bundled lexicon is valid")
    }

    pub fn get(&self, token: &str) -> Option<&str> {
        self.map.get(token).map(String::as_str)
    }

    /// True if `word` is the target of some entry.
    pub fn is_target(&self, word: &str) -> bool {
        self.lemmas.contains(word)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// Reduces a lowercase alphabetic token to its base form.
pub fn lemmatize(token: &str, lexicon: &ConflationLexicon) -> String {
    let mut cur = token.to_owned();
    loop {
        if lexicon.is_target(&cur) {
            return cur;
        }
        if let Some(lemma) = lexicon.get(&cur) {
            return lemma.to_owned();
        }
        match strip_suffix(&cur) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
}

fn is_vowel_at(chars: &[char], i: usize) -> bool {
    match chars[i] {
        'a' | 'e' | 'i' | 'o' | 'u' => true,
        'y' => i > 0 && !is_vowel_at(chars, i - 1),
        _ => false,
    }
}

fn has_vowel(chars: &[char]) -> bool {
    (0..chars.len()).any(|i| is_vowel_at(chars, i))
}

/// Number of vowel-consonant sequences.
fn measure(chars: &[char]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..chars.len() {
        let v = is_vowel_at(chars, i);
        if prev_vowel && !v {
            m += 1;
        }
        prev_vowel = v;
    }
    m
}

/// consonant-vowel-consonant ending, last consonant not w, x or y.
fn ends_cvc(chars: &[char]) -> bool {
    let n = chars.len();
    n >= 3
        && !is_vowel_at(chars, n - 3)
        && is_vowel_at(chars, n - 2)
        && !is_vowel_at(chars, n - 1)
        && !matches!(chars[n - 1], 'w' | 'x' | 'y')
}

/// Repairs a stem left by removing `-ing` or `-ed`.
fn restore(stem: &str) -> String {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    let consonant_before_at = stem.ends_with("at") && n >= 3 && !is_vowel_at(&chars, n - 3);
    if consonant_before_at || stem.ends_with("bl") || stem.ends_with("iz") {
        return format!("{stem}e");
    }
    if n >= 2
        && chars[n - 1] == chars[n - 2]
        && !is_vowel_at(&chars, n - 1)
        && !matches!(chars[n - 1], 'l' | 's' | 'z')
    {
        return chars[..n - 1].iter().collect();
    }
    if measure(&chars) == 1 && ends_cvc(&chars) {
        return format!("{stem}e");
    }
    stem.to_owned()
}

fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// One rule application, or `None` if no rule fires. Every rule shortens
/// the word.
fn strip_suffix(word: &str) -> Option<String> {
    if let Some(base) = word.strip_suffix("ies") {
        return Some(if char_len(base) >= 2 {
            format!("{base}y")
        } else {
            format!("{base}ie")
        });
    }
    if let Some(base) = word.strip_suffix("sses") {
        return Some(format!("{base}ss"));
    }
    if let Some(stem) = word.strip_suffix("es") {
        let sibilant = ["x", "zz", "ch", "sh"].iter().any(|s| stem.ends_with(s));
        if sibilant && char_len(stem) >= 2 {
            return Some(stem.to_owned());
        }
        if char_len(stem) >= 2 {
            return Some(format!("{stem}e"));
        }
        return None;
    }
    if let Some(stem) = word.strip_suffix('s') {
        let blocked = ["s", "u", "i"].iter().any(|s| stem.ends_with(s));
        if !blocked && char_len(stem) >= 3 {
            return Some(stem.to_owned());
        }
        return None;
    }
    if let Some(stem) = word.strip_suffix("ing") {
        let chars: Vec<char> = stem.chars().collect();
        if chars.len() >= 3 && has_vowel(&chars) {
            return Some(restore(stem));
        }
        return None;
    }
    if word.ends_with("eed") {
        return None;
    }
    if let Some(base) = word.strip_suffix("ied") {
        return Some(if char_len(base) >= 2 {
            format!("{base}y")
        } else {
            format!("{base}ie")
        });
    }
    if let Some(stem) = word.strip_suffix("ed") {
        let chars: Vec<char> = stem.chars().collect();
        if chars.len() >= 3 && has_vowel(&chars) {
            return Some(restore(stem));
        }
        return None;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bare(t: &str) -> String {
        lemmatize(t, &ConflationLexicon::default())
    }

    #[test]
    fn suffix_rules() {
        let cases = [
            ("trees", "tree"),
            ("cities", "city"),
            ("dies", "die"),
            ("glasses", "glass"),
            ("taxes", "tax"),
            ("crashes", "crash"),
            ("matches", "match"),
            ("horses", "horse"),
            ("games", "game"),
            ("hunting", "hunt"),
            ("running", "run"),
            ("making", "make"),
            ("hoping", "hope"),
            ("hopping", "hop"),
            ("crashed", "crash"),
            ("stopped", "stop"),
            ("killed", "kill"),
            ("cried", "cry"),
            ("died", "die"),
            ("realized", "realize"),
            ("troubled", "trouble"),
            ("related", "relate"),
            ("treated", "treat"),
            ("played", "play"),
            ("feed", "feed"),
            ("this", "this"),
            ("bus", "bus"),
            ("sing", "sing"),
            ("string", "string"),
            ("gas", "gas"),
        ];
        for (input, want) in cases {
            assert_eq!(bare(input), want, "lemmatize({input})");
        }
    }

    #[test]
    fn lexicon_overrides_rules_and_targets_are_terminal() {
        let lex = ConflationLexicon::new([("wolves", "wolf"), ("news", "news")]).unwrap();
        assert_eq!(lemmatize("wolves", &lex), "wolf");
        assert_eq!(lemmatize("news", &lex), "news");
        assert_eq!(bare("news"), "new");
    }

    #[test]
    fn shipped_pollute_family() {
        let lex = ConflationLexicon::shipped();
        for t in ["polluting", "polluted", "pollution", "pollutes", "pollute"] {
            assert_eq!(lemmatize(t, &lex), "pollute", "{t}");
        }
    }

    #[test]
    fn chains_resolve_and_cycles_fail() {
        let lex = ConflationLexicon::new([("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(lex.get("a"), Some("c"));
        assert!(!lex.is_target("b"));
        assert_eq!(
            ConflationLexicon::new([("a", "b"), ("b", "a")]),
            Err(LexiconError::Cycle("a".into()))
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            ConflationLexicon::parse("ok fine\nbad\n"),
            Err(LexiconError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            ConflationLexicon::parse("Wolves wolf"),
            Err(LexiconError::NotAWord(_))
        ));
        assert!(matches!(
            ConflationLexicon::parse("a b\na c"),
            Err(LexiconError::Conflict { .. })
        ));
        let lex = ConflationLexicon::parse("# header\n\nwolves wolf  # trailing\n").unwrap();
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn shipped_lexicon_targets_are_fixpoints() {
        let lex = ConflationLexicon::shipped();
        for (_, lemma) in lex.iter() {
            assert_eq!(lemmatize(lemma, &lex), lemma);
        }
    }

    fn token() -> impl Strategy<Value = String> {
        let suffix = prop_oneof![
            Just(""),
            Just("s"),
            Just("es"),
            Just("ies"),
            Just("sses"),
            Just("ing"),
            Just("ed"),
            Just("ied"),
            Just("eed"),
            Just("ings"),
            Just("at"),
            Just("bl"),
            Just("iz"),
        ];
        ("[a-z]{1,9}", suffix).prop_map(|(s, x)| format!("{s}{x}"))
    }

    proptest! {
        #[test]
        fn idempotent(t in token()) {
            let lex = ConflationLexicon::shipped();
            let once = lemmatize(&t, &lex);
            prop_assert_eq!(lemmatize(&once, &lex), once.clone());
            prop_assert!(is_lemma_word(&once));
        }

        #[test]
        fn rules_never_lengthen(t in "[a-z]{1,14}") {
            if let Some(next) = strip_suffix(&t) {
                prop_assert!(next.len() < t.len());
            }
        }
    }
}
