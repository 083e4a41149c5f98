use std::collections::HashSet;
use std::io::{self, BufRead};

const BUNDLED_LEMMAS: &str = include_str!("verbs.txt");
const BUNDLED_IRREGULAR: &str = include_str!("irregular_verbs.txt");

/// Set of lowercase verb forms used when a caption has no POS tags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerbLexicon {
    forms: HashSet<String>,
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

/// Ends consonant-vowel-consonant, where doubling the final consonant is possible.
fn ends_cvc(word: &[u8]) -> bool {
    let n = word.len();
    n >= 3
        && !is_vowel(word[n - 3])
        && is_vowel(word[n - 2])
        && !is_vowel(word[n - 1])
        && !matches!(word[n - 1], b'w' | b'x' | b'y')
}

/// Regular English inflections of a verb lemma: third person singular, past
/// tense and present participle.
///
/// Final-consonant doubling is ambiguous without stress information, so CVC
/// lemmas get both the doubled and the plain spelling.
pub fn inflections(lemma: &str) -> Vec<String> {
    let b = lemma.as_bytes();
    let n = b.len();
    if n == 0 {
        return Vec::new();
    }
    let last = b[n - 1];
    let consonant_y = last == b'y' && n >= 2 && !is_vowel(b[n - 2]);
    let stem_y = &lemma[..n - 1];
    let mut out = Vec::with_capacity(6);

    // third person
    if consonant_y {
        out.push(format!("{stem_y}ies"));
    } else if lemma.ends_with('s')
        || lemma.ends_with('x')
        || lemma.ends_with('z')
        || lemma.ends_with("ch")
        || lemma.ends_with("sh")
        || lemma.ends_with('o')
    {
        out.push(format!("{lemma}es"));
    } else {
        out.push(format!("{lemma}s"));
    }

    // past
    if last == b'e' {
        out.push(format!("{lemma}d"));
    } else if consonant_y {
        out.push(format!("{stem_y}ied"));
    } else {
        out.push(format!("{lemma}ed"));
        if ends_cvc(b) {
            out.push(format!("{lemma}{}ed", last as char));
        }
    }

    // present participle
    if lemma.ends_with("ie") {
        out.push(format!("{}ying", &lemma[..n - 2]));
    } else if last == b'e' && !lemma.ends_with("ee") && !lemma.ends_with("ye") && !lemma.ends_with("oe") && n > 2 {
        out.push(format!("{}ing", &lemma[..n - 1]));
    } else {
        out.push(format!("{lemma}ing"));
        if ends_cvc(b) {
            out.push(format!("{lemma}{}ing", last as char));
        }
    }
    out
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

impl VerbLexicon {
    /// The bundled English action-verb lexicon with inflections expanded.
    pub fn bundled() -> Self {
        let mut lex = Self::default();
        for lemma in data_lines(BUNDLED_LEMMAS) {
            lex.insert_with_inflections(lemma);
        }
        for line in data_lines(BUNDLED_IRREGULAR) {
            let mut parts = line.split_whitespace();
            if let Some(lemma) = parts.next() {
                lex.insert_with_inflections(lemma);
            }
            for form in parts {
                lex.insert(form);
            }
        }
        lex
    }

    /// Read a lexicon file: one form per line, UTF-8. Blank lines and `#`
    /// comments are skipped; entries are lowercased.
    pub fn from_reader<R: BufRead>(reader: R) -> io::Result<Self> {
        let mut lex = Self::default();
        for line in reader.lines() {
            let line = line?;
            let word = line.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            lex.insert(word);
        }
        Ok(lex)
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lex = Self::default();
        for w in words {
            lex.insert(w.as_ref());
        }
        lex
    }

    pub fn insert(&mut self, word: &str) {
        self.forms.insert(word.to_lowercase());
    }

    fn insert_with_inflections(&mut self, lemma: &str) {
        let lemma = lemma.to_lowercase();
        for form in inflections(&lemma) {
            self.forms.insert(form);
        }
        self.forms.insert(lemma);
    }

    pub fn contains(&self, token: &str) -> bool {
        self.forms.contains(&token.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}
