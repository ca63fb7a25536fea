//! Free-monoid word combinatorics: interned letters, words, restriction,
//! substitution, identification, factor tests.

use once_cell::sync::Lazy;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;
use thiserror::Error;

/// An interned letter. Distinct display names map to distinct ids; interning
/// is process-global and stable for the lifetime of the session.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(pub u32);

struct Interner {
    names: Vec<String>,
    by_name: HashMap<String, u32>,
}

static INTERNER: Lazy<Mutex<Interner>> = Lazy::new(|| {
    Mutex::new(Interner {
        names: Vec::new(),
        by_name: HashMap::new(),
    })
});

impl Letter {
    pub fn intern(name: &str) -> Letter {
        let mut it = INTERNER.lock().unwrap();
        if let Some(&id) = it.by_name.get(name) {
            return Letter(id);
        }
        let id = it.names.len() as u32;
        it.names.push(name.to_string());
        it.by_name.insert(name.to_string(), id);
        Letter(id)
    }

    pub fn name(self) -> String {
        INTERNER.lock().unwrap().names[self.0 as usize].clone()
    }

    /// The variable letter `x{i}` (1-based), used by terms and schemes.
    pub fn var(i: usize) -> Letter {
        Letter::intern(&format!("x{i}"))
    }

    /// If this letter is a variable `x{i}`, its 1-based index.
    pub fn var_index(self) -> Option<usize> {
        let n = self.name();
        n.strip_prefix('x').and_then(|s| s.parse().ok())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.name();
        if n.chars().count() == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{{{n}}}")
        }
    }
}

/// The p-th occurrence of a letter in a host word. 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OccSymbol {
    pub letter: Letter,
    pub index: usize,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("identify requires two distinct letters")]
    IdentifySame,
    #[error("substitution undefined on letter {0}")]
    UndefinedLetter(String),
    #[error("cannot parse word text {0:?} at position {1}")]
    Parse(String, usize),
}

/// A finite sequence of letters. The empty word is the concatenation identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(ls: impl IntoIterator<Item = Letter>) -> Word {
        Word(ls.into_iter().collect())
    }

    /// Parses the word text format: single ASCII alphanumerics, `{name}` for
    /// multi-char names, juxtaposition for concatenation. A lone `1` is the
    /// empty word.
    pub fn parse(text: &str) -> Result<Word, WordError> {
        let t = text.trim();
        if t == "1" {
            return Ok(Word::empty());
        }
        let chars: Vec<char> = t.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '{' {
                let close = chars[i + 1..]
                    .iter()
                    .position(|&d| d == '}')
                    .ok_or_else(|| WordError::Parse(text.to_string(), i))?;
                let name: String = chars[i + 1..i + 1 + close].iter().collect();
                if name.is_empty() {
                    return Err(WordError::Parse(text.to_string(), i));
                }
                letters.push(Letter::intern(&name));
                i += close + 2;
            } else if c.is_ascii_alphanumeric() {
                letters.push(Letter::intern(&c.to_string()));
                i += 1;
            } else {
                return Err(WordError::Parse(text.to_string(), i));
            }
        }
        Ok(Word(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    /// The set of letters occurring in the word.
    pub fn content(&self) -> BTreeSet<Letter> {
        self.0.iter().copied().collect()
    }

    /// Number of occurrences of `x`.
    pub fn occ(&self, x: Letter) -> usize {
        self.0.iter().filter(|&&l| l == x).count()
    }

    /// Keeps exactly the positions whose letter lies in `keep`, in order.
    pub fn restrict(&self, keep: &BTreeSet<Letter>) -> Word {
        Word(self.0.iter().copied().filter(|l| keep.contains(l)).collect())
    }

    pub fn restrict_to(&self, keep: &[Letter]) -> Word {
        self.restrict(&keep.iter().copied().collect())
    }

    /// Replaces every occurrence of `i` with `j`. Rejects `i = j`.
    pub fn identify(&self, i: Letter, j: Letter) -> Result<Word, WordError> {
        if i == j {
            return Err(WordError::IdentifySame);
        }
        Ok(Word(
            self.0
                .iter()
                .map(|&l| if l == i { j } else { l })
                .collect(),
        ))
    }

    /// Homomorphic substitution. `sigma` must be defined on all of the content.
    pub fn substitute(&self, sigma: &HashMap<Letter, Word>) -> Result<Word, WordError> {
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = sigma
                .get(&l)
                .ok_or_else(|| WordError::UndefinedLetter(l.name()))?;
            out.extend_from_slice(&img.0);
        }
        Ok(Word(out))
    }

    /// True iff `self` occurs as a contiguous block of `v`.
    pub fn is_factor_of(&self, v: &Word) -> bool {
        if self.is_empty() {
            return true;
        }
        if self.len() > v.len() {
            return false;
        }
        v.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    /// All distinct contiguous factors, including the empty word.
    pub fn factors(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        out.insert(Word::empty());
        for i in 0..self.len() {
            for j in i + 1..=self.len() {
                out.insert(Word(self.0[i..j].to_vec()));
            }
        }
        out
    }

    /// Letters occurring exactly once.
    pub fn linear_letters(&self) -> BTreeSet<Letter> {
        self.content()
            .into_iter()
            .filter(|&l| self.occ(l) == 1)
            .collect()
    }

    /// Occurrence symbols in positional order: the k-th entry is (letter at
    /// position k, which occurrence of that letter it is).
    pub fn occ_symbols(&self) -> Vec<OccSymbol> {
        let mut counts: HashMap<Letter, usize> = HashMap::new();
        self.0
            .iter()
            .map(|&l| {
                let c = counts.entry(l).or_insert(0);
                *c += 1;
                OccSymbol {
                    letter: l,
                    index: *c,
                }
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Convenience constructor from word text; panics on malformed input.
pub fn w(text: &str) -> Word {
    Word::parse(text).expect("valid word text")
}

/// The word x{i} as a single-variable word.
pub fn var_word(i: usize) -> Word {
    Word(vec![Letter::var(i)])
}
