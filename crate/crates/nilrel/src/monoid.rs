//! Finite monoid construction: Rees quotients of free monoids, zero/identity
//! adjunction, direct products, kappa-limited universes, index and period.

use crate::words::{Letter, Word};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("word set must be non-empty and contain no empty word")]
    BadWordSet,
    #[error("monoid file: first line must be `M` or `S`")]
    BadHeader,
    #[error("operation requires a monoid with identity")]
    NoIdentity,
    #[error("{0}")]
    Words(#[from] crate::words::WordError),
}

/// What an element is. The empty word doubles as the identity of a Rees
/// quotient; `Fresh` elements come from unconditional adjunction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ElemTag {
    Word(Word),
    Zero,
    Fresh(String),
    Pair(u32, u32),
}

#[derive(Clone, Debug)]
pub struct FiniteMonoid {
    pub elems: Vec<ElemTag>,
    mult: Vec<u32>,
    pub identity: Option<u32>,
    pub zero: Option<u32>,
    /// Max generator-word length for Rees quotients; `None` disables the
    /// nilpotency-based assignment pruning.
    pub rees_max_len: Option<usize>,
    /// Factor monoids when this was built as a direct product.
    pub factors: Option<Box<(FiniteMonoid, FiniteMonoid)>>,
    pub provenance: String,
    word_index: HashMap<Word, u32>,
}

impl FiniteMonoid {
    pub fn size(&self) -> usize {
        self.elems.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mult[a as usize * self.elems.len() + b as usize]
    }

    pub fn pow(&self, a: u32, k: usize) -> u32 {
        let mut acc = match self.identity {
            Some(e) if k == 0 => return e,
            _ => a,
        };
        for _ in 1..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn elem_of_word(&self, w: &Word) -> Option<u32> {
        self.word_index.get(w).copied()
    }

    pub fn word_of_elem(&self, a: u32) -> Option<&Word> {
        match &self.elems[a as usize] {
            ElemTag::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn elem_name(&self, a: u32) -> String {
        match &self.elems[a as usize] {
            ElemTag::Word(w) => w.to_string(),
            ElemTag::Zero => "0".to_string(),
            ElemTag::Fresh(n) => n.clone(),
            ElemTag::Pair(i, j) => {
                let f = self.factors.as_ref().expect("pair elements imply factors");
                format!("({},{})", f.0.elem_name(*i), f.1.elem_name(*j))
            }
        }
    }

    pub fn has_identity(&self) -> bool {
        self.identity.is_some()
    }

    /// Any product of this many non-identity elements is zero (Rees quotients
    /// only).
    pub fn nilpotency_degree(&self) -> Option<usize> {
        self.rees_max_len.map(|d| d + 1)
    }

    /// Exhaustive associativity check; returns a violating triple if any.
    pub fn associativity_violation(&self) -> Option<(u32, u32, u32)> {
        let n = self.size() as u32;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Indices of elements that are neither the identity nor the zero,
    /// paired with their word length when they are interned words.
    pub fn inner_elements(&self) -> Vec<(u32, Option<usize>)> {
        (0..self.size() as u32)
            .filter(|&i| Some(i) != self.identity && Some(i) != self.zero)
            .map(|i| (i, self.word_of_elem(i).map(|w| w.len())))
            .collect()
    }

    pub fn dump(&self) -> MonoidDump {
        MonoidDump {
            size: self.size(),
            elements: (0..self.size() as u32).map(|i| self.elem_name(i)).collect(),
            identity: self.identity,
            zero: self.zero,
            provenance: self.provenance.clone(),
            table: (0..self.size() as u32)
                .map(|a| (0..self.size() as u32).map(|b| self.mul(a, b)).collect())
                .collect(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct MonoidDump {
    pub size: usize,
    pub elements: Vec<String>,
    pub identity: Option<u32>,
    pub zero: Option<u32>,
    pub provenance: String,
    pub table: Vec<Vec<u32>>,
}

fn finish_word_monoid(
    universe: Vec<Word>,
    with_identity: bool,
    rees_max_len: usize,
    provenance: String,
) -> FiniteMonoid {
    let mut elems: Vec<ElemTag> = universe.iter().cloned().map(ElemTag::Word).collect();
    let zero = elems.len() as u32;
    elems.push(ElemTag::Zero);
    let n = elems.len();
    let word_index: HashMap<Word, u32> = universe
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i as u32))
        .collect();
    let mut mult = vec![zero; n * n];
    for (i, u) in universe.iter().enumerate() {
        for (j, v) in universe.iter().enumerate() {
            let uv = u.concat(v);
            mult[i * n + j] = word_index.get(&uv).copied().unwrap_or(zero);
        }
    }
    for a in 0..n {
        mult[a * n + zero as usize] = zero;
        mult[zero as usize * n + a] = zero;
    }
    let identity = if with_identity {
        Some(word_index[&Word::empty()])
    } else {
        None
    };
    FiniteMonoid {
        elems,
        mult,
        identity,
        zero: Some(zero),
        rees_max_len: Some(rees_max_len),
        factors: None,
        provenance,
        word_index,
    }
}

/// The Rees quotient M(W): all contiguous factors of words in `W` (including
/// the empty word) plus a zero; the product of two factors is their
/// concatenation when that is again a factor, else zero.
pub fn build_m(words: &[Word]) -> Result<FiniteMonoid, MonoidError> {
    if words.is_empty() || words.iter().any(|w| w.is_empty()) {
        return Err(MonoidError::BadWordSet);
    }
    let mut universe: BTreeSet<Word> = BTreeSet::new();
    for w in words {
        universe.extend(w.factors());
    }
    let max_len = words.iter().map(|w| w.len()).max().unwrap();
    let provenance = format!(
        "M({})",
        words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(finish_word_monoid(
        universe.into_iter().collect(),
        true,
        max_len,
        provenance,
    ))
}

/// S(W): M(W) with the empty word removed. Same products, no identity.
pub fn build_s(words: &[Word]) -> Result<FiniteMonoid, MonoidError> {
    if words.is_empty() || words.iter().any(|w| w.is_empty()) {
        return Err(MonoidError::BadWordSet);
    }
    let mut universe: BTreeSet<Word> = BTreeSet::new();
    for w in words {
        universe.extend(w.factors());
    }
    universe.remove(&Word::empty());
    let max_len = words.iter().map(|w| w.len()).max().unwrap();
    let provenance = format!(
        "S({})",
        words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(finish_word_monoid(
        universe.into_iter().collect(),
        false,
        max_len,
        provenance,
    ))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Adjoin {
    Zero,
    Identity,
}

/// Adds a fresh absorbing or neutral element. The adjunction is unconditional:
/// a new element is always added, even if one of that kind already exists.
pub fn adjoin(m: &FiniteMonoid, kind: Adjoin) -> FiniteMonoid {
    let old = m.size();
    let n = old + 1;
    let fresh = old as u32;
    let mut elems = m.elems.clone();
    elems.push(ElemTag::Fresh(
        match kind {
            Adjoin::Zero => "0'",
            Adjoin::Identity => "1'",
        }
        .to_string(),
    ));
    let mut mult = vec![0u32; n * n];
    for a in 0..old {
        for b in 0..old {
            mult[a * n + b] = m.mul(a as u32, b as u32);
        }
    }
    for a in 0..n as u32 {
        let (af, fa) = match kind {
            Adjoin::Zero => (fresh, fresh),
            Adjoin::Identity => (a, a),
        };
        mult[a as usize * n + fresh as usize] = af;
        mult[fresh as usize * n + a as usize] = fa;
    }
    FiniteMonoid {
        elems,
        mult,
        identity: match kind {
            Adjoin::Identity => Some(fresh),
            Adjoin::Zero => m.identity,
        },
        zero: match kind {
            Adjoin::Zero => Some(fresh),
            Adjoin::Identity => m.zero,
        },
        rees_max_len: None,
        factors: None,
        provenance: format!(
            "{}^{}",
            m.provenance,
            match kind {
                Adjoin::Zero => "0",
                Adjoin::Identity => "1",
            }
        ),
        word_index: m.word_index.clone(),
    }
}

/// Componentwise product on the cartesian universe.
pub fn direct_product(m1: &FiniteMonoid, m2: &FiniteMonoid) -> FiniteMonoid {
    let (n1, n2) = (m1.size(), m2.size());
    let n = n1 * n2;
    let mut elems = Vec::with_capacity(n);
    for i in 0..n1 as u32 {
        for j in 0..n2 as u32 {
            elems.push(ElemTag::Pair(i, j));
        }
    }
    let idx = |i: u32, j: u32| i as usize * n2 + j as usize;
    let mut mult = vec![0u32; n * n];
    for i1 in 0..n1 as u32 {
        for j1 in 0..n2 as u32 {
            for i2 in 0..n1 as u32 {
                for j2 in 0..n2 as u32 {
                    mult[idx(i1, j1) * n + idx(i2, j2)] =
                        idx(m1.mul(i1, i2), m2.mul(j1, j2)) as u32;
                }
            }
        }
    }
    let identity = match (m1.identity, m2.identity) {
        (Some(a), Some(b)) => Some(idx(a, b) as u32),
        _ => None,
    };
    let zero = match (m1.zero, m2.zero) {
        (Some(a), Some(b)) => Some(idx(a, b) as u32),
        _ => None,
    };
    FiniteMonoid {
        elems,
        mult,
        identity,
        zero,
        rees_max_len: None,
        factors: Some(Box::new((m1.clone(), m2.clone()))),
        provenance: format!("{} x {}", m1.provenance, m2.provenance),
        word_index: HashMap::new(),
    }
}

/// All words over `alphabet` in which every letter occurs at most `kappa`
/// times, including the empty word.
pub fn k_limited_universe(alphabet: &[Letter], kappa: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; alphabet.len()];
    let mut cur: Vec<Letter> = Vec::new();
    fn rec(
        alphabet: &[Letter],
        kappa: usize,
        counts: &mut Vec<usize>,
        cur: &mut Vec<Letter>,
        out: &mut Vec<Word>,
    ) {
        out.push(Word(cur.clone()));
        for (i, &l) in alphabet.iter().enumerate() {
            if counts[i] < kappa {
                counts[i] += 1;
                cur.push(l);
                rec(alphabet, kappa, counts, cur, out);
                cur.pop();
                counts[i] -= 1;
            }
        }
    }
    rec(alphabet, kappa, &mut counts, &mut cur, &mut out);
    out.sort();
    out
}

/// M(A_kappa): universe = kappa-limited words plus zero; the product of two
/// limited words is their concatenation when still limited, else zero. The
/// kappa-limited set is factor-closed, so this is the Rees quotient of the
/// (infinite) word set A_kappa.
pub fn build_m_ak(alphabet: &[Letter], kappa: usize) -> FiniteMonoid {
    let universe = k_limited_universe(alphabet, kappa);
    let max_len = kappa * alphabet.len();
    let provenance = format!(
        "M(A_{kappa} over {{{}}})",
        alphabet.iter().map(|l| l.to_string()).collect::<String>()
    );
    finish_word_monoid(universe, true, max_len, provenance)
}

/// Rees quotient of the kappa-limited words together with finitely many
/// extra generator words: the universe is the kappa-limited set united with
/// all factors of the extras, which is again factor-closed.
pub fn build_m_ak_plus(
    alphabet: &[Letter],
    kappa: usize,
    extras: &[Word],
) -> Result<FiniteMonoid, MonoidError> {
    if extras.iter().any(|w| w.is_empty()) {
        return Err(MonoidError::BadWordSet);
    }
    let mut universe: BTreeSet<Word> = k_limited_universe(alphabet, kappa).into_iter().collect();
    for w in extras {
        universe.extend(w.factors());
    }
    let max_len = extras
        .iter()
        .map(|w| w.len())
        .chain([kappa * alphabet.len()])
        .max()
        .unwrap();
    let provenance = format!(
        "M(A_{kappa} over {{{}}} + {})",
        alphabet.iter().map(|l| l.to_string()).collect::<String>(),
        extras.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(finish_word_monoid(
        universe.into_iter().collect(),
        true,
        max_len,
        provenance,
    ))
}

/// Least index p and period q with x^p = x^{p+q} for every element.
pub fn index_period(m: &FiniteMonoid) -> (usize, usize) {
    let mut index = 1usize;
    let mut period = 1usize;
    for a in 0..m.size() as u32 {
        // power sequence a^1, a^2, ... until it cycles
        let mut seen: HashMap<u32, usize> = HashMap::new();
        let mut x = a;
        let mut k = 1usize;
        let (tail, cycle) = loop {
            if let Some(&first) = seen.get(&x) {
                break (first, k - first);
            }
            seen.insert(x, k);
            x = m.mul(x, a);
            k += 1;
        };
        index = index.max(tail);
        period = lcm(period, cycle);
    }
    (index, period)
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Monoid description file: first line `M` or `S`, then one word per line.
pub fn parse_monoid_file(text: &str) -> Result<FiniteMonoid, MonoidError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or(MonoidError::BadHeader)?;
    let words: Vec<Word> = lines
        .map(Word::parse)
        .collect::<Result<_, _>>()
        .map_err(MonoidError::Words)?;
    match header {
        "M" => build_m(&words),
        "S" => build_s(&words),
        _ => Err(MonoidError::BadHeader),
    }
}
