//! Equational theory of the limited-words monoid and the scheme-to-term
//! reconstruction that proves its finite relatedness.

use crate::identities::{satisfies_bool, strongly_primitive_letters};
use crate::monoid::FiniteMonoid;
use crate::schemes::{variable_exponents, Scheme};
use crate::words::{Letter, Word};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MakError {
    #[error("reconstruction needs arity at least 4, got {0}")]
    ArityTooSmall(usize),
    #[error("pair restrictions for (x{0},x{1}) disagree: {2} vs {3}")]
    RestrictionsDisagree(usize, usize, String, String),
    #[error("semantic check failed for the restriction of pair (x{0},x{1})")]
    RestrictionNotSemantic(usize, usize),
    #[error("occurrence order is not transitive on {0}, {1}, {2}")]
    NotLinear(String, String, String),
    #[error("reconstructed word fails verification against t_{0}{1}")]
    VerificationFailed(usize, usize),
}

/// Deletes the strongly primitive letters (occ >= kappa + 1) from a word.
fn delete_strongly_primitive(u: &Word, kappa: usize) -> Word {
    let prim = strongly_primitive_letters(u, kappa + 1);
    let keep: Vec<Letter> = u
        .content()
        .into_iter()
        .filter(|l| !prim.contains(l))
        .collect();
    u.restrict_to(&keep)
}

/// The equational theory of the limited-words monoid: u ~ v iff the strongly
/// primitive letter sets agree and deleting them leaves identical words.
pub fn equiv_mak(u: &Word, v: &Word, kappa: usize) -> bool {
    strongly_primitive_letters(u, kappa + 1) == strongly_primitive_letters(v, kappa + 1)
        && delete_strongly_primitive(u, kappa) == delete_strongly_primitive(v, kappa)
}

/// An occurrence symbol: the p-th occurrence of variable x_i, as (i, p).
pub type Occ = (usize, usize);

#[derive(Debug, Clone, Serialize)]
pub struct MakReconstruction {
    pub word: String,
    /// The reconstructed occurrence order over the non-strongly-primitive
    /// variables, earliest first.
    pub order: Vec<String>,
    pub strongly_primitive: Vec<usize>,
    pub exponents: Vec<usize>,
    /// Set when the arity is too small for the completeness guarantee.
    pub warning: Option<String>,
}

/// Rebuild a generating term for a scheme over the limited-words monoid `m`
/// (kappa-limited): read the pairwise restrictions of the induced operation
/// on the non-strongly-primitive variables, order their occurrence symbols,
/// check that the order is a strict linear order, and append the strongly
/// primitive variables as a power tail.
pub fn reconstruct_term_mak(
    f: &Scheme,
    kappa: usize,
    m: &FiniteMonoid,
) -> Result<MakReconstruction, MakError> {
    let n = f.n;
    if n < 4 {
        return Err(MakError::ArityTooSmall(n));
    }
    let warning = if n <= m.size() + 1 {
        Some(format!(
            "arity {n} is not above |M| + 1 = {}; completeness is not guaranteed",
            m.size() + 1
        ))
    } else {
        None
    };
    let alpha = kappa + 1;
    let rep = variable_exponents(f, m);
    let e = &rep.exponents;
    let prim: BTreeSet<usize> = (1..=n).filter(|&i| e[i - 1] >= alpha).collect();
    let y: Vec<usize> = (1..=n).filter(|i| !prim.contains(i)).collect();

    // pairwise restrictions of the induced operation, via the scheme terms
    let mut restriction: BTreeMap<(usize, usize), Word> = BTreeMap::new();
    for (yi, &i) in y.iter().enumerate() {
        for &j in &y[yi + 1..] {
            let keep = [Letter::var(i), Letter::var(j)];
            let mut candidates: Vec<((usize, usize), Word)> = f
                .pairs()
                .filter(|&(k, l)| k != i && k != j && l != i && l != j)
                .map(|(k, l)| ((k, l), f.term(k, l).restrict_to(&keep)))
                .collect();
            candidates.sort_by_key(|&(kl, _)| kl);
            let (first_kl, s) = candidates.first().cloned().expect("n >= 4 leaves a pair");
            for (kl, other) in &candidates[1..] {
                if !equiv_mak(&s, other, kappa) {
                    return Err(MakError::RestrictionsDisagree(
                        i,
                        j,
                        format!("t_{}{}: {s}", first_kl.0, first_kl.1),
                        format!("t_{}{}: {other}", kl.0, kl.1),
                    ));
                }
            }
            // semantic guard for the symbolic shortcut
            if let Some((_, other)) = candidates.last() {
                if !satisfies_bool(m, &s, other) {
                    return Err(MakError::RestrictionNotSemantic(i, j));
                }
            }
            restriction.insert((i, j), s);
        }
    }

    // order the occurrence symbols of the non-strongly-primitive variables
    let symbols: Vec<Occ> = y
        .iter()
        .flat_map(|&i| (1..=e[i - 1]).map(move |p| (i, p)))
        .collect();
    let show = |(i, p): Occ| format!("{p}.x{i}");
    let precedes = |a: Occ, b: Occ| -> bool {
        let ((i, p), (j, q)) = (a, b);
        if i == j {
            return p < q;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let s = &restriction[&(lo, hi)];
        let pos = |var: usize, occ: usize| {
            let mut seen = 0;
            s.0.iter()
                .position(|&l| {
                    if l == Letter::var(var) {
                        seen += 1;
                        seen == occ
                    } else {
                        false
                    }
                })
                .expect("restriction carries the exponent occurrences")
        };
        pos(i, p) < pos(j, q)
    };
    for &a in &symbols {
        for &b in &symbols {
            if a == b {
                continue;
            }
            for &c in &symbols {
                if c == a || c == b {
                    continue;
                }
                if precedes(a, b) && precedes(b, c) && !precedes(a, c) {
                    return Err(MakError::NotLinear(show(a), show(b), show(c)));
                }
            }
        }
    }
    let mut ordered = symbols.clone();
    ordered.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if precedes(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });

    let mut word = Word(ordered.iter().map(|&(i, _)| Letter::var(i)).collect());
    for &k in &prim {
        word = word.concat(&Word(vec![Letter::var(k); e[k - 1]]));
    }

    // full verification: every identification of the word matches its term
    let pairs: Vec<(usize, usize)> = f.pairs().collect();
    if let Some(&(i, j)) = pairs.par_iter().find_any(|&&(i, j)| {
        let w_ij = word
            .identify(Letter::var(i), Letter::var(j))
            .expect("scheme pairs are distinct");
        !equiv_mak(&w_ij, f.term(i, j), kappa)
    }) {
        return Err(MakError::VerificationFailed(i, j));
    }

    Ok(MakReconstruction {
        word: word.to_string(),
        order: ordered.into_iter().map(show).collect(),
        strongly_primitive: prim.into_iter().collect(),
        exponents: e.clone(),
        warning,
    })
}
