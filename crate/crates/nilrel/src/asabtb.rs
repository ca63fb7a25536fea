//! The M(asabtb) pipeline: occurrence-pair stability, block partition,
//! normal form, 5-support equivalence, and scheme-to-term reconstruction.

use crate::identities::satisfies_bool;
use crate::monoid::{build_m, FiniteMonoid};
use crate::schemes::{variable_exponents, Scheme};
use crate::words::{w, Letter, Word};
use itertools::Itertools;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AsabtbError {
    #[error("letter {0} does not match the side pattern at gap {1}")]
    PatternMismatch(String, usize),
    #[error("gap index {0} out of range 2..={1}")]
    GapOutOfRange(usize, usize),
    #[error("restriction to {0} has unexpected shape {1}")]
    BadRestriction(String, String),
    #[error("linear letters are not totally ordered: {0} vs {1}")]
    SpineOrder(String, String),
    #[error("occurrences of {0} span a non-contiguous set of linear letters")]
    TornLetter(String),
    #[error("instability is not transitive on {0}, {1}, {2}")]
    Partition(String, String, String),
    #[error("blocks {0} and {1} interleave")]
    Interleaved(String, String),
    #[error("reconstruction needs arity at least 7, got {0}")]
    ArityTooSmall(usize),
    #[error("reconstructed word fails verification against t_{0}{1}")]
    VerificationFailed(usize, usize),
}

/// The shared 21-element monoid of factors of asabtb.
pub fn asabtb_monoid() -> &'static FiniteMonoid {
    static M: Lazy<FiniteMonoid> =
        Lazy::new(|| build_m(&[w("asabtb")]).expect("asabtb builds"));
    &M
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// First occurrence sits in the gap, second occurrence later.
    First,
    /// Second occurrence sits in the gap, first occurrence earlier.
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub side: Side,
    pub letters: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStructure {
    /// The linear letters t_1..t_m in order.
    pub spine: Vec<Letter>,
    /// Letters whose first occurrence precedes t_1.
    pub w0: Vec<Letter>,
    /// For each gap between t_g and t_{g+1} (g = 1..m-1): the ordered blocks.
    pub regions: Vec<Vec<Block>>,
    /// Letters whose second occurrence follows t_m.
    pub wend: Vec<Letter>,
    /// Primitive letters: three or more occurrences, or two occurrences with
    /// no linear letter in between.
    pub prim: Vec<Letter>,
}

/// Canonical letter order: variables by index, everything else by name.
fn letter_key(l: Letter) -> (u8, usize, String) {
    match l.var_index() {
        Some(i) => (0, i, String::new()),
        None => (1, 0, l.name()),
    }
}

fn sort_letters(ls: &mut [Letter]) {
    ls.sort_by_key(|&l| letter_key(l));
}

/// A read-only view of a word given only through restrictions to small letter
/// sets. A plain word restricts itself; a scheme restricts a term avoiding
/// the requested letters.
struct Source<'a> {
    letters: Vec<Letter>,
    occ: BTreeMap<Letter, usize>,
    restrict: Box<dyn Fn(&[Letter]) -> Word + Sync + 'a>,
}

impl<'a> Source<'a> {
    fn of_word(u: &'a Word) -> Source<'a> {
        let mut letters: Vec<Letter> = u.content().into_iter().collect();
        sort_letters(&mut letters);
        let occ = letters.iter().map(|&l| (l, u.occ(l))).collect();
        Source {
            letters,
            occ,
            restrict: Box::new(move |keep| u.restrict_to(keep)),
        }
    }
}

fn structure_from(src: &Source) -> Result<BlockStructure, AsabtbError> {
    let r = &src.restrict;
    // spine: the linear letters, ordered by their pairwise restrictions
    let lin: Vec<Letter> = src
        .letters
        .iter()
        .copied()
        .filter(|l| src.occ[l] == 1)
        .collect();
    let before = |a: Letter, b: Letter| -> Result<bool, AsabtbError> {
        let rr = r(&[a, b]);
        if rr == Word(vec![a, b]) {
            Ok(true)
        } else if rr == Word(vec![b, a]) {
            Ok(false)
        } else {
            Err(AsabtbError::BadRestriction(
                format!("{{{}, {}}}", a.name(), b.name()),
                rr.to_string(),
            ))
        }
    };
    let mut spine = lin.clone();
    let mut order: BTreeMap<(Letter, Letter), bool> = BTreeMap::new();
    for (&a, &b) in lin.iter().tuple_combinations() {
        let ab = before(a, b)?;
        if before(b, a)? == ab {
            return Err(AsabtbError::SpineOrder(a.name(), b.name()));
        }
        order.insert((a, b), ab);
        order.insert((b, a), !ab);
    }
    spine.sort_by(|&a, &b| {
        if a == b || order[&(a, b)] {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    for (i, &a) in spine.iter().enumerate() {
        for &b in &spine[i + 1..] {
            if !order[&(a, b)] {
                return Err(AsabtbError::SpineOrder(a.name(), b.name()));
            }
        }
    }
    let m = spine.len();

    // placement of the 2-occurring letters from their between-sets
    let mut prim: Vec<Letter> = Vec::new();
    let mut first_gap: BTreeMap<Letter, usize> = BTreeMap::new();
    let mut second_gap: BTreeMap<Letter, usize> = BTreeMap::new();
    for &x in &src.letters {
        match src.occ[&x] {
            1 => {}
            2 => {
                let mut between: Vec<usize> = Vec::new();
                for (i, &t) in spine.iter().enumerate() {
                    let rr = r(&[x, t]);
                    if rr == Word(vec![x, t, x]) {
                        between.push(i + 1);
                    } else if rr != Word(vec![t, x, x]) && rr != Word(vec![x, x, t]) {
                        return Err(AsabtbError::BadRestriction(
                            format!("{{{}, {}}}", x.name(), t.name()),
                            rr.to_string(),
                        ));
                    }
                }
                if between.is_empty() {
                    prim.push(x);
                } else if between.windows(2).any(|v| v[1] != v[0] + 1) {
                    return Err(AsabtbError::TornLetter(x.name()));
                } else {
                    first_gap.insert(x, between[0] - 1);
                    second_gap.insert(x, *between.last().unwrap());
                }
            }
            _ => prim.push(x),
        }
    }

    let mut w0: Vec<Letter> = first_gap
        .iter()
        .filter(|&(_, &g)| g == 0)
        .map(|(&x, _)| x)
        .collect();
    sort_letters(&mut w0);
    let mut wend: Vec<Letter> = second_gap
        .iter()
        .filter(|&(_, &g)| g == m)
        .map(|(&x, _)| x)
        .collect();
    sort_letters(&mut wend);
    sort_letters(&mut prim);

    // interior gaps: blocks of unstable same-side pairs, ordered by position
    let mut regions: Vec<Vec<Block>> = Vec::new();
    for g in 1..m.max(1) {
        let tp = spine[g - 1];
        let tn = spine[g];
        let one: Vec<Letter> = first_gap
            .iter()
            .filter(|&(_, &h)| h == g)
            .map(|(&x, _)| x)
            .collect();
        let two: Vec<Letter> = second_gap
            .iter()
            .filter(|&(_, &h)| h == g)
            .map(|(&x, _)| x)
            .collect();
        let stable = |x: Letter, y: Letter, opposite: &[Letter]| -> bool {
            opposite.iter().any(|&z| {
                let rr = r(&[x, y, z, tp, tn]);
                Word(vec![x, z, y]).is_factor_of(&rr) || Word(vec![y, z, x]).is_factor_of(&rr)
            })
        };
        let mut blocks: Vec<Block> = Vec::new();
        for (side, members, opposite) in
            [(Side::First, &one, &two), (Side::Second, &two, &one)]
        {
            // unstable pairs must be transitive so that blocks partition
            let mut assigned: Vec<Vec<Letter>> = Vec::new();
            for &x in members.iter() {
                let mut mates: Vec<Letter> = members
                    .iter()
                    .copied()
                    .filter(|&y| y != x && !stable(x, y, opposite))
                    .collect();
                mates.push(x);
                sort_letters(&mut mates);
                if let Some(b) = assigned.iter().find(|b| b.contains(&x)) {
                    if *b != mates {
                        let other = b.iter().find(|&&y| !mates.contains(&y)).unwrap_or(&x);
                        return Err(AsabtbError::Partition(
                            x.name(),
                            other.name(),
                            mates.last().unwrap().name(),
                        ));
                    }
                } else {
                    assigned.push(mates);
                }
            }
            blocks.extend(assigned.into_iter().map(|letters| Block { side, letters }));
        }
        // order blocks by the position of their gap occurrence; every
        // cross-block member pair must agree
        let gap_pos = |x: Letter, y: Letter, a: Letter| -> Result<usize, AsabtbError> {
            // position of a's gap occurrence inside the restriction to
            // {x, y, tp, tn}, counted between tp and tn
            let rr = r(&[x, y, tp, tn]);
            let lo = rr.0.iter().position(|&l| l == tp).ok_or_else(|| {
                AsabtbError::BadRestriction(format!("{{{}}}", tp.name()), rr.to_string())
            })?;
            let hi = lo
                + 1
                + rr.0[lo + 1..].iter().position(|&l| l == tn).ok_or_else(|| {
                    AsabtbError::BadRestriction(format!("{{{}}}", tn.name()), rr.to_string())
                })?;
            rr.0[lo + 1..hi]
                .iter()
                .position(|&l| l == a)
                .ok_or_else(|| {
                    AsabtbError::BadRestriction(format!("{{{}}}", a.name()), rr.to_string())
                })
        };
        let block_before = |p: &Block, q: &Block| -> Result<bool, AsabtbError> {
            let mut verdict: Option<bool> = None;
            for &x in &p.letters {
                for &y in &q.letters {
                    let v = gap_pos(x, y, x)? < gap_pos(x, y, y)?;
                    if *verdict.get_or_insert(v) != v {
                        return Err(AsabtbError::Interleaved(
                            format!("{:?}", p.letters),
                            format!("{:?}", q.letters),
                        ));
                    }
                }
            }
            Ok(verdict.expect("blocks are nonempty"))
        };
        let mut ordered: Vec<Block> = Vec::new();
        for b in blocks {
            let mut at = ordered.len();
            for (k, other) in ordered.iter().enumerate() {
                if block_before(&b, other)? {
                    at = k;
                    break;
                }
            }
            ordered.insert(at, b);
        }
        // full transitivity check of the final arrangement
        for (k, p) in ordered.iter().enumerate() {
            for q in &ordered[k + 1..] {
                if !block_before(p, q)? {
                    return Err(AsabtbError::Interleaved(
                        format!("{:?}", p.letters),
                        format!("{:?}", q.letters),
                    ));
                }
            }
        }
        regions.push(ordered);
    }
    if m == 0 {
        regions.clear();
    }

    Ok(BlockStructure {
        spine,
        w0,
        regions,
        wend,
        prim,
    })
}

/// The block decomposition of a word.
pub fn block_structure(u: &Word) -> Result<BlockStructure, AsabtbError> {
    structure_from(&Source::of_word(u))
}

fn assemble(s: &BlockStructure) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    if !s.spine.is_empty() {
        out.extend(&s.w0);
        out.push(s.spine[0]);
        for (g, t) in s.spine[1..].iter().enumerate() {
            for b in &s.regions[g] {
                out.extend(&b.letters);
            }
            out.push(*t);
        }
        out.extend(&s.wend);
    }
    for &x in &s.prim {
        out.push(x);
        out.push(x);
    }
    Word(out)
}

/// The canonical word equivalent to `u` over the shared monoid: blocks in
/// ascending letter order, primitive letters appended as squares.
pub fn normal_form(u: &Word) -> Word {
    let s = block_structure(u).expect("every word has a block structure");
    assemble(&s)
}

/// The stability criterion for a same-side occurrence pair at gap index `i`
/// (2 <= i <= m): stable iff some opposite-side letter z of the gap puts
/// xzy or yzx as a factor of the five-letter restriction.
pub fn stable_pair(
    u: &Word,
    i: usize,
    x: Letter,
    y: Letter,
    side: Side,
) -> Result<bool, AsabtbError> {
    let src = Source::of_word(u);
    let lin: Vec<Letter> = src
        .letters
        .iter()
        .copied()
        .filter(|l| src.occ[l] == 1)
        .collect();
    let mut spine: Vec<Letter> = u.0.iter().copied().filter(|l| lin.contains(l)).collect();
    spine.dedup();
    let m = spine.len();
    if i < 2 || i > m {
        return Err(AsabtbError::GapOutOfRange(i, m));
    }
    let (tp, tn) = (spine[i - 2], spine[i - 1]);
    for &v in &[x, y] {
        let pat = match side {
            Side::First => Word(vec![tp, v, tn, v]),
            Side::Second => Word(vec![v, tp, v, tn]),
        };
        if u.restrict_to(&[v, tp, tn]) != pat {
            return Err(AsabtbError::PatternMismatch(v.name(), i));
        }
    }
    for z in u.content() {
        if z == x || z == y {
            continue;
        }
        let zpat = match side {
            Side::First => Word(vec![z, tp, z, tn]),
            Side::Second => Word(vec![tp, z, tn, z]),
        };
        if u.restrict_to(&[z, tp, tn]) != zpat {
            continue;
        }
        let rr = u.restrict_to(&[x, y, z, tp, tn]);
        if Word(vec![x, z, y]).is_factor_of(&rr) || Word(vec![y, z, x]).is_factor_of(&rr) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Equivalence over the shared monoid via the 5-support reduction: words with
/// equal content are equivalent iff all restrictions to at most 5 letters
/// are; unequal contents fall back to the direct satisfaction oracle.
pub fn equiv_asabtb(u: &Word, v: &Word) -> bool {
    let m = asabtb_monoid();
    let content = u.content();
    if content != v.content() {
        return satisfies_bool(m, u, v);
    }
    let letters: Vec<Letter> = content.into_iter().collect();
    if letters.len() <= 5 {
        return satisfies_bool(m, u, v);
    }
    // sound fast path: both words are equivalent to their normal forms, so
    // equal normal forms settle the question without the subset sweep
    if let (Ok(su), Ok(sv)) = (block_structure(u), block_structure(v)) {
        if assemble(&su) == assemble(&sv) {
            return true;
        }
    }
    letters
        .iter()
        .copied()
        .combinations(5)
        .par_bridge()
        .all(|keep| {
            let ru = u.restrict_to(&keep);
            let rv = v.restrict_to(&keep);
            ru == rv || satisfies_bool(m, &ru, &rv)
        })
}

#[derive(Debug, Clone, Serialize)]
pub struct AsabtbReconstruction {
    pub word: String,
    #[serde(skip)]
    pub structure: BlockStructure,
    /// Set when the arity is too small for the completeness guarantee.
    pub warning: Option<String>,
}

/// Rebuild a generating term for a scheme over the shared monoid: read the
/// spine, placements, and block structure from small restrictions of the
/// scheme terms, assemble the canonical word, and verify every pair.
pub fn reconstruct_term_asabtb(f: &Scheme) -> Result<AsabtbReconstruction, AsabtbError> {
    let m = asabtb_monoid();
    let n = f.n;
    if n < 7 {
        return Err(AsabtbError::ArityTooSmall(n));
    }
    let warning = if n <= m.size() + 1 {
        Some(format!(
            "arity {n} is not above |M| + 1 = {}; completeness is not guaranteed",
            m.size() + 1
        ))
    } else {
        None
    };
    let rep = variable_exponents(f, m);
    let letters: Vec<Letter> = (1..=n).map(Letter::var).collect();
    let occ: BTreeMap<Letter, usize> = letters
        .iter()
        .map(|&l| (l, rep.exponents[l.var_index().unwrap() - 1]))
        .collect();
    let pairs: Vec<(usize, usize)> = f.pairs().collect();
    let restrict = move |keep: &[Letter]| -> Word {
        let banned: Vec<usize> = keep.iter().filter_map(|l| l.var_index()).collect();
        let (k, l) = f
            .pairs()
            .find(|&(k, l)| !banned.contains(&k) && !banned.contains(&l))
            .expect("arity leaves a free pair");
        f.term(k, l).restrict_to(keep)
    };
    let src = Source {
        letters,
        occ,
        restrict: Box::new(restrict),
    };
    let s = structure_from(&src)?;
    let word = assemble(&s);

    if let Some(&(i, j)) = pairs.par_iter().find_any(|&&(i, j)| {
        let w_ij = word
            .identify(Letter::var(i), Letter::var(j))
            .expect("scheme pairs are distinct");
        !equiv_asabtb(&w_ij, f.term(i, j))
    }) {
        return Err(AsabtbError::VerificationFailed(i, j));
    }

    Ok(AsabtbReconstruction {
        word: word.to_string(),
        structure: s,
        warning,
    })
}
