//! Equational reasoning over a finite monoid: evaluation, satisfaction,
//! isoterms, islands, the power-shuffling law pair, primitive letters.

use crate::monoid::FiniteMonoid;
use crate::words::{Letter, Word};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Identity {
        Identity { lhs, rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaBeta {
    pub alpha: usize,
    pub beta: usize,
}

/// A word compiled against a fixed variable list for fast evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub positions: Vec<u8>,
    pub used: u64,
}

pub fn compile(w: &Word, vars: &[Letter]) -> Compiled {
    let positions: Vec<u8> = w
        .0
        .iter()
        .map(|l| {
            vars.iter()
                .position(|v| v == l)
                .expect("letter outside variable list") as u8
        })
        .collect();
    let mut used = 0u64;
    for &p in &positions {
        used |= 1 << p;
    }
    Compiled { positions, used }
}

pub fn eval_compiled(m: &FiniteMonoid, c: &Compiled, images: &[u32]) -> u32 {
    let mut acc = match m.identity {
        Some(e) => e,
        None => {
            // a semigroup evaluation must be a non-empty product
            assert!(!c.positions.is_empty(), "empty product in a semigroup");
            let mut it = c.positions.iter();
            let first = images[*it.next().unwrap() as usize];
            let mut acc = first;
            for &p in it {
                acc = m.mul(acc, images[p as usize]);
                if Some(acc) == m.zero {
                    return acc;
                }
            }
            return acc;
        }
    };
    for &p in &c.positions {
        acc = m.mul(acc, images[p as usize]);
        if Some(acc) == m.zero {
            return acc;
        }
    }
    acc
}

/// Evaluates `w` under an assignment given as (letter, element) pairs.
pub fn evaluate(m: &FiniteMonoid, w: &Word, assignment: &[(Letter, u32)]) -> u32 {
    let vars: Vec<Letter> = assignment.iter().map(|&(l, _)| l).collect();
    let images: Vec<u32> = assignment.iter().map(|&(_, e)| e).collect();
    eval_compiled(m, &compile(w, &vars), &images)
}

/// All assignments over `vars` that can distinguish two words with equal
/// content over a Rees quotient: each variable is the identity or a non-zero,
/// non-identity element, and the total image length stays within the
/// nilpotency budget. Any assignment outside this set sends both sides of an
/// equal-content identity to zero.
///
/// For monoids without a Rees length bound this falls back to the full
/// |M|^|vars| enumeration.
pub fn pruned_assignments(m: &FiniteMonoid, vars: &[Letter]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    match (m.rees_max_len, m.identity) {
        (Some(budget), Some(id)) => {
            let inner: Vec<(u32, usize)> = m
                .inner_elements()
                .into_iter()
                .filter_map(|(e, len)| len.map(|l| (e, l)))
                .filter(|&(_, l)| l >= 1)
                .collect();
            let mut cur = vec![id; vars.len()];
            fn rec(
                pos: usize,
                left: usize,
                vars_len: usize,
                id: u32,
                inner: &[(u32, usize)],
                cur: &mut Vec<u32>,
                out: &mut Vec<Vec<u32>>,
            ) {
                if pos == vars_len {
                    out.push(cur.clone());
                    return;
                }
                cur[pos] = id;
                rec(pos + 1, left, vars_len, id, inner, cur, out);
                for &(e, l) in inner {
                    if l <= left {
                        cur[pos] = e;
                        rec(pos + 1, left - l, vars_len, id, inner, cur, out);
                    }
                }
                cur[pos] = id;
            }
            rec(0, budget, vars.len(), id, &inner, &mut cur, &mut out);
        }
        _ => {
            let n = m.size() as u32;
            let mut cur = vec![0u32; vars.len()];
            fn rec_full(pos: usize, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
                if pos == cur.len() {
                    out.push(cur.clone());
                    return;
                }
                for e in 0..n {
                    cur[pos] = e;
                    rec_full(pos + 1, n, cur, out);
                }
            }
            rec_full(0, n, &mut cur, &mut out);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SatResult {
    pub holds: bool,
    /// On failure, the distinguishing assignment as (variable, element name).
    pub witness: Option<Vec<(String, String)>>,
    pub assignments_checked: usize,
}

/// Decides M |= lhs ~ rhs by assignment enumeration.
///
/// Direct products are decided factorwise: a product satisfies an identity
/// iff both factors do (identities are preserved by products and reflected by
/// the projections). Equal-content identities over Rees quotients use the
/// pruned enumeration; unequal contents are separated by a zero assignment on
/// a one-sided variable whenever the monoid has a zero.
pub fn satisfies(m: &FiniteMonoid, id: &Identity) -> SatResult {
    if let Some(f) = &m.factors {
        let r1 = satisfies(&f.0, id);
        if !r1.holds {
            return SatResult {
                holds: false,
                witness: r1.witness.map(|w| {
                    w.into_iter().map(|(v, e)| (v, format!("({e},1)"))).collect()
                }),
                assignments_checked: r1.assignments_checked,
            };
        }
        let r2 = satisfies(&f.1, id);
        return SatResult {
            holds: r2.holds,
            witness: r2.witness.map(|w| {
                w.into_iter().map(|(v, e)| (v, format!("(1,{e})"))).collect()
            }),
            assignments_checked: r1.assignments_checked + r2.assignments_checked,
        };
    }
    let cl = id.lhs.content();
    let cr = id.rhs.content();
    let vars: Vec<Letter> = cl.union(&cr).copied().collect();
    let l = compile(&id.lhs, &vars);
    let r = compile(&id.rhs, &vars);
    let mut checked = 0usize;

    if cl != cr {
        if let (Some(identity), Some(_zero)) = (m.identity, m.zero) {
            // a one-sided variable sent to a non-identity element separates
            // the sides in any monoid with a zero
            for (vi, v) in vars.iter().enumerate() {
                if cl.contains(v) == cr.contains(v) {
                    continue;
                }
                for e in 0..m.size() as u32 {
                    if e == identity {
                        continue;
                    }
                    let mut images = vec![identity; vars.len()];
                    images[vi] = e;
                    checked += 1;
                    if eval_compiled(m, &l, &images) != eval_compiled(m, &r, &images) {
                        return SatResult {
                            holds: false,
                            witness: Some(witness_of(m, &vars, &images)),
                            assignments_checked: checked,
                        };
                    }
                }
            }
        }
        // no quick separation: fall through to the full enumeration
        let full = full_assignments(m, vars.len());
        for images in &full {
            checked += 1;
            if eval_compiled(m, &l, images) != eval_compiled(m, &r, images) {
                return SatResult {
                    holds: false,
                    witness: Some(witness_of(m, &vars, images)),
                    assignments_checked: checked,
                };
            }
        }
        return SatResult {
            holds: true,
            witness: None,
            assignments_checked: checked,
        };
    }

    for images in &pruned_assignments(m, &vars) {
        checked += 1;
        if eval_compiled(m, &l, images) != eval_compiled(m, &r, images) {
            return SatResult {
                holds: false,
                witness: Some(witness_of(m, &vars, images)),
                assignments_checked: checked,
            };
        }
    }
    SatResult {
        holds: true,
        witness: None,
        assignments_checked: checked,
    }
}

fn full_assignments(m: &FiniteMonoid, k: usize) -> Vec<Vec<u32>> {
    let n = m.size() as u32;
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn rec(pos: usize, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..n {
            cur[pos] = e;
            rec(pos + 1, n, cur, out);
        }
    }
    rec(0, n, &mut cur, &mut out);
    out
}

fn witness_of(m: &FiniteMonoid, vars: &[Letter], images: &[u32]) -> Vec<(String, String)> {
    vars.iter()
        .zip(images)
        .map(|(v, &e)| (v.to_string(), m.elem_name(e)))
        .collect()
}

pub fn satisfies_bool(m: &FiniteMonoid, lhs: &Word, rhs: &Word) -> bool {
    satisfies(m, &Identity::new(lhs.clone(), rhs.clone())).holds
}

#[derive(Clone, Debug, Serialize)]
pub struct IsotermResult {
    pub verdict: bool,
    pub witness: Option<String>,
    /// True when the candidate space was cut off by the caps instead of the
    /// completeness bound.
    pub bounded_only: bool,
    pub candidates_checked: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBounds {
    pub max_len: usize,
    pub occ_cap: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_len: 12,
            occ_cap: 6,
        }
    }
}

/// Does `u` admit an assignment with every variable non-identity and a
/// non-zero value? When it does, any word equivalent to `u` has content
/// inside content(u) and length at most the Rees bound, so the bounded
/// candidate search is complete.
fn full_support_nonzero(m: &FiniteMonoid, u: &Word) -> bool {
    let vars: Vec<Letter> = u.content().into_iter().collect();
    let c = compile(u, &vars);
    let (Some(identity), Some(zero)) = (m.identity, m.zero) else {
        return false;
    };
    pruned_assignments(m, &vars)
        .iter()
        .any(|im| im.iter().all(|&e| e != identity) && eval_compiled(m, &c, im) != zero)
}

fn candidate_words(alphabet: &[Letter], max_len: usize, occ_cap: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; alphabet.len()];
    let mut cur: Vec<Letter> = Vec::new();
    fn rec(
        alphabet: &[Letter],
        max_len: usize,
        occ_cap: usize,
        counts: &mut Vec<usize>,
        cur: &mut Vec<Letter>,
        out: &mut Vec<Word>,
    ) {
        out.push(Word(cur.clone()));
        if cur.len() == max_len {
            return;
        }
        for i in 0..alphabet.len() {
            if counts[i] < occ_cap {
                counts[i] += 1;
                cur.push(alphabet[i]);
                rec(alphabet, max_len, occ_cap, counts, cur, out);
                cur.pop();
                counts[i] -= 1;
            }
        }
    }
    rec(alphabet, max_len, occ_cap, &mut counts, &mut cur, &mut out);
    out
}

/// True iff no word other than `u` (with content inside content(u), within
/// the candidate space) is M-equivalent to `u`.
pub fn is_isoterm(m: &FiniteMonoid, u: &Word, bounds: SearchBounds) -> IsotermResult {
    let complete = m.rees_max_len.is_some() && full_support_nonzero(m, u);
    let max_len = match (complete, m.rees_max_len) {
        (true, Some(d)) => d.min(bounds.max_len),
        _ => bounds.max_len,
    };
    let bounded_only = !(complete
        && bounds.max_len >= m.rees_max_len.unwrap_or(usize::MAX)
        && bounds.occ_cap >= m.rees_max_len.unwrap_or(usize::MAX));
    let alphabet: Vec<Letter> = u.content().into_iter().collect();
    let mut checked = 0usize;
    for v in candidate_words(&alphabet, max_len, bounds.occ_cap) {
        if &v == u {
            continue;
        }
        checked += 1;
        if satisfies_bool(m, u, &v) {
            return IsotermResult {
                verdict: false,
                witness: Some(v.to_string()),
                bounded_only,
                candidates_checked: checked,
            };
        }
    }
    IsotermResult {
        verdict: true,
        witness: None,
        bounded_only,
        candidates_checked: checked,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IslandResult {
    pub verdict: bool,
    pub failure: Option<String>,
    pub bounded_only: bool,
    pub candidates_checked: usize,
}

/// True iff the members of `us` are pairwise M-equivalent and every candidate
/// word equivalent to a member already lies in `us`.
pub fn is_island(m: &FiniteMonoid, us: &[Word], bounds: SearchBounds) -> IslandResult {
    assert!(!us.is_empty());
    let u0 = &us[0];
    for v in &us[1..] {
        if !satisfies_bool(m, u0, v) {
            return IslandResult {
                verdict: false,
                failure: Some(format!("members not equivalent: {u0} vs {v}")),
                bounded_only: false,
                candidates_checked: 0,
            };
        }
    }
    let complete = m.rees_max_len.is_some() && us.iter().any(|u| full_support_nonzero(m, u));
    let max_len = match (complete, m.rees_max_len) {
        (true, Some(d)) => d.min(bounds.max_len),
        _ => bounds.max_len,
    };
    let bounded_only = !(complete
        && bounds.max_len >= m.rees_max_len.unwrap_or(usize::MAX)
        && bounds.occ_cap >= m.rees_max_len.unwrap_or(usize::MAX));
    let mut alphabet: BTreeSet<Letter> = BTreeSet::new();
    for u in us {
        alphabet.extend(u.content());
    }
    let alphabet: Vec<Letter> = alphabet.into_iter().collect();
    let set: BTreeSet<&Word> = us.iter().collect();
    let mut checked = 0usize;
    for v in candidate_words(&alphabet, max_len, bounds.occ_cap) {
        if set.contains(&v) {
            continue;
        }
        checked += 1;
        if satisfies_bool(m, u0, &v) {
            return IslandResult {
                verdict: false,
                failure: Some(format!("outside word equivalent to the set: {v}")),
                bounded_only,
                candidates_checked: checked,
            };
        }
    }
    IslandResult {
        verdict: true,
        failure: None,
        bounded_only,
        candidates_checked: checked,
    }
}

/// M |= x^alpha ~ x^{alpha+beta} and the shuffling law
/// t_1 x t_2 x ... t_alpha x ~ x^alpha t_1 ... t_alpha, with the t_i ranging
/// over the elements (which suffices for a finite monoid).
pub fn satisfies_a(m: &FiniteMonoid, alpha: usize, beta: usize) -> bool {
    assert!(alpha >= 1 && beta >= 1);
    for a in 0..m.size() as u32 {
        if m.pow(a, alpha) != m.pow(a, alpha + beta) {
            return false;
        }
    }
    // shuffling law, t_i quantified over elements
    let n = m.size() as u32;
    let mut ts = vec![0u32; alpha];
    fn rec(m: &FiniteMonoid, x: u32, ts: &mut Vec<u32>, pos: usize, n: u32) -> bool {
        if pos == ts.len() {
            let mut lhs = None;
            for &t in ts.iter() {
                let step = m.mul(t, x);
                lhs = Some(match lhs {
                    None => step,
                    Some(acc) => m.mul(acc, step),
                });
            }
            let mut rhs = m.pow(x, ts.len());
            for &t in ts.iter() {
                rhs = m.mul(rhs, t);
            }
            return lhs == Some(rhs);
        }
        for t in 0..n {
            ts[pos] = t;
            if !rec(m, x, ts, pos + 1, n) {
                return false;
            }
        }
        true
    }
    for x in 0..n {
        if !rec(m, x, &mut ts, 0, n) {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug)]
pub struct AlphaBetaCaps {
    pub alpha_max: usize,
    pub beta_max: usize,
}

impl Default for AlphaBetaCaps {
    fn default() -> Self {
        AlphaBetaCaps {
            alpha_max: 5,
            beta_max: 4,
        }
    }
}

/// Least (alpha, beta), minimizing alpha first, within the caps.
pub fn minimal_a(m: &FiniteMonoid, caps: AlphaBetaCaps) -> Option<AlphaBeta> {
    let (index, period) = crate::monoid::index_period(m);
    for alpha in 1..=caps.alpha_max {
        for beta in 1..=caps.beta_max {
            // the power law alone needs alpha >= index and period | beta
            if alpha < index || beta % period != 0 {
                continue;
            }
            if satisfies_a(m, alpha, beta) {
                return Some(AlphaBeta { alpha, beta });
            }
        }
    }
    None
}

/// Letters x of `w` such that every assignment with a non-identity image of x
/// sends `w` to zero.
pub fn primitive_letters(m: &FiniteMonoid, w: &Word) -> BTreeSet<Letter> {
    let vars: Vec<Letter> = w.content().into_iter().collect();
    let c = compile(w, &vars);
    let (Some(identity), Some(zero)) = (m.identity, m.zero) else {
        return BTreeSet::new();
    };
    let assigns = pruned_assignments(m, &vars);
    vars.iter()
        .enumerate()
        .filter(|&(i, _)| {
            // primitive iff no nonzero evaluation with x non-identity exists;
            // zero images of other variables never help, so the pruned
            // (non-zero image) enumeration is exhaustive here
            !assigns.iter().any(|im| {
                im[i] != identity && im[i] != zero && eval_compiled(m, &c, im) != zero
            })
        })
        .map(|(_, &v)| v)
        .collect()
}

/// Letters occurring at least `alpha` times.
pub fn strongly_primitive_letters(w: &Word, alpha: usize) -> BTreeSet<Letter> {
    w.content()
        .into_iter()
        .filter(|&l| w.occ(l) >= alpha)
        .collect()
}
