//! Schemes and the machinery around them: dependency, consistency, the
//! induced operation, variable exponents, and the comes-from-a-term search.

use crate::identities::{
    compile, eval_compiled, pruned_assignments, satisfies_bool,
};
use crate::monoid::{index_period, FiniteMonoid};
use crate::words::{Letter, Word};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("term for pair ({0},{1}) missing")]
    MissingTerm(usize, usize),
    #[error("term for pair ({0},{1}) uses a variable outside x1..x{2}")]
    StrayVariable(usize, usize, usize),
    #[error("no repeated coordinate and arity {0} does not exceed |M| = {1}")]
    NoRepeat(usize, usize),
    #[error("induced operation not well defined: pairs ({0},{1}) and ({2},{3}) disagree")]
    NotWellDefined(usize, usize, usize, usize),
    #[error("bad scheme JSON: {0}")]
    BadJson(String),
    #[error("bad family parameters: {0}")]
    BadFamily(String),
    #[error("{0}")]
    Words(#[from] crate::words::WordError),
}

/// A family of n-ary terms t_ij over x1..xn, one per pair 1 <= i < j <= n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    pub n: usize,
    terms: BTreeMap<(usize, usize), Word>,
}

impl Scheme {
    pub fn new(n: usize, terms: BTreeMap<(usize, usize), Word>) -> Result<Scheme, SchemeError> {
        for i in 1..=n {
            for j in i + 1..=n {
                let t = terms.get(&(i, j)).ok_or(SchemeError::MissingTerm(i, j))?;
                for l in t.content() {
                    match l.var_index() {
                        Some(k) if 1 <= k && k <= n => {}
                        _ => return Err(SchemeError::StrayVariable(i, j, n)),
                    }
                }
            }
        }
        Ok(Scheme { n, terms })
    }

    pub fn term(&self, i: usize, j: usize) -> &Word {
        &self.terms[&(i, j)]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.terms.keys().copied()
    }

    /// t_ij := w with every x_i replaced by x_j.
    pub fn from_term(word: &Word, n: usize) -> Result<Scheme, SchemeError> {
        let mut terms = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                terms.insert(
                    (i, j),
                    word.identify(Letter::var(i), Letter::var(j))?,
                );
            }
        }
        Scheme::new(n, terms)
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (&(i, j), t) in &self.terms {
            map.insert(format!("{i},{j}"), Value::String(t.to_string()));
        }
        serde_json::json!({ "n": self.n, "terms": Value::Object(map) })
    }

    pub fn from_json(v: &Value) -> Result<Scheme, SchemeError> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| SchemeError::BadJson("missing n".into()))? as usize;
        let terms_v = v
            .get("terms")
            .and_then(Value::as_object)
            .ok_or_else(|| SchemeError::BadJson("missing terms".into()))?;
        let mut terms = BTreeMap::new();
        for (k, tv) in terms_v {
            let (i, j) = k
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| SchemeError::BadJson(format!("bad pair key {k:?}")))?;
            let text = tv
                .as_str()
                .ok_or_else(|| SchemeError::BadJson(format!("term {k:?} not a string")))?;
            terms.insert((i, j), Word::parse(text)?);
        }
        Scheme::new(n, terms)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DependencyReport {
    pub ok: bool,
    /// Pairs whose term depends on its excluded coordinate.
    pub failures: Vec<(usize, usize)>,
}

/// t_ij must not depend on coordinate i: checked syntactically (x_i absent)
/// with a semantic fallback that varies coordinate i over all elements.
pub fn check_dependency(m: &FiniteMonoid, f: &Scheme) -> DependencyReport {
    let mut failures = Vec::new();
    for (i, j) in f.pairs() {
        let t = f.term(i, j);
        let xi = Letter::var(i);
        if !t.content().contains(&xi) {
            continue;
        }
        if !independent_of(m, t, xi) {
            failures.push((i, j));
        }
    }
    DependencyReport {
        ok: failures.is_empty(),
        failures,
    }
}

/// Semantic independence: the value of `t` never changes as the image of `x`
/// varies with all other images fixed. Any distinguishing pair of values
/// includes a non-zero evaluation, which forces the other images into the
/// pruned assignment set, so that enumeration is exhaustive.
fn independent_of(m: &FiniteMonoid, t: &Word, x: Letter) -> bool {
    let mut vars: Vec<Letter> = t.content().into_iter().collect();
    vars.retain(|&v| v != x);
    let others = vars.clone();
    vars.push(x);
    let xi_slot = vars.len() - 1;
    let c = compile(t, &vars);
    for base in pruned_assignments(m, &others) {
        let mut images = base.clone();
        images.push(0);
        let mut first = None;
        for e in 0..m.size() as u32 {
            images[xi_slot] = e;
            let v = eval_compiled(m, &c, &images);
            match first {
                None => first = Some(v),
                Some(f0) if f0 != v => return false,
                _ => {}
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub ok: bool,
    pub checked: usize,
    /// Quadruples ((i,j),(k,l)) with M |/= t_ij^(kl) ~ t_kl^(ij).
    pub failures: Vec<((usize, usize), (usize, usize))>,
}

/// M |= t_ij^(kl) ~ t_kl^(ij) for all ordered pairs of index pairs.
pub fn check_consistency(m: &FiniteMonoid, f: &Scheme) -> ConsistencyReport {
    let pairs: Vec<(usize, usize)> = f.pairs().collect();
    let quads: Vec<((usize, usize), (usize, usize))> = pairs
        .iter()
        .flat_map(|&p| pairs.iter().map(move |&q| (p, q)))
        .collect();
    let failures: Vec<_> = quads
        .par_iter()
        .filter(|&&((i, j), (k, l))| {
            let lhs = identify_classes(f.term(i, j), (i, j), (k, l));
            let rhs = identify_classes(f.term(k, l), (i, j), (k, l));
            !satisfies_bool(m, &lhs, &rhs)
        })
        .cloned()
        .collect();
    ConsistencyReport {
        ok: failures.is_empty(),
        checked: quads.len(),
        failures,
    }
}

/// Identify the variables of both pairs: disjoint pairs collapse separately,
/// overlapping pairs collapse into a single class. Every class maps onto its
/// largest index.
fn identify_classes(t: &Word, (i, j): (usize, usize), (k, l): (usize, usize)) -> Word {
    let overlap = i == k || i == l || j == k || j == l;
    let classes: Vec<Vec<usize>> = if overlap {
        let mut c = vec![i, j, k, l];
        c.sort();
        c.dedup();
        vec![c]
    } else {
        vec![vec![i, j], vec![k, l]]
    };
    let mut out = t.clone();
    for class in classes {
        let rep = *class.last().unwrap();
        for &a in &class {
            if a != rep {
                out = out
                    .identify(Letter::var(a), Letter::var(rep))
                    .expect("class members are distinct");
            }
        }
    }
    out
}

/// Evaluates the operation the scheme induces on a tuple with a repeated
/// coordinate, checking that every repeated pair gives the same value.
pub fn induced_operation(
    f: &Scheme,
    m: &FiniteMonoid,
    tuple: &[u32],
) -> Result<u32, SchemeError> {
    assert_eq!(tuple.len(), f.n);
    let vars: Vec<Letter> = (1..=f.n).map(Letter::var).collect();
    let mut result: Option<(u32, (usize, usize))> = None;
    for i in 1..=f.n {
        for j in i + 1..=f.n {
            if tuple[i - 1] != tuple[j - 1] {
                continue;
            }
            let v = eval_compiled(m, &compile(f.term(i, j), &vars), tuple);
            match result {
                None => result = Some((v, (i, j))),
                Some((v0, (i0, j0))) if v0 != v => {
                    return Err(SchemeError::NotWellDefined(i0, j0, i, j))
                }
                _ => {}
            }
        }
    }
    match result {
        Some((v, _)) => Ok(v),
        None => Err(SchemeError::NoRepeat(f.n, m.size())),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub exponents: Vec<usize>,
    pub index: usize,
    pub period: usize,
    pub lemma_ok: bool,
    pub violations: Vec<String>,
}

/// e_i = min occ(x_i, t_jk) over pairs avoiding i, plus the occurrence lemma:
/// counts below the index are exact, counts at or above it are congruent mod
/// the period; and occ(x_j, t_ij) tracks e_i + e_j the same way.
pub fn variable_exponents(f: &Scheme, m: &FiniteMonoid) -> ExponentReport {
    let (index, period) = index_period(m);
    let mut exponents = vec![usize::MAX; f.n];
    for i in 1..=f.n {
        for (j, k) in f.pairs() {
            if j == i || k == i {
                continue;
            }
            let o = f.term(j, k).occ(Letter::var(i));
            exponents[i - 1] = exponents[i - 1].min(o);
        }
    }
    let mut violations = Vec::new();
    for i in 1..=f.n {
        let ei = exponents[i - 1];
        for (j, k) in f.pairs() {
            if j == i || k == i {
                continue;
            }
            let o = f.term(j, k).occ(Letter::var(i));
            let ok = if ei < index {
                o == ei
            } else {
                o >= index.min(ei) && o % period == ei % period
            };
            if !ok {
                violations.push(format!("occ(x{i}, t_{j}{k}) = {o}, e_{i} = {ei}"));
            }
        }
    }
    for (i, j) in f.pairs() {
        let s = exponents[i - 1] + exponents[j - 1];
        let o = f.term(i, j).occ(Letter::var(j));
        let ok = if s < index { o == s } else { o % period == s % period };
        if !ok {
            violations.push(format!("occ(x{j}, t_{i}{j}) = {o}, e_{i}+e_{j} = {s}"));
        }
    }
    ExponentReport {
        lemma_ok: violations.is_empty(),
        exponents,
        index,
        period,
        violations,
    }
}

/// Scheme variables whose exponent reaches the power-law threshold alpha.
pub fn prim_st(f: &Scheme, m: &FiniteMonoid) -> Vec<usize> {
    let alpha = crate::identities::minimal_a(m, Default::default())
        .map(|ab| ab.alpha)
        .unwrap_or_else(|| index_period(m).0);
    let rep = variable_exponents(f, m);
    (1..=f.n).filter(|&i| rep.exponents[i - 1] >= alpha).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Occurrence counts at or above the index may exceed it by at most this
    /// many periods.
    pub slack_periods: usize,
    pub max_nodes: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            slack_periods: 2,
            max_nodes: 1 << 40,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermSearch {
    pub term: Option<String>,
    pub profiles: usize,
    /// Total arrangement count over all profiles, before pruning.
    pub candidates_bound: u128,
    pub nodes: u64,
    pub exhausted: bool,
    /// Occurrence counts were searched up to this cap; non-existence is
    /// complete relative to it.
    pub occ_cap: usize,
}

/// Searches for a word w over x1..xn with M |= w^(ij) ~ t_ij for every pair.
///
/// Occurrence profiles follow the exponent lemma: exact below the index,
/// congruent mod the period (with bounded slack) at or above it. Candidates
/// are filled left to right; a branch dies as soon as some pair's realized
/// two-variable restriction stops being a prefix of every word equivalent to
/// that pair's target restriction.
pub fn comes_from_term(m: &FiniteMonoid, f: &Scheme, cfg: SearchConfig) -> TermSearch {
    let rep = variable_exponents(f, m);
    let (p, q) = (rep.index, rep.period);
    let occ_cap = p + cfg.slack_periods * q;
    let choices: Vec<Vec<usize>> = (0..f.n)
        .map(|i| {
            let e = rep.exponents[i];
            if e < p {
                vec![e]
            } else {
                (p..=occ_cap).filter(|o| o % q == e % q).collect()
            }
        })
        .collect();
    let mut profiles: Vec<Vec<usize>> = vec![vec![]];
    for ch in &choices {
        profiles = profiles
            .into_iter()
            .flat_map(|pr| {
                ch.iter().map(move |&o| {
                    let mut pr2 = pr.clone();
                    pr2.push(o);
                    pr2
                })
            })
            .collect();
    }
    profiles.sort_by_key(|pr| pr.iter().sum::<usize>());
    let candidates_bound: u128 = profiles.iter().map(|pr| multinomial(pr)).sum();
    let nodes = AtomicU64::new(0);
    let found = profiles
        .par_iter()
        .find_map_first(|pr| search_profile(m, f, pr, &nodes, cfg.max_nodes));
    let n_nodes = nodes.load(Ordering::Relaxed);
    TermSearch {
        term: found.map(|w| w.to_string()),
        profiles: profiles.len(),
        candidates_bound,
        nodes: n_nodes,
        exhausted: n_nodes < cfg.max_nodes,
        occ_cap,
    }
}

fn multinomial(counts: &[usize]) -> u128 {
    let total: usize = counts.iter().sum();
    let mut num = 1u128;
    let mut k = 0usize;
    for &c in counts {
        for i in 1..=c {
            k += 1;
            num = num * k as u128 / i as u128;
        }
    }
    debug_assert_eq!(k, total);
    num
}

/// Two-variable words with the given occurrence counts that are M-equivalent
/// to the pair's target restriction in every scheme term avoiding the pair.
fn pair_patterns(
    m: &FiniteMonoid,
    f: &Scheme,
    i: usize,
    j: usize,
    ci: usize,
    cj: usize,
) -> Vec<Vec<u8>> {
    let keep = [Letter::var(i), Letter::var(j)];
    let mut targets: Vec<Word> = f
        .pairs()
        .filter(|&(k, l)| k != i && k != j && l != i && l != j)
        .map(|(k, l)| f.term(k, l).restrict_to(&keep))
        .collect();
    targets.sort();
    targets.dedup();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ci + cj);
    fn rec(
        m: &FiniteMonoid,
        i: usize,
        j: usize,
        left_i: usize,
        left_j: usize,
        cur: &mut Vec<u8>,
        targets: &[Word],
        out: &mut Vec<Vec<u8>>,
    ) {
        if left_i == 0 && left_j == 0 {
            let word = Word(
                cur.iter()
                    .map(|&b| Letter::var(if b == 0 { i } else { j }))
                    .collect(),
            );
            if targets.iter().all(|t| satisfies_bool(m, &word, t)) {
                out.push(cur.clone());
            }
            return;
        }
        if left_i > 0 {
            cur.push(0);
            rec(m, i, j, left_i - 1, left_j, cur, targets, out);
            cur.pop();
        }
        if left_j > 0 {
            cur.push(1);
            rec(m, i, j, left_i, left_j - 1, cur, targets, out);
            cur.pop();
        }
    }
    rec(m, i, j, ci, cj, &mut cur, &targets, &mut out);
    out
}

struct PairState {
    /// Patterns as 0/1 sequences (0 = smaller variable index).
    patterns: Vec<Vec<u8>>,
    /// Depth at which each pattern died, if it did.
    death: Vec<Option<usize>>,
    alive: usize,
    consumed: usize,
}

fn search_profile(
    m: &FiniteMonoid,
    f: &Scheme,
    profile: &[usize],
    nodes: &AtomicU64,
    max_nodes: u64,
) -> Option<Word> {
    let n = f.n;
    let total: usize = profile.iter().sum();
    let pair_id = |a: usize, b: usize| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        lo * n + hi
    };
    let mut states: BTreeMap<usize, PairState> = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if profile[i - 1] == 0 && profile[j - 1] == 0 {
                continue;
            }
            let patterns = pair_patterns(m, f, i, j, profile[i - 1], profile[j - 1]);
            if patterns.is_empty() {
                return None;
            }
            let death = vec![None; patterns.len()];
            states.insert(
                pair_id(i, j),
                PairState {
                    alive: patterns.len(),
                    death,
                    patterns,
                    consumed: 0,
                },
            );
        }
    }
    let mut remaining = profile.to_vec();
    let mut word: Vec<usize> = Vec::with_capacity(total);
    let vars: Vec<Letter> = (1..=n).map(Letter::var).collect();

    fn rec(
        m: &FiniteMonoid,
        f: &Scheme,
        n: usize,
        total: usize,
        remaining: &mut Vec<usize>,
        word: &mut Vec<usize>,
        states: &mut BTreeMap<usize, PairState>,
        vars: &[Letter],
        nodes: &AtomicU64,
        max_nodes: u64,
    ) -> Option<Word> {
        if nodes.fetch_add(1, Ordering::Relaxed) >= max_nodes {
            return None;
        }
        if word.len() == total {
            let cand = Word(word.iter().map(|&v| vars[v - 1]).collect());
            for (i, j) in f.pairs() {
                let lhs = cand
                    .identify(Letter::var(i), Letter::var(j))
                    .expect("distinct scheme indices");
                if !satisfies_bool(m, &lhs, f.term(i, j)) {
                    return None;
                }
            }
            return Some(cand);
        }
        let depth = word.len();
        for v in 1..=n {
            if remaining[v - 1] == 0 {
                continue;
            }
            // advance every constrained pair containing v, recording kills at
            // this depth so they can be undone on backtrack
            let mut touched: Vec<usize> = Vec::new();
            let mut dead_branch = false;
            for u in 1..=n {
                if u == v {
                    continue;
                }
                let key = pair_key(u, v, n);
                let Some(st) = states.get_mut(&key) else {
                    continue;
                };
                let sym = if v > u { 1u8 } else { 0u8 };
                let pos = st.consumed;
                for (pi, pat) in st.patterns.iter().enumerate() {
                    if st.death[pi].is_none() && pat[pos] != sym {
                        st.death[pi] = Some(depth);
                        st.alive -= 1;
                    }
                }
                st.consumed += 1;
                touched.push(key);
                if st.alive == 0 {
                    dead_branch = true;
                    break;
                }
            }
            if !dead_branch {
                remaining[v - 1] -= 1;
                word.push(v);
                if let Some(found) = rec(
                    m, f, n, total, remaining, word, states, vars, nodes, max_nodes,
                ) {
                    return Some(found);
                }
                word.pop();
                remaining[v - 1] += 1;
            }
            // undo
            for key in touched {
                let st = states.get_mut(&key).unwrap();
                st.consumed -= 1;
                for d in st.death.iter_mut() {
                    if *d == Some(depth) {
                        *d = None;
                        st.alive += 1;
                    }
                }
            }
        }
        None
    }

    fn pair_key(a: usize, b: usize, n: usize) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        lo * n + hi
    }

    rec(
        m,
        f,
        n,
        total,
        &mut remaining,
        &mut word,
        &mut states,
        &vars,
        nodes,
        max_nodes,
    )
}
