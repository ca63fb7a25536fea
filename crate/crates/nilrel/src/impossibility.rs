//! Two-variable restriction pattern systems over x1..xn, a backtracking
//! solver for them, and the fast first-letter impossibility certificates.

use crate::words::{Letter, Word};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern for pair ({0},{1}) uses letters outside the pair")]
    BadPattern(usize, usize),
    #[error("pair ({0},{1}) out of range or degenerate for arity {2}")]
    BadPair(usize, usize, usize),
    #[error("bad system JSON: {0}")]
    BadJson(String),
    #[error("arity {0} outside the certificate's range")]
    BadArity(usize),
    #[error("{0}")]
    Words(#[from] crate::words::WordError),
}

/// A system of required and allowed two-variable restrictions.
///
/// An edge (i, j) demands restrict(w, {x_i, x_j}) be exactly its pattern; a
/// constrained non-edge {i, j} demands the restriction lie in its allowed
/// set. Unmentioned pairs are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSystem {
    pub n: usize,
    edges: BTreeMap<(usize, usize), Word>,
    non_edge_allowed: BTreeMap<(usize, usize), Vec<Word>>,
}

fn check_pattern(n: usize, i: usize, j: usize, w: &Word) -> Result<(), PatternError> {
    if i == j || i < 1 || j < 1 || i > n || j > n {
        return Err(PatternError::BadPair(i, j, n));
    }
    for l in w.content() {
        if l != Letter::var(i) && l != Letter::var(j) {
            return Err(PatternError::BadPattern(i, j));
        }
    }
    Ok(())
}

impl PatternSystem {
    pub fn new(
        n: usize,
        edges: BTreeMap<(usize, usize), Word>,
        non_edge_allowed: BTreeMap<(usize, usize), Vec<Word>>,
    ) -> Result<PatternSystem, PatternError> {
        for (&(i, j), w) in &edges {
            check_pattern(n, i, j, w)?;
        }
        for (&(i, j), ws) in &non_edge_allowed {
            if edges.contains_key(&(i, j)) || edges.contains_key(&(j, i)) {
                return Err(PatternError::BadPair(i, j, n));
            }
            for w in ws {
                check_pattern(n, i, j, w)?;
            }
        }
        Ok(PatternSystem {
            n,
            edges,
            non_edge_allowed,
        })
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), Word> {
        &self.edges
    }

    pub fn non_edges(&self) -> &BTreeMap<(usize, usize), Vec<Word>> {
        &self.non_edge_allowed
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains_key(&(i, j))
    }

    /// Allowed restriction words for the unordered pair {i, j}, or None when
    /// the pair is unconstrained.
    pub fn allowed(&self, i: usize, j: usize) -> Option<Vec<Word>> {
        let mut sets: Vec<Vec<Word>> = Vec::new();
        if let Some(w) = self.edges.get(&(i, j)) {
            sets.push(vec![w.clone()]);
        }
        if let Some(w) = self.edges.get(&(j, i)) {
            sets.push(vec![w.clone()]);
        }
        for key in [(i, j), (j, i)] {
            if let Some(ws) = self.non_edge_allowed.get(&key) {
                sets.push(ws.clone());
            }
        }
        if sets.is_empty() {
            return None;
        }
        let mut acc = sets.pop().unwrap();
        for s in sets {
            acc.retain(|w| s.contains(w));
        }
        Some(acc)
    }

    pub fn to_json(&self) -> Value {
        let pat = |w: &Word| Value::String(w.to_string());
        let mut e = serde_json::Map::new();
        for (&(i, j), w) in &self.edges {
            e.insert(format!("{i},{j}"), pat(w));
        }
        let mut ne = serde_json::Map::new();
        for (&(i, j), ws) in &self.non_edge_allowed {
            ne.insert(
                format!("{i},{j}"),
                Value::Array(ws.iter().map(pat).collect()),
            );
        }
        serde_json::json!({ "n": self.n, "edges": e, "non_edges": ne })
    }

    pub fn from_json(v: &Value) -> Result<PatternSystem, PatternError> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| PatternError::BadJson("missing n".into()))? as usize;
        let parse_key = |k: &str| -> Result<(usize, usize), PatternError> {
            k.split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| PatternError::BadJson(format!("bad pair key {k:?}")))
        };
        let mut edges = BTreeMap::new();
        if let Some(map) = v.get("edges").and_then(Value::as_object) {
            for (k, pv) in map {
                let text = pv
                    .as_str()
                    .ok_or_else(|| PatternError::BadJson(format!("edge {k:?} not a string")))?;
                edges.insert(parse_key(k)?, Word::parse(text)?);
            }
        }
        let mut non_edge_allowed = BTreeMap::new();
        if let Some(map) = v.get("non_edges").and_then(Value::as_object) {
            for (k, av) in map {
                let arr = av
                    .as_array()
                    .ok_or_else(|| PatternError::BadJson(format!("non-edge {k:?} not a list")))?;
                let mut ws = Vec::new();
                for pv in arr {
                    let text = pv.as_str().ok_or_else(|| {
                        PatternError::BadJson(format!("pattern in {k:?} not a string"))
                    })?;
                    ws.push(Word::parse(text)?);
                }
                non_edge_allowed.insert(parse_key(k)?, ws);
            }
        }
        PatternSystem::new(n, edges, non_edge_allowed)
    }
}

fn xp(i: usize, e: usize) -> Word {
    Word(vec![Letter::var(i); e])
}

/// Edge pattern x^p y^p x^q y^q on (x, y) = (x_i, x_j).
fn chain_pattern(i: usize, j: usize, p: usize, q: usize) -> Word {
    xp(i, p).concat(&xp(j, p)).concat(&xp(i, q)).concat(&xp(j, q))
}

/// Edge pattern x^p y^{p+q} x^q on (x, y) = (x_i, x_j).
fn crown_pattern(i: usize, j: usize, p: usize, q: usize) -> Word {
    xp(i, p).concat(&xp(j, p + q)).concat(&xp(i, q))
}

/// The directed n-cycle: edge x_i -> x_{i+1} requiring x^p y^p x^q y^q.
pub fn chain_cycle_system(n: usize, p: usize, q: usize) -> PatternSystem {
    let mut edges = BTreeMap::new();
    for i in 1..=n {
        let j = i % n + 1;
        edges.insert((i, j), chain_pattern(i, j, p, q));
    }
    PatternSystem::new(n, edges, BTreeMap::new()).expect("cycle patterns are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ForbiddenKind {
    Chain,
    Maelstrom,
    Crown,
}

/// The odd-to-even graph: each odd vertex points to both cyclic neighbours.
fn odd_neighbour_edges(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in (1..=n).step_by(2) {
        out.push((i, i % n + 1));
        out.push((i, (i + n - 2) % n + 1));
    }
    out.sort();
    out.dedup();
    out
}

/// The maelstrom or crown system on the odd-to-even graph (n even): edges
/// carry the family's two-variable pattern, every non-edge is confined to
/// the matching allowed set.
pub fn forbidden_system(
    kind: ForbiddenKind,
    n: usize,
    p: usize,
    q: usize,
) -> Result<PatternSystem, PatternError> {
    if n < 4 || n % 2 != 0 {
        return Err(PatternError::BadArity(n));
    }
    let mut edges = BTreeMap::new();
    for (i, j) in odd_neighbour_edges(n) {
        let pat = match kind {
            ForbiddenKind::Maelstrom => chain_pattern(i, j, p, q),
            ForbiddenKind::Crown => crown_pattern(i, j, p, q),
            ForbiddenKind::Chain => return Err(PatternError::BadArity(n)),
        };
        edges.insert((i, j), pat);
    }
    let mut non_edge_allowed = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if edges.contains_key(&(i, j)) || edges.contains_key(&(j, i)) {
                continue;
            }
            let ws = match kind {
                ForbiddenKind::Maelstrom => {
                    vec![crown_pattern(i, j, p, q), crown_pattern(j, i, p, q)]
                }
                ForbiddenKind::Crown => vec![
                    chain_pattern(i, j, p, q),
                    chain_pattern(j, i, p, q),
                    xp(i, p + q).concat(&xp(j, p + q)),
                    xp(j, p + q).concat(&xp(i, p + q)),
                ],
                ForbiddenKind::Chain => unreachable!(),
            };
            non_edge_allowed.insert((i, j), ws);
        }
    }
    PatternSystem::new(n, edges, non_edge_allowed)
}

struct PairConstraint {
    lo: usize,
    hi: usize,
    /// Allowed restrictions as 0/1 sequences, 0 = x_lo.
    patterns: Vec<Vec<u8>>,
}

fn build_constraints(sys: &PatternSystem, profile: &[usize]) -> Option<Vec<PairConstraint>> {
    let mut out = Vec::new();
    for lo in 1..=sys.n {
        for hi in lo + 1..=sys.n {
            let Some(allowed) = sys.allowed(lo, hi) else {
                continue;
            };
            let patterns: Vec<Vec<u8>> = allowed
                .iter()
                .filter(|w| {
                    w.occ(Letter::var(lo)) == profile[lo - 1]
                        && w.occ(Letter::var(hi)) == profile[hi - 1]
                })
                .map(|w| {
                    w.0.iter()
                        .map(|&l| if l == Letter::var(lo) { 0u8 } else { 1u8 })
                        .collect()
                })
                .collect();
            if patterns.is_empty() {
                return None;
            }
            out.push(PairConstraint { lo, hi, patterns });
        }
    }
    Some(out)
}

/// Search for a word with the given occurrence profile realizing the system.
pub fn exists_realizing_word(sys: &PatternSystem, profile: &[usize]) -> Option<Word> {
    exists_realizing_word_from(sys, profile, None)
}

/// Same search with the first letter forced to x_first when given.
pub fn exists_realizing_word_from(
    sys: &PatternSystem,
    profile: &[usize],
    first: Option<usize>,
) -> Option<Word> {
    assert_eq!(profile.len(), sys.n);
    let constraints = build_constraints(sys, profile)?;
    let firsts: Vec<usize> = (1..=sys.n)
        .filter(|&v| profile[v - 1] > 0 && first.map_or(true, |f| f == v))
        .collect();
    firsts.par_iter().find_map_first(|&v| {
        let mut state = SolverState::new(sys.n, profile, &constraints);
        if !state.push(v) {
            return None;
        }
        state.dfs()
    })
}

struct SolverState<'a> {
    n: usize,
    remaining: Vec<usize>,
    word: Vec<usize>,
    total: usize,
    constraints: &'a [PairConstraint],
    /// constraint indices touching each variable
    by_var: Vec<Vec<usize>>,
    /// per constraint: death depth of each pattern, live count, consumed count
    death: Vec<Vec<Option<usize>>>,
    alive: Vec<usize>,
    consumed: Vec<usize>,
}

impl<'a> SolverState<'a> {
    fn new(n: usize, profile: &[usize], constraints: &'a [PairConstraint]) -> SolverState<'a> {
        let mut by_var = vec![Vec::new(); n + 1];
        for (ci, c) in constraints.iter().enumerate() {
            by_var[c.lo].push(ci);
            by_var[c.hi].push(ci);
        }
        SolverState {
            n,
            remaining: profile.to_vec(),
            word: Vec::new(),
            total: profile.iter().sum(),
            constraints,
            by_var,
            death: constraints.iter().map(|c| vec![None; c.patterns.len()]).collect(),
            alive: constraints.iter().map(|c| c.patterns.len()).collect(),
            consumed: vec![0; constraints.len()],
        }
    }

    /// Append variable v, advancing every constraint it touches. Returns
    /// false (after self-undoing) when some constraint loses all patterns.
    fn push(&mut self, v: usize) -> bool {
        let depth = self.word.len();
        let mut touched = Vec::new();
        let mut dead = false;
        for &ci in &self.by_var[v] {
            let c = &self.constraints[ci];
            let sym = if v == c.lo { 0u8 } else { 1u8 };
            let pos = self.consumed[ci];
            for (pi, pat) in c.patterns.iter().enumerate() {
                if self.death[ci][pi].is_none() && pat[pos] != sym {
                    self.death[ci][pi] = Some(depth);
                    self.alive[ci] -= 1;
                }
            }
            self.consumed[ci] += 1;
            touched.push(ci);
            if self.alive[ci] == 0 {
                dead = true;
                break;
            }
        }
        if dead {
            self.undo(&touched, depth);
            return false;
        }
        self.remaining[v - 1] -= 1;
        self.word.push(v);
        true
    }

    fn pop(&mut self) {
        let v = self.word.pop().unwrap();
        self.remaining[v - 1] += 1;
        let depth = self.word.len();
        let touched: Vec<usize> = self.by_var[v].clone();
        self.undo(&touched, depth);
    }

    fn undo(&mut self, touched: &[usize], depth: usize) {
        for &ci in touched {
            self.consumed[ci] -= 1;
            for d in self.death[ci].iter_mut() {
                if *d == Some(depth) {
                    *d = None;
                    self.alive[ci] += 1;
                }
            }
        }
    }

    fn dfs(&mut self) -> Option<Word> {
        if self.word.len() == self.total {
            return Some(Word(self.word.iter().map(|&v| Letter::var(v)).collect()));
        }
        for v in 1..=self.n {
            if self.remaining[v - 1] == 0 {
                continue;
            }
            if self.push(v) {
                if let Some(found) = self.dfs() {
                    return Some(found);
                }
                self.pop();
            }
        }
        None
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub kind: ForbiddenKind,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// One entry per candidate first variable, each ending in a contradiction.
    pub cases: Vec<String>,
    /// Every first-variable case was contradicted.
    pub ok: bool,
}

/// Replays the finite first-letter case analysis: a word realizing the
/// system must start with some variable, and each choice is refuted either
/// directly (some incident pattern starts with the other variable) or by an
/// exhaustive search over the five-variable cyclic window around the choice.
pub fn first_letter_certificate(
    kind: ForbiddenKind,
    n: usize,
    p: usize,
    q: usize,
) -> Result<Certificate, PatternError> {
    let sys = match kind {
        ForbiddenKind::Chain => {
            if n < 4 {
                return Err(PatternError::BadArity(n));
            }
            chain_cycle_system(n, p, q)
        }
        ForbiddenKind::Maelstrom => forbidden_system(kind, n, p, q)?,
        ForbiddenKind::Crown => {
            if n <= 4 {
                return Err(PatternError::BadArity(n));
            }
            forbidden_system(kind, n, p, q)?
        }
    };
    let mut cases = Vec::new();
    let mut ok = true;
    for i in 1..=n {
        match refute_first(&sys, i, p, q) {
            Some(line) => cases.push(format!("t begins with x{i}: {line}")),
            None => {
                ok = false;
                cases.push(format!("t begins with x{i}: no contradiction found"));
            }
        }
    }
    Ok(Certificate {
        kind,
        n,
        p,
        q,
        cases,
        ok,
    })
}

/// Refute "some realizing word begins with x_i", returning the reason.
fn refute_first(sys: &PatternSystem, i: usize, p: usize, q: usize) -> Option<String> {
    let xi = Letter::var(i);
    // direct refutation: a constrained pair at i where no allowed
    // restriction begins with x_i
    for u in 1..=sys.n {
        if u == i {
            continue;
        }
        if let Some(allowed) = sys.allowed(i, u) {
            if allowed.iter().all(|w| w.0.first() != Some(&xi)) {
                let shown: Vec<String> = allowed.iter().map(|w| w.to_string()).collect();
                return Some(format!(
                    "t[x{i},x{u}] must be one of {{{}}}, none of which begins with x{i}",
                    shown.join(", ")
                ));
            }
        }
    }
    // window refutation: no word over the cyclic 5-window around x_i can
    // realize the induced constraints while starting with x_i
    let mut window: Vec<usize> = [n_off(sys.n, i, -2), n_off(sys.n, i, -1), i, n_off(sys.n, i, 1), n_off(sys.n, i, 2)]
        .into();
    window.sort();
    window.dedup();
    let m = window.len();
    let relabel: BTreeMap<usize, usize> = window.iter().enumerate().map(|(k, &v)| (v, k + 1)).collect();
    let map_word = |w: &Word| -> Word {
        Word(
            w.0.iter()
                .map(|l| Letter::var(relabel[&l.var_index().unwrap()]))
                .collect(),
        )
    };
    let mut edges = BTreeMap::new();
    let mut non_edges = BTreeMap::new();
    for (a_idx, &a) in window.iter().enumerate() {
        for &b in &window[a_idx + 1..] {
            if let Some(w) = sys.edges().get(&(a, b)) {
                edges.insert((relabel[&a], relabel[&b]), map_word(w));
            } else if let Some(w) = sys.edges().get(&(b, a)) {
                edges.insert((relabel[&b], relabel[&a]), map_word(w));
            } else if let Some(ws) = sys.allowed(a, b) {
                non_edges.insert(
                    (relabel[&a], relabel[&b]),
                    ws.iter().map(&map_word).collect(),
                );
            }
        }
    }
    let sub = PatternSystem::new(m, edges, non_edges).expect("induced system is valid");
    let profile = vec![p + q; m];
    match exists_realizing_word_from(&sub, &profile, Some(relabel[&i])) {
        None => Some(format!(
            "exhausting all arrangements of the window {{{}}} (each variable {} times) starting with x{i} violates some pair restriction",
            window
                .iter()
                .map(|v| format!("x{v}"))
                .collect::<Vec<_>>()
                .join(", "),
            p + q
        )),
        Some(w) => {
            let back: Vec<Letter> = window.iter().map(|&v| Letter::var(v)).collect();
            let shown = Word(w.0.iter().map(|l| back[l.var_index().unwrap() - 1]).collect());
            Some(format!("UNREFUTED: window word {shown} realizes the induced constraints"))
        }
    }
    .filter(|s| !s.starts_with("UNREFUTED"))
}

fn n_off(n: usize, i: usize, d: isize) -> usize {
    let v = (i as isize - 1 + d).rem_euclid(n as isize);
    v as usize + 1
}
