//! Three families of words over x1..xn, their slices, and the term schemes
//! they generate.

use crate::identities::{
    is_island, is_isoterm, minimal_a, satisfies_bool, AlphaBeta, AlphaBetaCaps, SearchBounds,
};
use crate::monoid::{build_m_ak, build_m_ak_plus, FiniteMonoid};
use crate::schemes::{
    check_consistency, check_dependency, comes_from_term, Scheme, SchemeError, SearchConfig,
};
use crate::words::{Letter, Word};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family parameter out of range: {0}")]
    BadParameter(String),
    #[error("no insertion point: some variable lacks {0} leading occurrences")]
    NoInsertionPoint(usize),
}

/// Which word family a scheme is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    Chain,
    Maelstrom,
    Crown,
}

fn pow(i: usize, e: usize) -> Word {
    Word(vec![Letter::var(i); e])
}

/// Chain word: x1^p x2^p x1^q x3^p x2^q ... xn^p x_{n-1}^q xn^q.
pub fn chain(n: usize, p: usize, q: usize) -> Result<Word, FamilyError> {
    check_pq(p, q)?;
    if n == 0 {
        return Err(FamilyError::BadParameter("chain needs n >= 1".into()));
    }
    let mut out = pow(1, p);
    for k in 2..=n {
        out = out.concat(&pow(k, p)).concat(&pow(k - 1, q));
    }
    Ok(out.concat(&pow(n, q)))
}

/// Maelstrom word (n even):
/// x1^p x3^p x2^p x5^p x4^p ... x_{n-1}^p x_{n-2}^p xn^p
///   x_{n-1}^q xn^q x_{n-3}^q x_{n-2}^q ... x1^q x2^q.
pub fn maelstrom(n: usize, p: usize, q: usize) -> Result<Word, FamilyError> {
    check_pq(p, q)?;
    if n < 2 || n % 2 != 0 {
        return Err(FamilyError::BadParameter("maelstrom needs even n >= 2".into()));
    }
    let mut out = pow(1, p);
    for k in 1..n / 2 {
        out = out.concat(&pow(2 * k + 1, p)).concat(&pow(2 * k, p));
    }
    out = out.concat(&pow(n, p));
    for k in 0..n / 2 {
        out = out
            .concat(&pow(n - (2 * k + 1), q))
            .concat(&pow(n - 2 * k, q));
    }
    Ok(out)
}

/// Crown word. Even n:
/// x1^p (prod_{k=1}^{n/2-1} x_{2k+1}^p x_{2k}^{p+q} x_{2k-1}^q) xn^{p+q} x_{n-1}^q.
/// Odd n:
/// x1^p (prod_{k=1}^{(n-1)/2} x_{2k+1}^p x_{2k}^{p+q} x_{2k-1}^q) xn^q.
pub fn crown(n: usize, p: usize, q: usize) -> Result<Word, FamilyError> {
    check_pq(p, q)?;
    if n < 2 {
        return Err(FamilyError::BadParameter("crown needs n >= 2".into()));
    }
    let mut out = pow(1, p);
    if n % 2 == 0 {
        for k in 1..n / 2 {
            out = out
                .concat(&pow(2 * k + 1, p))
                .concat(&pow(2 * k, p + q))
                .concat(&pow(2 * k - 1, q));
        }
        Ok(out.concat(&pow(n, p + q)).concat(&pow(n - 1, q)))
    } else {
        for k in 1..=(n - 1) / 2 {
            out = out
                .concat(&pow(2 * k + 1, p))
                .concat(&pow(2 * k, p + q))
                .concat(&pow(2 * k - 1, q));
        }
        Ok(out.concat(&pow(n, q)))
    }
}

fn check_pq(p: usize, q: usize) -> Result<(), FamilyError> {
    if p == 0 || q == 0 {
        return Err(FamilyError::BadParameter("p, q must be >= 1".into()));
    }
    Ok(())
}

pub fn family_word(f: Family, n: usize, p: usize, q: usize) -> Result<Word, FamilyError> {
    match f {
        Family::Chain => chain(n, p, q),
        Family::Maelstrom => maelstrom(n, p, q),
        Family::Crown => crown(n, p, q),
    }
}

/// Insert `w` into `m` at the unique point after which every variable of `m`
/// has exactly `p` occurrences; for maelstrom words and their slices this is
/// the seam between the p-block and the q-block.
pub fn odot(m: &Word, w: &Word, p: usize) -> Result<Word, FamilyError> {
    if m.is_empty() {
        return Ok(w.clone());
    }
    let vars = m.content();
    let mut seen: HashMap<Letter, usize> = HashMap::new();
    for (s, &l) in m.0.iter().enumerate() {
        if vars.iter().all(|v| seen.get(v).copied().unwrap_or(0) == p) {
            let mut out = Word(m.0[..s].to_vec());
            out = out.concat(w);
            out.0.extend_from_slice(&m.0[s..]);
            return Ok(out);
        }
        *seen.entry(l).or_insert(0) += 1;
    }
    if vars.iter().all(|v| seen.get(v).copied().unwrap_or(0) == p) {
        return Ok(m.concat(w));
    }
    Err(FamilyError::NoInsertionPoint(p))
}

/// Rename the variables of `word` (over x1..xn, in index order) along the
/// listed target letters, then keep only the letters in `keep`.
fn rename_and_keep(word: &Word, targets: &[Letter], keep: &[Letter]) -> Word {
    let mut sigma: HashMap<Letter, Word> = HashMap::new();
    for (m, &t) in targets.iter().enumerate() {
        let out = if keep.contains(&t) {
            Word(vec![t])
        } else {
            Word::empty()
        };
        sigma.insert(Letter::var(m + 1), out);
    }
    word.substitute(&sigma).expect("targets cover all variables")
}

/// Contiguous slice (i;j) of an n-variable family word: the restriction to
/// {x_i, ..., x_j}. The empty range j = i - 1 gives the empty word.
pub fn family_slice(
    f: Family,
    n: usize,
    p: usize,
    q: usize,
    i: usize,
    j: usize,
) -> Result<Word, FamilyError> {
    if j + 1 == i {
        return Ok(Word::empty());
    }
    if !(1 <= i && i <= j && j <= n) {
        return Err(FamilyError::BadParameter(format!("bad slice ({i};{j}) for n={n}")));
    }
    let word = family_word(f, n, p, q)?;
    let keep: Vec<Letter> = (i..=j).map(Letter::var).collect();
    Ok(word.restrict_to(&keep))
}

/// Wrap-around slice (i;n;j) of an n-variable family word: the variables
/// x_i..xn followed cyclically by x_1..x_j. Conventions: (i;n;0) is the plain
/// slice (i;n), (n+1;n;j) is the plain slice (1;j), and (n+1;n;0) is empty.
pub fn family_wrap_slice(
    f: Family,
    n: usize,
    p: usize,
    q: usize,
    i: usize,
    j: usize,
) -> Result<Word, FamilyError> {
    if i == n + 1 {
        return family_slice(f, n, p, q, 1, j);
    }
    if j == 0 {
        return family_slice(f, n, p, q, i, n);
    }
    if !(1 <= i && i <= n && j < i) {
        return Err(FamilyError::BadParameter(format!(
            "bad wrap slice ({i};{n};{j})"
        )));
    }
    let keep: Vec<Letter> = (i..=n).chain(1..=j).map(Letter::var).collect();
    let cyc: Vec<Letter> = (i..=n).chain(1..i).map(Letter::var).collect();
    match f {
        Family::Chain => {
            // the chain has no wrap-around form; callers use theta instead
            Err(FamilyError::BadParameter("chain has no wrap slice".into()))
        }
        Family::Maelstrom => {
            if i % 2 == 1 {
                Ok(rename_and_keep(&maelstrom(n, p, q)?, &cyc, &keep))
            } else {
                // even starting index: pad front and back with fresh variables
                let y = Letter::intern("@wrap_y");
                let z = Letter::intern("@wrap_z");
                let mut targets = vec![y];
                targets.extend(&cyc);
                targets.push(z);
                Ok(rename_and_keep(&maelstrom(n + 2, p, q)?, &targets, &keep))
            }
        }
        Family::Crown => {
            if i % 2 == 1 {
                Ok(rename_and_keep(&crown(n, p, q)?, &cyc, &keep))
            } else {
                let y = Letter::intern("@wrap_y");
                let mut targets = vec![y];
                targets.extend(&cyc);
                Ok(rename_and_keep(&crown(n + 1, p, q)?, &targets, &keep))
            }
        }
    }
}

/// The cyclic substitution theta_ij for the chain scheme: x1 -> x_j and the
/// remaining chain positions walk x_{i+1}, ..., xn, x1, ..., x_{i-1}.
fn theta(n: usize, i: usize, j: usize) -> HashMap<Letter, Word> {
    let mut sigma = HashMap::new();
    sigma.insert(Letter::var(1), Word(vec![Letter::var(j)]));
    for m in 2..=n {
        let target = (i + m - 2) % n + 1;
        sigma.insert(Letter::var(m), Word(vec![Letter::var(target)]));
    }
    sigma
}

/// Build the n-variable scheme of the family with parameters p, q.
pub fn build_family_scheme(
    f: Family,
    n: usize,
    p: usize,
    q: usize,
) -> Result<Scheme, SchemeError> {
    let bad = |e: FamilyError| SchemeError::BadFamily(e.to_string());
    match f {
        Family::Chain => {
            let c = chain(n, p, q).map_err(bad)?;
            let mut terms = std::collections::BTreeMap::new();
            for i in 1..=n {
                for j in i + 1..=n {
                    let t = c.substitute(&theta(n, i, j)).expect("theta is total");
                    terms.insert((i, j), t);
                }
            }
            Scheme::new(n, terms)
        }
        Family::Maelstrom | Family::Crown => {
            if f == Family::Maelstrom && (n < 4 || n % 2 != 0) {
                return Err(SchemeError::BadFamily("maelstrom scheme needs even n >= 4".into()));
            }
            let mut terms = std::collections::BTreeMap::new();
            for i in 1..=n {
                for j in i + 1..=n {
                    let head = pow(j, 2 * (p + q));
                    let outer = family_wrap_slice(f, n, p, q, j + 1, i - 1).map_err(bad)?;
                    let inner = family_slice(f, n, p, q, i + 1, j - 1).map_err(bad)?;
                    let body = match f {
                        Family::Maelstrom => odot(&outer, &inner, p).map_err(bad)?,
                        Family::Crown => outer.concat(&inner),
                        Family::Chain => unreachable!(),
                    };
                    terms.insert((i, j), head.concat(&body));
                }
            }
            Scheme::new(n, terms)
        }
    }
}

/// Do u and v commute letter-for-letter in the free monoid?
pub fn free_commute(u: &Word, v: &Word) -> bool {
    u.concat(v) == v.concat(u)
}

/// A disjoint-variable copy of `u`: shift every x_i to x_{i+offset}.
pub fn shift_vars(u: &Word, offset: usize) -> Word {
    Word(
        u.0.iter()
            .map(|l| match l.var_index() {
                Some(i) => Letter::var(i + offset),
                None => *l,
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub family: Family,
    pub p: usize,
    pub q: usize,
    /// disjoint-copy commuting identities checked, as (n, m) sizes
    pub commuting_checked: Vec<(usize, usize)>,
    pub commuting_ok: bool,
    pub commuting_failure: Option<(usize, usize)>,
    pub alpha_beta: Option<AlphaBeta>,
    pub alpha_small_enough: bool,
    pub isoterm_ok: bool,
    pub isoterm_bounded_only: bool,
    pub island_ok: Option<bool>,
    pub island_bounded_only: Option<bool>,
    pub all_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlternatingChainReport {
    pub kappa: usize,
    pub n: usize,
    /// The generating chain word uses each variable at most kappa + 1 times.
    pub limited_ok: bool,
    /// Dependency and consistency over the limited-words monoid extended by
    /// a^kappa b^kappa ab.
    pub valid_for_extended: bool,
    /// Dependency and consistency over the plain limited-words monoid.
    pub valid_for_limited: bool,
    pub term_over_extended: Option<String>,
    pub extended_search_exhausted: bool,
    pub term_over_limited: Option<String>,
}

/// For each kappa, the chain word C_{n,kappa,1} gives one scheme that is
/// valid both for the limited-words monoid and for its extension by
/// a^kappa b^kappa ab, yet comes from a term only over the former.
pub fn alternating_chain(kappa_max: usize, n: usize) -> Result<Vec<AlternatingChainReport>, SchemeError> {
    let a = Letter::intern("a");
    let b = Letter::intern("b");
    let mut out = Vec::new();
    for kappa in 2..=kappa_max {
        let word = chain(n, kappa, 1).map_err(|e| SchemeError::BadFamily(e.to_string()))?;
        let limited_ok = word.content().iter().all(|&l| word.occ(l) <= kappa + 1);
        let scheme = build_family_scheme(Family::Chain, n, kappa, 1)?;
        let extra = Word(vec![a; kappa])
            .concat(&Word(vec![b; kappa]))
            .concat(&Word(vec![a, b]));
        let ext = build_m_ak_plus(&[a, b], kappa, &[extra]).expect("extra word is non-empty");
        let lim = build_m_ak(&[a, b], kappa);
        let valid = |m: &FiniteMonoid| {
            check_dependency(m, &scheme).ok && check_consistency(m, &scheme).ok
        };
        let valid_for_extended = valid(&ext);
        let valid_for_limited = valid(&lim);
        let ext_search = comes_from_term(&ext, &scheme, SearchConfig::default());
        let lim_search = comes_from_term(&lim, &scheme, SearchConfig::default());
        out.push(AlternatingChainReport {
            kappa,
            n,
            limited_ok,
            valid_for_extended,
            valid_for_limited,
            term_over_extended: ext_search.term,
            extended_search_exhausted: ext_search.exhausted,
            term_over_limited: lim_search.term,
        });
    }
    Ok(out)
}

/// Check the sufficient conditions under which the family yields schemes over
/// `m` for every n: the commuting law for disjoint copies (bounded evidence,
/// over the listed sizes), a small enough power/shuffling law, the two-variable
/// pattern being an isoterm, and (maelstrom, crown) an island condition.
pub fn check_theorem_conditions(
    f: Family,
    m: &FiniteMonoid,
    p: usize,
    q: usize,
    sizes: &[(usize, usize)],
    bounds: SearchBounds,
) -> Result<ConditionReport, FamilyError> {
    let x = Letter::intern("x");
    let y = Letter::intern("y");
    let xw = |e: usize| Word(vec![x; e]);
    let yw = |e: usize| Word(vec![y; e]);

    let mut commuting_ok = true;
    let mut commuting_failure = None;
    let mut commuting_checked = Vec::new();
    for &(n, mm) in sizes {
        let u = family_word(f, n, p, q)?;
        let v = shift_vars(&family_word(f, mm, p, q)?, n);
        let (lhs, rhs) = match f {
            Family::Maelstrom => (odot(&u, &v, p)?, odot(&v, &u, p)?),
            _ => (u.concat(&v), v.concat(&u)),
        };
        commuting_checked.push((n, mm));
        if !satisfies_bool(m, &lhs, &rhs) {
            commuting_ok = false;
            commuting_failure = Some((n, mm));
            break;
        }
    }

    let caps = AlphaBetaCaps {
        alpha_max: 2 * (p + q),
        beta_max: AlphaBetaCaps::default().beta_max,
    };
    let alpha_beta = minimal_a(m, caps);
    let alpha_small_enough = alpha_beta.is_some();

    let iso_word = match f {
        Family::Chain | Family::Maelstrom => xw(p).concat(&yw(p)).concat(&xw(q)).concat(&yw(q)),
        Family::Crown => xw(p).concat(&yw(p + q)).concat(&xw(q)),
    };
    let iso = is_isoterm(m, &iso_word, bounds);

    let (island_ok, island_bounded_only) = match f {
        Family::Chain => (None, None),
        Family::Maelstrom => {
            let class = [
                xw(p).concat(&yw(p + q)).concat(&xw(q)),
                yw(p).concat(&xw(p + q)).concat(&yw(q)),
            ];
            let r = is_island(m, &class, bounds);
            (Some(r.verdict), Some(r.bounded_only))
        }
        Family::Crown => {
            let class = [
                xw(p).concat(&yw(p)).concat(&xw(q)).concat(&yw(q)),
                yw(p).concat(&xw(p)).concat(&yw(q)).concat(&xw(q)),
                xw(p + q).concat(&yw(p + q)),
                yw(p + q).concat(&xw(p + q)),
            ];
            let r = is_island(m, &class, bounds);
            (Some(r.verdict), Some(r.bounded_only))
        }
    };

    let all_ok = commuting_ok
        && alpha_small_enough
        && iso.verdict
        && island_ok.unwrap_or(true);
    Ok(ConditionReport {
        family: f,
        p,
        q,
        commuting_checked,
        commuting_ok,
        commuting_failure,
        alpha_beta,
        alpha_small_enough,
        isoterm_ok: iso.verdict,
        isoterm_bounded_only: iso.bounded_only,
        island_ok,
        island_bounded_only,
        all_ok,
    })
}
