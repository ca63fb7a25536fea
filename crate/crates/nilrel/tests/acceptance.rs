//! End-to-end acceptance gate: one criterion per test, one pass/fail line
//! each. Budgets are generous for a desk machine; every verdict is exact.

use nilrel::asabtb::{equiv_asabtb, normal_form, reconstruct_term_asabtb};
use nilrel::families::{
    alternating_chain, build_family_scheme, check_theorem_conditions, Family,
};
use nilrel::identities::{satisfies_bool, SearchBounds};
use nilrel::impossibility::{
    chain_cycle_system, exists_realizing_word, first_letter_certificate, forbidden_system,
    ForbiddenKind, PatternSystem,
};
use nilrel::mak::{equiv_mak, reconstruct_term_mak};
use nilrel::monoid::{build_m, build_m_ak, direct_product};
use nilrel::schemes::{
    check_consistency, check_dependency, comes_from_term, Scheme, SearchConfig,
};
use nilrel::words::{w, Letter, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;

fn ab() -> [Letter; 2] {
    [Letter::intern("a"), Letter::intern("b")]
}

fn verdict(name: &str, ok: bool, started: Instant) {
    println!(
        "[{}] {}  ({:.1}s)",
        name,
        if ok { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    assert!(ok, "{name} failed");
}

/// All words over the given letters with lengths 1..=max_len, plus the empty
/// word.
fn all_words(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut corpus = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|u| letters.iter().map(|&x| u.concat(&Word(vec![x]))))
            .collect();
        corpus.extend(layer.iter().cloned());
    }
    corpus
}

/// All distinct arrangements of a letter multiset.
fn arrangements(multiset: &[Letter]) -> Vec<Word> {
    fn rec(remaining: &mut BTreeMap<Letter, usize>, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if remaining.values().all(|&c| c == 0) {
            out.push(Word(cur.clone()));
            return;
        }
        let choices: Vec<Letter> = remaining
            .iter()
            .filter(|&(_, &c)| c > 0)
            .map(|(&l, _)| l)
            .collect();
        for l in choices {
            *remaining.get_mut(&l).unwrap() -= 1;
            cur.push(l);
            rec(remaining, cur, out);
            cur.pop();
            *remaining.get_mut(&l).unwrap() += 1;
        }
    }
    let mut remaining: BTreeMap<Letter, usize> = BTreeMap::new();
    for &l in multiset {
        *remaining.entry(l).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    rec(&mut remaining, &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_01_monoid_sizes() {
    let t = Instant::now();
    let ok = build_m(&[w("abab")]).unwrap().size() == 9
        && build_m(&[w("abba")]).unwrap().size() == 10
        && build_m(&[w("abab"), w("aabb")]).unwrap().size() == 14
        && build_m_ak(&ab(), 2).size() == 20
        && build_m(&[w("asabtb")]).unwrap().size() == 21;
    verdict("criterion 1: monoid sizes 9/10/14/20/21", ok, t);
}

#[test]
fn criterion_02_chain_pipeline() {
    let t = Instant::now();
    let m = build_m(&[w("abab")]).unwrap();
    let cond = check_theorem_conditions(
        Family::Chain,
        &m,
        1,
        1,
        &[(2, 2), (2, 3), (3, 2)],
        SearchBounds::default(),
    )
    .unwrap();
    let alpha_ok = cond.alpha_beta.map(|x| x.alpha) == Some(3);
    let f = build_family_scheme(Family::Chain, 5, 1, 1).unwrap();
    let dep = check_dependency(&m, &f);
    let con = check_consistency(&m, &f);
    let search = comes_from_term(&m, &f, SearchConfig::default());
    let cert = first_letter_certificate(ForbiddenKind::Chain, 5, 1, 1).unwrap();
    let ok = cond.all_ok
        && alpha_ok
        && dep.ok
        && con.ok
        && con.checked == 100
        && search.term.is_none()
        && search.exhausted
        && cert.ok;
    verdict("criterion 2: chain pipeline at M(abab), n=5", ok, t);
}

#[test]
fn criterion_03_crown_pipeline() {
    let t = Instant::now();
    let m = build_m(&[w("abba")]).unwrap();
    let cond = check_theorem_conditions(
        Family::Crown,
        &m,
        1,
        1,
        &[(2, 2), (2, 3), (3, 2)],
        SearchBounds::default(),
    )
    .unwrap();
    let f = build_family_scheme(Family::Crown, 6, 1, 1).unwrap();
    let dep = check_dependency(&m, &f);
    let con = check_consistency(&m, &f);
    let search = comes_from_term(&m, &f, SearchConfig::default());
    let ok = cond.all_ok
        && cond.island_ok == Some(true)
        && dep.ok
        && con.ok
        && search.term.is_none()
        && search.exhausted;
    verdict("criterion 3: crown pipeline at M(abba), n=6", ok, t);
}

#[test]
fn criterion_04_maelstrom_pipeline() {
    let t = Instant::now();
    let m = build_m(&[w("abab"), w("aabb")]).unwrap();
    let cond = check_theorem_conditions(
        Family::Maelstrom,
        &m,
        1,
        1,
        &[(2, 2), (2, 4), (4, 2)],
        SearchBounds::default(),
    )
    .unwrap();
    let f = build_family_scheme(Family::Maelstrom, 6, 1, 1).unwrap();
    let dep = check_dependency(&m, &f);
    let con = check_consistency(&m, &f);
    let search = comes_from_term(&m, &f, SearchConfig::default());
    let ok = cond.all_ok
        && cond.island_ok == Some(true)
        && dep.ok
        && con.ok
        && search.term.is_none()
        && search.exhausted;
    verdict("criterion 4: maelstrom pipeline at M(abab,aabb), n=6", ok, t);
}

#[test]
fn criterion_05_alternating_chain() {
    let t = Instant::now();
    let rs = alternating_chain(2, 5).unwrap();
    let r = &rs[0];
    let ok = r.kappa == 2
        && r.limited_ok
        && r.valid_for_extended
        && r.valid_for_limited
        && r.term_over_extended.is_none()
        && r.extended_search_exhausted
        && r.term_over_limited.is_some();
    verdict("criterion 5: alternating chain at kappa=2", ok, t);
}

#[test]
fn criterion_06_limited_words_oracle() {
    let t = Instant::now();
    let m = build_m_ak(&ab(), 2);
    let vars = [Letter::var(1), Letter::var(2), Letter::var(3)];
    let corpus = all_words(&vars, 6);
    let disagreements: usize = corpus
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            corpus[i..]
                .iter()
                .filter(|v| equiv_mak(u, v, 2) != satisfies_bool(&m, u, v))
                .count()
        })
        .sum();
    let pairs = corpus.len() * (corpus.len() + 1) / 2;
    println!("  checked {pairs} pairs, {disagreements} disagreements");
    verdict("criterion 6: fast theory vs brute force", disagreements == 0, t);
}

#[test]
fn criterion_07_limited_words_roundtrip() {
    let t = Instant::now();
    let m = build_m_ak(&ab(), 2);
    let n = 22;
    let failures: usize = (0..100u64)
        .into_par_iter()
        .filter(|&round| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + round);
            let mut letters: Vec<Letter> = Vec::new();
            for i in 1..=n {
                let occ = *[1usize, 1, 2, 2, 2, 3, 4].choose(&mut rng).unwrap();
                letters.extend(std::iter::repeat(Letter::var(i)).take(occ));
            }
            letters.shuffle(&mut rng);
            let u = Word(letters);
            let f = Scheme::from_term(&u, n).unwrap();
            match reconstruct_term_mak(&f, 2, &m) {
                Ok(r) => !equiv_mak(&Word::parse(&r.word).unwrap(), &u, 2),
                Err(_) => true,
            }
        })
        .count();
    println!("  100 rounds at n={n}, {failures} failures");
    verdict("criterion 7: reconstruction round-trip 100/100", failures == 0, t);
}

#[test]
fn criterion_08_asabtb_suite() {
    let t = Instant::now();
    let m = nilrel::asabtb::asabtb_monoid();
    let x = Letter::intern("x");
    let y = Letter::intern("y");
    let z = Letter::intern("z");
    let v4 = Letter::intern("v");
    let s = Letter::intern("s");
    let tt = Letter::intern("t");

    // exhaustive corpus: every arrangement of two doubled letters and a
    // two-letter spine; all pairs against the brute-force oracle
    let ex = arrangements(&[x, x, y, y, s, tt]);
    let ex_fail: usize = ex
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            let nu = normal_form(u);
            let mut bad = 0;
            if !satisfies_bool(m, u, &nu) {
                bad += 1;
            }
            for v in &ex[i..] {
                let sat = satisfies_bool(m, u, v);
                if equiv_asabtb(u, v) != sat || (normal_form(u) == normal_form(v)) != sat {
                    bad += 1;
                }
            }
            bad
        })
        .sum();

    // wider soundness sweep: three doubled letters, spine of two
    let ex2 = arrangements(&[x, x, y, y, z, z, s, tt]);
    let ex2_fail: usize = ex2
        .par_iter()
        .filter(|u| !satisfies_bool(m, u, &normal_form(u)))
        .count();

    // seeded random corpus with six-letter content: the 5-support reduction
    // takes a genuinely different path from the oracle
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ten_letter: Vec<Word> = (0..200)
        .map(|_| {
            let mut ls = vec![x, x, y, y, z, z, v4, v4, s, tt];
            ls.shuffle(&mut rng);
            Word(ls)
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for _ in 0..10_000 {
        pairs.push((rng.gen_range(0..ten_letter.len()), rng.gen_range(0..ten_letter.len())));
    }
    let rand_fail: usize = pairs
        .par_iter()
        .filter(|&&(i, j)| {
            let (u, v) = (&ten_letter[i], &ten_letter[j]);
            let sat = satisfies_bool(m, u, v);
            equiv_asabtb(u, v) != sat || (normal_form(u) == normal_form(v)) != sat
        })
        .count();

    // 100 seeded scheme round-trips at n = 23
    let rt_fail: usize = (0..100u64)
        .into_par_iter()
        .filter(|&round| {
            let mut rng = ChaCha8Rng::seed_from_u64(2000 + round);
            let u = random_structured_word(&mut rng, 23);
            let f = Scheme::from_term(&u, 23).unwrap();
            match reconstruct_term_asabtb(&f) {
                Ok(r) => !equiv_asabtb(&Word::parse(&r.word).unwrap(), &u),
                Err(_) => true,
            }
        })
        .count();

    println!(
        "  exhaustive failures {ex_fail}+{ex2_fail}, random failures {rand_fail}, round-trip failures {rt_fail}"
    );
    verdict(
        "criterion 8: five-support equivalence, normal form, reconstruction",
        ex_fail + ex2_fail + rand_fail + rt_fail == 0,
        t,
    );
}

#[test]
fn criterion_09_pattern_solver() {
    let t = Instant::now();
    let mut ok = true;
    for n in [4usize, 5, 6] {
        for (p, q) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
            let sys = chain_cycle_system(n, p, q);
            let profile = vec![p + q; n];
            ok &= exists_realizing_word(&sys, &profile).is_none();
            let edges: Vec<(usize, usize)> = sys.edges().keys().copied().collect();
            for drop in &edges {
                let mut reduced = sys.edges().clone();
                reduced.remove(drop);
                let path = PatternSystem::new(n, reduced, BTreeMap::new()).unwrap();
                ok &= exists_realizing_word(&path, &profile).is_some();
            }
        }
    }
    let mael = forbidden_system(ForbiddenKind::Maelstrom, 6, 1, 1).unwrap();
    ok &= exists_realizing_word(&mael, &[2; 6]).is_none();
    let crown = forbidden_system(ForbiddenKind::Crown, 6, 1, 1).unwrap();
    ok &= exists_realizing_word(&crown, &[2; 6]).is_none();
    verdict("criterion 9: pattern systems, cycles and figures", ok, t);
}

#[test]
fn criterion_10_product_identities() {
    let t = Instant::now();
    let m1 = build_m(&[w("abba")]).unwrap();
    let m2 = build_m(&[w("abab"), w("aabb")]).unwrap();
    let prod = direct_product(&m1, &m2);
    let mak = build_m_ak(&ab(), 2);
    let vars = [Letter::var(1), Letter::var(2), Letter::var(3)];
    let corpus = all_words(&vars, 6);
    let disagreements: usize = corpus
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            corpus[i..]
                .iter()
                .filter(|v| satisfies_bool(&prod, u, v) != satisfies_bool(&mak, u, v))
                .count()
        })
        .sum();
    println!("  {disagreements} disagreements across the corpus");
    verdict(
        "criterion 10: product vs limited-words identity agreement",
        disagreements == 0,
        t,
    );
}

fn random_structured_word(rng: &mut ChaCha8Rng, n: usize) -> Word {
    let mut vars: Vec<usize> = (1..=n).collect();
    vars.shuffle(rng);
    let spine_len = rng.gen_range(n / 3..n / 2);
    let prim_len = rng.gen_range(1..4usize);
    let spine: Vec<usize> = vars[..spine_len].to_vec();
    let prim: Vec<usize> = vars[spine_len..spine_len + prim_len].to_vec();
    let doubled: Vec<usize> = vars[spine_len + prim_len..].to_vec();
    let mut slots: Vec<Vec<Letter>> = vec![Vec::new(); spine_len + 1];
    for &xv in &doubled {
        let a = rng.gen_range(0..slots.len());
        let b = rng.gen_range(0..slots.len());
        slots[a.min(b)].push(Letter::var(xv));
        slots[a.max(b)].push(Letter::var(xv));
    }
    for sl in &mut slots {
        sl.shuffle(rng);
    }
    let mut out: Vec<Letter> = Vec::new();
    for (g, slot) in slots.iter().enumerate() {
        out.extend(slot);
        if g < spine_len {
            out.push(Letter::var(spine[g]));
        }
    }
    for &xv in &prim {
        let k = rng.gen_range(2..4usize);
        out.extend(std::iter::repeat(Letter::var(xv)).take(k));
    }
    Word(out)
}
