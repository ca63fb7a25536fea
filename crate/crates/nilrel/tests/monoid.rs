use nilrel::monoid::*;
use nilrel::words::{w, Letter, Word};

fn letters(s: &str) -> Vec<Letter> {
    s.chars().map(|c| Letter::intern(&c.to_string())).collect()
}

#[test]
fn rees_quotient_sizes() {
    assert_eq!(build_m(&[w("abab")]).unwrap().size(), 9);
    assert_eq!(build_m(&[w("abba")]).unwrap().size(), 10);
    assert_eq!(build_m(&[w("abab"), w("aabb")]).unwrap().size(), 14);
    assert_eq!(build_m(&[w("asabtb")]).unwrap().size(), 21);
}

#[test]
fn rees_products() {
    let m = build_m(&[w("abab")]).unwrap();
    let ab = m.elem_of_word(&w("ab")).unwrap();
    let a = m.elem_of_word(&w("a")).unwrap();
    assert_eq!(m.mul(ab, ab), m.elem_of_word(&w("abab")).unwrap());
    assert_eq!(m.mul(a, a), m.zero.unwrap());
    let one = m.identity.unwrap();
    for x in 0..m.size() as u32 {
        assert_eq!(m.mul(one, x), x);
        assert_eq!(m.mul(x, one), x);
        assert_eq!(m.mul(m.zero.unwrap(), x), m.zero.unwrap());
        assert_eq!(m.mul(x, m.zero.unwrap()), m.zero.unwrap());
    }
}

#[test]
fn rejects_bad_word_sets() {
    assert!(build_m(&[]).is_err());
    assert!(build_m(&[Word::empty()]).is_err());
}

#[test]
fn semigroup_variant() {
    let s = build_s(&[w("abab")]).unwrap();
    assert_eq!(s.size(), 8);
    assert!(s.identity.is_none());
    let ab = s.elem_of_word(&w("ab")).unwrap();
    assert_eq!(s.mul(ab, ab), s.elem_of_word(&w("abab")).unwrap());
    // no neutral element survives
    for e in 0..s.size() as u32 {
        let neutral = (0..s.size() as u32).all(|x| s.mul(e, x) == x && s.mul(x, e) == x);
        assert!(!neutral);
    }
}

#[test]
fn adjoin_fresh_elements() {
    let s = build_s(&[w("abab")]).unwrap();
    let m1 = adjoin(&s, Adjoin::Identity);
    assert_eq!(m1.size(), 9);
    let e = m1.identity.unwrap();
    for x in 0..m1.size() as u32 {
        assert_eq!(m1.mul(e, x), x);
        assert_eq!(m1.mul(x, e), x);
    }
    let with_zero = adjoin(&s, Adjoin::Zero);
    let z = with_zero.zero.unwrap();
    for x in 0..with_zero.size() as u32 {
        assert_eq!(with_zero.mul(z, x), z);
        assert_eq!(with_zero.mul(x, z), z);
    }
    assert_eq!(adjoin(&adjoin(&s, Adjoin::Zero), Adjoin::Identity).size(), s.size() + 2);
}

#[test]
fn adjoined_identity_matches_rees_quotient() {
    // S(abab) with a fresh identity has the same table as M(abab) up to
    // renaming: the fresh identity plays the role of the empty word
    let m = build_m(&[w("abab")]).unwrap();
    let m2 = adjoin(&build_s(&[w("abab")]).unwrap(), Adjoin::Identity);
    assert_eq!(m.size(), m2.size());
    // map m2 index -> m index by element name (fresh identity -> empty word)
    let map: Vec<u32> = (0..m2.size() as u32)
        .map(|i| {
            if Some(i) == m2.identity {
                m.identity.unwrap()
            } else if Some(i) == m2.zero {
                m.zero.unwrap()
            } else {
                m.elem_of_word(m2.word_of_elem(i).unwrap()).unwrap()
            }
        })
        .collect();
    for a in 0..m2.size() as u32 {
        for b in 0..m2.size() as u32 {
            assert_eq!(map[m2.mul(a, b) as usize], m.mul(map[a as usize], map[b as usize]));
        }
    }
}

#[test]
fn product_monoid() {
    let m1 = build_m(&[w("abba")]).unwrap();
    let m2 = build_m(&[w("abab"), w("aabb")]).unwrap();
    let p = direct_product(&m1, &m2);
    assert_eq!(p.size(), 140);
    let one = p.identity.unwrap();
    for x in (0..p.size() as u32).step_by(7) {
        assert_eq!(p.mul(one, x), x);
        assert_eq!(p.mul(x, one), x);
    }
    assert!(p.associativity_violation().is_none());
}

#[test]
fn k_limited_universes() {
    assert_eq!(k_limited_universe(&letters("ab"), 2).len(), 19);
    let u1 = k_limited_universe(&letters("a"), 1);
    assert_eq!(u1, vec![Word::empty(), w("a")]);
    let u2 = k_limited_universe(&letters("ab"), 2);
    assert!(u2.contains(&w("aabb")));
    assert!(!u2.contains(&w("aaab")));
}

#[test]
fn m_ak_products() {
    let m = build_m_ak(&letters("ab"), 2);
    assert_eq!(m.size(), 20);
    let ab = m.elem_of_word(&w("ab")).unwrap();
    assert_eq!(m.mul(ab, ab), m.elem_of_word(&w("abab")).unwrap());
    let abab = m.elem_of_word(&w("abab")).unwrap();
    assert_eq!(m.mul(ab, abab), m.zero.unwrap());
}

#[test]
fn m_ak_agrees_with_explicit_rees_quotient() {
    // the kappa-limited words are factor-closed, so M(A_kappa) equals the
    // Rees quotient of the full limited word list
    for kappa in 1..=2 {
        let al = letters("ab");
        let fast = build_m_ak(&al, kappa);
        let all: Vec<Word> = k_limited_universe(&al, kappa)
            .into_iter()
            .filter(|u| !u.is_empty())
            .collect();
        let slow = build_m(&all).unwrap();
        assert_eq!(fast.size(), slow.size());
        for a in 0..fast.size() as u32 {
            for b in 0..fast.size() as u32 {
                let name = |m: &FiniteMonoid, x: u32| m.elem_name(x);
                let fa = fast.mul(a, b);
                // match elements by name across the two constructions
                let sa = (0..slow.size() as u32)
                    .find(|&i| name(&slow, i) == name(&fast, a))
                    .unwrap();
                let sb = (0..slow.size() as u32)
                    .find(|&i| name(&slow, i) == name(&fast, b))
                    .unwrap();
                assert_eq!(name(&fast, fa), name(&slow, slow.mul(sa, sb)));
            }
        }
    }
}

#[test]
fn associativity_exhaustive() {
    for m in [
        build_m(&[w("abab")]).unwrap(),
        build_m(&[w("abba")]).unwrap(),
        build_m(&[w("abab"), w("aabb")]).unwrap(),
        build_m(&[w("asabtb")]).unwrap(),
        build_s(&[w("abab")]).unwrap(),
        build_m_ak(&letters("ab"), 2),
        adjoin(&build_m(&[w("abab")]).unwrap(), Adjoin::Zero),
        adjoin(&build_m(&[w("abab")]).unwrap(), Adjoin::Identity),
    ] {
        assert!(m.size() <= 64);
        assert!(m.associativity_violation().is_none(), "{}", m.provenance);
    }
}

#[test]
fn index_period_examples() {
    assert_eq!(index_period(&build_m(&[w("abab")]).unwrap()), (3, 1));
    assert_eq!(index_period(&build_m_ak(&letters("ab"), 2)), (3, 1));
    assert_eq!(index_period(&build_m(&[w("abba")]).unwrap()), (3, 1));
    // {1, z, 0}: z^2 = 0, so the index is 2
    let m = adjoin(&build_s(&[w("z")]).unwrap(), Adjoin::Identity);
    assert_eq!(index_period(&m), (2, 1));
}

#[test]
fn monoid_file_roundtrip() {
    let m = parse_monoid_file("M\nabab\n").unwrap();
    assert_eq!(m.size(), 9);
    let s = parse_monoid_file("S\nabab\n").unwrap();
    assert_eq!(s.size(), 8);
    assert!(parse_monoid_file("X\nabab\n").is_err());
    assert!(parse_monoid_file("").is_err());
}

#[test]
fn nilpotency_degree_is_sharp() {
    let m = build_m(&[w("abab")]).unwrap();
    assert_eq!(m.nilpotency_degree(), Some(5));
    // any product of 5 non-identity elements is zero
    let inner: Vec<u32> = m
        .inner_elements()
        .iter()
        .map(|&(e, _)| e)
        .collect();
    for &a in &inner {
        for &b in &inner {
            for &c in &inner {
                for &d in &inner {
                    for &e in &inner {
                        let p = [b, c, d, e].iter().fold(a, |acc, &x| m.mul(acc, x));
                        assert_eq!(p, m.zero.unwrap());
                    }
                }
            }
        }
    }
}
