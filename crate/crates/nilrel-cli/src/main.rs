//! Command-line front end: JSON reports on stdout, human summaries on
//! stderr. Exit 0 once a verdict is computed (whatever the verdict), 2 on
//! usage errors, 3 on internal invariant violations.

use clap::{Parser, Subcommand, ValueEnum};
use nilrel::asabtb::{equiv_asabtb, normal_form, reconstruct_term_asabtb};
use nilrel::families::{
    alternating_chain, build_family_scheme, check_theorem_conditions, family_word, Family,
};
use nilrel::identities::{
    is_island, is_isoterm, minimal_a, satisfies, AlphaBetaCaps, Identity, SearchBounds,
};
use nilrel::impossibility::{
    exists_realizing_word_from, first_letter_certificate, ForbiddenKind,
    PatternSystem,
};
use nilrel::mak::{equiv_mak, reconstruct_term_mak};
use nilrel::monoid::{build_m, build_m_ak, direct_product, parse_monoid_file, FiniteMonoid};
use nilrel::schemes::{
    check_consistency, check_dependency, comes_from_term, variable_exponents, Scheme,
    SearchConfig,
};
use nilrel::words::{Letter, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nilrel", version, about = "Workbench for finite nilpotent monoids")]
struct Cli {
    /// Worker threads (also honoured via NILREL_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Chain,
    Maelstrom,
    Crown,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Chain => Family::Chain,
            FamilyArg::Maelstrom => Family::Maelstrom,
            FamilyArg::Crown => Family::Crown,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a monoid's universe and multiplication table
    DumpMonoid {
        #[arg(long)]
        monoid: String,
    },
    /// Decide whether the monoid satisfies lhs ~ rhs
    CheckIdentity {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Decide whether a word is equivalent only to itself
    Isoterm {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 6)]
        occ_cap: usize,
    },
    /// Decide whether a comma-separated set of words is a closed class
    Island {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        words: String,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 6)]
        occ_cap: usize,
    },
    /// Least power/shuffling law parameters within the caps
    MinAlpha {
        #[arg(long)]
        monoid: String,
        #[arg(long, default_value_t = 5)]
        alpha_max: usize,
        #[arg(long, default_value_t = 4)]
        beta_max: usize,
    },
    /// Print a family word
    GenWord {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
    },
    /// Build a family scheme, printing it and optionally writing a file
    BuildScheme {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check scheme dependency and consistency over a monoid
    VerifyScheme {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        scheme: String,
    },
    /// Search for a term generating the scheme over a monoid
    ComesFromTerm {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 2)]
        slack_periods: usize,
        #[arg(long, default_value_t = 1 << 40)]
        max_nodes: u64,
    },
    /// Search for a word realizing a pattern system at a given profile
    PatternSolve {
        #[arg(long)]
        system: String,
        /// Comma-separated occurrence counts, one per variable
        #[arg(long)]
        profile: String,
        /// Force the first letter to this variable index
        #[arg(long)]
        first: Option<usize>,
    },
    /// Limited-words equational theory: decide u ~ v
    MakEquiv {
        #[arg(long)]
        kappa: usize,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Rebuild a generating term over the limited-words monoid
    MakReconstruct {
        #[arg(long)]
        kappa: usize,
        #[arg(long)]
        scheme: String,
    },
    /// Canonical form of a word over the six-letter pattern monoid
    AsabtbNf {
        #[arg(long)]
        word: String,
    },
    /// Equivalence over the six-letter pattern monoid
    AsabtbEquiv {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Rebuild a generating term over the six-letter pattern monoid
    AsabtbReconstruct {
        #[arg(long)]
        scheme: String,
    },
    /// Check the sufficient family conditions over a monoid
    CheckConditions {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        monoid: String,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        /// Disjoint-copy sizes to test, as n:m pairs ("2:2,2:3,3:2")
        #[arg(long)]
        sizes: Option<String>,
    },
    /// The alternating family of limited-words monoids and their extensions
    AlternatingChain {
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Re-run a named end-to-end example
    Reproduce {
        name: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
}

enum CliError {
    Usage(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

fn parse_word(s: &str) -> Result<Word, CliError> {
    Word::parse(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn load_monoid(path: &str) -> Result<FiniteMonoid, CliError> {
    let text = std::fs::read_to_string(path)?;
    parse_monoid_file(&text).map_err(|e| CliError::Usage(e.to_string()))
}

fn load_json(path: &str) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(e.to_string()))
}

fn load_scheme(path: &str) -> Result<Scheme, CliError> {
    Scheme::from_json(&load_json(path)?).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_sizes(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(|pair| {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("bad size pair {pair:?}")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| CliError::Usage(e.to_string()))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn run(cmd: Cmd, seedless: bool) -> Result<(Value, String), CliError> {
    let _ = seedless;
    match cmd {
        Cmd::DumpMonoid { monoid } => {
            let m = load_monoid(&monoid)?;
            let human = format!("{}: {} elements", m.provenance, m.size());
            Ok((to_value(&m.dump()), human))
        }
        Cmd::CheckIdentity { monoid, lhs, rhs } => {
            let m = load_monoid(&monoid)?;
            let id = Identity::new(parse_word(&lhs)?, parse_word(&rhs)?);
            let r = satisfies(&m, &id);
            let human = format!(
                "{} |= {} ~ {}: {}",
                m.provenance, id.lhs, id.rhs, r.holds
            );
            Ok((
                json!({"verdict": r.holds, "witness": r.witness,
                       "assignments_checked": r.assignments_checked}),
                human,
            ))
        }
        Cmd::Isoterm {
            monoid,
            word,
            max_len,
            occ_cap,
        } => {
            let m = load_monoid(&monoid)?;
            let u = parse_word(&word)?;
            let r = is_isoterm(&m, &u, SearchBounds { max_len, occ_cap });
            let human = format!("isoterm({u}) over {}: {}", m.provenance, r.verdict);
            Ok((to_value(&r), human))
        }
        Cmd::Island {
            monoid,
            words,
            max_len,
            occ_cap,
        } => {
            let m = load_monoid(&monoid)?;
            let us: Vec<Word> = words
                .split(',')
                .map(parse_word)
                .collect::<Result<_, _>>()?;
            if us.is_empty() {
                return Err(CliError::Usage("island needs at least one word".into()));
            }
            let r = is_island(&m, &us, SearchBounds { max_len, occ_cap });
            let human = format!("island of {} words over {}: {}", us.len(), m.provenance, r.verdict);
            Ok((to_value(&r), human))
        }
        Cmd::MinAlpha {
            monoid,
            alpha_max,
            beta_max,
        } => {
            let m = load_monoid(&monoid)?;
            let ab = minimal_a(&m, AlphaBetaCaps { alpha_max, beta_max });
            let human = match ab {
                Some(ab) => format!("{}: alpha={}, beta={}", m.provenance, ab.alpha, ab.beta),
                None => format!("{}: no parameters within the caps", m.provenance),
            };
            Ok((json!({ "alpha_beta": ab }), human))
        }
        Cmd::GenWord { family, n, p, q } => {
            let u = family_word(family.into(), n, p, q)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((json!({"word": u.to_string()}), u.to_string()))
        }
        Cmd::BuildScheme {
            family,
            n,
            p,
            q,
            out,
        } => {
            let f = build_family_scheme(family.into(), n, p, q)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let v = f.to_json();
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap())?;
            }
            let human = format!("{:?} scheme, n={n}, {} terms", Family::from(family), n * (n - 1) / 2);
            Ok((v, human))
        }
        Cmd::VerifyScheme { monoid, scheme } => {
            let m = load_monoid(&monoid)?;
            let f = load_scheme(&scheme)?;
            let dep = check_dependency(&m, &f);
            let con = check_consistency(&m, &f);
            let exp = variable_exponents(&f, &m);
            let ok = dep.ok && con.ok;
            let human = format!(
                "scheme n={} over {}: dependency {}, consistency {} ({} identities)",
                f.n, m.provenance, dep.ok, con.ok, con.checked
            );
            Ok((
                json!({"ok": ok, "dependency": to_value(&dep),
                       "consistency": to_value(&con), "exponents": to_value(&exp)}),
                human,
            ))
        }
        Cmd::ComesFromTerm {
            monoid,
            scheme,
            slack_periods,
            max_nodes,
        } => {
            let m = load_monoid(&monoid)?;
            let f = load_scheme(&scheme)?;
            let r = comes_from_term(
                &m,
                &f,
                SearchConfig {
                    slack_periods,
                    max_nodes,
                },
            );
            let human = match &r.term {
                Some(t) => format!("term found: {t}"),
                None => format!(
                    "no term (search {}, {} nodes)",
                    if r.exhausted { "exhausted" } else { "capped" },
                    r.nodes
                ),
            };
            Ok((to_value(&r), human))
        }
        Cmd::PatternSolve {
            system,
            profile,
            first,
        } => {
            let sys = PatternSystem::from_json(&load_json(&system)?)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let profile: Vec<usize> = profile
                .split(',')
                .map(|t| t.trim().parse().map_err(|e: std::num::ParseIntError| CliError::Usage(e.to_string())))
                .collect::<Result<_, _>>()?;
            let found = exists_realizing_word_from(&sys, &profile, first);
            let human = match &found {
                Some(w) => format!("realizing word: {w}"),
                None => "no word".to_string(),
            };
            Ok((json!({"word": found.map(|w| w.to_string())}), human))
        }
        Cmd::MakEquiv { kappa, u, v } => {
            let (u, v) = (parse_word(&u)?, parse_word(&v)?);
            let verdict = equiv_mak(&u, &v, kappa);
            Ok((
                json!({"verdict": verdict, "kappa": kappa}),
                format!("{u} ~ {v} at kappa={kappa}: {verdict}"),
            ))
        }
        Cmd::MakReconstruct { kappa, scheme } => {
            let f = load_scheme(&scheme)?;
            let a = Letter::intern("a");
            let b = Letter::intern("b");
            let m = build_m_ak(&[a, b], kappa);
            match reconstruct_term_mak(&f, kappa, &m) {
                Ok(r) => {
                    let human = format!("reconstructed: {}", r.word);
                    Ok((to_value(&r), human))
                }
                Err(e) => Ok((
                    json!({"error": e.to_string()}),
                    format!("reconstruction failed: {e}"),
                )),
            }
        }
        Cmd::AsabtbNf { word } => {
            let u = parse_word(&word)?;
            let nf = normal_form(&u);
            Ok((
                json!({"normal_form": nf.to_string()}),
                format!("nf({u}) = {nf}"),
            ))
        }
        Cmd::AsabtbEquiv { u, v } => {
            let (u, v) = (parse_word(&u)?, parse_word(&v)?);
            let verdict = equiv_asabtb(&u, &v);
            Ok((
                json!({"verdict": verdict}),
                format!("{u} ~ {v}: {verdict}"),
            ))
        }
        Cmd::AsabtbReconstruct { scheme } => {
            let f = load_scheme(&scheme)?;
            match reconstruct_term_asabtb(&f) {
                Ok(r) => {
                    let human = format!("reconstructed: {}", r.word);
                    Ok((to_value(&r), human))
                }
                Err(e) => Ok((
                    json!({"error": e.to_string()}),
                    format!("reconstruction failed: {e}"),
                )),
            }
        }
        Cmd::CheckConditions {
            family,
            monoid,
            p,
            q,
            sizes,
        } => {
            let m = load_monoid(&monoid)?;
            let fam: Family = family.into();
            let sizes = match sizes {
                Some(s) => parse_sizes(&s)?,
                None => default_sizes(fam),
            };
            let r = check_theorem_conditions(fam, &m, p, q, &sizes, SearchBounds::default())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let human = format!("{fam:?} conditions over {}: {}", m.provenance, r.all_ok);
            Ok((to_value(&r), human))
        }
        Cmd::AlternatingChain { kmax, n } => {
            let rs = alternating_chain(kmax, n).map_err(|e| CliError::Usage(e.to_string()))?;
            let human = rs
                .iter()
                .map(|r| {
                    format!(
                        "kappa={}: valid ext {}, valid lim {}, term ext {}, term lim {}",
                        r.kappa,
                        r.valid_for_extended,
                        r.valid_for_limited,
                        r.term_over_extended.is_some(),
                        r.term_over_limited.is_some()
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok((to_value(&rs), human))
        }
        Cmd::Reproduce { name, all, seed } => {
            if all {
                let mut out = Vec::new();
                let mut ok = true;
                for n in REPRODUCE_NAMES {
                    let r = reproduce(n, seed)?;
                    ok &= r["ok"].as_bool().unwrap_or(false);
                    out.push(r);
                }
                let human = format!("{} examples, all ok: {ok}", out.len());
                Ok((json!({"ok": ok, "examples": out}), human))
            } else {
                let name = name.ok_or_else(|| {
                    CliError::Usage("reproduce needs a name or --all".into())
                })?;
                let r = reproduce(&name, seed)?;
                let human = format!("{name}: ok = {}", r["ok"]);
                Ok((r, human))
            }
        }
    }
}

fn default_sizes(f: Family) -> Vec<(usize, usize)> {
    match f {
        Family::Maelstrom => vec![(2, 2), (2, 4), (4, 2)],
        _ => vec![(2, 2), (2, 3), (3, 2)],
    }
}

const REPRODUCE_NAMES: &[&str] = &[
    "abab-chain-n5",
    "aabb-maelstrom-n6",
    "abba-crown-n6",
    "alternating-chain-k2",
    "mak-roundtrip",
    "asabtb-roundtrip",
    "product-identities",
];

/// Full pipeline for one named example: build the monoid, check the family
/// conditions, validate the scheme, and run the decisive search.
fn reproduce(name: &str, seed: u64) -> Result<Value, CliError> {
    let wd = |s: &str| Word::parse(s).expect("valid word");
    match name {
        "abab-chain-n5" | "aabb-maelstrom-n6" | "abba-crown-n6" => {
            let (fam, kind, words, n) = match name {
                "abab-chain-n5" => (Family::Chain, ForbiddenKind::Chain, vec![wd("abab")], 5),
                "aabb-maelstrom-n6" => (
                    Family::Maelstrom,
                    ForbiddenKind::Maelstrom,
                    vec![wd("abab"), wd("aabb")],
                    6,
                ),
                _ => (Family::Crown, ForbiddenKind::Crown, vec![wd("abba")], 6),
            };
            let m = build_m(&words).map_err(|e| CliError::Usage(e.to_string()))?;
            let cond = check_theorem_conditions(fam, &m, 1, 1, &default_sizes(fam), SearchBounds::default())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let f = build_family_scheme(fam, n, 1, 1).map_err(|e| CliError::Usage(e.to_string()))?;
            let dep = check_dependency(&m, &f);
            let con = check_consistency(&m, &f);
            let search = comes_from_term(&m, &f, SearchConfig::default());
            let cert = first_letter_certificate(kind, n, 1, 1)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let scheme_valid = dep.ok && con.ok;
            let ok = cond.all_ok
                && scheme_valid
                && search.term.is_none()
                && search.exhausted
                && cert.ok;
            Ok(json!({
                "name": name,
                "monoid": m.provenance,
                "conditions_ok": cond.all_ok,
                "scheme_valid": scheme_valid,
                "comes_from_term": search.term.is_some(),
                "search_exhausted": search.exhausted,
                "certificate_ok": cert.ok,
                "ok": ok,
            }))
        }
        "alternating-chain-k2" => {
            let rs = alternating_chain(2, 5).map_err(|e| CliError::Usage(e.to_string()))?;
            let r = &rs[0];
            let ok = r.limited_ok
                && r.valid_for_extended
                && r.valid_for_limited
                && r.term_over_extended.is_none()
                && r.extended_search_exhausted
                && r.term_over_limited.is_some();
            Ok(json!({"name": name, "report": to_value(r), "ok": ok}))
        }
        "mak-roundtrip" => {
            let a = Letter::intern("a");
            let b = Letter::intern("b");
            let m = build_m_ak(&[a, b], 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ok = true;
            let rounds = 5;
            for _ in 0..rounds {
                let n = rng.gen_range(4..=10usize);
                let mut letters: Vec<Letter> = Vec::new();
                for i in 1..=n {
                    let occ = *[1usize, 1, 2, 2, 2, 3, 4].choose(&mut rng).unwrap();
                    letters.extend(std::iter::repeat(Letter::var(i)).take(occ));
                }
                letters.shuffle(&mut rng);
                let u = Word(letters);
                let f = Scheme::from_term(&u, n).map_err(|e| CliError::Usage(e.to_string()))?;
                ok &= match reconstruct_term_mak(&f, 2, &m) {
                    Ok(r) => equiv_mak(&Word::parse(&r.word).unwrap(), &u, 2),
                    Err(_) => false,
                };
            }
            Ok(json!({"name": name, "rounds": rounds, "reconstruction_ok": ok, "ok": ok}))
        }
        "asabtb-roundtrip" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ok = true;
            let rounds = 3;
            for _ in 0..rounds {
                let u = random_structured_word(&mut rng, 23);
                let f = Scheme::from_term(&u, 23).map_err(|e| CliError::Usage(e.to_string()))?;
                ok &= match reconstruct_term_asabtb(&f) {
                    Ok(r) => equiv_asabtb(&Word::parse(&r.word).unwrap(), &u),
                    Err(_) => false,
                };
            }
            Ok(json!({"name": name, "rounds": rounds, "reconstruction_ok": ok, "ok": ok}))
        }
        "product-identities" => {
            let m1 = build_m(&[wd("abba")]).map_err(|e| CliError::Usage(e.to_string()))?;
            let m2 = build_m(&[wd("abab"), wd("aabb")]).map_err(|e| CliError::Usage(e.to_string()))?;
            let prod = direct_product(&m1, &m2);
            let a = Letter::intern("a");
            let b = Letter::intern("b");
            let mak = build_m_ak(&[a, b], 2);
            // identity corpus: all pairs of 3-variable words up to length 4
            let vars = [Letter::var(1), Letter::var(2), Letter::var(3)];
            let mut corpus = vec![Word::empty()];
            let mut layer = vec![Word::empty()];
            for _ in 0..4 {
                layer = layer
                    .iter()
                    .flat_map(|u| vars.iter().map(|&x| u.concat(&Word(vec![x]))))
                    .collect::<Vec<_>>();
                corpus.extend(layer.iter().cloned());
            }
            let mut checked = 0usize;
            let mut disagreements = 0usize;
            for u in &corpus {
                for v in &corpus {
                    checked += 1;
                    let id = Identity::new(u.clone(), v.clone());
                    if satisfies(&prod, &id).holds != satisfies(&mak, &id).holds {
                        disagreements += 1;
                    }
                }
            }
            let ok = disagreements == 0;
            Ok(json!({"name": name, "pairs": checked,
                      "disagreements": disagreements, "ok": ok}))
        }
        _ => Err(CliError::Usage(format!(
            "unknown example {name:?}; known: {}",
            REPRODUCE_NAMES.join(", ")
        ))),
    }
}

/// A word over n variables: a linear spine, 2-occurring letters scattered
/// between spine letters, and a primitive tail.
fn random_structured_word(rng: &mut ChaCha8Rng, n: usize) -> Word {
    let mut vars: Vec<usize> = (1..=n).collect();
    vars.shuffle(rng);
    let spine_len = rng.gen_range(n / 3..n / 2);
    let prim_len = rng.gen_range(1..4usize);
    let spine: Vec<usize> = vars[..spine_len].to_vec();
    let prim: Vec<usize> = vars[spine_len..spine_len + prim_len].to_vec();
    let doubled: Vec<usize> = vars[spine_len + prim_len..].to_vec();
    let mut slots: Vec<Vec<Letter>> = vec![Vec::new(); spine_len + 1];
    for &x in &doubled {
        let a = rng.gen_range(0..slots.len());
        let b = rng.gen_range(0..slots.len());
        slots[a.min(b)].push(Letter::var(x));
        slots[a.max(b)].push(Letter::var(x));
    }
    for s in &mut slots {
        s.shuffle(rng);
    }
    let mut out: Vec<Letter> = Vec::new();
    for (g, slot) in slots.iter().enumerate() {
        out.extend(slot);
        if g < spine_len {
            out.push(Letter::var(spine[g]));
        }
    }
    for &x in &prim {
        let k = rng.gen_range(2..4usize);
        out.extend(std::iter::repeat(Letter::var(x)).take(k));
    }
    Word(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("NILREL_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli.cmd, false)));
    match outcome {
        Ok(Ok((report, human))) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            eprintln!("{human}");
            ExitCode::SUCCESS
        }
        Ok(Err(CliError::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("internal error");
            ExitCode::from(3)
        }
    }
}
