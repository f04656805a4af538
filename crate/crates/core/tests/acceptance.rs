//! One PASS/FAIL line per acceptance criterion. Runs without the test
//! harness so the lines always appear; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use consecutive_patterns::catalog::{pi1, pi2, pi3, pi4, MONOTONE_FAMILY, NINE_PAIR, SEVEN_FAMILY, TWO_PATTERN_FAMILY};
use consecutive_patterns::cluster::{cluster_counts, cluster_counts_single_pattern, count_clusters_oracle};
use consecutive_patterns::collection::collection;
use consecutive_patterns::equivalence::{
    check_theorem13, classify_s5, find_theorem13_bijection, verify_strong_equivalence, PatternBijection,
};
use consecutive_patterns::monotone::{
    check_monotone_corollary, emit_ode_system, is_monotone, monotone_cluster_counts, monotone_witness, six_edge_elimination_printed,
    two_vertex_elimination_printed, verify_ode, ScalarOde,
};
use consecutive_patterns::perm::{all_permutations, perm, standardize};
use consecutive_patterns::series::{avoidance_gf, cluster_gf, count_distribution_oracle, BiSeries};
use consecutive_patterns::{PatternCollection, Permutation, Word};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.details.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }
}

/// All 153 patterns of length at most 5, then 20 seeded random reduced
/// collections of two patterns of lengths 2 to 4.
fn criterion2_collections() -> Vec<PatternCollection> {
    let mut out: Vec<PatternCollection> = (1..=5)
        .flat_map(all_permutations)
        .map(PatternCollection::single)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut seen = BTreeSet::new();
    while seen.len() < 20 {
        let pick = |rng: &mut ChaCha8Rng| {
            let l = rng.gen_range(2..=4);
            let all: Vec<Permutation> = all_permutations(l).collect();
            all[rng.gen_range(0..all.len())].clone()
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let key = BTreeSet::from([a.clone(), b.clone()]);
        if seen.contains(&key) {
            continue;
        }
        if let Ok(c) = PatternCollection::new(vec![a, b]) {
            seen.insert(key);
            out.push(c);
        }
    }
    out
}

fn criterion1() -> Outcome {
    let mut o = Outcome::new();
    let st = standardize(&Word::new(vec![5, 7, 3]).unwrap());
    o.check(st == perm("231"), format!("st(573) = {st:?}"));
    o
}

fn criterion2(cols: &[PatternCollection]) -> Outcome {
    let mut o = Outcome::new();
    let nonzero = AtomicUsize::new(0);
    let bad: Vec<String> = cols
        .par_iter()
        .flat_map_iter(|c| {
            let t = cluster_counts(c, 10, 5).totals();
            let mut bad = Vec::new();
            for n in 1..=10 {
                for q in 1..=5 {
                    let (r, b) = (t.get(n, q), count_clusters_oracle(c, n, q));
                    if !b.is_zero() {
                        nonzero.fetch_add(1, Ordering::Relaxed);
                    }
                    if r != b {
                        bad.push(format!("{c} cl_{{{n},{q}}}: recurrence {r}, oracle {b}"));
                    }
                }
            }
            bad
        })
        .collect();
    for b in bad {
        o.check(false, b);
    }
    o.note(format!(
        "{} collections, n <= 10, 1 <= q <= 5, {} nonzero cells",
        cols.len(),
        nonzero.into_inner()
    ));
    o
}

fn criterion3(cols: &[PatternCollection]) -> Outcome {
    let mut o = Outcome::new();
    const N: usize = 12;
    let geometric = BiSeries::from_coeffs(N, (0..=N).map(|n| ((n, 0), BigInt::from(1).into())));
    let bad: Vec<String> = cols
        .par_iter()
        .filter_map(|c| {
            let cl = cluster_gf(&cluster_counts(c, N, N), N).ok()?;
            let a = avoidance_gf(c, N).ok()?;
            let prod = &a * &(&BiSeries::one(N) - &cl.shift_t(-1));
            if prod != BiSeries::one(N) {
                return Some(format!("{c}: product is not 1"));
            }
            if a.eval_t(1) != geometric {
                return Some(format!("{c}: value at t = 1 is not 1/(1-x)"));
            }
            None
        })
        .collect();
    for b in bad {
        o.check(false, b);
    }
    o
}

fn criterion4() -> Outcome {
    let mut o = Outcome::new();
    let cols = [collection(&["123"]), collection(&["132"]), pi1(), pi2(), pi3(), pi4()];
    for c in &cols {
        let a = avoidance_gf(c, 9).unwrap();
        for n in 0..=9 {
            let dist = count_distribution_oracle(c, n);
            for q in 0..=n {
                let want = BigInt::from(dist.get(&q).copied().unwrap_or(0));
                let got = a.count(n, q).unwrap();
                o.check(got == want, format!("{c} alpha_{{{n},{q}}}: series {got}, brute force {want}"));
            }
        }
    }
    o
}

fn equivalence_pair(o: &mut Outcome, a: &[&str], b: &[&str]) {
    let name = format!("{a:?} / {b:?}");
    let parse = |ps: &[&str]| PatternCollection::new(ps.iter().map(|p| perm(p)).collect());
    let (ca, cb) = match (parse(a), parse(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            o.check(false, format!("{name}: {e}"));
            return;
        }
    };
    let holds = if ca.len() == 1 {
        let phi = PatternBijection::by_position(&ca, &cb).unwrap();
        check_theorem13(&ca, &cb, &phi).unwrap().holds()
    } else {
        find_theorem13_bijection(&ca, &cb).is_some()
    };
    o.check(holds, format!("{name}: overlap-set condition fails"));
    let equal = verify_strong_equivalence(&ca, &cb, 15).unwrap();
    o.check(equal, format!("{name}: generating functions differ below x^16"));
}

fn criterion5() -> Outcome {
    let mut o = Outcome::new();
    for (i, a) in SEVEN_FAMILY.iter().enumerate() {
        for b in &SEVEN_FAMILY[i + 1..] {
            equivalence_pair(&mut o, &[a], &[b]);
        }
    }
    equivalence_pair(&mut o, &NINE_PAIR[..1], &NINE_PAIR[1..]);
    for (i, a) in TWO_PATTERN_FAMILY.iter().enumerate() {
        for b in &TWO_PATTERN_FAMILY[i + 1..] {
            equivalence_pair(&mut o, a, b);
        }
    }
    let mut corollary = 0;
    for (i, a) in MONOTONE_FAMILY.iter().enumerate() {
        for b in &MONOTONE_FAMILY[i + 1..] {
            equivalence_pair(&mut o, &[a], &[b]);
            let (ca, cb) = (collection(&[a]), collection(&[b]));
            let phi = PatternBijection::by_position(&ca, &cb).unwrap();
            corollary += usize::from(check_monotone_corollary(&ca, &cb, &phi).unwrap());
        }
    }
    o.note(format!("monotone family: maxima condition holds for {corollary} of 6 pairs"));
    o
}

fn orbit_rep(p: &str) -> String {
    perm(p).symmetry_orbit().into_iter().next().unwrap().compact()
}

fn criterion6() -> Outcome {
    let mut o = Outcome::new();
    let r = classify_s5();
    o.check(r.orbits.len() == 32, format!("{} orbits", r.orbits.len()));
    let pairs: BTreeSet<String> = r
        .orbits
        .iter()
        .filter(|x| x.members.len() == 2)
        .map(|x| x.representative.clone())
        .collect();
    let want: BTreeSet<String> = ["12345", "14325", "21354", "25314"].map(orbit_rep).into();
    o.check(pairs == want, format!("size-2 orbits {pairs:?}"));
    let fours = r.orbits.iter().filter(|x| x.members.len() == 4).count();
    o.check(fours == 28, format!("{fours} orbits of size 4"));

    let sizes: Vec<usize> = [&[][..], &[2], &[3], &[2, 3, 4]]
        .iter()
        .map(|k| r.bucket(k).map_or(0, |b| b.representatives.len()))
        .collect();
    o.check(sizes == [14, 15, 2, 1], format!("bucket sizes {sizes:?}, expected [14, 15, 2, 1]"));

    let listed: [&[&str]; 5] = [
        &["13452", "13542", "14352", "14532", "15342", "15432"],
        &["12453", "12543"],
        &["12354", "13254"],
        &["21354", "21534"],
        &["24153", "25143"],
    ];
    let want: BTreeSet<BTreeSet<String>> = listed.iter().map(|c| c.iter().map(|p| orbit_rep(p)).collect()).collect();
    let got: BTreeSet<BTreeSet<String>> = r
        .bucket(&[])
        .map(|b| b.classes.iter().map(|c| c.iter().cloned().collect()).collect())
        .unwrap_or_default();
    if got != want {
        let missing: Vec<_> = want.difference(&got).collect();
        o.check(false, format!("no-overlap classes missing {missing:?}"));
    }

    let only2 = [
        "12435", "12534", "13425", "13524", "14325", "14523", "15324", "15423", "15234", "21453", "21543", "23514",
        "24513", "25314", "25413",
    ];
    let cl3: Vec<_> = only2
        .par_iter()
        .map(|p| cluster_counts_single_pattern(&perm(p), 13, 3).totals())
        .collect();
    let mut separated = 0;
    for i in 0..only2.len() {
        for j in i + 1..only2.len() {
            if (1..=13).any(|n| cl3[i].get(n, 3) != cl3[j].get(n, 3)) {
                separated += 1;
            } else {
                o.check(false, format!("{} and {} agree on cl_{{n,3}}, n <= 13", only2[i], only2[j]));
            }
        }
    }
    o.note(format!("{separated} of 105 pairs separated by cl_{{n,3}}"));
    let (a, b) = (
        cluster_counts_single_pattern(&perm("14253"), 13, 2).totals(),
        cluster_counts_single_pattern(&perm("15243"), 13, 2).totals(),
    );
    o.check((1..=13).any(|n| a.get(n, 2) != b.get(n, 2)), "14253 and 15243 agree on cl_{n,2}");
    o
}

fn scalar_check(o: &mut Outcome, name: &str, ode: &ScalarOde, y: &BiSeries) {
    let r = ode.check(y);
    o.check(r.checked_through >= 20, format!("{name}: only checked through x^{}", r.checked_through));
    if let Some((n, q, v)) = r.first_nonzero.filter(|(n, _, _)| *n <= 20) {
        o.check(false, format!("{name}: residual {v} at x^{n} t^{q}"));
    }
}

fn criterion7() -> Outcome {
    let mut o = Outcome::new();
    for (name, c) in [("Pi1", pi1()), ("Pi2", pi2()), ("Pi3", pi3()), ("Pi4", pi4())] {
        let sys = match emit_ode_system(&c) {
            Ok(s) => s,
            Err(e) => {
                o.check(false, format!("{name}: {e}"));
                continue;
            }
        };
        let order = 20 + sys.max_lhs_order() + sys.max_monomial_degree();
        let counts = monotone_cluster_counts(&c, order, order).unwrap();
        let series: Vec<_> = (0..sys.vertices.len()).map(|v| counts.series(v, order)).collect();
        let report = verify_ode(&sys, &series, order).unwrap();
        o.check(report.passed(), format!("{name}: emitted system fails: {report:?}"));
    }
    let y3 = monotone_cluster_counts(&pi3(), 32, 32).unwrap().series(0, 32);
    scalar_check(&mut o, "Pi3 eliminated equation", &two_vertex_elimination_printed(), &y3);
    let y4 = monotone_cluster_counts(&pi4(), 32, 32).unwrap().series(0, 32);
    scalar_check(&mut o, "Pi4 eliminated equation", &six_edge_elimination_printed(), &y4);
    o
}

fn criterion8() -> Outcome {
    let mut o = Outcome::new();
    for (name, c) in [("Pi1", pi1()), ("Pi2", pi2()), ("Pi3", pi3()), ("Pi4", pi4())] {
        if let Some(w) = monotone_witness(&c) {
            o.check(false, format!("{name} not monotone: {w}"));
        }
    }
    let c = collection(&["213"]);
    o.check(!is_monotone(&c), "213 reported monotone");
    match monotone_witness(&c) {
        Some(w) => o.check(w.k == 1 && w.entry == 2, format!("213 witness {w}")),
        None => o.check(false, "213 has no witness"),
    }
    o
}

fn criterion9(cols: &[PatternCollection]) -> Outcome {
    let mut o = Outcome::new();
    let bad: Vec<String> = cols
        .par_iter()
        .filter_map(|c| {
            let t = cluster_counts(c, 10, 9).totals();
            let r = cluster_counts(&c.reverse(), 10, 9).totals();
            let k = cluster_counts(&c.complement(), 10, 9).totals();
            (t != r || t != k).then(|| format!("{c}: symmetry changes cluster counts"))
        })
        .collect();
    for b in bad {
        o.check(false, b);
    }
    o
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let cols = criterion2_collections();
    let criteria: Vec<Criterion> = vec![
        ("standardization", Box::new(criterion1)),
        ("oracle agrees with recurrence", Box::new(|| criterion2(&cols))),
        ("cluster-method identity", Box::new(|| criterion3(&cols))),
        ("occurrence distributions", Box::new(criterion4)),
        ("equivalence families", Box::new(criterion5)),
        ("length-5 classification", Box::new(criterion6)),
        ("ODE verification", Box::new(criterion7)),
        ("monotonicity", Box::new(criterion8)),
        ("symmetry", Box::new(|| criterion9(&cols))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
        for d in o.details.iter().take(12) {
            println!("    {d}");
        }
        if o.details.len() > 12 {
            println!("    ... {} more", o.details.len() - 12);
        }
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
