//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines reach the terminal; exits nonzero when an outcome is not the
//! recorded one.

mod common;

use std::time::{Duration, Instant};

use common::{nodes, w};
use fpp_core::levi::{adjoint_delta, component_gammas, compute_mcx, is_bottom_layer, levi_from_eta};
use fpp_core::param::{parametric_dominantize, region_equiv, AffineWeight};
use fpp_core::verify::{
    all_types, builtin_template, case_gammas, classical_ranks, enumerate_outside_fpp_witnesses,
    f4_eta0001_bullets, second_part_excludes, verify_bottom_layer_sweep, verify_classical,
    verify_outside_fpp_threshold, verify_reduction_case, ReportStatus, VerificationReport, CASES, DEFAULT_SEED,
    REDUCTION_CASES,
};
use fpp_core::weyl::{apply_simple, dominantize, enumerate_weyl, inversion_count, length, DEFAULT_BUDGET};
use fpp_core::{datum, Family, Rational, RootVector, Weight, WeylWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn threshold(case: &str, limit: Duration) -> Outcome {
    let start = Instant::now();
    let r = verify_outside_fpp_threshold(case);
    let took = start.elapsed();
    outcome(r.is_verified() && took < limit, format!("{} [limit {}s]", r.verdict_line(), limit.as_secs()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let r = enumerate_outside_fpp_witnesses("f4-eta0001");
    let took = start.elapsed();
    let t = builtin_template("f4-eta0001").unwrap();
    let elements = fpp_core::verify::enumerate_f4_eta0001().unwrap();
    let w1 = elements.iter().find(|e| e.word.letters() == [1, 2, 3, 4]);
    let image_ok = w1.is_some_and(|e| {
        e.image == AffineWeight::parse(&t.datum, &t.params, "b + 1/2c - 1/2; a; -a - 1/2c + 1/2; c").unwrap()
    });
    let region_ok = w1.is_some_and(|e| region_equiv(&e.pieces, &f4_eta0001_bullets(&t.params).unwrap()));
    let pass = r.is_verified() && elements.len() == 29 && image_ok && region_ok && took < Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "{} elements, s1s2s3s4 image {}, region {} [limit 300s]",
            elements.len(),
            if image_ok { "matches" } else { "differs" },
            if region_ok { "matches the three bullets" } else { "differs" }
        ),
    )
}

fn point_of(params: &[String], v: &Value) -> Vec<Rational> {
    params.iter().map(|n| v[n].as_str().unwrap().parse().unwrap()).collect()
}

/// Recomputes one f4-eta0001 exclusion failure numerically with whole-group
/// enumeration; true when it is a genuine second-part hit.
fn confirm_failure(wit: &Value, group: &[WeylWord]) -> bool {
    let t = builtin_template("f4-eta0001").unwrap();
    let p = point_of(t.params.names(), &wit["point"]);
    let wp = WeylWord::parse(&t.datum, wit["word"].as_str().unwrap()).unwrap();
    let gamma = Weight::parse(&t.datum, wit["gamma"].as_str().unwrap()).unwrap();
    let (ll, lr) = (t.lambda_l.specialize(&p), t.lambda_r.specialize(&p));
    let hypothesis = !dominantize(&ll).0.inside_fpp() && p.iter().any(|c| *c > Rational::one());
    let mu = &ll - &wp.apply(&lr);
    let hits = dominantize(&mu).0 == gamma;
    let outside_mf = !wp.support().is_subset(t.mf_nodes);
    let first_part: Vec<Weight> =
        group.iter().filter(|v| v.support().is_subset(t.mf_nodes)).map(|v| v.apply(&lr)).collect();
    let conjugate = group
        .iter()
        .filter(|u| u.apply(&ll) == ll)
        .any(|u| first_part.contains(&u.compose(&wp).apply(&lr)));
    hypothesis && hits && outside_mf && !conjugate
}

/// Returns (outcome, whether it is the recorded one).
fn criterion_5() -> (Outcome, bool) {
    let mut parts = Vec::new();
    let mut reports: Vec<VerificationReport> = Vec::new();
    for case in ["g2-eta10", "g2-eta20", "f4-eta0010", "f4-eta0001"] {
        let r = second_part_excludes(case, &case_gammas(case).unwrap());
        parts.push(format!("{case} {}", r.count.unwrap_or(usize::MAX)));
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.is_verified());
    let f4 = &reports[3];
    let details = &f4.details;
    let group = enumerate_weyl(&datum("F4"), None, DEFAULT_BUDGET).unwrap();
    let witnesses = f4.witnesses.clone().unwrap_or_default();
    let confirmed = witnesses.iter().filter(|w| confirm_failure(w, &group)).count();
    let recorded = reports[..3].iter().all(|r| r.is_verified() && r.count == Some(0))
        && f4.status == ReportStatus::Counterexample
        && f4.count == Some(167)
        && details["failures_above_eta"] == 64
        && details["failures_with_regular_lambda"] == 47
        && confirmed == 167;
    let detail = format!(
        "nonempty equality sets: {}; f4-eta0001: {} above eta, {} with regular lambda_L, {confirmed} confirmed numerically",
        parts.join(", "),
        details["failures_above_eta"],
        details["failures_with_regular_lambda"],
    );
    (outcome(pass, detail), recorded)
}

fn criterion_6() -> Outcome {
    let reports: Vec<VerificationReport> = REDUCTION_CASES.iter().map(|c| verify_reduction_case(c)).collect();
    let pass = reports.iter().all(|r| r.is_verified());
    outcome(pass, reports.iter().map(|r| r.verdict_line()).collect::<Vec<_>>().join("; "))
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut check = |cond: bool, what: &str| {
        ok &= cond;
        if !cond {
            notes.push(format!("mismatch: {what}"));
        }
    };

    // F4, eta = [0,0,1,0]
    let f4 = datum("F4");
    let eta = w("F4", &[0, 0, 1, 0]);
    let mf = levi_from_eta(&eta).unwrap();
    check(mf.nodes == nodes(&[1, 2, 4]) && mf.to_string() == "{1,2,4} = A2{1,2} x A1{4}", "F4 M_f");
    let d = adjoint_delta(&f4, &mf.components[0]);
    let g1 = &eta + &d.to_weight();
    check(g1 == w("F4", &[1, 1, -1, 0]) && g1.pairing(3).unwrap() == Rational::from_int(-1), "eta + delta");
    check(!is_bottom_layer(&eta, &g1), "eta + delta not bottom layer");
    let g2 = &eta + &Weight::simple_root(&f4, 4).unwrap();
    check(g2 == w("F4", &[0, 0, 0, 2]) && is_bottom_layer(&eta, &g2), "eta + beta_4 bottom layer");

    // E8, eta = [1,2,0,0,0,3,0,0]
    let e8 = datum("E8");
    let eta = w("E8", &[1, 2, 0, 0, 0, 3, 0, 0]);
    let mcx = compute_mcx(&eta).unwrap();
    check(mcx.nodes == nodes(&[3, 4, 5, 7, 8]) && mcx.nodes == levi_from_eta(&eta).unwrap().nodes, "E8 M_cx");
    let d1 = adjoint_delta(&e8, &mcx.components[0]);
    let d2 = adjoint_delta(&e8, &mcx.components[1]);
    check(d1 == RootVector::from_ints(&e8, &[0, 0, 1, 1, 1, 0, 0, 0]).unwrap(), "delta_1");
    check(d2 == RootVector::from_ints(&e8, &[0, 0, 0, 0, 0, 0, 1, 1]).unwrap(), "delta_2");
    let h1 = &eta + &d1.to_weight();
    let h2 = &eta + &d2.to_weight();
    let pairs: Vec<i64> = [1, 2, 6].iter().map(|&i| h1.pairing(i).unwrap().to_i64().unwrap()).collect();
    check(pairs == [0, 1, 2], "E8 pairings 1 - 1, 2 - 1, 3 - 1");
    check(h2.pairing(6).unwrap() == Rational::from_int(2), "E8 pairing 3 - 1 at node 6");
    check(is_bottom_layer(&eta, &h1) && is_bottom_layer(&eta, &h2), "E8 adjoint K-types bottom layer");

    // F4, eta = [0,0,1,k]: B3 factor with gamma = eta + beta_1 + beta_2 + beta_3
    for k in 1..=3 {
        let eta = w("F4", &[0, 0, 1, k]);
        let m = compute_mcx(&eta).unwrap();
        let single = m.nodes == nodes(&[1, 2, 3]) && m.components.len() == 1 && m.components[0].name() == "B3";
        check(single, "F4 [0,0,1,k] M_cx is B3{1,2,3}");
        if single {
            let gs = component_gammas(&eta, &m.components[0]).unwrap();
            let want = &eta + &RootVector::from_ints(&f4, &[1, 1, 1, 0]).unwrap().to_weight();
            check(gs == vec![want.clone()], "B3 gamma");
            check(want.pairing(3).unwrap() == Rational::one() && is_bottom_layer(&eta, &want), "B3 gamma dominant");
        }
    }

    // the F4 M_cx table
    let (rows, generators, bad) = common::check_f4_table();
    check(bad.is_empty(), "F4 M_cx table");
    notes.insert(0, format!("F4 M_cx table: {rows} rows, {generators} generators, {} mismatches", bad.len()));
    notes.insert(1, "F4/E8 pairings and the B3 gamma reproduced".into());
    outcome(ok, notes.join("; "))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let types = ["A1", "A5", "B3", "B6", "C4", "D5", "E6", "E7", "E8", "F4", "G2"];
    let rat = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-30..=30), rng.gen_range(1..=8));
    let mut ok = true;
    let mut involutions = 0;
    let mut words = 0;
    for t in types {
        let d = datum(t);
        for _ in 0..1000 {
            let l = Weight::new(&d, (0..d.rank()).map(|_| rat(&mut rng)).collect()).unwrap();
            let i = rng.gen_range(1..=d.rank());
            ok &= apply_simple(i, &apply_simple(i, &l).unwrap()).unwrap() == l;
            involutions += 1;
        }
        for _ in 0..500 {
            let len = rng.gen_range(0..30);
            let letters = (0..len).map(|_| rng.gen_range(1..=d.rank())).collect();
            let wd = WeylWord::new(&d, letters).unwrap();
            ok &= length(&wd) == inversion_count(&wd);
            words += 1;
        }
    }
    let orders = [("G2", 12), ("F4", 1152), ("B4", 384), ("D5", 1920), ("A5", 720)];
    for (t, n) in orders {
        ok &= enumerate_weyl(&datum(t), None, DEFAULT_BUDGET).unwrap().len() == n;
    }
    let roots = [("G2", 6), ("F4", 24), ("E6", 36), ("E7", 63), ("E8", 120), ("B7", 49), ("C5", 25), ("D6", 30)];
    for (t, n) in roots {
        ok &= datum(t).positive_roots().len() == n;
    }
    let mut points = 0;
    for case in CASES {
        let t = builtin_template(case).unwrap();
        let cells = parametric_dominantize(&t.lambda_l, &t.base_region).unwrap();
        let mut here = 0;
        let mut tries = 0;
        while here < 1000 && tries < 1_000_000 {
            tries += 1;
            let p: Vec<Rational> = (0..t.params.len())
                .map(|_| {
                    let den = [1, 2, 3, 4, 6, 8, 12][rng.gen_range(0..7)];
                    Rational::new(rng.gen_range(-den..=6 * den), den)
                })
                .collect();
            if !t.base_region.contains(&p) {
                continue;
            }
            here += 1;
            let (big, s) = dominantize(&t.lambda_l.specialize(&p));
            let hits: Vec<_> = cells.iter().filter(|c| c.region.contains(&p)).collect();
            ok &= hits.len() == 1 && hits[0].word.letters() == s.letters() && hits[0].image.specialize(&p) == big;
        }
        ok &= here == 1000;
        points += here;
    }
    outcome(
        ok,
        format!(
            "{involutions} involutions, {words} words with length = inversions, group orders and root counts, \
             {points} parametric-vs-numeric points over {} cases",
            CASES.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    let mut tested = 0;
    let mut counterexamples = 0;
    let mut all_verified = true;
    for f in [Family::A, Family::B, Family::C, Family::D] {
        for n in classical_ranks(f, 6) {
            let r = verify_classical(f, n, 10_000, DEFAULT_SEED);
            all_verified &= r.is_verified();
            let s = r.samples.as_ref();
            tested += s.map_or(0, |s| s.tested);
            counterexamples += s.map_or(usize::MAX / 64, |s| s.counterexamples);
            all_verified &= s.is_some_and(|s| s.tested >= 10_000 || s.skipped_no_hermitian_witness > 0);
            runs += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        all_verified && counterexamples == 0 && took < Duration::from_secs(600),
        format!("{runs} family/rank runs, {tested} samples tested, {counterexamples} counterexamples [limit 600s]"),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let types = all_types(8);
    let reports: Vec<VerificationReport> = types.iter().map(|d| verify_bottom_layer_sweep(d, 3)).collect();
    let took = start.elapsed();
    let failed: Vec<String> = reports.iter().filter(|r| !r.is_verified()).map(|r| r.case.clone()).collect();
    outcome(
        failed.is_empty() && took < Duration::from_secs(300),
        format!("{} types swept at cap 3, failing: {:?} [limit 300s]", types.len(), failed),
    )
}

fn main() {
    // `cargo test` passes harness flags; a name filter that excludes us skips the run
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut unexpected = Vec::new();
    let mut line = |n: usize, f: &mut dyn FnMut() -> (Outcome, bool)| {
        let start = Instant::now();
        let (o, as_recorded) = f();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} ({secs:.2}s) {}", o.detail);
        if !as_recorded {
            unexpected.push(n);
        }
    };
    let expect_pass = |o: Outcome| {
        let p = o.pass;
        (o, p)
    };
    line(1, &mut || expect_pass(threshold("g2-eta10", Duration::from_secs(1))));
    line(2, &mut || expect_pass(threshold("g2-eta20", Duration::from_secs(1))));
    line(3, &mut || expect_pass(threshold("f4-eta0010", Duration::from_secs(30))));
    line(4, &mut || expect_pass(criterion_4()));
    // recorded outcome: f4-eta0001 has genuine nonempty equality sets (see the README)
    line(5, &mut criterion_5);
    line(6, &mut || expect_pass(criterion_6()));
    line(7, &mut || expect_pass(criterion_7()));
    line(8, &mut || expect_pass(criterion_8()));
    line(9, &mut || expect_pass(criterion_9()));
    line(10, &mut || expect_pass(criterion_10()));
    if unexpected.is_empty() {
        println!("acceptance: outcomes match the recorded results");
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
