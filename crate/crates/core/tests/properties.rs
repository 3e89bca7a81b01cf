mod common;

use std::collections::HashSet;
use std::sync::OnceLock;

use common::q;
use fpp_core::levi::{compute_mcx, levi_from_eta};
use fpp_core::param::{parametric_dominantize, region_equiv, AffineForm, Constraint, Params, Region, Rel};
use fpp_core::rootsys::expected_positive_root_count;
use fpp_core::verify::{
    builtin_template, enumerate_f4_eta0001, expected_threshold, HermitianTemplate, CASES, THRESHOLD_CASES,
};
use fpp_core::weyl::{
    apply_simple, dominantize, enumerate_weyl, inversion_count, length, module_support, reduce_word,
    DEFAULT_BUDGET,
};
use fpp_core::{datum, Datum, Family, Rational, RootDatum, RootVector, Weight, WeylWord};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TYPES: [&str; 13] = ["A1", "A4", "B2", "B5", "C3", "C6", "D4", "D7", "E6", "E7", "E8", "F4", "G2"];

fn data() -> &'static [Datum] {
    static D: OnceLock<Vec<Datum>> = OnceLock::new();
    D.get_or_init(|| TYPES.iter().map(|t| datum(t)).collect())
}

fn rat() -> impl Strategy<Value = Rational> {
    (-24i64..=24, 1i64..=8).prop_map(|(n, d)| Rational::new(n, d))
}

fn rats(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rat(), len)
}

fn weight(d: &Datum, v: &[Rational]) -> Weight {
    Weight::new(d, v[..d.rank()].to_vec()).unwrap()
}

fn word_for(d: &Datum, raw: &[usize]) -> WeylWord {
    WeylWord::new(d, raw.iter().map(|r| r % d.rank() + 1).collect()).unwrap()
}

// root systems

#[test]
fn cartan_inverse_is_exact() {
    for f in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
        for n in 1..=8 {
            if !f.admits_rank(n) {
                continue;
            }
            let d = RootDatum::new(f, n).unwrap();
            let c = d.cartan();
            let inv = d.cartan_inverse();
            for i in 0..n {
                assert_eq!(c[i][i], 2);
                for j in 0..n {
                    if i != j {
                        assert!(c[i][j] <= 0);
                    }
                    let e: Rational = (0..n).map(|k| Rational::from_int(c[i][k]) * inv[k][j].clone()).sum();
                    assert_eq!(e, Rational::from_int(i64::from(i == j)), "{f}{n}");
                }
            }
        }
    }
}

#[test]
fn positive_root_counts() {
    let table = [
        ("A", 1..=8, Box::new(|n: usize| n * (n + 1) / 2) as Box<dyn Fn(usize) -> usize>),
        ("B", 2..=8, Box::new(|n| n * n)),
        ("C", 3..=8, Box::new(|n| n * n)),
        ("D", 4..=8, Box::new(|n| n * (n - 1))),
    ];
    for (f, ranks, count) in table {
        for n in ranks {
            let d = datum(&format!("{f}{n}"));
            assert_eq!(d.positive_roots().len(), count(n), "{f}{n}");
            assert_eq!(expected_positive_root_count(d.family(), n), count(n));
        }
    }
    for (t, c) in [("G2", 6), ("F4", 24), ("E6", 36), ("E7", 63), ("E8", 120)] {
        assert_eq!(datum(t).positive_roots().len(), c, "{t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pairing_is_linear(a in rats(8), b in rats(8), c in rat()) {
        for d in data() {
            let (l, m) = (weight(d, &a), weight(d, &b));
            let comb = &(&c * &l) + &m;
            for i in 1..=d.rank() {
                let lhs = comb.pairing(i).unwrap();
                let rhs = c.clone() * l.pairing(i).unwrap() + m.pairing(i).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn root_coordinates_round_trip(a in rats(8)) {
        for d in data() {
            let l = weight(d, &a);
            let rc = l.to_root_coords();
            prop_assert_eq!(&rc.to_weight(), &l);
            let back = RootVector::new(d, rc.coeffs().to_vec()).unwrap().to_weight();
            prop_assert_eq!(back, l);
        }
    }

    #[test]
    fn reflections_are_involutions(a in rats(8), i in 0usize..8) {
        for d in data() {
            let l = weight(d, &a);
            let node = i % d.rank() + 1;
            let once = apply_simple(node, &l).unwrap();
            prop_assert_eq!(apply_simple(node, &once).unwrap(), l.clone());
            // s_i λ = λ − ⟨λ, β_i^∨⟩ β_i
            let root = Weight::simple_root(d, node).unwrap();
            prop_assert_eq!(once, &l - &(&l.pairing(node).unwrap() * &root));
        }
    }
}

// Weyl groups

#[test]
fn weyl_orders() {
    let fact = |n: usize| (1..=n).product::<usize>();
    let cases: Vec<(String, usize)> = (1..=6)
        .map(|n| (format!("A{n}"), fact(n + 1)))
        .chain((2..=5).map(|n| (format!("B{n}"), (1 << n) * fact(n))))
        .chain((3..=5).map(|n| (format!("C{n}"), (1 << n) * fact(n))))
        .chain((4..=6).map(|n| (format!("D{n}"), (1 << (n - 1)) * fact(n))))
        .chain([("G2".into(), 12), ("F4".into(), 1152), ("E6".into(), 51840)])
        .collect();
    for (t, order) in cases {
        let all = enumerate_weyl(&datum(&t), None, DEFAULT_BUDGET).unwrap();
        assert_eq!(all.len(), order, "{t}");
        let keys: HashSet<Vec<i64>> = all.iter().map(|w| w.rho_image()).collect();
        assert_eq!(keys.len(), order, "{t} elements are distinct");
    }
}

fn small_groups() -> &'static [(Datum, Vec<WeylWord>)] {
    static G: OnceLock<Vec<(Datum, Vec<WeylWord>)>> = OnceLock::new();
    G.get_or_init(|| {
        ["A3", "B3", "C4", "D4", "F4", "G2", "A4", "B4"]
            .iter()
            .map(|t| {
                let d = datum(t);
                let all = enumerate_weyl(&d, None, DEFAULT_BUDGET).unwrap();
                (d, all)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn length_counts_inversions(raw in prop::collection::vec(0usize..8, 0..24)) {
        for d in data() {
            let w = word_for(d, &raw);
            let r = reduce_word(&w);
            prop_assert!(r.same_element(&w));
            prop_assert_eq!(length(&w), inversion_count(&w));
            prop_assert_eq!(r.len(), inversion_count(&r));
            prop_assert!(r.len() <= w.len());
        }
    }

    #[test]
    fn module_support_ignores_the_word(a in rats(8), raw in prop::collection::vec(0usize..8, 0..12), pad in 0usize..8, at in 0usize..12) {
        for d in data() {
            let l = weight(d, &a);
            let w = word_for(d, &raw);
            let base = module_support(&l, &w);
            prop_assert_eq!(module_support(&l, &reduce_word(&w)), base);
            let mut padded = w.letters().to_vec();
            let k = pad % d.rank() + 1;
            let pos = at.min(padded.len());
            padded.splice(pos..pos, [k, k]);
            prop_assert_eq!(module_support(&l, &WeylWord::new(d, padded).unwrap()), base);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dominantize_stays_in_the_orbit(a in rats(4)) {
        for (d, all) in small_groups() {
            let l = weight(d, &a);
            let (big, s) = dominantize(&l);
            prop_assert!(big.is_dominant());
            prop_assert_eq!(&s.apply(&l), &big);
            prop_assert!(all.iter().any(|u| u.apply(&l) == big), "{} {:?}", d.name(), l);
            // the dominant form of an orbit is unique
            let image = all[all.len() / 2].apply(&l);
            prop_assert_eq!(dominantize(&image).0, big);
        }
    }
}

// Levi subgroups

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mf_lies_in_mcx(raw in prop::collection::vec(0i64..=12, 8)) {
        for d in data() {
            let eta = Weight::from_ints(d, &raw[..d.rank()]).unwrap();
            let mf = levi_from_eta(&eta).unwrap().nodes;
            let mcx = compute_mcx(&eta).unwrap().nodes;
            prop_assert!(mf.is_subset(mcx), "{} {:?}: {} vs {}", d.name(), raw, mf, mcx);
        }
    }
}

#[test]
fn mf_lies_in_mcx_exhaustively() {
    for t in ["A3", "B3", "C3", "D4", "G2", "F4", "B4", "A4"] {
        let d = datum(t);
        let n = d.rank();
        for code in 0..5usize.pow(n as u32) {
            let coords: Vec<i64> = (0..n).map(|k| ((code / 5usize.pow(k as u32)) % 5) as i64).collect();
            let eta = Weight::from_ints(&d, &coords).unwrap();
            let mf = levi_from_eta(&eta).unwrap().nodes;
            assert!(mf.is_subset(compute_mcx(&eta).unwrap().nodes), "{t} {coords:?}");
        }
    }
}

// parametric regions

fn grid(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let den = [1, 2, 3, 4, 6, 8, 12][rng.gen_range(0..7)];
    Rational::new(rng.gen_range(lo * den..=hi * den), den)
}

/// Random grid points of `r`: a box search plus jitter around its witness.
fn sample_region(r: &Region, n: usize, tries: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let dim = r.params().len();
    let mut out: Vec<Vec<Rational>> = r.witness().map(|w| vec![w.to_vec()]).unwrap_or_default();
    for t in 0..tries {
        if out.len() >= n {
            break;
        }
        let p: Vec<Rational> = match (t % 2, r.witness()) {
            (0, Some(w)) => w.iter().map(|c| c.clone() + grid(rng, -1, 1)).collect(),
            _ => (0..dim).map(|_| grid(rng, -1, 6)).collect(),
        };
        if r.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn templates() -> Vec<HermitianTemplate> {
    CASES.iter().map(|c| builtin_template(c).unwrap()).collect()
}

#[test]
fn cells_agree_with_numeric_dominantize() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in templates() {
        let cells = parametric_dominantize(&t.lambda_l, &t.base_region).unwrap();
        assert!(!cells.is_empty());
        for cell in &cells {
            assert!(!cell.region.is_empty());
            for c in cell.image.coords() {
                assert!(cell.region.implies_nonneg(c), "{}: image not dominant on a cell", t.name);
            }
            let pts = sample_region(&cell.region, 100, 600, &mut rng);
            assert!(!pts.is_empty());
            for p in pts {
                let (big, s) = dominantize(&t.lambda_l.specialize(&p));
                assert_eq!(s.letters(), cell.word.letters(), "{} at {p:?}", t.name);
                assert_eq!(big, cell.image.specialize(&p), "{} at {p:?}", t.name);
            }
        }
    }
}

#[test]
fn cells_cover_the_base_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for t in templates() {
        let cells = parametric_dominantize(&t.lambda_l, &t.base_region).unwrap();
        let pts = sample_region(&t.base_region, 1000, 200_000, &mut rng);
        assert_eq!(pts.len(), 1000, "{}", t.name);
        for p in &pts {
            let hits: Vec<_> = cells.iter().filter(|c| c.region.contains(p)).collect();
            assert_eq!(hits.len(), 1, "{} at {p:?}", t.name);
            let (big, s) = dominantize(&t.lambda_l.specialize(p));
            assert_eq!(s.letters(), hits[0].word.letters());
            assert_eq!(big, hits[0].image.specialize(p));
        }
    }
}

fn random_system(rng: &mut ChaCha8Rng, p: &Params) -> Region {
    let k = rng.gen_range(2..=6);
    let cs = (0..k)
        .map(|_| {
            let form = AffineForm::new(
                Rational::from_int(rng.gen_range(-4..=4)),
                (0..3).map(|_| Rational::from_int(rng.gen_range(-3..=3))).collect(),
            );
            let rel = [Rel::Lt, Rel::Le, Rel::Le, Rel::Eq][rng.gen_range(0..4)];
            Constraint::new(form, rel)
        })
        .collect();
    Region::from_constraints(p, cs)
}

#[test]
fn emptiness_agrees_with_point_search() {
    let p = Params::new(&["x", "y", "z"]);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut empty, mut found) = (0, 0);
    for _ in 0..500 {
        let r = random_system(&mut rng, &p);
        if let Some(w) = r.witness() {
            assert!(r.contains(w), "{r:?}");
        } else {
            empty += 1;
        }
        for _ in 0..400 {
            let pt: Vec<Rational> = (0..3).map(|_| grid(&mut rng, -6, 6)).collect();
            if r.contains(&pt) {
                assert!(!r.is_empty(), "{r:?} contains {pt:?}");
                found += 1;
                break;
            }
        }
    }
    assert!(empty > 20 && found > 20, "{empty} empty, {found} found");
}

#[test]
fn elimination_keeps_strictness() {
    let p = Params::new(&["x", "a", "b"]);
    let r = |s: &str| Region::parse(&p, s).unwrap();
    assert!(r("x < a, x > b, a = b").is_empty());
    assert!(!r("x <= a, x >= b, a = b").is_empty());
    assert!(r("x < a, x >= b, a <= b").is_empty());
    assert!(!r("x < a, x > b, a <= b + 1/1000").is_empty());
    assert!(r("x < a, x > b, a < b + 1/1000, b - a >= 0").is_empty());
    // the projection of {x < a, x > b} onto (a, b) is exactly {b < a}
    let strip = r("x < a, x > b");
    let w = strip.witness().unwrap();
    assert!(w[2] < w[1]);
}

// named cases

#[test]
fn templates_respect_their_invariants() {
    for t in templates() {
        assert_eq!(&t.lambda_l - &t.lambda_r, t.eta, "{}", t.name);
        let rc = t.nu().to_root_coords();
        for (k, c) in rc.iter().enumerate() {
            if !t.mf_nodes.contains(k + 1) {
                assert_eq!(*c, AffineForm::zero(), "{}: nu leaves the span at node {}", t.name, k + 1);
            }
        }
        if let Some(eta) = t.constant_eta() {
            assert!(eta.is_dominant() && eta.is_integral());
            assert_eq!(levi_from_eta(&eta).unwrap().nodes, t.mf_nodes, "{}", t.name);
        }
    }
}

#[test]
fn thresholds_match_numeric_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for case in THRESHOLD_CASES {
        let t = builtin_template(case).unwrap();
        let inside = expected_threshold(case).unwrap();
        let (mut pos, mut neg) = (0, 0);
        let mut attempts = 0;
        while (pos < 200 || neg < 200) && attempts < 500_000 {
            attempts += 1;
            let p: Vec<Rational> = (0..t.params.len()).map(|_| grid(&mut rng, 0, 5)).collect();
            if !t.base_region.contains(&p) {
                continue;
            }
            let hyp = inside.iter().any(|r| r.contains(&p));
            let out = !dominantize(&t.lambda_l.specialize(&p)).0.inside_fpp();
            assert_eq!(hyp, out, "{case} at {p:?}");
            if hyp {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        assert!(pos >= 200 && neg >= 200, "{case}: {pos} inside, {neg} outside");
        // boundary points decided exactly
        let edge = match case {
            "g2-eta10" => vec![q(3, 2)],
            "g2-eta20" => vec![q(2, 3)],
            _ => vec![q(2, 1), q(1, 4)],
        };
        assert!(dominantize(&t.lambda_l.specialize(&edge)).0.inside_fpp(), "{case}");
    }
}

#[test]
fn f4_witness_points_check_out() {
    let t = builtin_template("f4-eta0001").unwrap();
    let elements = enumerate_f4_eta0001().unwrap();
    assert_eq!(elements.len(), 29);
    for e in &elements {
        for piece in &e.pieces {
            let p = piece.witness().unwrap();
            assert!(t.base_region.contains(p));
            let lam = t.lambda_l.specialize(p);
            let image = e.word.apply(&lam);
            assert_eq!(image, e.image.specialize(p));
            assert!(image.is_dominant(), "{} at {p:?}", e.word);
            assert!(!image.inside_fpp(), "{} at {p:?}", e.word);
            assert!(p.iter().any(|c| *c > Rational::one()), "{} at {p:?}", e.word);
            assert_eq!(dominantize(&lam).0, image);
        }
    }
    let w1 = elements.iter().find(|e| e.word.letters() == [1, 2, 3, 4]).unwrap();
    let bullets = fpp_core::verify::f4_eta0001_bullets(&t.params).unwrap();
    assert!(region_equiv(&w1.pieces, &bullets));
}
