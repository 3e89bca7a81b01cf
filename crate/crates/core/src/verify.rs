//! Named, reproducible verifications of the exceptional parametric cases,
//! the character-formula exclusion test, the classical template sampler and
//! the bottom-layer sweeps.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::levi::{component_gammas, levi_from_eta, LeviTable};
use crate::param::{
    outside_fpp_regions, parametric_dominantize, region_difference, region_equiv, solve_equal, AffineForm,
    AffineWeight, Cell, Constraint, Params, Region, Rel,
};
use crate::rational::Rational;
use crate::rootsys::{datum, Datum, Family, NodeSet, RootDatum, Weight};
use crate::weyl::{
    dominantize, dominantize_within, enumerate_weyl, is_hermitian_pair, module_support,
    ModulePair, WeylWord, DEFAULT_BUDGET,
};

pub const CASES: [&str; 7] = [
    "g2-eta10",
    "g2-eta20",
    "f4-eta0010",
    "f4-eta0001",
    "f4-reduction-0020",
    "g2-reduction-a0",
    "g2-reduction-0b",
];

pub const THRESHOLD_CASES: [&str; 3] = ["g2-eta10", "g2-eta20", "f4-eta0010"];
pub const REDUCTION_CASES: [&str; 3] = ["f4-reduction-0020", "g2-reduction-a0", "g2-reduction-0b"];
pub const DEFAULT_SEED: u64 = 0x5eed_f00d;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_CLASSICAL_RANK_CAP: usize = 6;

/// A family of module parameters `(λ_L, λ_R)` with `λ_L − λ_R = η`.
#[derive(Clone, Debug)]
pub struct HermitianTemplate {
    pub name: String,
    pub datum: Datum,
    pub params: Params,
    pub eta: AffineWeight,
    pub lambda_l: AffineWeight,
    pub lambda_r: AffineWeight,
    pub base_region: Region,
    pub mf_nodes: NodeSet,
}

impl HermitianTemplate {
    /// `η` when it does not depend on the parameters.
    pub fn constant_eta(&self) -> Option<Weight> {
        let coords: Option<Vec<Rational>> = self
            .eta
            .coords()
            .iter()
            .map(|f| f.is_constant().then(|| f.constant_term().clone()))
            .collect();
        coords.map(|c| Weight::new(&self.datum, c).expect("rank"))
    }

    pub fn nu(&self) -> AffineWeight {
        &self.lambda_l + &self.lambda_r
    }
}

fn template(
    name: &str,
    ty: &str,
    params: &[&str],
    eta: &str,
    lambda_l: &str,
    lambda_r: &str,
    base: &str,
    mf: &[usize],
) -> Result<HermitianTemplate> {
    let d = datum(ty);
    let p = Params::new(params);
    Ok(HermitianTemplate {
        name: name.to_string(),
        eta: AffineWeight::parse(&d, &p, eta)?,
        lambda_l: AffineWeight::parse(&d, &p, lambda_l)?,
        lambda_r: AffineWeight::parse(&d, &p, lambda_r)?,
        base_region: Region::parse(&p, base)?,
        mf_nodes: NodeSet::from_nodes(mf.iter().copied()),
        datum: d,
        params: p,
    })
}

pub fn builtin_template(case: &str) -> Result<HermitianTemplate> {
    match case {
        "g2-eta10" => template(case, "G2", &["x"], "1;0", "1/2-3x; 2x", "-1/2-3x; 2x", "x >= 0", &[2]),
        "g2-eta20" => template(case, "G2", &["x"], "2;0", "1-3x; 2x", "-1-3x; 2x", "x >= 0", &[2]),
        "f4-eta0010" => template(
            case,
            "F4",
            &["x", "z"],
            "0;0;1;0",
            "x; x; 1/2-2x-z; 2z",
            "x; x; -1/2-2x-z; 2z",
            "x >= 0, z >= 0, z <= 1/2",
            &[1, 2, 4],
        ),
        "f4-eta0001" => template(
            case,
            "F4",
            &["a", "b", "c"],
            "0;0;0;1",
            "a; b; c; 1/2-a-2b-3/2c",
            "a; b; c; -1/2-a-2b-3/2c",
            "a >= 0, b >= 0, c >= 0",
            &[1, 2, 3],
        ),
        "f4-reduction-0020" => template(
            case,
            "F4",
            &["x", "y"],
            "0;0;2;0",
            "x; x; 1-2x-y; 2y",
            "x; x; -1-2x-y; 2y",
            "x >= 0, x <= 1, y >= 0, y <= 1/2",
            &[1, 2, 4],
        ),
        "g2-reduction-a0" => template(
            case,
            "G2",
            &["a", "x"],
            "a; 0",
            "1/2a-3x; 2x",
            "-1/2a-3x; 2x",
            "a >= 3, x >= 0, x <= 1/2",
            &[2],
        ),
        "g2-reduction-0b" => template(
            case,
            "G2",
            &["b", "y"],
            "0; b",
            "2y; 1/2b-y",
            "2y; -1/2b-y",
            "b >= 1, y >= 0, y <= 1/2",
            &[1],
        ),
        _ => Err(invalid(format!("unknown case {case:?}; known cases: {}", CASES.join(", ")))),
    }
}

/// The outside-FPP set asserted for a threshold case.
pub fn expected_threshold(case: &str) -> Result<Vec<Region>> {
    let t = builtin_template(case)?;
    let text = match case {
        "g2-eta10" => "x > 3/2",
        "g2-eta20" => "x > 2/3",
        "f4-eta0010" => "x > 2, z >= 0, z <= 1/2",
        _ => return Err(invalid(format!("{case} is not a threshold case"))),
    };
    Ok(vec![Region::parse(&t.params, text)?])
}

/// The indefinite K-types whose multiplicity the second part must not touch.
pub fn case_gammas(case: &str) -> Result<Vec<Weight>> {
    let t = builtin_template(case)?;
    let list: &[&str] = match case {
        "g2-eta10" => &["2,0"],
        "g2-eta20" => &["1,1"],
        "f4-eta0010" => &["1,0,0,1", "0,0,0,2"],
        "f4-eta0001" => &["0,0,1,0"],
        _ => return Err(invalid(format!("{case} has no recorded gamma list"))),
    };
    list.iter().map(|s| Weight::parse(&t.datum, s)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Verified,
    Counterexample,
    Error,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SampleStats {
    pub requested: usize,
    pub tested: usize,
    pub attempts: usize,
    pub skipped_block_outside_fpp: usize,
    pub skipped_no_hermitian_witness: usize,
    pub outside_fpp: usize,
    pub support_condition: usize,
    pub fully_supported: usize,
    pub counterexamples: usize,
}

/// Machine-readable outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub case: String,
    pub status: ReportStatus,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regions: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleStats>,
    pub inputs: Value,
    pub details: Value,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    fn new(case: &str, inputs: Value) -> Self {
        VerificationReport {
            case: case.to_string(),
            status: ReportStatus::Verified,
            summary: String::new(),
            count: None,
            regions: None,
            witnesses: None,
            samples: None,
            inputs,
            details: json!({}),
            elapsed_ms: 0,
        }
    }

    fn error(case: &str, inputs: Value, e: &Error) -> Self {
        let mut r = VerificationReport::new(case, inputs);
        r.status = ReportStatus::Error;
        r.summary = e.to_string();
        r
    }

    pub fn is_verified(&self) -> bool {
        self.status == ReportStatus::Verified
    }

    /// One-line human-readable verdict.
    pub fn verdict_line(&self) -> String {
        let tag = match self.status {
            ReportStatus::Verified => "VERIFIED",
            ReportStatus::Counterexample => "COUNTEREXAMPLE",
            ReportStatus::Error => "ERROR",
        };
        format!("{tag} {}: {}", self.case, self.summary)
    }
}

fn timed(case: &str, inputs: Value, f: impl FnOnce(&mut VerificationReport) -> Result<()>) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(case, inputs.clone());
    if let Err(e) = f(&mut report) {
        report = VerificationReport::error(case, inputs, &e);
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

fn region_strings(rs: &[Region]) -> Vec<Vec<String>> {
    rs.iter().map(|r| r.simplified().strings()).collect()
}

fn point_json(params: &Params, point: &[Rational]) -> Value {
    let map: serde_json::Map<String, Value> = params
        .names()
        .iter()
        .zip(point)
        .map(|(n, v)| (n.clone(), Value::String(v.to_string())))
        .collect();
    Value::Object(map)
}

/// Outside-FPP pieces of the dominantized `λ_L` over the base region.
pub fn outside_fpp_set(t: &HermitianTemplate) -> Result<(Vec<Cell>, Vec<Region>)> {
    let cells = parametric_dominantize(&t.lambda_l, &t.base_region)?;
    let out = outside_fpp_regions(&cells);
    Ok((cells, out))
}

pub fn verify_outside_fpp_threshold(case: &str) -> VerificationReport {
    timed(case, json!({ "case": case, "check": "threshold" }), |rep| {
        if !THRESHOLD_CASES.contains(&case) {
            return Err(invalid(format!("{case} is not a threshold case")));
        }
        let t = builtin_template(case)?;
        let expected = expected_threshold(case)?;
        let (cells, out) = outside_fpp_set(&t)?;
        let ok = region_equiv(&out, &expected);
        rep.status = if ok { ReportStatus::Verified } else { ReportStatus::Counterexample };
        rep.summary = format!(
            "outside-FPP set {} {{{}}} ({} cells, {} pieces)",
            if ok { "equals" } else { "differs from" },
            expected[0].strings().join(", "),
            cells.len(),
            out.len()
        );
        rep.count = Some(cells.len());
        rep.regions = Some(region_strings(&out));
        if !ok {
            let mut wits = Vec::new();
            for r in &out {
                for piece in region_difference(r, &expected) {
                    wits.push(json!({ "in_computed_only": point_json(&t.params, piece.witness().unwrap()) }));
                }
            }
            for r in &expected {
                for piece in region_difference(r, &out) {
                    wits.push(json!({ "in_threshold_only": point_json(&t.params, piece.witness().unwrap()) }));
                }
            }
            rep.witnesses = Some(wits);
        }
        rep.details = json!({
            "lambda_l": t.lambda_l.pretty(),
            "base_region": t.base_region.simplified().strings(),
            "threshold": region_strings(&expected),
            "cells": cells.iter().map(|c| json!({
                "word": c.word.to_string(),
                "image": c.image.pretty(),
                "region": c.region.simplified().strings(),
            })).collect::<Vec<_>>(),
        });
        Ok(())
    })
}

/// One Weyl element `w_1` with a nonempty outside-FPP witness region.
#[derive(Clone, Debug)]
pub struct WitnessElement {
    pub word: WeylWord,
    pub image: AffineWeight,
    /// Disjunction of conjunctions; each piece is nonempty.
    pub pieces: Vec<Region>,
}

/// For every `w_1 ∈ W`, the set of parameters where `w_1 λ` is dominant,
/// outside FPP and `max{a, b, c} > 1`.
pub fn enumerate_f4_eta0001() -> Result<Vec<WitnessElement>> {
    static CACHE: OnceLock<Result<Vec<WitnessElement>>> = OnceLock::new();
    CACHE.get_or_init(enumerate_f4_eta0001_uncached).clone()
}

fn enumerate_f4_eta0001_uncached() -> Result<Vec<WitnessElement>> {
    let t = builtin_template("f4-eta0001")?;
    let one = AffineForm::constant(Rational::one());
    let maxes: Vec<Constraint> =
        ["a", "b", "c"].iter().map(|n| Constraint::gt(&t.params.var(n), &one)).collect();
    let elements = enumerate_weyl(&t.datum, None, DEFAULT_BUDGET)?;
    let found: Vec<Option<WitnessElement>> = elements
        .par_iter()
        .map(|w| {
            let image = t.lambda_l.apply_word(w);
            let dominant = t
                .base_region
                .and_all(image.coords().iter().map(|f| Constraint::new(-f, Rel::Le)));
            if dominant.is_empty() {
                return None;
            }
            let mut pieces = Vec::new();
            for m in &maxes {
                let r = dominant.and(m.clone());
                if r.is_empty() {
                    continue;
                }
                for f in image.coords() {
                    let piece = r.and(Constraint::gt(f, &one));
                    if !piece.is_empty() {
                        pieces.push(piece);
                    }
                }
            }
            (!pieces.is_empty()).then(|| WitnessElement { word: w.clone(), image, pieces })
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

/// The three regions quoted for `w_1 = s_1 s_2 s_3 s_4`.
pub fn f4_eta0001_bullets(params: &Params) -> Result<Vec<Region>> {
    [
        "a >= 0, a < 1/2, b > 1 + a, b <= 3/2, c > 3 - 2b, c <= 1 - 2a",
        "a >= 0, a < 1/2, b > 3/2, c >= 0, c <= 1 - 2a",
        "a = 1/2, b > 3/2, c = 0",
    ]
    .iter()
    .map(|s| Region::parse(params, s))
    .collect()
}

pub fn enumerate_outside_fpp_witnesses(case: &str) -> VerificationReport {
    timed(case, json!({ "case": case, "check": "enumeration" }), |rep| {
        if case != "f4-eta0001" {
            return Err(invalid(format!("{case} has no witness enumeration")));
        }
        let t = builtin_template(case)?;
        let found = enumerate_f4_eta0001()?;
        let target = WeylWord::new(&t.datum, vec![1, 2, 3, 4])?;
        let expected_image =
            AffineWeight::parse(&t.datum, &t.params, "b + 1/2c - 1/2; a; -a - 1/2c + 1/2; c")?;
        let bullets = f4_eta0001_bullets(&t.params)?;
        let sample = found.iter().find(|e| e.word.same_element(&target));
        let image_ok = sample.is_some_and(|e| e.image == expected_image);
        let region_ok = sample.is_some_and(|e| region_equiv(&e.pieces, &bullets));
        let ok = found.len() == 29 && image_ok && region_ok;
        rep.status = if ok { ReportStatus::Verified } else { ReportStatus::Counterexample };
        rep.summary = format!(
            "{} Weyl elements admit an outside-FPP witness region; s1s2s3s4 image {}, region {}",
            found.len(),
            if image_ok { "matches" } else { "differs" },
            if region_ok { "matches the three bullets" } else { "differs from the three bullets" }
        );
        rep.count = Some(found.len());
        rep.witnesses = Some(
            found
                .iter()
                .map(|e| {
                    json!({
                        "word": e.word.to_string(),
                        "rho_image": e.word.rho_image(),
                        "image": e.image.pretty(),
                        "point": point_json(&t.params, e.pieces[0].witness().unwrap()),
                        "regions": region_strings(&e.pieces),
                    })
                })
                .collect(),
        );
        rep.details = json!({
            "s1s2s3s4": {
                "image": sample.map(|e| e.image.pretty()),
                "expected_image": expected_image.pretty(),
                "regions": sample.map(|e| region_strings(&e.pieces)),
                "expected_regions": region_strings(&bullets),
            }
        });
        Ok(())
    })
}

/// Hypothesis regions under which the second part is examined.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    /// `threshold`, or the word of the dominantizing element `w_1`.
    pub label: String,
    pub region: Region,
}

pub fn hypothesis_regions(case: &str) -> Result<Vec<Hypothesis>> {
    let t = builtin_template(case)?;
    if case == "f4-eta0001" {
        return Ok(enumerate_f4_eta0001()?
            .into_iter()
            .flat_map(|e| {
                let label = e.word.to_string();
                e.pieces.into_iter().map(move |region| Hypothesis { label: label.clone(), region })
            })
            .collect());
    }
    Ok(expected_threshold(case)?
        .iter()
        .map(|r| Hypothesis { label: "threshold".into(), region: t.base_region.intersect(r) })
        .collect())
}

/// A parameter set where `{λ_L − w' λ_R}` equals `γ` for some `w' ∉ W(M_f)`.
#[derive(Clone, Debug)]
pub struct ExclusionFailure {
    pub word: WeylWord,
    pub gamma: Weight,
    /// Index into the hypothesis regions.
    pub hypothesis: usize,
    pub region: Region,
    /// Part of `region` where `λ_L` is regular; empty when the failure lives on walls only.
    pub regular_part: Vec<Region>,
    /// Whether `λ_L − w'λ_R ∈ η + Q⁺` somewhere on `region`.
    pub above_eta: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ExclusionOutcome {
    pub elements: usize,
    pub pairs_examined: usize,
    pub cells: usize,
    /// Equality sets removed because the pair `(λ_L, w'λ_R)` is conjugate to a first-part pair.
    pub absorbed: usize,
    pub failures: Vec<ExclusionFailure>,
}

/// Which `w'` enter the second part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondPartScope {
    /// Only `w'` with `λ_L − w'λ_R ∈ η + Q⁺`, the terms the exclusion claim speaks about.
    AboveEta,
    /// Every `w' ∉ W(M_f)`.
    All,
}

fn eq_all(a: &AffineWeight, b: &AffineWeight) -> Vec<Constraint> {
    a.coords().iter().zip(b.coords()).map(|(x, y)| Constraint::eq(x, y)).collect()
}

fn nonneg_root_coords(w: &AffineWeight) -> Vec<Constraint> {
    w.to_root_coords().into_iter().map(|f| Constraint::new(-f, Rel::Le)).collect()
}

/// Checks that no `w' ∉ W(M_f)` makes the dominant form of `λ_L − w' λ_R`
/// equal to any `γ` on any hypothesis region.
pub fn second_part_outcome(case: &str, gammas: &[Weight], scope: SecondPartScope) -> Result<ExclusionOutcome> {
    let t = builtin_template(case)?;
    let hyps = hypothesis_regions(case)?;
    let all = enumerate_weyl(&t.datum, None, DEFAULT_BUDGET)?;
    let (inside, outside): (Vec<WeylWord>, Vec<WeylWord>) =
        all.iter().cloned().partition(|w| w.support().is_subset(t.mf_nodes));
    let mut orbit: Vec<AffineWeight> = Vec::new();
    for u in &inside {
        let img = t.lambda_r.apply_word(u);
        if !orbit.contains(&img) {
            orbit.push(img);
        }
    }
    let walls: Vec<AffineForm> = t
        .datum
        .positive_coroots()
        .iter()
        .map(|co| {
            co.iter().zip(t.lambda_l.coords()).fold(AffineForm::zero(), |acc, (k, f)| {
                &acc + &(&Rational::from_int(*k) * f)
            })
        })
        .collect();
    let per_element: Vec<Result<ExclusionOutcome>> = outside
        .par_iter()
        .map(|w| {
            let image = t.lambda_r.apply_word(w);
            let mu = &t.lambda_l - &image;
            let mut acc = ExclusionOutcome::default();
            let above = nonneg_root_coords(&(&mu - &t.eta));
            let premise = match scope {
                SecondPartScope::AboveEta => above.clone(),
                SecondPartScope::All => Vec::new(),
            };
            for gamma in gammas {
                // {μ} = γ forces γ − μ to be a nonnegative root combination
                let below = nonneg_root_coords(&(&AffineWeight::from_weight(gamma, &t.params) - &mu));
                for (hi, h) in hyps.iter().enumerate() {
                    acc.pairs_examined += 1;
                    let pruned = h.region.and_all(premise.iter().cloned()).and_all(below.iter().cloned());
                    if pruned.is_empty() {
                        continue;
                    }
                    for cell in parametric_dominantize(&mu, &pruned)? {
                        acc.cells += 1;
                        let hit = solve_equal(&cell.image, gamma, &cell.region);
                        if hit.is_empty() {
                            continue;
                        }
                        // (λ_L, w'λ_R) ~ (uλ_L, uw'λ_R); conjugate to (λ_L, vλ_R) with v ∈ W(M_f)
                        // means the term already belongs to the first part
                        let mut same = Vec::new();
                        for u in &all {
                            let fix = hit.and_all(eq_all(&t.lambda_l.apply_word(u), &t.lambda_l));
                            if fix.is_empty() {
                                continue;
                            }
                            let moved = image.apply_word(u);
                            for v in &orbit {
                                let r = fix.and_all(eq_all(&moved, v));
                                if !r.is_empty() {
                                    same.push(r);
                                }
                            }
                        }
                        if !same.is_empty() {
                            acc.absorbed += 1;
                        }
                        for region in region_difference(&hit, &same) {
                            let on_walls: Vec<Region> = walls
                                .iter()
                                .map(|f| region.and(Constraint::new(f.clone(), Rel::Eq)))
                                .filter(|r| !r.is_empty())
                                .collect();
                            let regular_part = region_difference(&region, &on_walls);
                            let above_eta = !region.and_all(above.iter().cloned()).is_empty();
                            acc.failures.push(ExclusionFailure {
                                word: w.clone(),
                                gamma: gamma.clone(),
                                hypothesis: hi,
                                region,
                                regular_part,
                                above_eta,
                            });
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = ExclusionOutcome { elements: outside.len(), ..Default::default() };
    for r in per_element {
        let r = r?;
        total.pairs_examined += r.pairs_examined;
        total.cells += r.cells;
        total.absorbed += r.absorbed;
        total.failures.extend(r.failures);
    }
    Ok(total)
}

pub fn second_part_excludes(case: &str, gammas: &[Weight]) -> VerificationReport {
    let inputs = json!({
        "case": case,
        "check": "second-part",
        "gammas": gammas.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    });
    timed(case, inputs, |rep| {
        let t = builtin_template(case)?;
        let hyps = hypothesis_regions(case)?;
        let out = second_part_outcome(case, gammas, SecondPartScope::All)?;
        let ok = out.failures.is_empty();
        let above = out.failures.iter().filter(|f| f.above_eta).count();
        let regular = out.failures.iter().filter(|f| !f.regular_part.is_empty()).count();
        rep.status = if ok { ReportStatus::Verified } else { ReportStatus::Counterexample };
        rep.summary = format!(
            "{} elements outside W({}) checked against {}; {} nonempty equality sets",
            out.elements,
            t.mf_nodes,
            gammas.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" and "),
            out.failures.len()
        );
        if !ok {
            rep.summary.push_str(&format!(
                " ({above} with lambda_L - w' lambda_R in eta + Q+, {regular} meeting regular lambda_L)"
            ));
        }
        rep.count = Some(out.failures.len());
        if !ok {
            rep.witnesses = Some(
                out.failures
                    .iter()
                    .map(|f| {
                        let point = f.regular_part.first().unwrap_or(&f.region).witness().unwrap();
                        json!({
                            "word": f.word.to_string(),
                            "gamma": f.gamma.to_string(),
                            "hypothesis": hyps[f.hypothesis].label,
                            "point": point_json(&t.params, point),
                            "above_eta": f.above_eta,
                            "regular": !f.regular_part.is_empty(),
                            "region": f.region.simplified().strings(),
                        })
                    })
                    .collect(),
            );
        }
        rep.details = json!({
            "mu": "lambda_l - w' lambda_r",
            "elements": out.elements,
            "hypothesis_regions": hyps.len(),
            "pairs_examined": out.pairs_examined,
            "cells": out.cells,
            "conjugate_to_first_part": out.absorbed,
            "failures_above_eta": above,
            "failures_with_regular_lambda": regular,
        });
        Ok(())
    })
}

pub fn verify_reduction_case(case: &str) -> VerificationReport {
    timed(case, json!({ "case": case, "check": "reduction" }), |rep| {
        let t = builtin_template(case)?;
        let zero = AffineForm::zero();
        match case {
            "f4-reduction-0020" => {
                let third = &t.lambda_l.coords()[2];
                let region = t.base_region.and(Constraint::lt(third, &zero));
                let cells = parametric_dominantize(&t.lambda_l, &region)?;
                let out = outside_fpp_regions(&cells);
                rep.status = if out.is_empty() { ReportStatus::Verified } else { ReportStatus::Counterexample };
                rep.summary = format!(
                    "{} dominantization cells over {{{}}}; {} outside FPP",
                    cells.len(),
                    region.strings().join(", "),
                    out.len()
                );
                rep.count = Some(cells.len());
                rep.regions = Some(region_strings(&out));
                if !out.is_empty() {
                    rep.witnesses = Some(
                        out.iter().map(|r| point_json(&t.params, r.witness().unwrap())).collect(),
                    );
                }
                rep.details = json!({
                    "cells": cells.iter().map(|c| json!({
                        "word": c.word.to_string(),
                        "image": c.image.pretty(),
                        "region": c.region.simplified().strings(),
                    })).collect::<Vec<_>>(),
                });
            }
            "g2-reduction-a0" | "g2-reduction-0b" => {
                let k = if case == "g2-reduction-a0" { 0 } else { 1 };
                let coord = &t.lambda_l.coords()[k];
                let region = t.base_region.and(Constraint::lt(coord, &zero));
                let empty = region.is_empty();
                rep.status = if empty { ReportStatus::Verified } else { ReportStatus::Counterexample };
                rep.summary = format!(
                    "region {{{}}} is {}",
                    region.strings().join(", "),
                    if empty { "empty" } else { "nonempty" }
                );
                rep.regions = Some(vec![region.strings()]);
                if let Some(w) = region.witness() {
                    rep.witnesses = Some(vec![point_json(&t.params, w)]);
                }
            }
            _ => return Err(invalid(format!("{case} is not a reduction case"))),
        }
        Ok(())
    })
}

/// Every check attached to a named case.
pub fn verify_case(case: &str) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    if THRESHOLD_CASES.contains(&case) {
        out.push(verify_outside_fpp_threshold(case));
    }
    if case == "f4-eta0001" {
        out.push(enumerate_outside_fpp_witnesses(case));
    }
    if THRESHOLD_CASES.contains(&case) || case == "f4-eta0001" {
        match case_gammas(case) {
            Ok(g) => out.push(second_part_excludes(case, &g)),
            Err(e) => out.push(VerificationReport::error(case, json!({ "case": case }), &e)),
        }
    }
    if REDUCTION_CASES.contains(&case) {
        out.push(verify_reduction_case(case));
    }
    if out.is_empty() {
        let e = invalid(format!("unknown case {case:?}; known cases: {}", CASES.join(", ")));
        out.push(VerificationReport::error(case, json!({ "case": case }), &e));
    }
    out
}

// ---------------------------------------------------------------------------
// classical templates

/// One drawn classical parameter in usual coordinates.
#[derive(Clone, Debug)]
pub struct ClassicalSample {
    pub family: Family,
    pub rank: usize,
    /// `η / 2` in usual coordinates.
    pub shift: Vec<Rational>,
    /// `ν` in usual coordinates.
    pub nu: Vec<Rational>,
    /// Block lengths, left to right.
    pub blocks: Vec<usize>,
}

impl ClassicalSample {
    pub fn lambda_usual(&self) -> Vec<Rational> {
        self.shift.iter().zip(&self.nu).map(|(a, b)| a + b).collect()
    }

    pub fn eta_usual(&self) -> Vec<Rational> {
        self.shift.iter().map(|h| h * &Rational::from_int(2)).collect()
    }
}

fn step(rng: &mut ChaCha8Rng, half_only: bool, cap: i64) -> Rational {
    if half_only {
        Rational::new(rng.gen_range(0..=cap.min(2)), 2)
    } else if rng.gen_bool(0.9) {
        Rational::new(rng.gen_range(0..=8), 8)
    } else {
        Rational::new(rng.gen_range(9..=12), 8)
    }
}

/// `α(ℓ) = (a_1, …, a_m, [0], −a_m, …, −a_1)` with `a_1 ≥ … ≥ a_m ≥ 0`.
fn alpha(rng: &mut ChaCha8Rng, len: usize, half_only: bool) -> Vec<Rational> {
    let m = len / 2;
    let mut inner = Vec::with_capacity(m);
    let mut cur = Rational::zero();
    for k in 0..m {
        let d = step(rng, half_only, 2);
        // the innermost pair differs by 2 a_m, the middle zero by a_m
        cur = if k == 0 && len % 2 == 0 { &d * &Rational::new(1, 2) } else { &cur + &d };
        inner.push(cur.clone());
    }
    let mut out: Vec<Rational> = inner.iter().rev().cloned().collect();
    if len % 2 == 1 {
        out.push(Rational::zero());
    }
    out.extend(inner.iter().map(|a| -a));
    out
}

/// `ν(ℓ) = (ν_1 ≥ … ≥ ν_ℓ ≥ 0)`.
fn nu_block(rng: &mut ChaCha8Rng, len: usize, half_only: bool) -> Vec<Rational> {
    let mut out = Vec::with_capacity(len);
    let mut cur = Rational::zero();
    for k in 0..len {
        let d = step(rng, half_only, 2);
        cur = if k == 0 { &d * &Rational::new(1, 2) } else { &cur + &d };
        out.push(cur.clone());
    }
    out.reverse();
    out
}

fn composition(rng: &mut ChaCha8Rng, total: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = total;
    while left > 0 {
        let p = rng.gen_range(1..=left.min(4));
        parts.push(p);
        left -= p;
    }
    parts
}

/// Strictly decreasing shifts ending at `bottom`, spaced by multiples of `1/2`.
fn shifts(rng: &mut ChaCha8Rng, count: usize, bottom: Rational) -> Vec<Rational> {
    let mut out = vec![bottom];
    for _ in 1..count {
        let gap = if rng.gen_bool(0.75) { 1 } else { rng.gen_range(2..=3) };
        let next = out.last().unwrap() + &Rational::new(gap, 2);
        out.push(next);
    }
    out.reverse();
    out
}

pub fn draw_classical(family: Family, rank: usize, rng: &mut ChaCha8Rng) -> ClassicalSample {
    let len = if family == Family::A { rank + 1 } else { rank };
    let half_only = rng.gen_bool(0.3);
    let mut shift = Vec::with_capacity(len);
    let mut nu = Vec::with_capacity(len);
    let mut blocks = Vec::new();
    let push_alpha = |shift: &mut Vec<Rational>, nu: &mut Vec<Rational>, s: &Rational, l: usize, rng: &mut ChaCha8Rng| {
        shift.extend(std::iter::repeat(s.clone()).take(l));
        nu.extend(alpha(rng, l, half_only));
    };
    match family {
        Family::A => {
            let parts = composition(rng, len);
            let bottom = Rational::new(rng.gen_range(0..=2), 2);
            for (s, &l) in shifts(rng, parts.len(), bottom).iter().zip(&parts) {
                push_alpha(&mut shift, &mut nu, s, l, rng);
            }
            blocks = parts;
        }
        Family::B | Family::D => {
            if rng.gen_bool(0.5) {
                // integral shifts i/2 ≥ 1/2 over a spherical ν-block at shift 0
                let r0 = rng.gen_range(0..=len.min(3));
                let parts = composition(rng, len - r0);
                let bottom = Rational::new(rng.gen_range(1..=2), 2);
                for (s, &l) in shifts(rng, parts.len(), bottom).iter().zip(&parts) {
                    push_alpha(&mut shift, &mut nu, s, l, rng);
                }
                shift.extend(std::iter::repeat(Rational::zero()).take(r0));
                nu.extend(nu_block(rng, r0, half_only));
                blocks = parts;
                if r0 > 0 {
                    blocks.push(r0);
                }
            } else {
                // shifts 1/4 + m/2
                let parts = composition(rng, len);
                let bottom = &Rational::new(1, 4) + &Rational::new(rng.gen_range(0..=1), 2);
                for (s, &l) in shifts(rng, parts.len(), bottom).iter().zip(&parts) {
                    push_alpha(&mut shift, &mut nu, s, l, rng);
                }
                blocks = parts;
            }
        }
        Family::C => {
            let r0 = rng.gen_range(0..=len.min(3));
            let r1 = rng.gen_range(0..=(len - r0).min(3));
            let parts = composition(rng, len - r0 - r1);
            let bottom = Rational::new(rng.gen_range(2..=3), 2);
            for (s, &l) in shifts(rng, parts.len(), bottom).iter().zip(&parts) {
                push_alpha(&mut shift, &mut nu, s, l, rng);
            }
            push_alpha(&mut shift, &mut nu, &Rational::new(1, 2), r1, rng);
            shift.extend(std::iter::repeat(Rational::zero()).take(r0));
            nu.extend(nu_block(rng, r0, half_only));
            blocks = parts;
            if r0 + r1 > 0 {
                blocks.push(r0 + r1);
            }
        }
        _ => {}
    }
    ClassicalSample { family, rank, shift, nu, blocks }
}

#[derive(Clone, Debug)]
enum SampleOutcome {
    BlockOutside,
    NoWitness,
    Tested { outside: bool, condition: bool, fully: bool, bad: Option<Value> },
}

fn judge_sample(d: &Datum, table: &LeviTable, s: &ClassicalSample) -> Result<SampleOutcome> {
    let lambda = Weight::from_usual(d, &s.lambda_usual())?;
    let eta = Weight::from_usual(d, &s.eta_usual())?;
    if !eta.is_dominant() || !eta.is_integral() {
        return Err(crate::error::internal(format!("template produced invalid eta {eta}")));
    }
    let mcx = table.compute_mcx(&eta)?;
    for c in &mcx.components {
        let (block, _) = dominantize_within(&lambda, c.node_set())?;
        if c.nodes.iter().any(|&n| block.coords()[n - 1] > Rational::one()) {
            return Ok(SampleOutcome::BlockOutside);
        }
    }
    let pair = ModulePair::new(lambda.clone(), &lambda - &eta)?;
    let Some(w) = is_hermitian_pair(&pair)? else { return Ok(SampleOutcome::NoWitness) };
    let (big, word) = dominantize(&lambda);
    let outside = !big.inside_fpp();
    let mf = levi_from_eta(&eta)?.nodes;
    let needed = d.all_nodes().difference(mf);
    let condition = needed.is_subset(word.support());
    let support = module_support(&lambda, &w);
    let fully = support == d.all_nodes();
    let describe = |why: &str| {
        json!({
            "why": why,
            "lambda_usual": s.lambda_usual().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "eta": eta.to_string(),
            "lambda": lambda.to_string(),
            "dominant": big.to_string(),
            "s": word.to_string(),
            "w": w.to_string(),
            "support": support.to_string(),
            "blocks": s.blocks,
        })
    };
    let bad = if fully && !condition {
        Some(describe("fully supported but s misses a node outside I(M_f)"))
    } else if condition && outside {
        Some(describe("s meets every node outside I(M_f) and the dominant form is outside FPP"))
    } else {
        None
    };
    Ok(SampleOutcome::Tested { outside, condition, fully, bad })
}

fn classical_datum(family: Family, rank: usize) -> Result<Datum> {
    if !family.is_classical() {
        return Err(invalid(format!("family {family} is not classical")));
    }
    RootDatum::new(family, rank)
}

/// Samples classical templates and checks "not fully supported, or inside FPP".
pub fn classical_stats(
    family: Family,
    rank: usize,
    samples: usize,
    seed: u64,
    rank_cap: usize,
) -> Result<(SampleStats, Vec<Value>)> {
    if rank > rank_cap {
        return Err(invalid(format!("rank {rank} exceeds the classical cap {rank_cap}")));
    }
    let d = classical_datum(family, rank)?;
    let table = LeviTable::new(&d)?;
    let mut stats = SampleStats { requested: samples, ..Default::default() };
    let mut bad = Vec::new();
    let max_attempts = samples.saturating_mul(50).max(1000);
    let batch = 2048;
    let mut next = 0usize;
    while stats.tested < samples && next < max_attempts {
        let ids: Vec<usize> = (next..(next + batch).min(max_attempts)).collect();
        next += ids.len();
        let outcomes: Vec<Result<SampleOutcome>> = ids
            .par_iter()
            .map(|&i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let s = draw_classical(family, rank, &mut rng);
                judge_sample(&d, &table, &s)
            })
            .collect();
        for o in outcomes {
            if stats.tested >= samples {
                break;
            }
            stats.attempts += 1;
            match o? {
                SampleOutcome::BlockOutside => stats.skipped_block_outside_fpp += 1,
                SampleOutcome::NoWitness => stats.skipped_no_hermitian_witness += 1,
                SampleOutcome::Tested { outside, condition, fully, bad: b } => {
                    stats.tested += 1;
                    stats.outside_fpp += usize::from(outside);
                    stats.support_condition += usize::from(condition);
                    stats.fully_supported += usize::from(fully);
                    if let Some(v) = b {
                        stats.counterexamples += 1;
                        if bad.len() < 20 {
                            bad.push(v);
                        }
                    }
                }
            }
        }
    }
    Ok((stats, bad))
}

pub fn verify_classical(family: Family, rank: usize, samples: usize, seed: u64) -> VerificationReport {
    verify_classical_capped(family, rank, samples, seed, DEFAULT_CLASSICAL_RANK_CAP)
}

pub fn verify_classical_capped(
    family: Family,
    rank: usize,
    samples: usize,
    seed: u64,
    rank_cap: usize,
) -> VerificationReport {
    let case = format!("classical-{family}{rank}");
    let inputs = json!({ "family": family.letter().to_string(), "rank": rank, "samples": samples, "seed": seed });
    timed(&case, inputs, |rep| {
        let (stats, bad) = classical_stats(family, rank, samples, seed, rank_cap)?;
        let enough = stats.tested >= samples;
        rep.status = if stats.counterexamples > 0 {
            ReportStatus::Counterexample
        } else if !enough {
            ReportStatus::Error
        } else {
            ReportStatus::Verified
        };
        rep.summary = format!(
            "{} samples tested ({} outside FPP, {} meeting every node outside I(M_f), {} fully supported), {} counterexamples",
            stats.tested, stats.outside_fpp, stats.support_condition, stats.fully_supported, stats.counterexamples
        );
        if !enough {
            rep.summary.push_str(&format!("; only {} of {} requested samples found", stats.tested, samples));
        }
        rep.count = Some(stats.counterexamples);
        if !bad.is_empty() {
            rep.witnesses = Some(bad);
        }
        rep.samples = Some(stats);
        Ok(())
    })
}

/// Ranks swept by the classical acceptance run for a family.
pub fn classical_ranks(family: Family, cap: usize) -> Vec<usize> {
    (1..=cap).filter(|&r| family.admits_rank(r)).collect()
}

// ---------------------------------------------------------------------------
// bottom-layer sweeps

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepStats {
    pub etas: usize,
    pub spherical_checks: usize,
    pub catalog_checks: usize,
    pub failures: usize,
}

pub fn sweep_stats(d: &Datum, cap: u32) -> Result<(SweepStats, Vec<Value>)> {
    if d.rank() > 8 {
        return Err(invalid("sweeps are limited to rank 8"));
    }
    if cap > 4 {
        return Err(invalid("sweep coordinate cap is limited to 4"));
    }
    let table = LeviTable::new(d)?;
    let n = d.rank();
    let base = (cap + 1) as usize;
    let total = base.pow(n as u32);
    let results: Vec<Result<(SweepStats, Vec<Value>)>> = (0..total)
        .into_par_iter()
        .with_min_len(256)
        .map(|mut idx| {
            let mut coords = vec![0i64; n];
            for c in coords.iter_mut() {
                *c = (idx % base) as i64;
                idx /= base;
            }
            let eta = Weight::from_ints(d, &coords)?;
            let mcx = table.compute_mcx(&eta)?;
            let mut st = SweepStats { etas: 1, ..Default::default() };
            let mut bad = Vec::new();
            for c in &mcx.components {
                let spherical = c.restrict(&eta).iter().all(Rational::is_zero);
                for g in component_gammas(&eta, c)? {
                    if spherical {
                        st.spherical_checks += 1;
                    } else {
                        st.catalog_checks += 1;
                    }
                    if !g.is_dominant() {
                        st.failures += 1;
                        bad.push(json!({
                            "eta": eta.to_string(),
                            "component": c.to_string(),
                            "gamma": g.to_string(),
                        }));
                    }
                }
            }
            Ok((st, bad))
        })
        .collect();
    let mut st = SweepStats::default();
    let mut bad = Vec::new();
    for r in results {
        let (s, b) = r?;
        st.etas += s.etas;
        st.spherical_checks += s.spherical_checks;
        st.catalog_checks += s.catalog_checks;
        st.failures += s.failures;
        if bad.len() < 20 {
            bad.extend(b);
        }
    }
    bad.truncate(20);
    Ok((st, bad))
}

pub fn verify_bottom_layer_sweep(d: &Datum, cap: u32) -> VerificationReport {
    let case = format!("sweep-{}", d.name());
    timed(&case, json!({ "type": d.name(), "cap": cap }), |rep| {
        let (st, bad) = sweep_stats(d, cap)?;
        rep.status = if st.failures == 0 { ReportStatus::Verified } else { ReportStatus::Counterexample };
        rep.summary = format!(
            "{} dominant eta with coordinates <= {cap}: {} adjoint and {} catalog K-types checked, {} not bottom layer",
            st.etas, st.spherical_checks, st.catalog_checks, st.failures
        );
        rep.count = Some(st.etas);
        if !bad.is_empty() {
            rep.witnesses = Some(bad);
        }
        rep.details = serde_json::to_value(&st).expect("plain struct");
        Ok(())
    })
}

/// Every simple type of rank at most `max_rank`.
pub fn all_types(max_rank: usize) -> Vec<Datum> {
    let mut out = Vec::new();
    for fam in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
        for r in 1..=max_rank {
            if fam.admits_rank(r) {
                out.push(RootDatum::new(fam, r).expect("admissible"));
            }
        }
    }
    out
}

/// Options for the full verification run.
#[derive(Clone, Debug)]
pub struct AllOptions {
    pub samples: usize,
    pub seed: u64,
    pub classical_rank_cap: usize,
    pub sweep_cap: u32,
    pub sweep_rank: usize,
}

impl Default for AllOptions {
    fn default() -> Self {
        AllOptions {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            classical_rank_cap: DEFAULT_CLASSICAL_RANK_CAP,
            sweep_cap: 3,
            sweep_rank: 8,
        }
    }
}

/// Runs every exceptional case, the classical samplers and the sweeps.
pub fn verify_all(opts: &AllOptions) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for case in CASES {
        out.extend(verify_case(case));
    }
    for fam in [Family::A, Family::B, Family::C, Family::D] {
        for r in classical_ranks(fam, opts.classical_rank_cap) {
            out.push(verify_classical_capped(fam, r, opts.samples, opts.seed, opts.classical_rank_cap));
        }
    }
    for d in all_types(opts.sweep_rank) {
        out.push(verify_bottom_layer_sweep(&d, opts.sweep_cap));
    }
    out
}
