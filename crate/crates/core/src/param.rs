//! Exact parametric linear arithmetic.
//!
//! Affine forms in named rational parameters, conjunctive regions of strict,
//! non-strict and equality constraints decided by Fourier–Motzkin
//! elimination, and the first negative index algorithm lifted to affine
//! weights by case splitting on coordinate signs.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{internal, invalid, Result};
use crate::rational::Rational;
use crate::rootsys::{Datum, Weight};
use crate::weyl::WeylWord;

/// Ordered parameter names shared by forms, weights and regions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Params(Arc<Vec<String>>);

impl Params {
    pub fn new(names: &[&str]) -> Self {
        Params(Arc::new(names.iter().map(|s| s.to_string()).collect()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// The form consisting of the single parameter `name`.
    pub fn var(&self, name: &str) -> AffineForm {
        let i = self.index(name).unwrap_or_else(|| panic!("unknown parameter {name}"));
        AffineForm::var(i)
    }
}

impl fmt::Debug for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `constant + Σ coeffs[i] · p_i`; trailing zero coefficients are trimmed so
/// equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineForm {
    constant: Rational,
    coeffs: Vec<Rational>,
}

impl AffineForm {
    pub fn constant(c: Rational) -> Self {
        AffineForm { constant: c, coeffs: Vec::new() }
    }

    pub fn zero() -> Self {
        AffineForm::default()
    }

    pub fn var(i: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); i + 1];
        coeffs[i] = Rational::one();
        AffineForm { constant: Rational::zero(), coeffs }
    }

    pub fn new(constant: Rational, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        AffineForm { constant, coeffs }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(point) {
            if !c.is_zero() {
                acc += &(c * x);
            }
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> AffineForm {
        if k.is_zero() {
            return AffineForm::zero();
        }
        AffineForm { constant: &self.constant * k, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    fn zip(&self, other: &AffineForm, f: impl Fn(&Rational, &Rational) -> Rational) -> AffineForm {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        let coeffs = (0..n)
            .map(|i| f(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        AffineForm::new(f(&self.constant, &other.constant), coeffs)
    }

    /// Parses expressions such as `1/2 - 3x + 2*y`.
    pub fn parse(params: &Params, text: &str) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(invalid("empty affine form"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        let mut form = AffineForm::zero();
        for term in terms {
            let (sign, body) = match term.as_bytes()[0] {
                b'-' => (-1, &term[1..]),
                b'+' => (1, &term[1..]),
                _ => (1, term),
            };
            let split = body.find(|c: char| c.is_alphabetic() || c == '_').unwrap_or(body.len());
            let (num, name) = body.split_at(split);
            let num = num.trim_end_matches('*');
            let coeff = if num.is_empty() {
                Rational::one()
            } else {
                num.parse::<Rational>().map_err(|e| invalid(e.to_string()))?
            };
            let coeff = if sign < 0 { -coeff } else { coeff };
            let piece = if name.is_empty() {
                AffineForm::constant(coeff)
            } else {
                let i = params.index(name).ok_or_else(|| invalid(format!("unknown parameter {name:?}")))?;
                AffineForm::var(i).scale(&coeff)
            };
            form = &form + &piece;
        }
        Ok(form)
    }

    pub fn display(&self, params: &Params) -> String {
        let mut out = self.constant.to_string();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &params.names()[i];
            if c.is_negative() {
                out.push_str(&format!(" - {}*{name}", -c));
            } else {
                out.push_str(&format!(" + {c}*{name}"));
            }
        }
        out
    }

    /// Compact rendering used for weight coordinates, e.g. `b + 1/2*c - 1/2`.
    pub fn pretty(&self, params: &Params) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &params.names()[i];
            let a = c.abs();
            let body = if a == Rational::one() { name.clone() } else { format!("{a}*{name}") };
            parts.push((c.is_negative(), body));
        }
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push((self.constant.is_negative(), self.constant.abs().to_string()));
        }
        let mut out = String::new();
        for (k, (neg, body)) in parts.iter().enumerate() {
            match (k, neg) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

impl fmt::Debug for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " + {c}*p{i}")?;
            }
        }
        Ok(())
    }
}

impl Add for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: &AffineForm) -> AffineForm {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scale(&-Rational::one())
    }
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: AffineForm) -> AffineForm {
        &self + &rhs
    }
}

impl Sub for AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: AffineForm) -> AffineForm {
        &self - &rhs
    }
}

impl Neg for AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        -&self
    }
}

impl Mul<&AffineForm> for &Rational {
    type Output = AffineForm;
    fn mul(self, rhs: &AffineForm) -> AffineForm {
        rhs.scale(self)
    }
}

impl From<Rational> for AffineForm {
    fn from(c: Rational) -> Self {
        AffineForm::constant(c)
    }
}

/// A weight whose coordinates are affine forms.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineWeight {
    datum: Datum,
    params: Params,
    coords: Vec<AffineForm>,
}

impl AffineWeight {
    pub fn new(datum: &Datum, params: &Params, coords: Vec<AffineForm>) -> Result<Self> {
        if coords.len() != datum.rank() {
            return Err(invalid(format!(
                "affine weight has {} coordinates, rank is {}",
                coords.len(),
                datum.rank()
            )));
        }
        Ok(AffineWeight { datum: datum.clone(), params: params.clone(), coords })
    }

    /// Parses `;`-separated affine forms, e.g. `"x; x; 1-2x-y; 2y"`.
    pub fn parse(datum: &Datum, params: &Params, text: &str) -> Result<Self> {
        let coords = text
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(';')
            .map(|t| AffineForm::parse(params, t))
            .collect::<Result<Vec<_>>>()?;
        AffineWeight::new(datum, params, coords)
    }

    pub fn from_weight(w: &Weight, params: &Params) -> Self {
        AffineWeight {
            datum: w.datum().clone(),
            params: params.clone(),
            coords: w.coords().iter().cloned().map(AffineForm::constant).collect(),
        }
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn coords(&self) -> &[AffineForm] {
        &self.coords
    }

    pub fn specialize(&self, point: &[Rational]) -> Weight {
        Weight::new(&self.datum, self.coords.iter().map(|f| f.eval(point)).collect())
            .expect("rank preserved")
    }

    /// Applies the simple reflection at 0-based node `i` in place.
    pub(crate) fn reflect(&mut self, i: usize) {
        let c = self.coords[i].clone();
        if c == AffineForm::zero() {
            return;
        }
        for (j, &a) in self.datum.cartan()[i].iter().enumerate() {
            if a != 0 {
                self.coords[j] = &self.coords[j] - &c.scale(&Rational::from_int(a));
            }
        }
    }

    pub fn apply_simple(&self, node: usize) -> Result<Self> {
        self.datum.check_node(node)?;
        let mut out = self.clone();
        out.reflect(node - 1);
        Ok(out)
    }

    pub fn apply_word(&self, w: &WeylWord) -> Self {
        let mut out = self.clone();
        for &l in w.letters().iter().rev() {
            out.reflect(l - 1);
        }
        out
    }

    /// Coordinates in the simple-root basis.
    pub fn to_root_coords(&self) -> Vec<AffineForm> {
        let inv = self.datum.cartan_inverse();
        let n = self.datum.rank();
        (0..n)
            .map(|j| {
                (0..n).fold(AffineForm::zero(), |acc, i| &acc + &self.coords[i].scale(&inv[i][j]))
            })
            .collect()
    }

    fn zip(&self, other: &AffineWeight, f: impl Fn(&AffineForm, &AffineForm) -> AffineForm) -> AffineWeight {
        assert!(*self.datum == *other.datum && self.params == other.params);
        AffineWeight {
            datum: self.datum.clone(),
            params: self.params.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn pretty(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|f| f.pretty(&self.params)).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl fmt::Debug for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl Add for &AffineWeight {
    type Output = AffineWeight;
    fn add(self, rhs: &AffineWeight) -> AffineWeight {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &AffineWeight {
    type Output = AffineWeight;
    fn sub(self, rhs: &AffineWeight) -> AffineWeight {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for &AffineWeight {
    type Output = AffineWeight;
    fn neg(self) -> AffineWeight {
        AffineWeight {
            datum: self.datum.clone(),
            params: self.params.clone(),
            coords: self.coords.iter().map(|f| -f).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
    Eq,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
        }
    }

    fn holds(self, v: &Rational) -> bool {
        match self {
            Rel::Lt => v.is_negative(),
            Rel::Le => !v.is_positive(),
            Rel::Eq => v.is_zero(),
        }
    }
}

/// `form REL 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub form: AffineForm,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(form: AffineForm, rel: Rel) -> Self {
        Constraint { form, rel }
    }

    /// `lhs < rhs`
    pub fn lt(lhs: &AffineForm, rhs: &AffineForm) -> Self {
        Constraint::new(lhs - rhs, Rel::Lt)
    }

    /// `lhs ≤ rhs`
    pub fn le(lhs: &AffineForm, rhs: &AffineForm) -> Self {
        Constraint::new(lhs - rhs, Rel::Le)
    }

    pub fn gt(lhs: &AffineForm, rhs: &AffineForm) -> Self {
        Constraint::lt(rhs, lhs)
    }

    pub fn ge(lhs: &AffineForm, rhs: &AffineForm) -> Self {
        Constraint::le(rhs, lhs)
    }

    pub fn eq(lhs: &AffineForm, rhs: &AffineForm) -> Self {
        Constraint::new(lhs - rhs, Rel::Eq)
    }

    /// Parses `lhs REL rhs` with REL one of `<`, `<=`, `=`, `>=`, `>`.
    pub fn parse(params: &Params, text: &str) -> Result<Self> {
        for (op, ctor) in [
            ("<=", Constraint::le as fn(&AffineForm, &AffineForm) -> Constraint),
            (">=", Constraint::ge),
            ("<", Constraint::lt),
            (">", Constraint::gt),
            ("=", Constraint::eq),
        ] {
            if let Some((l, r)) = text.split_once(op) {
                return Ok(ctor(&AffineForm::parse(params, l)?, &AffineForm::parse(params, r)?));
            }
        }
        Err(invalid(format!("no relation in constraint {text:?}")))
    }

    pub fn holds_at(&self, point: &[Rational]) -> bool {
        self.rel.holds(&self.form.eval(point))
    }

    /// The complement as a disjunction of constraints.
    pub fn negate(&self) -> Vec<Constraint> {
        match self.rel {
            Rel::Lt => vec![Constraint::new(-&self.form, Rel::Le)],
            Rel::Le => vec![Constraint::new(-&self.form, Rel::Lt)],
            Rel::Eq => vec![
                Constraint::new(self.form.clone(), Rel::Lt),
                Constraint::new(-&self.form, Rel::Lt),
            ],
        }
    }

    /// Variables on the left with leading coefficient 1, e.g. `x > 3/2`.
    pub fn display(&self, params: &Params) -> String {
        let lead = self.form.coeffs().iter().find(|c| !c.is_zero());
        let Some(lead) = lead else {
            return format!("{} {} 0", self.form.constant_term(), self.rel.symbol());
        };
        let flip = lead.is_negative();
        let form = &lead.abs().recip() * &self.form;
        let form = if flip { -&form } else { form };
        let lhs = (&form - &AffineForm::constant(form.constant_term().clone())).pretty(params);
        let rhs = -form.constant_term();
        let sym = match (self.rel, flip) {
            (Rel::Lt, true) => ">",
            (Rel::Le, true) => ">=",
            (r, _) => r.symbol(),
        };
        format!("{lhs} {sym} {rhs}")
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {} 0", self.form, self.rel.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Empty,
    /// Nonempty, with a rational witness point.
    Nonempty(Vec<Rational>),
}

/// A conjunction of affine constraints over named parameters.
pub struct Region {
    params: Params,
    constraints: Vec<Constraint>,
    status: OnceLock<Status>,
}

impl Clone for Region {
    fn clone(&self) -> Self {
        let status = OnceLock::new();
        if let Some(s) = self.status.get() {
            let _ = status.set(s.clone());
        }
        Region { params: self.params.clone(), constraints: self.constraints.clone(), status }
    }
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.constraints == other.constraints
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.strings().join(", "))
    }
}

impl Region {
    /// The whole parameter space.
    pub fn universe(params: &Params) -> Self {
        let status = OnceLock::new();
        let _ = status.set(Status::Nonempty(vec![Rational::zero(); params.len()]));
        Region { params: params.clone(), constraints: Vec::new(), status }
    }

    pub fn from_constraints(params: &Params, constraints: Vec<Constraint>) -> Self {
        constraints.into_iter().fold(Region::universe(params), |r, c| r.and(c))
    }

    /// Parses a comma-separated list of constraints.
    pub fn parse(params: &Params, text: &str) -> Result<Self> {
        let cs = text
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| Constraint::parse(params, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Region::from_constraints(params, cs))
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// `self ∧ c`; a cached witness of `self` carries over when it satisfies `c`.
    pub fn and(&self, c: Constraint) -> Region {
        let status = OnceLock::new();
        if c.form.is_constant() {
            if c.rel.holds(c.form.constant_term()) {
                return self.clone();
            }
            let _ = status.set(Status::Empty);
            let mut constraints = self.constraints.clone();
            constraints.push(c);
            return Region { params: self.params.clone(), constraints, status };
        }
        match self.status.get() {
            Some(Status::Empty) => {
                let _ = status.set(Status::Empty);
            }
            Some(Status::Nonempty(w)) if c.holds_at(w) => {
                let _ = status.set(Status::Nonempty(w.clone()));
            }
            _ => {}
        }
        let mut constraints = self.constraints.clone();
        if !constraints.contains(&c) {
            constraints.push(c);
        }
        Region { params: self.params.clone(), constraints, status }
    }

    pub fn and_all<I: IntoIterator<Item = Constraint>>(&self, cs: I) -> Region {
        cs.into_iter().fold(self.clone(), |r, c| r.and(c))
    }

    pub fn intersect(&self, other: &Region) -> Region {
        self.and_all(other.constraints.iter().cloned())
    }

    pub fn status(&self) -> &Status {
        self.status.get_or_init(|| solve(&self.params, &self.constraints))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.status(), Status::Empty)
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self.status() {
            Status::Empty => None,
            Status::Nonempty(w) => Some(w),
        }
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.holds_at(point))
    }

    /// Whether `form ≥ 0` everywhere on the region.
    pub fn implies_nonneg(&self, form: &AffineForm) -> bool {
        self.and(Constraint::new(form.clone(), Rel::Lt)).is_empty()
    }

    /// Whether every point of the region satisfies `c`.
    pub fn implies(&self, c: &Constraint) -> bool {
        c.negate().into_iter().all(|n| self.and(n).is_empty())
    }

    pub fn strings(&self) -> Vec<String> {
        self.constraints.iter().map(|c| c.display(&self.params)).collect()
    }

    /// The same set with every constraint implied by the others dropped.
    pub fn simplified(&self) -> Region {
        if self.is_empty() {
            return self.clone();
        }
        let mut kept = self.constraints.clone();
        let mut i = 0;
        while i < kept.len() {
            let rest: Vec<Constraint> =
                kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect();
            if Region::from_constraints(&self.params, rest).implies(&kept[i]) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        let out = Region::from_constraints(&self.params, kept);
        if let Some(Status::Nonempty(w)) = self.status.get() {
            let _ = out.status.set(Status::Nonempty(w.clone()));
        }
        out
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.strings().serialize(s)
    }
}

/// Row `a · x + c REL 0` used by the elimination.
#[derive(Clone, Debug)]
struct Row {
    a: Vec<Rational>,
    c: Rational,
    strict: bool,
}

impl Row {
    /// Scales by a positive factor so the first nonzero coefficient is ±1.
    fn normalize(mut self) -> Row {
        if let Some(lead) = self.a.iter().find(|x| !x.is_zero()) {
            let k = lead.abs().recip();
            if k != Rational::one() {
                for x in self.a.iter_mut() {
                    *x = &*x * &k;
                }
                self.c = &self.c * &k;
            }
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.a.iter().all(Rational::is_zero)
    }

    /// Whether a constant row holds.
    fn consistent(&self) -> bool {
        if self.strict {
            self.c.is_negative()
        } else {
            !self.c.is_positive()
        }
    }
}

fn combine(p: &Row, n: &Row, var: usize) -> Row {
    // p has a positive and n a negative coefficient at var
    let kp = -&n.a[var];
    let kn = p.a[var].clone();
    let a = p.a.iter().zip(&n.a).map(|(x, y)| &(x * &kp) + &(y * &kn)).collect::<Vec<_>>();
    let mut row = Row { a, c: &(&p.c * &kp) + &(&n.c * &kn), strict: p.strict || n.strict };
    row.a[var] = Rational::zero();
    row.normalize()
}

/// Drops trivially true rows and keeps the tightest row per direction.
/// Returns `None` if a constant row is violated.
fn simplify(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut out: Vec<Row> = Vec::new();
    for r in rows {
        if r.is_trivial() {
            if !r.consistent() {
                return None;
            }
            continue;
        }
        match best.get(&r.a) {
            Some(&k) => {
                let cur = &out[k];
                if r.c > cur.c || (r.c == cur.c && r.strict && !cur.strict) {
                    out[k] = r;
                }
            }
            None => {
                best.insert(r.a.clone(), out.len());
                out.push(r);
            }
        }
    }
    Some(out)
}

fn to_row(f: &AffineForm, n: usize, strict: bool) -> Row {
    let a = (0..n).map(|i| f.coeff(i)).collect();
    Row { a, c: f.constant_term().clone(), strict }.normalize()
}

/// Picks a value in the interval cut out by `rows` on `var`, all other
/// variables already fixed in `point`.
fn pick(rows: &[Row], var: usize, point: &[Rational]) -> Rational {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    for r in rows {
        let a = &r.a[var];
        if a.is_zero() {
            continue;
        }
        let mut rest = r.c.clone();
        for (i, x) in r.a.iter().enumerate() {
            if i != var && !x.is_zero() {
                rest += &(x * &point[i]);
            }
        }
        let bound = -&(&rest / a);
        if a.is_positive() {
            // var ≤ bound (strictly if r.strict)
            let tighter = match &hi {
                None => true,
                Some((h, s)) => bound < *h || (bound == *h && r.strict && !*s),
            };
            if tighter {
                hi = Some((bound, r.strict));
            }
        } else {
            let tighter = match &lo {
                None => true,
                Some((l, s)) => bound > *l || (bound == *l && r.strict && !*s),
            };
            if tighter {
                lo = Some((bound, r.strict));
            }
        }
    }
    match (lo, hi) {
        (None, None) => Rational::zero(),
        (Some((l, false)), _) => l,
        (Some((l, true)), Some((h, _))) => l.midpoint(&h),
        (Some((l, true)), None) => &l.floor() + &Rational::one(),
        (None, Some((h, strict))) => {
            let zero = Rational::zero();
            if zero < h || (!strict && zero == h) {
                zero
            } else if !strict {
                h
            } else {
                &h.ceil() - &Rational::one()
            }
        }
    }
}

/// Decides a conjunction exactly and produces a witness when nonempty.
fn solve(params: &Params, constraints: &[Constraint]) -> Status {
    let n = params.len();
    let mut eqs: Vec<Row> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    for c in constraints {
        match c.rel {
            Rel::Eq => eqs.push(to_row(&c.form, n, false)),
            Rel::Lt => rows.push(to_row(&c.form, n, true)),
            Rel::Le => rows.push(to_row(&c.form, n, false)),
        }
    }
    // Gaussian substitution of equalities: each solved variable is recorded
    // as an expression in the remaining ones.
    let mut solved: Vec<(usize, Row)> = Vec::new();
    while let Some(e) = eqs.pop() {
        let Some(var) = e.a.iter().position(|x| !x.is_zero()) else {
            if !e.c.is_zero() {
                return Status::Empty;
            }
            continue;
        };
        let subst = |r: &mut Row| {
            let k = r.a[var].clone();
            if k.is_zero() {
                return;
            }
            let f = &k / &e.a[var];
            for (x, y) in r.a.iter_mut().zip(&e.a) {
                *x = &*x - &(&f * y);
            }
            r.c = &r.c - &(&f * &e.c);
            r.a[var] = Rational::zero();
        };
        for r in eqs.iter_mut().chain(rows.iter_mut()) {
            subst(r);
        }
        for (_, r) in solved.iter_mut() {
            subst(r);
        }
        solved.push((var, e));
    }
    let Some(mut rows) = simplify(rows.into_iter().map(Row::normalize).collect()) else {
        return Status::Empty;
    };
    let mut stages: Vec<(usize, Vec<Row>)> = Vec::new();
    loop {
        let live: Vec<usize> = (0..n).filter(|&v| rows.iter().any(|r| !r.a[v].is_zero())).collect();
        if live.is_empty() {
            break;
        }
        let var = *live
            .iter()
            .min_by_key(|&&v| {
                let p = rows.iter().filter(|r| r.a[v].is_positive()).count();
                let q = rows.iter().filter(|r| r.a[v].is_negative()).count();
                (p * q, v)
            })
            .unwrap();
        let (pos, rest): (Vec<Row>, Vec<Row>) = rows.iter().cloned().partition(|r| r.a[var].is_positive());
        let (neg, zero): (Vec<Row>, Vec<Row>) = rest.into_iter().partition(|r| r.a[var].is_negative());
        let mut next = zero;
        for p in &pos {
            for q in &neg {
                next.push(combine(p, q, var));
            }
        }
        stages.push((var, rows));
        match simplify(next) {
            Some(r) => rows = r,
            None => return Status::Empty,
        }
    }
    let mut point = vec![Rational::zero(); n];
    for (var, stage_rows) in stages.iter().rev() {
        point[*var] = pick(stage_rows, *var, &point);
    }
    for (var, e) in solved.iter().rev() {
        let mut rest = e.c.clone();
        for (i, x) in e.a.iter().enumerate() {
            if i != *var && !x.is_zero() {
                rest += &(x * &point[i]);
            }
        }
        point[*var] = -&(&rest / &e.a[*var]);
    }
    assert!(
        constraints.iter().all(|c| c.holds_at(&point)),
        "elimination produced an invalid witness {point:?} for {constraints:?}"
    );
    Status::Nonempty(point)
}

pub fn region_is_empty(r: &Region) -> bool {
    r.is_empty()
}

/// A piece of a parametric dominantization: on `region`, `word` sends the
/// input to the dominant `image`.
#[derive(Clone, Debug)]
pub struct Cell {
    pub region: Region,
    pub word: WeylWord,
    pub image: AffineWeight,
}

/// Lifts the first negative index algorithm to an affine weight over a region.
///
/// The cells partition `region`; on each, the word is constant and the image
/// is dominant at every point.
pub fn parametric_dominantize(lambda: &AffineWeight, region: &Region) -> Result<Vec<Cell>> {
    if lambda.params != region.params {
        return Err(invalid("weight and region use different parameter lists"));
    }
    let guard = lambda.datum.positive_roots().len();
    let mut cells = Vec::new();
    let mut stack: Vec<(AffineWeight, Region, Vec<usize>)> =
        vec![(lambda.clone(), region.clone(), Vec::new())];
    while let Some((cur, reg, trail)) = stack.pop() {
        if reg.is_empty() {
            continue;
        }
        let mut split = None;
        for (k, form) in cur.coords.iter().enumerate() {
            if form.is_constant() {
                if form.constant_term().is_negative() {
                    split = Some((k, None));
                    break;
                }
                continue;
            }
            let negative = reg.and(Constraint::new(form.clone(), Rel::Lt));
            if !negative.is_empty() {
                split = Some((k, Some(negative)));
                break;
            }
        }
        match split {
            None => {
                let mut letters = trail.clone();
                letters.reverse();
                let word = WeylWord::new(&cur.datum, letters)?;
                cells.push(Cell { region: reg, word, image: cur });
            }
            Some((k, negative)) => {
                if trail.len() >= guard {
                    return Err(internal(format!(
                        "parametric dominantization exceeded {guard} reflections"
                    )));
                }
                let negative = match negative {
                    Some(neg) => {
                        let nonneg = reg.and(Constraint::new(-&cur.coords[k], Rel::Le));
                        // explored after the reflected branch is pushed, so it comes out first
                        let mut reflected = cur.clone();
                        reflected.reflect(k);
                        let mut t = trail.clone();
                        t.push(k + 1);
                        stack.push((reflected, neg, t));
                        if !nonneg.is_empty() {
                            stack.push((cur, nonneg, trail));
                        }
                        continue;
                    }
                    None => reg,
                };
                let mut reflected = cur;
                reflected.reflect(k);
                let mut t = trail;
                t.push(k + 1);
                stack.push((reflected, negative, t));
            }
        }
    }
    Ok(cells)
}

/// Numeric counterpart of [`parametric_dominantize`] at one point, for checks.
pub fn numeric_dominantize(lambda: &AffineWeight, point: &[Rational]) -> (Weight, WeylWord) {
    crate::weyl::dominantize(&lambda.specialize(point))
}

/// Pieces of the cells where some coordinate of the image exceeds 1.
pub fn outside_fpp_regions(cells: &[Cell]) -> Vec<Region> {
    let one = AffineForm::constant(Rational::one());
    let mut out = Vec::new();
    for cell in cells {
        for coord in cell.image.coords() {
            let r = cell.region.and(Constraint::gt(coord, &one));
            if !r.is_empty() {
                out.push(r);
            }
        }
    }
    out
}

/// `r ∖ (b_1 ∪ … ∪ b_k)` as a list of nonempty conjunctions.
pub fn region_difference(r: &Region, bs: &[Region]) -> Vec<Region> {
    let mut pieces = vec![r.clone()];
    for b in bs {
        let mut next = Vec::new();
        for p in &pieces {
            if p.intersect(b).is_empty() {
                next.push(p.clone());
                continue;
            }
            // p ∖ b = ⋃_k p ∧ c_1 ∧ … ∧ c_{k-1} ∧ ¬c_k, a disjoint split
            let mut prefix = p.clone();
            for c in b.constraints() {
                for neg in c.negate() {
                    let piece = prefix.and(neg);
                    if !piece.is_empty() {
                        next.push(piece);
                    }
                }
                prefix = prefix.and(c.clone());
                if prefix.is_empty() {
                    break;
                }
            }
        }
        pieces = next;
        if pieces.is_empty() {
            break;
        }
    }
    pieces
}

/// Whether `⋃a ⊆ ⋃b`.
pub fn region_subset(a: &[Region], b: &[Region]) -> bool {
    a.iter().all(|r| region_difference(r, b).is_empty())
}

/// Whether the unions of `a` and `b` are the same point set.
pub fn region_equiv(a: &[Region], b: &[Region]) -> bool {
    region_subset(a, b) && region_subset(b, a)
}

/// `r` together with `λ = target` coordinatewise.
pub fn solve_equal(lambda: &AffineWeight, target: &Weight, r: &Region) -> Region {
    r.and_all(
        lambda
            .coords
            .iter()
            .zip(target.coords())
            .map(|(f, t)| Constraint::eq(f, &AffineForm::constant(t.clone()))),
    )
}
