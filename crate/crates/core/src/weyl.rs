//! Weyl-group elements as words in simple reflections.
//!
//! Letters are 1-based node indices and the leftmost letter acts last, so the
//! word `[a, b]` sends `λ` to `s_a(s_b(λ))`. Group elements are identified by
//! their action on `ρ`, whose orbit is regular.

use std::fmt;
use std::str::FromStr;

use crate::error::{internal, invalid, Error, Result};
use crate::rational::Rational;
use crate::rootsys::{Datum, NodeSet, Weight};

/// Default cap on the number of elements [`enumerate_weyl`] will produce.
pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylWord {
    datum: Datum,
    letters: Vec<usize>,
}

impl WeylWord {
    pub fn identity(datum: &Datum) -> Self {
        WeylWord { datum: datum.clone(), letters: Vec::new() }
    }

    pub fn new(datum: &Datum, letters: Vec<usize>) -> Result<Self> {
        for &l in &letters {
            datum.check_node(l)?;
        }
        Ok(WeylWord { datum: datum.clone(), letters })
    }

    pub fn simple(datum: &Datum, node: usize) -> Result<Self> {
        WeylWord::new(datum, vec![node])
    }

    /// Parses `"1,2,1"`; an empty string, `"e"` or `"[]"` is the identity.
    pub fn parse(datum: &Datum, text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if t.is_empty() || t == "e" {
            return Ok(WeylWord::identity(datum));
        }
        let letters = t
            .split(',')
            .map(|s| usize::from_str(s.trim()).map_err(|_| invalid(format!("bad letter {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        WeylWord::new(datum, letters)
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// Number of letters (the length only if the word is reduced).
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> WeylWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        WeylWord { datum: self.datum.clone(), letters }
    }

    /// The product `self · other` (other acts first).
    pub fn compose(&self, other: &WeylWord) -> WeylWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        WeylWord { datum: self.datum.clone(), letters }
    }

    pub fn support(&self) -> NodeSet {
        NodeSet::from_nodes(self.letters.iter().copied())
    }

    /// `w ρ` in fundamental-weight coordinates.
    pub fn rho_image(&self) -> Vec<i64> {
        let mut v = vec![1i64; self.datum.rank()];
        for &l in self.letters.iter().rev() {
            reflect_int(&self.datum, l - 1, &mut v);
        }
        v
    }

    /// Whether both words represent the same group element.
    pub fn same_element(&self, other: &WeylWord) -> bool {
        self.rho_image() == other.rho_image()
    }

    pub fn apply(&self, lambda: &Weight) -> Weight {
        apply_word(self, lambda)
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

pub(crate) fn reflect_int(datum: &Datum, i: usize, v: &mut [i64]) {
    let c = v[i];
    if c != 0 {
        for (x, a) in v.iter_mut().zip(&datum.cartan()[i]) {
            *x -= c * a;
        }
    }
}

pub(crate) fn reflect_rational(datum: &Datum, i: usize, v: &mut [Rational]) {
    let c = v[i].clone();
    if c.is_zero() {
        return;
    }
    for (x, &a) in v.iter_mut().zip(&datum.cartan()[i]) {
        if a != 0 {
            *x -= &(&c * &Rational::from_int(a));
        }
    }
}

/// `s_i λ = λ − ⟨λ, β_i^∨⟩ β_i`.
pub fn apply_simple(node: usize, lambda: &Weight) -> Result<Weight> {
    lambda.datum().check_node(node)?;
    let mut out = lambda.clone();
    reflect_rational(lambda.datum(), node - 1, out.coords_mut());
    Ok(out)
}

pub fn apply_word(w: &WeylWord, lambda: &Weight) -> Weight {
    assert_eq!(**w.datum(), **lambda.datum(), "word and weight from different root data");
    let mut out = lambda.clone();
    for &l in w.letters.iter().rev() {
        reflect_rational(w.datum(), l - 1, out.coords_mut());
    }
    out
}

/// First negative index algorithm restricted to `nodes`: repeatedly reflect at
/// the smallest node of `nodes` whose coordinate is negative.
///
/// Returns `(Λ, s)` with `Λ = s λ`; the word is reduced and lies in `W(nodes)`.
pub fn dominantize_within(lambda: &Weight, nodes: NodeSet) -> Result<(Weight, WeylWord)> {
    let datum = lambda.datum().clone();
    let guard = datum.positive_roots().len();
    let mut cur = lambda.clone();
    let mut trail = Vec::new();
    loop {
        let next = nodes.iter().find(|&k| cur.coords()[k - 1].is_negative());
        let Some(k) = next else { break };
        if trail.len() >= guard {
            return Err(internal(format!("dominantization of {lambda:?} exceeded {guard} steps")));
        }
        reflect_rational(&datum, k - 1, cur.coords_mut());
        trail.push(k);
    }
    trail.reverse();
    Ok((cur, WeylWord { datum, letters: trail }))
}

/// Dominant conjugate `Λ` of `λ` and the word `s` with `Λ = s λ`.
pub fn dominantize(lambda: &Weight) -> (Weight, WeylWord) {
    let all = lambda.datum().all_nodes();
    dominantize_within(lambda, all).expect("first negative index algorithm terminates")
}

fn dominantize_int(datum: &Datum, v: &mut [i64], nodes: NodeSet) -> Vec<usize> {
    let mut trail = Vec::new();
    while let Some(k) = nodes.iter().find(|&k| v[k - 1] < 0) {
        reflect_int(datum, k - 1, v);
        trail.push(k);
    }
    trail
}

/// Canonical reduced word: the lexicographically first reduced expression.
pub fn reduce_word(w: &WeylWord) -> WeylWord {
    let mut v = w.rho_image();
    // dominantizing wρ spells w^{-1} with the last-applied letter first
    let letters = dominantize_int(w.datum(), &mut v, w.datum().all_nodes());
    WeylWord { datum: w.datum().clone(), letters }
}

/// Length of the element represented by `w`.
pub fn length(w: &WeylWord) -> usize {
    reduce_word(w).len()
}

/// Number of positive roots sent to negative roots by `w`.
pub fn inversion_count(w: &WeylWord) -> usize {
    let d = w.datum();
    d.positive_roots()
        .iter()
        .filter(|root| {
            let mut r = (*root).clone();
            for &l in w.letters().iter().rev() {
                d.reflect_root(l - 1, &mut r);
            }
            r.iter().any(|&c| c < 0)
        })
        .count()
}

/// All elements of `W(nodes)` (the full group when `nodes` is `None`), one
/// canonical reduced word each, ordered by length then lexicographically.
pub fn enumerate_weyl(
    datum: &Datum,
    nodes: Option<NodeSet>,
    budget: usize,
) -> Result<Vec<WeylWord>> {
    let nodes = nodes.unwrap_or_else(|| datum.all_nodes());
    for n in nodes.iter() {
        datum.check_node(n)?;
    }
    // Each element v ≠ e has the parent s_k v, k its smallest left descent in
    // `nodes`; walking that tree downward needs no visited set.
    let mut out = vec![WeylWord::identity(datum)];
    let mut level: Vec<(Vec<usize>, Vec<i64>)> = vec![(Vec::new(), vec![1; datum.rank()])];
    while !level.is_empty() {
        let mut next = Vec::new();
        for (word, image) in &level {
            for i in nodes.iter() {
                if image[i - 1] <= 0 {
                    continue;
                }
                let mut child = image.clone();
                reflect_int(datum, i - 1, &mut child);
                let first = nodes.iter().find(|&k| child[k - 1] < 0);
                if first != Some(i) {
                    continue;
                }
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(i);
                w.extend_from_slice(word);
                next.push((w, child));
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        if out.len() + next.len() > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        out.extend(next.iter().map(|(w, _)| WeylWord { datum: datum.clone(), letters: w.clone() }));
        level = next;
    }
    Ok(out)
}

/// Longest element of the parabolic subgroup `W(nodes)`.
pub fn longest_element(datum: &Datum, nodes: NodeSet) -> Result<WeylWord> {
    if nodes.is_empty() {
        return Err(invalid("longest element of an empty node set"));
    }
    for n in nodes.iter() {
        datum.check_node(n)?;
    }
    let mut v: Vec<i64> = (1..=datum.rank()).map(|i| if nodes.contains(i) { -1 } else { 0 }).collect();
    let mut letters = dominantize_int(datum, &mut v, nodes);
    // w0 is an involution; reverse to get the canonical spelling
    letters.reverse();
    Ok(reduce_word(&WeylWord { datum: datum.clone(), letters }))
}

/// Support of the module with parameter `(λ, −wλ)`: letters of the reduced
/// form of `s w s^{-1}`, where `s` dominantizes `λ`.
pub fn module_support(lambda: &Weight, w: &WeylWord) -> NodeSet {
    let (_, s) = dominantize(lambda);
    let x = s.compose(w).compose(&s.inverse());
    reduce_word(&x).support()
}

/// The pair `(λ_L, λ_R)` parametrizing a module.
#[derive(Clone, PartialEq, Eq)]
pub struct ModulePair {
    pub lambda_l: Weight,
    pub lambda_r: Weight,
}

impl ModulePair {
    pub fn new(lambda_l: Weight, lambda_r: Weight) -> Result<Self> {
        if **lambda_l.datum() != **lambda_r.datum() {
            return Err(invalid("module pair weights belong to different root data"));
        }
        Ok(ModulePair { lambda_l, lambda_r })
    }

    pub fn mu(&self) -> Weight {
        &self.lambda_l - &self.lambda_r
    }

    pub fn nu(&self) -> Weight {
        &self.lambda_l + &self.lambda_r
    }

    pub fn datum(&self) -> &Datum {
        self.lambda_l.datum()
    }
}

impl fmt::Debug for ModulePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lambda_l, self.lambda_r)
    }
}

fn zeros(w: &Weight) -> NodeSet {
    NodeSet::from_nodes((1..=w.coords().len()).filter(|&i| w.coords()[i - 1].is_zero()))
}

/// Some `u ∈ W(nodes)` with `u a = b`, if one exists.
fn parabolic_transporter(a: &Weight, b: &Weight, nodes: NodeSet) -> Result<Option<WeylWord>> {
    let (da, wa) = dominantize_within(a, nodes)?;
    let (db, wb) = dominantize_within(b, nodes)?;
    if da != db {
        return Ok(None);
    }
    Ok(Some(wb.inverse().compose(&wa)))
}

/// A Hermitian witness `w` with `wμ = μ` and `wν = −ν`, if one exists.
pub fn is_hermitian_pair(p: &ModulePair) -> Result<Option<WeylWord>> {
    let (mu, nu) = (p.mu(), p.nu());
    let (big, s) = dominantize(&mu);
    // Stab(μ) = s^{-1} W(J) s with J the zero nodes of the dominant form
    let j = zeros(&big);
    let nu_s = apply_word(&s, &nu);
    let Some(u) = parabolic_transporter(&nu_s, &-&nu_s, j)? else { return Ok(None) };
    let w = reduce_word(&s.inverse().compose(&u).compose(&s));
    debug_assert!(apply_word(&w, &mu) == mu && apply_word(&w, &nu) == -&nu);
    Ok(Some(w))
}

/// A `w` with `w λ_L = λ'_L` and `w λ_R = λ'_R`, if one exists.
pub fn equivalence_witness(p: &ModulePair, q: &ModulePair) -> Result<Option<WeylWord>> {
    if **p.datum() != **q.datum() {
        return Err(invalid("module pairs belong to different root data"));
    }
    let (a, s) = dominantize(&p.lambda_l);
    let (b, t) = dominantize(&q.lambda_l);
    if a != b {
        return Ok(None);
    }
    // w = t^{-1} u s with u in the stabilizer W(J) of the common dominant form
    let j = zeros(&a);
    let from = apply_word(&s, &p.lambda_r);
    let to = apply_word(&t, &q.lambda_r);
    let Some(u) = parabolic_transporter(&from, &to, j)? else { return Ok(None) };
    Ok(Some(reduce_word(&t.inverse().compose(&u).compose(&s))))
}

pub fn modules_equivalent(p: &ModulePair, q: &ModulePair) -> Result<bool> {
    Ok(equivalence_witness(p, q)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::rootsys::datum;

    fn wt(d: &Datum, s: &str) -> Weight {
        Weight::parse(d, s).unwrap()
    }

    fn word(d: &Datum, s: &str) -> WeylWord {
        WeylWord::parse(d, s).unwrap()
    }

    #[test]
    fn simple_reflection_examples() {
        let g2 = datum("G2");
        assert_eq!(apply_simple(1, &wt(&g2, "-1,1")).unwrap(), wt(&g2, "1,0"));
        assert_eq!(apply_simple(2, &wt(&g2, "3,0")).unwrap(), wt(&g2, "3,0"));
        let f4 = datum("F4");
        assert_eq!(
            apply_simple(3, &wt(&f4, "3/4,3/4,-1,1")).unwrap(),
            wt(&f4, "3/4,-1/4,1,0")
        );
        assert!(apply_simple(5, &wt(&f4, "0,0,0,0")).is_err());
    }

    #[test]
    fn dominantize_examples() {
        let g2 = datum("G2");
        let (l, s) = dominantize(&wt(&g2, "1,1"));
        assert_eq!((l, s.letters().to_vec()), (wt(&g2, "1,1"), vec![]));
        let (l, s) = dominantize(&wt(&g2, "-1,1"));
        assert_eq!((l, s.letters().to_vec()), (wt(&g2, "1,0"), vec![1]));
        let f4 = datum("F4");
        let (l, s) = dominantize(&wt(&f4, "3/4,3/4,-1,1"));
        assert_eq!(l, wt(&f4, "1/2,1/4,1/2,0"));
        assert_eq!(s.letters(), &[2, 3]);
    }

    #[test]
    fn reduce_examples() {
        let g2 = datum("G2");
        assert!(reduce_word(&word(&g2, "1,1")).is_empty());
        let w = word(&g2, "2,1,2,1,2");
        let r = reduce_word(&w);
        assert_eq!(r.len(), 5);
        assert!(r.same_element(&w));
        let a2 = datum("A2");
        let r = reduce_word(&word(&a2, "1,2,1,2"));
        assert_eq!(r.len(), 2);
        assert!(r.same_element(&word(&a2, "2,1")));
    }

    #[test]
    fn group_orders() {
        for (name, order) in [("G2", 12), ("F4", 1152), ("A3", 24), ("B3", 48), ("C3", 48), ("D4", 192)] {
            let d = datum(name);
            let all = enumerate_weyl(&d, None, DEFAULT_BUDGET).unwrap();
            assert_eq!(all.len(), order, "{name}");
        }
        let f4 = datum("F4");
        let sub = enumerate_weyl(&f4, Some(NodeSet::from_nodes([1, 2, 4])), DEFAULT_BUDGET).unwrap();
        assert_eq!(sub.len(), 12);
        assert!(sub.iter().all(|w| w.support().is_subset(NodeSet::from_nodes([1, 2, 4]))));
        assert!(matches!(
            enumerate_weyl(&f4, None, 100),
            Err(Error::BudgetExceeded { budget: 100 })
        ));
    }

    #[test]
    fn enumeration_words_are_canonical_and_distinct() {
        let f4 = datum("F4");
        let all = enumerate_weyl(&f4, None, DEFAULT_BUDGET).unwrap();
        let mut images: Vec<_> = all.iter().map(|w| w.rho_image()).collect();
        for w in &all {
            assert_eq!(&reduce_word(w), w);
        }
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 1152);
        assert!(all.windows(2).all(|p| (p[0].len(), p[0].letters()) < (p[1].len(), p[1].letters())));
    }

    #[test]
    fn longest_elements() {
        let g2 = datum("G2");
        assert_eq!(longest_element(&g2, NodeSet::singleton(2)).unwrap().letters(), &[2]);
        assert_eq!(longest_element(&g2, g2.all_nodes()).unwrap().len(), 6);
        let f4 = datum("F4");
        let w = longest_element(&f4, NodeSet::from_nodes([1, 2])).unwrap();
        assert_eq!(w.letters(), &[1, 2, 1]);
        assert_eq!(longest_element(&f4, f4.all_nodes()).unwrap().len(), 24);
        assert!(longest_element(&f4, NodeSet::EMPTY).is_err());
    }

    #[test]
    fn support_examples() {
        let g2 = datum("G2");
        let lam = wt(&g2, "-5/2,2");
        assert_eq!(module_support(&lam, &word(&g2, "2")), NodeSet::from_nodes([1, 2]));
        assert_eq!(module_support(&wt(&g2, "1,2"), &WeylWord::identity(&g2)), NodeSet::EMPTY);
        assert_eq!(module_support(&lam, &WeylWord::identity(&g2)), NodeSet::EMPTY);
    }

    #[test]
    fn hermitian_examples() {
        let g2 = datum("G2");
        let l = wt(&g2, "3/2,-4");
        let p = ModulePair::new(l.clone(), -&l).unwrap();
        assert!(is_hermitian_pair(&p).unwrap().unwrap().is_empty());
        // x = 1 in the eta = [1,0] template
        let p = ModulePair::new(wt(&g2, "-5/2,2"), wt(&g2, "-7/2,2")).unwrap();
        let w = is_hermitian_pair(&p).unwrap().unwrap();
        assert_eq!(w.letters(), &[2]);
        let a1 = datum("A1");
        let p = ModulePair::new(wt(&a1, "3"), wt(&a1, "1")).unwrap();
        assert!(is_hermitian_pair(&p).unwrap().is_none());
    }

    #[test]
    fn equivalence_examples() {
        let a1 = datum("A1");
        let p = ModulePair::new(wt(&a1, "1"), wt(&a1, "0")).unwrap();
        let r = ModulePair::new(wt(&a1, "1"), wt(&a1, "1")).unwrap();
        assert!(modules_equivalent(&p, &p).unwrap());
        assert!(!modules_equivalent(&p, &r).unwrap());
        let f4 = datum("F4");
        let p = ModulePair::new(wt(&f4, "1/2,0,-1,2"), wt(&f4, "0,0,1,-3/2")).unwrap();
        let u = word(&f4, "3,2,4,1,3");
        let r = ModulePair::new(apply_word(&u, &p.lambda_l), apply_word(&u, &p.lambda_r)).unwrap();
        let w = equivalence_witness(&p, &r).unwrap().unwrap();
        assert_eq!(apply_word(&w, &p.lambda_l), r.lambda_l);
        assert_eq!(apply_word(&w, &p.lambda_r), r.lambda_r);
    }

    #[test]
    fn length_matches_inversions() {
        let f4 = datum("F4");
        let w = word(&f4, "1,2,3,4,3,2,1,2,3,3,4");
        assert_eq!(length(&w), inversion_count(&w));
        assert_eq!(length(&w), reduce_word(&w).len());
        let _ = q(1, 1);
    }
}
