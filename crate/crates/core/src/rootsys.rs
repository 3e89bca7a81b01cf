//! Simple root systems in exact arithmetic.
//!
//! Weights are stored in the fundamental-weight basis: coordinate `i` of a
//! weight is its pairing with the `i`-th simple coroot. Roots are kept in the
//! simple-root basis, and row `i` of the Cartan matrix gives the
//! fundamental-weight coordinates of the `i`-th simple root. Nodes are
//! numbered from 1 in the usual way: for the E series node 2 hangs off node
//! 4, for F4 the double bond joins the long node 2 to the short node 3, and
//! for G2 node 1 is short.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{internal, invalid, Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Result<Self> {
        Ok(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(invalid(format!("unknown family letter {c:?}"))),
        })
    }

    pub fn is_classical(self) -> bool {
        matches!(self, Family::A | Family::B | Family::C | Family::D)
    }

    /// Whether `(self, rank)` names a simple type in the supported range.
    pub fn admits_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A set of Dynkin nodes (1-based), stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(u32);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn full(rank: usize) -> Self {
        NodeSet(((1u64 << rank) - 1) as u32)
    }

    pub fn from_mask(mask: u32) -> Self {
        NodeSet(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for n in nodes {
            s.insert(n);
        }
        s
    }

    pub fn singleton(node: usize) -> Self {
        NodeSet::from_nodes([node])
    }

    pub fn insert(&mut self, node: usize) {
        assert!((1..=32).contains(&node), "node {node} outside 1..=32");
        self.0 |= 1 << (node - 1);
    }

    pub fn contains(self, node: usize) -> bool {
        node >= 1 && node <= 32 && self.0 & (1 << (node - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    /// Nodes in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |b| self.0 & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|n| n.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub struct RootDatum {
    family: Family,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    cartan_inverse: Vec<Vec<Rational>>,
    positive_roots: Vec<Vec<i64>>,
}

/// Shared handle to an immutable root datum.
pub type Datum = Arc<RootDatum>;

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.rank == other.rank
    }
}

impl Eq for RootDatum {}

impl std::hash::Hash for RootDatum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.family, self.rank).hash(state);
    }
}

pub(crate) fn cartan_matrix(family: Family, rank: usize) -> Vec<Vec<i64>> {
    let n = rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut bond = |i: usize, j: usize| {
        c[i - 1][j - 1] = -1;
        c[j - 1][i - 1] = -1;
    };
    match family {
        Family::A | Family::B | Family::C => {
            for i in 1..n {
                bond(i, i + 1);
            }
        }
        Family::D => {
            for i in 1..n - 1 {
                bond(i, i + 1);
            }
            bond(n - 2, n);
        }
        Family::E => {
            bond(1, 3);
            bond(2, 4);
            for i in 3..n {
                bond(i, i + 1);
            }
        }
        Family::F => {
            bond(1, 2);
            bond(2, 3);
            bond(3, 4);
        }
        Family::G => bond(1, 2),
    }
    // Entry (i, j) is <beta_i, beta_j^vee>; a -2 or -3 sits in the row of the long root.
    match family {
        Family::B => c[n - 2][n - 1] = -2,
        Family::C => c[n - 1][n - 2] = -2,
        Family::F => c[1][2] = -2,
        Family::G => c[1][0] = -3,
        _ => {}
    }
    c
}

fn invert(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from_int(x)).collect();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let v = &a[col][k] * &f;
                    a[r][k] -= &v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl RootDatum {
    /// Builds the root datum of the simple type `(family, rank)`.
    pub fn new(family: Family, rank: usize) -> Result<Datum> {
        if !family.admits_rank(rank) {
            return Err(invalid(format!("{family}{rank} is not a supported simple type")));
        }
        let cartan = cartan_matrix(family, rank);
        let cartan_inverse =
            invert(&cartan).ok_or_else(|| internal("singular Cartan matrix"))?;
        let mut datum = RootDatum { family, rank, cartan, cartan_inverse, positive_roots: vec![] };
        datum.positive_roots = datum.generate_positive_roots();
        let expected = expected_positive_root_count(family, rank);
        if datum.positive_roots.len() != expected {
            return Err(internal(format!(
                "closure produced {} positive roots for {family}{rank}, expected {expected}",
                datum.positive_roots.len()
            )));
        }
        Ok(Arc::new(datum))
    }

    /// Parses a type name such as `F4` or `b8`.
    pub fn parse(name: &str) -> Result<Datum> {
        let name = name.trim();
        let mut chars = name.chars();
        let letter = chars.next().ok_or_else(|| invalid("empty type name"))?;
        let family = Family::from_letter(letter)?;
        let rank: usize =
            chars.as_str().parse().map_err(|_| invalid(format!("malformed type name {name:?}")))?;
        RootDatum::new(family, rank)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `<beta_i, beta_j^vee>` for 1-based nodes.
    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        self.cartan[i - 1][j - 1]
    }

    pub fn cartan_inverse(&self) -> &[Vec<Rational>] {
        &self.cartan_inverse
    }

    /// Positive roots in the simple-root basis, ordered by height then lexicographically.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.rank)
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.rank {
            Err(Error::NodeOutOfRange { node, rank: self.rank })
        } else {
            Ok(())
        }
    }

    /// Nodes joined to `node` in the Dynkin diagram.
    pub fn neighbours(&self, node: usize) -> NodeSet {
        NodeSet::from_nodes(
            (1..=self.rank).filter(|&j| j != node && self.cartan[node - 1][j - 1] != 0),
        )
    }

    /// Pairing of a root (simple-root coordinates) with the coroot of node `i` (0-based).
    pub(crate) fn root_pairing(&self, root: &[i64], i: usize) -> i64 {
        root.iter().zip(&self.cartan).map(|(c, row)| c * row[i]).sum()
    }

    /// Applies the simple reflection at 0-based node `i` to a root in place.
    pub(crate) fn reflect_root(&self, i: usize, root: &mut [i64]) {
        let p = self.root_pairing(root, i);
        root[i] -= p;
    }

    fn generate_positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let simple: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let mut known: HashSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut all = simple.clone();
        let mut level = simple;
        while !level.is_empty() {
            let mut next = Vec::new();
            for root in &level {
                for i in 0..n {
                    // length of the i-string below root
                    let mut p = 0;
                    let mut probe = root.clone();
                    loop {
                        probe[i] -= 1;
                        if probe[i] < 0 || !known.contains(&probe) {
                            break;
                        }
                        p += 1;
                    }
                    let q = p - self.root_pairing(root, i);
                    if q > 0 {
                        let mut up = root.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        all.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        all
    }

    /// Squared lengths of the simple roots, scaled so the shortest is 1.
    pub fn simple_root_lengths(&self) -> Vec<i64> {
        let n = self.rank;
        let mut len = vec![0i64; n];
        len[0] = 6;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if j != i && self.cartan[i][j] != 0 && len[j] == 0 {
                    len[j] = self.cartan[j][i] * len[i] / self.cartan[i][j];
                    stack.push(j);
                }
            }
        }
        let g = len.iter().fold(0, |g, &l| num_integer::gcd(g, l));
        len.iter().map(|l| l / g).collect()
    }

    /// Positive coroots in simple-coroot coordinates, parallel to `positive_roots`.
    pub fn positive_coroots(&self) -> Vec<Vec<i64>> {
        let len = self.simple_root_lengths();
        self.positive_roots
            .iter()
            .map(|root| {
                // |α|² = Σ c_i c_j (α_i, α_j) with 2(α_i, α_j) = cartan[i][j] |α_j|²
                let mut twice = 0;
                for (i, ci) in root.iter().enumerate() {
                    for (j, cj) in root.iter().enumerate() {
                        twice += ci * cj * self.cartan[i][j] * len[j];
                    }
                }
                let norm = twice / 2;
                root.iter().zip(&len).map(|(c, l)| c * l / norm).collect()
            })
            .collect()
    }

    /// The highest root, i.e. the unique positive root of maximal height.
    pub fn highest_root(&self) -> &[i64] {
        self.positive_roots.last().expect("nonempty root system")
    }
}

pub fn expected_positive_root_count(family: Family, rank: usize) -> usize {
    let n = rank;
    match family {
        Family::A => n * (n + 1) / 2,
        Family::B | Family::C => n * n,
        Family::D => n * (n - 1),
        Family::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        Family::F => 24,
        Family::G => 6,
    }
}

/// Convenience constructor for tests and examples; panics on an invalid type.
pub fn datum(name: &str) -> Datum {
    RootDatum::parse(name).unwrap_or_else(|e| panic!("{e}"))
}

/// A weight in the fundamental-weight basis.
#[derive(Clone)]
pub struct Weight {
    datum: Datum,
    coords: Vec<Rational>,
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        *self.datum == *other.datum && self.coords == other.coords
    }
}

impl Eq for Weight {}

impl std::hash::Hash for Weight {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl Weight {
    pub fn new(datum: &Datum, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != datum.rank {
            return Err(invalid(format!(
                "weight has {} coordinates but {} has rank {}",
                coords.len(),
                datum.name(),
                datum.rank
            )));
        }
        Ok(Weight { datum: datum.clone(), coords })
    }

    pub fn from_ints(datum: &Datum, coords: &[i64]) -> Result<Self> {
        Weight::new(datum, coords.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero(datum: &Datum) -> Self {
        Weight { datum: datum.clone(), coords: vec![Rational::zero(); datum.rank] }
    }

    pub fn rho(datum: &Datum) -> Self {
        Weight { datum: datum.clone(), coords: vec![Rational::one(); datum.rank] }
    }

    pub fn fundamental(datum: &Datum, node: usize) -> Result<Self> {
        datum.check_node(node)?;
        let mut w = Weight::zero(datum);
        w.coords[node - 1] = Rational::one();
        Ok(w)
    }

    /// The simple root at `node` written as a weight (row of the Cartan matrix).
    pub fn simple_root(datum: &Datum, node: usize) -> Result<Self> {
        datum.check_node(node)?;
        Weight::from_ints(datum, &datum.cartan[node - 1])
    }

    /// Parses comma-separated rationals, e.g. `"1/2,0,-3,2"`.
    pub fn parse(datum: &Datum, text: &str) -> Result<Self> {
        let coords = parse_rational_list(text)?;
        Weight::new(datum, coords)
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [Rational] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    /// `<self, beta_i^vee>` for a 1-based node.
    pub fn pairing(&self, node: usize) -> Result<Rational> {
        self.datum.check_node(node)?;
        Ok(self.coords[node - 1].clone())
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(Rational::is_integer)
    }

    /// Whether every coordinate is at most 1 (the fundamental parallelepiped test
    /// for a dominant weight).
    pub fn inside_fpp(&self) -> bool {
        let one = Rational::one();
        self.coords.iter().all(|c| *c <= one)
    }

    /// Coordinates in the simple-root basis.
    pub fn to_root_coords(&self) -> RootVector {
        let n = self.datum.rank;
        let inv = &self.datum.cartan_inverse;
        let coeffs = (0..n)
            .map(|j| (0..n).map(|i| &self.coords[i] * &inv[i][j]).sum())
            .collect();
        RootVector { datum: self.datum.clone(), coeffs }
    }

    /// Sum of the simple-root coefficients.
    pub fn height(&self) -> Rational {
        self.to_root_coords().coeffs.iter().sum()
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight { datum: self.datum.clone(), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Coordinates at the given nodes, in the given order.
    pub fn restrict(&self, nodes: &[usize]) -> Vec<Rational> {
        nodes.iter().map(|&n| self.coords[n - 1].clone()).collect()
    }

    /// Standard epsilon-coordinates for classical families.
    pub fn usual_coords(&self) -> Result<Vec<Rational>> {
        usual_coords(&self.datum, &self.coords)
    }

    pub fn from_usual(datum: &Datum, usual: &[Rational]) -> Result<Weight> {
        Weight::new(datum, from_usual(datum, usual)?)
    }

    fn combine(&self, other: &Weight, f: impl Fn(&Rational, &Rational) -> Rational) -> Weight {
        assert_eq!(*self.datum, *other.datum, "weights from different root data");
        Weight {
            datum: self.datum.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join(&self.coords))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.datum.name(), self)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { datum: self.datum.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

impl Mul<&Weight> for &Rational {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        rhs.scale(self)
    }
}

/// A vector in the simple-root basis.
#[derive(Clone, PartialEq, Eq)]
pub struct RootVector {
    datum: Datum,
    coeffs: Vec<Rational>,
}

impl RootVector {
    pub fn new(datum: &Datum, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != datum.rank {
            return Err(invalid(format!(
                "root vector has {} coefficients, rank is {}",
                coeffs.len(),
                datum.rank
            )));
        }
        Ok(RootVector { datum: datum.clone(), coeffs })
    }

    pub fn from_ints(datum: &Datum, coeffs: &[i64]) -> Result<Self> {
        RootVector::new(datum, coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    /// `coeffs * cartan`: the fundamental-weight coordinates.
    pub fn to_weight(&self) -> Weight {
        let n = self.datum.rank;
        let coords = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| !self.coeffs[i].is_zero())
                    .map(|i| &self.coeffs[i] * &Rational::from_int(self.datum.cartan[i][j]))
                    .sum()
            })
            .collect();
        Weight { datum: self.datum.clone(), coords }
    }

    pub fn height(&self) -> Rational {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if *c == Rational::one() {
                terms.push(format!("b{}", i + 1));
            } else {
                terms.push(format!("{c}*b{}", i + 1));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn join(v: &[Rational]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    let text = text.trim().trim_start_matches('[').trim_end_matches(']');
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',')
        .map(|s| Rational::from_str(s).map_err(|e| invalid(e.to_string())))
        .collect()
}

fn usual_coords(datum: &Datum, k: &[Rational]) -> Result<Vec<Rational>> {
    let n = datum.rank;
    let half = Rational::new(1, 2);
    let mut x = vec![Rational::zero(); n];
    match datum.family {
        Family::A => {
            // x_i = sum_{j>=i} k_j - (sum_j j k_j)/(n+1), giving n+1 entries summing to zero
            let shift: Rational = k
                .iter()
                .enumerate()
                .map(|(j, kj)| kj * &Rational::from_int(j as i64 + 1))
                .sum::<Rational>()
                / Rational::from_int(n as i64 + 1);
            let mut out = vec![Rational::zero(); n + 1];
            let mut acc = Rational::zero();
            for i in (0..=n).rev() {
                if i < n {
                    acc += &k[i];
                }
                out[i] = &acc - &shift;
            }
            return Ok(out);
        }
        Family::B => {
            x[n - 1] = &k[n - 1] * &half;
            for i in (0..n - 1).rev() {
                x[i] = &x[i + 1] + &k[i];
            }
        }
        Family::C => {
            x[n - 1] = k[n - 1].clone();
            for i in (0..n - 1).rev() {
                x[i] = &x[i + 1] + &k[i];
            }
        }
        Family::D => {
            x[n - 1] = (&k[n - 1] - &k[n - 2]) * &half;
            x[n - 2] = (&k[n - 1] + &k[n - 2]) * &half;
            for i in (0..n - 2).rev() {
                x[i] = &x[i + 1] + &k[i];
            }
        }
        f => return Err(Error::Unsupported(format!("usual coordinates for family {f}"))),
    }
    Ok(x)
}

fn from_usual(datum: &Datum, x: &[Rational]) -> Result<Vec<Rational>> {
    let n = datum.rank;
    let expected = if datum.family == Family::A { n + 1 } else { n };
    if !datum.family.is_classical() {
        return Err(Error::Unsupported(format!("usual coordinates for family {}", datum.family)));
    }
    if x.len() != expected {
        return Err(invalid(format!(
            "{} usual coordinates need {expected} entries, got {}",
            datum.name(),
            x.len()
        )));
    }
    let mut k: Vec<Rational> = (0..n.saturating_sub(1)).map(|i| &x[i] - &x[i + 1]).collect();
    k.push(match datum.family {
        Family::A => &x[n - 1] - &x[n],
        Family::B => &x[n - 1] * &Rational::from_int(2),
        Family::C => x[n - 1].clone(),
        Family::D => &x[n - 2] + &x[n - 1],
        _ => unreachable!(),
    });
    Ok(k)
}
