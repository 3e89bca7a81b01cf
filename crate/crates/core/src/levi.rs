//! Levi subgroups attached to node subsets: component classification,
//! adjoint highest weights, cx-basic lowest K-types and the Levi `M_cx`.

use std::fmt;

use serde::Serialize;

use crate::error::{internal, invalid, Result};
use crate::rational::Rational;
use crate::rootsys::{cartan_matrix, Datum, Family, NodeSet, RootDatum, RootVector, Weight};

/// One simple factor of a Levi subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    /// Ambient nodes in local order: local node `k` is `nodes[k - 1]`.
    pub nodes: Vec<usize>,
    pub family: Family,
    pub local_rank: usize,
    /// Family of the ambient group; the cx-basic list depends on it.
    pub ambient: Family,
}

impl ComponentInfo {
    pub fn node_set(&self) -> NodeSet {
        NodeSet::from_nodes(self.nodes.iter().copied())
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.local_rank)
    }

    /// Coordinates of `lambda` at the component's nodes, in local order.
    pub fn restrict(&self, lambda: &Weight) -> Vec<Rational> {
        lambda.restrict(&self.nodes)
    }
}

impl fmt::Display for ComponentInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name(), self.node_set())
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviDatum {
    pub datum: Datum,
    pub nodes: NodeSet,
    pub components: Vec<ComponentInfo>,
}

impl fmt::Display for LeviDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.nodes)?;
        if !self.components.is_empty() {
            let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
            write!(f, " = {}", parts.join(" x "))?;
        }
        Ok(())
    }
}

fn connected_components(datum: &RootDatum, nodes: NodeSet) -> Vec<Vec<usize>> {
    let mut seen = NodeSet::EMPTY;
    let mut out = Vec::new();
    for start in nodes.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut i = 0;
        while i < comp.len() {
            for nb in datum.neighbours(comp[i]).intersection(nodes).iter() {
                if !seen.contains(nb) {
                    seen.insert(nb);
                    comp.push(nb);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn walk_path(datum: &RootDatum, set: NodeSet, start: usize) -> Vec<usize> {
    let mut path = vec![start];
    let mut prev = 0;
    let mut cur = start;
    loop {
        let next = datum.neighbours(cur).intersection(set).iter().find(|&n| n != prev);
        match next {
            Some(n) => {
                path.push(n);
                prev = cur;
                cur = n;
            }
            None => return path,
        }
    }
}

/// Nodes on the branch of `set` that leaves `branch` through `first`, nearest first.
fn arm(datum: &RootDatum, set: NodeSet, branch: usize, first: usize) -> Vec<usize> {
    let mut rest = set;
    rest = rest.difference(NodeSet::singleton(branch));
    walk_path(datum, rest, first)
}

fn classify_one(datum: &RootDatum, comp: &[usize]) -> Result<ComponentInfo> {
    let m = comp.len();
    let set = NodeSet::from_nodes(comp.iter().copied());
    let c = |u: usize, v: usize| datum.cartan_entry(u, v);
    let degree = |u: usize| datum.neighbours(u).intersection(set).len();
    let (family, order) = if m == 1 {
        (Family::A, comp.to_vec())
    } else {
        let mut multiple = None;
        for &u in comp {
            for v in datum.neighbours(u).intersection(set).iter() {
                if c(u, v) < -1 {
                    multiple = Some((u, v, -c(u, v)));
                }
            }
        }
        match multiple {
            Some((long, short, 3)) => (Family::G, vec![short, long]),
            Some(_) => {
                let ends: Vec<usize> = comp.iter().copied().filter(|&u| degree(u) == 1).collect();
                let mut path = walk_path(datum, set, ends[0]);
                if m == 2 {
                    // ascending ambient order decides between the two names of rank two
                    if c(path[0], path[1]) == -2 {
                        (Family::B, path)
                    } else {
                        (Family::C, path)
                    }
                } else {
                    let pos = (0..m - 1)
                        .find(|&k| c(path[k], path[k + 1]) * c(path[k + 1], path[k]) == 2)
                        .ok_or_else(|| internal("double bond vanished"))?;
                    if m == 4 && pos == 1 {
                        if c(path[1], path[2]) != -2 {
                            path.reverse();
                        }
                        (Family::F, path)
                    } else {
                        if pos == 0 {
                            path.reverse();
                        } else if pos != m - 2 {
                            return Err(internal(format!("double bond inside {comp:?}")));
                        }
                        if c(path[m - 2], path[m - 1]) == -2 {
                            (Family::B, path)
                        } else {
                            (Family::C, path)
                        }
                    }
                }
            }
            None => {
                let branch = comp.iter().copied().find(|&u| degree(u) == 3);
                match branch {
                    None => {
                        let start = comp.iter().copied().find(|&u| degree(u) == 1).unwrap();
                        (Family::A, walk_path(datum, set, start))
                    }
                    Some(b) => {
                        let mut arms: Vec<Vec<usize>> = datum
                            .neighbours(b)
                            .intersection(set)
                            .iter()
                            .map(|n| arm(datum, set, b, n))
                            .collect();
                        arms.sort_by_key(|a| (a.len(), a.iter().copied().min().unwrap()));
                        let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
                        match lens.as_slice() {
                            [1, 1, _] => {
                                // D_m: long arm from its tip, the branch node, then the two leaves
                                let (long, leaves) = if lens[2] == 1 {
                                    (arms[0].clone(), vec![arms[1][0], arms[2][0]])
                                } else {
                                    (arms[2].clone(), vec![arms[0][0], arms[1][0]])
                                };
                                let mut leaves = leaves;
                                leaves.sort_unstable();
                                let mut order: Vec<usize> = long.into_iter().rev().collect();
                                order.push(b);
                                order.extend(leaves);
                                (Family::D, order)
                            }
                            [1, 2, 2..=4] => {
                                let (short2, long) = (arms[1].clone(), arms[2].clone());
                                let mut order = vec![short2[1], arms[0][0], short2[0], b];
                                order.extend(long);
                                (Family::E, order)
                            }
                            _ => return Err(internal(format!("unclassifiable subdiagram {comp:?}"))),
                        }
                    }
                }
            }
        }
    };
    let expected = cartan_matrix(family, m);
    for (i, &u) in order.iter().enumerate() {
        for (j, &v) in order.iter().enumerate() {
            if c(u, v) != expected[i][j] {
                return Err(internal(format!(
                    "component {order:?} does not match {family}{m} at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(ComponentInfo { nodes: order, family, local_rank: m, ambient: datum.family() })
}

/// Connected components of `nodes`, classified, ordered by smallest node.
pub fn classify_components(datum: &Datum, nodes: NodeSet) -> Result<Vec<ComponentInfo>> {
    for n in nodes.iter() {
        datum.check_node(n)?;
    }
    connected_components(datum, nodes).iter().map(|comp| classify_one(datum, comp)).collect()
}

pub fn levi_datum(datum: &Datum, nodes: NodeSet) -> Result<LeviDatum> {
    Ok(LeviDatum { datum: datum.clone(), nodes, components: classify_components(datum, nodes)? })
}

fn zero_nodes(w: &Weight) -> NodeSet {
    NodeSet::from_nodes((1..=w.coords().len()).filter(|&i| w.coords()[i - 1].is_zero()))
}

/// `M_f`: the Levi on the nodes where `η` vanishes.
pub fn levi_from_eta(eta: &Weight) -> Result<LeviDatum> {
    if !eta.is_dominant() {
        return Err(invalid(format!("eta {eta} is not dominant")));
    }
    levi_datum(eta.datum(), zero_nodes(eta))
}

/// Highest-root coefficients of a simple type in its local numbering.
pub fn adjoint_coefficients(family: Family, rank: usize) -> Vec<i64> {
    let m = rank;
    match family {
        Family::A => vec![1; m],
        Family::B => (0..m).map(|k| if k == 0 { 1 } else { 2 }).collect(),
        Family::C => (0..m).map(|k| if k == m - 1 { 1 } else { 2 }).collect(),
        Family::D => (0..m).map(|k| if k == 0 || k >= m - 2 { 1 } else { 2 }).collect(),
        Family::E => match m {
            6 => vec![1, 2, 2, 3, 2, 1],
            7 => vec![2, 2, 3, 4, 3, 2, 1],
            _ => vec![2, 3, 4, 6, 5, 4, 3, 2],
        },
        Family::F => vec![2, 3, 4, 2],
        Family::G => vec![3, 2],
    }
}

fn embed(datum: &Datum, c: &ComponentInfo, local: &[i64]) -> RootVector {
    let mut coeffs = vec![0i64; datum.rank()];
    for (k, &n) in c.nodes.iter().enumerate() {
        coeffs[n - 1] = local[k];
    }
    RootVector::from_ints(datum, &coeffs).expect("rank matches")
}

/// Highest root `δ` of the component, in the ambient simple-root basis.
pub fn adjoint_delta(datum: &Datum, c: &ComponentInfo) -> RootVector {
    embed(datum, c, &adjoint_coefficients(c.family, c.local_rank))
}

fn as_naturals(tau: &[Rational]) -> Option<Vec<i64>> {
    tau.iter().map(|t| t.to_i64().filter(|&v| v >= 0)).collect()
}

fn unit_at(len: usize, pos: usize) -> Vec<i64> {
    (0..len).map(|k| i64::from(k == pos)).collect()
}

/// Whether the local lowest K-type `τ` of a component is cx-basic.
pub fn is_cx_basic(c: &ComponentInfo, tau: &[Rational]) -> bool {
    let Some(t) = as_naturals(tau) else { return false };
    if t.len() != c.local_rank {
        return false;
    }
    if t.iter().all(|&v| v == 0) {
        return true;
    }
    let m = c.local_rank;
    match c.family {
        Family::A | Family::D | Family::E => false,
        Family::B => t == unit_at(m, m - 1),
        Family::C if c.ambient == Family::F => t == unit_at(3, 0) || t == unit_at(3, 1),
        Family::C => t.iter().sum::<i64>() == 1,
        Family::F => t == unit_at(4, 2) || t == unit_at(4, 3),
        Family::G => t == vec![1, 0] || t == vec![2, 0],
    }
}

/// Component classifications for every subset of nodes, indexed by bitmask.
pub struct LeviTable {
    datum: Datum,
    classes: Vec<Vec<ComponentInfo>>,
}

impl LeviTable {
    pub fn new(datum: &Datum) -> Result<Self> {
        let classes = (0..1u32 << datum.rank())
            .map(|mask| classify_components(datum, NodeSet::from_mask(mask)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LeviTable { datum: datum.clone(), classes })
    }

    pub fn components(&self, nodes: NodeSet) -> &[ComponentInfo] {
        &self.classes[nodes.mask() as usize]
    }

    fn admissible(&self, eta: &Weight, nodes: NodeSet) -> bool {
        self.components(nodes).iter().all(|c| is_cx_basic(c, &c.restrict(eta)))
    }

    /// `M_cx`: the largest node superset of `I(M_f)` on which `η` is cx-basic.
    pub fn compute_mcx(&self, eta: &Weight) -> Result<LeviDatum> {
        if **eta.datum() != *self.datum {
            return Err(invalid("eta belongs to a different root datum"));
        }
        if !eta.is_dominant() {
            return Err(invalid(format!("eta {eta} is not dominant")));
        }
        let base = zero_nodes(eta).mask();
        let free = self.datum.all_nodes().mask() & !base;
        let mut union = 0u32;
        let mut sub = free;
        loop {
            let mask = base | sub;
            if union | mask != union && self.admissible(eta, NodeSet::from_mask(mask)) {
                union |= mask;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        let nodes = NodeSet::from_mask(union);
        if !self.admissible(eta, nodes) {
            return Err(internal(format!(
                "no unique maximal cx-basic Levi for eta {eta}: union {nodes} is not admissible"
            )));
        }
        Ok(LeviDatum { datum: self.datum.clone(), nodes, components: self.components(nodes).to_vec() })
    }
}

pub fn compute_mcx(eta: &Weight) -> Result<LeviDatum> {
    LeviTable::new(eta.datum())?.compute_mcx(eta)
}

pub fn is_bottom_layer(_eta: &Weight, gamma: &Weight) -> bool {
    gamma.is_dominant()
}

/// Local root increments `γ − τ` for the indefinite K-types of a cx-basic `τ`.
fn catalog_increments(c: &ComponentInfo, tau: &[i64]) -> Result<Vec<Vec<i64>>> {
    let m = c.local_rank;
    if tau.iter().all(|&v| v == 0) {
        return Ok(vec![adjoint_coefficients(c.family, m)]);
    }
    let unknown = || invalid(format!("no indefinite K-type recorded for {} with tau {tau:?}", c.name()));
    match c.family {
        Family::B if *tau == unit_at(m, m - 1) => Ok(vec![vec![1; m]]),
        Family::C if tau.iter().sum::<i64>() == 1 && tau.iter().all(|&v| v <= 1) => {
            let i = tau.iter().position(|&v| v == 1).unwrap() + 1;
            let mut out = Vec::new();
            if i >= 2 {
                out.push((1..=m).map(|k| i64::from(k < i)).collect());
            }
            if i < m {
                out.push(
                    (1..=m)
                        .map(|k| match k {
                            k if k <= i => 1,
                            k if k == m => 1,
                            _ => 2,
                        })
                        .collect(),
                );
            }
            Ok(out)
        }
        Family::F | Family::G => {
            let targets: Vec<Vec<i64>> = match (c.family, tau) {
                (Family::F, [0, 0, 1, 0]) => vec![vec![1, 0, 0, 1], vec![0, 0, 0, 2]],
                (Family::F, [0, 0, 0, 1]) => vec![vec![0, 0, 1, 0]],
                (Family::G, [1, 0]) => vec![vec![2, 0]],
                (Family::G, [2, 0]) => vec![vec![1, 1]],
                _ => return Err(unknown()),
            };
            let local = RootDatum::new(c.family, m)?;
            targets
                .iter()
                .map(|g| {
                    let diff: Vec<i64> = g.iter().zip(tau).map(|(a, b)| a - b).collect();
                    let rc = Weight::from_ints(&local, &diff)?.to_root_coords();
                    rc.coeffs()
                        .iter()
                        .map(|x| x.to_i64().filter(|_| x.is_integer()))
                        .collect::<Option<Vec<i64>>>()
                        .ok_or_else(|| internal("catalog increment is not in the root lattice"))
                })
                .collect()
        }
        _ => Err(unknown()),
    }
}

/// Ambient weights `γ` attached to component `c` of `M_cx(η)`.
pub fn component_gammas(eta: &Weight, c: &ComponentInfo) -> Result<Vec<Weight>> {
    let tau = as_naturals(&c.restrict(eta))
        .ok_or_else(|| invalid("eta restricts to a non-integral or negative tau"))?;
    let incs = catalog_increments(c, &tau)?;
    Ok(incs.iter().map(|inc| eta + &embed(eta.datum(), c, inc).to_weight()).collect())
}

/// The indefinite K-types `γ` recorded for a cx-basic `τ` of a simple group.
pub fn indefinite_gammas(tau: &Weight) -> Result<Vec<Weight>> {
    let datum = tau.datum();
    let comps = classify_components(datum, datum.all_nodes())?;
    component_gammas(tau, &comps[0])
}
