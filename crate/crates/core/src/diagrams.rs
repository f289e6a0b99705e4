//! Spin-Brauer and osc-Brauer diagrams: normal forms under the Clifford and
//! Weyl relations, composition and hom-space dimensions.
//!
//! Normal form: circled labels ascending; for osc, every edge points from the
//! smaller label to the larger one.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Spin,
    Osc,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spin" => Ok(Flavor::Spin),
            "osc" => Ok(Flavor::Osc),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

/// A diagram `L -> L'`: an ordered circled subset of `L`, a matching on part of
/// the rest (directed for osc), and a bijection from what remains onto `L'`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagram {
    pub source: Vec<u32>,
    pub target: Vec<u32>,
    pub circled: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub through: Vec<(u32, u32)>,
    pub flavor: Flavor,
}

impl Diagram {
    pub fn identity(labels: &[u32], flavor: Flavor) -> Diagram {
        Diagram {
            source: labels.to_vec(),
            target: labels.to_vec(),
            circled: Vec::new(),
            edges: Vec::new(),
            through: labels.iter().map(|&l| (l, l)).collect(),
            flavor,
        }
        .canonical()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::BadDiagram(msg.to_string()));
        let source: BTreeSet<u32> = self.source.iter().copied().collect();
        let target: BTreeSet<u32> = self.target.iter().copied().collect();
        if source.len() != self.source.len() || target.len() != self.target.len() {
            return bad("repeated label");
        }
        let mut used = BTreeSet::new();
        let touched = self
            .circled
            .iter()
            .chain(self.edges.iter().flat_map(|(a, b)| [a, b]))
            .chain(self.through.iter().map(|(s, _)| s));
        for &l in touched {
            if !source.contains(&l) {
                return bad(&format!("label {l} is not a source label"));
            }
            if !used.insert(l) {
                return bad(&format!("label {l} is used twice"));
            }
        }
        if used != source {
            return bad("source labels are not covered");
        }
        let hit: BTreeSet<u32> = self.through.iter().map(|(_, t)| *t).collect();
        if hit != target || hit.len() != self.through.len() {
            return bad("through strands are not a bijection onto the target");
        }
        Ok(())
    }

    /// Sorts the unordered parts; leaves the circled order and osc orientations alone.
    pub fn canonical(mut self) -> Diagram {
        self.source.sort_unstable();
        self.target.sort_unstable();
        if self.flavor == Flavor::Spin {
            for e in &mut self.edges {
                *e = (e.0.min(e.1), e.0.max(e.1));
            }
        }
        self.edges.sort_unstable();
        self.through.sort_unstable();
        self
    }

    pub fn is_normal(&self) -> bool {
        self.circled.windows(2).all(|w| w[0] < w[1]) && self.edges.iter().all(|(a, b)| a < b)
    }
}

/// A finite integer combination of normal-form diagrams with common source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramMorphism {
    pub flavor: Flavor,
    pub source: Vec<u32>,
    pub target: Vec<u32>,
    pub terms: BTreeMap<Diagram, i64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    diagram: Diagram,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    flavor: Flavor,
    source: Vec<u32>,
    target: Vec<u32>,
    terms: Vec<TermJson>,
}

impl Serialize for DiagramMorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismJson {
            flavor: self.flavor,
            source: self.source.clone(),
            target: self.target.clone(),
            terms: self.terms.iter().map(|(d, c)| TermJson { diagram: d.clone(), coeff: *c }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiagramMorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = MorphismJson::deserialize(d)?;
        let mut out = DiagramMorphism::zero(m.flavor, &m.source, &m.target);
        for t in m.terms {
            let normal = normalize(&t.diagram).map_err(serde::de::Error::custom)?;
            out.add_scaled(&normal, t.coeff);
        }
        Ok(out)
    }
}

impl DiagramMorphism {
    pub fn zero(flavor: Flavor, source: &[u32], target: &[u32]) -> Self {
        let mut source = source.to_vec();
        let mut target = target.to_vec();
        source.sort_unstable();
        target.sort_unstable();
        DiagramMorphism { flavor, source, target, terms: BTreeMap::new() }
    }

    pub fn identity(labels: &[u32], flavor: Flavor) -> Self {
        let mut m = DiagramMorphism::zero(flavor, labels, labels);
        m.add_term(Diagram::identity(labels, flavor), 1);
        m
    }

    fn add_term(&mut self, d: Diagram, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(d.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&d);
        }
    }

    pub fn add_scaled(&mut self, other: &DiagramMorphism, c: i64) {
        for (d, k) in &other.terms {
            self.add_term(d.clone(), k * c);
        }
    }

    pub fn coeff(&self, d: &Diagram) -> i64 {
        self.terms.get(&d.clone().canonical()).copied().unwrap_or(0)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &DiagramMorphism) -> Result<DiagramMorphism> {
        if self.flavor != f.flavor {
            return Err(Error::FlavorMismatch);
        }
        if self.source != f.target {
            return Err(Error::LabelMismatch(format!("{:?} vs {:?}", f.target, self.source)));
        }
        let mut out = DiagramMorphism::zero(self.flavor, &f.source, &self.target);
        for (df, cf) in &f.terms {
            for (dg, cg) in &self.terms {
                out.add_scaled(&normalize(&concatenate(dg, df)?)?, cf * cg);
            }
        }
        Ok(out)
    }
}

/// Raw composite `g ∘ f`: circled labels of `f` first, then the pulled-back
/// circled labels of `g` in their order.
pub fn concatenate(g: &Diagram, f: &Diagram) -> Result<Diagram> {
    if g.flavor != f.flavor {
        return Err(Error::FlavorMismatch);
    }
    let mid: BTreeSet<u32> = f.target.iter().copied().collect();
    if mid != g.source.iter().copied().collect::<BTreeSet<_>>() {
        return Err(Error::LabelMismatch(format!("{:?} vs {:?}", f.target, g.source)));
    }
    let back: BTreeMap<u32, u32> = f.through.iter().map(|&(s, t)| (t, s)).collect();
    let forward: BTreeMap<u32, u32> = g.through.iter().copied().collect();
    let mut circled = f.circled.clone();
    circled.extend(g.circled.iter().map(|u| back[u]));
    let mut edges = f.edges.clone();
    edges.extend(g.edges.iter().map(|(a, b)| (back[a], back[b])));
    let through = f.through.iter().filter_map(|(s, t)| forward.get(t).map(|x| (*s, *x))).collect();
    Ok(Diagram {
        source: f.source.clone(),
        target: g.target.clone(),
        circled,
        edges,
        through,
        flavor: f.flavor,
    }
    .canonical())
}

/// Rewrites a raw diagram into normal-form diagrams, always fixing the first
/// out-of-order circled pair.
pub fn normalize(raw: &Diagram) -> Result<DiagramMorphism> {
    normalize_with(raw, |_| 0)
}

/// As [`normalize`], fixing a uniformly random out-of-order pair at each step.
pub fn normalize_random<R: Rng>(raw: &Diagram, rng: &mut R) -> Result<DiagramMorphism> {
    normalize_with(raw, |k| rng.gen_range(0..k))
}

/// `choose(k)` picks which of the `k` adjacent inversions to rewrite next.
pub fn normalize_with(raw: &Diagram, mut choose: impl FnMut(usize) -> usize) -> Result<DiagramMorphism> {
    raw.validate()?;
    let mut out = DiagramMorphism::zero(raw.flavor, &raw.source, &raw.target);
    let mut start = raw.clone().canonical();
    let mut sign = 1;
    if start.flavor == Flavor::Osc {
        for e in &mut start.edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
                sign = -sign;
            }
        }
        start.edges.sort_unstable();
    }
    let mut stack = vec![(sign, start)];
    while let Some((c, d)) = stack.pop() {
        let inversions: Vec<usize> = (0..d.circled.len().saturating_sub(1)).filter(|&k| d.circled[k] > d.circled[k + 1]).collect();
        if inversions.is_empty() {
            out.add_term(d, c);
            continue;
        }
        let k = inversions[choose(inversions.len())];
        let (hi, lo) = (d.circled[k], d.circled[k + 1]);
        let mut swapped = d.clone();
        swapped.circled.swap(k, k + 1);
        let mut joined = d.clone();
        joined.circled.drain(k..k + 2);
        joined.edges.push((lo, hi));
        joined.edges.sort_unstable();
        match d.flavor {
            // Γ + Γ' = Γ''
            Flavor::Spin => stack.push((-c, swapped)),
            // Γ - Γ' = Γ'' with Γ the out-of-order diagram
            Flavor::Osc => stack.push((c, swapped)),
        }
        stack.push((c, joined));
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn double_factorial_odd(k: u64) -> u64 {
    // (2k-1)!!, the number of perfect matchings on 2k points
    (1..=k).map(|i| 2 * i - 1).product()
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Number of normal-form diagrams from an `s`-set to a `t`-set; the same for both flavors.
pub fn hom_dim(s: u64, t: u64) -> u64 {
    if t > s {
        return 0;
    }
    let rest = s - t;
    (0..=rest / 2)
        .map(|k| {
            let u = rest - 2 * k;
            binomial(s, u) * binomial(s - u, 2 * k) * double_factorial_odd(k) * factorial(t)
        })
        .sum()
}

/// Every normal-form diagram between the given label sets.
pub fn all_normal_forms(source: &[u32], target: &[u32], flavor: Flavor) -> Vec<Diagram> {
    let mut src = source.to_vec();
    src.sort_unstable();
    let mut tgt = target.to_vec();
    tgt.sort_unstable();
    let mut out = Vec::new();
    if tgt.len() > src.len() {
        return out;
    }
    let n = src.len();
    for mask in 0u32..(1 << n) {
        let circled: Vec<u32> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| src[i]).collect();
        let rest: Vec<u32> = (0..n).filter(|i| mask & (1 << i) == 0).map(|i| src[i]).collect();
        if rest.len() < tgt.len() || (rest.len() - tgt.len()) % 2 == 1 {
            continue;
        }
        let pairs = (rest.len() - tgt.len()) / 2;
        for (edges, left) in matchings(&rest, pairs) {
            for perm in permutations(&tgt) {
                let through = left.iter().copied().zip(perm).collect();
                out.push(
                    Diagram {
                        source: src.clone(),
                        target: tgt.clone(),
                        circled: circled.clone(),
                        edges: edges.clone(),
                        through,
                        flavor,
                    }
                    .canonical(),
                );
            }
        }
    }
    out
}

/// Matchings with exactly `pairs` edges (smaller label first), with the unmatched labels.
fn matchings(labels: &[u32], pairs: usize) -> Vec<(Vec<(u32, u32)>, Vec<u32>)> {
    if pairs == 0 {
        return vec![(Vec::new(), labels.to_vec())];
    }
    if labels.len() < 2 * pairs {
        return Vec::new();
    }
    let first = labels[0];
    let rest = &labels[1..];
    let mut out = Vec::new();
    // first label unmatched
    for (edges, mut left) in matchings(rest, pairs) {
        left.insert(0, first);
        out.push((edges, left));
    }
    for i in 0..rest.len() {
        let others: Vec<u32> = rest.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &l)| l).collect();
        for (mut edges, left) in matchings(&others, pairs - 1) {
            edges.push((first, rest[i]));
            edges.sort_unstable();
            out.push((edges, left));
        }
    }
    out
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// A random raw diagram: random circled order, random edge orientations.
pub fn random_raw<R: Rng>(rng: &mut R, source: &[u32], target: &[u32], flavor: Flavor) -> Diagram {
    assert!(target.len() <= source.len());
    let rest = source.len() - target.len();
    let pairs = rng.gen_range(0..=rest / 2);
    let circled_len = rest - 2 * pairs;
    let mut src = source.to_vec();
    src.shuffle(rng);
    let mut tgt = target.to_vec();
    tgt.shuffle(rng);
    let circled = src[..circled_len].to_vec();
    let edges = src[circled_len..circled_len + 2 * pairs].chunks(2).map(|c| (c[0], c[1])).collect();
    let through = src[circled_len + 2 * pairs..].iter().copied().zip(tgt).collect();
    Diagram { source: source.to_vec(), target: target.to_vec(), circled, edges, through, flavor }.canonical()
}

/// The normalized image of a random raw diagram.
pub fn random_morphism<R: Rng>(rng: &mut R, source: &[u32], target: &[u32], flavor: Flavor) -> DiagramMorphism {
    normalize(&random_raw(rng, source, target, flavor)).expect("random diagrams are well formed")
}
