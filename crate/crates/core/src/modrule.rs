//! The modification rule `(τ_N, j_N)`, computed two independent ways, plus the
//! type A dot action and the correspondence between self-conjugate shapes and
//! preimages of `τ_{2n}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::{remove_first_column_strip, BorderStrip, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModResult {
    Vanishes,
    Defined { tau: Partition, j: u32 },
}

impl ModResult {
    pub fn defined(tau: Partition, j: u32) -> Self {
        ModResult::Defined { tau, j }
    }

    pub fn tau(&self) -> Option<&Partition> {
        match self {
            ModResult::Vanishes => None,
            ModResult::Defined { tau, .. } => Some(tau),
        }
    }

    pub fn j(&self) -> Option<u32> {
        match self {
            ModResult::Vanishes => None,
            ModResult::Defined { j, .. } => Some(*j),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ModResultJson {
    Vanishes { vanishes: bool },
    Defined { tau: Partition, j: u32 },
}

impl Serialize for ModResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ModResult::Vanishes => ModResultJson::Vanishes { vanishes: true },
            ModResult::Defined { tau, j } => ModResultJson::Defined { tau: tau.clone(), j: *j },
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ModResult {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match ModResultJson::deserialize(deserializer)? {
            ModResultJson::Vanishes { .. } => ModResult::Vanishes,
            ModResultJson::Defined { tau, j } => ModResult::Defined { tau, j },
        })
    }
}

/// One removal step of the border-strip recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripStep {
    pub before: Partition,
    pub strip: BorderStrip,
}

/// Border-strip recursion, also returning each removal step.
pub fn tau_j_border_trace(lam: &Partition, big_n: u32) -> (ModResult, Vec<StripStep>) {
    let n = (big_n / 2) as usize;
    let mut alpha = lam.clone();
    let mut j = 0u32;
    let mut steps = Vec::new();
    while alpha.len() > n {
        let len = 2 * alpha.len() as i64 - big_n as i64 - 1;
        if len <= 0 {
            return (ModResult::Vanishes, steps);
        }
        match remove_first_column_strip(&alpha, len as usize) {
            Ok(Some((rest, strip))) => {
                j += strip.columns() as u32;
                steps.push(StripStep { before: alpha, strip });
                alpha = rest;
            }
            _ => return (ModResult::Vanishes, steps),
        }
    }
    (ModResult::defined(alpha, j), steps)
}

pub fn tau_j_border(lam: &Partition, big_n: u32) -> ModResult {
    tau_j_border_trace(lam, big_n).0
}

/// A half-integer sequence stored doubled, over a finite window; entries past
/// the window continue the arithmetic tail of `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntSeq {
    pub doubled: Vec<i64>,
}

impl HalfIntSeq {
    /// `λ† + ρ` with `2ρ_i = -(N + 2i - 1)`, over a window long enough that every
    /// relevant signed permutation fixes the positions past it.
    pub fn shifted_transpose(lam: &Partition, big_n: u32) -> Self {
        let window = lam.len() + lam.first() as usize + big_n as usize + 2;
        let t = lam.transpose();
        let doubled = (1..=window).map(|i| 2 * t.get(i - 1) as i64 + doubled_rho(i, big_n)).collect();
        HalfIntSeq { doubled }
    }

    pub fn len(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }
}

/// `2ρ_i` for the index `i >= 1`.
fn doubled_rho(i: usize, big_n: u32) -> i64 {
    -(big_n as i64 + 2 * i as i64 - 1)
}

/// `#{i<j : w(i) > w(j)} + Σ_{w(i)<0} |w(i)|`, for a signed permutation in
/// window notation.
pub fn type_b_length(w: &[i64]) -> u64 {
    let mut len = 0u64;
    for i in 0..w.len() {
        for k in i + 1..w.len() {
            if w[i] > w[k] {
                len += 1;
            }
        }
        if w[i] < 0 {
            len += w[i].unsigned_abs();
        }
    }
    len
}

/// The signed permutation sending `x` to its all-negative strictly decreasing
/// rearrangement `y`, with `y_i = ±x_{|w(i)|}`. `None` when `x` has a zero or
/// a repeated absolute value.
pub fn sort_to_antidominant(x: &[i64]) -> Option<(Vec<i64>, Vec<i64>)> {
    if x.contains(&0) {
        return None;
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by_key(|&k| x[k].abs());
    if order.windows(2).any(|p| x[p[0]].abs() == x[p[1]].abs()) {
        return None;
    }
    let y = order.iter().map(|&k| -x[k].abs()).collect();
    let w = order.iter().map(|&k| if x[k] < 0 { k as i64 + 1 } else { -(k as i64 + 1) }).collect();
    Some((y, w))
}

pub fn tau_j_weyl(lam: &Partition, big_n: u32) -> ModResult {
    let x = HalfIntSeq::shifted_transpose(lam, big_n);
    let Some((y, w)) = sort_to_antidominant(&x.doubled) else {
        return ModResult::Vanishes;
    };
    let last = w.len() as i64;
    assert_eq!(w[w.len() - 1], last, "window too short for {lam} at N={big_n}");
    let tau_t: Vec<u32> = y
        .iter()
        .enumerate()
        .map(|(i, yi)| {
            let d = yi - doubled_rho(i + 1, big_n);
            debug_assert!(d >= 0 && d % 2 == 0);
            (d / 2) as u32
        })
        .collect();
    let tau_t = Partition::new(tau_t).expect("antidominant rearrangement gives a partition");
    ModResult::defined(tau_t.transpose(), type_b_length(&w) as u32)
}

/// An algorithm computing `(τ_N, j_N)`.
pub trait ModificationRule: Send + Sync {
    fn name(&self) -> &'static str;
    fn tau_j(&self, lam: &Partition, big_n: u32) -> ModResult;
}

pub struct BorderStripRule;

impl ModificationRule for BorderStripRule {
    fn name(&self) -> &'static str {
        "border"
    }
    fn tau_j(&self, lam: &Partition, big_n: u32) -> ModResult {
        tau_j_border(lam, big_n)
    }
}

pub struct WeylRule;

impl ModificationRule for WeylRule {
    fn name(&self) -> &'static str {
        "weyl"
    }
    fn tau_j(&self, lam: &Partition, big_n: u32) -> ModResult {
        tau_j_weyl(lam, big_n)
    }
}

/// Modification-rule algorithms selectable by name.
pub struct RuleRegistry {
    rules: Vec<Box<dyn ModificationRule>>,
}

impl RuleRegistry {
    pub fn empty() -> Self {
        RuleRegistry { rules: Vec::new() }
    }

    pub fn register(&mut self, rule: Box<dyn ModificationRule>) {
        self.rules.retain(|r| r.name() != rule.name());
        self.rules.push(rule);
    }

    pub fn get(&self, name: &str) -> Result<&dyn ModificationRule> {
        self.rules
            .iter()
            .find(|r| r.name() == name)
            .map(|r| r.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.rules.iter().map(|r| r.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn ModificationRule> {
        self.rules.iter().map(|r| r.as_ref())
    }
}

impl Default for RuleRegistry {
    fn default() -> Self {
        let mut reg = RuleRegistry::empty();
        reg.register(Box::new(BorderStripRule));
        reg.register(Box::new(WeylRule));
        reg
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DotActionResult {
    Singular,
    Regular { length: u64, result: Partition },
}

/// `w • s = w(s + ρ) - ρ` with `ρ = (0, -1, -2, ...)`, choosing `w` to make the
/// result a partition.
pub fn type_a_dot(seq: &[u32]) -> DotActionResult {
    let mut v: Vec<i64> = seq.iter().enumerate().map(|(i, &s)| s as i64 - i as i64).collect();
    let mut inversions = 0u64;
    for i in 0..v.len() {
        for k in i + 1..v.len() {
            if v[i] == v[k] {
                return DotActionResult::Singular;
            }
            if v[i] < v[k] {
                inversions += 1;
            }
        }
    }
    v.sort_unstable_by(|a, b| b.cmp(a));
    let parts = v.iter().enumerate().map(|(i, &x)| (x + i as i64) as u32).collect();
    DotActionResult::Regular {
        length: inversions,
        result: Partition::new(parts).expect("sorted dot action gives a partition"),
    }
}

/// `(λ | μ)`: `λ` padded to `n` entries followed by `μ`.
pub fn concat_seq(lam: &Partition, n: usize, mu: &Partition) -> Vec<u32> {
    let mut seq: Vec<u32> = (0..n).map(|i| lam.get(i)).collect();
    seq.extend_from_slice(mu.parts());
    seq
}

fn check_length(lam: &Partition, n: u32) -> Result<()> {
    if lam.len() > n as usize {
        return Err(Error::TooManyParts { partition: lam.to_string(), max: n as usize });
    }
    Ok(())
}

/// Self-conjugate `μ` with `|μ| <= bound` and `(λ | μ)` regular.
pub fn s1_set(lam: &Partition, n: u32, bound: u32) -> Result<Vec<Partition>> {
    check_length(lam, n)?;
    Ok(Partition::all_up_to(bound)
        .into_iter()
        .filter(|mu| mu.is_self_conjugate())
        .filter(|mu| matches!(type_a_dot(&concat_seq(lam, n as usize, mu)), DotActionResult::Regular { .. }))
        .collect())
}

/// Partitions `α` with `τ_{2n}(α) = λ` and `|α| <= |λ| + bound`.
pub fn s2_set(lam: &Partition, n: u32, bound: u32) -> Result<Vec<Partition>> {
    check_length(lam, n)?;
    Ok(Partition::all_up_to(lam.size() + bound)
        .into_iter()
        .filter(|alpha| tau_j_border(alpha, 2 * n).tau() == Some(lam))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BottPair {
    pub mu: Partition,
    pub alpha: Partition,
    pub length: u64,
    pub j: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BottReport {
    pub pairs: Vec<BottPair>,
    pub failure: Option<String>,
}

impl BottReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that `μ ↦ w • (λ | μ)` is a bijection from the bounded `S₁(λ)` onto
/// the matching slice of `S₂(λ)`, with `ℓ(w) + j_{2n}(α) = (|μ| + rank μ)/2`,
/// and checks the strip identities relating `μ` to `μ` minus its first hook.
pub fn bott_bijection_check(lam: &Partition, n: u32, bound: u32) -> Result<BottReport> {
    let s1 = s1_set(lam, n, bound)?;
    let s2: BTreeSet<Partition> = s2_set(lam, n, bound)?.into_iter().collect();
    let mut pairs = Vec::new();
    let mut image: BTreeMap<Partition, Partition> = BTreeMap::new();
    let mut by_mu: BTreeMap<Partition, (Partition, u64)> = BTreeMap::new();
    let fail = |pairs, msg: String| Ok(BottReport { pairs, failure: Some(msg) });

    for mu in &s1 {
        let DotActionResult::Regular { length, result: alpha } = type_a_dot(&concat_seq(lam, n as usize, mu)) else {
            unreachable!("s1 members are regular");
        };
        let ModResult::Defined { tau, j } = tau_j_border(&alpha, 2 * n) else {
            return fail(pairs, format!("μ={mu}: α={alpha} has vanishing τ_{}", 2 * n));
        };
        if &tau != lam || !s2.contains(&alpha) {
            return fail(pairs, format!("μ={mu}: α={alpha} has τ={tau}, expected {lam}"));
        }
        if 2 * (length + j as u64) != (mu.size() + mu.durfee_rank()) as u64 {
            return fail(pairs, format!("μ={mu}: ℓ(w)={length} + j={j} ≠ (|μ|+rank μ)/2"));
        }
        if let Some(prev) = image.insert(alpha.clone(), mu.clone()) {
            return fail(pairs, format!("α={alpha} is hit by both μ={prev} and μ={mu}"));
        }
        by_mu.insert(mu.clone(), (alpha.clone(), length));
        pairs.push(BottPair { mu: mu.clone(), alpha, length, j });
    }
    if image.len() != s2.len() {
        let missed: Vec<String> = s2.iter().filter(|a| !image.contains_key(*a)).map(|a| a.to_string()).collect();
        return fail(pairs, format!("S₂ elements not hit: {}", missed.join(" ")));
    }

    for mu in s1.iter().filter(|m| !m.is_empty()) {
        let nu = mu.strip_first_hook();
        let (alpha, length) = &by_mu[mu];
        let Some((beta, length_nu)) = by_mu.get(&nu) else {
            return fail(pairs, format!("μ={mu}: ν={nu} is not in S₁"));
        };
        let strip_len = 2 * alpha.len() as i64 - 2 * n as i64 - 1;
        if strip_len != 2 * mu.first() as i64 - 1 {
            return fail(pairs, format!("μ={mu}: strip length {strip_len} ≠ 2μ₁-1"));
        }
        let Ok(Some((rest, strip))) = remove_first_column_strip(alpha, strip_len as usize) else {
            return fail(pairs, format!("μ={mu}: no border strip of length {strip_len} in α={alpha}"));
        };
        if &rest != beta {
            return fail(pairs, format!("μ={mu}: α∖R = {rest} ≠ β = {beta}"));
        }
        if strip.columns() as i64 != mu.first() as i64 + *length_nu as i64 - *length as i64 {
            return fail(pairs, format!("μ={mu}: c(R)={} ≠ μ₁+ℓ(w')-ℓ(w)", strip.columns()));
        }
    }
    Ok(BottReport { pairs, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::from(parts)
    }

    #[test]
    fn border_examples() {
        assert_eq!(tau_j_border(&p(&[1]), 4), ModResult::defined(p(&[1]), 0));
        assert_eq!(tau_j_border(&p(&[1, 1]), 2), ModResult::defined(p(&[1]), 1));
        assert_eq!(tau_j_border(&p(&[2, 2]), 2), ModResult::Vanishes);
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(tau_j_weyl(&p(&[1]), 1), ModResult::Vanishes);
        assert_eq!(tau_j_weyl(&p(&[1, 1, 1, 1]), 4), ModResult::defined(p(&[1]), 1));
        assert_eq!(tau_j_weyl(&p(&[2, 2, 1]), 2), ModResult::defined(p(&[2]), 2));
    }

    #[test]
    fn type_b_length_examples() {
        assert_eq!(type_b_length(&[1, 2, 3]), 0);
        assert_eq!(type_b_length(&[-1]), 1);
        assert_eq!(type_b_length(&[-1, -2]), 4);
    }

    #[test]
    fn dot_examples() {
        assert_eq!(type_a_dot(&[3, 1]), DotActionResult::Regular { length: 0, result: p(&[3, 1]) });
        assert_eq!(type_a_dot(&[1, 1]), DotActionResult::Regular { length: 0, result: p(&[1, 1]) });
        assert_eq!(type_a_dot(&[0, 2]), DotActionResult::Regular { length: 1, result: p(&[1, 1]) });
        assert_eq!(type_a_dot(&[0, 1]), DotActionResult::Singular);
    }

    #[test]
    fn algorithms_agree_on_small_grid() {
        for lam in Partition::all_up_to(8) {
            for big_n in 1..=6 {
                assert_eq!(tau_j_border(&lam, big_n), tau_j_weyl(&lam, big_n), "{lam} N={big_n}");
            }
        }
    }

    #[test]
    fn strip_lengths_match_sizes() {
        for lam in Partition::all_up_to(10) {
            for big_n in 1..=6u32 {
                let (res, steps) = tau_j_border_trace(&lam, big_n);
                for s in &steps {
                    assert_eq!(s.strip.len() as i64, 2 * s.before.len() as i64 - big_n as i64 - 1);
                }
                if let ModResult::Defined { tau, .. } = res {
                    assert!(tau.len() <= (big_n / 2) as usize);
                    let removed: usize = steps.iter().map(|s| s.strip.len()).sum();
                    assert_eq!(lam.size() as usize, tau.size() as usize + removed);
                }
            }
        }
    }

    #[test]
    fn short_partitions_are_fixed() {
        for lam in Partition::all_up_to(6) {
            for big_n in 2 * lam.len() as u32..2 * lam.len() as u32 + 4 {
                assert_eq!(tau_j_weyl(&lam, big_n.max(1)), ModResult::defined(lam.clone(), 0));
            }
        }
    }

    #[test]
    fn long_columns_need_large_windows() {
        let lam = Partition::from_vec_unchecked(vec![1; 12]);
        for big_n in 1..=8 {
            assert_eq!(tau_j_border(&lam, big_n), tau_j_weyl(&lam, big_n), "N={big_n}");
        }
    }

    #[test]
    fn registry_lookup() {
        let reg = RuleRegistry::default();
        assert_eq!(reg.names(), vec!["border", "weyl"]);
        let lam = p(&[2, 2, 1]);
        for rule in reg.iter() {
            assert_eq!(rule.tau_j(&lam, 2), ModResult::defined(p(&[2]), 2));
        }
        assert!(matches!(reg.get("nope"), Err(Error::UnknownStrategy(_))));
    }

    #[test]
    fn json_form() {
        let v = serde_json::to_string(&ModResult::defined(p(&[2]), 2)).unwrap();
        assert_eq!(v, r#"{"tau":"2","j":2}"#);
        assert_eq!(serde_json::to_string(&ModResult::Vanishes).unwrap(), r#"{"vanishes":true}"#);
        let back: ModResult = serde_json::from_str(&v).unwrap();
        assert_eq!(back, ModResult::defined(p(&[2]), 2));
    }

    #[test]
    fn s_sets_examples() {
        assert_eq!(s1_set(&Partition::empty(), 1, 0).unwrap(), vec![Partition::empty()]);
        assert!(s1_set(&p(&[1]), 1, 1).unwrap().contains(&p(&[1])));
        assert!(s1_set(&p(&[1, 1]), 1, 1).is_err());
    }

    #[test]
    fn bijection_examples() {
        let r = bott_bijection_check(&Partition::empty(), 1, 0).unwrap();
        assert!(r.passed());
        let r = bott_bijection_check(&p(&[1]), 1, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        let pair = r.pairs.iter().find(|x| x.mu == p(&[1])).unwrap();
        assert_eq!((pair.alpha.clone(), pair.length, pair.j), (p(&[1, 1]), 0, 1));
        let r = bott_bijection_check(&Partition::empty(), 2, 4).unwrap();
        assert!(r.passed(), "{r:?}");
        let mus: Vec<Partition> = r.pairs.iter().map(|x| x.mu.clone()).collect();
        // (0,0,1) and (0,0,2,1) are singular, and S₂ agrees
        assert_eq!(mus, vec![Partition::empty()]);
        assert!(s2_set(&Partition::empty(), 2, 4).unwrap() == vec![Partition::empty()]);
    }
}
