//! Verification suites, one per acceptance criterion, behind a common trait
//! and selectable by name or number.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diagrams::{normalize_random, random_morphism, random_raw, Flavor};
use crate::homology::{det_homology_max_size, det_module_character, det_module_homology, euler_characteristic, ext_euler_consistency, kostant_homology, predicted_euler_characteristic, separation_check};
use crate::modrule::{bott_bijection_check, tau_j_border, tau_j_weyl};
use crate::opmodel::{predicted_joint_kernel_dimension, Model};
use crate::partition::Partition;
use crate::symfunc::{
    degree_two_weights, evaluate, exterior_power_of_weights, from_square_basis, square_basis_element, square_det_formula,
    to_square_basis, wedge_of_sym2, wedge_of_wedge2, SchurVector,
};

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    /// Smaller grids for smoke runs.
    pub quick: bool,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { quick: false, seed: 20240917 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub cases: u64,
    pub failure: Option<String>,
    pub millis: u128,
}

/// One verification suite. `run` returns the number of cases checked, or the
/// first counterexample.
pub trait Check: Send + Sync {
    fn id(&self) -> u32;
    fn name(&self) -> &'static str;
    fn run(&self, cfg: &CheckConfig) -> Result<u64, String>;
}

pub fn run_check(check: &dyn Check, cfg: &CheckConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = check.run(cfg);
    let millis = start.elapsed().as_millis();
    let (passed, cases, failure) = match result {
        Ok(cases) => (true, cases, None),
        Err(msg) => (false, 0, Some(msg)),
    };
    CheckOutcome { id: check.id(), name: check.name(), passed, cases, failure, millis }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub struct ModruleCrossCheck;

impl Check for ModruleCrossCheck {
    fn id(&self) -> u32 {
        1
    }
    fn name(&self) -> &'static str {
        "modrule-cross-oracle"
    }
    fn run(&self, cfg: &CheckConfig) -> Result<u64, String> {
        let size = if cfg.quick { 8 } else { 12 };
        let grid: Vec<(Partition, u32)> =
            Partition::all_up_to(size).into_iter().flat_map(|lam| (1..=8).map(move |n| (lam.clone(), n))).collect();
        let bad = grid.par_iter().find_first(|(lam, n)| tau_j_border(lam, *n) != tau_j_weyl(lam, *n));
        if let Some((lam, n)) = bad {
            return Err(format!("λ={lam} N={n}: border {:?} vs weyl {:?}", tau_j_border(lam, *n), tau_j_weyl(lam, *n)));
        }
        Ok(grid.len() as u64)
    }
}

pub struct PlethysmCheck;

impl Check for PlethysmCheck {
    fn id(&self) -> u32 {
        2
    }
    fn name(&self) -> &'static str {
        "plethysm-identities"
    }
    fn run(&self, _cfg: &CheckConfig) -> Result<u64, String> {
        let mut cases = 0;
        for m in 1..=4 {
            for i in 0..=4u32 {
                let sym = exterior_power_of_weights(&degree_two_weights(m, true), i as usize, m);
                ensure(evaluate(&wedge_of_sym2(i), m) == sym, || format!("Λ^{i}(Sym²) in {m} variables"))?;
                let alt = exterior_power_of_weights(&degree_two_weights(m, false), i as usize, m);
                ensure(evaluate(&wedge_of_wedge2(i), m) == alt, || format!("Λ^{i}(Λ²) in {m} variables"))?;
                cases += 2;
            }
        }
        Ok(cases)
    }
}

pub struct QMinusCountCheck;

impl Check for QMinusCountCheck {
    fn id(&self) -> u32 {
        3
    }
    fn name(&self) -> &'static str {
        "q-minus-count"
    }
    fn run(&self, _cfg: &CheckConfig) -> Result<u64, String> {
        for n in 0..=8u32 {
            // μ_1 <= n forces at most n+1 rows; members have legs one longer than arms
            let rect = Partition::from_unsorted(vec![n; n as usize + 1]);
            let count = (0..=rect.size())
                .flat_map(|k| rect.sub_partitions_of_size(k))
                .filter(|mu| {
                    let (arms, legs) = mu.frobenius();
                    arms.iter().zip(&legs).all(|(a, b)| b == &(a + 1))
                })
                .count() as u64;
            ensure(count == 1 << n, || format!("n={n}: {count} members, expected {}", 1u64 << n))?;
            ensure(crate::partition::count_q_minus_bounded(n) == count, || format!("n={n}: recursive count disagrees"))?;
        }
        Ok(9)
    }
}

pub struct SquareDetCheck;

impl Check for SquareDetCheck {
    fn id(&self) -> u32 {
        4
    }
    fn name(&self) -> &'static str {
        "square-determinant"
    }
    fn run(&self, _cfg: &CheckConfig) -> Result<u64, String> {
        let all = Partition::all_up_to(6);
        for lam in &all {
            ensure(square_det_formula(lam) == square_basis_element(lam), || format!("λ={lam}"))?;
        }
        Ok(all.len() as u64)
    }
}

pub struct BasisExtCheck;

impl Check for BasisExtCheck {
    fn id(&self) -> u32 {
        5
    }
    fn name(&self) -> &'static str {
        "basis-round-trip-and-ext"
    }
    fn run(&self, _cfg: &CheckConfig) -> Result<u64, String> {
        let all = Partition::all_up_to(5);
        for lam in &all {
            let v = SchurVector::basis(lam.clone());
            ensure(from_square_basis(&to_square_basis(&v)) == v, || format!("s_{lam} round trip"))?;
            ensure(to_square_basis(&from_square_basis(&v)) == v, || format!("s□_{lam} round trip"))?;
        }
        ensure(ext_euler_consistency(5), || "Ext Euler form disagrees with s□ expansion".into())?;
        Ok((all.len() * (2 + all.len())) as u64)
    }
}

pub struct EulerCheck;

impl Check for EulerCheck {
    fn id(&self) -> u32 {
        6
    }
    fn name(&self) -> &'static str {
        "derived-euler-characteristic"
    }
    fn run(&self, cfg: &CheckConfig) -> Result<u64, String> {
        let (size, top) = if cfg.quick { (3, 5) } else { (5, 7) };
        let grid: Vec<(Partition, u32)> =
            Partition::all_up_to(size).into_iter().flat_map(|lam| (2..=top).map(move |n| (lam.clone(), n))).collect();
        let failures: Vec<String> = grid
            .par_iter()
            .filter_map(|(lam, n)| match euler_characteristic(lam, *n) {
                Err(e) => Some(format!("λ={lam} N={n}: {e}")),
                Ok(got) => {
                    let want = predicted_euler_characteristic(lam, *n);
                    (got != want).then(|| format!("λ={lam} N={n}: got {got:?}, expected {want:?}"))
                }
            })
            .collect();
        match failures.into_iter().next() {
            Some(f) => Err(f),
            None => Ok(grid.len() as u64),
        }
    }
}

pub struct OperatorModelCheck;

impl OperatorModelCheck {
    fn t_identities(m: &Model) -> Result<u64, String> {
        let mut cases = 0;
        for k in 2..=3 {
            for a in 1..=k {
                for b in a + 1..=k {
                    let rest: Vec<usize> = (0..k).filter(|&p| p != a - 1 && p != b - 1).collect();
                    let ab = m.contraction(k, &[a - 1, b - 1], &[], &rest);
                    let ba = m.contraction(k, &[b - 1, a - 1], &[], &rest);
                    let lhs = match m.flavor() {
                        Flavor::Spin => ab.add(&ba),
                        Flavor::Osc => ba.sub(&ab),
                    };
                    ensure(lhs.agrees_on(&m.pairing(k, a, b), m.interior(2)), || {
                        format!("{:?} rank {}: t-identity fails for k={k}, ({a},{b})", m.flavor(), m.rank())
                    })?;
                    cases += 1;
                }
            }
        }
        Ok(cases)
    }

    fn equivariance(m: &Model) -> Result<u64, String> {
        let t = m.contraction_t(1, 1).map_err(|e| e.to_string())?;
        let gens = m.generators();
        for &g in &gens {
            let lhs = t.compose(&m.act(g, 1).map_err(|e| e.to_string())?);
            let rhs = m.rho(g).map_err(|e| e.to_string())?.compose(&t);
            ensure(lhs.agrees_on(&rhs, m.interior(2)), || format!("{:?} rank {}: t is not equivariant for {g}", m.flavor(), m.rank()))?;
        }
        Ok(gens.len() as u64)
    }

    fn functor_law(m: &Model, rng: &mut ChaCha8Rng, pairs: usize) -> Result<u64, String> {
        for _ in 0..pairs {
            let s = rng.gen_range(0..=3u32);
            let t = rng.gen_range(0..=s);
            let r = rng.gen_range(0..=t);
            let (ls, lt, lr): (Vec<u32>, Vec<u32>, Vec<u32>) = ((1..=s).collect(), (1..=t).collect(), (1..=r).collect());
            let f = random_morphism(rng, &ls, &lt, m.flavor());
            let g = random_morphism(rng, &lt, &lr, m.flavor());
            let gf = g.compose(&f).map_err(|e| e.to_string())?;
            let lhs = m.diagram_to_operator(&gf).map_err(|e| e.to_string())?;
            let rhs = m.diagram_to_operator(&g).map_err(|e| e.to_string())?.compose(&m.diagram_to_operator(&f).map_err(|e| e.to_string())?);
            ensure(lhs.agrees_on(&rhs, m.interior(s)), || {
                format!("{:?} rank {}: functor law fails for f={} g={}", m.flavor(), m.rank(), json(&f), json(&g))
            })?;
        }
        Ok(pairs as u64)
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

impl Check for OperatorModelCheck {
    fn id(&self) -> u32 {
        7
    }
    fn name(&self) -> &'static str {
        "operator-model"
    }
    fn run(&self, cfg: &CheckConfig) -> Result<u64, String> {
        let model = |r: crate::Result<Model>| r.map_err(|e| e.to_string());
        let mut cases = 0;
        let mut hom_models = vec![model(Model::spin(1))?, model(Model::spin(2))?, model(Model::osc(2, 5))?];
        if !cfg.quick {
            hom_models.push(model(Model::spin(3))?);
            hom_models.push(model(Model::osc(1, 6))?);
        }
        for m in &hom_models {
            let r = m.verify_homomorphism();
            if let Some(f) = r.failure {
                return Err(format!("{:?} rank {}: {f}", m.flavor(), m.rank()));
            }
            cases += r.pairs_checked as u64;
        }
        let small = [model(Model::spin(1))?, model(Model::spin(2))?, model(Model::osc(1, 5))?, model(Model::osc(2, 5))?];
        for m in &small {
            cases += Self::t_identities(m)?;
            cases += Self::equivariance(m)?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for m in &small {
            cases += Self::functor_law(m, &mut rng, 25)?;
        }
        let spin2 = model(Model::spin(2))?;
        let got = spin2.joint_kernel_dimension(2) as u64;
        let want = predicted_joint_kernel_dimension(2, 2);
        ensure(got == want, || format!("joint kernel of t_1, t_2 at n=2 has dimension {got}, expected {want}"))?;
        Ok(cases + 1)
    }
}

pub struct BottCheck;

impl Check for BottCheck {
    fn id(&self) -> u32 {
        8
    }
    fn name(&self) -> &'static str {
        "bott-bijection"
    }
    fn run(&self, cfg: &CheckConfig) -> Result<u64, String> {
        let (top_n, lam_size) = if cfg.quick { (2, 2) } else { (3, 4) };
        let mut cases = 0;
        for n in 1..=top_n {
            for lam in Partition::all_up_to(lam_size).into_iter().filter(|l| l.len() <= n as usize) {
                let report = bott_bijection_check(&lam, n, 8).map_err(|e| e.to_string())?;
                if let Some(f) = report.failure {
                    return Err(format!("λ={lam} n={n}: {f}"));
                }
                cases += report.pairs.len() as u64;
            }
        }
        Ok(cases)
    }
}

pub struct SeparationCheck;

impl Check for SeparationCheck {
    fn id(&self) -> u32 {
        9
    }
    fn name(&self) -> &'static str {
        "separation-of-variables"
    }
    fn run(&self, _cfg: &CheckConfig) -> Result<u64, String> {
        for (m_e, n) in [(1, 3), (2, 4), (2, 5)] {
            let ok = separation_check(m_e, n, 3, Flavor::Spin).map_err(|e| e.to_string())?;
            ensure(ok, || format!("character identity fails at dim E={m_e}, N={n}"))?;
        }
        Ok(3)
    }
}

pub struct DeterminantalCheck;

impl Check for DeterminantalCheck {
    fn id(&self) -> u32 {
        10
    }
    fn name(&self) -> &'static str {
        "determinantal-homology"
    }
    fn run(&self, _cfg: &CheckConfig) -> Result<u64, String> {
        let mut cases = 0;
        for n in 1..=4 {
            for i in 0..=6 {
                let family = det_module_homology(n, i);
                let bound = det_homology_max_size(n, i) + 4;
                let scan = kostant_homology(&Partition::empty(), n, i, Flavor::Spin, bound);
                ensure(family == scan, || format!("N={n} i={i}: family {family:?} vs preimages {scan:?}"))?;
                cases += 1;
            }
            let ch = det_module_character(n, 8);
            for d in 0..=8 {
                let want: SchurVector =
                    Partition::all_of_size(d).into_iter().filter(|l| l.len() <= n as usize).map(|l| (l, 1)).collect();
                ensure(ch.get(&d) == Some(&want), || format!("N={n}: degree {d} character is {:?}", ch.get(&d)))?;
                cases += 1;
            }
        }
        Ok(cases)
    }
}

pub struct ConfluenceCheck;

impl Check for ConfluenceCheck {
    fn id(&self) -> u32 {
        11
    }
    fn name(&self) -> &'static str {
        "normalization-confluence"
    }
    fn run(&self, cfg: &CheckConfig) -> Result<u64, String> {
        let count = if cfg.quick { 100 } else { 500 };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
        for _ in 0..count {
            let s = rng.gen_range(0..=6u32);
            let t = rng.gen_range(0..=s);
            let flavor = if rng.gen_bool(0.5) { Flavor::Spin } else { Flavor::Osc };
            let (src, tgt): (Vec<u32>, Vec<u32>) = ((1..=s).collect(), (1..=t).collect());
            let raw = random_raw(&mut rng, &src, &tgt, flavor);
            let a = normalize_random(&raw, &mut rng).map_err(|e| e.to_string())?;
            let b = normalize_random(&raw, &mut rng).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("two rewrite orders disagree on {}", json(&raw)))?;
        }
        Ok(count)
    }
}

/// Checks selectable by name or criterion number.
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry { checks: Vec::new() }
    }

    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.retain(|c| c.id() != check.id());
        self.checks.push(check);
        self.checks.sort_by_key(|c| c.id());
    }

    pub fn get(&self, key: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == key || c.id().to_string() == key).map(|c| c.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Check> {
        self.checks.iter().map(|c| c.as_ref())
    }

    pub fn run_all(&self, cfg: &CheckConfig) -> Vec<CheckOutcome> {
        self.iter().map(|c| run_check(c, cfg)).collect()
    }
}

impl Default for CheckRegistry {
    fn default() -> Self {
        let mut reg = CheckRegistry::empty();
        reg.register(Box::new(ModruleCrossCheck));
        reg.register(Box::new(PlethysmCheck));
        reg.register(Box::new(QMinusCountCheck));
        reg.register(Box::new(SquareDetCheck));
        reg.register(Box::new(BasisExtCheck));
        reg.register(Box::new(EulerCheck));
        reg.register(Box::new(OperatorModelCheck));
        reg.register(Box::new(BottCheck));
        reg.register(Box::new(SeparationCheck));
        reg.register(Box::new(DeterminantalCheck));
        reg.register(Box::new(ConfluenceCheck));
        reg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let reg = CheckRegistry::default();
        assert_eq!(reg.iter().map(|c| c.id()).collect::<Vec<_>>(), (1..=11).collect::<Vec<_>>());
        assert_eq!(reg.get("3").unwrap().name(), "q-minus-count");
        assert_eq!(reg.get("bott-bijection").unwrap().id(), 8);
        assert!(reg.get("nope").is_none());
    }

    #[test]
    fn quick_suite_passes() {
        let cfg = CheckConfig { quick: true, ..CheckConfig::default() };
        for outcome in CheckRegistry::default().run_all(&cfg) {
            assert!(outcome.passed, "{}: {:?}", outcome.name, outcome.failure);
        }
    }
}
