//! Homological outputs at the level of `GL(E)` and `Spin(N)` characters:
//! Koszul and Tor terms, Ext dimensions, injective resolutions, derived
//! specialization and its Euler characteristic, and the determinantal module.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::charoracle::{decompose_spin, pin_character, tensor_with_schur, LaurentChar};
use crate::diagrams::Flavor;
use crate::error::Result;
use crate::modrule::{tau_j_border, tau_j_weyl, ModResult};
use crate::partition::{self_conjugate_with_index, Partition};
use crate::symfunc::{
    lr_coefficient, omega_transpose, schur_multiply_truncated, skew_schur, square_basis_element, wedge_of_sym2,
    wedge_of_wedge2, SchurVector,
};

/// Schur-vector terms indexed by homological degree.
pub type GradedTerms = BTreeMap<u32, SchurVector>;

/// `i ↦ (β ↦ multiplicity of the irreducible indexed by β in R^iΓ_N)`.
pub type DerivedSpec = BTreeMap<u32, BTreeMap<Partition, i64>>;

/// Terms of the minimal resolution of the trivial module: the sum of `s_λ`
/// over self-conjugate `λ` with `2i = |λ| + rank λ`. The same in both flavors.
pub fn koszul_terms(i: u32, _flavor: Flavor) -> SchurVector {
    self_conjugate_with_index(i).into_iter().map(|p| (p, 1)).collect()
}

/// `Tor_i(Sym E, ℂ) = Λ^i(Λ^2 E)`.
pub fn tor_sym_terms(i: u32) -> SchurVector {
    wedge_of_wedge2(i)
}

/// `Tor_i(Δ, ℂ) = Λ^i(Sym^2 E)`, up to the determinant twist `(-½, …, -½)`
/// which is not recorded in the partitions.
pub fn tor_delta_terms(i: u32) -> SchurVector {
    wedge_of_sym2(i)
}

/// `dim Ext^i(Δ_μ, Δ_λ) = Σ_{ν=ν†, 2i=|ν|+rank ν} c^λ_{μν}`.
pub fn ext_dim(mu: &Partition, lam: &Partition, i: u32, _flavor: Flavor) -> u64 {
    self_conjugate_with_index(i).iter().map(|nu| lr_coefficient(lam, mu, nu)).sum()
}

/// Degree `i` term of the injective resolution of `Δ_λ`: `Σ s_{λ/μ}` over
/// self-conjugate `μ` of index `i`, each tensored with `Δ`. Degrees above
/// `maxdeg` are dropped.
pub fn injective_resolution_terms(lam: &Partition, maxdeg: u32) -> GradedTerms {
    let top = (lam.size() + lam.durfee_rank()) / 2;
    let mut out = GradedTerms::new();
    for i in 0..=top.min(maxdeg) {
        let mut term = SchurVector::zero();
        for mu in self_conjugate_with_index(i) {
            if lam.contains(&mu) {
                term += &skew_schur(lam, &mu);
            }
        }
        if !term.is_zero() {
            out.insert(i, term);
        }
    }
    out
}

/// `R^iΓ_N(Δ_λ)`: the irreducible indexed by `τ_N(λ)` in degree `j_N(λ)`, or
/// nothing when the rule vanishes. Both rule implementations must agree.
pub fn derived_specialization(lam: &Partition, big_n: u32, _flavor: Flavor) -> DerivedSpec {
    let border = tau_j_border(lam, big_n);
    assert_eq!(border, tau_j_weyl(lam, big_n), "modification rules disagree at {lam}, N={big_n}");
    match border {
        ModResult::Vanishes => DerivedSpec::new(),
        ModResult::Defined { tau, j } => BTreeMap::from([(j, BTreeMap::from([(tau, 1)]))]),
    }
}

/// The alternating sum of the injective resolution, specialized to `Spin(N)`
/// and decomposed.
pub fn euler_characteristic(lam: &Partition, big_n: u32) -> Result<BTreeMap<Partition, i64>> {
    let n = (big_n / 2) as usize;
    let mut ch = LaurentChar::zero(n);
    let top = (lam.size() + lam.durfee_rank()) / 2;
    for i in 0..=top {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for mu in self_conjugate_with_index(i) {
            if lam.contains(&mu) {
                ch.add_scaled(&tensor_with_schur(lam, &mu, big_n)?, sign);
            }
        }
    }
    decompose_spin(&ch, big_n)
}

/// The Euler characteristic of `RΓ_N(Δ_λ)` predicted by the modification rule.
pub fn predicted_euler_characteristic(lam: &Partition, big_n: u32) -> BTreeMap<Partition, i64> {
    let mut out = BTreeMap::new();
    for (j, terms) in derived_specialization(lam, big_n, Flavor::Spin) {
        for (tau, c) in terms {
            *out.entry(tau).or_insert(0) += if j % 2 == 0 { c } else { -c };
        }
    }
    out
}

pub fn euler_check(lam: &Partition, big_n: u32) -> Result<bool> {
    Ok(euler_characteristic(lam, big_n)? == predicted_euler_characteristic(lam, big_n))
}

/// `Σ_λ s_λ` over all `|λ| ≤ maxdeg`: the character of `Λ•E ⊗ Sym(Sym^2 E)`,
/// equivalently of either enveloping algebra.
pub fn enveloping_character(maxdeg: u32) -> SchurVector {
    Partition::all_up_to(maxdeg).into_iter().map(|p| (p, 1)).collect()
}

/// `Σ_i (-1)^i K̄_i` times the enveloping-algebra character, through `maxdeg`.
pub fn koszul_telescope(maxdeg: u32) -> SchurVector {
    let mut alt = SchurVector::zero();
    for i in 0..=maxdeg {
        alt += &koszul_terms(i, Flavor::Spin).scale(if i % 2 == 0 { 1 } else { -1 });
    }
    schur_multiply_truncated(&alt.truncate(maxdeg), &enveloping_character(maxdeg), maxdeg)
}

/// Checks `[U(g†E)]·[𝔐⁻] = [Sym(E⊗V) ⊗ Δ]` coefficientwise in `s_ν(E)` for
/// `ℓ(ν) ≤ mE`, `|ν| ≤ maxdeg`, comparing `Spin(N)` torus characters exactly.
pub fn separation_check(m_e: usize, big_n: u32, maxdeg: u32, _flavor: Flavor) -> Result<bool> {
    let n = (big_n / 2) as usize;
    if 2 * m_e > big_n as usize {
        return Err(crate::Error::BadRank(format!("2·{m_e} exceeds N={big_n}")));
    }
    let targets: Vec<Partition> = Partition::all_up_to(maxdeg).into_iter().filter(|p| p.len() <= m_e).collect();
    let results: Vec<Result<bool>> = targets
        .par_iter()
        .map(|nu| {
            // right side: s_ν(V) ⊗ Δ from the Cauchy identity
            let rhs = tensor_with_schur(nu, &Partition::empty(), big_n)?;
            // left side: Σ_{α,λ} c^ν_{αλ} [V_{λ+δ}] with ℓ(λ) ≤ n
            let mut lhs = LaurentChar::zero(n);
            for k in 0..=nu.size() {
                for lam in nu.sub_partitions_of_size(k) {
                    if lam.len() > n {
                        continue;
                    }
                    let mult: i64 = skew_schur(nu, &lam).iter().map(|(_, c)| *c).sum();
                    if mult != 0 {
                        lhs.add_scaled(&pin_character(&lam, big_n)?, mult);
                    }
                }
            }
            Ok(lhs == rhs)
        })
        .collect();
    results.into_iter().try_fold(true, |acc, r| Ok(acc && r?))
}

/// The shape `(r+α_1, …, r+α_r, r^N, α†_1, α†_2, …)`.
pub fn det_shape(r: u32, alpha: &Partition, big_n: u32) -> Partition {
    let mut parts: Vec<u32> = (0..r as usize).map(|i| r + alpha.get(i)).collect();
    parts.extend(std::iter::repeat(r).take(big_n as usize));
    parts.extend(alpha.transpose().parts());
    Partition::from_unsorted(parts)
}

/// `H_i(g(E); 𝔑_∅)`: the shapes `det_shape(r, α)` with `ℓ(α) ≤ r` and
/// `r(r+1)/2 + |α| = i`.
pub fn det_module_homology(big_n: u32, i: u32) -> SchurVector {
    let mut out = SchurVector::zero();
    let mut r = 0;
    while r * (r + 1) / 2 <= i {
        let rest = i - r * (r + 1) / 2;
        for alpha in Partition::all_of_size(rest) {
            if alpha.len() <= r as usize {
                out.add_term(det_shape(r, &alpha, big_n), 1);
            }
        }
        r += 1;
    }
    out
}

/// Character of `𝔑_∅` by degree, recovered from its minimal free resolution:
/// `[U(g E)] · Σ_i (-1)^i [H_i]`.
pub fn det_module_character(big_n: u32, maxdeg: u32) -> GradedTerms {
    let mut alt = SchurVector::zero();
    for i in 0..=maxdeg {
        let h = det_module_homology(big_n, i).truncate(maxdeg);
        alt += &h.scale(if i % 2 == 0 { 1 } else { -1 });
    }
    let total = schur_multiply_truncated(&alt, &enveloping_character(maxdeg), maxdeg);
    (0..=maxdeg).map(|d| (d, total.homogeneous(d))).collect()
}

/// `Σ s_μ` over `|μ| ≤ bound` with `τ_N(μ) = λ` and `j_N(μ) = i`.
pub fn kostant_homology(lam: &Partition, big_n: u32, i: u32, _flavor: Flavor, bound: u32) -> SchurVector {
    Partition::all_up_to(bound)
        .into_par_iter()
        .filter(|mu| matches!(tau_j_border(mu, big_n), ModResult::Defined { ref tau, j } if tau == lam && j == i))
        .map(|mu| (mu, 1))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Largest `|μ|` among the shapes in `det_module_homology(N, i)`.
pub fn det_homology_max_size(big_n: u32, i: u32) -> u32 {
    det_module_homology(big_n, i).iter().map(|(p, _)| p.size()).max().unwrap_or(0)
}

/// `Σ_i (-1)^i dim Ext^i(Δ_μ, Δ_λ)` equals the coefficient of `s_μ` in `s□_λ`
/// for all `|λ|, |μ| ≤ maxsize`.
pub fn ext_euler_consistency(maxsize: u32) -> bool {
    let all = Partition::all_up_to(maxsize);
    all.par_iter().all(|lam| {
        let sq = square_basis_element(lam);
        let top = (lam.size() + lam.durfee_rank()) / 2;
        all.iter().all(|mu| {
            let alt: i64 = (0..=top)
                .map(|i| {
                    let d = ext_dim(mu, lam, i, Flavor::Spin) as i64;
                    if i % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .sum();
            alt == sq.coeff(mu)
        })
    })
}

/// `ω` applied degreewise fixes the Koszul terms and swaps the two Tor families.
pub fn transpose_duality(maxdeg: u32) -> bool {
    (0..=maxdeg).all(|i| {
        omega_transpose(&koszul_terms(i, Flavor::Spin)) == koszul_terms(i, Flavor::Osc)
            && omega_transpose(&tor_delta_terms(i)) == tor_sym_terms(i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn sv(terms: &[(&str, i64)]) -> SchurVector {
        terms.iter().map(|(s, c)| (p(s), *c)).collect()
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_terms(0, Flavor::Spin), sv(&[("0", 1)]));
        assert_eq!(koszul_terms(1, Flavor::Spin), sv(&[("1", 1)]));
        assert_eq!(koszul_terms(3, Flavor::Osc), sv(&[("2,2", 1), ("3,1,1", 1)]));
    }

    #[test]
    fn tor_examples() {
        assert_eq!(tor_sym_terms(1), sv(&[("1,1", 1)]));
        assert_eq!(tor_sym_terms(2), sv(&[("2,1,1", 1)]));
        assert_eq!(tor_delta_terms(2), sv(&[("3,1", 1)]));
    }

    #[test]
    fn ext_examples() {
        for lam in Partition::all_up_to(4) {
            assert_eq!(ext_dim(&lam, &lam, 0, Flavor::Spin), 1);
        }
        assert_eq!(ext_dim(&p("0"), &p("1"), 1, Flavor::Spin), 1);
        assert_eq!(ext_dim(&p("0"), &p("2"), 1, Flavor::Osc), 0);
    }

    #[test]
    fn resolution_examples() {
        assert_eq!(injective_resolution_terms(&p("0"), 5), GradedTerms::from([(0, sv(&[("0", 1)]))]));
        assert_eq!(injective_resolution_terms(&p("1"), 5), GradedTerms::from([(0, sv(&[("1", 1)])), (1, sv(&[("0", 1)]))]));
        let r = injective_resolution_terms(&p("2,1"), 5);
        assert_eq!(r[&1], sv(&[("2", 1), ("1,1", 1)]));
        assert_eq!(r[&2], sv(&[("0", 1)]));
    }

    #[test]
    fn derived_examples() {
        assert_eq!(derived_specialization(&p("1"), 4, Flavor::Spin), BTreeMap::from([(0, BTreeMap::from([(p("1"), 1)]))]));
        assert_eq!(derived_specialization(&p("1,1"), 2, Flavor::Osc), BTreeMap::from([(1, BTreeMap::from([(p("1"), 1)]))]));
        assert!(derived_specialization(&p("2,2"), 2, Flavor::Spin).is_empty());
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&p("1"), 3).unwrap(), BTreeMap::from([(p("1"), 1)]));
        assert_eq!(euler_characteristic(&p("1,1"), 2).unwrap(), BTreeMap::from([(p("1"), -1)]));
        assert!(euler_characteristic(&p("2,2"), 2).unwrap().is_empty());
        for lam in Partition::all_up_to(4) {
            for n in 2..=5 {
                assert!(euler_check(&lam, n).unwrap(), "{lam} N={n}");
            }
        }
    }

    #[test]
    fn telescope_and_duality() {
        assert_eq!(koszul_telescope(8), SchurVector::one());
        assert!(transpose_duality(5));
    }

    #[test]
    fn separation_examples() {
        assert!(separation_check(1, 3, 3, Flavor::Spin).unwrap());
        assert!(separation_check(2, 5, 3, Flavor::Spin).unwrap());
        assert!(separation_check(2, 4, 2, Flavor::Spin).unwrap());
        assert!(separation_check(3, 4, 2, Flavor::Spin).is_err());
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_module_homology(3, 0), SchurVector::one());
        assert_eq!(det_module_homology(2, 1), sv(&[("1,1,1", 1)]));
        assert_eq!(det_module_homology(2, 2), sv(&[("2,1,1,1", 1)]));
        for n in 1..=4 {
            for i in 0..=6 {
                let bound = det_homology_max_size(n, i) + 4;
                assert_eq!(kostant_homology(&Partition::empty(), n, i, Flavor::Spin, bound), det_module_homology(n, i), "N={n} i={i}");
            }
        }
    }

    #[test]
    fn det_character() {
        for n in 1..=4 {
            let ch = det_module_character(n, 8);
            for d in 0..=8 {
                let expect: SchurVector = Partition::all_of_size(d).into_iter().filter(|l| l.len() <= n as usize).map(|l| (l, 1)).collect();
                assert_eq!(ch[&d], expect, "N={n} d={d}");
            }
        }
    }

    #[test]
    fn kostant_degree_zero() {
        for lam in Partition::all_up_to(3) {
            for n in 2 * lam.len() as u32..=6 {
                assert_eq!(kostant_homology(&lam, n, 0, Flavor::Spin, lam.size() + 2), sv(&[(&lam.to_string(), 1)]), "{lam} N={n}");
            }
        }
    }

    #[test]
    fn ext_grid() {
        assert!(ext_euler_consistency(4));
    }
}
