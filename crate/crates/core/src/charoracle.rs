//! Torus characters of `Spin(N)`: the Weyl character formula as an exact
//! alternant quotient, and decomposition into irreducibles by peeling leading
//! terms. Exponents are doubled so half-integer weights stay integral.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::symfunc::{evaluate, skew_schur};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeylType {
    B,
    D,
}

/// A weight stored as twice its coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinWeight {
    pub doubled: Vec<i32>,
}

impl SpinWeight {
    pub fn new(doubled: Vec<i32>) -> Result<Self> {
        if let Some(first) = doubled.first() {
            if doubled.iter().any(|x| (x - first).rem_euclid(2) != 0) {
                return Err(Error::MixedParity(doubled));
            }
        }
        Ok(SpinWeight { doubled })
    }

    /// `λ + δ` for a partition with at most `n` parts.
    pub fn shifted(lam: &Partition, n: usize) -> Self {
        SpinWeight { doubled: (0..n).map(|i| 2 * lam.get(i) as i32 + 1).collect() }
    }

    /// Inverse of [`SpinWeight::shifted`], for dominant weights with positive last coordinate.
    pub fn unshift(&self) -> Option<Partition> {
        let parts: Option<Vec<u32>> =
            self.doubled.iter().map(|&x| if x >= 1 && x % 2 == 1 { Some((x as u32 - 1) / 2) } else { None }).collect();
        Partition::new(parts?).ok()
    }

    pub fn is_dominant(&self, ty: WeylType) -> bool {
        let w = &self.doubled;
        let decreasing = w.windows(2).all(|p| p[0] >= p[1]);
        match (ty, w.last()) {
            (_, None) => true,
            (WeylType::B, Some(&last)) => decreasing && last >= 0,
            (WeylType::D, Some(&last)) => {
                let k = w.len();
                w[..k - 1].windows(2).all(|p| p[0] >= p[1]) && (k == 1 || w[k - 2] >= last.abs())
            }
        }
    }

    /// The outer flip of the last coordinate.
    pub fn flip_last(&self) -> SpinWeight {
        let mut d = self.doubled.clone();
        if let Some(x) = d.last_mut() {
            *x = -*x;
        }
        SpinWeight { doubled: d }
    }
}

/// Finitely supported map from doubled exponent vectors to integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentChar {
    pub rank: usize,
    pub terms: BTreeMap<Vec<i32>, i64>,
}

#[derive(Serialize, Deserialize)]
struct LaurentTermJson {
    exponent2: Vec<i32>,
    coeff: i64,
}

impl Serialize for LaurentChar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<LaurentTermJson> =
            self.terms.iter().map(|(e, c)| LaurentTermJson { exponent2: e.clone(), coeff: *c }).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentChar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<LaurentTermJson>::deserialize(d)?;
        let rank = terms.first().map_or(0, |t| t.exponent2.len());
        if terms.iter().any(|t| t.exponent2.len() != rank) {
            return Err(serde::de::Error::custom("exponent vectors of different lengths"));
        }
        Ok(LaurentChar::from_terms(rank, terms.into_iter().map(|t| (t.exponent2, t.coeff))))
    }
}

impl LaurentChar {
    pub fn zero(rank: usize) -> Self {
        LaurentChar { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        LaurentChar::monomial(vec![0; rank], 1)
    }

    pub fn monomial(exp: Vec<i32>, c: i64) -> Self {
        let mut ch = LaurentChar::zero(exp.len());
        ch.add_term(exp, c);
        ch
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Vec<i32>, i64)>) -> Self {
        let mut ch = LaurentChar::zero(rank);
        for (e, c) in terms {
            ch.add_term(e, c);
        }
        ch
    }

    pub fn add_term(&mut self, exp: Vec<i32>, c: i64) {
        debug_assert_eq!(exp.len(), self.rank);
        if c == 0 {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LaurentChar, c: i64) {
        for (e, k) in &other.terms {
            self.add_term(e.clone(), k * c);
        }
    }

    pub fn mul(&self, other: &LaurentChar) -> LaurentChar {
        let mut out = LaurentChar::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.iter().zip(eb).map(|(a, b)| a + b).collect(), ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients: the (virtual) dimension.
    pub fn dim(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Invariance under coordinate permutations and the sign changes allowed by `ty`.
    pub fn is_weyl_invariant(&self, ty: WeylType) -> bool {
        let n = self.rank;
        let mut gens: Vec<Box<dyn Fn(&[i32]) -> Vec<i32>>> = Vec::new();
        for i in 0..n.saturating_sub(1) {
            gens.push(Box::new(move |e: &[i32]| {
                let mut v = e.to_vec();
                v.swap(i, i + 1);
                v
            }));
        }
        match ty {
            WeylType::B if n > 0 => gens.push(Box::new(move |e: &[i32]| {
                let mut v = e.to_vec();
                v[n - 1] = -v[n - 1];
                v
            })),
            WeylType::D if n > 1 => gens.push(Box::new(move |e: &[i32]| {
                let mut v = e.to_vec();
                v[n - 1] = -v[n - 1];
                v[n - 2] = -v[n - 2];
                v
            })),
            _ => {}
        }
        gens.iter().all(|g| self.terms.iter().all(|(e, c)| self.terms.get(&g(e)) == Some(c)))
    }

    fn leading(&self) -> Option<(&Vec<i32>, &i64)> {
        self.terms.iter().next_back()
    }
}

fn doubled_rho(n: usize, ty: WeylType) -> Vec<i32> {
    (0..n)
        .map(|i| match ty {
            WeylType::B => 2 * (n - i) as i32 - 1,
            WeylType::D => 2 * (n - i - 1) as i32,
        })
        .collect()
}

/// `Σ_w sgn(w) x^{w(μ)}` over the Weyl group of type `ty`.
fn alternant(mu: &[i32], ty: WeylType) -> LaurentChar {
    let n = mu.len();
    let mut out = LaurentChar::zero(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let perms = permutations(&mut perm);
    for (p, psign) in perms {
        for mask in 0u32..(1 << n) {
            let flips = mask.count_ones();
            if ty == WeylType::D && flips % 2 == 1 {
                continue;
            }
            let exp: Vec<i32> =
                (0..n).map(|i| if mask & (1 << i) != 0 { -mu[p[i]] } else { mu[p[i]] }).collect();
            let sign = psign * if flips % 2 == 1 { -1 } else { 1 };
            out.add_term(exp, sign);
        }
    }
    out
}

/// All permutations of `items` with their signs (Heap's algorithm).
fn permutations(items: &mut [usize]) -> Vec<(Vec<usize>, i64)> {
    let n = items.len();
    let mut out = vec![(items.to_vec(), 1)];
    let mut c = vec![0usize; n];
    let mut sign = 1;
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            sign = -sign;
            out.push((items.to_vec(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Exact division by leading lex terms; lex order is a monoid order on Laurent
/// monomials, so this terminates when the quotient is a Laurent polynomial.
fn divide_exact(num: &LaurentChar, den: &LaurentChar) -> Result<LaurentChar> {
    let (lead_exp, &lead_c) = den.leading().ok_or(Error::InexactDivision)?;
    let mut rem = num.clone();
    let mut quot = LaurentChar::zero(num.rank);
    let mut guard = 0usize;
    while let Some((e, &c)) = rem.leading() {
        if c % lead_c != 0 || guard > 1_000_000 {
            return Err(Error::InexactDivision);
        }
        let qe: Vec<i32> = e.iter().zip(lead_exp).map(|(a, b)| a - b).collect();
        let qc = c / lead_c;
        quot.add_term(qe.clone(), qc);
        rem.add_scaled(&LaurentChar::monomial(qe, qc).mul(den), -1);
        guard += 1;
    }
    Ok(quot)
}

/// Product over positive roots of `⟨μ+ρ, α⟩ / ⟨ρ, α⟩`.
pub fn weyl_dimension(hw: &SpinWeight, ty: WeylType) -> i64 {
    let n = hw.doubled.len();
    let rho = doubled_rho(n, ty);
    let shifted: Vec<i64> = hw.doubled.iter().zip(&rho).map(|(a, b)| (*a + *b) as i64).collect();
    let rho: Vec<i64> = rho.iter().map(|&x| x as i64).collect();
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..n {
        for j in i + 1..n {
            num *= ((shifted[i] - shifted[j]) * (shifted[i] + shifted[j])) as i128;
            den *= ((rho[i] - rho[j]) * (rho[i] + rho[j])) as i128;
        }
        if ty == WeylType::B {
            num *= shifted[i] as i128;
            den *= rho[i] as i128;
        }
    }
    (num / den) as i64
}

fn char_memo() -> &'static RwLock<HashMap<(WeylType, Vec<i32>), LaurentChar>> {
    static MEMO: OnceLock<RwLock<HashMap<(WeylType, Vec<i32>), LaurentChar>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The irreducible character of highest weight `hw`, as `A_{hw+ρ} / A_ρ`.
pub fn weyl_character(hw: &SpinWeight, ty: WeylType) -> Result<LaurentChar> {
    if !hw.is_dominant(ty) {
        return Err(Error::NotDominant(hw.doubled.clone()));
    }
    let key = (ty, hw.doubled.clone());
    if let Some(ch) = char_memo().read().expect("character memo poisoned").get(&key) {
        return Ok(ch.clone());
    }
    let n = hw.doubled.len();
    let rho = doubled_rho(n, ty);
    let shifted: Vec<i32> = hw.doubled.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let ch = divide_exact(&alternant(&shifted, ty), &alternant(&rho, ty))?;
    assert_eq!(ch.dim(), weyl_dimension(hw, ty), "dimension mismatch at {:?}", hw.doubled);
    char_memo().write().expect("character memo poisoned").insert(key, ch.clone());
    Ok(ch)
}

pub fn weyl_type(big_n: u32) -> WeylType {
    if big_n % 2 == 1 {
        WeylType::B
    } else {
        WeylType::D
    }
}

/// Character of the `Pin(N)` irreducible indexed by `λ`, restricted to the
/// torus of `Spin(N)`. For even `N` it is the sum over `λ+δ` and its flip in
/// the last coordinate.
pub fn pin_character(lam: &Partition, big_n: u32) -> Result<LaurentChar> {
    let n = (big_n / 2) as usize;
    if lam.len() > n {
        return Err(Error::TooManyParts { partition: lam.to_string(), max: n });
    }
    let hw = SpinWeight::shifted(lam, n);
    let ty = weyl_type(big_n);
    let mut ch = weyl_character(&hw, ty)?;
    if ty == WeylType::D {
        ch.add_scaled(&weyl_character(&hw.flip_last(), ty)?, 1);
    }
    Ok(ch)
}

/// Character of the standard representation evaluated through `s_{λ/μ}`,
/// times the spinor character.
pub fn tensor_with_schur(lam: &Partition, mu: &Partition, big_n: u32) -> Result<LaurentChar> {
    let n = (big_n / 2) as usize;
    let skew = skew_schur(lam, mu);
    let poly = evaluate(&skew, big_n as usize);
    // variables: x_1..x_n, then x_1^{-1}..x_n^{-1}, then 1 when N is odd
    let mut ch = LaurentChar::zero(n);
    for (e, c) in &poly.terms {
        let exp = (0..n).map(|i| 2 * (e[i] as i32 - e[n + i] as i32)).collect();
        ch.add_term(exp, *c);
    }
    Ok(ch.mul(&pin_character(&Partition::empty(), big_n)?))
}

/// Multiplicities of irreducibles in `ch`, keyed by highest weight. With
/// `spin` and even `N`, keys are `Pin` classes: the highest weight with
/// positive last coordinate stands for the pair.
pub fn decompose(ch: &LaurentChar, big_n: u32, spin: bool) -> Result<BTreeMap<SpinWeight, i64>> {
    let ty = weyl_type(big_n);
    let fuse = spin && ty == WeylType::D;
    let mut rem = ch.clone();
    let mut out = BTreeMap::new();
    let mut guard = 0usize;
    while let Some((e, &c)) = rem.leading() {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Decompose("no termination".into()));
        }
        let mut hw = SpinWeight { doubled: e.clone() };
        if fuse && hw.doubled.last().is_some_and(|&x| x < 0) {
            hw = hw.flip_last();
        }
        if !hw.is_dominant(ty) {
            return Err(Error::Decompose(format!("leading weight {:?} is not dominant", e)));
        }
        let mut irr = weyl_character(&hw, ty)?;
        if fuse {
            irr.add_scaled(&weyl_character(&hw.flip_last(), ty)?, 1);
        }
        rem.add_scaled(&irr, -c);
        *out.entry(hw).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// [`decompose`] for spinor characters, keyed by `λ` where the highest weight is `λ + δ`.
pub fn decompose_spin(ch: &LaurentChar, big_n: u32) -> Result<BTreeMap<Partition, i64>> {
    decompose(ch, big_n, true)?
        .into_iter()
        .map(|(hw, c)| {
            hw.unshift()
                .map(|p| (p, c))
                .ok_or_else(|| Error::Decompose(format!("{:?} is not of the form λ+δ", hw.doubled)))
        })
        .collect()
}

/// Sum of `c · pin_character(λ)` over a multiplicity map.
pub fn recombine_spin(mult: &BTreeMap<Partition, i64>, big_n: u32) -> Result<LaurentChar> {
    let mut ch = LaurentChar::zero((big_n / 2) as usize);
    for (lam, c) in mult {
        ch.add_scaled(&pin_character(lam, big_n)?, *c);
    }
    Ok(ch)
}
