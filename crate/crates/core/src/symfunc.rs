//! The ring of symmetric functions in the Schur basis, with exact integer
//! coefficients.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::partition::{q_minus, q_plus, self_conjugate_with_index, Partition};

/// Finitely supported `Partition -> i64`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SchurVector {
    coeffs: BTreeMap<Partition, i64>,
}

impl SchurVector {
    pub fn zero() -> Self {
        SchurVector::default()
    }

    pub fn one() -> Self {
        SchurVector::basis(Partition::empty())
    }

    pub fn basis(p: Partition) -> Self {
        SchurVector::term(p, 1)
    }

    pub fn term(p: Partition, c: i64) -> Self {
        let mut v = SchurVector::zero();
        v.add_term(p, c);
        v
    }

    /// `e_r = s_{1^r}`; zero for negative `r`.
    pub fn elementary(r: i64) -> Self {
        if r < 0 {
            return SchurVector::zero();
        }
        SchurVector::basis(Partition::from_vec_unchecked(vec![1; r as usize]))
    }

    pub fn add_term(&mut self, p: Partition, c: i64) {
        if c == 0 {
            return;
        }
        match self.coeffs.entry(p) {
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

    pub fn coeff(&self, p: &Partition) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &i64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return SchurVector::zero();
        }
        SchurVector { coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Keeps the terms whose partition satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Partition) -> bool) -> Self {
        SchurVector { coeffs: self.coeffs.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), *v)).collect() }
    }

    /// Keeps terms of size at most `deg`.
    pub fn truncate(&self, deg: u32) -> Self {
        self.filter(|p| p.size() <= deg)
    }

    /// Terms of exact size `deg`.
    pub fn homogeneous(&self, deg: u32) -> Self {
        self.filter(|p| p.size() == deg)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(Partition::size).max()
    }
}

impl fmt::Debug for SchurVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.coeffs.iter().map(|(p, c)| format!("{c}·s({p})")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl FromIterator<(Partition, i64)> for SchurVector {
    fn from_iter<I: IntoIterator<Item = (Partition, i64)>>(iter: I) -> Self {
        let mut v = SchurVector::zero();
        for (p, c) in iter {
            v.add_term(p, c);
        }
        v
    }
}

impl AddAssign<&SchurVector> for SchurVector {
    fn add_assign(&mut self, rhs: &SchurVector) {
        for (p, c) in &rhs.coeffs {
            self.add_term(p.clone(), *c);
        }
    }
}

impl Add for &SchurVector {
    type Output = SchurVector;
    fn add(self, rhs: &SchurVector) -> SchurVector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SchurVector {
    type Output = SchurVector;
    fn sub(self, rhs: &SchurVector) -> SchurVector {
        let mut out = self.clone();
        out += &rhs.scale(-1);
        out
    }
}

impl Neg for &SchurVector {
    type Output = SchurVector;
    fn neg(self) -> SchurVector {
        self.scale(-1)
    }
}

impl Mul for &SchurVector {
    type Output = SchurVector;
    fn mul(self, rhs: &SchurVector) -> SchurVector {
        schur_multiply(self, rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct SchurTermJson {
    partition: Partition,
    coeff: i64,
}

impl Serialize for SchurVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<SchurTermJson> =
            self.coeffs.iter().map(|(p, c)| SchurTermJson { partition: p.clone(), coeff: *c }).collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SchurVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<SchurTermJson>::deserialize(deserializer)?;
        Ok(terms.into_iter().map(|t| (t.partition, t.coeff)).collect())
    }
}

type LrKey = (Partition, Partition, Partition);

fn lr_memo() -> &'static RwLock<HashMap<LrKey, u64>> {
    static MEMO: OnceLock<RwLock<HashMap<LrKey, u64>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `c^λ_{μν}`: the number of LR tableaux of shape `λ/μ` and content `ν`.
pub fn lr_coefficient(lam: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if !lam.contains(mu) || mu.size() + nu.size() != lam.size() || !lam.contains(nu) {
        return 0;
    }
    let key = (lam.clone(), mu.clone(), nu.clone());
    if let Some(&c) = lr_memo().read().expect("lr memo poisoned").get(&key) {
        return c;
    }
    let c = count_lr_tableaux(lam, mu, nu);
    lr_memo().write().expect("lr memo poisoned").insert(key, c);
    c
}

fn count_lr_tableaux(lam: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    // reading order: rows top to bottom, right to left inside a row
    let mut cells = Vec::new();
    for r in 0..lam.len() {
        for c in (mu.get(r)..lam.get(r)).rev() {
            cells.push((r, c as usize));
        }
    }
    let width = lam.first() as usize;
    let mut grid = vec![vec![0u32; width]; lam.len()];
    let mut counts = vec![0u32; nu.len() + 1];
    let mut total = 0u64;
    lr_fill(0, &cells, mu, nu, &mut grid, &mut counts, &mut total);
    total
}

fn lr_fill(
    idx: usize,
    cells: &[(usize, usize)],
    mu: &Partition,
    nu: &Partition,
    grid: &mut [Vec<u32>],
    counts: &mut [u32],
    total: &mut u64,
) {
    if idx == cells.len() {
        *total += 1;
        return;
    }
    let (r, c) = cells[idx];
    // the cell to the right, if in the skew shape, was filled just before
    let hi = if idx > 0 && cells[idx - 1] == (r, c + 1) { grid[r][c + 1] } else { nu.len() as u32 };
    let lo = if r > 0 && c as u32 >= mu.get(r - 1) { grid[r - 1][c] + 1 } else { 1 };
    for v in lo..=hi.min(r as u32 + 1) {
        let vi = v as usize;
        if counts[vi] >= nu.get(vi - 1) {
            continue;
        }
        if vi > 1 && counts[vi] + 1 > counts[vi - 1] {
            continue;
        }
        counts[vi] += 1;
        grid[r][c] = v;
        lr_fill(idx + 1, cells, mu, nu, grid, counts, total);
        grid[r][c] = 0;
        counts[vi] -= 1;
    }
}

fn pair_product(a: &Partition, b: &Partition) -> SchurVector {
    let n = a.size() + b.size();
    let rows = a.len() + b.len();
    let cols = a.first() + b.first();
    Partition::in_box(n, rows, cols)
        .into_iter()
        .filter(|lam| lam.contains(a) && lam.contains(b))
        .map(|lam| {
            let c = lr_coefficient(&lam, a, b) as i64;
            (lam, c)
        })
        .collect()
}

pub fn schur_multiply(a: &SchurVector, b: &SchurVector) -> SchurVector {
    let mut out = SchurVector::zero();
    for (pa, ca) in a.iter() {
        for (pb, cb) in b.iter() {
            out += &pair_product(pa, pb).scale(ca * cb);
        }
    }
    out
}

/// Product truncated to degree `deg`, skipping pairs that would exceed it.
pub fn schur_multiply_truncated(a: &SchurVector, b: &SchurVector, deg: u32) -> SchurVector {
    let mut out = SchurVector::zero();
    for (pa, ca) in a.iter() {
        for (pb, cb) in b.iter() {
            if pa.size() + pb.size() <= deg {
                out += &pair_product(pa, pb).scale(ca * cb);
            }
        }
    }
    out
}

/// `s_{λ/μ} = Σ_ν c^λ_{μν} s_ν`.
pub fn skew_schur(lam: &Partition, mu: &Partition) -> SchurVector {
    if !lam.contains(mu) {
        return SchurVector::zero();
    }
    lam.sub_partitions_of_size(lam.size() - mu.size())
        .into_iter()
        .map(|nu| {
            let c = lr_coefficient(lam, mu, &nu) as i64;
            (nu, c)
        })
        .collect()
}

/// The involution `s_λ ↦ s_{λ†}`.
pub fn omega_transpose(a: &SchurVector) -> SchurVector {
    a.iter().map(|(p, c)| (p.transpose(), *c)).collect()
}

fn square_sign(mu: &Partition) -> i64 {
    if ((mu.size() + mu.durfee_rank()) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `s□_λ = Σ_{μ=μ†} (-1)^{(|μ|+rank μ)/2} s_{λ/μ}`, in the Schur basis.
pub fn square_basis_element(lam: &Partition) -> SchurVector {
    let mut out = SchurVector::zero();
    let max_index = (lam.size() + lam.durfee_rank()) / 2;
    for i in 0..=max_index {
        for mu in self_conjugate_with_index(i) {
            if lam.contains(&mu) {
                out += &skew_schur(lam, &mu).scale(square_sign(&mu));
            }
        }
    }
    out
}

/// Reads `a` as coordinates in the `s□` basis and returns its Schur expansion.
pub fn from_square_basis(a: &SchurVector) -> SchurVector {
    let mut out = SchurVector::zero();
    for (lam, c) in a.iter() {
        out += &square_basis_element(lam).scale(*c);
    }
    out
}

/// Expresses a Schur-basis vector in `s□` coordinates, using
/// `s_λ = Σ_β (Σ_α c^λ_{αβ}) s□_β`.
pub fn to_square_basis(a: &SchurVector) -> SchurVector {
    let mut out = SchurVector::zero();
    for (lam, c) in a.iter() {
        for k in 0..=lam.size() {
            for alpha in lam.sub_partitions_of_size(k) {
                out += &skew_schur(lam, &alpha).scale(*c);
            }
        }
    }
    out
}

/// `Λ^i(Sym^2 E) = Σ_{μ ∈ Q_1(2i)} s_μ`.
pub fn wedge_of_sym2(i: u32) -> SchurVector {
    q_plus(i).into_iter().map(|p| (p, 1)).collect()
}

/// `Λ^i(Λ^2 E) = Σ_{μ ∈ Q_{-1}(2i)} s_μ`.
pub fn wedge_of_wedge2(i: u32) -> SchurVector {
    q_minus(i).into_iter().map(|p| (p, 1)).collect()
}

/// `e□_r = e_r - e_{r-1}`, zero for `r < 0`.
pub fn square_elementary(r: i64) -> SchurVector {
    if r < 0 {
        return SchurVector::zero();
    }
    &SchurVector::elementary(r) - &SchurVector::elementary(r - 1)
}

/// Determinantal expansion of `s□_λ` over the columns of `λ`: a `λ_1 × λ_1`
/// determinant whose column `i` is built from `r = λ†_i - (i-1)` with entries
/// `e□_r` (first row) and `e□_{r+k-1} + e□_{r-k+1}` (row `k >= 2`).
pub fn square_det_formula(lam: &Partition) -> SchurVector {
    let size = lam.first() as usize;
    let t = lam.transpose();
    let matrix: Vec<Vec<SchurVector>> = (1..=size)
        .map(|k| {
            (1..=size)
                .map(|i| {
                    let r = t.get(i - 1) as i64 - (i as i64 - 1);
                    if k == 1 {
                        square_elementary(r)
                    } else {
                        let k = k as i64;
                        &square_elementary(r + k - 1) + &square_elementary(r - k + 1)
                    }
                })
                .collect()
        })
        .collect();
    let mut memo = HashMap::new();
    det_minor(&matrix, 0, (1u32 << size) - 1, &mut memo)
}

/// Laplace expansion along successive rows; `cols` is the bitmask of columns still available.
fn det_minor(m: &[Vec<SchurVector>], row: usize, cols: u32, memo: &mut HashMap<(usize, u32), SchurVector>) -> SchurVector {
    if row == m.len() {
        return SchurVector::one();
    }
    if let Some(v) = memo.get(&(row, cols)) {
        return v.clone();
    }
    let mut out = SchurVector::zero();
    let mut sign = 1;
    for j in 0..m.len() {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = &m[row][j];
        if !entry.is_zero() {
            let minor = det_minor(m, row + 1, cols & !(1 << j), memo);
            out += &schur_multiply(entry, &minor).scale(sign);
        }
        sign = -sign;
    }
    memo.insert((row, cols), out.clone());
    out
}

/// A polynomial in `m` variables, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyChar {
    pub vars: usize,
    pub terms: BTreeMap<Vec<u32>, i64>,
}

impl PolyChar {
    pub fn zero(vars: usize) -> Self {
        PolyChar { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        let mut p = PolyChar::zero(vars);
        p.add_term(vec![0; vars], 1);
        p
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(exp.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&mut self, other: &PolyChar, scale: i64) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * scale);
        }
    }

    pub fn mul(&self, other: &PolyChar) -> PolyChar {
        let mut out = PolyChar::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            let mut sorted = e.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            self.terms.get(&sorted) == Some(c)
        })
    }
}

fn ssyt_memo() -> &'static RwLock<HashMap<(Partition, usize), BTreeMap<Vec<u32>, i64>>> {
    static MEMO: OnceLock<RwLock<HashMap<(Partition, usize), BTreeMap<Vec<u32>, i64>>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Contents of all semistandard tableaux of shape `lam` with entries in `1..=m`,
/// with multiplicities: the monomial expansion of `s_λ(x_1..x_m)`.
pub fn ssyt_contents(lam: &Partition, m: usize) -> BTreeMap<Vec<u32>, i64> {
    if lam.len() > m {
        return BTreeMap::new();
    }
    let key = (lam.clone(), m);
    if let Some(v) = ssyt_memo().read().expect("ssyt memo poisoned").get(&key) {
        return v.clone();
    }
    let mut out = BTreeMap::new();
    let mut grid: Vec<Vec<u32>> = lam.parts().iter().map(|&p| vec![0; p as usize]).collect();
    let mut content = vec![0u32; m];
    ssyt_fill(0, 0, lam, m as u32, &mut grid, &mut content, &mut out);
    ssyt_memo().write().expect("ssyt memo poisoned").insert(key, out.clone());
    out
}

fn ssyt_fill(
    r: usize,
    c: usize,
    lam: &Partition,
    m: u32,
    grid: &mut [Vec<u32>],
    content: &mut [u32],
    out: &mut BTreeMap<Vec<u32>, i64>,
) {
    if r == lam.len() {
        *out.entry(content.to_vec()).or_insert(0) += 1;
        return;
    }
    let (nr, nc) = if c + 1 == lam.get(r) as usize { (r + 1, 0) } else { (r, c + 1) };
    let left = if c > 0 { grid[r][c - 1] } else { 1 };
    let above = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
    // leave room for the rows below in this column
    let below = (lam.transpose().get(c) as usize - r - 1) as u32;
    for v in left.max(above)..=m.saturating_sub(below) {
        grid[r][c] = v;
        content[v as usize - 1] += 1;
        ssyt_fill(nr, nc, lam, m, grid, content, out);
        content[v as usize - 1] -= 1;
    }
    grid[r][c] = 0;
}

/// Evaluates `a` in `m` variables through semistandard tableau enumeration.
pub fn evaluate(a: &SchurVector, m: usize) -> PolyChar {
    let mut out = PolyChar::zero(m);
    for (lam, c) in a.iter() {
        for (e, k) in ssyt_contents(lam, m) {
            out.add_term(e, k * c);
        }
    }
    out
}

/// Weights of `Sym^2 E` (`a <= b`) or `Λ^2 E` (`a < b`) in `m` variables.
pub fn degree_two_weights(m: usize, symmetric: bool) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in a..m {
            if a == b && !symmetric {
                continue;
            }
            let mut w = vec![0; m];
            w[a] += 1;
            w[b] += 1;
            out.push(w);
        }
    }
    out
}

/// Character of `Λ^i` of a module with the given weights, summing over `i`-subsets.
pub fn exterior_power_of_weights(weights: &[Vec<u32>], i: usize, m: usize) -> PolyChar {
    fn go(weights: &[Vec<u32>], start: usize, left: usize, acc: &mut Vec<u32>, out: &mut PolyChar) {
        if left == 0 {
            out.add_term(acc.clone(), 1);
            return;
        }
        for k in start..weights.len() {
            if weights.len() - k < left {
                break;
            }
            for (a, w) in acc.iter_mut().zip(&weights[k]) {
                *a += w;
            }
            go(weights, k + 1, left - 1, acc, out);
            for (a, w) in acc.iter_mut().zip(&weights[k]) {
                *a -= w;
            }
        }
    }
    let mut out = PolyChar::zero(m);
    go(weights, 0, i, &mut vec![0; m], &mut out);
    out
}
