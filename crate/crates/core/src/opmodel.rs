//! Finite-rank operator model. The spin side lets `so(2n+1)` act on the
//! exterior algebra `Δ = Λ(W)`; the osc side lets `osp(1|2m)` act on the
//! symmetric algebra `∇ = Sym(W)` truncated at degree `d`. Tensor powers of
//! the standard module carry the contraction maps `t_i`, and every diagram
//! becomes an explicit matrix.
//!
//! Basis of `V`: index `k + n` holds `e_k` for `k ∈ -n..=n`, where `e_{-i}` is
//! the dual basis vector `e_i^*` and `e_0` is the distinguished vector.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charoracle::{weyl_dimension, SpinWeight, WeylType};
use crate::diagrams::{Diagram, DiagramMorphism, Flavor};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::ScalarQ2;

type Sparse = Vec<(usize, ScalarQ2)>;

fn compact(v: impl IntoIterator<Item = (usize, ScalarQ2)>) -> Sparse {
    let mut acc: BTreeMap<usize, ScalarQ2> = BTreeMap::new();
    for (i, c) in v {
        *acc.entry(i).or_default() += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Sparse matrix over `Q(√2)`, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    columns: Vec<Sparse>,
}

impl Operator {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Operator { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Operator { rows: n, cols: n, columns: (0..n).map(|i| vec![(i, ScalarQ2::one())]).collect() }
    }

    /// Builds column `j` from `f(j)`; repeated rows are summed.
    pub fn from_columns<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize) -> Sparse + Sync,
    {
        let columns: Vec<Sparse> = (0..cols).into_par_iter().map(|j| compact(f(j))).collect();
        debug_assert!(columns.iter().flatten().all(|(r, _)| *r < rows));
        Operator { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, ScalarQ2)] {
        &self.columns[j]
    }

    pub fn get(&self, r: usize, c: usize) -> ScalarQ2 {
        self.columns[c].iter().find(|(i, _)| *i == r).map(|(_, x)| *x).unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, v: &[(usize, ScalarQ2)]) -> Sparse {
        compact(v.iter().flat_map(|&(j, c)| self.columns[j].iter().map(move |&(i, x)| (i, x * c))))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in composition");
        Operator::from_columns(self.rows, rhs.cols, |j| self.apply(&rhs.columns[j]))
    }

    pub fn add_scaled(&self, other: &Operator, c: ScalarQ2) -> Operator {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sum");
        Operator::from_columns(self.rows, self.cols, |j| {
            self.columns[j].iter().copied().chain(other.columns[j].iter().map(|&(i, x)| (i, x * c))).collect()
        })
    }

    pub fn add(&self, other: &Operator) -> Operator {
        self.add_scaled(other, ScalarQ2::one())
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        self.add_scaled(other, -ScalarQ2::one())
    }

    pub fn scale(&self, c: ScalarQ2) -> Operator {
        Operator::from_columns(self.rows, self.cols, |j| self.columns[j].iter().map(|&(i, x)| (i, x * c)).collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Operator) -> Operator {
        assert_eq!(self.cols, other.cols);
        let off = self.rows;
        Operator::from_columns(self.rows + other.rows, self.cols, |j| {
            self.columns[j].iter().copied().chain(other.columns[j].iter().map(|&(i, x)| (i + off, x))).collect()
        })
    }

    /// First column among those kept by `keep` where the two operators differ.
    pub fn first_difference(&self, other: &Operator, keep: impl Fn(usize) -> bool) -> Option<usize> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        (0..self.cols).find(|&j| keep(j) && self.columns[j] != other.columns[j])
    }

    pub fn agrees_on(&self, other: &Operator, keep: impl Fn(usize) -> bool) -> bool {
        self.first_difference(other, keep).is_none()
    }

    pub fn to_dense(&self) -> Vec<Vec<ScalarQ2>> {
        let mut m = vec![vec![ScalarQ2::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, x) in col {
                m[i][j] = x;
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut m = self.to_dense();
        row_reduce(&mut m, self.cols).len()
    }
}

/// Gauss-Jordan elimination on the first `ncols` columns; returns pivot columns.
fn row_reduce(m: &mut [Vec<ScalarQ2>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = *x * inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = *x - f * *y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// Solves `Σ c_g basis[g] = target` exactly, if possible.
fn solve(basis: &[Vec<ScalarQ2>], target: &[ScalarQ2]) -> Option<Vec<ScalarQ2>> {
    let n = basis.len();
    let mut m: Vec<Vec<ScalarQ2>> =
        (0..target.len()).map(|i| basis.iter().map(|b| b[i]).chain(std::iter::once(target[i])).collect()).collect();
    let pivots = row_reduce(&mut m, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![ScalarQ2::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n];
    }
    Some(x)
}

/// Named generators, indices 1-based. `H(i, j)` is `h_{e_i, e_j^*}`; `Yf(i)`
/// and `Yff` use the dual vectors `e_i^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GElement {
    Xvw(usize, usize),
    Xv(usize),
    H(usize, usize),
    Yf(usize),
    Yff(usize, usize),
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GElement::Xvw(i, j) => write!(f, "x_{{{i},{j}}}"),
            GElement::Xv(i) => write!(f, "x_{i}"),
            GElement::H(i, j) => write!(f, "h_{{{i},{j}}}"),
            GElement::Yf(i) => write!(f, "y_{i}"),
            GElement::Yff(i, j) => write!(f, "y_{{{i},{j}}}"),
        }
    }
}

impl GElement {
    fn indices(&self) -> Vec<usize> {
        match *self {
            GElement::Xvw(i, j) | GElement::H(i, j) | GElement::Yff(i, j) => vec![i, j],
            GElement::Xv(i) | GElement::Yf(i) => vec![i],
        }
    }

    pub fn is_odd(&self, flavor: Flavor) -> bool {
        flavor == Flavor::Osc && matches!(self, GElement::Xv(_) | GElement::Yf(_))
    }
}

/// Outcome of a generator-pair sweep.
#[derive(Clone, Debug, Serialize)]
pub struct HomReport {
    pub pairs_checked: usize,
    pub failure: Option<String>,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Either model, with its operators on `F = Δ` or `F = ∇^{≤d}` precomputed.
#[derive(Clone, Debug)]
pub struct Model {
    flavor: Flavor,
    rank: usize,
    trunc: u32,
    degrees: Vec<u32>,
    x: Vec<Operator>,
    y: Vec<Operator>,
    d: Operator,
}

impl Model {
    pub fn spin(n: usize) -> Result<Model> {
        if !(1..=6).contains(&n) {
            return Err(Error::BadRank(format!("spin rank {n} outside 1..=6")));
        }
        let dim = 1usize << n;
        let below = |s: usize, i: usize| (s & ((1 << i) - 1)).count_ones();
        let sign = |k: u32| if k % 2 == 0 { ScalarQ2::one() } else { -ScalarQ2::one() };
        let x = (0..n)
            .map(|i| Operator::from_columns(dim, dim, |s| if s & (1 << i) != 0 { vec![] } else { vec![(s | 1 << i, sign(below(s, i)))] }))
            .collect();
        let y = (0..n)
            .map(|i| Operator::from_columns(dim, dim, |s| if s & (1 << i) == 0 { vec![] } else { vec![(s & !(1 << i), sign(below(s, i)))] }))
            .collect();
        let d = Operator::from_columns(dim, dim, |s| vec![(s, sign(s.count_ones()))]);
        let degrees = (0..dim).map(|s| s.count_ones()).collect();
        Ok(Model { flavor: Flavor::Spin, rank: n, trunc: n as u32, degrees, x, y, d })
    }

    pub fn osc(m: usize, trunc: u32) -> Result<Model> {
        if !(1..=4).contains(&m) {
            return Err(Error::BadRank(format!("osc rank {m} outside 1..=4")));
        }
        if !(2..=12).contains(&trunc) {
            return Err(Error::BadRank(format!("truncation {trunc} outside 2..=12")));
        }
        let mut monomials: Vec<Vec<u32>> = vec![vec![0; m]];
        for deg in 1..=trunc {
            let prev: Vec<Vec<u32>> = monomials.iter().filter(|a| a.iter().sum::<u32>() == deg - 1).cloned().collect();
            let mut next: Vec<Vec<u32>> = prev
                .iter()
                .flat_map(|a| {
                    (0..m).map(move |i| {
                        let mut b = a.clone();
                        b[i] += 1;
                        b
                    })
                })
                .collect();
            next.sort();
            next.dedup();
            monomials.extend(next);
        }
        let index: HashMap<Vec<u32>, usize> = monomials.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let dim = monomials.len();
        let x = (0..m)
            .map(|i| {
                Operator::from_columns(dim, dim, |s| {
                    let mut b = monomials[s].clone();
                    b[i] += 1;
                    index.get(&b).map(|&t| vec![(t, ScalarQ2::one())]).unwrap_or_default()
                })
            })
            .collect();
        let y = (0..m)
            .map(|i| {
                Operator::from_columns(dim, dim, |s| {
                    let a = &monomials[s];
                    if a[i] == 0 {
                        return vec![];
                    }
                    let mut b = a.clone();
                    b[i] -= 1;
                    vec![(index[&b], ScalarQ2::int(a[i] as i64))]
                })
            })
            .collect();
        let degrees: Vec<u32> = monomials.iter().map(|a| a.iter().sum()).collect();
        let d = Operator::from_columns(dim, dim, |s| vec![(s, if degrees[s] % 2 == 0 { ScalarQ2::one() } else { -ScalarQ2::one() })]);
        Ok(Model { flavor: Flavor::Osc, rank: m, trunc, degrees, x, y, d })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim_v(&self) -> usize {
        2 * self.rank + 1
    }

    pub fn dim_f(&self) -> usize {
        self.degrees.len()
    }

    pub fn tensor_dim(&self, k: usize) -> usize {
        self.dim_v().pow(k as u32) * self.dim_f()
    }

    pub fn x_op(&self, i: usize) -> &Operator {
        &self.x[i - 1]
    }

    pub fn y_op(&self, i: usize) -> &Operator {
        &self.y[i - 1]
    }

    pub fn d_op(&self) -> &Operator {
        &self.d
    }

    pub fn v_index(&self, label: i64) -> usize {
        (label + self.rank as i64) as usize
    }

    pub fn v_label(&self, idx: usize) -> i64 {
        idx as i64 - self.rank as i64
    }

    fn v_odd(&self, idx: usize) -> bool {
        self.flavor == Flavor::Osc && self.v_label(idx) != 0
    }

    pub fn decode(&self, k: usize, mut idx: usize) -> (Vec<usize>, usize) {
        let f = idx % self.dim_f();
        idx /= self.dim_f();
        let mut vs = vec![0; k];
        for slot in vs.iter_mut().rev() {
            *slot = idx % self.dim_v();
            idx /= self.dim_v();
        }
        (vs, f)
    }

    pub fn encode(&self, vs: &[usize], f: usize) -> usize {
        vs.iter().fold(0, |acc, &v| acc * self.dim_v() + v) * self.dim_f() + f
    }

    /// Columns of a `k`-fold tensor whose `F`-degree leaves room for `slack`
    /// more raising steps below the truncation. Always true for spin.
    pub fn interior(&self, slack: u32) -> impl Fn(usize) -> bool + '_ {
        move |j| self.flavor == Flavor::Spin || self.degrees[j % self.dim_f()] + slack <= self.trunc
    }

    pub fn generators(&self) -> Vec<GElement> {
        let n = self.rank;
        let strict = self.flavor == Flavor::Spin;
        let pairs: Vec<(usize, usize)> =
            (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).filter(|(i, j)| !strict || i < j).collect();
        let mut out: Vec<GElement> = pairs.iter().map(|&(i, j)| GElement::Xvw(i, j)).collect();
        out.extend((1..=n).map(GElement::Xv));
        out.extend((1..=n).flat_map(|i| (1..=n).map(move |j| GElement::H(i, j))));
        out.extend((1..=n).map(GElement::Yf));
        out.extend(pairs.iter().map(|&(i, j)| GElement::Yff(i, j)));
        out
    }

    fn check(&self, g: GElement) -> Result<()> {
        if g.indices().iter().any(|&i| i == 0 || i > self.rank) {
            return Err(Error::BadRank(format!("generator {g} outside rank {}", self.rank)));
        }
        if let (Flavor::Spin, GElement::Xvw(i, j) | GElement::Yff(i, j)) = (self.flavor, g) {
            if i == j {
                return Err(Error::BadRank(format!("{g} vanishes in the spin model")));
            }
        }
        Ok(())
    }

    /// The operator on `F` attached to `g`.
    pub fn rho(&self, g: GElement) -> Result<Operator> {
        self.check(g)?;
        let r = ScalarQ2::inv_sqrt2();
        let half = ScalarQ2::rational(1, 2);
        let dim = self.dim_f();
        Ok(match g {
            GElement::Xvw(i, j) => self.x_op(i).compose(self.x_op(j)),
            GElement::Xv(i) => self.x_op(i).compose(&self.d).scale(r),
            GElement::H(i, j) => {
                let xy = self.x_op(i).compose(self.y_op(j));
                if i != j {
                    xy
                } else {
                    let shift = if self.flavor == Flavor::Spin { -half } else { half };
                    xy.add_scaled(&Operator::identity(dim), shift)
                }
            }
            GElement::Yf(i) => self.d.compose(self.y_op(i)).scale(r),
            GElement::Yff(i, j) => self.y_op(i).compose(self.y_op(j)),
        })
    }

    /// The matrix of `g` on `V` in the basis `e_{-n}, …, e_n`.
    pub fn standard_action(&self, g: GElement) -> Result<Operator> {
        self.check(g)?;
        let spin = self.flavor == Flavor::Spin;
        let s = |spin_sign: i64| if spin { spin_sign } else { 1 };
        // (source label, target label, coefficient)
        let entries: Vec<(i64, i64, i64)> = match g {
            GElement::Xvw(i, j) => {
                let (i, j) = (i as i64, j as i64);
                if spin {
                    vec![(-j, i, 1), (-i, j, -1)]
                } else {
                    vec![(-j, i, -1), (-i, j, -1)]
                }
            }
            GElement::Xv(i) => vec![(0, i as i64, 1), (-(i as i64), 0, s(-1))],
            GElement::H(i, j) => vec![(j as i64, i as i64, 1), (-(i as i64), -(j as i64), -1)],
            GElement::Yf(i) => vec![(i as i64, 0, 1), (0, -(i as i64), -1)],
            GElement::Yff(i, j) => {
                let (i, j) = (i as i64, j as i64);
                vec![(j, -i, 1), (i, -j, s(-1))]
            }
        };
        let mut cols: Vec<Sparse> = vec![Vec::new(); self.dim_v()];
        for (from, to, c) in entries {
            cols[self.v_index(from)].push((self.v_index(to), ScalarQ2::int(c)));
        }
        Ok(Operator::from_columns(self.dim_v(), self.dim_v(), |j| cols[j].clone()))
    }

    /// `g` acting on `V^{⊗k} ⊗ F` with Koszul signs.
    pub fn act(&self, g: GElement, k: usize) -> Result<Operator> {
        let std = self.standard_action(g)?;
        let rho = self.rho(g)?;
        let odd = g.is_odd(self.flavor);
        let dim = self.tensor_dim(k);
        Ok(Operator::from_columns(dim, dim, |j| {
            let (vs, f) = self.decode(k, j);
            let mut out = Vec::new();
            let mut passed = 0;
            for p in 0..k {
                let sign = if odd && passed % 2 == 1 { -ScalarQ2::one() } else { ScalarQ2::one() };
                for &(w, c) in std.column(vs[p]) {
                    let mut ws = vs.clone();
                    ws[p] = w;
                    out.push((self.encode(&ws, f), c * sign));
                }
                passed += self.v_odd(vs[p]) as usize;
            }
            let sign = if odd && passed % 2 == 1 { -ScalarQ2::one() } else { ScalarQ2::one() };
            for &(h, c) in rho.column(f) {
                out.push((self.encode(&vs, h), c * sign));
            }
            out
        }))
    }

    /// Every generator pair satisfies `[ρ(a), ρ(b)] = ρ([a, b])`, the bracket
    /// being computed on `V`. Osc columns are compared below degree `d - 1`.
    pub fn verify_homomorphism(&self) -> HomReport {
        let gens = self.generators();
        let std: Vec<Operator> = gens.iter().map(|&g| self.standard_action(g).expect("valid generator")).collect();
        let rho: Vec<Operator> = gens.iter().map(|&g| self.rho(g).expect("valid generator")).collect();
        let flat = |op: &Operator| -> Vec<ScalarQ2> { op.to_dense().into_iter().flatten().collect() };
        let basis: Vec<Vec<ScalarQ2>> = std.iter().map(flat).collect();
        let keep = |j: usize| self.flavor == Flavor::Spin || self.degrees[j] + 2 <= self.trunc;
        let mut checked = 0;
        for a in 0..gens.len() {
            for b in 0..gens.len() {
                checked += 1;
                let sign = if gens[a].is_odd(self.flavor) && gens[b].is_odd(self.flavor) { ScalarQ2::one() } else { -ScalarQ2::one() };
                let bracket = std[a].compose(&std[b]).add_scaled(&std[b].compose(&std[a]), sign);
                let Some(coeffs) = solve(&basis, &flat(&bracket)) else {
                    return HomReport {
                        pairs_checked: checked,
                        failure: Some(format!("[{}, {}] leaves the algebra: {:?}", gens[a], gens[b], bracket.to_dense())),
                    };
                };
                let lhs = rho[a].compose(&rho[b]).add_scaled(&rho[b].compose(&rho[a]), sign);
                let rhs = coeffs
                    .iter()
                    .zip(&rho)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(Operator::zero(self.dim_f(), self.dim_f()), |acc, (c, r)| acc.add_scaled(r, *c));
                if !lhs.agrees_on(&rhs, keep) {
                    return HomReport {
                        pairs_checked: checked,
                        failure: Some(format!(
                            "[ρ({}), ρ({})] mismatch: lhs {:?} rhs {:?}",
                            gens[a],
                            gens[b],
                            lhs.to_dense(),
                            rhs.to_dense()
                        )),
                    };
                }
            }
        }
        HomReport { pairs_checked: checked, failure: None }
    }

    /// Operator on `F` by which a basis vector of `V` contracts:
    /// `X_i` for `e_i`, `Y_i` for `e_i^*`, `D/√2` for `e_0`.
    pub fn contraction_operator(&self, v: usize) -> Operator {
        let l = self.v_label(v);
        match l.signum() {
            1 => self.x[l as usize - 1].clone(),
            -1 => self.y[(-l) as usize - 1].clone(),
            _ => self.d.scale(ScalarQ2::inv_sqrt2()),
        }
    }

    /// The invariant pairing on `V`; symmetric for spin, and for osc
    /// antisymmetric on `W ⊕ W_*` and symmetric on `e_0`.
    pub fn beta(&self, u: usize, w: usize) -> ScalarQ2 {
        let (a, b) = (self.v_label(u), self.v_label(w));
        if a + b != 0 {
            return ScalarQ2::zero();
        }
        match (self.flavor, a.signum()) {
            (Flavor::Osc, 1) => -ScalarQ2::one(),
            _ => ScalarQ2::one(),
        }
    }

    /// Sign of rearranging factors with the given parities into the order
    /// `arrangement` (a list of current positions). Spin factors commute
    /// freely; osc swaps contribute `-(-1)^{pq}`.
    pub fn braid_sign(&self, odd: &[bool], arrangement: &[usize]) -> ScalarQ2 {
        if self.flavor == Flavor::Spin {
            return ScalarQ2::one();
        }
        let mut sign = 1i64;
        for x in 0..arrangement.len() {
            for y in x + 1..arrangement.len() {
                let (p, q) = (arrangement[x], arrangement[y]);
                if p > q && !(odd[p] && odd[q]) {
                    sign = -sign;
                }
            }
        }
        ScalarQ2::int(sign)
    }

    /// Contract positions `circled` in order, pair up `edges` as `(a, b)`, and
    /// send the factors at `through` to the output in that order. All
    /// positions are 0-based and must partition `0..k`.
    pub fn contraction(&self, k: usize, circled: &[usize], edges: &[(usize, usize)], through: &[usize]) -> Operator {
        debug_assert_eq!(circled.len() + 2 * edges.len() + through.len(), k);
        let m_ops: Vec<Operator> = (0..self.dim_v()).map(|v| self.contraction_operator(v)).collect();
        let rest: Vec<usize> = (0..k).filter(|p| !circled.contains(p)).collect();
        let mut first: Vec<usize> = rest.clone();
        first.extend(circled.iter().rev());
        let rest_pos = |p: usize| rest.iter().position(|&r| r == p).expect("position outside the circled set");
        let mut second: Vec<usize> = through.iter().map(|&p| rest_pos(p)).collect();
        for &(a, b) in edges {
            second.push(rest_pos(a));
            second.push(rest_pos(b));
        }
        Operator::from_columns(self.tensor_dim(through.len()), self.tensor_dim(k), |j| {
            let (vs, f) = self.decode(k, j);
            let odd: Vec<bool> = vs.iter().map(|&v| self.v_odd(v)).collect();
            let rest_odd: Vec<bool> = rest.iter().map(|&p| odd[p]).collect();
            let mut scalar = self.braid_sign(&odd, &first) * self.braid_sign(&rest_odd, &second);
            for &(a, b) in edges {
                scalar = scalar * self.beta(vs[a], vs[b]);
            }
            if scalar.is_zero() {
                return Vec::new();
            }
            let mut fv: Sparse = vec![(f, scalar)];
            for &c in circled {
                fv = m_ops[vs[c]].apply(&fv);
            }
            let out: Vec<usize> = through.iter().map(|&p| vs[p]).collect();
            fv.into_iter().map(|(h, c)| (self.encode(&out, h), c)).collect()
        })
    }

    /// `t_i : V^{⊗k} ⊗ F → V^{⊗(k-1)} ⊗ F`, contracting factor `i` (1-based).
    pub fn contraction_t(&self, i: usize, k: usize) -> Result<Operator> {
        if i == 0 || i > k {
            return Err(Error::BadRank(format!("position {i} outside 1..={k}")));
        }
        let through: Vec<usize> = (0..k).filter(|&p| p != i - 1).collect();
        Ok(self.contraction(k, &[i - 1], &[], &through))
    }

    /// Pairing of factors `a`, `b` (1-based), identity on the others.
    pub fn pairing(&self, k: usize, a: usize, b: usize) -> Operator {
        let through: Vec<usize> = (0..k).filter(|&p| p != a - 1 && p != b - 1).collect();
        self.contraction(k, &[], &[(a - 1, b - 1)], &through)
    }

    fn single_diagram(&self, d: &Diagram) -> Operator {
        let pos = |l: u32| d.source.iter().position(|&s| s == l).expect("label in source");
        let circled: Vec<usize> = d.circled.iter().map(|&l| pos(l)).collect();
        let edges: Vec<(usize, usize)> = d.edges.iter().map(|&(a, b)| (pos(a), pos(b))).collect();
        let through: Vec<usize> = d
            .target
            .iter()
            .map(|t| pos(d.through.iter().find(|(_, x)| x == t).expect("bijective through strands").0))
            .collect();
        self.contraction(d.source.len(), &circled, &edges, &through)
    }

    /// Linear extension of the diagram-to-operator assignment.
    pub fn diagram_to_operator(&self, m: &DiagramMorphism) -> Result<Operator> {
        if m.flavor != self.flavor {
            return Err(Error::FlavorMismatch);
        }
        let mut out = Operator::zero(self.tensor_dim(m.target.len()), self.tensor_dim(m.source.len()));
        for (d, &c) in &m.terms {
            out = out.add_scaled(&self.single_diagram(d), ScalarQ2::int(c));
        }
        Ok(out)
    }

    /// Dimension of the joint kernel of `t_1, …, t_k` on `V^{⊗k} ⊗ F`.
    pub fn joint_kernel_dimension(&self, k: usize) -> usize {
        let dim = self.tensor_dim(k);
        if k == 0 {
            return dim;
        }
        let stacked = (2..=k)
            .fold(self.contraction_t(1, k).expect("valid position"), |acc, i| acc.vstack(&self.contraction_t(i, k).expect("valid position")));
        dim - stacked.rank()
    }
}

/// Number of standard Young tableaux of shape `lam`.
pub fn standard_tableaux(lam: &Partition) -> u64 {
    let t = lam.transpose();
    let mut num: u128 = (1..=lam.size() as u128).product();
    let mut den: u128 = 1;
    for i in 0..lam.len() {
        for j in 0..lam.get(i) as usize {
            den *= (lam.get(i) as usize - j + t.get(j) as usize - i - 1) as u128;
        }
    }
    num /= den;
    num as u64
}

/// `Σ_{|λ|=k} (dim M_λ)(dim Δ_λ)` for `Spin(2n+1)`.
pub fn predicted_joint_kernel_dimension(n: usize, k: u32) -> u64 {
    Partition::all_of_size(k)
        .iter()
        .filter(|lam| lam.len() <= n)
        .map(|lam| standard_tableaux(lam) * weyl_dimension(&SpinWeight::shifted(lam, n), WeylType::B) as u64)
        .sum()
}

/// `Σ |a_i|`.
pub fn weight_magnitude(w: &[i64]) -> u64 {
    w.iter().map(|x| x.unsigned_abs()).sum()
}

/// Magnitude of a half-integral weight, given doubled, measured from `(-½, …, -½)`.
pub fn shifted_weight_magnitude(doubled: &[i64]) -> u64 {
    doubled.iter().map(|x| (x + 1).unsigned_abs() / 2).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{concatenate, normalize, random_morphism};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> ScalarQ2 {
        ScalarQ2::rational(n, d)
    }

    #[test]
    fn spin_h_is_shifted_number_operator() {
        let m = Model::spin(1).unwrap();
        let h = m.rho(GElement::H(1, 1)).unwrap();
        assert_eq!(h.to_dense(), vec![vec![q(-1, 2), q(0, 1)], vec![q(0, 1), q(1, 2)]]);
    }

    #[test]
    fn spin_xy_anticommutator() {
        let m = Model::spin(1).unwrap();
        let x = m.rho(GElement::Xv(1)).unwrap();
        let y = m.rho(GElement::Yf(1)).unwrap();
        let ac = x.compose(&y).add(&y.compose(&x));
        assert_eq!(ac, Operator::identity(2).scale(q(1, 2)));
    }

    #[test]
    fn standard_action_examples() {
        for m in [Model::spin(2).unwrap(), Model::osc(2, 3).unwrap()] {
            let xv = m.standard_action(GElement::Xv(2)).unwrap();
            assert_eq!(xv.column(m.v_index(0)), &[(m.v_index(2), ScalarQ2::one())]);
            let yf = m.standard_action(GElement::Yf(1)).unwrap();
            assert_eq!(yf.column(m.v_index(1)), &[(m.v_index(0), ScalarQ2::one())]);
            assert!(yf.column(m.v_index(2)).is_empty());
            let yff = m.standard_action(GElement::Yff(1, 2)).unwrap();
            assert!(yff.column(m.v_index(0)).is_empty());
        }
    }

    #[test]
    fn bad_generators_rejected() {
        let m = Model::spin(2).unwrap();
        assert!(m.rho(GElement::Xv(3)).is_err());
        assert!(m.rho(GElement::Xvw(1, 1)).is_err());
        assert!(Model::osc(1, 1).is_err());
        assert!(Model::osc(1, 3).unwrap().rho(GElement::Xvw(1, 1)).is_ok());
    }

    #[test]
    fn homomorphism_spin() {
        for n in 1..=3 {
            let r = Model::spin(n).unwrap().verify_homomorphism();
            assert!(r.passed(), "{:?}", r.failure);
        }
    }

    #[test]
    fn homomorphism_osc() {
        for (m, d) in [(1, 5), (1, 6), (2, 5)] {
            let r = Model::osc(m, d).unwrap().verify_homomorphism();
            assert!(r.passed(), "{:?}", r.failure);
        }
    }

    #[test]
    fn t_examples() {
        let m = Model::spin(1).unwrap();
        let t = m.contraction_t(1, 1).unwrap();
        // e_1 ⊗ 1 ↦ e_1, e_0 ⊗ 1 ↦ 1/√2
        assert_eq!(t.column(m.encode(&[m.v_index(1)], 0)), &[(1, ScalarQ2::one())]);
        assert_eq!(t.column(m.encode(&[m.v_index(0)], 0)), &[(0, ScalarQ2::inv_sqrt2())]);
    }

    fn models() -> Vec<Model> {
        vec![Model::spin(1).unwrap(), Model::spin(2).unwrap(), Model::osc(1, 5).unwrap(), Model::osc(2, 5).unwrap()]
    }

    #[test]
    fn t_anticommutator_and_commutator() {
        for m in models() {
            for k in 2..=3 {
                for a in 1..=k {
                    for b in a + 1..=k {
                        // t_a first then t_b, and the reverse
                        let ab = m.contraction(k, &[a - 1, b - 1], &[], &(0..k).filter(|&p| p != a - 1 && p != b - 1).collect::<Vec<_>>());
                        let ba = m.contraction(k, &[b - 1, a - 1], &[], &(0..k).filter(|&p| p != a - 1 && p != b - 1).collect::<Vec<_>>());
                        let lhs = match m.flavor() {
                            Flavor::Spin => ab.add(&ba),
                            Flavor::Osc => ba.sub(&ab),
                        };
                        assert!(lhs.agrees_on(&m.pairing(k, a, b), m.interior(2)), "{:?} k={k} {a} {b}", m.flavor());
                    }
                }
                // composites of single contractions agree with the bulk map
                let t_then_t = m.contraction_t(1, k - 1).unwrap().compose(&m.contraction_t(k, k).unwrap());
                let through: Vec<usize> = (1..k - 1).collect();
                assert!(t_then_t.agrees_on(&m.contraction(k, &[k - 1, 0], &[], &through), m.interior(2)));
            }
        }
    }

    #[test]
    fn t_is_equivariant() {
        for m in models() {
            let t = m.contraction_t(1, 1).unwrap();
            for g in m.generators() {
                let lhs = t.compose(&m.act(g, 1).unwrap());
                let rhs = m.rho(g).unwrap().compose(&t);
                assert!(lhs.agrees_on(&rhs, m.interior(2)), "{:?} {g}", m.flavor());
            }
        }
    }

    #[test]
    fn pairing_is_invariant() {
        for m in models() {
            let p = m.pairing(2, 1, 2);
            for g in m.generators() {
                let lhs = p.compose(&m.act(g, 2).unwrap());
                let rhs = m.rho(g).unwrap().compose(&p);
                assert!(lhs.agrees_on(&rhs, m.interior(2)), "{:?} {g}", m.flavor());
            }
        }
    }

    #[test]
    fn identity_and_edge_diagrams() {
        let m = Model::spin(1).unwrap();
        let id = DiagramMorphism::identity(&[1, 2], Flavor::Spin);
        assert_eq!(m.diagram_to_operator(&id).unwrap(), Operator::identity(m.tensor_dim(2)));
        let edge = normalize(&Diagram {
            source: vec![1, 2],
            target: vec![],
            circled: vec![],
            edges: vec![(1, 2)],
            through: vec![],
            flavor: Flavor::Spin,
        })
        .unwrap();
        let op = m.diagram_to_operator(&edge).unwrap();
        for u in 0..3 {
            for w in 0..3 {
                for f in 0..2 {
                    let col = op.column(m.encode(&[u, w], f));
                    let expect = if u + w == 2 { vec![(f, ScalarQ2::one())] } else { vec![] };
                    assert_eq!(col, expect.as_slice());
                }
            }
        }
        let osc = Model::osc(1, 3).unwrap();
        assert_eq!(osc.diagram_to_operator(&edge), Err(Error::FlavorMismatch));
    }

    #[test]
    fn normal_form_matches_raw_contraction_order() {
        for m in models() {
            let raw = Diagram { source: vec![1, 2], target: vec![], circled: vec![2, 1], edges: vec![], through: vec![], flavor: m.flavor() };
            let op = m.diagram_to_operator(&normalize(&raw).unwrap()).unwrap();
            assert!(op.agrees_on(&m.contraction(2, &[1, 0], &[], &[]), m.interior(2)));
        }
    }

    #[test]
    fn functor_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in models() {
            for _ in 0..25 {
                let s = rng.gen_range(0..=3u32);
                let t = rng.gen_range(0..=s);
                let r = rng.gen_range(0..=t);
                let ls: Vec<u32> = (1..=s).collect();
                let lt: Vec<u32> = (1..=t).collect();
                let lr: Vec<u32> = (1..=r).collect();
                let f = random_morphism(&mut rng, &ls, &lt, m.flavor());
                let g = random_morphism(&mut rng, &lt, &lr, m.flavor());
                let lhs = m.diagram_to_operator(&g.compose(&f).unwrap()).unwrap();
                let rhs = m.diagram_to_operator(&g).unwrap().compose(&m.diagram_to_operator(&f).unwrap());
                assert!(lhs.agrees_on(&rhs, m.interior(s)), "{:?} {f:?} {g:?}", m.flavor());
            }
        }
    }

    #[test]
    fn raw_composite_is_operator_composite() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = Model::spin(2).unwrap();
        for _ in 0..20 {
            let f = crate::diagrams::random_raw(&mut rng, &[1, 2, 3], &[1, 2], Flavor::Spin);
            let g = crate::diagrams::random_raw(&mut rng, &[1, 2], &[1], Flavor::Spin);
            let lhs = m.diagram_to_operator(&normalize(&concatenate(&g, &f).unwrap()).unwrap()).unwrap();
            let rhs = m.single_diagram(&g).compose(&m.single_diagram(&f));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kernel_of_t_at_rank_two() {
        let m = Model::spin(2).unwrap();
        assert_eq!(m.joint_kernel_dimension(1) as u64, predicted_joint_kernel_dimension(2, 1));
        assert_eq!(m.joint_kernel_dimension(2) as u64, predicted_joint_kernel_dimension(2, 2));
    }

    #[test]
    fn tableaux_counts() {
        assert_eq!(standard_tableaux(&Partition::empty()), 1);
        assert_eq!(standard_tableaux(&"2,1".parse().unwrap()), 2);
        assert_eq!(standard_tableaux(&"3,2".parse().unwrap()), 5);
    }

    #[test]
    fn magnitudes() {
        assert_eq!(weight_magnitude(&[]), 0);
        assert_eq!(weight_magnitude(&[1, -1, 2]), 4);
        assert_eq!(shifted_weight_magnitude(&[-1, -1]), 0);
        assert_eq!(shifted_weight_magnitude(&[1, -1]), 1);
    }
}
