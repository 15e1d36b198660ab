//! Degree fibers and fiber monoids of a grading `Q: Z^n → G`.
//!
//! Exponent vectors are `Vec<u32>`. Lists of them are returned in the
//! canonical listing order: total degree ascending, and within one total
//! degree the graded-lex larger vector first (earlier variables carry the
//! weight), so `x1, x2, x1^2, x1 x2, x2^2, …`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::abgroup::{quotient, AbelianGroup, GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::lp::positive_functional;

pub type Exponent = Vec<u32>;

pub const DEFAULT_DEGREE_CAP: u64 = 64;

pub fn total_degree(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

/// Graded-lex comparison: higher total degree is larger, ties broken by the
/// first differing exponent.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    total_degree(a).cmp(&total_degree(b)).then_with(|| a.cmp(b))
}

/// Canonical listing order (see module docs).
pub fn listing_cmp(a: &[u32], b: &[u32]) -> Ordering {
    total_degree(a).cmp(&total_degree(b)).then_with(|| b.cmp(a))
}

fn small(x: &BigInt, what: &'static str) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow(what))
}

/// A hom `Z^n → G` flattened into machine integers: free rows must vanish
/// exactly, torsion rows modulo their orders.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub n: usize,
    pub free: Vec<Vec<i64>>,
    pub tors: Vec<(Vec<i64>, i64)>,
}

impl Compiled {
    pub fn new(q: &GroupHom) -> Result<Self> {
        if !q.domain().is_free() {
            return Err(Error::InvalidHom("degree map must start from a free group".into()));
        }
        let g = q.codomain();
        let m = q.matrix();
        let n = m.cols();
        let mut free = Vec::new();
        for i in 0..g.free_rank() {
            free.push((0..n).map(|j| small(&m[(i, j)], "degree matrix")).collect::<Result<_>>()?);
        }
        let mut tors = Vec::new();
        for (k, t) in g.torsion_orders().iter().enumerate() {
            let i = g.free_rank() + k;
            let row = (0..n).map(|j| small(&m[(i, j)].mod_floor(t), "degree matrix")).collect::<Result<_>>()?;
            tors.push((row, small(t, "torsion order")?));
        }
        Ok(Compiled { n, free, tors })
    }

    fn target(&self, g: &GroupElement) -> Result<(Vec<i64>, Vec<i64>)> {
        let c = g.coords();
        let f = self.free.len();
        let free = (0..f).map(|i| small(&c[i], "degree")).collect::<Result<_>>()?;
        let tors = (0..self.tors.len()).map(|k| small(&c[f + k], "degree")).collect::<Result<_>>()?;
        Ok((free, tors))
    }

    fn matches(&self, e: &[u32], target: &(Vec<i64>, Vec<i64>)) -> bool {
        for (row, t) in self.free.iter().zip(&target.0) {
            let s: i128 = row.iter().zip(e).map(|(a, &x)| *a as i128 * x as i128).sum();
            if s != *t as i128 {
                return false;
            }
        }
        for ((row, m), t) in self.tors.iter().zip(&target.1) {
            let s: i128 = row.iter().zip(e).map(|(a, &x)| *a as i128 * x as i128).sum();
            if (s - *t as i128).rem_euclid(*m as i128) != 0 {
                return false;
            }
        }
        true
    }

    fn in_kernel(&self, e: &[u32]) -> bool {
        self.matches(e, &(vec![0; self.free.len()], vec![0; self.tors.len()]))
    }

    /// Integer weights `W_j ≥ 1` with `W · e` determined by the free degree.
    fn weights(&self) -> Option<(Vec<i64>, Vec<BigRational>)> {
        let s = self.free.len();
        let cols: Vec<Vec<BigInt>> =
            (0..self.n).map(|j| (0..s).map(|i| BigInt::from(self.free[i][j])).collect()).collect();
        let w = positive_functional(&cols, s)?;
        let lcm = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let wi: Vec<BigRational> = w.iter().map(|x| x * BigRational::from_integer(lcm.clone())).collect();
        let per_var = (0..self.n)
            .map(|j| {
                let v: BigRational = (0..s).map(|i| &wi[i] * BigRational::from_integer(self.free[i][j].into())).sum();
                v.to_integer().to_i64().unwrap_or(i64::MAX)
            })
            .collect();
        Some((per_var, wi))
    }
}

/// Certificate of pointedness: a rational functional positive on every
/// variable degree, or a nonzero nonnegative vector of degree zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pointedness {
    Pointed(Vec<BigRational>),
    NotPointed(Exponent),
}

/// Decides whether `{e ≥ 0 : Q e = 0} = {0}`.
pub fn pointedness(q: &GroupHom) -> Result<Pointedness> {
    let c = Compiled::new(q)?;
    if let Some((_, w)) = c.weights() {
        return Ok(Pointedness::Pointed(w));
    }
    // A witness comes from the Hilbert basis of the kernel monoid.
    let hb = completion(&kernel_system(&c), c.n, DEFAULT_DEGREE_CAP)?;
    let w = hb.into_iter().next().ok_or_else(|| Error::Unsupported("no kernel witness found".into()))?;
    Ok(Pointedness::NotPointed(w))
}

pub fn is_pointed(q: &GroupHom) -> Result<bool> {
    let c = Compiled::new(q)?;
    Ok(c.weights().is_some())
}

/// All `e ≥ 0` with `Q e = d`, optionally with `e_i ≤ cap`.
pub fn fiber_points(q: &GroupHom, d: &GroupElement, cap: Option<u32>) -> Result<Vec<Exponent>> {
    if d.group() != q.codomain() {
        return Err(Error::GroupMismatch);
    }
    let c = Compiled::new(q)?;
    let target = c.target(d)?;
    let weights = c.weights();
    let mut out = Vec::new();
    let budget = match &weights {
        Some((_, wr)) => {
            let wd: BigRational =
                (0..c.free.len()).map(|i| &wr[i] * BigRational::from_integer(target.0[i].into())).sum();
            if !wd.is_integer() || wd < BigRational::zero() {
                return Ok(out);
            }
            Some(wd.to_integer().to_i64().ok_or(Error::Overflow("fiber weight"))?)
        }
        None if cap.is_none() => return Err(Error::UnboundedFiber),
        None => None,
    };
    let w = weights.map(|(w, _)| w).unwrap_or_else(|| vec![1; c.n]);
    let solver = PivotSolver::new(&c, &w)?;
    let Some(rhs) = solver.rhs(&target.0) else { return Ok(out) };
    let mut e = vec![0u32; c.n];
    let mut walk = Walk { c: &c, s: &solver, target: &target, w: &w, cap, rhs, out: &mut out };
    walk.run(0, budget, &mut e);
    out.sort_by(|a, b| listing_cmp(a, b));
    Ok(out)
}

/// Reduced row echelon form of the free degree rows, scaled to integers:
/// `den · e_{pivot k} = rhs_k − Σ_f coef[k][f] · e_f` over the non-pivot
/// variables `f`.
struct PivotSolver {
    pivots: Vec<usize>,
    nonpivots: Vec<usize>,
    coef: Vec<Vec<i128>>,
    transform: Vec<Vec<BigRational>>,
    den: i128,
}

impl PivotSolver {
    /// Pivot columns are chosen among small weights first so that the
    /// enumerated variables have the tightest bounds.
    fn new(c: &Compiled, w: &[i64]) -> Result<Self> {
        let s = c.free.len();
        let mut order: Vec<usize> = (0..c.n).collect();
        order.sort_by_key(|&j| (w[j], j));
        // [A | I] in rationals, eliminated along `order`
        let mut m: Vec<Vec<BigRational>> = (0..s)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    (0..c.n).map(|j| BigRational::from_integer(c.free[i][j].into())).collect();
                row.extend((0..s).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &j in &order {
            if r == s {
                break;
            }
            let Some(p) = (r..s).find(|&i| !m[i][j].is_zero()) else { continue };
            m.swap(r, p);
            let inv = m[r][j].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            let prow = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[j].is_zero() {
                    let f = row[j].clone();
                    for (x, y) in row.iter_mut().zip(&prow) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(j);
            r += 1;
        }
        let nonpivots: Vec<usize> = order.iter().copied().filter(|j| !pivots.contains(j)).collect();
        let den = m[..r]
            .iter()
            .flat_map(|row| nonpivots.iter().map(move |&f| row[f].denom().clone()))
            .fold(BigInt::one(), |a, b| a.lcm(&b));
        let den_r = BigRational::from_integer(den.clone());
        let coef = m[..r]
            .iter()
            .map(|row| {
                nonpivots
                    .iter()
                    .map(|&f| (&row[f] * &den_r).to_integer().to_i128().ok_or(Error::Overflow("pivot solve")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let transform = m[..r].iter().map(|row| row[c.n..].to_vec()).collect();
        let den = den.to_i128().ok_or(Error::Overflow("pivot solve"))?;
        Ok(PivotSolver { pivots, nonpivots, coef, transform, den })
    }

    /// Scaled right-hand sides for a target, or `None` if no pivot value
    /// can be integral.
    fn rhs(&self, d: &[i64]) -> Option<Vec<i128>> {
        let den = BigRational::from_integer(self.den.into());
        self.transform
            .iter()
            .map(|t| {
                let v: BigRational = t.iter().zip(d).map(|(a, &x)| a * BigRational::from_integer(x.into())).sum();
                let v = v * &den;
                // non-pivot coefficients are integers, so a fractional
                // value rules out every integer point
                if v.is_integer() {
                    v.to_integer().to_i128()
                } else {
                    None
                }
            })
            .collect()
    }
}

struct Walk<'a> {
    c: &'a Compiled,
    s: &'a PivotSolver,
    target: &'a (Vec<i64>, Vec<i64>),
    w: &'a [i64],
    cap: Option<u32>,
    rhs: Vec<i128>,
    out: &'a mut Vec<Exponent>,
}

impl Walk<'_> {
    fn run(&mut self, k: usize, budget: Option<i64>, e: &mut Vec<u32>) {
        if k == self.s.nonpivots.len() {
            self.finish(e);
            return;
        }
        let j = self.s.nonpivots[k];
        let mut hi = match budget {
            Some(b) => b / self.w[j],
            None => i64::MAX,
        };
        if let Some(m) = self.cap {
            hi = hi.min(m as i64);
        }
        let mut v = 0i64;
        loop {
            e[j] = v as u32;
            self.run(k + 1, budget.map(|b| b - v * self.w[j]), e);
            if v >= hi {
                break;
            }
            v += 1;
            for (r, row) in self.rhs.iter_mut().zip(&self.s.coef) {
                *r -= row[k];
            }
        }
        for (r, row) in self.rhs.iter_mut().zip(&self.s.coef) {
            *r += row[k] * v as i128;
        }
        e[j] = 0;
    }

    fn finish(&mut self, e: &mut [u32]) {
        for (i, &p) in self.s.pivots.iter().enumerate() {
            let r = self.rhs[i];
            if r < 0 || r % self.s.den != 0 {
                for &q in &self.s.pivots[..i] {
                    e[q] = 0;
                }
                return;
            }
            let v = r / self.s.den;
            if v > u32::MAX as i128 || self.cap.is_some_and(|m| v > m as i128) {
                for &q in &self.s.pivots[..i] {
                    e[q] = 0;
                }
                return;
            }
            e[p] = v as u32;
        }
        if self.c.matches(e, self.target) {
            self.out.push(e.to_vec());
        }
        for &p in &self.s.pivots {
            e[p] = 0;
        }
    }
}

/// `{e ∈ N^n : Q e ∈ <H>}`.
#[derive(Clone, Debug)]
pub struct FiberMonoid {
    degree: GroupHom,
    subgroup: Vec<GroupElement>,
    compiled: Compiled,
}

impl FiberMonoid {
    pub fn new(degree: GroupHom, subgroup: Vec<GroupElement>) -> Result<Self> {
        if subgroup.iter().any(|h| h.group() != degree.codomain()) {
            return Err(Error::GroupMismatch);
        }
        let (_, proj) = quotient(degree.codomain(), &subgroup)?;
        let compiled = Compiled::new(&proj.compose(&degree)?)?;
        Ok(FiberMonoid { degree, subgroup, compiled })
    }

    pub fn degree_map(&self) -> &GroupHom {
        &self.degree
    }

    pub fn subgroup(&self) -> &[GroupElement] {
        &self.subgroup
    }

    pub fn nvars(&self) -> usize {
        self.compiled.n
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        e.len() == self.compiled.n && self.compiled.in_kernel(e)
    }
}

/// Linear system `A x = 0` over `x = (e, y)`, torsion congruences turned
/// into equations with one slack `y_k ≥ 0` each.
fn kernel_system(c: &Compiled) -> Vec<Vec<i64>> {
    let nt = c.tors.len();
    let mut rows = Vec::new();
    for r in &c.free {
        let mut row = r.clone();
        row.extend(core::iter::repeat_n(0, nt));
        rows.push(row);
    }
    for (k, (r, t)) in c.tors.iter().enumerate() {
        let mut row: Vec<i64> = r.iter().map(|x| x.rem_euclid(*t)).collect();
        row.extend((0..nt).map(|l| if l == k { -*t } else { 0 }));
        rows.push(row);
    }
    rows
}

/// Contejean–Devie completion for the minimal nonnegative solutions of
/// `A x = 0`, projected to the first `n` coordinates.
fn completion(a: &[Vec<i64>], n: usize, cap: u64) -> Result<Vec<Exponent>> {
    let ncols = a.first().map_or(n, |r| r.len());
    let col = |j: usize| -> Vec<i128> { a.iter().map(|r| r[j] as i128).collect() };
    let cols: Vec<Vec<i128>> = (0..ncols).map(col).collect();
    let mut solutions: Vec<Vec<u32>> = Vec::new();
    let mut frontier: BTreeSet<(Vec<u32>, Vec<i128>)> = BTreeSet::new();
    for j in 0..ncols {
        let mut x = vec![0u32; ncols];
        x[j] = 1;
        frontier.insert((x, cols[j].clone()));
    }
    let dominated = |x: &[u32], sols: &[Vec<u32>]| sols.iter().any(|s| s.iter().zip(x).all(|(a, b)| a <= b));
    while !frontier.is_empty() {
        let level: Vec<(Vec<u32>, Vec<i128>)> = core::mem::take(&mut frontier).into_iter().collect();
        let mut rest = Vec::new();
        for (x, ax) in level {
            if ax.iter().all(|v| *v == 0) {
                if !dominated(&x, &solutions) {
                    solutions.push(x);
                }
            } else {
                rest.push((x, ax));
            }
        }
        for (x, ax) in rest {
            if dominated(&x, &solutions) {
                continue;
            }
            for j in 0..ncols {
                let dot: i128 = ax.iter().zip(&cols[j]).map(|(p, q)| p * q).sum();
                if dot >= 0 {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                if dominated(&y, &solutions) {
                    continue;
                }
                if total_degree(&y[..n]) > cap {
                    return Err(Error::BoundExceeded { what: "Hilbert basis completion degree".into(), bound: cap });
                }
                let ay: Vec<i128> = ax.iter().zip(&cols[j]).map(|(p, q)| p + q).collect();
                frontier.insert((y, ay));
            }
        }
    }
    let mut out: Vec<Exponent> = solutions.into_iter().map(|x| x[..n].to_vec()).collect();
    out.retain(|e| e.iter().any(|&v| v > 0));
    out.sort_by(|a, b| listing_cmp(a, b));
    out.dedup();
    Ok(out)
}

/// Minimal generating set of the fiber monoid.
///
/// The grading must be pointed, so that graded pieces stay finite; the
/// completion aborts once a candidate exceeds total degree `cap`.
pub fn hilbert_basis(fm: &FiberMonoid, cap: Option<u64>) -> Result<Vec<Exponent>> {
    if let Pointedness::NotPointed(w) = pointedness(&fm.degree)? {
        return Err(Error::NotPointed(w.into_iter().map(i64::from).collect()));
    }
    completion(&kernel_system(&fm.compiled), fm.compiled.n, cap.unwrap_or(DEFAULT_DEGREE_CAP))
}

/// Writes `e` as a sum of basis elements, returning sorted basis indices.
pub fn monoid_decompose(fm: &FiberMonoid, basis: &[Exponent], e: &[u32]) -> Result<Option<Vec<usize>>> {
    if !fm.contains(e) {
        return Err(Error::NotInMonoid);
    }
    let mut failed: BTreeSet<Exponent> = BTreeSet::new();
    let mut picked = Vec::new();
    if decompose_rec(fm, basis, e.to_vec(), &mut failed, &mut picked) {
        picked.sort_unstable();
        Ok(Some(picked))
    } else {
        Ok(None)
    }
}

fn decompose_rec(
    fm: &FiberMonoid,
    basis: &[Exponent],
    e: Exponent,
    failed: &mut BTreeSet<Exponent>,
    picked: &mut Vec<usize>,
) -> bool {
    if e.iter().all(|&x| x == 0) {
        return true;
    }
    if failed.contains(&e) {
        return false;
    }
    for (i, b) in basis.iter().enumerate() {
        if b.iter().zip(&e).all(|(p, q)| p <= q) && b.iter().any(|&p| p > 0) {
            let rest: Exponent = e.iter().zip(b).map(|(q, p)| q - p).collect();
            if !fm.contains(&rest) {
                continue;
            }
            picked.push(i);
            if decompose_rec(fm, basis, rest, failed, picked) {
                return true;
            }
            picked.pop();
        }
    }
    failed.insert(e);
    false
}

/// Degree matrix hom `Z^n → G` from per-variable degrees.
pub fn degree_hom(g: &AbelianGroup, degrees: &[GroupElement]) -> Result<GroupHom> {
    GroupHom::from_free(g, degrees).map_err(|e| match e {
        Error::GroupMismatch => Error::InvalidPresentation(format!("degree outside {g}")),
        other => other,
    })
}
