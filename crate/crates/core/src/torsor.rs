//! Irrelevant ideals, generation in a degree, and integral points on
//! torsors mapped to a projective model.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::lattice::{fiber_points, listing_cmp, Exponent};
use crate::linalg::Echelon;
use crate::numfield::TowerElement;
use crate::polyalg::{GradedPresentation, Polynomial};

fn support(e: &[u32]) -> Exponent {
    e.iter().map(|&x| u32::from(x > 0)).collect()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Squarefree supports of the given monomials, minimal under divisibility,
/// in listing order. These generate the radical of the monomial ideal.
pub fn squarefree_minimal(monos: &[Exponent]) -> Vec<Exponent> {
    let sup: BTreeSet<Exponent> = monos.iter().map(|e| support(e)).collect();
    let mut out: Vec<Exponent> =
        sup.iter().filter(|s| !sup.iter().any(|t| t != *s && divides(t, s))).cloned().collect();
    out.sort_by(|a, b| listing_cmp(a, b));
    out
}

/// Generators of the radical of the ideal spanned by the monomials of
/// degree `m`.
pub fn irrelevant_ideal(r: &GradedPresentation, m: &GroupElement, cap: Option<u32>) -> Result<Vec<Exponent>> {
    Ok(squarefree_minimal(&fiber_points(r.degree_map(), m, cap)?))
}

/// All products of one monomial from each factor.
pub fn product_ideal(factors: &[Vec<Exponent>]) -> Vec<Exponent> {
    let n = factors.iter().flatten().next().map_or(0, |e| e.len());
    let mut acc: Vec<Exponent> = vec![vec![0; n]];
    for f in factors {
        let mut next = Vec::new();
        for a in &acc {
            for b in f {
                next.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        acc = next;
    }
    acc
}

/// Smallest `k ≤ max_power` with `target^k` in the ideal generated by the
/// relations of `r` and the monomials `gens`.
pub fn power_membership(
    r: &GradedPresentation,
    gens: &[Exponent],
    target: &Exponent,
    max_power: u32,
) -> Result<Option<u32>> {
    let one = TowerElement::one(r.tower());
    let mut rels: Vec<Polynomial> = r.relations().to_vec();
    rels.extend(gens.iter().map(|e| Polynomial::monomial(e.clone(), one.clone())));
    let big = r.with_relations(rels)?;
    for k in 1..=max_power {
        let e: Exponent = target.iter().map(|x| x * k).collect();
        if big.ideal_member(&Polynomial::monomial(e, one.clone()))?.member {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalComparison {
    /// For each generator of the first ideal, the power found in the second.
    pub first_in_second: Vec<Option<u32>>,
    pub second_in_first: Vec<Option<u32>>,
}

impl RadicalComparison {
    pub fn equal(&self) -> bool {
        self.first_in_second.iter().chain(&self.second_in_first).all(|k| k.is_some())
    }
}

/// Compares the radicals of two monomial ideals modulo the relations of
/// `r`, by powers of each generator up to `max_power`.
pub fn compare_radicals(
    r: &GradedPresentation,
    a: &[Exponent],
    b: &[Exponent],
    max_power: u32,
) -> Result<RadicalComparison> {
    let first_in_second = a.iter().map(|g| power_membership(r, b, g, max_power)).collect::<Result<_>>()?;
    let second_in_first = b.iter().map(|g| power_membership(r, a, g, max_power)).collect::<Result<_>>()?;
    Ok(RadicalComparison { first_in_second, second_in_first })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationStep {
    pub k: u32,
    /// Dimension of `R_{(k+1)m}`.
    pub target_dimension: usize,
    /// Rank of the products `R_{km} · R_m` inside it.
    pub image_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationReport {
    pub steps: Vec<GenerationStep>,
}

impl GenerationReport {
    pub fn generated(&self) -> bool {
        self.steps.iter().all(|s| s.image_rank == s.target_dimension)
    }
}

/// Checks that `R_{km} ⊗ R_m → R_{(k+1)m}` is onto for `k = 1..=steps`.
pub fn generated_in_degree(r: &GradedPresentation, m: &GroupElement, steps: u32) -> Result<GenerationReport> {
    let basis = |k: u32| -> Result<Vec<Exponent>> { Ok(r.graded_piece(&m.scale(&BigInt::from(k)), None)?.basis) };
    let b1 = basis(1)?;
    let mut out = Vec::new();
    for k in 1..=steps {
        let bk = basis(k)?;
        let d = m.scale(&BigInt::from(k + 1));
        let space = r.piece_space(&d, None, false)?;
        let target_dimension = space.monomials.len() - space.echelon.rank();
        let mut ech = Echelon::new(r.tower());
        let one = TowerElement::one(r.tower());
        let mut seen = BTreeSet::new();
        for a in &bk {
            for b in &b1 {
                let e: Exponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if !seen.insert(e.clone()) {
                    continue;
                }
                ech.insert(space.reduce(&Polynomial::monomial(e, one.clone()))?);
            }
        }
        out.push(GenerationStep { k, target_dimension, image_rank: ech.rank() });
    }
    Ok(GenerationReport { steps: out })
}

/// Integer polynomial as a term list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub terms: Vec<(Exponent, i128)>,
}

impl IntPoly {
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let mut terms = Vec::new();
        for (e, c) in p.terms() {
            let q = c.as_rational().ok_or_else(|| Error::Field("integer coefficients required".into()))?;
            if !q.is_integer() {
                return Err(Error::Field(format!("coefficient {q} is not an integer")));
            }
            let v = q.to_integer().to_i128().ok_or(Error::Overflow("coefficient"))?;
            terms.push((e.clone(), v));
        }
        Ok(IntPoly { terms })
    }

    pub fn eval(&self, x: &[i64]) -> Result<i128> {
        let mut acc: i128 = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (v, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t.checked_mul(*v as i128).ok_or(Error::Overflow("evaluation"))?;
                }
            }
            acc = acc.checked_add(t).ok_or(Error::Overflow("evaluation"))?;
        }
        Ok(acc)
    }

    pub fn eval_big(&self, x: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = BigInt::from(*c);
            for (v, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }
}

/// Integral model of a torsor with a map to projective space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamScheme {
    pub presentation: GradedPresentation,
    /// `gcd(x_v, monomial) = 1`.
    pub coprimality: Vec<(usize, Exponent)>,
    /// Monomials that may not vanish simultaneously.
    pub irrelevant: Vec<Exponent>,
    pub projection: Vec<Exponent>,
    /// Equations of the image, in the projective coordinates.
    pub equations: Vec<Polynomial>,
    pub coordinate_names: Vec<String>,
}

impl ParamScheme {
    pub fn new(
        presentation: GradedPresentation,
        coprimality: Vec<(usize, Exponent)>,
        irrelevant: Vec<Exponent>,
        projection: Vec<Exponent>,
        equations: Vec<Polynomial>,
        coordinate_names: Vec<String>,
    ) -> Result<Self> {
        let n = presentation.nvars();
        let bad = |what: &str| Error::InvalidPresentation(format!("parameter scheme: {what}"));
        if coprimality.iter().any(|(v, e)| *v >= n || e.len() != n) || irrelevant.iter().any(|e| e.len() != n) {
            return Err(bad("exponent vectors must match the ring"));
        }
        let degs: BTreeSet<Vec<BigInt>> =
            projection.iter().map(|e| presentation.monomial_degree(e).coords().to_vec()).collect();
        if projection.is_empty() || degs.len() != 1 || projection.iter().any(|e| e.len() != n) {
            return Err(bad("projection monomials must share one degree"));
        }
        if coordinate_names.len() != projection.len() {
            return Err(bad("one name per projective coordinate"));
        }
        for f in &equations {
            if f.nvars() != projection.len() {
                return Err(bad("equations live in the projective coordinates"));
            }
            let tds: BTreeSet<u64> = f.terms().map(|(e, _)| crate::lattice::total_degree(e)).collect();
            if tds.len() > 1 {
                return Err(bad("equations must be homogeneous"));
            }
            IntPoly::from_polynomial(f)?;
        }
        for r in presentation.relations() {
            IntPoly::from_polynomial(r)?;
        }
        Ok(ParamScheme { presentation, coprimality, irrelevant, projection, equations, coordinate_names })
    }

    fn relations(&self) -> Result<Vec<IntPoly>> {
        self.presentation.relations().iter().map(IntPoly::from_polynomial).collect()
    }

    /// Whether `x` satisfies the coprimality clauses and avoids the
    /// irrelevant locus.
    pub fn admissible(&self, x: &[i64]) -> Result<bool> {
        for (v, e) in &self.coprimality {
            let m = monomial_value(e, x)?;
            if (x[*v] as i128).gcd(&m) != 1 {
                return Ok(false);
            }
        }
        for e in &self.irrelevant {
            if monomial_value(e, x)? != 0 {
                return Ok(true);
            }
        }
        Ok(self.irrelevant.is_empty())
    }
}

fn monomial_value(e: &[u32], x: &[i64]) -> Result<i128> {
    let mut t: i128 = 1;
    for (v, &k) in x.iter().zip(e) {
        for _ in 0..k {
            t = t.checked_mul(*v as i128).ok_or(Error::Overflow("monomial value"))?;
        }
    }
    Ok(t)
}

/// A variable `x_v` entering the relation only as `c · x_v^k`.
fn pure_power(rel: &IntPoly, n: usize) -> Option<(usize, u32, i128)> {
    (0..n).find_map(|v| {
        let with: Vec<&(Exponent, i128)> = rel.terms.iter().filter(|(e, _)| e[v] > 0).collect();
        match with.as_slice() {
            [(e, c)] if e.iter().enumerate().all(|(i, &k)| i == v || k == 0) => Some((v, e[v], *c)),
            _ => None,
        }
    })
}

/// Integer `k`-th roots of `a` (both signs for even `k`), ascending.
fn integer_roots(a: i128, k: u32) -> Vec<i128> {
    if k == 0 {
        return Vec::new();
    }
    if a == 0 {
        return vec![0];
    }
    if k.is_multiple_of(2) && a < 0 {
        return Vec::new();
    }
    let r = a.abs().nth_root(k);
    if r.checked_pow(k) != Some(a.abs()) {
        return Vec::new();
    }
    let r = if a < 0 { -r } else { r };
    if k.is_multiple_of(2) {
        vec![-r, r]
    } else {
        vec![r]
    }
}

/// All admissible integral points with coordinates in `[-height, height]`
/// satisfying the relations, in lexicographic order.
pub fn param_enumerate(ps: &ParamScheme, height: u32) -> Result<Vec<Vec<i64>>> {
    let n = ps.presentation.nvars();
    let rels = ps.relations()?;
    let h = height as i64;
    let solved = rels.first().and_then(|r| pure_power(r, n));
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let free: Vec<usize> = (0..n).filter(|&v| solved.is_none_or(|(s, _, _)| s != v)).collect();
    let mut counter = vec![-h; free.len()];
    loop {
        for (k, &v) in free.iter().enumerate() {
            x[v] = counter[k];
        }
        match solved {
            Some((s, k, c)) => {
                x[s] = 0;
                let rest = rels[0].eval(&x)?;
                if rest % c == 0 {
                    for root in integer_roots(-rest / c, k) {
                        if root.abs() <= h as i128 {
                            x[s] = root as i64;
                            if accept(ps, &rels, &x)? {
                                out.push(x.clone());
                            }
                        }
                    }
                }
            }
            None => {
                if accept(ps, &rels, &x)? {
                    out.push(x.clone());
                }
            }
        }
        // odometer
        let mut k = free.len();
        loop {
            if k == 0 {
                out.sort();
                return Ok(out);
            }
            k -= 1;
            if counter[k] < h {
                counter[k] += 1;
                break;
            }
            counter[k] = -h;
        }
    }
}

fn accept(ps: &ParamScheme, rels: &[IntPoly], x: &[i64]) -> Result<bool> {
    for r in rels {
        if r.eval(x)? != 0 {
            return Ok(false);
        }
    }
    ps.admissible(x)
}

/// Primitive representative with first nonzero coordinate positive.
pub fn primitive(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let g = p.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    if g.is_zero() {
        return None;
    }
    let first = p.iter().find(|x| !x.is_zero())?;
    let g = if first.is_negative() { -g } else { g };
    Some(p.iter().map(|x| x / &g).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub tuple: Vec<i64>,
    pub point: Vec<BigInt>,
    pub equation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionReport {
    pub tuples: usize,
    /// Distinct projective points, sorted.
    pub points: Vec<Vec<BigInt>>,
    pub violations: Vec<Violation>,
}

/// Maps tuples to primitive projective points and checks the equations.
pub fn param_project_and_verify(ps: &ParamScheme, tuples: &[Vec<i64>]) -> Result<ProjectionReport> {
    let eqs: Vec<IntPoly> = ps.equations.iter().map(IntPoly::from_polynomial).collect::<Result<_>>()?;
    let mut points = BTreeSet::new();
    let mut violations = Vec::new();
    for x in tuples {
        let raw: Vec<BigInt> = ps
            .projection
            .iter()
            .map(|e| {
                let mut t = BigInt::from(1);
                for (v, &k) in x.iter().zip(e) {
                    for _ in 0..k {
                        t *= *v;
                    }
                }
                t
            })
            .collect();
        let point = primitive(&raw).ok_or_else(|| {
            Error::Unsupported(format!("tuple {x:?} projects to zero: irrelevant locus not excluded"))
        })?;
        for (k, f) in eqs.iter().enumerate() {
            if !f.eval_big(&point).is_zero() {
                violations.push(Violation { tuple: x.clone(), point: point.clone(), equation: k });
            }
        }
        points.insert(point);
    }
    Ok(ProjectionReport { tuples: tuples.len(), points: points.into_iter().collect(), violations })
}

/// Primitive integral points of the image equations with coordinates in
/// `[-height, height]`, sorted.
pub fn surface_points(ps: &ParamScheme, height: u32) -> Result<Vec<Vec<BigInt>>> {
    let eqs: Vec<IntPoly> = ps.equations.iter().map(IntPoly::from_polynomial).collect::<Result<_>>()?;
    let n = ps.projection.len();
    let h = height as i64;
    let mut out = BTreeSet::new();
    let mut x = vec![-h; n];
    loop {
        if eqs.iter().all(|f| f.eval(&x).is_ok_and(|v| v == 0)) {
            let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            if let Some(p) = primitive(&big) {
                if p == big {
                    out.insert(p);
                }
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out.into_iter().collect());
            }
            k -= 1;
            if x[k] < h {
                x[k] += 1;
                break;
            }
            x[k] = -h;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    /// Each surface point with the smallest parameter height reaching it.
    pub points: Vec<(Vec<BigInt>, Option<u32>)>,
}

impl CoverageReport {
    pub fn complete(&self) -> bool {
        self.points.iter().all(|(_, h)| h.is_some())
    }
}

/// Raises the parameter height until every surface point of height at most
/// `surface_height` is hit, or `max_param_height` is reached.
pub fn coverage(ps: &ParamScheme, surface_height: u32, max_param_height: u32) -> Result<CoverageReport> {
    let targets = surface_points(ps, surface_height)?;
    let mut found: BTreeMap<Vec<BigInt>, u32> = BTreeMap::new();
    for h in 1..=max_param_height {
        let rep = param_project_and_verify(ps, &param_enumerate(ps, h)?)?;
        for p in rep.points {
            found.entry(p).or_insert(h);
        }
        if targets.iter().all(|t| found.contains_key(t)) {
            break;
        }
    }
    Ok(CoverageReport { points: targets.into_iter().map(|t| (t.clone(), found.get(&t).copied())).collect() })
}
