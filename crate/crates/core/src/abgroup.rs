//! Finitely generated abelian groups `Z^r ⊕ Z/t_1 ⊕ … ⊕ Z/t_s`.
//!
//! Torsion orders are kept as given (not forced into divisor-chain form), so
//! a generator keeps the meaning the caller assigned to it. Normal forms are
//! computed internally when a canonical answer is needed.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{hermite_rows, integer_kernel, reduce_mod_hermite, smith_normal_form, solve_integer, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        if let Some(t) = torsion.iter().find(|t| **t < BigInt::from(2)) {
            return Err(Error::InvalidGroup(format!("torsion order {t} is smaller than 2")));
        }
        Ok(AbelianGroup { free_rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the `i`-th generator, `None` for a free generator.
    pub fn generator_order(&self, i: usize) -> Option<&BigInt> {
        i.checked_sub(self.free_rank).map(|k| &self.torsion[k])
    }

    /// Reduces torsion coordinates into `[0, order)`.
    pub fn reduce(&self, coords: &mut [BigInt]) {
        for (k, t) in self.torsion.iter().enumerate() {
            let c = &mut coords[self.free_rank + k];
            *c = c.mod_floor(t);
        }
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<GroupElement> {
        if coords.len() != self.ngens() {
            return Err(Error::Dimension(format!(
                "element has {} coordinates, group needs {}",
                coords.len(),
                self.ngens()
            )));
        }
        let mut coords = coords;
        self.reduce(&mut coords);
        Ok(GroupElement { group: self.clone(), coords })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement> {
        self.element(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { group: self.clone(), coords: vec![BigInt::zero(); self.ngens()] }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut g = self.zero();
        g.coords[i] = BigInt::one();
        g
    }

    /// Columns `t_k · e_{r+k}` spanning the relations of the presentation.
    pub fn relation_columns(&self) -> Vec<Vec<BigInt>> {
        self.torsion
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let mut c = vec![BigInt::zero(); self.ngens()];
                c[self.free_rank + k] = t.clone();
                c
            })
            .collect()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<alloc::string::String> = Vec::new();
        if self.free_rank > 0 || self.torsion.is_empty() {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: AbelianGroup,
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &GroupElement) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check(other)?;
        let c = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        self.group.element(c)
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check(other)?;
        let c = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        self.group.element(c)
    }

    pub fn neg(&self) -> GroupElement {
        let c = self.coords.iter().map(|a| -a).collect();
        self.group.element(c).expect("same signature")
    }

    pub fn scale(&self, k: &BigInt) -> GroupElement {
        let c = self.coords.iter().map(|a| a * k).collect();
        self.group.element(c).expect("same signature")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Homomorphism given by the images of the domain generators (columns).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    domain: AbelianGroup,
    codomain: AbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(domain: AbelianGroup, codomain: AbelianGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.ngens() || matrix.cols() != domain.ngens() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.ngens(),
                domain.ngens()
            )));
        }
        let mut matrix = matrix;
        for j in 0..matrix.cols() {
            let mut col = matrix.column(j);
            codomain.reduce(&mut col);
            for (i, x) in col.into_iter().enumerate() {
                matrix[(i, j)] = x;
            }
        }
        let hom = GroupHom { domain, codomain, matrix };
        for j in hom.domain.free_rank..hom.domain.ngens() {
            let d = hom.domain.generator_order(j).expect("torsion generator").clone();
            let mut raw = vec![BigInt::zero(); hom.domain.ngens()];
            raw[j] = d.clone();
            let img = hom.apply_coords(&raw);
            if !img.is_zero() {
                return Err(Error::InvalidHom(format!(
                    "torsion generator {j} of order {d} maps to an element whose {d}-fold is {img}"
                )));
            }
        }
        Ok(hom)
    }

    pub fn identity(g: &AbelianGroup) -> Self {
        GroupHom { domain: g.clone(), codomain: g.clone(), matrix: IntMatrix::identity(g.ngens()) }
    }

    pub fn zero(domain: &AbelianGroup, codomain: &AbelianGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zeros(codomain.ngens(), domain.ngens()),
        }
    }

    /// The hom `Z^n → G` sending `e_i` to `images[i]`.
    pub fn from_free(codomain: &AbelianGroup, images: &[GroupElement]) -> Result<Self> {
        for g in images {
            if g.group() != codomain {
                return Err(Error::GroupMismatch);
            }
        }
        let cols: Vec<Vec<BigInt>> = images.iter().map(|g| g.coords.clone()).collect();
        let m = IntMatrix::from_columns(codomain.ngens(), &cols);
        GroupHom::new(AbelianGroup::free(images.len()), codomain.clone(), m)
    }

    /// The hom determined by `gens[i] ↦ images[i]`, where `gens` generate the
    /// domain. Fails if the assignment is inconsistent.
    pub fn from_generator_images(
        domain: &AbelianGroup,
        codomain: &AbelianGroup,
        gens: &[GroupElement],
        images: &[GroupElement],
    ) -> Result<Self> {
        if gens.len() != images.len() {
            return Err(Error::Dimension("generator and image counts differ".into()));
        }
        let mut cols = Vec::with_capacity(domain.ngens());
        for k in 0..domain.ngens() {
            let c = subgroup_membership(gens, &domain.generator(k))?
                .ok_or_else(|| Error::InvalidHom(format!("generator {k} of the domain is not in the span")))?;
            let mut img = codomain.zero();
            for (ci, im) in c.iter().zip(images) {
                img = img.add(&im.scale(ci))?;
            }
            cols.push(img.coords);
        }
        let hom = GroupHom::new(domain.clone(), codomain.clone(), IntMatrix::from_columns(codomain.ngens(), &cols))?;
        for (g, im) in gens.iter().zip(images) {
            if &hom.apply(g)? != im {
                return Err(Error::InvalidHom(format!("assignment {g} -> {im} is inconsistent")));
            }
        }
        Ok(hom)
    }

    pub fn domain(&self) -> &AbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &AbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.group() != &self.domain {
            return Err(Error::GroupMismatch);
        }
        Ok(self.apply_coords(x.coords()))
    }

    /// Applies the matrix to a raw coordinate vector of the domain.
    pub fn apply_coords(&self, x: &[BigInt]) -> GroupElement {
        self.codomain.element(self.matrix.mul_vec(x)).expect("shape checked")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom> {
        if other.codomain != self.domain {
            return Err(Error::GroupMismatch);
        }
        GroupHom::new(other.domain.clone(), self.codomain.clone(), self.matrix.mul(&other.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Images of the domain generators.
    pub fn generator_images(&self) -> Vec<GroupElement> {
        (0..self.domain.ngens()).map(|j| self.apply_coords(&self.domain.generator(j).coords)).collect()
    }
}

/// Builds `L / R` for a lattice `L ⊆ Z^n` (given by generators) and a
/// sublattice `R ⊆ L`. Returns the group and, per group generator, a
/// representative vector in `Z^n`.
fn lattice_quotient(
    n: usize,
    lattice: &[Vec<BigInt>],
    relations: &[Vec<BigInt>],
) -> Result<(AbelianGroup, Vec<Vec<BigInt>>)> {
    let basis = hermite_rows(lattice, n);
    let k = basis.len();
    let bt = IntMatrix::from_columns(n, &basis);
    let mut rel_cols = Vec::with_capacity(relations.len());
    for r in relations {
        let c = solve_integer(&bt, r).ok_or_else(|| Error::InvalidGroup("relation outside the lattice".into()))?;
        rel_cols.push(c);
    }
    let rel = IntMatrix::from_columns(k, &rel_cols);
    let snf = smith_normal_form(&rel);
    let mut free_gens = Vec::new();
    let mut tors_gens = Vec::new();
    let mut tors = Vec::new();
    for i in 0..k {
        let c = snf.u_inv.column(i);
        let x = bt.mul_vec(&c);
        if i >= snf.rank {
            free_gens.push(x);
        } else if !snf.s[(i, i)].is_one() {
            tors.push(snf.s[(i, i)].clone());
            tors_gens.push(x);
        }
    }
    let group = AbelianGroup::new(free_gens.len(), tors)?;
    free_gens.extend(tors_gens);
    Ok((group, free_gens))
}

/// Kernel of `f` as an abstract group together with its inclusion.
pub fn hom_kernel(f: &GroupHom) -> Result<(AbelianGroup, GroupHom)> {
    let g = f.domain();
    let c = f.codomain();
    let n = g.ngens();
    // x with f(x) in the relation lattice of the codomain
    let mut ext = IntMatrix::zeros(c.ngens(), n + c.torsion.len());
    for i in 0..c.ngens() {
        for j in 0..n {
            ext[(i, j)] = f.matrix[(i, j)].clone();
        }
    }
    for (k, col) in c.relation_columns().into_iter().enumerate() {
        for (i, x) in col.into_iter().enumerate() {
            ext[(i, n + k)] = x;
        }
    }
    let lattice: Vec<Vec<BigInt>> = integer_kernel(&ext).into_iter().map(|v| v[..n].to_vec()).collect();
    let (k, reps) = lattice_quotient(n, &lattice, &g.relation_columns())?;
    let cols: Vec<Vec<BigInt>> = reps
        .into_iter()
        .map(|mut v| {
            g.reduce(&mut v);
            v
        })
        .collect();
    let inclusion = GroupHom::new(k.clone(), g.clone(), IntMatrix::from_columns(n, &cols))?;
    Ok((k, inclusion))
}

/// Expresses `g` as an integer combination of `h`.
///
/// The witness is canonical: reduced modulo the Hermite basis of the lattice
/// of all coefficient vectors that give zero.
pub fn subgroup_membership(h: &[GroupElement], g: &GroupElement) -> Result<Option<Vec<BigInt>>> {
    let grp = g.group();
    if h.iter().any(|x| x.group() != grp) {
        return Err(Error::GroupMismatch);
    }
    let n = grp.ngens();
    let rel = grp.relation_columns();
    let mut cols: Vec<Vec<BigInt>> = h.iter().map(|x| x.coords.clone()).collect();
    cols.extend(rel.iter().cloned());
    let m = IntMatrix::from_columns(n, &cols);
    let Some(sol) = solve_integer(&m, g.coords()) else { return Ok(None) };
    let mut c = sol[..h.len()].to_vec();
    let kernel: Vec<Vec<BigInt>> = integer_kernel(&m).into_iter().map(|v| v[..h.len()].to_vec()).collect();
    let hnf = hermite_rows(&kernel, h.len());
    reduce_mod_hermite(&mut c, &hnf);
    Ok(Some(c))
}

/// `G / <H>` with its projection. The kernel of the projection is exactly the
/// subgroup generated by `h`.
pub fn quotient(g: &AbelianGroup, h: &[GroupElement]) -> Result<(AbelianGroup, GroupHom)> {
    if h.iter().any(|x| x.group() != g) {
        return Err(Error::GroupMismatch);
    }
    if h.iter().all(|x| x.is_zero()) {
        return Ok((g.clone(), GroupHom::identity(g)));
    }
    let n = g.ngens();
    let mut cols: Vec<Vec<BigInt>> = h.iter().map(|x| x.coords.clone()).collect();
    cols.extend(g.relation_columns());
    let m = IntMatrix::from_columns(n, &cols);
    let snf = smith_normal_form(&m);
    let mut free_rows = Vec::new();
    let mut tors_rows = Vec::new();
    let mut tors = Vec::new();
    for i in 0..n {
        if i >= snf.rank {
            free_rows.push(snf.u.row(i));
        } else if !snf.s[(i, i)].is_one() {
            tors.push(snf.s[(i, i)].clone());
            tors_rows.push(snf.u.row(i));
        }
    }
    let q = AbelianGroup::new(free_rows.len(), tors)?;
    free_rows.extend(tors_rows);
    let proj = GroupHom::new(g.clone(), q.clone(), IntMatrix::from_rows(&free_rows, n))?;
    Ok((q, proj))
}

/// The subgroup generated by the images of the domain generators, as an
/// abstract group `Q` with an injective hom `Q → codomain`, plus the map
/// `domain → Q` through which `f` factors.
pub fn image(f: &GroupHom) -> Result<(AbelianGroup, GroupHom, GroupHom)> {
    let (_, incl) = hom_kernel(f)?;
    let (q, proj) = quotient(f.domain(), &incl.generator_images())?;
    let mut cols = Vec::with_capacity(q.ngens());
    for k in 0..q.ngens() {
        // preimage of the k-th generator of q under proj
        let target = q.generator(k);
        let pre = subgroup_membership(&proj.generator_images(), &target)?
            .ok_or_else(|| Error::InvalidHom("projection is not surjective".into()))?;
        cols.push(f.apply_coords(&pre).coords);
    }
    let emb = GroupHom::new(q.clone(), f.codomain().clone(), IntMatrix::from_columns(f.codomain().ngens(), &cols))?;
    Ok((q, emb, proj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclic_quotient() {
        let z = AbelianGroup::free(1);
        let (q, p) = quotient(&z, &[z.element_i64(&[2]).unwrap()]).unwrap();
        assert_eq!(q.free_rank(), 0);
        assert_eq!(q.torsion_orders(), &[BigInt::from(2)]);
        assert!(p.apply(&z.element_i64(&[4]).unwrap()).unwrap().is_zero());
        assert!(!p.apply(&z.element_i64(&[3]).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn antidiagonal_quotient() {
        let z2 = AbelianGroup::free(2);
        let (q, p) = quotient(&z2, &[z2.element_i64(&[1, -1]).unwrap()]).unwrap();
        assert_eq!(q, AbelianGroup::free(1));
        assert!(p.apply(&z2.element_i64(&[3, -3]).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn kernel_with_torsion_codomain() {
        // Z -> Z/4, 1 -> 2: kernel is 2Z
        let z = AbelianGroup::free(1);
        let c = AbelianGroup::new(0, big(&[4])).unwrap();
        let f = GroupHom::new(z.clone(), c, IntMatrix::from_i64_rows(&[&[2]])).unwrap();
        let (k, incl) = hom_kernel(&f).unwrap();
        assert_eq!(k, AbelianGroup::free(1));
        assert_eq!(incl.matrix(), &IntMatrix::from_i64_rows(&[&[2]]));
    }

    #[test]
    fn kernel_with_torsion_domain() {
        // Z ⊕ Z/6 -> Z/3, (a, b) -> b mod 3: kernel Z ⊕ Z/2
        let g = AbelianGroup::new(1, big(&[6])).unwrap();
        let c = AbelianGroup::new(0, big(&[3])).unwrap();
        let f = GroupHom::new(g, c, IntMatrix::from_i64_rows(&[&[0, 1]])).unwrap();
        let (k, incl) = hom_kernel(&f).unwrap();
        assert_eq!(k.free_rank(), 1);
        assert_eq!(k.torsion_orders(), &[BigInt::from(2)]);
        assert!(f.compose(&incl).unwrap().is_zero());
    }

    #[test]
    fn invalid_torsion_hom() {
        let g = AbelianGroup::new(0, big(&[2])).unwrap();
        let z = AbelianGroup::free(1);
        assert!(GroupHom::new(g, z, IntMatrix::from_i64_rows(&[&[1]])).is_err());
    }

    #[test]
    fn membership_zero() {
        let z3 = AbelianGroup::free(3);
        let h = [z3.element_i64(&[1, 1, 0]).unwrap(), z3.element_i64(&[0, 1, 1]).unwrap()];
        assert_eq!(subgroup_membership(&h, &z3.zero()).unwrap(), Some(big(&[0, 0])));
        assert_eq!(subgroup_membership(&h, &z3.element_i64(&[1, 0, 0]).unwrap()).unwrap(), None);
    }
}
