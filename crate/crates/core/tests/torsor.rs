mod common;

use common::*;
use coxring_core::abgroup::AbelianGroup;
use coxring_core::numfield::FieldTower;
use coxring_core::polyalg::GradedPresentation;
use coxring_core::torsor::*;
use num_integer::Integer;

fn ample() -> coxring_core::abgroup::GroupElement {
    elem(&AbelianGroup::free(4), &[11, 5, 9, 8])
}

fn seven() -> Vec<Vec<u32>> {
    [&[1, 6, 7][..], &[1, 2, 3, 4], &[1, 2, 3, 5], &[1, 2, 3, 7], &[1, 2, 5, 6], &[2, 4, 5, 6], &[4, 5, 6, 7]]
        .iter()
        .map(|v| mono(7, v))
        .collect()
}

fn product_factors() -> Vec<Vec<Vec<u32>>> {
    [[&[1][..], &[4, 5, 6]], [&[2], &[3, 4, 6, 7]], [&[3], &[5, 6, 7]], [&[4], &[5, 7]]]
        .iter()
        .map(|f| f.iter().map(|v| mono(7, v)).collect())
        .collect()
}

#[test]
fn dp4_irrelevant_ideal_is_the_seven_monomials() {
    let irr = irrelevant_ideal(&dp4_xi(), &ample(), None).unwrap();
    assert_eq!(irr, seven());
}

#[test]
fn dp4_irrelevant_matches_product_ideal() {
    let r = dp4_xi();
    let irr = irrelevant_ideal(&r, &ample(), None).unwrap();
    let prod = product_ideal(&product_factors());
    assert_eq!(prod.len(), 16);
    // Without the relation the two monomial radicals differ: ξ4ξ5ξ6ξ7 is
    // only reached through ξ7² = ξ3ξ4²ξ6 - ξ2²ξ5⁴.
    let expanded = squarefree_minimal(&prod);
    assert!(!expanded.contains(&mono(7, &[4, 5, 6, 7])));
    // Modulo the relation every generator of one ideal has a power in the other.
    let cmp = compare_radicals(&r, &irr, &prod, 8).unwrap();
    assert!(cmp.equal(), "{cmp:?}");
}

#[test]
fn dp4_generated_in_ample_degree() {
    let rep = generated_in_degree(&dp4_xi(), &ample(), 2).unwrap();
    assert!(rep.generated(), "{rep:?}");
    assert_eq!(rep.steps.len(), 2);
}

#[test]
fn generated_in_degree_trivial_cases() {
    let q = FieldTower::rationals();
    let z = AbelianGroup::free(1);
    let xy = GradedPresentation::free(names("x", 2), z.clone(), vec![elem(&z, &[1]); 2], q.clone()).unwrap();
    assert!(generated_in_degree(&xy, &elem(&z, &[1]), 4).unwrap().generated());
    let x = GradedPresentation::free(names("x", 1), z.clone(), vec![elem(&z, &[1])], q).unwrap();
    assert!(generated_in_degree(&x, &elem(&z, &[2]), 3).unwrap().generated());
    assert_eq!(irrelevant_ideal(&x, &elem(&z, &[1]), None).unwrap(), vec![vec![1]]);
}

#[test]
fn weighted_ring_not_generated_in_low_degree() {
    // k[x, y] with deg x = 1, deg y = 2: R_1 · R_1 misses y.
    let q = FieldTower::rationals();
    let z = AbelianGroup::free(1);
    let r = GradedPresentation::free(names("x", 2), z.clone(), vec![elem(&z, &[1]), elem(&z, &[2])], q).unwrap();
    let rep = generated_in_degree(&r, &elem(&z, &[1]), 1).unwrap();
    assert!(!rep.generated());
    assert_eq!((rep.steps[0].target_dimension, rep.steps[0].image_rank), (2, 1));
}

fn naive(ps: &ParamScheme, h: i64) -> Vec<Vec<i64>> {
    let rel = IntPoly::from_polynomial(&ps.presentation.relations()[0]).unwrap();
    let n = ps.presentation.nvars();
    let mut out = Vec::new();
    let total = (2 * h + 1).pow(n as u32);
    for mut code in 0..total {
        let mut x = vec![0i64; n];
        for v in x.iter_mut() {
            *v = code % (2 * h + 1) - h;
            code /= 2 * h + 1;
        }
        if rel.eval(&x).unwrap() != 0 {
            continue;
        }
        let val = |e: &[u32]| -> i128 { e.iter().zip(&x).map(|(&k, &v)| (v as i128).pow(k)).product() };
        if ps.coprimality.iter().any(|(v, e)| (x[*v] as i128).gcd(&val(e)) != 1) {
            continue;
        }
        if ps.irrelevant.iter().all(|e| val(e) == 0) {
            continue;
        }
        out.push(x);
    }
    out.sort();
    out
}

#[test]
fn dp4_enumeration_matches_naive_loop() {
    let ps = dp4_scheme();
    assert_eq!(param_enumerate(&ps, 1).unwrap(), naive(&ps, 1));
}

#[test]
fn chatelet_enumeration_matches_naive_loop() {
    let ps = chatelet_scheme();
    assert_eq!(param_enumerate(&ps, 2).unwrap(), naive(&ps, 2));
}

#[test]
fn dp4_parameterization_is_sound() {
    let ps = dp4_scheme();
    let tuples = param_enumerate(&ps, 3).unwrap();
    assert!(!tuples.is_empty());
    assert!(!tuples.contains(&vec![0; 7]));
    let rel = IntPoly::from_polynomial(&ps.presentation.relations()[0]).unwrap();
    assert!(tuples.iter().all(|x| rel.eval(x).unwrap() == 0));
    let rep = param_project_and_verify(&ps, &tuples).unwrap();
    assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    assert_eq!(rep.tuples, tuples.len());
}

#[test]
fn chatelet_parameterization_is_sound() {
    let ps = chatelet_scheme();
    let tuples = param_enumerate(&ps, 5).unwrap();
    assert!(!tuples.is_empty());
    let rep = param_project_and_verify(&ps, &tuples).unwrap();
    assert!(rep.violations.is_empty(), "{:?}", rep.violations);
}

#[test]
fn empty_tuple_list_gives_empty_report() {
    let rep = param_project_and_verify(&dp4_scheme(), &[]).unwrap();
    assert_eq!((rep.tuples, rep.points.len(), rep.violations.len()), (0, 0, 0));
}

#[test]
fn dp4_small_points_are_covered() {
    let ps = dp4_scheme();
    let rep = coverage(&ps, 2, 12).unwrap();
    assert!(!rep.points.is_empty());
    assert!(rep.complete(), "{rep:?}");
}

#[test]
fn irrelevant_ideal_ignores_generator_order() {
    // Reverse the variables: the output is the reversed monomials, re-sorted.
    let r = dp4_xi();
    let perm: Vec<usize> = (0..7).rev().collect();
    let rel = r.relations()[0].rename(&perm, 7);
    let degs = perm.iter().map(|&i| r.degrees()[i].clone()).collect();
    let names = perm.iter().map(|&i| r.names()[i].clone()).collect();
    let s = GradedPresentation::new(names, r.group().clone(), degs, r.tower().clone(), vec![rel]).unwrap();
    let mut a: Vec<Vec<u32>> =
        irrelevant_ideal(&s, &ample(), None).unwrap().into_iter().map(|e| e.into_iter().rev().collect()).collect();
    a.sort();
    let mut b = irrelevant_ideal(&r, &ample(), None).unwrap();
    b.sort();
    assert_eq!(a, b);
}
