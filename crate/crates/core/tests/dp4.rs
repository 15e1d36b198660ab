mod common;

use common::*;
use coxring_core::abgroup::GroupElement;
use coxring_core::galois::{check_action, induced_action, invariant_ring, DescentOptions};
use coxring_core::numfield::TowerElement;
use coxring_core::polyalg::Polynomial;
use coxring_core::veronese::{coordinates_in, veronese_subalgebra, PullbackOptions, PullbackResult};
use num_bigint::BigInt;
use std::sync::OnceLock;

fn veronese() -> &'static PullbackResult {
    static V: OnceLock<PullbackResult> = OnceLock::new();
    V.get_or_init(|| veronese_subalgebra(&dp4_eta(&gaussian()), &dp4_h(), &PullbackOptions::default()).unwrap())
}

fn var(pr: &PullbackResult, name: &str) -> Polynomial {
    let p = &pr.presentation;
    p.var(p.var_index(name).unwrap_or_else(|| panic!("no generator {name}")))
}

#[test]
fn generators_are_the_expected_monomials() {
    let pr = veronese();
    let mut got: Vec<Vec<u32>> = pr.generator_images.iter().map(|f| f.leading().unwrap().0.clone()).collect();
    assert!(pr.generator_images.iter().all(|f| f.len() == 1));
    let mut want: Vec<Vec<u32>> = [&[1][..], &[2], &[7], &[3, 4], &[5, 6], &[8, 9], &[3, 5, 5, 8], &[4, 6, 6, 9]]
        .iter()
        .map(|v| mono(9, v))
        .collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn relations_span_the_expected_pair() {
    let pr = veronese();
    let p = &pr.presentation;
    assert_eq!(p.nvars(), 8);
    assert!(pr.verify_relations().unwrap());
    let (t2, t3) = (var(pr, "eta2"), var(pr, "eta7"));
    let (t4, t5, t6) = (var(pr, "eta3_eta4"), var(pr, "eta5_eta6"), var(pr, "eta8_eta9"));
    let (t7, t8) = (var(pr, "eta3_eta5p2_eta8"), var(pr, "eta4_eta6p2_eta9"));
    let want = [&(&(&t4 * &(&t5 * &t5)) * &t6) - &(&t7 * &t8), &(&(&t2 * &(&t3 * &t3)) + &t7) + &t8];
    // Both directions of ideal containment.
    for f in &want {
        assert!(p.ideal_member(f).unwrap().member, "{}", f.display(p.names()));
    }
    let other = p.with_relations(want.to_vec()).unwrap();
    for f in p.relations() {
        assert!(other.ideal_member(f).unwrap().member, "{}", f.display(p.names()));
    }
    assert_eq!(p.relations().len(), 2);
}

#[test]
fn degrees_match_product_matrix() {
    let a = [[2, 1, -2, 2], [1, 0, -1, 1], [1, 1, -2, 2], [1, 1, -1, 2]];
    let b =
        [[1, 0, 0, -1, 0, 1, 0, 0], [1, -2, 1, 0, 0, 0, 0, 0], [0, 0, 0, -1, 1, -1, 0, 0], [-1, 1, 0, 0, 1, 0, 1, 1]];
    let mut ab: Vec<Vec<i64>> =
        (0..8).map(|j| (0..4).map(|i| (0..4).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect();
    let pr = veronese();
    let ambient: Vec<GroupElement> =
        pr.presentation.degrees().iter().map(|d| pr.degree_map.apply(d).unwrap()).collect();
    let coords = coordinates_in(&dp4_h(), &ambient).unwrap().unwrap();
    let mut got: Vec<Vec<i64>> = coords.iter().map(|c| c.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
    ab.sort();
    got.sort();
    assert_eq!(got, ab);
}

#[test]
fn descent_and_minimization_give_one_relation() {
    let t = gaussian();
    let r = dp4_eta(&t);
    let a = dp4_action(&t);
    assert!(check_action(&r, &a).unwrap().passed());
    let pr = veronese();
    let ia = induced_action(pr, &a).unwrap();
    let d = invariant_ring(&pr.presentation, &ia, &DescentOptions::default()).unwrap();
    assert_eq!(d.presentation.tower().depth(), 0);
    let m = d.minimize(6).unwrap();
    let q = &m.presentation;
    assert_eq!(q.nvars(), 7);
    assert_eq!(q.relations().len(), 1);
    assert_eq!(q.tower().depth(), 0);

    // ξ1..ξ7 up to scaling: ξ4 = 2·eta5_eta6 and ξ7 = 2·eta3_eta5p2_eta8_im.
    let order = ["eta1", "eta2", "eta3_eta4", "eta5_eta6", "eta7", "eta8_eta9", "eta3_eta5p2_eta8_im"];
    let scale = [1, 1, 1, 2, 1, 1, 2];
    let xi = dp4_xi();
    let mut images = vec![Polynomial::zero(7, q.tower()); 7];
    for (k, name) in order.iter().enumerate() {
        let i = q.var_index(name).unwrap_or_else(|| panic!("no generator {name}"));
        let inv = TowerElement::from_int(q.tower(), scale[k]).inv().unwrap();
        images[i] = xi.var(k).scale(&inv);
    }
    let rel = q.relations()[0].substitute(&images).unwrap();
    assert!(rel.is_scalar_multiple_of(&xi.relations()[0]), "{}", rel.display(xi.names()));

    // Degrees in the basis deg ξ1..ξ4.
    let degs: Vec<GroupElement> = order.iter().map(|n| q.degrees()[q.var_index(n).unwrap()].clone()).collect();
    let coords = coordinates_in(&degs[..4], &degs).unwrap().unwrap();
    let want: [[i64; 4]; 7] =
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 1, 1], [4, 2, 3, 2], [2, 1, 2, 2]];
    for (c, w) in coords.iter().zip(want) {
        assert_eq!(c, &w.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    }
    assert_eq!(q.group().free_rank(), 4);
    assert!(q.group().torsion_orders().is_empty());
}
