#![allow(dead_code)]

use coxring_core::abgroup::{AbelianGroup, GroupElement};
use coxring_core::numfield::{FieldTower, Tower, TowerElement};
use coxring_core::polyalg::{GradedPresentation, Polynomial};

pub const QMAT: [[i64; 6]; 9] = [
    [0, 0, 1, -1, 0, 0],
    [0, 1, -1, 0, 0, 0],
    [1, -1, -1, 0, 0, -1],
    [0, 0, 0, 1, -1, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 0],
    [1, -1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, -1],
    [2, -1, -1, -1, -1, 0],
];

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn elem(g: &AbelianGroup, v: &[i64]) -> GroupElement {
    g.element_i64(v).unwrap()
}

/// Builds a polynomial from (coefficient, exponent) pairs with integer coefficients.
pub fn poly(tower: &Tower, n: usize, terms: &[(i64, &[u32])]) -> Polynomial {
    Polynomial::from_terms(n, tower, terms.iter().map(|(c, e)| (e.to_vec(), TowerElement::from_int(tower, *c))))
}

pub fn dp4_eta(tower: &Tower) -> GradedPresentation {
    let g = AbelianGroup::free(6);
    let degrees = QMAT.iter().map(|c| elem(&g, c)).collect();
    let rel = poly(
        tower,
        9,
        &[(1, &[0, 1, 0, 0, 0, 0, 2, 0, 0]), (1, &[0, 0, 1, 0, 2, 0, 0, 1, 0]), (1, &[0, 0, 0, 1, 0, 2, 0, 0, 1])],
    );
    GradedPresentation::new(names("eta", 9), g, degrees, tower.clone(), vec![rel]).unwrap()
}

/// Columns of H: D1, D2, D3+D4, D5+D6.
pub fn dp4_h() -> Vec<GroupElement> {
    let g = AbelianGroup::free(6);
    let c = |i: usize| QMAT[i];
    let sum = |a: [i64; 6], b: [i64; 6]| -> [i64; 6] { core::array::from_fn(|k| a[k] + b[k]) };
    vec![elem(&g, &c(0)), elem(&g, &c(1)), elem(&g, &sum(c(2), c(3))), elem(&g, &sum(c(4), c(5)))]
}

pub fn gaussian() -> Tower {
    FieldTower::gaussian()
}

use coxring_core::abgroup::{quotient, GroupHom};
use coxring_core::galois::{ActionGenerator, SemilinearAction};

/// η3↔η4, η5↔η6, η8↔η9 together with i ↦ -i.
pub fn dp4_action(tower: &Tower) -> SemilinearAction {
    let perm = vec![0, 1, 3, 2, 5, 4, 6, 8, 7];
    SemilinearAction::new(vec![ActionGenerator::permutation("g", 2, perm, 1, tower)])
}

/// Δ_{i,j} = a_i b_j - a_j b_i for (a,b) = (1,0),(1,-1),(1,-2),(1,-3).
pub const AB: [(i64, i64); 4] = [(1, 0), (1, -1), (1, -2), (1, -3)];

pub fn delta(i: usize, j: usize) -> i64 {
    let (ai, bi) = AB[i - 1];
    let (aj, bj) = AB[j - 1];
    ai * bj - aj * bi
}

pub const TRIPLES: [(usize, usize, usize); 4] = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)];

/// Λ = Z^10 with generators L+0..L+4, L-0..L-4, and Λ → Pic.
pub fn chatelet_pic() -> GroupHom {
    let lambda = AbelianGroup::free(10);
    let e = |i: usize, j: usize| {
        let mut v = [0i64; 10];
        v[i] += 1;
        v[5 + i] += 1;
        v[j] -= 1;
        v[5 + j] -= 1;
        v
    };
    let e1234 = [1, 1, 1, 0, 0, -1, 0, 0, -1, -1];
    let rels: Vec<GroupElement> = [e(1, 2), e(1, 3), e(1, 4), e1234].iter().map(|v| elem(&lambda, v)).collect();
    quotient(&lambda, &rels).unwrap().1
}

pub fn chatelet_kbar(tower: &Tower) -> GradedPresentation {
    let proj = chatelet_pic();
    let lambda = proj.domain().clone();
    let degrees = (0..10).map(|i| proj.apply(&lambda.generator(i)).unwrap()).collect();
    let mut names = Vec::new();
    for s in ["ep", "em"] {
        for j in 0..5 {
            names.push(format!("{s}{j}"));
        }
    }
    let pm = |l: usize| {
        let mut e = vec![0u32; 10];
        e[l] = 1;
        e[5 + l] = 1;
        e
    };
    let rels = TRIPLES
        .iter()
        .map(|&(i, j, l)| {
            Polynomial::from_terms(
                10,
                tower,
                [(pm(l), delta(i, j)), (pm(i), delta(j, l)), (pm(j), delta(l, i))]
                    .into_iter()
                    .map(|(e, c)| (e, TowerElement::from_int(tower, c))),
            )
        })
        .collect();
    GradedPresentation::new(names, proj.codomain().clone(), degrees, tower.clone(), rels).unwrap()
}

/// c: η+_j ↔ η-_j with i ↦ -i.
pub fn chatelet_action(tower: &Tower) -> SemilinearAction {
    let perm = (0..10).map(|i| (i + 5) % 10).collect();
    SemilinearAction::new(vec![ActionGenerator::permutation("c", 2, perm, 1, tower)])
}

/// ξ1..ξ7 over Q with degrees in the basis D1, D2, D3+D4, D5+D6 and the
/// relation ξ7² + ξ2²ξ5⁴ - ξ3ξ4²ξ6.
pub fn dp4_xi() -> GradedPresentation {
    let q = FieldTower::rationals();
    let g = AbelianGroup::free(4);
    let degs: [[i64; 4]; 7] =
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 1, 1], [4, 2, 3, 2], [2, 1, 2, 2]];
    let rel = poly(&q, 7, &[(1, &[0, 0, 0, 0, 0, 0, 2]), (1, &[0, 2, 0, 0, 4, 0, 0]), (-1, &[0, 0, 1, 2, 0, 1, 0])]);
    GradedPresentation::new(names("xi", 7), g.clone(), degs.iter().map(|d| elem(&g, d)).collect(), q, vec![rel])
        .unwrap()
}

/// Exponent vector from 1-based variable indices.
pub fn mono(n: usize, vars: &[usize]) -> Vec<u32> {
    let mut e = vec![0; n];
    for &v in vars {
        e[v - 1] += 1;
    }
    e
}

pub fn dp4_scheme() -> coxring_core::torsor::ParamScheme {
    let r = dp4_xi();
    let q = r.tower().clone();
    let coprimality =
        vec![(0, mono(7, &[4, 5, 6])), (1, mono(7, &[3, 4, 6, 7])), (2, mono(7, &[5, 6, 7])), (3, mono(7, &[5, 7]))];
    let irrelevant =
        [&[1, 2, 3, 4][..], &[1, 2, 3, 5], &[1, 2, 3, 7], &[1, 2, 5, 6], &[1, 6, 7], &[2, 4, 5, 6], &[4, 5, 6, 7]]
            .iter()
            .map(|v| mono(7, v))
            .collect();
    let projection = vec![
        vec![2, 2, 1, 0, 2, 0, 0],
        vec![4, 2, 3, 2, 0, 0, 0],
        vec![3, 2, 2, 1, 1, 0, 0],
        vec![2, 1, 1, 0, 0, 0, 1],
        vec![0, 0, 0, 0, 0, 1, 0],
    ];
    let equations = vec![
        poly(&q, 5, &[(1, &[1, 1, 0, 0, 0]), (-1, &[0, 0, 2, 0, 0])]),
        poly(&q, 5, &[(1, &[2, 0, 0, 0, 0]), (-1, &[0, 1, 0, 0, 1]), (1, &[0, 0, 0, 2, 0])]),
    ];
    coxring_core::torsor::ParamScheme::new(r, coprimality, irrelevant, projection, equations, names("x", 5)).unwrap()
}

/// T, U, V, X, Y with X² + Y² = T²U(U-V)(U-2V)(U-3V), projected by
/// TU², TUV, TV², X, Y.
pub fn chatelet_scheme() -> coxring_core::torsor::ParamScheme {
    let q = FieldTower::rationals();
    let g = AbelianGroup::free(2);
    let degs: Vec<GroupElement> = [[1, 0], [0, 1], [0, 1], [1, 2], [1, 2]].iter().map(|d| elem(&g, d)).collect();
    // U(U-V)(U-2V)(U-3V) = U^4 - 6U^3V + 11U^2V^2 - 6UV^3
    let rel = poly(
        &q,
        5,
        &[
            (1, &[0, 0, 0, 2, 0]),
            (1, &[0, 0, 0, 0, 2]),
            (-1, &[2, 4, 0, 0, 0]),
            (6, &[2, 3, 1, 0, 0]),
            (-11, &[2, 2, 2, 0, 0]),
            (6, &[2, 1, 3, 0, 0]),
        ],
    );
    let vars = ["T", "U", "V", "X", "Y"].iter().map(|s| s.to_string()).collect();
    let r = GradedPresentation::new(vars, g, degs, q.clone(), vec![rel]).unwrap();
    let irrelevant =
        [[1, 1, 0, 0, 0], [1, 0, 1, 0, 0], [0, 1, 0, 1, 0], [0, 0, 1, 1, 0], [0, 1, 0, 0, 1], [0, 0, 1, 0, 1]]
            .iter()
            .map(|e| e.to_vec())
            .collect();
    let projection =
        vec![vec![1, 2, 0, 0, 0], vec![1, 1, 1, 0, 0], vec![1, 0, 2, 0, 0], vec![0, 0, 0, 1, 0], vec![0, 0, 0, 0, 1]];
    // x0x2 - x1^2 and x3^2 + x4^2 - (x0 - x1)(x0 - 5x1 + 6x2)
    let equations = vec![
        poly(&q, 5, &[(1, &[1, 0, 1, 0, 0]), (-1, &[0, 2, 0, 0, 0])]),
        poly(
            &q,
            5,
            &[
                (1, &[0, 0, 0, 2, 0]),
                (1, &[0, 0, 0, 0, 2]),
                (-1, &[2, 0, 0, 0, 0]),
                (6, &[1, 1, 0, 0, 0]),
                (-6, &[1, 0, 1, 0, 0]),
                (-5, &[0, 2, 0, 0, 0]),
                (6, &[0, 1, 1, 0, 0]),
            ],
        ),
    ];
    coxring_core::torsor::ParamScheme::new(
        r,
        vec![(1, vec![0, 0, 1, 0, 0])],
        irrelevant,
        projection,
        equations,
        names("x", 5),
    )
    .unwrap()
}
