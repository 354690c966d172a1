mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::Q;
use polygym::geometry::{
    bounded_lattice_points, chernikova, lcd_scale, minimize_generators, project_generators, ConstraintKind,
    HPolyhedron, LinearConstraint, DEFAULT_BOX_CAP,
};

fn row() -> impl Strategy<Value = (Vec<i64>, i64, bool)> {
    (prop::collection::vec(-3i64..=3, 4), -3i64..=3, prop::bool::weighted(0.1))
}

/// Random polyhedra with up to four variables and coefficients in [-3, 3].
fn polyhedron() -> impl Strategy<Value = HPolyhedron> {
    (1usize..=4, prop::collection::vec(row(), 1..=6)).prop_map(|(d, rows)| {
        let cs = rows
            .into_iter()
            .map(|(a, c, eq)| {
                let a = a[..d].to_vec();
                if eq {
                    LinearConstraint::eq(a, c)
                } else {
                    LinearConstraint::ge(a, c)
                }
            })
            .collect();
        HPolyhedron::anonymous(d, cs).unwrap()
    })
}

/// Random polyhedra clipped to the box `[-4, 4]^d`.
fn polytope() -> impl Strategy<Value = HPolyhedron> {
    polyhedron().prop_map(|h| {
        let d = h.dim();
        let mut h = h;
        for k in 0..d {
            let mut a = vec![0; d];
            a[k] = 1;
            h.push(LinearConstraint::ge(a.clone(), 4)).unwrap();
            a[k] = -1;
            h.push(LinearConstraint::ge(a, 4)).unwrap();
        }
        h
    })
}

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn value(a: &[i64], c: i64, x: &[Q]) -> Q {
    a.iter().zip(x).map(|(&ai, xi)| q(ai) * xi).sum::<Q>() + q(c)
}

fn pointed(h: &HPolyhedron) -> bool {
    let rows: Vec<Vec<i64>> = common::inequality_rows(h).into_iter().map(|r| r.0).collect();
    common::matrix_rank(&rows, h.dim()) == h.dim()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn combined_generators_satisfy_constraints(
        h in polyhedron(),
        vw in prop::collection::vec(0u32..=3, 64),
        rw in prop::collection::vec(0u32..=3, 64),
    ) {
        let g = chernikova(&h);
        prop_assume!(!g.is_empty());
        let mut v: Vec<BigInt> = vw.iter().cycle().take(g.vertices.len()).map(|&x| BigInt::from(x)).collect();
        if v.iter().all(Zero::is_zero) {
            v[0] = BigInt::one();
        }
        let r: Vec<BigInt> = rw.iter().cycle().take(g.rays.len()).map(|&x| BigInt::from(x)).collect();
        let p = g.combine(&v, &r).unwrap();
        for (a, c) in common::inequality_rows(&h) {
            prop_assert!(!value(&a, c, &p).is_negative());
        }
        for ray in &g.rays {
            let rq: Vec<Q> = ray.iter().map(|x| Q::from_integer(x.clone())).collect();
            for (a, _) in common::inequality_rows(&h) {
                prop_assert!(!value(&a, 0, &rq).is_negative());
            }
        }
    }

    #[test]
    fn pointed_generators_match_brute_force(h in polyhedron()) {
        prop_assume!(pointed(&h));
        let g = chernikova(&h);
        let vertices: BTreeSet<Vec<Q>> = g.vertices.iter().cloned().collect();
        prop_assert_eq!(vertices, common::brute_force_vertices(&h));
        if !g.is_empty() {
            let rays: BTreeSet<Vec<BigInt>> = g.rays.iter().cloned().collect();
            prop_assert_eq!(rays, common::brute_force_rays(&h));
        }
    }

    #[test]
    fn vertices_are_tight_with_full_rank(h in polyhedron()) {
        prop_assume!(pointed(&h));
        let rows = common::inequality_rows(&h);
        for v in &chernikova(&h).vertices {
            let tight: Vec<Vec<i64>> =
                rows.iter().filter(|(a, c)| value(a, *c, v).is_zero()).map(|(a, _)| a.clone()).collect();
            prop_assert_eq!(common::matrix_rank(&tight, h.dim()), h.dim());
        }
    }

    #[test]
    fn lattice_points_match_box_scan(h in polytope()) {
        let d = h.dim();
        let mut want = Vec::new();
        let mut p = vec![-5i64; d];
        'scan: loop {
            let inside = h.constraints().iter().all(|c| {
                let v: i64 = c.coeffs().iter().zip(&p).map(|(a, x)| a * x).sum::<i64>() + c.constant();
                match c.kind() {
                    ConstraintKind::Ineq => v >= 0,
                    ConstraintKind::Eq => v == 0,
                }
            });
            if inside {
                want.push(p.clone());
            }
            let mut k = d;
            loop {
                if k == 0 {
                    break 'scan;
                }
                k -= 1;
                if p[k] < 5 {
                    p[k] += 1;
                    break;
                }
                p[k] = -5;
            }
        }
        prop_assert_eq!(bounded_lattice_points(&h, DEFAULT_BOX_CAP).unwrap(), want);
    }

    #[test]
    fn minimization_is_idempotent_on_pointed_polyhedra(h in polyhedron()) {
        prop_assume!(pointed(&h));
        let g = chernikova(&h);
        prop_assert_eq!(minimize_generators(&g), g);
    }

    #[test]
    fn projected_vertices_come_from_vertices(h in polytope(), keep_mask in 1u8..16) {
        let d = h.dim();
        let keep: Vec<usize> = (0..d).filter(|k| keep_mask >> k & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let g = chernikova(&h);
        let p = minimize_generators(&project_generators(&g, &keep).unwrap());
        prop_assert_eq!(p.is_empty(), g.is_empty());
        prop_assert!(p.rays.is_empty());
        let shadows: BTreeSet<Vec<Q>> = g.vertices.iter().map(|v| keep.iter().map(|&k| v[k].clone()).collect()).collect();
        for v in &p.vertices {
            prop_assert!(shadows.contains(v), "{:?} is not the shadow of a vertex", v);
        }
    }

    #[test]
    fn lcd_scale_clears_denominators(xs in prop::collection::vec((-20i64..=20, 1i64..=12), 1..=5)) {
        let v: Vec<Q> = xs.iter().map(|&(n, d)| Q::new(BigInt::from(n), BigInt::from(d))).collect();
        let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled = lcd_scale(&v);
        for (x, s) in v.iter().zip(&scaled) {
            prop_assert_eq!(Q::from_integer(s.clone()), x * Q::from_integer(l.clone()));
        }
    }
}

#[test]
fn equality_only_line() {
    // x = y in the plane: one vertex at the origin and the line split into
    // two opposite rays.
    let h = HPolyhedron::anonymous(2, vec![LinearConstraint::eq(vec![1, -1], 0)]).unwrap();
    let g = chernikova(&h);
    assert_eq!(g.vertices, vec![vec![q(0), q(0)]]);
    let rays: BTreeSet<Vec<BigInt>> = g.rays.iter().cloned().collect();
    let want: BTreeSet<Vec<BigInt>> =
        [vec![1, 1], vec![-1, -1]].into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    assert_eq!(rays, want);
}
