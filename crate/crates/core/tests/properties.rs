//! Property tests for the invariants of every module.

mod common;

use common::{int, random_instance};
use hoffman::argmin::{active_indices, extreme_optimal_points, feasible_set, optimal_set};
use hoffman::exact::{Matrix, Rational, Solve, Vector};
use hoffman::geometry::{distance_to_polyhedron, end_set_distance, extreme_points_by_lp, v_to_h, vertices, Vertices};
use hoffman::kkt::{is_minimal_kkt, isolating_parameter, minimal_kkt_at, minimal_kkt_family, s_d_set};
use hoffman::lp::{self, cone_membership, LpOutcome, LpProblem};
use hoffman::moduli::{calmness_modulus, hoffman_constant, lipschitz_usc_modulus, Certificate};
use hoffman::segment::{break_steps, connecting_subdivision, point_on_segment};
use hoffman::validator::{domain_point_from, empirical_hoffman_lower_bound, SampleConfig};
use hoffman::{ExtRational, IndexSet, Norm, ProblemInstance, VPolytope};
use proptest::prelude::*;

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r).prop_map(move |rows| {
            let rows: Vec<Vector> = rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect();
            Matrix::from_rows(c, &rows).unwrap()
        })
    })
}

fn polytope() -> impl Strategy<Value = VPolytope> {
    (1usize..=3, 1usize..=8).prop_flat_map(|(n, k)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, n), k).prop_map(move |pts| {
            VPolytope::new(n, pts.into_iter().map(|p| p.into_iter().map(int).collect()).collect()).unwrap()
        })
    })
}

fn instance() -> impl Strategy<Value = ProblemInstance> {
    (any::<u64>(), 0u64..1000).prop_map(|(seed, k)| random_instance(seed, k))
}

/// An instance with a parameter `b = A x0 + s` in its domain.
fn instance_with_parameter() -> impl Strategy<Value = (ProblemInstance, Vector)> {
    instance().prop_flat_map(|inst| {
        let (n, m) = (inst.n(), inst.m());
        (Just(inst), prop::collection::vec(-2i64..=2, n), prop::collection::vec(0i64..=2, m)).prop_map(|(inst, x0, s)| {
            let b = domain_point_from(&inst, &common::ints(&x0), &common::ints(&s)).unwrap();
            (inst, b)
        })
    })
}

fn value(r: &hoffman::ModulusReport) -> Rational {
    r.rational()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn null_space_and_rank(m in small_matrix(4, 4)) {
        let basis = m.null_space_basis();
        for z in &basis {
            prop_assert!(m.mul_vec(z).unwrap().iter().all(|v| *v == int(0)));
        }
        prop_assert_eq!(m.rank() + basis.len(), m.ncols());
    }

    #[test]
    fn solve_unique_round_trip(m in small_matrix(4, 4), v in prop::collection::vec(-3i64..=3, 4)) {
        let v: Vector = v.into_iter().take(m.nrows()).map(int).collect();
        prop_assume!(v.len() == m.nrows());
        if let Solve::Unique(x) = m.solve_unique(&v).unwrap() {
            prop_assert_eq!(m.mul_vec(&x).unwrap(), v);
        }
    }

    #[test]
    fn lp_matches_vertex_minimum(
        rows in small_matrix(6, 3),
        x0 in prop::collection::vec(-2i64..=2, 3),
        slack in prop::collection::vec(0i64..=3, 6),
        c in prop::collection::vec(-3i64..=3, 3),
    ) {
        let n = rows.ncols();
        let x0: Vector = x0.into_iter().take(n).map(int).collect();
        let rhs: Vector = rows.mul_vec(&x0).unwrap().into_iter().zip(slack).map(|(v, s)| v + int(s)).collect();
        let c: Vector = c.into_iter().take(n).map(int).collect();
        let problem = LpProblem::with_constraints(c.clone(), rows.clone(), rhs.clone(), Matrix::zeros(0, n), vec![]).unwrap();
        let outcome = lp::solve(&problem).unwrap();
        prop_assert_eq!(&outcome, &lp::solve(&problem).unwrap());
        let set = hoffman::HPolyhedron::new(n, rows.to_rows().into_iter().zip(rhs).collect(), vec![]).unwrap();
        if let (LpOutcome::Optimal { value, .. }, Vertices::Points(points)) = (&outcome, vertices(&set)) {
            if !points.is_empty() {
                let best = points.iter().map(|p| hoffman::exact::dot(&c, p)).min().unwrap();
                prop_assert_eq!(value, &best);
            }
        }
    }

    #[test]
    fn cone_membership_reconstructs(gens in small_matrix(4, 3), lambda in prop::collection::vec(0i64..=2, 4), other in prop::collection::vec(-3i64..=3, 3)) {
        let dim = gens.ncols();
        let generators = gens.to_rows();
        let lambda: Vector = lambda.into_iter().take(generators.len()).map(int).collect();
        let inside: Vector = (0..dim).map(|j| generators.iter().zip(&lambda).map(|(g, l)| &g[j] * l).sum()).collect();
        let other: Vector = other.into_iter().take(dim).map(int).collect();
        let found = cone_membership(&generators, &inside).unwrap();
        prop_assert!(found.is_some());
        for target in [inside, other] {
            if let Some(l) = cone_membership(&generators, &target).unwrap() {
                prop_assert!(l.iter().all(|v| *v >= int(0)));
                let sum: Vector = (0..dim).map(|j| generators.iter().zip(&l).map(|(g, l)| &g[j] * l).sum()).collect();
                prop_assert_eq!(sum, target);
            }
        }
    }

    #[test]
    fn vertex_round_trip(v in polytope()) {
        let Vertices::Points(mut got) = vertices(&v_to_h(&v).unwrap()) else {
            return Err(TestCaseError::fail("polytope contains a line"));
        };
        got.sort();
        let mut expected = extreme_points_by_lp(v.points());
        expected.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn end_set_distance_scaling_and_positivity(v in polytope(), num in 1i64..=5, den in 1i64..=5) {
        let alpha = Rational::new(num.into(), den.into());
        for norm in [Norm::L1, Norm::LInf] {
            let d = end_set_distance(&v, norm).unwrap();
            let scaled = end_set_distance(&v.scaled(&alpha), norm).unwrap();
            match &d {
                ExtRational::Finite(x) => {
                    prop_assert!(*x > int(0));
                    prop_assert_eq!(scaled, ExtRational::Finite(x * &alpha));
                }
                ExtRational::Infinity => prop_assert_eq!(scaled, ExtRational::Infinity),
            }
        }
    }

    #[test]
    fn distance_zero_iff_member(v in polytope(), x in prop::collection::vec(-3i64..=3, 3)) {
        let h = v_to_h(&v).unwrap();
        let x: Vector = x.into_iter().take(v.dim()).map(int).collect();
        for norm in [Norm::L1, Norm::LInf] {
            let (d, _) = distance_to_polyhedron(&x, &h, norm).unwrap();
            prop_assert_eq!(d == ExtRational::zero(), h.contains(&x));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn optimal_set_structure((inst, b) in instance_with_parameter()) {
        let feasible = feasible_set(&inst, &b).unwrap();
        let optimal = optimal_set(&inst, &b).unwrap();
        prop_assert!(optimal.is_subset_of(&feasible));
        let local = minimal_kkt_at(&inst, &b).unwrap();
        let points = extreme_optimal_points(&inst, &b).unwrap();
        for d in local.iter() {
            prop_assert!(optimal.same_set(&s_d_set(&inst, d, &b).unwrap()), "S_D differs for D = {}", d);
            for x in &points {
                prop_assert!(d.is_subset(&active_indices(&inst, &b, x).unwrap()));
            }
        }
    }

    #[test]
    fn family_invariants((inst, b) in instance_with_parameter()) {
        let global = minimal_kkt_family(&inst).unwrap();
        let members = global.members();
        for (i, d) in members.iter().enumerate() {
            prop_assert!(is_minimal_kkt(&inst, d));
            for e in &members[i + 1..] {
                prop_assert!(!d.is_subset(e) && !e.is_subset(d), "{} and {} are nested", d, e);
            }
            let isolated = minimal_kkt_at(&inst, &isolating_parameter(&inst, d)).unwrap();
            prop_assert_eq!(isolated.members(), std::slice::from_ref(d));
        }
        prop_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let local = minimal_kkt_at(&inst, &b).unwrap();
        let sets: Vec<_> = local.iter().map(|d| s_d_set(&inst, d, &b).unwrap()).collect();
        for pair in sets.windows(2) {
            prop_assert!(pair[0].same_set(&pair[1]));
        }
    }

    #[test]
    fn moduli_chain((inst, b) in instance_with_parameter()) {
        let hof = hoffman_constant(&inst).unwrap();
        let lip = lipschitz_usc_modulus(&inst, &b).unwrap();
        prop_assert!(value(&lip) <= value(&hof));
        for x in extreme_optimal_points(&inst, &b).unwrap() {
            prop_assert!(value(&calmness_modulus(&inst, &b, &x).unwrap()) <= value(&lip));
        }
        let Certificate::Hoffman { parameter, point, .. } = &hof.certificate else { unreachable!() };
        prop_assert_eq!(value(&lipschitz_usc_modulus(&inst, parameter).unwrap()), value(&hof));
        prop_assert_eq!(value(&calmness_modulus(&inst, parameter, point).unwrap()), value(&hof));
    }

    #[test]
    fn hoffman_scaling_and_permutation(inst in instance(), num in 1i64..=4, den in 1i64..=4, rot in 0usize..5) {
        let alpha = Rational::new(num.into(), den.into());
        let hof = value(&hoffman_constant(&inst).unwrap());
        let scaled = value(&hoffman_constant(&inst.scaled(&alpha).unwrap()).unwrap());
        prop_assert_eq!(scaled, &hof / &alpha);
        let m = inst.m();
        let order: Vec<usize> = (0..m).map(|i| (i + rot) % m).rev().collect();
        let permuted = inst.permuted(&order).unwrap();
        prop_assert_eq!(value(&hoffman_constant(&permuted).unwrap()), hof);
        let global = minimal_kkt_family(&inst).unwrap();
        let relabeled: Vec<IndexSet> = minimal_kkt_family(&permuted)
            .unwrap()
            .iter()
            .map(|d| IndexSet::new(d.indices().iter().map(|&i| order[i]).collect()))
            .collect();
        let mut relabeled = relabeled;
        relabeled.sort();
        prop_assert_eq!(relabeled.as_slice(), global.members());
    }

    #[test]
    fn segment_properties((inst, from) in instance_with_parameter(), x0 in prop::collection::vec(-2i64..=2, 3), s in prop::collection::vec(0i64..=2, 5)) {
        let x0: Vector = x0.into_iter().take(inst.n()).map(int).collect();
        let s: Vector = s.into_iter().take(inst.m()).map(int).collect();
        let to = domain_point_from(&inst, &x0, &s).unwrap();
        let steps = break_steps(&inst, &from, &to).unwrap();
        let mut reversed: Vec<Rational> = break_steps(&inst, &to, &from).unwrap().into_iter().map(|mu| int(1) - mu).collect();
        reversed.sort();
        prop_assert_eq!(&steps, &reversed);

        let analysis = connecting_subdivision(&inst, &from, &to).unwrap();
        for piece in &analysis.pieces {
            for k in 0..=4 {
                let mu = &piece.start + (&piece.end - &piece.start) * Rational::new(k.into(), 4.into());
                let b = point_on_segment(&from, &to, &mu);
                prop_assert!(optimal_set(&inst, &b).unwrap().same_set(&s_d_set(&inst, &piece.chosen, &b).unwrap()));
            }
        }
        let (start, end) = (minimal_kkt_at(&inst, &from).unwrap(), minimal_kkt_at(&inst, &to).unwrap());
        if start.members() == end.members() && !start.is_empty() {
            for k in 1..=9 {
                let b = point_on_segment(&from, &to, &Rational::new(k.into(), 10.into()));
                let inner = minimal_kkt_at(&inst, &b).unwrap();
                prop_assert_eq!(inner.members(), start.members());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lower_bound_is_sound_and_monotone(inst in instance(), seed in any::<u64>()) {
        let hof = value(&hoffman_constant(&inst).unwrap());
        let few = empirical_hoffman_lower_bound(&inst, &SampleConfig::new(seed, 10)).unwrap();
        let more = empirical_hoffman_lower_bound(&inst, &SampleConfig::new(seed, 30)).unwrap();
        prop_assert!(few.random_best <= more.random_best);
        prop_assert!(few.lower_bound <= more.lower_bound);
        prop_assert!(more.lower_bound <= hof);
        prop_assert_eq!(more, empirical_hoffman_lower_bound(&inst, &SampleConfig::new(seed, 30)).unwrap());
    }
}
