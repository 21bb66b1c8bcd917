use num_bigint::BigInt;
use num_traits::Zero;
use pendulum_topology::complexes::{product_complex, simplex_complex, sphere_complex, subdivided_sphere2};
use pendulum_topology::dynamics::{sample_phase_point, simulate};
use pendulum_topology::homology::{
    euler_characteristic, kunneth, rational_rank, smith_normal_form, HomologyProfile, IntegerMatrix,
};
use pendulum_topology::mechanics::{
    classify_energy, kinetic_energy, momenta_from_velocities, velocities_from_momenta, PendulumParams, RegimeTag, Vec3,
};
use pendulum_topology::sequences::{solve_exact, ExactSequenceSpec, Term};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn params() -> impl Strategy<Value = PendulumParams> {
    (0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0, 0.5f64..20.0)
        .prop_map(|(m1, m2, l1, l2, g)| PendulumParams::new(m1, m2, l1, l2, g).unwrap())
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn free_profile() -> impl Strategy<Value = HomologyProfile> {
    prop::collection::vec(0usize..4, 1..6).prop_map(|b| HomologyProfile::from_betti(&b))
}

proptest! {
    #[test]
    fn smith_form_reconstructs(rows in small_matrix()) {
        let a = IntegerMatrix::from_dense(&rows);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.left.mul(&a).mul(&s.right), s.diagonal());
        for w in s.divisors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(s.divisors.iter().all(|d| d > &BigInt::zero()));
        prop_assert_eq!(s.rank(), rational_rank(&a));
    }

    #[test]
    fn legendre_round_trip(p in params(), v1 in vec3(), v2 in vec3()) {
        let (p1, p2) = momenta_from_velocities(&p, &v1, &v2);
        let (w1, w2) = velocities_from_momenta(&p, &p1, &p2);
        let scale = 1.0 + v1.norm() + v2.norm();
        prop_assert!((w1 - v1).norm() <= 1e-12 * scale, "{:e}", (w1 - v1).norm());
        prop_assert!((w2 - v2).norm() <= 1e-12 * scale, "{:e}", (w2 - v2).norm());
    }

    #[test]
    fn kinetic_energy_is_nonnegative(p in params(), p1 in vec3(), p2 in vec3()) {
        prop_assert!(kinetic_energy(&p, &p1, &p2) >= 0.0);
    }

    #[test]
    fn classification_is_monotone(p in params(), a in -1.5f64..1.5, b in -1.5f64..1.5) {
        prop_assume!(!p.is_degenerate());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let scale = p.energy_scale();
        let r1 = classify_energy(&p, lo * scale).unwrap().tag;
        let r2 = classify_energy(&p, hi * scale).unwrap().tag;
        if let (Some(i), Some(j)) = (r1.band_index(), r2.band_index()) {
            prop_assert!(i <= j, "{r1} at {lo}, {r2} at {hi}");
        }
    }

    #[test]
    fn euler_characteristic_is_multiplicative(x in free_profile(), y in free_profile()) {
        let prod = kunneth(&x, &y).unwrap();
        prop_assert_eq!(euler_characteristic(&prod), euler_characteristic(&x) * euler_characteristic(&y));
    }

    #[test]
    fn solver_recovers_a_hidden_term(ranks in prop::collection::vec(0usize..4, 1..8), hide in 0usize..9) {
        let mut r = vec![0];
        r.extend(ranks);
        r.push(0);
        let dims: Vec<usize> = r.windows(2).map(|w| w[0] + w[1]).collect();
        let hide = hide % dims.len();
        let terms = dims.iter().enumerate()
            .map(|(i, &d)| if i == hide { Term::unknown("X") } else { Term::known(format!("A{i}"), d) })
            .collect();
        let solution = solve_exact(&ExactSequenceSpec::new(terms)).unwrap();
        prop_assert_eq!(solution.dims[hide], Some(dims[hide]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn short_trajectories_stay_on_the_surface(seed in 0u64..1000, band in 0usize..4) {
        let p = PendulumParams::unit();
        let h = [-2.0, 0.0, 2.0, 5.0][band];
        let x = sample_phase_point(&p, h, seed).unwrap();
        let (_, d) = simulate(&p, x, 1e-3, 500).unwrap();
        prop_assert!(d.max_residual <= 1e-9);
        prop_assert!(d.potential_excess <= 1e-6);
        prop_assert!(d.energy_drift <= 1e-4);
        prop_assert_eq!(d.regime, Some(RegimeTag::SURFACES[band]));
    }
}

#[test]
fn boundary_squares_to_zero_on_built_complexes() {
    let s2 = subdivided_sphere2(1);
    let complexes = vec![
        sphere_complex(1),
        sphere_complex(3),
        simplex_complex(4),
        subdivided_sphere2(0),
        s2.clone(),
        product_complex(&sphere_complex(1), &sphere_complex(2)).unwrap(),
        product_complex(&subdivided_sphere2(0), &subdivided_sphere2(0)).unwrap(),
        product_complex(&s2, &s2).unwrap(),
    ];
    for c in complexes {
        c.chain_complex().check().unwrap();
    }
}

#[test]
fn product_euler_characteristic_on_complexes() {
    for a in 1..=3 {
        for b in 1..=3 {
            let x = sphere_complex(a);
            let y = sphere_complex(b);
            let prod = product_complex(&x, &y).unwrap();
            assert_eq!(prod.euler_characteristic(), x.euler_characteristic() * y.euler_characteristic());
        }
    }
}
