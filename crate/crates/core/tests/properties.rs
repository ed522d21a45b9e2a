use holorecon::directions::{
    annulus_counts, annulus_index, build_sigma1, gen_kappa, gen_sigma_c_sequence, gen_theta, satisfies_halving,
};
use holorecon::divided_differences::{delta_closed_form, delta_recursive, lagrange_interpolant};
use holorecon::numerics::{line_derivative_sum, phi_kernel, CatalogFunction, GaussianRational};
use holorecon::{Precision, PrecisionComplex};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> PrecisionComplex {
    PrecisionComplex::from_f64(re, im, Precision::DEFAULT)
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (-4.0..4.0f64, -4.0..4.0f64)
}

/// Distinct nodes on a jittered lattice, so gaps stay above 0.05.
fn nodes(max: usize) -> impl Strategy<Value = Vec<PrecisionComplex>> {
    proptest::sample::subsequence((0..64).collect::<Vec<i32>>(), 1..=max)
        .prop_flat_map(|cells| {
            let n = cells.len();
            (Just(cells), proptest::collection::vec((0.0..0.4f64, 0.0..0.4f64), n))
        })
        .prop_shuffle_nodes()
}

trait ShuffleNodes {
    fn prop_shuffle_nodes(self) -> BoxedStrategy<Vec<PrecisionComplex>>;
}

impl<S: Strategy<Value = (Vec<i32>, Vec<(f64, f64)>)> + 'static> ShuffleNodes for S {
    fn prop_shuffle_nodes(self) -> BoxedStrategy<Vec<PrecisionComplex>> {
        self.prop_map(|(cells, jitter)| {
            cells
                .iter()
                .zip(jitter)
                .map(|(&k, (dx, dy))| c(f64::from(k % 8) * 0.5 - 2.0 + dx, f64::from(k / 8) * 0.5 - 2.0 + dy))
                .collect::<Vec<_>>()
        })
        .prop_shuffle()
        .boxed()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_kernel_is_bounded((x, y) in point(), q in 0u32..12) {
        let v = phi_kernel(&c(x, y), q).abs_f64();
        prop_assert!(v <= 0.5f64.powi(q as i32) * (1.0 + 1e-60));
    }

    #[test]
    fn promotion_preserves_value((x, y) in point()) {
        let z = c(x, y);
        let up = z.with_prec(Precision::DEFAULT.doubled());
        prop_assert_eq!(up.to_f64_pair(), (x, y));
        prop_assert!((&up.with_prec(Precision::DEFAULT) - &z).is_zero());
    }

    #[test]
    fn line_sum_of_exp_linear((x, y) in point(), a in -3i32..=3, b in -3i32..=3, m in 0u32..20) {
        // Σ_{k+l=m} a^k b^l η^k / (k! l!) = (aη + b)^m / m!
        let f = CatalogFunction::exp_linear(GaussianRational::real(a), GaussianRational::real(b));
        let eta = c(x, y);
        let got = line_derivative_sum(&f, &eta, m);
        let mut want = (&(&eta * &c(f64::from(a), 0.0)) + &c(f64::from(b), 0.0)).powu(m);
        for k in 2..=m {
            want = &want / &c(f64::from(k), 0.0);
        }
        let scale = want.abs_f64().max(1e-300);
        prop_assert!((&got - &want).abs_f64() <= 1e-60 * scale.max(1.0));
    }

    #[test]
    fn recursive_and_closed_form_agree(ns in nodes(12), q in 1u32..8) {
        let p = ns.len() - 1;
        let h = |z: &PrecisionComplex| phi_kernel(z, q);
        let a = delta_recursive(h, &ns, p).unwrap();
        let b = delta_closed_form(h, &ns, p).unwrap();
        let scale = a.abs_f64().max(b.abs_f64()).max(1e-300);
        prop_assert!((&a - &b).abs_f64() / scale < 1e-50);
    }

    #[test]
    fn polynomials_are_annihilated(ns in nodes(10), (x, y) in point()) {
        let p = ns.len() - 1;
        let w = c(x, y);
        // degree p - 1 has vanishing Δ_p; z^p has Δ_p = 1
        let low = |z: &PrecisionComplex| &(z * &w) + &z.powu(p.saturating_sub(1) as u32);
        let top = |z: &PrecisionComplex| &z.powu(p as u32) + &w;
        if p >= 2 {
            prop_assert!(delta_closed_form(low, &ns, p).unwrap().abs_f64() < 1e-50);
        }
        if p >= 1 {
            prop_assert!((&delta_closed_form(top, &ns, p).unwrap() - &c(1.0, 0.0)).abs_f64() < 1e-50);
        }
    }

    #[test]
    fn newton_and_lagrange_forms_agree(ns in nodes(10), (x, y) in point(), q in 1u32..5) {
        let h = |z: &PrecisionComplex| phi_kernel(z, q);
        let it = lagrange_interpolant(h, &ns, ns.len()).unwrap();
        let z = c(x, y);
        let a = it.eval_lagrange(&z);
        let b = it.eval_newton(&z);
        prop_assert!((&a - &b).abs_f64() <= 1e-50 * (1.0 + a.abs_f64()));
        for node in &ns {
            prop_assert!((&it.eval_newton(node) - &h(node)).abs_f64() < 1e-50);
        }
    }

    #[test]
    fn sigma1_is_injective(r in 1.0..6.0f64, n in 10usize..300) {
        let s = build_sigma1(&gen_theta(n, Precision::DEFAULT), &gen_kappa(n, Precision::DEFAULT), r, n).unwrap();
        prop_assert!(s.permutation.is_injective());
        prop_assert!(s.l.windows(2).all(|w| w[0] < w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn halving_holds_at_every_prefix(n in 2usize..400) {
        let (seq, _) = gen_sigma_c_sequence(n, Precision::DEFAULT).unwrap();
        let annuli: Vec<u32> = seq.points().iter().map(annulus_index).collect();
        for k in 1..=n {
            prop_assert!(satisfies_halving(&annulus_counts(&annuli[..k])), "prefix {}", k);
        }
    }
}
