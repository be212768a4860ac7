use std::f64::consts::PI;

use gaussian_riccati::closed_form::{general_solution, particular_solutions, FamilyParameter};
use gaussian_riccati::dynamics::{
    classical_rhs, ermakov_from_riccati, ermakov_rhs, lambda_evolve, lambda_initial, riccati_rhs,
};
use gaussian_riccati::ladder::coherent_state;
use gaussian_riccati::observables::invariant_series;
use gaussian_riccati::quadrature::{state_norm_quadrature, trapezoid_complex, uniform_grid};
use gaussian_riccati::transforms::{
    ck_to_nl_alpha, ck_to_nl_riccati, exponent_map_check, expanding_to_nl_riccati, expanding_to_physical,
    nl_to_ck_alpha, nl_to_ck_riccati, nl_to_expanding_riccati, physical_to_expanding,
};
use gaussian_riccati::*;
use proptest::prelude::*;

fn consts() -> impl Strategy<Value = PhysicalConstants> {
    (0.3f64..3.0, 0.3f64..3.0).prop_map(|(m, h)| PhysicalConstants::new(m, h).unwrap())
}

fn width() -> impl Strategy<Value = RiccatiVar> {
    (-2.0f64..2.0, -2.3f64..2.3).prop_map(|(re, l)| RiccatiVar::new(re, l.exp()))
}

fn classical() -> impl Strategy<Value = ClassicalState> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(e, v)| ClassicalState::new(e, v))
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Conservative),
        Just(Family::CaldirolaKanai),
        Just(Family::Expanding),
        Just(Family::LogNlse)
    ]
}

fn model(fam: Family, c: PhysicalConstants, gamma: f64, omega: f64) -> Model {
    let g = if fam == Family::Conservative { 0.0 } else { gamma };
    Model::new(fam, c, g, FrequencyProfile::constant(omega).unwrap()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn state(consts: PhysicalConstants, c: RiccatiVar, coeffs: Vec<(f64, f64)>, x: f64, p: f64) -> PolyGaussianState {
    let coeffs = coeffs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
    PolyGaussianState::new(consts, coeffs, x, p, c, Complex64::new(0.0, 0.3)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sr_equality_holds(c in consts(), re in -1e3f64..1e3, l in -6.9f64..6.9) {
        let u = uncertainties(c, RiccatiVar::new(re, l.exp())).unwrap();
        prop_assert!(u.sr_residual(c.hbar()) < 1e-12);
        prop_assert!(u.u_product >= 0.25 * c.hbar() * c.hbar() * (1.0 - 1e-15));
    }

    #[test]
    fn riccati_and_ermakov_pictures_agree(
        fam in family(), k in consts(), gamma in 0.0f64..0.5, omega in 0.3f64..2.0,
        c0 in width(), cls in classical(), t in 0.0f64..3.0,
    ) {
        let m = model(fam, k, gamma, omega);
        let e = ermakov_from_riccati(&m, t, c0).unwrap();
        let back = gaussian_riccati::dynamics::riccati_from_ermakov(&m, t, e).unwrap();
        prop_assert!((back.0 - c0.0).norm() <= 1e-12 * c0.0.norm().max(1.0));
        let i_c = invariant_from_riccati(&m, t, cls, c0).unwrap().value;
        let i_e = ermakov_invariant(&m, t, cls, e).unwrap().value;
        prop_assert!(rel(i_c, i_e) < 1e-12);
    }

    #[test]
    fn integrated_pictures_track_each_other(
        fam in family(), gamma in 0.0f64..0.4, omega in 0.5f64..2.0, c0 in width(), cls in classical(),
    ) {
        let m = model(fam, PhysicalConstants::natural(), gamma, omega);
        let opts = IntegratorOptions { stride: 50, ..Default::default() };
        let run = integrate_with(&m, SystemState::new(0.0, cls, c0, 0.0), 5.0, 1e-3, &opts).unwrap();
        let e0 = ermakov_from_riccati(&m, 0.0, c0).unwrap();
        let er = integrate_ermakov(&m, 0.0, cls, e0, 5.0, 1e-3, &opts).unwrap();
        prop_assert_eq!(run.len(), er.times.len());
        let states = run.states().iter().zip(run.error_bounds());
        for ((s, b_r), (e, b_e)) in states.zip(er.ermakov.iter().zip(&er.error_bounds)) {
            prop_assert!(s.riccati.im() > 0.0);
            let alpha = s.alpha().unwrap();
            // an error δ in imag(c) moves α by about ½ imag(c)^{-3/2} δ
            let bound = 10.0 * (b_e + 0.5 * s.riccati.im().powf(-1.5) * b_r);
            prop_assert!((alpha - e.alpha).abs() <= bound, "t={} {} vs {} bound {}", s.t, alpha, e.alpha, bound);
        }
        let phases: Vec<f64> = run.states().iter().map(|s| s.phase).collect();
        prop_assert!(phases.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn stationary_width_is_a_fixed_point(omega in 0.2f64..3.0, cls in classical()) {
        let m = model(Family::Conservative, PhysicalConstants::natural(), 0.0, omega);
        let c0 = RiccatiVar::new(0.0, omega);
        let run = integrate(&m, SystemState::new(0.0, cls, c0, 0.0), 5.0, 1e-3).unwrap();
        for s in run.states() {
            prop_assert!((s.riccati.0 - c0.0).norm() < 1e-12 * omega);
        }
    }

    #[test]
    fn particular_solutions_are_stationary(
        fam in prop_oneof![Just(Family::Conservative), Just(Family::LogNlse), Just(Family::Expanding)],
        g in 0.0f64..2.0, omega in 0.0f64..3.0,
    ) {
        let m = model(fam, PhysicalConstants::natural(), g, omega);
        for p in particular_solutions(&m).unwrap() {
            prop_assert!(riccati_rhs(&m, 0.0, RiccatiVar(p.c_tilde)).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn expanding_and_log_nlse_share_the_ermakov_equation(
        g in 0.0f64..1.0, omega in 0.2f64..3.0, a in 0.1f64..3.0, ad in -2.0f64..2.0, t in 0.0f64..10.0,
    ) {
        let e = ErmakovState::new(a, ad).unwrap();
        let nl = model(Family::LogNlse, PhysicalConstants::natural(), g, omega);
        let ex = model(Family::Expanding, PhysicalConstants::natural(), g, omega);
        prop_assert_eq!(ermakov_rhs(&nl, t, e).unwrap(), ermakov_rhs(&ex, t, e).unwrap());
    }

    #[test]
    fn zero_friction_reduces_every_family(
        fam in family(), omega in 0.1f64..3.0, c in width(), cls in classical(), t in 0.0f64..10.0,
    ) {
        let cons = model(Family::Conservative, PhysicalConstants::natural(), 0.0, omega);
        let m = model(fam, PhysicalConstants::natural(), 0.0, omega);
        prop_assert_eq!(riccati_rhs(&m, t, c).unwrap(), riccati_rhs(&cons, t, c).unwrap());
        prop_assert_eq!(classical_rhs(&m, t, cls).unwrap(), classical_rhs(&cons, t, cls).unwrap());
        let e = ErmakovState::new(c.alpha().unwrap(), 0.3).unwrap();
        prop_assert_eq!(ermakov_rhs(&m, t, e).unwrap(), ermakov_rhs(&cons, t, e).unwrap());
    }

    #[test]
    fn maps_round_trip(c in width(), cls in classical(), t in 0.0f64..10.0, g in 0.0f64..1.0, ad in -2.0f64..2.0) {
        let back = ck_to_nl_riccati(nl_to_ck_riccati(c, t, g).unwrap(), t, g).unwrap();
        prop_assert!((back.0 - c.0).norm() <= 1e-12 * c.0.norm());
        let back = expanding_to_nl_riccati(nl_to_expanding_riccati(c, g).unwrap(), g).unwrap();
        prop_assert!((back.0 - c.0).norm() <= 1e-12 * c.0.norm().max(g));
        let e = ErmakovState::new(c.alpha().unwrap(), ad).unwrap();
        let back = ck_to_nl_alpha(nl_to_ck_alpha(e, t, g).unwrap(), t, g).unwrap();
        prop_assert!(rel(back.alpha, e.alpha) < 1e-12);
        prop_assert!((back.alpha_dot - e.alpha_dot).abs() <= 1e-12 * (1.0 + e.alpha_dot.abs() + e.alpha));
        let back = expanding_to_physical(physical_to_expanding(cls, t, g), t, g).unwrap();
        prop_assert!((back.eta - cls.eta).abs() <= 1e-12 * (1.0 + cls.eta.abs()));
        prop_assert!((back.eta_dot - cls.eta_dot).abs() <= 1e-11 * (1.0 + cls.eta_dot.abs() + cls.eta.abs()));
    }

    #[test]
    fn invariants_agree_across_representations(
        k in consts(), c in width(), cls in classical(), t in 0.0f64..5.0, g in 0.01f64..1.0, omega in 0.5f64..2.0,
    ) {
        let nl = model(Family::LogNlse, k, g, omega);
        let ck = nl.with_family(Family::CaldirolaKanai).unwrap();
        let ex = nl.with_family(Family::Expanding).unwrap();
        let i_nl = invariant_from_riccati(&nl, t, cls, c).unwrap().value;
        let c_ck = nl_to_ck_riccati(c, t, g).unwrap().into_value();
        let i_ck = invariant_from_riccati(&ck, t, cls, c_ck).unwrap().value;
        let q = physical_to_expanding(cls, t, g).into_value();
        let c_ex = nl_to_expanding_riccati(c, g).unwrap().into_value();
        let i_ex = invariant_from_riccati(&ex, t, q, c_ex).unwrap().value;
        prop_assert!(rel(i_nl, i_ck) < 1e-10);
        prop_assert!(rel(i_nl, i_ex) < 1e-10);
    }

    #[test]
    fn general_solution_solves_riccati(
        fam in prop_oneof![Just(Family::Conservative), Just(Family::LogNlse), Just(Family::Expanding)],
        g in 0.0f64..1.0, omega in 0.0f64..2.0, wr in -2.0f64..2.0, wi in -2.0f64..2.0, t in 0.1f64..4.0,
    ) {
        let m = model(fam, PhysicalConstants::natural(), g, omega);
        let w0 = FamilyParameter::Finite(Complex64::new(wr, wi));
        for p in particular_solutions(&m).unwrap() {
            let h = 1e-5;
            let (Ok(a), Ok(b), Ok(c)) =
                (general_solution(&p, w0, t - h), general_solution(&p, w0, t + h), general_solution(&p, w0, t))
            else { continue };
            if c.0.norm() > 1e3 { continue; }
            let fd = (b.0 - a.0) / (2.0 * h);
            let rhs = -(if fam == Family::LogNlse { g } else { 0.0 }) * c.0 - c.0 * c.0
                - m.effective_omega_sq(omega);
            prop_assert!((fd - rhs).norm() < 1e-5 * (1.0 + c.0.norm_sqr()), "{} vs {}", fd, rhs);
        }
    }

    #[test]
    fn linearization_matches_riccati(
        omega in 0.3f64..2.0, re in -1.0f64..1.0, im in 0.3f64..3.0, phase in 0.0f64..PI,
    ) {
        let c0 = RiccatiVar::new(re, im);
        let m = model(Family::Conservative, PhysicalConstants::natural(), 0.0, omega);
        let (l0, ld0) = lambda_initial(c0, phase).unwrap();
        let lam = lambda_evolve(&m, 0.0, l0, ld0, 4.0, 1e-3).unwrap();
        let opts = IntegratorOptions { stride: 1, ..Default::default() };
        let run = integrate_with(&m, SystemState::new(0.0, ClassicalState::default(), c0, phase), 4.0, 1e-3, &opts).unwrap();
        let from_lambda = lam.riccati();
        let moduli = lam.modulus();
        let phases = lam.unwrapped_phase();
        for (k, s) in run.states().iter().enumerate().step_by(100) {
            prop_assert!((from_lambda[k].0 - s.riccati.0).norm() < 1e-7 * (1.0 + s.riccati.0.norm()));
            prop_assert!(rel(moduli[k], s.alpha().unwrap()) < 1e-7);
            prop_assert!((phases[k] - s.phase).abs() < 1e-7 * (1.0 + s.phase.abs()));
        }
    }

    #[test]
    fn z_modulus_is_invariant(
        fam in family(), k in consts(), g in 0.0f64..1.0, omega in 0.2f64..3.0, c in width(), cls in classical(),
        t in 0.0f64..5.0,
    ) {
        let m = model(fam, k, g, omega);
        let z = z_eigenvalue(&m, cls, c, t, ZLevel::Invariant).unwrap();
        let i = invariant_from_riccati(&m, t, cls, c).unwrap().value;
        prop_assert!(rel(z.norm_sqr(), k.mass() / k.hbar() * i) < 1e-12);
    }

    #[test]
    fn commutator_is_identity(
        k in consts(), c in width(), coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..9),
        x in -1.0f64..1.0, p in -1.0f64..1.0,
    ) {
        let s = state(k, c, coeffs, x, p);
        let ops = LadderOperators::new(k, c).unwrap();
        let aad = ops.annihilate(&ops.create(&s).unwrap()).unwrap();
        let ada = ops.create(&ops.annihilate(&s).unwrap()).unwrap();
        prop_assert!(aad.sub(&ada).unwrap().coefficient_distance(&s).unwrap() < 1e-10);
    }

    #[test]
    fn coherent_states_are_eigenstates(k in consts(), c in width(), cls in classical(), t in 0.0f64..5.0) {
        let m = Model::conservative(k, FrequencyProfile::constant(1.0).unwrap()).unwrap();
        let z = z_eigenvalue(&m, cls, c, t, ZLevel::Physical).unwrap();
        let psi = coherent_state(k, z, c, t).unwrap();
        prop_assert!((psi.x_center() - cls.eta).abs() < 1e-12 * (1.0 + cls.eta.abs()));
        prop_assert!((psi.p_center() - k.mass() * cls.eta_dot).abs() < 1e-11 * (1.0 + cls.eta_dot.abs()));
        let a = LadderOperators::new(k, c).unwrap().annihilate(&psi).unwrap();
        prop_assert!(a.coefficient_distance(&psi.scale(z.z)).unwrap() < 1e-10);
        prop_assert!((state_norm_quadrature(&psi, 64).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inner_product_matches_quadrature(
        k in consts(), c1 in width(), c2 in width(),
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
        x1 in -0.5f64..0.5, x2 in -0.5f64..0.5, p1 in -1.0f64..1.0, p2 in -1.0f64..1.0,
    ) {
        let s1 = state(k, c1, a, x1, p1);
        let s2 = state(k, c2, b, x2, p2);
        let exact = inner_product(&s1, &s2).unwrap();
        // the product envelope has precision m·(imag c1 + imag c2)/ħ
        let sigma = (k.hbar() / (k.mass() * (c1.im() + c2.im()))).sqrt();
        let xs = uniform_grid(0.5 * (x1 + x2), 14.0 * sigma + 1.0, 20001);
        let ys: Vec<Complex64> = xs.iter().map(|&x| s1.evaluate(x).conj() * s2.evaluate(x)).collect();
        let quad = trapezoid_complex(&xs, &ys).unwrap();
        let scale = s1.norm_sqr().unwrap().sqrt() * s2.norm_sqr().unwrap().sqrt();
        prop_assert!((exact - quad).norm() <= 1e-9 * scale, "{} vs {}", exact, quad);
    }

    #[test]
    fn exponent_map_is_consistent(k in consts(), c in width(), zr in -2.0f64..2.0, zi in -2.0f64..2.0, t in 0.0f64..5.0, g in 0.0f64..1.0) {
        let s = coherent_state(k, Eigenvalue::new(Complex64::new(zr, zi)), c, 0.0).unwrap();
        prop_assert!(exponent_map_check(&s, t, g).unwrap() < 1e-12);
    }

    #[test]
    fn integration_is_deterministic(fam in family(), g in 0.0f64..0.5, c0 in width(), cls in classical()) {
        let m = model(fam, PhysicalConstants::natural(), g, 1.0);
        let init = SystemState::new(0.0, cls, c0, 0.0);
        let a = integrate(&m, init, 2.0, 1e-3).unwrap();
        let b = integrate(&m, init, 2.0, 1e-3).unwrap();
        prop_assert_eq!(a.states(), b.states());
        prop_assert_eq!(invariant_series(&a).unwrap(), invariant_series(&b).unwrap());
    }
}
