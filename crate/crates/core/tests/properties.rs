use cosserat_core::balance::*;
use cosserat_core::configurational::*;
use cosserat_core::constitutive::*;
use cosserat_core::defect::*;
use cosserat_core::scenarios::*;
use cosserat_core::state::*;
use cosserat_core::{CosseratState, MaterialParameters};
use cosserat_forms::{Form, FrameForm, Jet, JetDomain, RotForm, VectorField};
use proptest::prelude::*;
use std::f64::consts::PI;

fn params(v: [f64; 6]) -> MaterialParameters {
    MaterialParameters {
        mu_t: v[0],
        mu_r: v[1],
        rho_t: v[2],
        rho_r: v[3],
        gamma_t: v[4],
        gamma_r: v[5],
        ..Default::default()
    }
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-0.5..0.5f64)
}

fn random_state(seed: u64, dim: usize, x: [f64; 3], t: f64, order: usize) -> CosseratState<Jet> {
    state_at(&Manufactured::new(seed, dim, false).unwrap(), x, t, order).unwrap()
}

fn top(f: &Form<Jet>) -> f64 {
    let n = f.dim();
    f.component(((1u16 << n) - 1) as u8).value()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dissipation_is_non_negative(
        seed in 0u64..1000, dim in 2usize..4, x in point(), t in 0.0..1.0f64,
        g in prop::array::uniform2(0.0..5.0f64),
    ) {
        let s = random_state(seed, dim, x, t, 1);
        let p = params([1.0, 1.0, 1.0, 1.0, g[0], g[1]]);
        let r = dissipation_density(&s, &p).unwrap();
        prop_assert!(r.components()[0].value() >= 0.0);
    }

    #[test]
    fn constitutive_maps_are_linear(
        seed in 0u64..1000, x in point(), lambda in -3.0..3.0f64,
        v in prop::array::uniform6(0.1..3.0f64),
    ) {
        let p = params(v);
        let base = state_at(&Manufactured::new(seed, 2, false).unwrap(), x, 0.3, 2).unwrap();
        let dom = base.domain().clone();
        let id = FrameForm::<Jet>::identity(&dom);
        // flat connection: T linear in the coframe perturbation
        let f = base.coframe().sub(&id);
        let build = |l: f64, w: &RotForm<Jet>| {
            CosseratState::new(
                0.3,
                id.add(&f.scale(l)),
                w.clone(),
                base.coframe_rate().scale(l),
                base.connection_rate().scale(l),
            )
            .unwrap()
        };
        let zero = RotForm::zero(&dom, 1);
        let (s1, sl) = (build(1.0, &zero), build(lambda, &zero));
        let (h1, _) = excitations(&s1, &p);
        let (hl, _) = excitations(&sl, &p);
        let (p1, q1) = momenta(&s1, &p);
        let (pl, ql) = momenta(&sl, &p);
        prop_assert!(hl.sub(&h1.scale(lambda)).norm_inf() < 1e-12);
        prop_assert!(pl.sub(&p1.scale(lambda)).norm_inf() < 1e-12);
        prop_assert!(ql.sub(&q1.scale(lambda)).norm_inf() < 1e-12);
        // unit coframe, abelian 2D connection: T and Ω linear in ω
        let w = base.connection();
        let mk = |l: f64| CosseratState::new(0.3, id.clone(), w.scale(l), FrameForm::zero(&dom, 1), RotForm::zero(&dom, 1)).unwrap();
        let (h1, o1) = excitations(&mk(1.0), &p);
        let (hl, ol) = excitations(&mk(lambda), &p);
        prop_assert!(hl.sub(&h1.scale(lambda)).norm_inf() < 1e-12);
        prop_assert!(ol.sub(&o1.scale(lambda)).norm_inf() < 1e-12);
    }

    #[test]
    fn induced_sources_close(seed in 0u64..1000, dim in 2usize..4, x in point(), diss in any::<bool>()) {
        let s = random_state(seed, dim, x, 0.2, 3);
        let p = params([1.3, 0.7, 1.1, 0.9, 0.4, 0.6]);
        let src = induced_sources(&s, &p, diss).unwrap();
        let r = el_residuals(&s, &p, &src, diss).unwrap();
        prop_assert!(r.inf("force") < 1e-10 && r.inf("couple") < 1e-10);
    }

    #[test]
    fn static_case_matches_full_when_at_rest(seed in 0u64..1000, dim in 2usize..4, x in point()) {
        let mut s = random_state(seed, dim, x, 0.2, 3);
        let dom = s.domain().clone();
        s.set_rates(FrameForm::zero(&dom, 1), RotForm::zero(&dom, 1)).unwrap();
        let p = MaterialParameters::default();
        let src = induced_sources(&s, &p, false).unwrap();
        let src = SourceFields { sigma: src.sigma.scale(0.5), couple: src.couple };
        let full = el_residuals(&s, &p, &src, false).unwrap();
        let stat = special_case(&s, &p, &src, SpecialCase::Static).unwrap();
        prop_assert_eq!(full.inf("force"), stat.inf("force"));
        prop_assert_eq!(full.inf("couple"), stat.inf("couple"));
    }

    #[test]
    fn bianchi_identities(seed in 0u64..1000, dim in 2usize..4, x in point()) {
        let s = random_state(seed, dim, x, 0.1, 3);
        let r = bianchi_residuals(&s).report(1e-10);
        prop_assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn completed_noether_identity(seed in 0u64..1000, dim in 2usize..4, x in point(), axis in 0usize..3) {
        let s = random_state(seed, dim, x, 0.1, 4);
        let a = axis % dim;
        let p = params([1.3, 0.7, 1.1, 0.9, 0.4, 0.6]);
        let r = noether_translation_residual(&s, &p, &VectorField::basis(s.domain(), a), SourceConvention::Transposed).unwrap();
        prop_assert!(r.inf("extended.completed") < 1e-8);
        let c = phi_cancellation_check(&s, &p, &VectorField::basis(s.domain(), a)).unwrap();
        prop_assert!(c.inf("final.completed") < 1e-8);
    }

    #[test]
    fn rotational_source_is_antisymmetric(seed in 0u64..1000, x in point(), a in 0usize..3, b in 0usize..3) {
        prop_assume!(a != b);
        let s = random_state(seed, 3, x, 0.1, 3);
        let p = MaterialParameters::default();
        let (ab, _) = rotational_currents_and_residual(&s, &p, a, b, SourceConvention::Transposed).unwrap();
        let (ba, _) = rotational_currents_and_residual(&s, &p, b, a, SourceConvention::Transposed).unwrap();
        for (u, v) in ab.source.components().iter().zip(ba.source.components()) {
            prop_assert_eq!(u.value(), -v.value());
        }
    }

    #[test]
    fn transport_matches_recompute(seed in 0u64..1000, dim in 2usize..4, x in point()) {
        let fam = Manufactured::new(seed, dim, false).unwrap();
        let s = state_at(&fam, x, 0.0, 2).unwrap();
        let tr = integrate_transport(&s, |t| rates_at(&fam, x, t, 2), 1e-2, 20, Default::default()).unwrap();
        prop_assert!(tr.max_divergence < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// With P_ext = 0 on a periodic domain, d/dt ∫E = −∫R: strictly
    /// negative when damped, zero for any inertia when undamped.
    #[test]
    fn damping_is_not_a_coefficient_change(
        amp in 0.05..0.3f64, rho in 0.5..3.0f64, gamma in 0.1..1.0f64, t in 0.0..1.0f64,
    ) {
        let rate = |p: &MaterialParameters| {
            let fam = Wave1d::new(p, amp, 1).unwrap();
            let n = 64;
            let mut de = 0.0;
            let mut r = 0.0;
            let mut ext = 0.0;
            for i in 0..n {
                let s = state_at(&fam, [0.0, i as f64 / n as f64, 0.0], t, 2).unwrap();
                de += top(&energy_density(&s, p).time_derivative().unwrap());
                r += dissipation_density(&s, p).unwrap().components()[0].value();
                ext += top(&external_power(&s, &induced_sources(&s, p, true).unwrap()));
            }
            (de / n as f64, r / n as f64, ext / n as f64)
        };
        let damped = params([1.0, 1.0, rho, 1.0, gamma, 0.0]);
        let (de, r, ext) = rate(&damped);
        prop_assert!(ext.abs() < 1e-12);
        prop_assert!(r > 0.0);
        prop_assert!((de + r).abs() < 1e-10 * (1.0 + r));
        prop_assert!(de < 0.0);
        for scale in [0.5, 2.0] {
            let undamped = params([1.0, 1.0, rho * scale, 1.0 * scale, 0.0, 0.0]);
            let (de, r, _) = rate(&undamped);
            prop_assert_eq!(r, 0.0);
            prop_assert!(de.abs() < 1e-10);
        }
    }
}

type Couple = [[[f64; 3]; 3]; 3];

fn antisym_couple() -> impl Strategy<Value = Couple> {
    prop::array::uniform9(-2.0..2.0f64).prop_map(|v| {
        let mut m = [[[0.0; 3]; 3]; 3];
        for a in 0..3 {
            m[0][1][a] = v[a];
            m[1][0][a] = -v[a];
            m[0][2][a] = v[3 + a];
            m[2][0][a] = -v[3 + a];
            m[1][2][a] = v[6 + a];
            m[2][1][a] = -v[6 + a];
        }
        m
    })
}

fn antisym3() -> impl Strategy<Value = [[f64; 3]; 3]> {
    prop::array::uniform3(-2.0..2.0f64).prop_map(|k| [[0.0, k[0], k[1]], [-k[0], 0.0, k[2]], [-k[1], -k[2], 0.0]])
}

fn mat3() -> impl Strategy<Value = [[f64; 3]; 3]> {
    prop::array::uniform3(prop::array::uniform3(-2.0..2.0f64))
}

fn vec3() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-2.0..2.0f64)
}

/// Oracle: the Frank term summed over ordered pairs B < C only, using
/// the antisymmetry of both κ and M in their pair indices; the moment as
/// the lever-arm cross product of that force.
fn oracle(b: [f64; 3], k: [[f64; 3]; 3], x: [f64; 3], s: &[[f64; 3]; 3], m: &Couple) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut f = [0.0; 3];
    for a in 0..3 {
        f[a] = b[0] * s[0][a] + b[1] * s[1][a] + b[2] * s[2][a];
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            f[a] += 2.0 * k[p][q] * m[q][p][a];
        }
    }
    let mut mom = [[0.0; 3]; 3];
    for c in 0..3 {
        for d in 0..3 {
            mom[c][d] = x[c] * f[d] - x[d] * f[c];
        }
    }
    (f, mom)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn line_defect_matches_oracle(
        b in vec3(), k in antisym3(), x in vec3(), s in mat3(), m in antisym_couple(),
    ) {
        let d = LineDefect::new(b, k, [0.0; 3], [0.0, 0.0, 1.0]).unwrap();
        let (f0, m0) = oracle(b, k, x, &s, &m);
        let f = line_defect_force(&d, &s, &m);
        let (mom, ax) = line_defect_moment(&d, x, &s, &m);
        for a in 0..3 {
            prop_assert!((f[a] - f0[a]).abs() < 1e-12);
            for c in 0..3 {
                prop_assert!((mom[a][c] - m0[a][c]).abs() < 1e-12);
            }
        }
        prop_assert!((ax[2] - mom[0][1]).abs() < 1e-15);
    }

    #[test]
    fn peach_koehler_ignores_couple(b in vec3(), s in mat3(), m1 in antisym_couple(), m2 in antisym_couple(), x in vec3()) {
        let d = LineDefect::dislocation(b);
        prop_assert_eq!(line_defect_force(&d, &s, &m1), line_defect_force(&d, &s, &m2));
        prop_assert_eq!(line_defect_moment(&d, x, &s, &m1), line_defect_moment(&d, x, &s, &m2));
    }

    #[test]
    fn line_defect_is_linear(
        b1 in vec3(), b2 in vec3(), k1 in antisym3(), k2 in antisym3(),
        s1 in mat3(), s2 in mat3(), m1 in antisym_couple(), m2 in antisym_couple(), x in vec3(),
    ) {
        let add = |a: [f64; 3], b: [f64; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        let addm = |a: [[f64; 3]; 3], b: [[f64; 3]; 3]| [add(a[0], b[0]), add(a[1], b[1]), add(a[2], b[2])];
        let d = |b, k| LineDefect::new(b, k, [0.0; 3], [0.0, 0.0, 1.0]).unwrap();
        // in (b, κ)
        let lhs = line_defect_force(&d(add(b1, b2), addm(k1, k2)), &s1, &m1);
        let r1 = line_defect_force(&d(b1, k1), &s1, &m1);
        let r2 = line_defect_force(&d(b2, k2), &s1, &m1);
        for a in 0..3 {
            prop_assert!((lhs[a] - r1[a] - r2[a]).abs() < 1e-12);
        }
        // in (Σ, M)
        let mut msum = m1;
        for c in 0..3 {
            msum[c] = addm(m1[c], m2[c]);
        }
        let (lhs, _) = line_defect_moment(&d(b1, k1), x, &addm(s1, s2), &msum);
        let (r1, _) = line_defect_moment(&d(b1, k1), x, &s1, &m1);
        let (r2, _) = line_defect_moment(&d(b1, k1), x, &s2, &m2);
        for c in 0..3 {
            for e in 0..3 {
                prop_assert!((lhs[c][e] - r1[c][e] - r2[c][e]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn configurational_force_symmetries(s in 0.0..0.5f64, t in 0.0..2.0f64) {
        let p = MaterialParameters::default();
        let f = |y: f64, t: f64| {
            let st = state_at(&Example1, [0.3, y, 0.0], t, 2).unwrap();
            let src = example1_stated_sources(st.domain(), &p);
            top(&translational_source(&st, &src, &VectorField::basis(st.domain(), 0), SourceConvention::Transposed))
        };
        let closed = |y: f64, t: f64| 0.5 * PI * (-2.0 * t).exp() * (2.0 * PI * y).sin();
        prop_assert!((closed(0.5 + s, t) + closed(0.5 - s, t)).abs() < 1e-15);
        prop_assert!((f(0.5 + s, t) + f(0.5 - s, t)).abs() < 1e-8);
        let y = 0.5 - s;
        if closed(y, 0.0).abs() > 1e-3 {
            prop_assert!((f(y, t) / f(y, 0.0) - (-2.0 * t).exp()).abs() < 1e-10);
        }
        for y in [0.0, 0.5, 1.0] {
            prop_assert!(f(y, t).abs() < 1e-12);
        }
    }
}

#[test]
fn curvature_changes_sign_once() {
    let p = MaterialParameters::default();
    for t in [0.0, 0.5, 2.0] {
        let signs: Vec<bool> = (1..400)
            .map(|i| {
                let s = state_at(&Example1, [0.0, i as f64 / 400.0 + 0.0011, 0.0], t, 2).unwrap();
                scalar_reduction(&s, &p).unwrap().1.value() > 0.0
            })
            .collect();
        assert_eq!(signs.windows(2).filter(|w| w[0] != w[1]).count(), 1);
    }
}

#[test]
fn compatible_limit_silences_excitations() {
    // rigid rotation of the frame with a compensating flat connection
    let dom = JetDomain::new(2, [0.2, 0.1, 0.0, 0.0], 3);
    let th = Jet::Const(0.7);
    let (c, s) = (th.cos(), th.sin());
    let e = FrameForm::new(vec![
        Form::one_form(&dom, 0, c.clone()).add(&Form::one_form(&dom, 1, -&s)),
        Form::one_form(&dom, 0, s).add(&Form::one_form(&dom, 1, c)),
    ])
    .unwrap();
    let st = CosseratState::new(0.0, e, RotForm::zero(&dom, 1), FrameForm::zero(&dom, 1), RotForm::zero(&dom, 1)).unwrap();
    assert!(st.is_compatible(1e-12));
    let (h, o) = excitations(&st, &MaterialParameters::default());
    assert!(h.is_zero() && o.is_zero());
    let src = induced_sources(&st, &MaterialParameters::default(), false).unwrap();
    assert!(src.sigma.is_zero() && src.couple.is_zero());
}
