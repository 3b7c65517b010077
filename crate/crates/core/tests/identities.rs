use cosserat_core::balance::{el_residuals, induced_sources};
use cosserat_core::configurational::*;
use cosserat_core::constitutive::*;
use cosserat_core::scenarios::*;
use cosserat_core::state::bianchi_residuals;
use cosserat_core::MaterialParameters;
use cosserat_forms::VectorField;

fn params() -> MaterialParameters {
    MaterialParameters {
        mu_t: 1.3,
        mu_r: 0.7,
        rho_t: 0.9,
        rho_r: 1.1,
        gamma_t: 0.4,
        gamma_r: 0.6,
        ..Default::default()
    }
}

fn random_states() -> Vec<cosserat_core::CosseratState<cosserat_forms::Jet>> {
    let mut out = vec![];
    for seed in 0..3u64 {
        for dim in [2, 3] {
            let fam = Manufactured::new(seed, dim, false).unwrap();
            out.push(state_at(&fam, [0.31, -0.42, 0.17], 0.23, 4).unwrap());
        }
    }
    out
}

#[test]
fn induced_sources_close_the_balances() {
    let p = params();
    for s in random_states() {
        for dis in [false, true] {
            let src = induced_sources(&s, &p, dis).unwrap();
            let r = el_residuals(&s, &p, &src, dis).unwrap();
            assert!(r.inf("force") < 1e-10 && r.inf("couple") < 1e-10);
        }
    }
}

#[test]
fn bianchi_identities_hold_on_jets() {
    for s in random_states() {
        let b = bianchi_residuals(&s);
        assert_eq!(b.spatial.is_some(), s.dim() == 3);
        assert!(b.dynamic.is_some());
        assert!(b.norms().inf < 1e-10, "{:?}", b.norms());
    }
}

#[test]
fn completed_noether_identity() {
    let p = params();
    for s in random_states() {
        for a in 0..s.dim() {
            let x = VectorField::basis(s.domain(), a);
            let r = noether_translation_residual(&s, &p, &x, SourceConvention::Transposed).unwrap();
            assert!(r.inf("extended.completed") < 1e-9, "{r:?}");
            let bad = noether_translation_residual(&s, &p, &x, SourceConvention::Direct).unwrap();
            assert!(bad.inf("extended.completed") > 1e-4);
        }
    }
}

#[test]
fn phi_expansion_steps() {
    let p = params();
    for s in random_states() {
        let x = VectorField::basis(s.domain(), 0);
        let r = phi_cancellation_check(&s, &p, &x).unwrap();
        for k in ["leibniz", "balance_insertion", "cartan", "bianchi", "final.completed"] {
            assert!(r.inf(k) < 1e-9, "{k}: {r:?}");
        }
    }
}

#[test]
fn rotational_identity() {
    let p = params();
    for s in random_states() {
        let (c, r) = rotational_currents_and_residual(&s, &p, 0, 1, SourceConvention::Transposed).unwrap();
        assert!(r.inf("extended.completed") < 1e-9, "{r:?}");
        let (c2, _) = rotational_currents_and_residual(&s, &p, 1, 0, SourceConvention::Transposed).unwrap();
        for (u, v) in c.source.components().iter().zip(c2.source.components()) {
            assert_eq!(u.value(), -v.value());
        }
    }
}

#[test]
fn energy_balance_closes() {
    let p = params();
    for s in random_states() {
        let src = induced_sources(&s, &p, true).unwrap();
        let pe = external_power(&s, &src);
        let r = energy_balance_exact(&s, &p, &pe).unwrap();
        assert!(r.norm_inf() < 1e-10, "{}", r.norm_inf());
    }
}
