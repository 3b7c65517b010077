use cosserat_forms::*;
use proptest::prelude::*;

// Random smooth coefficient: Σ a sin(k·x + φ)
#[derive(Clone, Debug)]
struct Wave {
    a: f64,
    k: [f64; 4],
    phase: f64,
}

fn wave() -> impl Strategy<Value = Wave> {
    (
        -1.0..1.0f64,
        prop::array::uniform4(-2.0..2.0f64),
        0.0..6.3f64,
    )
        .prop_map(|(a, k, phase)| Wave { a, k, phase })
}

fn eval(waves: &[Wave], s: &[Jet; 4]) -> Jet {
    waves.iter().fold(Jet::Zero, |acc, w| {
        let arg = (0..4).fold(Jet::Const(w.phase), |x, v| x + &s[v] * w.k[v]);
        acc + arg.sin() * w.a
    })
}

fn random_form(dom: &JetDomain, p: usize, coeffs: &[Vec<Wave>]) -> Form<Jet> {
    let s = dom.seeds();
    let n = form::binomial(dom.dim, p);
    let c = (0..n).map(|i| eval(&coeffs[i % coeffs.len()], &s)).collect();
    Form::from_components(dom, p, c).unwrap()
}

fn coeff_sets() -> impl Strategy<Value = Vec<Vec<Wave>>> {
    prop::collection::vec(prop::collection::vec(wave(), 1..3), 3)
}

fn point() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0..1.0f64)
}

fn assert_small(f: &Form<Jet>, tol: f64) {
    assert!(f.norm_inf() < tol, "residual {}", f.norm_inf());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dd_is_zero(dim in 2usize..4, p in 0usize..2, pt in point(), c in coeff_sets()) {
        let dom = JetDomain::new(dim, pt, 3);
        let a = random_form(&dom, p, &c);
        assert_small(&a.d().d(), 1e-12);
    }

    #[test]
    fn graded_leibniz(dim in 2usize..4, p in 0usize..2, q in 0usize..2,
                      pt in point(), c1 in coeff_sets(), c2 in coeff_sets()) {
        let dom = JetDomain::new(dim, pt, 2);
        let a = random_form(&dom, p, &c1);
        let b = random_form(&dom, q, &c2);
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = a.wedge(&b).d();
        let rhs = a.d().wedge(&b).add(&a.wedge(&b.d()).scale(sign));
        assert_small(&lhs.sub(&rhs), 1e-10);
    }

    #[test]
    fn interior_is_antiderivation(dim in 2usize..4, p in 1usize..3, q in 0usize..2,
                                  pt in point(), c1 in coeff_sets(), c2 in coeff_sets(),
                                  cx in coeff_sets()) {
        let dom = JetDomain::new(dim, pt, 1);
        let a = random_form(&dom, p.min(dim), &c1);
        let b = random_form(&dom, q, &c2);
        let s = dom.seeds();
        let x = VectorField { c: (0..dim).map(|i| eval(&cx[i], &s)).collect() };
        let p = a.degree();
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = a.wedge(&b).contract(&x);
        let mut rhs = a.contract(&x).wedge(&b);
        if q > 0 {
            rhs = rhs.add(&a.wedge(&b.contract(&x)).scale(sign));
        }
        assert_small(&lhs.sub(&rhs), 1e-10);
    }

    #[test]
    fn cartan_formula(dim in 2usize..4, pt in point(), ce in coeff_sets(), cw in coeff_sets(),
                      cx in coeff_sets()) {
        let dom = JetDomain::new(dim, pt, 3);
        let s = dom.seeds();
        let e = FrameForm::new((0..dim).map(|i| random_form(&dom, 1, &ce[i..])).collect()).unwrap();
        let w = RotForm::new((0..valued::so_dim(dim)).map(|i| random_form(&dom, 1, &cw[i..])).collect()).unwrap();
        let x = VectorField { c: (0..dim).map(|i| eval(&cx[i], &s)).collect() };
        let lhs = e.covariant_lie(&x, &w);
        let rhs = e.covariant_d(&w).contract(&x).add(&e.contract(&x).covariant_d(&w));
        prop_assert!(lhs.sub(&rhs).norm_inf() < 1e-10);
        let om = w.curvature();
        let lhs = om.covariant_lie(&x, &w);
        let rhs = om.covariant_d(&w).contract(&x).add(&om.contract(&x).covariant_d(&w));
        prop_assert!(lhs.sub(&rhs).norm_inf() < 1e-10);
    }

    #[test]
    fn second_bianchi(pt in point(), cw in coeff_sets()) {
        let dom = JetDomain::new(3, pt, 3);
        let w = RotForm::new((0..3).map(|i| random_form(&dom, 1, &cw[i..])).collect()).unwrap();
        prop_assert!(w.curvature().covariant_d(&w).norm_inf() < 1e-10);
    }

    #[test]
    fn first_bianchi(pt in point(), ce in coeff_sets(), cw in coeff_sets()) {
        let dom = JetDomain::new(3, pt, 3);
        let e = FrameForm::new((0..3).map(|i| random_form(&dom, 1, &ce[i..])).collect()).unwrap();
        let w = RotForm::new((0..3).map(|i| random_form(&dom, 1, &cw[i..])).collect()).unwrap();
        let t = e.covariant_d(&w);
        let r = t.covariant_d(&w).sub(&w.curvature().act(&e));
        prop_assert!(r.norm_inf() < 1e-10);
    }

    #[test]
    fn hodge_is_linear_isometry(dim in 2usize..4, p in 0usize..4, pt in point(), c in coeff_sets()) {
        let dom = JetDomain::new(dim, pt, 0);
        let a = random_form(&dom, p.min(dim), &c);
        let inner = a.wedge(&a.star()).components()[0].value();
        let norm: f64 = a.components().iter().map(|f| f.value() * f.value()).sum();
        prop_assert!((inner - norm).abs() < 1e-12);
    }
}
