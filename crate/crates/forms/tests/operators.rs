use cosserat_forms::field::Field;
use cosserat_forms::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn dom2(y: f64, t: f64) -> JetDomain {
    JetDomain::new(2, [0.3, y, 0.0, t], 4)
}

fn a_jet(s: &[Jet; 4]) -> Jet {
    (-&s[3]).exp() * (&s[1] * PI).sin()
}

#[test]
fn wedge_basis_and_square() {
    let d = dom2(0.2, 0.1);
    let dx = Form::<Jet>::dx(&d, 0);
    let dy = Form::<Jet>::dx(&d, 1);
    assert_eq!(dx.wedge(&dy).components()[0].value(), 1.0);
    assert_eq!(dy.wedge(&dx).components()[0].value(), -1.0);
    let a = Form::one_form(&d, 0, Jet::Const(2.5));
    assert!(a.wedge(&dx).is_zero());
}

#[test]
fn connection_acting_on_coframe() {
    // ω = a dx, e² = dy → ω∧e² = a dx∧dy
    let d = dom2(0.25, 0.5);
    let s = d.seeds();
    let w = Form::one_form(&d, 0, a_jet(&s));
    let prod = w.wedge(&Form::dx(&d, 1));
    let expect = (-0.5f64).exp() * (PI / 4.0).sin();
    assert!((prod.components()[0].value() - expect).abs() < 1e-15);
}

#[test]
fn exterior_derivative_of_connection() {
    for &(y, t) in &[(0.1, 0.0), (0.37, 0.4), (0.8, 1.3)] {
        let d = dom2(y, t);
        let s = d.seeds();
        let w = Form::one_form(&d, 0, a_jet(&s));
        let dw = w.d();
        let expect = -PI * (-t as f64).exp() * (PI * y).cos();
        assert!((dw.components()[0].value() - expect).abs() < 1e-14);
    }
}

#[test]
fn hodge_of_top_form() {
    let d = dom2(0.25, 0.5);
    let s = d.seeds();
    let f = Form::top(&d, a_jet(&s));
    let st = f.star();
    assert_eq!(st.degree(), 0);
    assert!((st.components()[0].value() - a_jet(&s).value()).abs() < 1e-15);
}

#[test]
fn hodge_involution_on_3d_basis() {
    let d = JetDomain::new(3, [0.0; 4], 1);
    for p in 0..=3 {
        for (i, _) in form::basis(3, p).iter().enumerate() {
            let mut c = vec![Jet::Zero; form::binomial(3, p)];
            c[i] = Jet::Const(1.0);
            let f = Form::from_components(&d, p, c).unwrap();
            let ss = f.star().star();
            let sign = if (p * (3 - p)) % 2 == 0 { 1.0 } else { -1.0 };
            for (a, b) in ss.components().iter().zip(f.components()) {
                assert_eq!(a.value(), sign * b.value());
            }
        }
    }
    // and in 2D, ∗∗ = −1 on 1-forms
    let d2 = dom2(0.0, 0.0);
    let dx = Form::<Jet>::dx(&d2, 0);
    assert_eq!(dx.star().star().component(0b01).value(), -1.0);
}

#[test]
fn interior_products() {
    let d = dom2(0.25, 0.5);
    let s = d.seeds();
    let ex = VectorField::basis(&d, 0);
    let f = Form::top(&d, a_jet(&s));
    let i = f.interior(&ex).unwrap();
    assert!((i.component(0b10).value() - 0.42888).abs() < 1e-5);
    assert!(i.component(0b01).is_zero());
    assert!(Form::<Jet>::dx(&d, 1).interior(&ex).unwrap().is_zero());
    let zero = Form::scalar(&d, Jet::Const(1.0));
    assert!(matches!(zero.interior(&ex), Err(FormError::Degree(_))));
}

#[test]
fn rotation_generator_contraction() {
    // ι_{J_CD} α = X_C α_D − X_D α_C
    let d = JetDomain::new(3, [0.3, -0.7, 1.1, 0.0], 2);
    let alpha = Form::from_components(
        &d,
        1,
        vec![Jet::Const(2.0), Jet::Const(-1.0), Jet::Const(0.5)],
    )
    .unwrap();
    for (c, dd) in [(0, 1), (1, 2), (0, 2), (2, 0)] {
        let j = VectorField::rotation(&d, c, dd).unwrap();
        let got = alpha.interior(&j).unwrap().components()[0].value();
        let x = d.point;
        let a = [2.0, -1.0, 0.5];
        assert!((got - (x[c] * a[dd] - x[dd] * a[c])).abs() < 1e-15);
    }
    assert!(matches!(
        VectorField::<Jet>::rotation(&d, 1, 1),
        Err(FormError::DegenerateGenerator(1))
    ));
}

#[test]
fn covariant_derivative_examples() {
    let d = dom2(0.25, 0.5);
    let s = d.seeds();
    let e = FrameForm::<Jet>::identity(&d);
    let w = RotForm::new(vec![Form::one_form(&d, 0, a_jet(&s))]).unwrap();
    let t = e.covariant_d(&w);
    assert!((t.c[0].components()[0].value() - a_jet(&s).value()).abs() < 1e-15);
    assert!(t.c[1].components()[0].value().abs() < 1e-15);
    // flat connection reduces to d
    let flat = RotForm::<Jet>::zero(&d, 1);
    let e2 = FrameForm::new(vec![
        Form::one_form(&d, 1, a_jet(&s)),
        Form::one_form(&d, 0, a_jet(&s)),
    ])
    .unwrap();
    let dd = e2.covariant_d(&flat);
    let plain = e2.d();
    for (a, b) in dd.c.iter().zip(&plain.c) {
        assert_eq!(a.components()[0].value(), b.components()[0].value());
    }
}

#[test]
fn covariant_lie_example1() {
    // L^D_{∂x} e¹ = ι_{∂x}T¹ + D(ι_{∂x}dx) = a dy
    let d = dom2(0.31, 0.2);
    let s = d.seeds();
    let e = FrameForm::<Jet>::identity(&d);
    let w = RotForm::new(vec![Form::one_form(&d, 0, a_jet(&s))]).unwrap();
    let ex = VectorField::basis(&d, 0);
    let l = e.covariant_lie(&ex, &w);
    assert!((l.c[0].component(0b10).value() - a_jet(&s).value()).abs() < 1e-15);
    assert!(l.c[0].component(0b01).value().abs() < 1e-15);
    let zero = VectorField::zero(&d);
    assert!(e.covariant_lie(&zero, &w).norm_inf() == 0.0);
}

#[test]
fn kind_mismatch() {
    let d = dom2(0.0, 0.0);
    let e = ValuedForm::Frame(FrameForm::<Jet>::identity(&d));
    assert!(matches!(e.wedge(&e), Err(FormError::KindMismatch { .. })));
    let w = ValuedForm::Rotation(RotForm::<Jet>::zero(&d, 1));
    assert_eq!(w.wedge(&e).unwrap().degree(), 2);
}

fn grid_d_error(n: usize) -> f64 {
    let g = Arc::new(Grid::unit(2, n, Boundary::OneSided).unwrap());
    let f = Form::scalar(&g, g.sample(|p| (PI * p[1]).sin()));
    let df = f.d();
    let exact = g.sample(|p| PI * (PI * p[1]).cos());
    df.component(0b10).sub(&exact).norm_inf()
}

#[test]
fn grid_derivative_converges_second_order() {
    let ratio = grid_d_error(65) / grid_d_error(129);
    assert!(ratio >= 3.7, "ratio {ratio}");
}

#[test]
fn grid_dd_vanishes() {
    let g = Arc::new(Grid::unit(3, 12, Boundary::OneSided).unwrap());
    let f = Form::scalar(&g, g.sample(|p| (p[0] * p[1]).sin() + p[2].powi(3)));
    assert!(f.d().d().norm_inf() < 1e-9);
}
