use superdirac_core::algebra::{AlgebraSpec, LieSuperalgebra};
use superdirac_core::module::WeightModule;
use superdirac_core::scalar::{parse_vec, q};
use superdirac_dirac::DiracOperator;

fn alg(name: &str) -> LieSuperalgebra {
    LieSuperalgebra::build(AlgebraSpec::parse(name, None, None).unwrap()).unwrap()
}

#[test]
fn sl2_square_is_scalar() {
    let g = alg("sl2");
    for n in 0..4 {
        let m = WeightModule::simple(&g, &[q(n), q(0)]).unwrap();
        let d = DiracOperator::new(&g, &m, &g.cartan).unwrap();
        let ws = d.sample_weights(0);
        let v = d.verify_square(&ws).unwrap();
        assert!(v.passed, "{:?}", v);
        let e = d.verify_equivariance(&ws).unwrap();
        assert!(e.passed, "{:?}", e);
    }
}

#[test]
fn super_square_formula() {
    for (name, hw, l) in [
        ("sl(2|1)", "1,0,0", "h"),
        ("psl22", "1,0,0,-1", "g0"),
        ("sl(2|1)", "2,0,-1", "g0"),
        ("psl22", "1,0,0,-1", "h"),
    ] {
        let g = alg(name);
        let m = WeightModule::simple(&g, &parse_vec(hw).unwrap()).unwrap();
        let lidx = if l == "h" { g.cartan.clone() } else { g.even_indices() };
        let d = DiracOperator::new(&g, &m, &lidx).unwrap();
        let ws = d.sample_weights(1);
        let v = d.verify_square(&ws).unwrap();
        assert!(v.passed, "{} {:?}", name, v);
        let e = d.verify_equivariance(&ws).unwrap();
        assert!(e.passed, "{} {:?}", name, e);
    }
}
