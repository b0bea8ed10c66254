use superdirac_core::algebra::{AlgebraSpec, LieSuperalgebra};
use superdirac_core::module::{weyl_dimension, WeightModule};
use superdirac_core::scalar::{parse_vec, q};
use superdirac_core::Q;

fn alg(name: &str) -> LieSuperalgebra {
    LieSuperalgebra::build(AlgebraSpec::parse(name, None, None).unwrap()).unwrap()
}

fn w(s: &str) -> Vec<Q> {
    parse_vec(s).unwrap()
}

fn positive(g: &LieSuperalgebra) -> Vec<usize> {
    g.positive_roots()
}

#[test]
fn sl3_modules_match_weyl_dimension() {
    let g = alg("sl(3)");
    for hw in ["1,0,0", "2,1,0", "3,0,0", "2,2,0", "4,2,0"] {
        let l = w(hw);
        let v = WeightModule::simple(&g, &l).unwrap();
        assert!(v.check_representation(&g).passed(), "{hw}");
        assert_eq!(Q::from_integer((v.dim() as i64).into()), weyl_dimension(&l), "{hw}");
    }
}

#[test]
fn sl4_adjoint_dimension() {
    let g = alg("sl(4)");
    let v = WeightModule::simple(&g, &w("1,0,0,-1")).unwrap();
    assert_eq!(v.dim(), 15);
    assert!(v.check_representation(&g).passed());
}

#[test]
fn simple_modules_have_one_singular_line() {
    for (name, hw) in [
        ("sl(2|1)", "1,0|0"),
        ("sl(2|1)", "2,0|0"),
        ("gl(1|1)", "1|-1"),
        ("gl(2|1)", "1,0|3"),
        ("psl(2|2)", "1,0|0,-1"),
    ] {
        let g = alg(name);
        let v = WeightModule::simple(&g, &w(hw)).unwrap();
        assert!(v.check_representation(&g).passed(), "{name} {hw}");
        let sing = v.singular_vectors(&positive(&g));
        assert_eq!(sing.len(), 1, "{name} {hw}");
        assert_eq!(sing[0].0, w(hw));
        assert_eq!(sing[0].1.len(), 1);
    }
}

#[test]
fn typical_modules_have_kac_dimension() {
    let g = alg("gl(2|1)");
    for hw in ["0,0|5", "1,0|3", "2,1|7", "3,0|-7"] {
        let l = w(hw);
        let v = WeightModule::simple(&g, &l).unwrap();
        let even = weyl_dimension(&l[..2]);
        assert_eq!(Q::from_integer((v.dim() as i64).into()), even * q(4), "{hw}");
        assert_eq!(v.sdim(), 0);
    }
    let g = alg("gl(1|1)");
    assert_eq!(WeightModule::simple(&g, &w("1|1")).unwrap().dim(), 2);
    assert_eq!(WeightModule::simple(&g, &w("1|-1")).unwrap().dim(), 1);
}

#[test]
fn atypical_sl21_natural_module() {
    let g = alg("sl(2|1)");
    let v = WeightModule::simple(&g, &w("1,0|0")).unwrap();
    assert_eq!(v.dim(), 3);
    assert_eq!(v.sdim(), 1);
}

#[test]
fn psl22_adjoint_is_parity_shifted_simple_module() {
    let g = alg("psl(2|2)");
    let v = WeightModule::simple(&g, &w("1,0|0,-1")).unwrap();
    assert_eq!(v.dim(), 14);
    assert_eq!(v.sdim(), 2);
    let adj = WeightModule::adjoint(&g);
    assert!(adj.check_representation(&g).passed());
    let mut a: Vec<_> = adj
        .character()
        .into_iter()
        .map(|(w, (e, o))| (g.canonical(&w), (o, e)))
        .collect();
    let mut b: Vec<_> = v.character().into_iter().map(|(w, m)| (g.canonical(&w), m)).collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}

#[test]
fn tensor_product_is_a_module() {
    let g = alg("sl(2|1)");
    let v = WeightModule::simple(&g, &w("1,0|0")).unwrap();
    let t = v.tensor(&v, &g);
    assert_eq!(t.dim(), 9);
    assert!(t.check_representation(&g).passed());
    let s = v.direct_sum(&WeightModule::trivial(&g));
    assert!(s.check_representation(&g).passed());
}

#[test]
fn even_decomposition_of_sl21_adjoint() {
    let g = alg("sl(2|1)");
    let v = WeightModule::adjoint(&g);
    let total: usize = v.even_decomposition(&g).iter().map(|(_, m)| m).sum();
    assert_eq!(total, 4);
}

#[test]
fn non_dominant_is_rejected() {
    let g = alg("sl(3)");
    let e = WeightModule::simple(&g, &w("0,1,0")).unwrap_err();
    assert_eq!(e.code(), "not-dominant");
}
