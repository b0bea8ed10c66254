use superdirac_core::algebra::{AlgebraSpec, LieSuperalgebra};
use superdirac_core::module::WeightModule;
use superdirac_core::scalar::{parse_vec, q};
use superdirac_core::Error;
use superdirac_dirac::ds::{ds_module, SelfCommutingElement};
use superdirac_dirac::DiracOperator;

fn alg(name: &str) -> LieSuperalgebra {
    LieSuperalgebra::build(AlgebraSpec::parse(name, None, None).unwrap()).unwrap()
}

fn module(g: &LieSuperalgebra, hw: &str) -> WeightModule {
    WeightModule::simple(g, &parse_vec(hw).unwrap()).unwrap()
}

#[test]
fn self_commuting_elements() {
    let g = alg("psl22");
    let x = SelfCommutingElement::from_labels(&g, &["E14"], &[q(1)]).unwrap();
    assert_eq!(x.rank, 1);
    let x = SelfCommutingElement::from_labels(&g, &["E14", "E23"], &[q(1), q(2)]).unwrap();
    assert_eq!(x.rank, 2);
    let bad = SelfCommutingElement::from_labels(&g, &["E13", "E14"], &[q(1), q(1)]);
    assert!(matches!(bad, Err(Error::NotSelfCommuting(_))));
    let even = SelfCommutingElement::from_labels(&g, &["E12"], &[q(1)]);
    assert!(matches!(even, Err(Error::NotSelfCommuting(_))));
}

#[test]
fn superdimension_is_preserved() {
    for (name, labels, hws) in [
        (
            "psl22",
            vec!["E14"],
            vec!["0,0,0,0", "1,0,0,-1", "2,0,0,-2", "2,0,-1,-1"],
        ),
        ("psl22", vec!["E14", "E23"], vec!["0,0,0,0", "1,0,0,-1", "2,0,-1,-1"]),
        ("sl(2|1)", vec!["E13"], vec!["0,0,0", "1,0,0", "2,0,-1", "3,1,-1"]),
        ("gl(1|1)", vec!["E12"], vec!["0,0", "1,-1", "2,1"]),
    ] {
        let g = alg(name);
        let ones = vec![q(1); labels.len()];
        let x = SelfCommutingElement::from_labels(&g, &labels, &ones).unwrap();
        for hw in hws {
            let m = module(&g, hw);
            let r = ds_module(&g, &x, &m);
            assert!(r.square_zero);
            assert_eq!(r.sdim, m.sdim(), "{} {}", name, hw);
        }
    }
}

#[test]
fn typical_modules_vanish() {
    let g = alg("psl22");
    let x = SelfCommutingElement::from_labels(&g, &["E14"], &[q(1)]).unwrap();
    let lambda = parse_vec("2,0,-1,-1").unwrap();
    assert_eq!(g.atypicality(&lambda).0, 0);
    let r = ds_module(&g, &x, &module(&g, "2,0,-1,-1"));
    assert_eq!(r.dims, [0, 0]);
}

#[test]
fn zero_element_is_identity() {
    let g = alg("psl22");
    let m = module(&g, "1,0,0,-1");
    let r = ds_module(&g, &SelfCommutingElement::zero(), &m);
    assert_eq!(
        r.dims,
        [
            m.parity.iter().filter(|&&p| p == 0).count(),
            m.parity.iter().filter(|&&p| p == 1).count()
        ]
    );
}

#[test]
fn perturbed_square_on_levi() {
    let g = alg("psl22");
    let x = SelfCommutingElement::from_labels(&g, &["E23"], &[q(1)]).unwrap();
    let m = module(&g, "1,0,0,-1");
    let d = DiracOperator::new(&g, &m, &g.levi_indices(&[1, 2, 1]).unwrap()).unwrap();
    assert!(d.verify_perturbed_square(&x, &d.sample_weights(1)).unwrap());
}

#[test]
fn full_subalgebra_gives_ds() {
    let g = alg("sl(2|1)");
    let all: Vec<usize> = (0..g.dim()).collect();
    let x = SelfCommutingElement::from_labels(&g, &["E23"], &[q(1)]).unwrap();
    for hw in ["0,0,0", "1,0,0", "2,0,-1", "3,1,-1"] {
        let m = module(&g, hw);
        let d = DiracOperator::new(&g, &m, &all).unwrap();
        let r = d.perturbed_cohomology(&x, 0).unwrap();
        assert_eq!(r.h_dx, ds_module(&g, &x, &m).dims, "{}", hw);
    }
}

#[test]
fn levi_comparison() {
    for (name, blocks, label, hw) in [
        ("sl(2|1)", vec![1, 2], "E23", "2,0,-1"),
        ("gl(2|1)", vec![1, 2], "E23", "1,0,-1"),
        ("gl(1|2)", vec![2, 1], "E12", "0,1,-1"),
    ] {
        let g = alg(name);
        let x = SelfCommutingElement::from_labels(&g, &[label], &[q(1)]).unwrap();
        let d = DiracOperator::new(&g, &module(&g, hw), &g.levi_indices(&blocks).unwrap()).unwrap();
        let r = d.perturbed_cohomology(&x, 0).unwrap();
        assert!(r.search.certified && r.square_matches && r.ker_d_equals_ker_d2);
        assert_eq!(r.agree, Some(true), "{} {}", name, hw);
        let plain = d.perturbed_cohomology(&SelfCommutingElement::zero(), 0).unwrap();
        assert_eq!(plain.h_dx, d.cohomology(0).unwrap().total);
    }
}
