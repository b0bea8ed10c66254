use superdirac_core::algebra::{AlgebraSpec, LieSuperalgebra};
use superdirac_core::module::WeightModule;
use superdirac_core::scalar::{parse_vec, q};
use superdirac_core::Error;
use superdirac_dirac::DiracOperator;

fn alg(name: &str) -> LieSuperalgebra {
    LieSuperalgebra::build(AlgebraSpec::parse(name, None, None).unwrap()).unwrap()
}

fn h_value(g: &LieSuperalgebra, w: &[superdirac_core::Q]) -> superdirac_core::Q {
    g.eval_weight_full(w, &g.unit(g.cartan[0]))
}

#[test]
fn sl2_kernel_lines() {
    let g = alg("sl2");
    for n in 0..4 {
        let m = WeightModule::simple(&g, &[q(n), q(0)]).unwrap();
        let d = DiracOperator::new(&g, &m, &g.cartan).unwrap();
        let c = d.cohomology(0).unwrap();
        assert!(c.search.certified);
        assert!(c.ker_d_equals_ker_d2);
        assert_eq!(c.total, [1, 1]);
        for b in &c.blocks {
            let mu = h_value(&g, &b.weight);
            if mu == q(n + 1) {
                assert_eq!(b.cohomology, [1, 0]);
            } else {
                assert_eq!(mu, q(-n - 1));
                assert_eq!(b.cohomology, [0, 1]);
            }
        }
    }
}

#[test]
fn sl2_trivial_kernel_is_the_spinor() {
    let g = alg("sl2");
    let m = WeightModule::trivial(&g);
    let d = DiracOperator::new(&g, &m, &g.cartan).unwrap();
    let c = d.cohomology(0).unwrap();
    let spinor_dim: usize = d.sample_weights(0).iter().map(|w| d.space.block(w).dim()).sum();
    assert_eq!(spinor_dim, 2);
    assert_eq!(c.blocks.iter().map(|b| b.ker_d2).sum::<usize>(), 2);
    assert_eq!(c.total, [1, 1]);
}

#[test]
fn typical_sl21_is_certified() {
    let g = alg("sl(2|1)");
    let m = WeightModule::simple(&g, &parse_vec("2,0,-1").unwrap()).unwrap();
    let d = DiracOperator::new(&g, &m, &g.cartan).unwrap();
    let c = d.cohomology(0).unwrap();
    assert!(c.search.certified);
    assert!(c.ker_d_equals_ker_d2);
    assert_eq!(c.total, [1, 1]);
    assert!(c.search.searched_poly_degree > 0);
}

#[test]
fn atypical_sl21_kernel_is_infinite() {
    let g = alg("sl(2|1)");
    let m = WeightModule::trivial(&g);
    let d = DiracOperator::new(&g, &m, &g.cartan).unwrap();
    assert!(matches!(d.cohomology(0), Err(Error::KernelInfinite(_))));
}

#[test]
fn psl22_search_is_flagged_uncertified() {
    let g = alg("psl22");
    let m = WeightModule::trivial(&g);
    let d = DiracOperator::new(&g, &m, &g.cartan).unwrap();
    let c = d.candidate_search(1).unwrap();
    assert!(!c.certified);
    assert_eq!(c.searched_poly_degree, 1);
}
