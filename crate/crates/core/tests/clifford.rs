use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use superdirac_core::algebra::{AlgebraSpec, LieSuperalgebra};
use superdirac_core::clifford::{CwAlgebra, Elem};
use superdirac_core::fock::FockSpace;
use superdirac_core::scalar::q;
use superdirac_core::Q;

fn alg(spec: AlgebraSpec) -> LieSuperalgebra {
    LieSuperalgebra::build(spec).unwrap()
}

fn cw_full(g: &LieSuperalgebra) -> CwAlgebra {
    CwAlgebra::new(g, &g.all_indices())
}

fn cfg() -> Config {
    Config {
        cases: 256,
        rng_seed: RngSeed::Fixed(0x5eed_c11f),
        failure_persistence: None,
        ..Config::default()
    }
}

#[test]
fn cubic_term_squares_to_rho_norm() {
    let specs = [
        AlgebraSpec::sl(2),
        AlgebraSpec::sl(3),
        AlgebraSpec::gl(1, 1),
        AlgebraSpec::sl_super(2, 1),
        AlgebraSpec::gl(2, 1),
        AlgebraSpec::sl_super(3, 1),
        AlgebraSpec::sl_super(1, 2),
        AlgebraSpec::sl_super(1, 3),
        AlgebraSpec::psl(2),
    ];
    for spec in specs {
        let g = alg(spec);
        let cw = cw_full(&g);
        let phi = cw.cubic_term(&g).unwrap();
        let sq = cw.mul(&phi, &phi);
        assert_eq!(sq.as_scalar(cw.ngen()), Some(g.wnorm(&g.rho())), "{}", spec.name());
    }
}

#[test]
fn known_rho_norms() {
    assert_eq!(
        alg(AlgebraSpec::sl(2)).wnorm(&alg(AlgebraSpec::sl(2)).rho()),
        Q::new(1.into(), 8.into())
    );
    let g = alg(AlgebraSpec::sl_super(3, 1));
    assert_eq!(g.wnorm(&g.rho()), Q::new(1.into(), 2.into()));
    let g = alg(AlgebraSpec::sl_super(1, 3));
    assert_eq!(g.wnorm(&g.rho()), Q::new((-1).into(), 2.into()));
}

#[test]
fn generators_satisfy_defining_relations() {
    let g = alg(AlgebraSpec::sl_super(2, 1));
    let cw = cw_full(&g);
    for i in 0..cw.ngen() {
        for j in 0..cw.ngen() {
            let br = cw.bracket(&cw.gen(i), &cw.gen(j));
            assert_eq!(
                br,
                cw.scalar(q(2) * cw.gram.get(i, j)),
                "{} {}",
                cw.labels[i],
                cw.labels[j]
            );
        }
    }
}

#[test]
fn nu_star_is_a_homomorphism_and_implements_ad() {
    let g = alg(AlgebraSpec::sl_super(2, 1));
    let cw = cw_full(&g);
    let nu: Vec<Elem> = (0..g.dim()).map(|a| cw.nu_star(&g, &g.unit(a)).unwrap()).collect();
    for a in 0..g.dim() {
        for b in 0..g.dim() {
            let br = g.bracket(&g.unit(a), &g.unit(b));
            let lhs = cw.nu_star(&g, &br).unwrap();
            assert_eq!(cw.bracket(&nu[a], &nu[b]), lhs, "{} {}", g.label(a), g.label(b));
            let image = cw.vector(&cw.coords_from_alg(&br).unwrap());
            assert_eq!(cw.bracket(&nu[a], &cw.gen(b)), image);
        }
    }
}

#[test]
fn sl2_spin_weights() {
    let g = alg(AlgebraSpec::sl(2));
    let p: Vec<usize> = g
        .all_indices()
        .into_iter()
        .filter(|&a| g.root_ij(a).is_some())
        .collect();
    let fock = FockSpace::new(&g, &p).unwrap();
    let h = g.unit(g.cartan[0]);
    let nu = fock.cw.nu_star(&g, &h).unwrap();
    let vac = fock.vacuum();
    assert_eq!(fock.apply_mono(&nu, &vac).get(&vac), Some(&q(1)));
    let f = vec![1u16];
    assert_eq!(fock.apply_mono(&nu, &f).get(&f), Some(&q(-1)));
    let gp = fock.cw.gamma_prime(&g, &h).unwrap();
    assert_eq!(fock.apply_mono(&gp, &vac).get(&vac), Some(&q(-2)));
}

#[test]
fn weyl_generators_act_as_multiplication_and_derivative() {
    let g = alg(AlgebraSpec::gl(1, 1));
    let p: Vec<usize> = g
        .all_indices()
        .into_iter()
        .filter(|&a| g.root_ij(a).is_some())
        .collect();
    let fock = FockSpace::new(&g, &p).unwrap();
    assert_eq!(fock.cw.parity, vec![1, 1]);
    let x = fock.cw.gen(0);
    let d = fock.cw.gen(1);
    let comm = fock.cw.mul(&d, &x).sub(&fock.cw.mul(&x, &d));
    assert_eq!(comm, fock.cw.scalar(q(2) * fock.cw.gram.get(1, 0)));
    let v3 = vec![3u16];
    let out = fock.apply_mono(&d, &v3);
    assert_eq!(out.get(&vec![2u16]), Some(&(q(6) * fock.cw.gram.get(1, 0))));
}

#[test]
fn contraction_pairs_with_the_form() {
    let g = alg(AlgebraSpec::sl_super(2, 1));
    let cw = cw_full(&g);
    for a in 0..cw.ngen() {
        let mut x = vec![q(0); cw.ngen()];
        x[a] = q(1);
        for b in 0..cw.ngen() {
            let c = cw.contract(&x, cw.parity[a], &cw.gen(b));
            assert_eq!(c, cw.scalar(cw.gram.get(a, b).clone()));
        }
    }
}

#[test]
fn lie_derivative_of_cubic_element_vanishes() {
    let g = alg(AlgebraSpec::sl_super(2, 1));
    let cw = cw_full(&g);
    let phi = cw.cubic_element(&g).unwrap();
    for a in 0..g.dim() {
        let ad = cw.ad_on_generators(&g, &g.unit(a)).unwrap();
        assert!(
            cw.lie_derivative(&ad, g.parity(a), &phi, true).is_zero(),
            "{}",
            g.label(a)
        );
    }
}

fn random_elem(cw: &CwAlgebra, words: &[(Vec<usize>, i64)]) -> Elem {
    let mut acc = Elem::zero();
    for (w, c) in words {
        let w: Vec<usize> = w.iter().map(|g| g % cw.ngen()).collect();
        acc.add_scaled(&cw.word_product(&w), &q(*c));
    }
    acc
}

fn words() -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0usize..64, 0..4), -3i64..4), 1..3)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn clifford_weyl_product_is_associative(x in words(), y in words(), z in words()) {
        let g = alg(AlgebraSpec::sl_super(2, 1));
        let cw = cw_full(&g);
        let (a, b, c) = (random_elem(&cw, &x), random_elem(&cw, &y), random_elem(&cw, &z));
        prop_assert_eq!(cw.mul(&cw.mul(&a, &b), &c), cw.mul(&a, &cw.mul(&b, &c)));
    }
}
