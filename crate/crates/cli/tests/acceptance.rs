use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;
use superdirac_cli::default_etas;
use superdirac_core::algebra::{add, AlgebraSpec, LieSuperalgebra, Weight};
use superdirac_core::clifford::{CwAlgebra, Elem};
use superdirac_core::linalg::{intersection_dim, joint_kernel, Matrix};
use superdirac_core::module::WeightModule;
use superdirac_core::scalar::{factorial, fmt_q, fmt_vec, parse_vec, q, qf};
use superdirac_core::{Error, Q};
use superdirac_dirac::ds::{ds_module, SelfCommutingElement};
use superdirac_dirac::laplace::gram_sum;
use superdirac_dirac::{DetectingFamily, DiracOperator, EvenFamily};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn alg(name: &str) -> LieSuperalgebra {
    LieSuperalgebra::build(AlgebraSpec::parse(name, None, None).unwrap()).unwrap()
}

fn module(g: &LieSuperalgebra, hw: &str) -> WeightModule {
    WeightModule::simple(g, &parse_vec(hw).unwrap()).unwrap()
}

fn neg(v: &[Q]) -> Weight {
    v.iter().map(|x| -x).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn h_value(g: &LieSuperalgebra, w: &[Q]) -> Q {
    g.eval_weight_full(w, &g.unit(g.cartan[0]))
}

fn structure_suite() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for name in ["sl2", "sl3", "gl(1|1)", "sl(2|1)", "psl22"] {
        let g = alg(name);
        for c in g.validate() {
            ensure(c.passed(), || {
                format!("{} {}: {:?}", name, c.check_name, c.counterexample)
            })?;
            count += 1;
        }
    }
    let t = start.elapsed().as_secs_f64();
    ensure(t < 10.0, || format!("took {:.1} s", t))?;
    Ok(format!("{} checks on 5 algebras in {:.2} s", count, t))
}

fn cubic_square() -> Outcome {
    let mut values = Vec::new();
    for name in ["sl2", "sl3", "gl(1|1)", "sl(2|1)", "psl22"] {
        let g = alg(name);
        let all = g.all_indices();
        let cw = CwAlgebra::new(&g, &all);
        let phi = cw.cubic_term(&g).map_err(e)?;
        let square = cw
            .mul(&phi, &phi)
            .as_scalar(cw.ngen())
            .ok_or_else(|| format!("{}: square is not scalar", name))?;
        let oracle = g.casimir_supertrace(&all).map_err(e)? / q(24);
        ensure(square == oracle, || {
            format!("{}: {} vs str(ad Ω)/24 = {}", name, fmt_q(&square), fmt_q(&oracle))
        })?;
        let rho = g.wnorm(&g.rho());
        ensure(oracle == rho, || {
            format!(
                "{}: str(ad Ω)/24 = {} but B(ρ,ρ) = {}",
                name,
                fmt_q(&oracle),
                fmt_q(&rho)
            )
        })?;
        values.push(format!("{}={}", name, fmt_q(&square)));
    }
    Ok(format!("(φ')² = str(ad Ω)/24 = B(ρ,ρ): {}", values.join(" ")))
}

fn relative_square() -> Outcome {
    let mut blocks = 0;
    for (name, hw, l) in [
        ("sl2", "2,0", "h"),
        ("sl3", "1,0,-1", "h"),
        ("psl22", "1,0,0,-1", "g0"),
        ("sl(2|1)", "1,0,0", "h"),
        ("sl(2|1)", "2,0,-1", "h"),
    ] {
        let g = alg(name);
        let m = module(&g, hw);
        let lidx = if l == "h" { g.cartan.clone() } else { g.even_indices() };
        let d = DiracOperator::new(&g, &m, &lidx).map_err(e)?;
        let ws = d.sample_weights(1);
        let v = d.verify_square(&ws).map_err(e)?;
        ensure(v.passed, || format!("{} {} {}: {:?}", name, hw, l, v.detail))?;
        let eq = d.verify_equivariance(&ws).map_err(e)?;
        ensure(eq.passed, || {
            format!("{} {} {} equivariance: {:?}", name, hw, l, eq.detail)
        })?;
        let dd = d.verify_differential(&ws).map_err(e)?;
        ensure(dd.passed, || {
            format!("{} {} {} differential: {:?}", name, hw, l, dd.detail)
        })?;
        blocks += v.blocks_checked;
    }
    Ok(format!("D² = Ω ⊗ 1 - Σ J(e^b)J(e_b) + κ on {} blocks", blocks))
}

fn sl2_sheet() -> Outcome {
    let g = alg("sl2");
    let (h, ei, fi) = (
        g.index_of_label("H1").unwrap(),
        g.index_of_label("E12").unwrap(),
        g.index_of_label("E21").unwrap(),
    );
    for n in 0..4i64 {
        let m = WeightModule::simple(&g, &[q(n), q(0)]).map_err(e)?;
        let (em, fm, hm) = (
            m.action(&g.unit(ei)).to_dense(),
            m.action(&g.unit(fi)).to_dense(),
            m.action(&g.unit(h)).to_dense(),
        );
        let cas = em.mul(&fm).add(&fm.mul(&em)).add(&hm.mul(&hm).scale(&qf(1, 2)));
        ensure(cas.as_scalar() == Some(qf(n * (n + 2), 2)), || {
            format!("n={}: ef+fe+h²/2 = {:?}", n, cas.as_scalar())
        })?;
        let d = DiracOperator::new(&g, &m, &g.cartan).map_err(e)?;
        ensure(d.casimir_scalar() == Some(qf(n * (n + 2), 8)), || {
            format!("n={}: Killing Casimir", n)
        })?;
        for w in d.sample_weights(0) {
            let b = d.space.block(&w);
            if b.dim() == 0 {
                continue;
            }
            let mu = h_value(&g, &w);
            let want = (q((n + 1) * (n + 1)) - &mu * &mu) / q(8);
            let got = d.d_squared(&b).map_err(e)?.as_scalar();
            ensure(got == Some(want.clone()), || {
                format!("n={} μ={}: D² = {:?}, want {}", n, fmt_q(&mu), got, fmt_q(&want))
            })?;
        }
        let c = d.cohomology(0).map_err(e)?;
        let mut lines = Vec::new();
        for b in &c.blocks {
            if b.ker_d[0] + b.ker_d[1] > 0 {
                lines.push((h_value(&g, &b.weight), b.ker_d));
            }
        }
        lines.sort();
        let want = vec![(q(-n - 1), [0, 1]), (q(n + 1), [1, 0])];
        ensure(lines == want, || format!("n={}: ker D lines {:?}", n, lines))?;
        let sdim: i64 = lines.iter().map(|(_, k)| k[0] as i64 - k[1] as i64).sum();
        ensure(sdim == 0, || format!("n={}: sdim ker D = {}", n, sdim))?;
        let heat = d.heat_supertrace().map_err(e)?;
        ensure(heat.all_zero, || {
            format!("n={}: heat supertrace {:?}", n, heat.eigenblocks)
        })?;
        let ch = d.chern_series(12, 0).map_err(e)?;
        let a = qf(n + 1, 8);
        let mut power = q(1);
        for k in 0..=12u32 {
            let want = if k % 2 == 1 {
                q(2) * &power / factorial(k)
            } else {
                Q::zero()
            };
            ensure(ch.series.coefficient(&[k]) == want, || {
                format!("n={}: u^{} coefficient", n, k)
            })?;
            power *= &a;
        }
    }
    Ok("n = 0..3: Casimir n(n+2)/2 (Killing n(n+2)/8), D² = ((n+1)²-μ²)/8, ker D = C_{n+1} ⊕ C_{-(n+1)}, sdim 0, heat 0, 2 sinh((n+1)u/8) to order 12".into())
}

fn laplace_family(g: &LieSuperalgebra, lam: &Weight) -> Result<(EvenFamily, BTreeSet<Weight>), String> {
    let m = WeightModule::simple(g, lam).map_err(e)?;
    let fam = EvenFamily::new(g, &m).map_err(e)?;
    let orbit = g
        .weyl_group()
        .map_err(e)?
        .orbit(&neg(&add(lam, &g.rho())), |w| g.canonical(w));
    Ok((fam, orbit.into_iter().collect()))
}

fn even_localization() -> Outcome {
    let start = Instant::now();
    let mut points = 0;
    let g = alg("sl2");
    for n in 0..4 {
        let (fam, orbit) = laplace_family(&g, &vec![q(n), q(0)])?;
        let mut xs: BTreeSet<Weight> = (-16..=16).map(|k| g.canonical(&[qf(k, 4), q(0)])).collect();
        xs.extend(orbit.iter().cloned());
        for xi in &xs {
            let dim = fam.laplace_kernel_dim(xi).map_err(e)?;
            let on = orbit.contains(xi);
            ensure((dim > 0) == on && (!on || dim == 1), || {
                format!("sl2 n={} ξ={} dim={}", n, fmt_vec(xi), dim)
            })?;
            points += 1;
        }
    }
    let g = alg("sl3");
    for a in 0..=3i64 {
        for b in 0..=(3 - a) {
            let lam = g.weight_from_input(&[q(a), q(b)]).map_err(e)?;
            let (fam, orbit) = laplace_family(&g, &lam)?;
            let mut xs: BTreeSet<Weight> = BTreeSet::new();
            for x in -4..=4 {
                for y in -4..=4 {
                    xs.insert(g.canonical(&[qf(x, 2), qf(y, 2), q(0)]));
                }
            }
            xs.extend(orbit.iter().cloned());
            for xi in &xs {
                let dim = fam.laplace_kernel_dim(xi).map_err(e)?;
                let on = orbit.contains(xi);
                ensure((dim > 0) == on && (!on || dim == 1), || {
                    format!("sl3 Λ=({},{}) ξ={} dim={}", a, b, fmt_vec(xi), dim)
                })?;
                points += 1;
            }
        }
    }
    let t = start.elapsed().as_secs_f64();
    ensure(t < 60.0, || format!("took {:.1} s", t))?;
    Ok(format!(
        "{} (Λ, ξ) pairs on sl2 (n ≤ 3) and sl3 (a+b ≤ 3) in {:.1} s",
        points, t
    ))
}

fn psl22_x_set(g: &LieSuperalgebra, fam: &DetectingFamily) -> Result<(), String> {
    let want: BTreeSet<Weight> = ["1,0,0,-1", "0,0,1,-1", "1,-1,0,0", "0,-1,1,0"]
        .iter()
        .map(|s| g.canonical(&parse_vec(s).unwrap()))
        .collect();
    let got: BTreeSet<Weight> = fam.x_set.iter().map(|(w, _)| g.canonical(w)).collect();
    ensure(got == want, || format!("X-set {:?}", fam.x_set))
}

fn random_psl22_weight(rng: &mut ChaCha8Rng) -> Weight {
    let mut v: Vec<Q> = (0..3)
        .map(|_| qf(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
        .collect();
    let s: Q = v.iter().sum();
    v.push(-s);
    v
}

fn psl22_example() -> Outcome {
    let g = alg("psl22");
    let m = module(&g, "1,0,0,-1");
    let fam = DetectingFamily::new(&g, &m).map_err(e)?;
    psl22_x_set(&g, &fam)?;
    let w0 = g.weyl_group().map_err(e)?;
    let rho0 = g.rho0();
    let mut orbit = BTreeSet::new();
    for (mu, _) in &fam.x_set {
        for xi in w0.orbit(&neg(&add(mu, &rho0)), |w| g.canonical(w)) {
            let dim = fam.even.kernel_dim(&xi);
            ensure(dim > 0, || {
                format!("ξ={} on the orbit of μ={} has zero kernel", fmt_vec(&xi), fmt_vec(mu))
            })?;
            orbit.insert(xi);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut off = 0;
    while off < 24 {
        let xi = g.canonical(&random_psl22_weight(&mut rng));
        if orbit.contains(&xi) {
            continue;
        }
        let dim = fam.even.kernel_dim(&xi);
        ensure(dim == 0, || format!("off-orbit ξ={} has kernel {}", fmt_vec(&xi), dim))?;
        off += 1;
    }
    Ok(format!(
        "ker Δ̃ ≠ 0 on all {} orbit points, 0 at {} seeded off-orbit ξ",
        orbit.len(),
        off
    ))
}

fn transported_nonzero(g: &LieSuperalgebra, fam: &DetectingFamily, xi: &[Q], eta: &[Q]) -> Result<bool, String> {
    let w0 = g.weyl_group().map_err(e)?;
    let (rho0, rho) = (g.rho0(), g.rho());
    let rho1: Weight = rho0.iter().zip(&rho).map(|(a, b)| a - b).collect();
    for (mu, _) in &fam.x_set {
        let top = add(mu, &rho0);
        for w in &w0.elements {
            let moved = w0.act(w, &top);
            if g.same_weight(&neg(&moved), xi) {
                let shifted: Weight = moved.iter().zip(&rho1).map(|(a, b)| a - b).collect();
                if g.wform(&shifted, eta).is_zero() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

fn detecting_family() -> Outcome {
    let g = alg("psl22");
    let m = module(&g, "1,0,0,-1");
    let fam = DetectingFamily::new(&g, &m).map_err(e)?;
    psl22_x_set(&g, &fam)?;
    let etas = default_etas(&g);
    let span = Matrix::from_rows(&etas).rank();
    let roots = Matrix::from_rows(
        &g.positive_roots()
            .iter()
            .map(|&a| g.canonical(&g.basis[a].weight))
            .collect::<Vec<_>>(),
    )
    .rank();
    ensure(span == roots, || format!("η set spans rank {} of {}", span, roots))?;
    let w0 = g.weyl_group().map_err(e)?;
    let rho0 = g.rho0();
    let base: BTreeSet<Weight> = fam
        .x_set
        .iter()
        .map(|(mu, _)| g.canonical(&neg(&add(mu, &rho0))))
        .collect();
    let mut xis = base.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for _ in 0..4 {
        xis.insert(g.canonical(&random_psl22_weight(&mut rng)));
    }
    let (mut hits, mut total) = (0, 0);
    for xi in &xis {
        for eta in &etas {
            let dim = fam.joint_kernel_dim(xi, eta).map_err(e)?;
            let pred = fam.predicted_nonzero(xi, eta);
            ensure((dim > 0) == pred, || {
                format!(
                    "ξ={} η={} joint kernel {} predicted {}",
                    fmt_vec(xi),
                    fmt_vec(eta),
                    dim,
                    pred
                )
            })?;
            hits += usize::from(pred);
            total += 1;
        }
    }
    let mut rest = BTreeSet::new();
    for (mu, _) in &fam.x_set {
        rest.extend(
            w0.orbit(&neg(&add(mu, &rho0)), |w| g.canonical(w))
                .into_iter()
                .filter(|xi| !base.contains(xi)),
        );
    }
    let (mut moved, mut literal_misses) = (0, 0);
    for xi in &rest {
        for eta in &etas {
            let dim = fam.joint_kernel_dim(xi, eta).map_err(e)?;
            let pred = transported_nonzero(&g, &fam, xi, eta)?;
            ensure((dim > 0) == pred, || {
                format!(
                    "orbit ξ={} η={} joint kernel {} transported {}",
                    fmt_vec(xi),
                    fmt_vec(eta),
                    dim,
                    pred
                )
            })?;
            literal_misses += usize::from(dim > 0);
            moved += 1;
        }
    }
    Ok(format!(
        "{} (ξ, η) pairs at ξ = -μ-ρ₀ and off-orbit ξ over {} isotropic η, {} predicted nonzero, all match; \
         on the other {} W₀-orbit pairs the kernel follows B(w(μ+ρ₀)-ρ₁, η) = 0 ({} nonzero although ξ ≠ -μ-ρ₀)",
        total,
        etas.len(),
        hits,
        moved,
        literal_misses
    ))
}

fn xs_for(g: &LieSuperalgebra) -> Vec<SelfCommutingElement> {
    let odd: Vec<usize> = g.positive_roots().into_iter().filter(|&a| g.parity(a) == 1).collect();
    let mut out = Vec::new();
    for (i, &a) in odd.iter().enumerate() {
        out.push(SelfCommutingElement::new(g, &[a], &[q(1)]).unwrap());
        for &b in &odd[i + 1..] {
            if let Ok(x) = SelfCommutingElement::new(g, &[a, b], &[q(1), q(2)]) {
                out.push(x);
            }
        }
    }
    out
}

fn ds_suite() -> Outcome {
    let mut cases = 0;
    for (name, hws) in [
        (
            "psl22",
            vec!["0,0,0,0", "1,0,0,-1", "2,0,0,-2", "2,0,-1,-1", "3,1,-2,-2"],
        ),
        ("sl(2|1)", vec!["0,0,0", "1,0,0", "2,0,-1", "3,1,-1", "1,1,-1"]),
        ("gl(1|1)", vec!["0,0", "1,-1", "2,1", "1,0"]),
        ("gl(2|1)", vec!["1,0,0", "1,0,-1", "2,1,-1"]),
    ] {
        let g = alg(name);
        let xs = xs_for(&g);
        for hw in hws {
            let m = module(&g, hw);
            for x in &xs {
                let r = ds_module(&g, x, &m);
                ensure(r.square_zero, || format!("{} {} x={:?}: x² ≠ 0", name, hw, x.labels))?;
                ensure(r.sdim == m.sdim(), || {
                    format!("{} {} x={:?}: sdim {} vs {}", name, hw, x.labels, r.sdim, m.sdim())
                })?;
                if g.atypicality(&m.highest_weight.clone().unwrap()).0 == 0 {
                    ensure(r.dims == [0, 0], || {
                        format!("{} {} typical but DS = {:?}", name, hw, r.dims)
                    })?;
                }
                cases += 1;
            }
        }
    }
    let mut squares = 0;
    for (name, hw, blocks, label) in [
        ("psl22", "1,0,0,-1", vec![1, 2, 1], "E23"),
        ("sl(2|1)", "1,0,0", vec![1, 2], "E23"),
    ] {
        let g = alg(name);
        let x = SelfCommutingElement::from_labels(&g, &[label], &[q(1)]).map_err(e)?;
        let d = DiracOperator::new(&g, &module(&g, hw), &g.levi_indices(&blocks).map_err(e)?).map_err(e)?;
        let ws = d.sample_weights(1);
        ensure(d.verify_perturbed_square(&x, &ws).map_err(e)?, || {
            format!("{} {}: (Dˣ)² ≠ D²", name, hw)
        })?;
        squares += ws.len();
    }
    let mut full = 0;
    for (name, hws) in [
        ("sl(2|1)", vec!["0,0,0", "1,0,0", "2,0,-1", "3,1,-1"]),
        ("psl22", vec!["0,0,0,0", "1,0,0,-1"]),
    ] {
        let g = alg(name);
        let all = g.all_indices();
        for hw in hws {
            let m = module(&g, hw);
            let d = DiracOperator::new(&g, &m, &all).map_err(e)?;
            for x in xs_for(&g) {
                let r = d.perturbed_cohomology(&x, 0).map_err(e)?;
                let direct = ds_module(&g, &x, &m).dims;
                ensure(r.h_dx == direct, || {
                    format!("{} {} x={:?}: H = {:?}, DS = {:?}", name, hw, x.labels, r.h_dx, direct)
                })?;
                full += 1;
            }
        }
    }
    let (mut agree, mut outside) = (0, Vec::new());
    for (name, hw, blocks, label) in [
        ("sl(2|1)", "2,0,-1", vec![1, 2], "E23"),
        ("gl(2|1)", "1,0,-1", vec![1, 2], "E23"),
        ("gl(1|2)", "0,1,-1", vec![2, 1], "E12"),
        ("sl(2|1)", "1,0,0", vec![1, 2], "E23"),
        ("psl22", "1,0,0,-1", vec![1, 2, 1], "E23"),
    ] {
        let g = alg(name);
        let x = SelfCommutingElement::from_labels(&g, &[label], &[q(1)]).map_err(e)?;
        let d = DiracOperator::new(&g, &module(&g, hw), &g.levi_indices(&blocks).map_err(e)?).map_err(e)?;
        match d.perturbed_cohomology(&x, 1) {
            Ok(r) if r.ker_d_equals_ker_d2 && r.search.certified => {
                ensure(r.agree == Some(true), || {
                    format!("{} {}: H = {:?}, DS(H_D) = {:?}", name, hw, r.h_dx, r.ds_of_h_d)
                })?;
                agree += 1;
            }
            Ok(_) => outside.push(format!("{} {}: ker D ≠ ker D² or uncertified", name, hw)),
            Err(Error::KernelInfinite(_)) => outside.push(format!("{} {}: kernel-infinite", name, hw)),
            Err(err) => return Err(err.to_string()),
        }
    }
    ensure(agree > 0, || "no Levi case in the comparison regime".into())?;
    Ok(format!(
        "{} sdim checks, (Dˣ)² = D² on {} blocks, {} l = g identities, {} Levi comparisons agree; outside regime: {}",
        cases,
        squares,
        full,
        agree,
        outside.join("; ")
    ))
}

fn runner(seed: u64) -> TestRunner {
    TestRunner::new(Config {
        cases: 256,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    })
}

fn property_suites() -> Outcome {
    let sl2 = alg("sl2");
    let sl3 = alg("sl3");
    let mut families = Vec::new();
    for n in 0..3 {
        families.push((&sl2, laplace_family(&sl2, &vec![q(n), q(0)])?));
    }
    for (a, b) in [(0, 0), (1, 0), (1, 1)] {
        let lam = sl3.weight_from_input(&[q(a), q(b)]).map_err(e)?;
        families.push((&sl3, laplace_family(&sl3, &lam)?));
    }
    let groups = [sl2.weyl_group().map_err(e)?, sl3.weyl_group().map_err(e)?];
    let orbit_cases = (
        0..families.len(),
        any::<bool>(),
        0usize..6,
        0usize..6,
        prop::collection::vec(-8i64..=8, 3),
    );
    runner(0x5eed_0091)
        .run(&orbit_cases, |(f, on_orbit, pick, w, raw)| {
            let (g, (fam, orbit)) = &families[f];
            let group = if g.rank_n() == 2 { &groups[0] } else { &groups[1] };
            let xi: Weight = if on_orbit {
                orbit.iter().nth(pick % orbit.len()).unwrap().clone()
            } else {
                g.canonical(&raw[..g.rank_n()].iter().map(|&c| qf(c, 2)).collect::<Vec<_>>())
            };
            let moved = g.canonical(&group.act(&group.elements[w % group.order()], &xi));
            let a = fam
                .laplace_kernel_dim(&xi)
                .map_err(|err| TestCaseError::fail(err.to_string()))?;
            let b = fam
                .laplace_kernel_dim(&moved)
                .map_err(|err| TestCaseError::fail(err.to_string()))?;
            prop_assert_eq!(a, b);
            Ok(())
        })
        .map_err(|err| format!("Weyl invariance: {}", err))?;
    let tuples = prop::collection::vec(
        prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -2i64..=2], 12),
        1..4,
    );
    runner(0x5eed_0092)
        .run(&tuples, |ops| {
            let mats: Vec<Matrix> = ops
                .iter()
                .map(|v| {
                    Matrix::from_rows(
                        &v.chunks(4)
                            .map(|r| r.iter().map(|&c| q(c)).collect())
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            let k1 = gram_sum(&mats).kernel();
            let refs: Vec<&Matrix> = mats.iter().collect();
            let k2 = joint_kernel(&refs, 4);
            prop_assert_eq!(k1.len(), k2.len());
            prop_assert_eq!(intersection_dim(&k1, &k2), k1.len());
            Ok(())
        })
        .map_err(|err| format!("ker ΣAᵀA: {}", err))?;
    let g = alg("sl(2|1)");
    let cw = CwAlgebra::new(&g, &g.all_indices());
    let elem = |words: &[(Vec<usize>, i64)]| {
        let mut acc = Elem::zero();
        for (w, c) in words {
            let w: Vec<usize> = w.iter().map(|k| k % cw.ngen()).collect();
            acc.add_scaled(&cw.word_product(&w), &q(*c));
        }
        acc
    };
    let words = || prop::collection::vec((prop::collection::vec(0usize..64, 0..4), -3i64..4), 1..3);
    runner(0x5eed_0093)
        .run(&(words(), words(), words()), |(x, y, z)| {
            let (a, b, c) = (elem(&x), elem(&y), elem(&z));
            prop_assert_eq!(cw.mul(&cw.mul(&a, &b), &c), cw.mul(&a, &cw.mul(&b, &c)));
            Ok(())
        })
        .map_err(|err| format!("associativity: {}", err))?;
    Ok("256 seeded cases each: Weyl-orbit kernel invariance, ker ΣAᵀA = ∩ ker A, Clifford-Weyl associativity".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("structure suite", structure_suite),
        ("cubic term square", cubic_square),
        ("relative square theorem", relative_square),
        ("sl2 example sheet", sl2_sheet),
        ("even localization", even_localization),
        ("psl(2|2) Laplace example", psl22_example),
        ("detecting family", detecting_family),
        ("DS suite", ds_suite),
        ("property suites", property_suites),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let t = start.elapsed().as_secs_f64();
        let line = match &result {
            Ok(msg) => format!("criterion {} PASS {} ({:.1} s): {}\n", k + 1, name, t, msg),
            Err(msg) => format!("criterion {} FAIL {} ({:.1} s): {}\n", k + 1, name, t, msg),
        };
        let _ = out.write_all(line.as_bytes());
        let _ = out.flush();
        if result.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
