//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::Cell;
use subhardy::cli::{self, Command, RunConfig};
use subhardy::debranges::{
    extract_generators, multiplier_range, random_f_tuple, standard_complex,
    verify_contraction_property, verify_independence, verify_norm_identity, GeneratorSet,
    ModelSubspace, DEFAULT_SEED,
};
use subhardy::gallery::section2_report;
use subhardy::hardy::{multiplication_matrix, st7_decompose, tensor_tm_basis_coeffs};
use subhardy::linalg::{c64, from_columns, gap, identity, max_principal_angle, orth, CMat, CVec};
use subhardy::operator::{
    near_isometry_certificate, verify_reduction_properties, wandering_basis, OperatorMatrix,
};
use subhardy::wold::{
    classify_restriction, lemma_ot_check, multivariable_wold, wold_decompose, RestrictionKind,
};
use subhardy::{BlaschkeProduct, CoefVector, Error, TmIndex, TruncatedHardySpace};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(n, n, |_, _| standard_complex(rng)).qr().q()
}

/// `U diag(s) V` with singular values drawn from `[lo, hi]`.
fn random_contraction(n: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> CMat {
    let s = DVector::from_fn(n, |_, _| c64(rng.random_range(lo..hi), 0.0));
    random_unitary(n, rng) * CMat::from_diagonal(&s) * random_unitary(n, rng)
}

fn shift_matrix(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| {
        if i == j + 1 {
            c64(1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// `S_n ⊕ Q`, window: every coordinate except the last one of the shift.
fn shift_plus(n: usize, q: &CMat) -> OperatorMatrix {
    let d = n + q.nrows();
    let mut m = CMat::zeros(d, d);
    m.view_mut((0, 0), (n, n)).copy_from(&shift_matrix(n));
    m.view_mut((n, n), q.shape()).copy_from(q);
    let window = (0..d).filter(|&k| k != n - 1).collect();
    OperatorMatrix::with_window(m, window).unwrap()
}

/// `(S_n ⊗ I, I ⊗ Q)` with product windows.
fn block_tensor(n: usize, q: &CMat) -> Vec<OperatorMatrix> {
    let k = q.nrows();
    let d = n * k;
    let t1 = shift_matrix(n).kronecker(&identity(k));
    let t2 = identity(n).kronecker(q);
    let w1 = (0..d).filter(|&i| i / k != n - 1).collect();
    vec![
        OperatorMatrix::with_window(t1, w1).unwrap(),
        OperatorMatrix::new(t2).unwrap(),
    ]
}

fn bidisc(cap: usize) -> (TruncatedHardySpace, Vec<OperatorMatrix>) {
    let space = TruncatedHardySpace::new(vec![cap, cap]).unwrap();
    let z = BlaschkeProduct::z();
    let ts = (1..=2)
        .map(|v| multiplication_matrix(&space, &z, v).unwrap().to_operator())
        .collect();
    (space, ts)
}

fn coordinate_span(dim: usize, coords: impl Iterator<Item = usize>) -> CMat {
    let cols: Vec<CVec> = coords
        .map(|k| {
            let mut v = CVec::zeros(dim);
            v[k] = c64(1.0, 0.0);
            v
        })
        .collect();
    from_columns(dim, &cols)
}

fn random_product(rng: &mut ChaCha8Rng) -> BlaschkeProduct {
    let degree = rng.random_range(1..=3);
    let mut zeros = vec![c64(0.0, 0.0)];
    for _ in 1..degree {
        let r = 0.8 * rng.random::<f64>();
        let t = std::f64::consts::TAU * rng.random::<f64>();
        zeros.push(Complex64::from_polar(r, t));
    }
    BlaschkeProduct::new(zeros).unwrap()
}

fn tm_orthonormality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let nodes = 4096;
    let boundary: Vec<Complex64> = (0..nodes)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / nodes as f64))
        .collect();
    let (mut worst_coef, mut worst_quad, mut worst_cross) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let b = random_product(&mut rng);
        let cap = b.recommended_cap().max(400);
        let idx: Vec<TmIndex> = (0..=10)
            .flat_map(|m| (0..b.degree()).map(move |j| TmIndex::new(j, m)))
            .collect();
        let coef = CMat::from_columns(
            &idx.iter()
                .map(|&i| b.tm_basis_coeffs(i, cap).unwrap().into_coeffs())
                .collect::<Vec<_>>(),
        );
        let samples = CMat::from_fn(nodes, idx.len(), |k, c| {
            b.tm_evaluate(idx[c], boundary[k]).unwrap()
        });
        let g_coef = coef.adjoint() * &coef;
        let g_quad = samples.adjoint() * &samples / c64(nodes as f64, 0.0);
        let eye = identity(idx.len());
        worst_coef = worst_coef.max(
            (&g_coef - &eye)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
        );
        worst_quad = worst_quad.max(
            (&g_quad - &eye)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
        );
        worst_cross = worst_cross.max(
            (&g_coef - &g_quad)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
        );
    }
    ensure(
        worst_coef < 1e-8,
        format!("coefficient Gram defect {worst_coef:e}"),
    )?;
    ensure(
        worst_quad < 1e-8,
        format!("quadrature Gram defect {worst_quad:e}"),
    )?;
    ensure(
        worst_cross < 1e-8,
        format!("coefficient/quadrature mismatch {worst_cross:e}"),
    )?;
    Ok(format!(
        "gram defect {worst_coef:.1e}, quadrature {worst_quad:.1e}, cross {worst_cross:.1e}"
    ))
}

/// Product of two truncated power series on the same grid.
fn truncated_product(space: &TruncatedHardySpace, a: &CVec, b: &CVec) -> CVec {
    let idx: Vec<Vec<usize>> = space.indices().collect();
    let mut out = CVec::zeros(space.dim());
    for (p, x) in idx.iter().zip(a.iter()) {
        for (q, y) in idx.iter().zip(b.iter()) {
            let k: Vec<usize> = p.iter().zip(q).map(|(u, v)| u + v).collect();
            if let Ok(at) = space.index_of(&k) {
                out[at] += x * y;
            }
        }
    }
    out
}

fn st7_reconstruction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let space = TruncatedHardySpace::new(vec![12, 12]).unwrap();
    let pairs = [
        vec![
            BlaschkeProduct::from_real(&[0.0, 0.5]).unwrap(),
            BlaschkeProduct::monomial(2),
        ],
        vec![
            BlaschkeProduct::new(vec![c64(0.0, 0.0), c64(-0.3, 0.4), c64(0.2, 0.0)]).unwrap(),
            BlaschkeProduct::from_real(&[0.0, -0.6]).unwrap(),
        ],
    ];
    let mut worst = 0.0f64;
    for k in 0..50 {
        let bs = &pairs[k % pairs.len()];
        let coeffs = CVec::from_fn(space.dim(), |_, _| standard_complex(&mut rng));
        let f = CoefVector::new(space.clone(), coeffs).unwrap();
        let d = st7_decompose(&f, bs).map_err(|e| e.to_string())?;
        // rebuild f = Σ e_{j0}·f_j as an independent check of the reported residual
        let mut sum = CVec::zeros(space.dim());
        for c in &d.components {
            let head =
                tensor_tm_basis_coeffs(bs, &c.j, &[0, 0], &space).map_err(|e| e.to_string())?;
            let tail = c.function(bs, &space).map_err(|e| e.to_string())?;
            sum += truncated_product(&space, head.coeffs(), tail.coeffs());
        }
        let rebuilt = (&sum - f.coeffs()).norm() / f.norm();
        worst = worst.max(d.relative_residual).max(rebuilt);
    }
    ensure(worst < 1e-9, format!("relative residual {worst:e}"))?;
    Ok(format!("50 functions, worst relative residual {worst:.1e}"))
}

fn weighted_shift_separation() -> Check {
    let r = section2_report(12, 64, 1e-9).map_err(|e| e.to_string())?;
    let w = &r.weighted_shift;
    ensure(w.certificate.k_max == 8, "k_max")?;
    ensure(w.certificate.verdict, "near-isometry verdict false")?;
    ensure(
        (w.certificate.delta - 0.5).abs() < 1e-12,
        format!("delta {}", w.certificate.delta),
    )?;
    ensure(
        (w.cond_a_at_e1 + 0.75).abs() < 1e-12,
        format!("witness value {}", w.cond_a_at_e1),
    )?;
    ensure(!w.shimorin.cond_a.holds, "first condition holds")?;
    ensure(!w.shimorin.cond_b.holds, "second condition holds")?;
    Ok(format!(
        "delta {}, value at e1 {}",
        w.certificate.delta, w.cond_a_at_e1
    ))
}

fn lattice_separation() -> Check {
    let r = section2_report(12, 64, 1e-9).map_err(|e| e.to_string())?;
    let l = &r.lattice;
    let inner = l.witness.inner_tf_t2g;
    ensure(
        l.shimorin.cond_a.min_eigenvalue >= -1e-10,
        format!("min eigenvalue {}", l.shimorin.cond_a.min_eigenvalue),
    )?;
    ensure(!l.certificate.verdict, "lattice operator certified")?;
    ensure(
        (inner[0] + 1.0).abs() < 1e-12 && inner[1].abs() < 1e-12,
        format!("inner product {inner:?}"),
    )?;
    ensure(
        l.witness.tf_matches && l.witness.t2g_matches,
        "displayed expansions differ",
    )?;
    Ok(format!(
        "min eigenvalue {:.1e}, <Tf,T^2g> = {}",
        l.shimorin.cond_a.min_eigenvalue, inner[0]
    ))
}

fn single_wold() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let q = random_contraction(8, 0.6, 0.95, &mut rng);
    let t = shift_plus(16, &q);
    let wd = wold_decompose(&t, 16, 1e-9).map_err(|e| e.to_string())?;
    let q_block = coordinate_span(24, 16..24);
    let angle = max_principal_angle(&wd.invertible_part, &q_block);
    ensure(
        wd.invertible_part.ncols() == 8,
        format!("invertible dim {}", wd.invertible_part.ncols()),
    )?;
    ensure(angle < 1e-8, format!("principal angle {angle:e}"))?;
    ensure(
        wd.residuals.layer_orthogonality < 1e-10,
        format!("layers {:e}", wd.residuals.layer_orthogonality),
    )?;

    let u = random_unitary(8, &mut rng);
    let iso = shift_plus(16, &u);
    let wd = wold_decompose(&iso, 16, 1e-9).map_err(|e| e.to_string())?;
    let inv = wd
        .invertible_restriction
        .as_ref()
        .ok_or("no invertible part")?;
    ensure(inv.unitary, "invertible part not unitary")?;
    ensure(
        (inv.sigma_min - 1.0).abs() < 1e-9 && (inv.sigma_max - 1.0).abs() < 1e-9,
        "singular values off 1",
    )?;
    let shift = classify_restriction(&iso, &wd.shift_part(), 1e-9).map_err(|e| e.to_string())?;
    ensure(
        shift.kind == RestrictionKind::Shift,
        format!("shift part classified {:?}", shift.kind),
    )?;
    ensure(
        wd.residuals.completeness < 1e-9,
        format!("completeness {:e}", wd.residuals.completeness),
    )?;
    Ok(format!(
        "angle {angle:.1e}, isometric split completeness {:.1e}",
        wd.residuals.completeness
    ))
}

fn multi_wold() -> Check {
    let (_, ts) = bidisc(12);
    let mw = multivariable_wold(&ts, 2, None, 1e-9).map_err(|e| e.to_string())?;
    for s in &mw.summands[..3] {
        ensure(
            s.dim == 0,
            format!("summand {:?} has dimension {}", s.subset, s.dim),
        )?;
    }
    let full = mw.summand(&[1, 2]).ok_or("missing summand")?;
    let g = gap(&full.basis, &identity(169));
    ensure(g < 1e-8, format!("full summand gap {g:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let q = random_contraction(3, 0.6, 0.95, &mut rng);
    let ts = block_tensor(6, &q);
    let mw = multivariable_wold(&ts, 2, None, 1e-9).map_err(|e| e.to_string())?;
    let h1 = mw.summand(&[1]).ok_or("missing summand")?;
    let g1 = gap(&h1.basis, &identity(18));
    ensure(g1 < 1e-8, format!("H_1 gap {g1:e}"))?;
    let kinds: Vec<_> = h1
        .classification
        .iter()
        .map(|c| c.as_ref().map(|r| r.kind))
        .collect();
    ensure(
        kinds
            == [
                Some(RestrictionKind::Shift),
                Some(RestrictionKind::Invertible),
            ],
        format!("kinds {kinds:?}"),
    )?;

    let u = random_unitary(3, &mut rng);
    let ts = block_tensor(6, &u);
    let mw = multivariable_wold(&ts, 2, None, 1e-9).map_err(|e| e.to_string())?;
    let mut unitary = 0;
    for s in mw.summands.iter().filter(|s| s.dim > 0) {
        for r in s
            .classification
            .iter()
            .flatten()
            .filter(|r| r.kind == RestrictionKind::Invertible)
        {
            ensure(
                r.unitary && (r.sigma_min - 1.0).abs() < 1e-9 && (r.sigma_max - 1.0).abs() < 1e-9,
                "not unitary",
            )?;
            unitary += 1;
        }
    }
    ensure(
        unitary > 0,
        "no invertible restriction in the isometric case",
    )?;
    Ok(format!("bidisc gap {g:.1e}, block-tensor gap {g1:.1e}"))
}

struct Extraction {
    g: GeneratorSet,
    m: ModelSubspace,
    bs: Vec<BlaschkeProduct>,
}

fn extract(
    m: ModelSubspace,
    bs: Vec<BlaschkeProduct>,
    violations: &Cell<usize>,
) -> Result<Extraction, String> {
    match extract_generators(&m, &bs, 1e-9) {
        Ok(g) => {
            if g.r > g.bound || !g.bound_holds {
                violations.set(violations.get() + 1);
            }
            Ok(Extraction { g, m, bs })
        }
        Err(Error::BoundViolation { r, bound }) => {
            violations.set(violations.get() + 1);
            Err(format!("BOUND_VIOLATION {r} > {bound}"))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn debranges() -> Check {
    let violations = Cell::new(0);

    // z² on the full space: generators span {1, z}
    let a = extract(
        ModelSubspace::full(TruncatedHardySpace::one_variable(40)),
        vec![BlaschkeProduct::monomial(2)],
        &violations,
    )?;
    ensure(a.g.r == 2, format!("r = {} for z^2", a.g.r))?;
    let phis = CMat::from_columns(
        &a.g.phis
            .iter()
            .map(|p| p.coeffs().clone())
            .collect::<Vec<_>>(),
    );
    let angle_a = max_principal_angle(&orth(&phis, 1e-12), &coordinate_span(41, 0..2));
    ensure(angle_a < 1e-8, format!("span angle {angle_a:e}"))?;

    // φH² for a single Möbius factor
    let (count, cap) = (20, 80);
    let phi_coeffs = BlaschkeProduct::new_unnormalized(vec![c64(0.5, 0.0)])
        .unwrap()
        .coefficients(cap);
    let b = extract(
        multiplier_range(&phi_coeffs, count, cap).unwrap(),
        vec![BlaschkeProduct::z()],
        &violations,
    )?;
    ensure(b.g.r == 1, format!("r = {} for the Möbius range", b.g.r))?;
    let got = b.g.phis[0].coeffs();
    let want = CVec::from_vec(phi_coeffs.clone());
    let overlap = got.dotc(&want);
    let phase = overlap / overlap.norm();
    let phase_err = (got - &want * phase.conj()).norm();
    ensure(
        phase_err < 1e-8,
        format!("recovered multiplier off by {phase_err:e}"),
    )?;

    // two variables, z² and z on the bidisc
    let c = extract(
        ModelSubspace::full(TruncatedHardySpace::new(vec![7, 5]).unwrap()),
        vec![BlaschkeProduct::monomial(2), BlaschkeProduct::z()],
        &violations,
    )?;
    ensure(c.g.r == 2, format!("r = {} on the bidisc", c.g.r))?;

    // decreasing Gram diagonal: a strict contraction
    let k = 12;
    let space = TruncatedHardySpace::one_variable(k);
    let span = (0..=k)
        .map(|i| CoefVector::monomial(space.clone(), &[i]).unwrap())
        .collect();
    let gram = CMat::from_diagonal(&CVec::from_fn(k + 1, |i, _| {
        c64(1.0 + 0.5f64.powi(i as i32), 0.0)
    }));
    let d = extract(
        ModelSubspace::new(space, span, Some(gram), None).unwrap(),
        vec![BlaschkeProduct::z()],
        &violations,
    )?;
    let strict = verify_contraction_property(&d.g, &d.bs, &d.m, 32, DEFAULT_SEED, 1e-9)
        .map_err(|e| e.to_string())?;
    ensure(
        strict.passes && strict.strict,
        format!("contraction {strict:?}"),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let (mut worst_rep, mut worst_norm, mut worst_sigma) = (0.0f64, 0.0f64, f64::INFINITY);
    for e in [&a, &b, &c, &d] {
        worst_rep = worst_rep.max(e.g.residual_representation);
        let ind = verify_independence(&e.g, &e.bs, &e.m, 1e-9).map_err(|e| e.to_string())?;
        worst_sigma = worst_sigma.min(ind.sigma_min);
        // the identity is an equality only when the model carries the ambient norm
        let n_samples = if std::ptr::eq(e, &d) { 0 } else { 50 };
        for _ in 0..n_samples {
            let fs =
                random_f_tuple(&e.g, &e.m, &e.bs, 1e-9, &mut rng).map_err(|e| e.to_string())?;
            let r =
                verify_norm_identity(&e.g, &fs, &e.m, &e.bs, 1e-9).map_err(|e| e.to_string())?;
            worst_norm = worst_norm.max(r.residual);
        }
        ensure(e.g.bound_holds && e.g.r <= e.g.bound, "bound")?;
    }
    ensure(
        worst_rep < 1e-10,
        format!("representation residual {worst_rep:e}"),
    )?;
    ensure(
        worst_norm < 1e-10,
        format!("norm identity residual {worst_norm:e}"),
    )?;
    ensure(
        worst_sigma > 0.1,
        format!("independence sigma_min {worst_sigma}"),
    )?;
    ensure(
        violations.get() == 0,
        format!("{} bound violations", violations.get()),
    )?;
    Ok(format!(
        "angle {angle_a:.1e}, phase error {phase_err:.1e}, representation {worst_rep:.1e}, norm identity {worst_norm:.1e}, sigma_min {worst_sigma:.3}"
    ))
}

fn reduction_and_orbit_lemma() -> Check {
    let mut worst = 0.0f64;
    let (space, bd) = bidisc(6);
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let q = random_contraction(3, 0.6, 0.95, &mut rng);
    let bt = block_tensor(6, &q);
    for ts in [&bd, &bt] {
        for (a, j) in [(vec![], 0), (vec![], 1), (vec![0], 1), (vec![1], 0)] {
            let r = verify_reduction_properties(ts, &a, j, 1e-9).map_err(|e| e.to_string())?;
            ensure(r.verdict, format!("reduction A={a:?} j={j}: {r:?}"))?;
            worst = worst
                .max(r.invariance_residual)
                .max(r.adjoint_invariance_residual)
                .max(r.subspace_gap);
        }
    }

    let w = coordinate_span(
        space.dim(),
        (0..=6).map(|k| space.index_of(&[k, 0]).unwrap()),
    );
    let bt_w = wandering_basis(&bt, &[0], 1e-9).map_err(|e| e.to_string())?;
    for (t1, t2, w) in [(&bd[0], &bd[1], &w), (&bt[1], &bt[0], &bt_w)] {
        let r = lemma_ot_check(t1, t2, w, 8, 1e-9).map_err(|e| e.to_string())?;
        ensure(
            r.hypothesis_failure.is_none(),
            format!("hypothesis {:?}", r.hypothesis_failure),
        )?;
        let ids = [
            r.identity_i,
            r.identity_ii_full,
            r.identity_ii_wandering,
            r.identity_iii,
        ];
        for g in ids.iter().flatten() {
            worst = worst.max(*g);
        }
        worst = worst
            .max(r.hypotheses.commutation)
            .max(r.hypotheses.invariance)
            .max(r.hypotheses.orthogonality);
    }
    ensure(worst < 1e-8, format!("largest residual {worst:e}"))?;
    let c = near_isometry_certificate(&bt[1], 8, 1e-9).map_err(|e| e.to_string())?;
    ensure(c.verdict, "block-tensor factor not certified")?;
    Ok(format!("largest residual {worst:.1e}"))
}

fn cli_contract() -> Check {
    let dir = std::env::temp_dir().join(format!("subhardy-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let shift = OperatorMatrix::with_window(shift_matrix(12), (0..11).collect()).unwrap();
    let pass = write("shift.json", &serde_json::to_string(&shift).unwrap());
    let fail = write(
        "expanding.json",
        r#"{"matrix": [[[0.5, 0], [0, 0]], [[0, 0], [2, 0]]]}"#,
    );
    let garbage = write("garbage.json", r#"{"matrix": [[[1, 0]]], "window": "all""#);
    let subspace = ModelSubspace::full(TruncatedHardySpace::one_variable(9));
    let debr = write(
        "debranges.json",
        &serde_json::json!({ "subspace": subspace, "products": [BlaschkeProduct::monomial(2)] })
            .to_string(),
    );

    let run = |command: Command, input: Option<&std::path::Path>| {
        let config = RunConfig {
            input_path: input.map(|p| p.to_path_buf()),
            seed: 17,
            ..RunConfig::new(command)
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli::run(&config, &mut out, &mut err);
        (code, out, err)
    };
    let mut checked = 0;
    for (command, input) in [
        (Command::Debranges, Some(debr.as_path())),
        (Command::Wold, Some(pass.as_path())),
        (Command::Gallery, None),
    ] {
        let first = run(command, input);
        let second = run(command, input);
        ensure(first.0 == 0, format!("{command} exited {}", first.0))?;
        ensure(
            !first.1.is_empty() && first.1 == second.1,
            format!("{command} reports differ"),
        )?;
        checked += 1;
    }
    let codes = [
        run(Command::Check, Some(&pass)).0,
        run(Command::Check, Some(&fail)).0,
        run(Command::Check, Some(&garbage)).0,
    ];
    ensure(codes == [0, 1, 2], format!("exit codes {codes:?}"))?;
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!(
        "{checked} deterministic reports, exit codes {codes:?}"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("TM-basis orthonormality", tm_orthonormality),
        ("tensor TM reconstruction", st7_reconstruction),
        ("separation: weighted shift", weighted_shift_separation),
        ("separation: lattice operator", lattice_separation),
        ("single-operator Wold engine", single_wold),
        ("multivariable Wold engine", multi_wold),
        ("generator extraction", debranges),
        (
            "reduction and orbit-lemma suites",
            reduction_and_orbit_lemma,
        ),
        ("CLI determinism and exit codes", cli_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL [{}] {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
