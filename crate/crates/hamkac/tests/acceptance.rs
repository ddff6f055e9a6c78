//! Acceptance suite: one test per criterion, each printing a PASS / FAIL /
//! FAIL-AS-STATED line. FAIL-AS-STATED marks a criterion whose expected
//! claim is refuted by the machine with a certified witness; the test then
//! asserts the verified state of affairs, so the suite stays green exactly
//! when the engine reproduces reality.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::sync::OnceLock;
use std::time::Instant;

use hamkac::dpsuper::MonoIdx;
use hamkac::hamalg::HamElement;
use hamkac::kacmod::{
    act_uncached, build_kac, verify_chi_reduced, verify_module_law, Character, ChiType,
    KacBasisIdx, KacModule, LawMode, PeelOrder,
};
use hamkac::l0rep::{build_l0, check_l0, OspGen, Weight};
use hamkac::repkit::{
    hom_dims, meataxe, meataxe_verdict, rep_of_kac, rep_of_l0, spin, Verdict, DEFAULT_HOM_BUDGET,
};
use hamkac::{HamAlgebra, Prime, ShapeParams};

fn shape(p: u64, t1: u32, t2: u32) -> ShapeParams {
    ShapeParams::new(Prime::new(p).unwrap(), t1, t2).unwrap()
}

fn alg_5_11() -> &'static HamAlgebra {
    static A: OnceLock<HamAlgebra> = OnceLock::new();
    A.get_or_init(|| HamAlgebra::new(shape(5, 1, 1)))
}

fn alg_7_11() -> &'static HamAlgebra {
    static A: OnceLock<HamAlgebra> = OnceLock::new();
    A.get_or_init(|| HamAlgebra::new(shape(7, 1, 1)))
}

fn alg_5_21() -> &'static HamAlgebra {
    static A: OnceLock<HamAlgebra> = OnceLock::new();
    A.get_or_init(|| HamAlgebra::new(shape(5, 2, 1)))
}

const TYPES: [ChiType; 3] = [ChiType::I, ChiType::II, ChiType::III];

/// All 15 cells for p=5, t=(1,1): (type, λ, module).
fn kac_cells_5_11() -> &'static Vec<(ChiType, u64, KacModule)> {
    static CELLS: OnceLock<Vec<(ChiType, u64, KacModule)>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let alg = alg_5_11();
        let sh = alg.shape();
        let mut out = Vec::new();
        for tag in TYPES {
            let chi = Character::of_type(sh, tag);
            for lam in 0..5u64 {
                let l0 = build_l0(Weight::new(lam as i64, sh.p()), sh.p());
                out.push((tag, lam, build_kac(alg, &l0, &chi)));
            }
        }
        out
    })
}

/// Type I cells for p=5, t=(2,1), λ = 0..4.
fn kac_cells_5_21() -> &'static Vec<(u64, KacModule)> {
    static CELLS: OnceLock<Vec<(u64, KacModule)>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let alg = alg_5_21();
        let sh = alg.shape();
        let chi = Character::of_type(sh, ChiType::I);
        (0..5u64)
            .map(|lam| {
                let l0 = build_l0(Weight::new(lam as i64, sh.p()), sh.p());
                (lam, build_kac(alg, &l0, &chi))
            })
            .collect()
    })
}

/// Type I cells for p=7, t=(1,1), λ = 0..2.
fn kac_cells_7_11() -> &'static Vec<(u64, KacModule)> {
    static CELLS: OnceLock<Vec<(u64, KacModule)>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let alg = alg_7_11();
        let sh = alg.shape();
        let chi = Character::of_type(sh, ChiType::I);
        (0..3u64)
            .map(|lam| {
                let l0 = build_l0(Weight::new(lam as i64, sh.p()), sh.p());
                (lam, build_kac(alg, &l0, &chi))
            })
            .collect()
    })
}

#[test]
fn criterion_01_algebra_dimensions() {
    let start = Instant::now();
    let a5 = HamAlgebra::new(shape(5, 1, 1));
    let a7 = HamAlgebra::new(shape(7, 1, 1));
    assert_eq!(a5.dim(), 49);
    assert_eq!(a5.dim_even(), 24);
    assert_eq!(a5.dim_odd(), 25);
    assert_eq!(a7.dim(), 97);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}, bound 1 s");
    println!("criterion 1: PASS — dim H(2,1;(1,1)) = 49 over F_5, 97 over F_7 ({elapsed:?})");
}

#[test]
fn criterion_02_jacobi_exhaustive() {
    let start = Instant::now();
    let witness = alg_5_11().jacobi_exhaustive();
    assert!(witness.is_none(), "Jacobi failed at {witness:?}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}, bound 30 s");
    println!("criterion 2: PASS — super-Jacobi on all 49³ basis triples, zero failures ({elapsed:?})");
}

#[test]
fn criterion_03_generalized_restricted_structure() {
    let mut lines = Vec::new();
    let mut stated_ok = true;
    for (p, t1, t2, expected_repairs) in [
        (5u64, 1u32, 1u32, vec![]),
        (5, 1, 2, vec![(MonoIdx::new(1, 5, 0), 1u32, 2u32)]),
        (5, 2, 1, vec![(MonoIdx::new(5, 1, 0), 1, 2)]),
        (7, 1, 1, vec![]),
    ] {
        let start = Instant::now();
        let alg = HamAlgebra::new(shape(p, t1, t2));
        let report = alg.verify_gr();
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs() < 60, "took {elapsed:?}, bound 1 min");
        assert!(report.verified_ok, "no verified GR structure for p={p}, t=({t1},{t2})");
        assert_eq!(
            report.repairs(),
            expected_repairs,
            "repair set changed for p={p}, t=({t1},{t2})"
        );
        if expected_repairs.is_empty() {
            assert!(report.claimed_ok);
            lines.push(format!(
                "  (ad e_i)^(p^s_i) = ad φ(e_i) with s = (t2,t1,1,...,1) for p={p}, t=({t1},{t2}) ({elapsed:?})"
            ));
        } else {
            stated_ok = false;
            assert!(!report.claimed_ok);
            let cell = report
                .cells
                .iter()
                .find(|c| !c.claimed_ok)
                .expect("a failing cell must be recorded");
            assert!(cell.counterexample.is_some());
            lines.push(format!(
                "  stated exponent tuple REFUTED for p={p}, t=({t1},{t2}): {} needs s = {} \
                 (counterexample target D_H({}), identity verified after repair) ({elapsed:?})",
                format!("D_H({})", cell.element),
                cell.verified_s.unwrap(),
                cell.counterexample.unwrap(),
            ));
        }
    }
    let verdict = if stated_ok { "PASS" } else { "FAIL-AS-STATED (repaired structure verified)" };
    println!("criterion 3: {verdict}");
    for l in lines {
        println!("{l}");
    }
    // the specific adjoint powers named by the criterion's examples
    let a12 = HamAlgebra::new(shape(5, 1, 2));
    let h = HamElement::basis(a12.shape(), MonoIdx::new(1, 1, 0), 1);
    assert_eq!(
        a12.ad_matrix(&h).matpow(5).unwrap(),
        a12.ad_matrix(&h),
        "ad(D_H(x1x2))^5 = ad(D_H(x1x2))"
    );
    let d2 = HamElement::basis(a12.shape(), MonoIdx::new(1, 0, 0), 1);
    assert!(a12.ad_matrix(&d2).matpow(25).unwrap().is_zero(), "ad(D_H(x1))^25 = 0 at t=(1,2)");
}

#[test]
fn criterion_04_osp_zero_component() {
    let mut corrected = Vec::new();
    for alg in [alg_5_11() as &HamAlgebra, alg_7_11()] {
        let report = alg.verify_osp();
        assert!(report.all_hold(), "osp relations failed: {:?}", report.relations);
        assert_eq!(report.dim_zero_component, 5);
        corrected = report.notes.clone();
    }
    println!(
        "criterion 4: PASS — the 12 osp(1|2) relations hold exactly and dim g_[0] = 5; \
         note: presentations sometimes state [h,e]=e and [h,f]=-f, but the matrix \
         generators h=E22-E33, e=E23, f=E32 satisfy the verified [h,e]=2e, [h,f]=-2f \
         (no rescaling of h makes the other ten relations and those two hold together)"
    );
    assert!(!corrected.is_empty());
}

#[test]
fn criterion_05_l0_modules() {
    for p in [5u64, 7, 11] {
        let sh = shape(p, 1, 1);
        let alg = HamAlgebra::new(sh);
        for lam in 0..p {
            let l0 = build_l0(Weight::new(lam as i64, sh.p()), sh.p());
            let want = if lam == 0 { 1 } else { 2 * lam as usize + 1 };
            assert_eq!(l0.dim(), want, "dim L0({lam}) over F_{p}");
            let rep = check_l0(&l0, &alg);
            assert!(rep.ok(), "L0({lam}) over F_{p}: {:?}", rep.failures);
            let cert = meataxe(&rep_of_l0(&l0), 42 + lam);
            assert_eq!(cert.verdict, Verdict::Irreducible, "L0({lam}) over F_{p}");
            assert_eq!(cert.endo_dim, Some(1), "L0({lam}) over F_{p} absolute irreducibility");
        }
    }
    println!(
        "criterion 5: PASS — L0(λ) dims 1 / 2λ+1, module law on all 25 generator pairs, \
         restrictedness, absolute irreducibility (endo_dim 1) for all λ, p ∈ {{5,7,11}}"
    );
}

#[test]
fn criterion_06_kac_dimensions() {
    for (tag, lam, module) in kac_cells_5_11() {
        let want = if *lam == 0 { 50 } else { (2 * lam + 1) as usize * 50 };
        assert_eq!(module.dim(), want, "dim K_{tag}({lam}) at p=5, t=(1,1)");
    }
    let dims: Vec<usize> =
        kac_cells_5_11().iter().filter(|(t, _, _)| *t == ChiType::I).map(|(_, _, m)| m.dim()).collect();
    assert_eq!(dims, vec![50, 150, 250, 350, 450]);
    let dims21: Vec<usize> = kac_cells_5_21().iter().map(|(_, m)| m.dim()).collect();
    assert_eq!(dims21, vec![250, 750, 1250, 1750, 2250]);
    // the largest module builds in seconds
    let start = Instant::now();
    let alg = alg_5_21();
    let chi = Character::of_type(alg.shape(), ChiType::I);
    let l0 = build_l0(Weight::new(4, alg.shape().p()), alg.shape().p());
    let rebuilt = build_kac(alg, &l0, &chi);
    assert_eq!(rebuilt.dim(), 2250);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "dim-2250 build took {elapsed:?}");
    println!(
        "criterion 6: PASS — Kac dimensions {{50,150,250,350,450}} for every χ type at \
         p=5, t=(1,1) and {{250,750,1250,1750,2250}} at p=5, t=(2,1)"
    );
}

#[test]
fn criterion_07_module_law() {
    let start = Instant::now();
    let alg = alg_5_11();
    // full mode for λ ∈ {0,1}, all three types
    for (tag, lam, module) in kac_cells_5_11() {
        if *lam <= 1 {
            let rep = verify_module_law(alg, module, LawMode::Full);
            assert!(rep.ok(), "full module law fails for type {tag}, λ={lam}: {:?}", rep.failure);
        } else {
            let rep = verify_module_law(
                alg,
                module,
                LawMode::Sampled { seed: 7 + lam, pairs: 200 },
            );
            assert!(rep.ok(), "sampled law fails for type {tag}, λ={lam}: {:?}", rep.failure);
        }
    }
    let full_elapsed = start.elapsed();
    assert!(full_elapsed.as_secs() < 300, "took {full_elapsed:?}, bound 5 min");
    for (lam, module) in kac_cells_5_21() {
        let rep = verify_module_law(
            alg_5_21(),
            module,
            LawMode::Sampled { seed: 100 + lam, pairs: 200 },
        );
        assert!(rep.ok(), "sampled law fails at t=(2,1), λ={lam}: {:?}", rep.failure);
    }
    for (lam, module) in kac_cells_7_11() {
        let rep = verify_module_law(
            alg_7_11(),
            module,
            LawMode::Sampled { seed: 200 + lam, pairs: 200 },
        );
        assert!(rep.ok(), "sampled law fails at p=7, λ={lam}: {:?}", rep.failure);
    }
    println!(
        "criterion 7: PASS — module law exact on all 49² pairs for λ ∈ {{0,1}} × 3 types, \
         sampled (≥200 pairs) on the remaining cells ({full_elapsed:?})"
    );
}

#[test]
fn criterion_08_chi_reduced_identities() {
    let gr11 = alg_5_11().verify_gr();
    for (tag, lam, module) in kac_cells_5_11() {
        let chi = Character::of_type(alg_5_11().shape(), *tag);
        let rep = verify_chi_reduced(alg_5_11(), module, &gr11.structure, &chi);
        assert!(rep.ok(), "chi-reduced fails for type {tag}, λ={lam}");
    }
    let gr21 = alg_5_21().verify_gr();
    let chi21 = Character::of_type(alg_5_21().shape(), ChiType::I);
    for (lam, module) in kac_cells_5_21() {
        let rep = verify_chi_reduced(alg_5_21(), module, &gr21.structure, &chi21);
        assert!(rep.ok(), "chi-reduced fails at t=(2,1), λ={lam}");
    }
    let gr7 = alg_7_11().verify_gr();
    let chi7 = Character::of_type(alg_7_11().shape(), ChiType::I);
    for (lam, module) in kac_cells_7_11() {
        let rep = verify_chi_reduced(alg_7_11(), module, &gr7.structure, &chi7);
        assert!(rep.ok(), "chi-reduced fails at p=7, λ={lam}");
    }
    println!(
        "criterion 8: PASS — generalized χ-reduced identity exact for every even basis \
         element (verified exponents) and ρ(x)² = ½ρ([x,x]) for every odd one, on all 23 \
         built Kac modules"
    );
}

#[test]
fn criterion_09_simplicity() {
    let start = Instant::now();
    let mut refuted = Vec::new();
    // p=5, t=(1,1): all 15 cells
    for (tag, lam, module) in kac_cells_5_11() {
        let rep = rep_of_kac(alg_5_11(), module);
        let seed = 9000 + *lam;
        let cert = meataxe(&rep, seed);
        if *lam == 1 {
            assert_eq!(cert.verdict, Verdict::Reducible, "type {tag} λ=1");
            assert_eq!(cert.endo_dim, Some(3), "type {tag} λ=1 endo");
            let sub = cert.witness_subspace.as_ref().unwrap();
            assert!(sub.certified && sub.is_proper_nonzero());
            refuted.push(format!(
                "K_{tag}(1) at p=5: certified invariant subspace of dim {}",
                sub.dim()
            ));
        } else {
            assert_eq!(cert.verdict, Verdict::Irreducible, "type {tag} λ={lam}");
            assert_eq!(cert.endo_dim, Some(1), "type {tag} λ={lam} endo");
        }
        // determinism: verdicts agree across 5 distinct seeds
        for extra in 1..=4u64 {
            let v = meataxe_verdict(&rep, seed + 1000 * extra);
            assert_eq!(v, cert.verdict, "type {tag} λ={lam} seed {}", seed + 1000 * extra);
        }
    }
    // p=7, t=(1,1), Type I, λ ∈ {0,1,2}
    for (lam, module) in kac_cells_7_11() {
        let rep = rep_of_kac(alg_7_11(), module);
        let cert = meataxe(&rep, 7000 + lam);
        if *lam == 1 {
            assert_eq!(cert.verdict, Verdict::Reducible, "p=7 λ=1");
            let sub = cert.witness_subspace.as_ref().unwrap();
            assert!(sub.certified && sub.is_proper_nonzero());
            refuted.push(format!(
                "K_I(1) at p=7: certified invariant subspace of dim {}",
                sub.dim()
            ));
        } else {
            assert_eq!(cert.verdict, Verdict::Irreducible, "p=7 λ={lam}");
            assert_eq!(cert.endo_dim, Some(1), "p=7 λ={lam}");
        }
        for extra in 1..=4u64 {
            assert_eq!(meataxe_verdict(&rep, 7000 + lam + 1000 * extra), cert.verdict);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}, bound 5 min");
    println!(
        "criterion 9: FAIL-AS-STATED — simplicity holds with endo_dim 1 for every cell \
         except λ = 1, where it is REFUTED with certified witnesses ({elapsed:?}):"
    );
    for r in &refuted {
        println!("  {r}");
    }
    println!(
        "  (L0(1) ≅ g_[-1] as g_[0]-modules, so the invariant tensor \
         D2⊗v_{{1,0,0}} - D3⊗v_{{1,0,1}} + D1⊗v_{{1,1,0}} is a singular vector; \
         the submodule chain is 2p² ⊂ 4p² ⊂ K(1); verdicts agree across 5 seeds)"
    );
    assert_eq!(refuted.len(), 4);
}

#[test]
fn criterion_10_classification() {
    let alg = alg_5_11();
    // pairwise distinct dimensions certify pairwise non-isomorphy
    let dims: Vec<usize> = (0..5).map(|l| if l == 0 { 50 } else { (2 * l + 1) * 50 }).collect();
    for i in 0..dims.len() {
        for j in i + 1..dims.len() {
            assert_ne!(dims[i], dims[j]);
        }
    }
    // frozen machine hom grid for λ, μ ∈ {0,1,2}: identical for all types
    let expect = |l: u64, m: u64| -> (usize, usize) {
        match (l, m) {
            (0, 0) | (2, 2) => (1, 0),
            (0, 1) | (1, 0) => (1, 0),
            (1, 1) => (2, 1),
            _ => (0, 0),
        }
    };
    let mut schur_checked = 0;
    for tag in TYPES {
        let reps: Vec<_> = kac_cells_5_11()
            .iter()
            .filter(|(t, lam, _)| *t == tag && *lam <= 2)
            .map(|(_, lam, m)| (*lam, rep_of_kac(alg, m)))
            .collect();
        for (lam, ra) in &reps {
            for (mu, rb) in &reps {
                let d = hom_dims(ra, rb, DEFAULT_HOM_BUDGET).unwrap();
                assert_eq!(
                    (d.even, d.odd),
                    expect(*lam, *mu),
                    "hom grid mismatch for type {tag}: {lam} -> {mu}"
                );
                // Schur-forced cells (both sides simple)
                if *lam != 1 && *mu != 1 {
                    let want = if lam == mu { 1 } else { 0 };
                    assert_eq!(d.total(), want);
                    schur_checked += 1;
                }
            }
        }
    }
    assert_eq!(schur_checked, 12);
    println!(
        "criterion 10: FAIL-AS-STATED — pairwise non-isomorphy for λ ≠ μ is CONFIRMED by \
         exact dimension comparison, and hom_dim = 0 / 1 holds on every pair of simple \
         cells (Schur); but hom(K(0),K(1)) = hom(K(1),K(0)) = 1 and end(K(1)) has \
         dimension 3 because K(1) is reducible — the stated all-λ expectations are \
         refuted together with criterion 9's simplicity claim"
    );
}

#[test]
fn criterion_11_proof_step_identities() {
    let alg = alg_5_11();
    let sh = alg.shape();
    let chi = Character::of_type(sh, ChiType::I);
    let l0 = build_l0(Weight::new(0, sh.p()), sh.p());
    let module = build_kac(alg, &l0, &chi);

    // h · (D1^i1 D2^i2 ⊗ v0) = (i1 - i2)(D1^i1 D2^i2 ⊗ v0)
    for (a, b) in [(0u32, 0u32), (1, 0), (2, 1), (4, 4), (3, 1)] {
        let v = KacBasisIdx { a, b, c: 0, k: 0, l: 0 };
        let got = module.act(alg, MonoIdx::new(1, 1, 0), v);
        let coeff = ((a as i64 - b as i64).rem_euclid(5)) as u64;
        let want: Vec<(KacBasisIdx, u64)> =
            if coeff == 0 { vec![] } else { vec![(v, coeff)] };
        assert_eq!(got, want, "weight identity at (a,b)=({a},{b})");
    }

    // (ξD1 + x2D3) · (D3 ⊗ v0) = D1 ⊗ v0; the generator E is -D_H(x2 ξ)
    let d3v = KacBasisIdx { a: 0, b: 0, c: 1, k: 0, l: 0 };
    let raw = module.act(alg, MonoIdx::new(0, 1, 1), d3v);
    let d1v = KacBasisIdx { a: 1, b: 0, c: 0, k: 0, l: 0 };
    assert_eq!(raw, vec![(d1v, 4)], "E·(D3⊗v0) = D1⊗v0 up to the dictionary sign");

    // D1^(p^t1 - 1) · (D1 ⊗ v0) = χ(D1)^(p^t1) · (1 ⊗ v0) = 1 ⊗ v0
    let dh_x2 = alg.basis_index(MonoIdx::new(0, 1, 0)).unwrap();
    let mut v = vec![0u64; module.dim()];
    v[module.basis_index(d1v).unwrap()] = 1;
    for _ in 0..4 {
        v = module.action(dh_x2).apply(&v); // D_H(x2) = -D1
        v.iter_mut().for_each(|x| *x = (*x * 4) % 5); // times -1
    }
    let unit = module.basis_index(KacBasisIdx { a: 0, b: 0, c: 0, k: 0, l: 0 }).unwrap();
    let mut want = vec![0u64; module.dim()];
    want[unit] = 1;
    assert_eq!(v, want, "D1^4 · D1⊗v0 = χ(D1)^5 ⊗ v0");

    // same identity at t=(2,1), where the reduction needs 25 steps
    let alg21 = alg_5_21();
    let chi21 = Character::of_type(alg21.shape(), ChiType::I);
    let l021 = build_l0(Weight::new(0, alg21.shape().p()), alg21.shape().p());
    let m21 = build_kac(alg21, &l021, &chi21);
    let got = act_uncached(
        alg21,
        &l021,
        &chi21,
        PeelOrder::D1First,
        MonoIdx::new(0, 1, 0),
        KacBasisIdx { a: 24, b: 0, c: 0, k: 0, l: 0 },
    );
    // -D1 · D1^24 ⊗ v0 = -χ(D1)^25 · 1 ⊗ v0 = -1 ⊗ v0
    assert_eq!(got, vec![(KacBasisIdx { a: 0, b: 0, c: 0, k: 0, l: 0 }, 4)]);
    let _ = m21;

    println!(
        "criterion 11: PASS — the transcribed proof-step vector identities hold exactly \
         (weight rule, E·D3⊗v0 = D1⊗v0, and the χ(D1)^(p^t1) overflow reduction at \
         t=(1,1) and t=(2,1))"
    );
}

#[test]
fn criterion_12_negative_controls() {
    // flipped structure constant breaks Jacobi, with a witness triple
    let mut corrupted = HamAlgebra::new(shape(5, 1, 1));
    assert!(corrupted.jacobi_exhaustive().is_none());
    corrupted.flip_structure_constant(5, 11);
    let witness = corrupted.jacobi_exhaustive();
    assert!(witness.is_some(), "flipped constant must break Jacobi");

    // flipped action entry breaks the module law, with a witness pair
    let alg = alg_5_11();
    let sh = alg.shape();
    let chi = Character::of_type(sh, ChiType::II);
    let l0 = build_l0(Weight::new(0, sh.p()), sh.p());
    let mut module = build_kac(alg, &l0, &chi);
    assert!(verify_module_law(alg, &module, LawMode::Full).ok());
    module.corrupt_action_entry(13, 21, 4);
    let report = verify_module_law(alg, &module, LawMode::Full);
    let failure = report.failure.expect("flipped entry must break the module law");
    let _ = (failure.x, failure.y, failure.witness);

    // a direct sum is reported reducible with a certified proper subspace
    let clean = build_kac(alg, &l0, &chi);
    let rep = rep_of_kac(alg, &clean);
    let double = rep.direct_sum(&rep);
    let cert = meataxe(&double, 555);
    assert_eq!(cert.verdict, Verdict::Reducible);
    let sub = cert.witness_subspace.unwrap();
    assert!(sub.is_proper_nonzero() && sub.certified);

    println!(
        "criterion 12: PASS — corrupted structure constants fail Jacobi, corrupted \
         actions fail the module law, and M ⊕ M is reported reducible, each with a \
         concrete witness"
    );
}

/// Not a numbered criterion: singular vectors of the reducible cells spin
/// to the recorded submodule chain, and every singular vector of a simple
/// cell spins to the full module.
#[test]
fn singular_vector_structure() {
    let alg = alg_5_11();
    for (tag, lam, module) in kac_cells_5_11() {
        if *tag != ChiType::I {
            continue;
        }
        let rep = rep_of_kac(alg, module);
        let svs = hamkac::repkit::kac_singular_vectors(alg, module);
        let subs: Vec<_> = svs
            .iter()
            .map(|(_, v)| spin(std::slice::from_ref(v), rep.gens()))
            .collect();
        let mut dims: Vec<usize> = subs.iter().map(|s| s.dim()).collect();
        dims.sort_unstable();
        match lam {
            0 => assert_eq!(dims, vec![50, 50]),
            1 => {
                assert_eq!(dims, vec![50, 50, 100, 150]);
                // the two 50-dimensional spins agree, and the chain
                // 50 ⊂ 100 ⊂ 150 is a genuine containment chain
                let fifties: Vec<_> = subs.iter().filter(|s| s.dim() == 50).collect();
                let hundred = subs.iter().find(|s| s.dim() == 100).unwrap();
                assert_eq!(fifties[0].rows, fifties[1].rows, "both 50-spins are one subspace");
                let mut stacked = hundred.rows.clone();
                stacked.extend(fifties[0].rows.clone());
                let rank = hamkac::MatrixGF::from_dense_rows(stacked, alg.shape().p()).rank();
                assert_eq!(rank, 100, "the 50-dim submodule lies inside the 100-dim one");
            }
            _ => assert_eq!(dims, vec![module.dim()]),
        }
    }
    // L0(λ): the unique singular line is v_{λ,0,0}
    let p = Prime::new(5).unwrap();
    for lam in 1..5i64 {
        let l0 = build_l0(Weight::new(lam, p), p);
        let raising = [l0.matrix(OspGen::SmallE), l0.matrix(OspGen::BigE)];
        let sv = hamkac::repkit::singular_vectors(&l0.matrix(OspGen::H), &raising);
        assert_eq!(sv.len(), 1);
        assert_eq!(sv[0].0, lam as u64);
    }
}
