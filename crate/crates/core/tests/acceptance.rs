//! One test per acceptance criterion. Each prints a single
//! `PASS criterion N: ...` or `FAIL criterion N: ...` line.

mod common;

use std::io::Write;

use common::{brute_force_commutant_dim, in_integer_span, kernel_vectors_in_box, rank, to_fock, Fock, Var};
use freefield::commutant::{extract_lattice_unit, lattice_contraction, omega, Charge, DiagonalAction};
use freefield::expr::Context;
use freefield::linalg::{dot, integer_kernel_basis, ActionMatrix};
use freefield::ope::{circle, conformal_vector, is_primary, pole_bound, verify_virasoro, wick};
use freefield::poly::Poly;
use freefield::selftest::{random_monomial, random_poly, sample_actions, OMEGA_2, OMEGA_3};
use freefield::transvect::{fmap, star_extract_lattice_unit, star_k, star_k_weyl, transvectant};
use freefield::w3::{build_bc_lw, build_heis_lw, build_ls_ws, highest_weight_data, verify_w3_ope, zhu_ideal_check};
use freefield::weyl::WeylElement;
use freefield::zhu::{cokernel_probe, zhu_image};
use freefield::{FreeAlgebraSpec, Grade, Grading, Scalar, State};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

/// Collects failed sub-checks and prints the verdict line.
struct Verdict {
    id: u32,
    title: &'static str,
    total: usize,
    failures: Vec<String>,
}

impl Verdict {
    fn new(id: u32, title: &'static str) -> Self {
        Verdict { id, title, total: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty() && self.total > 0
    }

    /// Written straight to the stdout handle so the line survives the test
    /// harness's output capture.
    fn print(&self) {
        let line = if self.passed() {
            format!("PASS criterion {}: {} ({} sub-checks)\n", self.id, self.title, self.total)
        } else {
            format!("FAIL criterion {}: {}: {}\n", self.id, self.title, self.failures.join("; "))
        };
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(line.as_bytes());
        let _ = out.flush();
    }

    fn finish(self) {
        self.print();
        assert!(self.passed(), "criterion {} failed: {:?}", self.id, self.failures);
    }
}

#[test]
fn criterion_01_ope_tables() {
    let mut v = Verdict::new(1, "OPE tables");
    let levels = vec![s(1), s(-2), q(3, 2)];
    let alg = FreeAlgebraSpec::new(1, 1, levels.clone()).shared();
    let g = |i| State::generator(&alg, i);
    let one = State::vacuum(&alg);
    let (beta, gamma, b, c) = (g(alg.beta(0)), g(alg.gamma(0)), g(alg.b(0)), g(alg.c(0)));
    v.check(circle(&beta, &gamma, 0).unwrap() == one, || "beta o0 gamma".into());
    v.check(circle(&gamma, &beta, 0).unwrap() == -&one, || "gamma o0 beta".into());
    v.check(circle(&b, &c, 0).unwrap() == one, || "b o0 c".into());
    v.check(circle(&c, &b, 0).unwrap() == one, || "c o0 b".into());
    for (x, y) in [(&beta, &beta), (&gamma, &gamma), (&b, &b), (&c, &c), (&beta, &b), (&gamma, &c)] {
        for n in 0..3 {
            v.check(circle(x, y, n).unwrap().is_zero(), || format!("{x} o{n} {y}"));
        }
    }
    for (i, lv) in levels.iter().enumerate() {
        let j = g(alg.heis(i));
        v.check(circle(&j, &j, 1).unwrap() == State::scalar(&alg, lv.clone()), || format!("j{} o1 j{}", i + 1, i + 1));
        v.check(circle(&j, &j, 0).unwrap().is_zero(), || format!("j{} o0 j{}", i + 1, i + 1));
    }

    let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
    let theta = act.theta(0).unwrap();
    v.check(circle(&theta, &theta, 1).unwrap() == State::scalar(act.algebra(), s(-1)), || "theta o1 theta".into());
    v.check(circle(&theta, &theta, 0).unwrap().is_zero(), || "theta o0 theta".into());

    // the same numbers from the mode operators on the Fock space
    let fb = Fock::monomial(&[Var::B(0, 0)]);
    let fg = Fock::monomial(&[Var::G(0, 0)]);
    let vac = Fock::monomial(&[]);
    v.check(fg.beta_mode(0, 0) == vac, || "Fock: beta(0) gamma(-1)|0>".into());
    v.check(fb.gamma_mode(0, 0) == vac.scale(&s(-1)), || "Fock: gamma(0) beta(-1)|0>".into());
    let ft = to_fock(&theta);
    v.check(ft.current_mode(0, 1) == vac.scale(&s(-1)), || "Fock: theta(1) theta".into());
    v.check(ft.current_mode(0, 0).is_zero(), || "Fock: theta(0) theta".into());
    v.finish();
}

fn alpha_grid(n: usize) -> Vec<Vec<Scalar>> {
    let vals = [Scalar::zero(), q(1, 2), Scalar::one()];
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| vals.iter().map(move |a| [v.clone(), vec![a.clone()]].concat())).collect();
    }
    out
}

#[test]
fn criterion_02_virasoro() {
    let mut v = Verdict::new(2, "Virasoro for L^alpha");
    for n in 1..=2 {
        let alg = FreeAlgebraSpec::beta_gamma(n);
        for alpha in alpha_grid(n) {
            let c: Scalar = alpha.iter().fold(Scalar::zero(), |acc, a| &acc + &(&(&(&s(12) * a) * a) - &(&s(12) * a)) + s(2));
            let (l, c_lib) = conformal_vector(&alg, &alpha).unwrap();
            v.check(c_lib == c, || format!("alpha={alpha:?}: c={c_lib}"));
            v.check(verify_virasoro(&l, &c).unwrap(), || format!("alpha={alpha:?}: Virasoro"));
            // the central term read off directly
            v.check(circle(&l, &l, 3).unwrap() == State::scalar(&alg, &c * &q(1, 2)), || format!("alpha={alpha:?}: L o3 L"));
            for (j, a) in alpha.iter().enumerate() {
                let beta = State::generator(&alg, alg.beta(j));
                let gamma = State::generator(&alg, alg.gamma(j));
                v.check(is_primary(&l, &beta, a).unwrap(), || format!("alpha={alpha:?}: beta{} primary", j + 1));
                v.check(is_primary(&l, &gamma, &(&Scalar::one() - a)).unwrap(), || format!("alpha={alpha:?}: gamma{} primary", j + 1));
            }
        }
    }
    v.finish();
}

#[test]
fn criterion_03_w3() {
    let mut v = Verdict::new(3, "W3 at c = -2");
    let pairs = [
        ("S", build_ls_ws(&FreeAlgebraSpec::beta_gamma(1), 0).unwrap()),
        ("H", build_heis_lw(&FreeAlgebraSpec::heisenberg(vec![Scalar::one()]), 0).unwrap()),
        ("E", build_bc_lw(&FreeAlgebraSpec::bc(1), 0).unwrap()),
    ];
    for (name, (l, w)) in pairs {
        let alg = l.algebra().clone();
        v.check(verify_w3_ope(&l, &w).unwrap(), || format!("({name}) table"));
        v.check(circle(&w, &w, 5).unwrap() == State::scalar(&alg, q(-2, 3)), || format!("({name}) W o5 W"));
        let expected = &wick(&l, &l).unwrap().scale(&q(8, 3)) - &l.derive_n(2).scale(&q(1, 2));
        v.check(circle(&w, &w, 1).unwrap() == expected, || format!("({name}) W o1 W"));
        v.check(circle(&l, &w, 1).unwrap() == w.scale(&s(3)), || format!("({name}) L o1 W"));
        v.check(circle(&l, &l, 3).unwrap() == State::scalar(&alg, s(-1)), || format!("({name}) L o3 L"));
    }
    v.finish();
}

/// The explicit correction ω₃ is checked as printed. It does not make
/// `:θ³: + ω₃` invariant: the first obstruction is at pole order 1. With the
/// flat monomial `−:β³γ³:` in place of the Wick cube it is invariant, and the
/// solver finds a valid cubic correction, so the criterion is reported red and
/// the test pins down that diagnosis instead.
#[test]
fn criterion_04_quantum_corrections() {
    let mut v = Verdict::new(4, "quantum corrections");
    let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
    let ctx = Context::for_action(&act);
    let theta = act.theta(0).unwrap();
    let th2 = wick(&theta, &theta).unwrap();
    let th3 = wick(&theta, &th2).unwrap();
    let w2 = ctx.state(OMEGA_2).unwrap();
    let w3 = ctx.state(OMEGA_3).unwrap();

    v.check(act.is_invariant(&(&th2 + &w2)).unwrap(), || "theta^2 + omega_2 not invariant".into());
    let obstruction = act.obstruction(&(&th3 + &w3)).unwrap();
    v.check(obstruction.is_none(), || format!("theta^3 + omega_3 fails at pole order {}", obstruction.unwrap().1));
    let (ls, _) = build_ls_ws(act.algebra(), 0).unwrap();
    v.check(act.quantum_correct(2).unwrap() == ls.scale(&s(2)), || "quantumCorrect(2) != 2 L_S".into());
    v.print();

    // diagnosis
    assert_eq!(obstruction, Some((0, 1)));
    assert!(to_fock(&(&th2 + &w2)).is_invariant(act.matrix()));
    assert!(!to_fock(&(&th3 + &w3)).is_invariant(act.matrix()));
    let flat = ctx.state("-1*:beta1 beta1 beta1 gamma1 gamma1 gamma1:").unwrap();
    assert!(act.is_invariant(&(&flat + &w3)).unwrap());
    assert!(to_fock(&(&flat + &w3)).is_invariant(act.matrix()));
    let u3 = act.quantum_correct(3).unwrap();
    assert!(to_fock(&u3).is_invariant(act.matrix()));
    assert!((&u3 - &th3).max_degree() <= 4);
    assert!(v.failures.len() == 1 && v.failures[0].contains("omega_3"));
}

#[test]
fn criterion_05_highest_weights() {
    let mut v = Verdict::new(5, "highest weights");
    // (d, t, w/√6)
    let table = [
        (-4, s(10), s(-10)),
        (-3, s(6), q(-14, 3)),
        (-2, s(3), q(-5, 3)),
        (-1, s(1), q(-1, 3)),
        (0, s(0), s(0)),
        (1, s(1), q(1, 3)),
        (2, s(3), q(5, 3)),
        (3, s(6), q(14, 3)),
        (4, s(10), s(10)),
    ];
    for (d, t, w6) in table {
        let h = highest_weight_data(d).unwrap();
        let w = &w6 * &Scalar::sqrt6();
        v.check(h.verified, || format!("d={d}: not a highest-weight vector"));
        v.check(h.t == t && h.w == w, || format!("d={d}: (t, w) = ({}, {})", h.t, h.w));
    }
    v.finish();
}

#[test]
fn criterion_06_zhu_images() {
    let mut v = Verdict::new(6, "Zhu images");
    let alg = FreeAlgebraSpec::beta_gamma(1);
    let gb = State::product_of(&alg, &[(alg.gamma(0), 0), (alg.beta(0), 0)]);
    let (ls, ws) = build_ls_ws(&alg, 0).unwrap();
    let e = Poly::var(1, 0);
    let l_expected = (&e.pow(2) + &e).scale(&q(1, 2));
    // e(e+1)(2e+1)/(3√6) expanded
    let w_expected = Poly::univariate(&[
        Scalar::zero(),
        Scalar::sqrt6_ratio(1, 18),
        Scalar::sqrt6_ratio(1, 6),
        Scalar::sqrt6_ratio(1, 9),
    ]);
    let x = WeylElement::x(1, 0);
    let d = WeylElement::d(1, 0);
    for a in [Scalar::zero(), q(1, 2), Scalar::one()] {
        let alpha = std::slice::from_ref(&a);
        let expected = &x.product(&d) + &WeylElement::constant(1, &Scalar::one() - &a);
        v.check(zhu_image(&gb, alpha).unwrap() == expected, || format!("alpha={a}: [:gamma beta:]"));
        let lp = zhu_image(&ls, alpha).unwrap().to_euler_poly();
        let wp = zhu_image(&ws, alpha).unwrap().to_euler_poly();
        v.check(lp.as_ref() == Some(&l_expected), || format!("alpha={a}: [L_S]"));
        v.check(wp.as_ref() == Some(&w_expected), || format!("alpha={a}: [W_S]"));
        if let (Some(lp), Some(wp)) = (lp, wp) {
            v.check(zhu_ideal_check(&lp, &wp), || format!("alpha={a}: ideal"));
        }
    }
    v.finish();
}

fn lattice_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i64>| (-bound..=bound).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

#[test]
fn criterion_07_lattice_machinery() {
    let mut v = Verdict::new(7, "lattice machinery");
    for n in 1..=3usize {
        let alg = FreeAlgebraSpec::beta_gamma(n);
        let vs = lattice_vectors(n, 3);
        let workers = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(4).max(2);
        let bad: Vec<String> = std::thread::scope(|sc| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (alg, vs) = (&alg, &vs);
                    sc.spawn(move || {
                        let mut bad = Vec::new();
                        for l in vs.iter().skip(w).step_by(workers) {
                            let a = omega(alg, l).unwrap();
                            for lp in vs {
                                let (d, coeff) = lattice_contraction(l, lp);
                                let sum: Vec<i64> = l.iter().zip(lp).map(|(x, y)| x + y).collect();
                                let b = omega(alg, lp).unwrap();
                                if circle(&a, &b, d).unwrap() != omega(alg, &sum).unwrap().scale(&coeff) {
                                    bad.push(format!("{l:?}.{lp:?}"));
                                }
                            }
                        }
                        bad
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
        });
        v.total += vs.len() * vs.len() - 1;
        v.check(bad.is_empty(), || format!("n={n}: {}", bad.join(", ")));
    }

    let matrices = [
        ActionMatrix::from_ints(&[&[1, -1]]).unwrap(),
        ActionMatrix::from_ints(&[&[1, 1, 1]]).unwrap(),
        ActionMatrix::new(vec![vec![s(1), Scalar::sqrt6()]]).unwrap(),
    ];
    let hand: [Vec<Vec<i64>>; 3] = [vec![vec![1, 1]], vec![vec![1, 0, -1], vec![0, 1, -1]], vec![]];
    for (a, expected) in matrices.iter().zip(hand) {
        let got = integer_kernel_basis(a).unwrap().vectors;
        v.check(got == expected, || format!("basis {got:?} != {expected:?}"));
        // every small kernel vector is an integer combination of the basis
        let found = kernel_vectors_in_box(a, 4);
        v.check(found.iter().all(|k| in_integer_span(&got, k)), || format!("{got:?} misses kernel vectors"));
        v.check(got.iter().all(|b| found.contains(b)), || format!("{got:?} not in the kernel"));
        let rows: Vec<Vec<Scalar>> = got.iter().map(|b| b.iter().map(|x| s(*x)).collect()).collect();
        v.check(rows.is_empty() || rank(rows) == got.len(), || format!("{got:?} dependent"));
    }
    v.finish();
}

#[test]
fn criterion_08_commutant_dimensions() {
    let mut v = Verdict::new(8, "commutant dimensions");
    let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
    let expected = [1, 0, 0, 0, 1, 0, 2];
    for (tw, &dim) in expected.iter().enumerate() {
        let basis = act.graded_commutant_basis(tw as u32, &Charge::Total(0)).unwrap();
        let oracle = brute_force_commutant_dim(tw as u32);
        v.check(basis.len() == dim, || format!("weight {tw}/2: solver dim {}", basis.len()));
        v.check(oracle == dim, || format!("weight {tw}/2: brute-force dim {oracle}"));
        let images: Vec<Fock> = basis.iter().map(to_fock).collect();
        v.check(images.iter().all(|f| f.is_invariant(act.matrix())), || format!("weight {tw}/2: basis not killed by modes"));
        let monos = common::charge_zero_monomials(tw as u32);
        let coords: Vec<Vec<Scalar>> = images.iter().map(|f| f.coordinates(&monos)).collect();
        v.check(coords.is_empty() || rank(coords) == basis.len(), || format!("weight {tw}/2: basis dependent"));
    }
    v.finish();
}

#[test]
fn criterion_09_generator_sets() {
    let mut v = Verdict::new(9, "generator sets");
    for act in sample_actions().unwrap() {
        for g in act.generator_set().unwrap() {
            let rows = act.matrix().rows().to_vec();
            v.check(act.is_invariant(&g.state).unwrap(), || format!("{} for {rows:?}", g.name));
            v.check(to_fock(&g.state).is_invariant(act.matrix()), || format!("{} for {rows:?} (Fock)", g.name));
        }
    }
    v.finish();
}

#[test]
fn criterion_10_unit_extraction() {
    let mut v = Verdict::new(10, "unit extraction");
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for case in 0..20 {
        let n = rng.gen_range(1..=2);
        let mut ls = lattice_vectors(n, 2);
        ls.shuffle(&mut rng);
        let k = rng.gen_range(1..=3);
        let alg = FreeAlgebraSpec::beta_gamma(n);
        let mut u = State::zero(&alg);
        let mut w = WeylElement::zero(n);
        for l in ls.into_iter().take(k) {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-5..=5);
            }
            let c = q(c, rng.gen_range(1..=3));
            u = &u + &omega(&alg, &l).unwrap().scale(&c);
            w = &w + &WeylElement::lattice(&l).scale(&c);
        }
        let ex = extract_lattice_unit(&u).unwrap();
        let neg: Vec<i64> = ex.l.iter().map(|x| -x).collect();
        let contracted = circle(&omega(&alg, &neg).unwrap(), &u, ex.d as i64 - 1).unwrap().scale(&ex.scale);
        v.check(contracted == State::vacuum(&alg), || format!("case {case}: {u}"));
        let wx = star_extract_lattice_unit(&w).unwrap();
        let wc = star_k_weyl(&WeylElement::lattice(&neg), &w, wx.d as i64 - 1).unwrap().scale(&wx.scale);
        v.check(wx.l == ex.l && wc == WeylElement::one(n), || format!("case {case}: {w} (Weyl side)"));
    }
    v.finish();
}

#[test]
fn criterion_11_transvectant_equivalence() {
    let mut v = Verdict::new(11, "transvectant equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(3141);
    for case in 0..50 {
        let n = rng.gen_range(1..=2);
        let alg = FreeAlgebraSpec::beta_gamma(n);
        let (p, r) = (random_poly(&mut rng, n, 3), random_poly(&mut rng, n, 3));
        let k: i64 = rng.gen_range(-1..=3);
        let lhs = fmap(&transvectant(&p, &r, (k + 1) as u32).unwrap(), &alg).unwrap();
        let rhs = star_k(&fmap(&p, &alg).unwrap(), &fmap(&r, &alg).unwrap(), k).unwrap();
        v.check(lhs == rhs, || format!("case {case}: [{p}, {r}]_{}", k + 1));
    }
    for n in 1..=3 {
        for i in 0..n {
            for j in 0..n {
                let e = star_k_weyl(&WeylElement::euler(n, i), &WeylElement::euler(n, j), 1).unwrap();
                let expected = WeylElement::constant(n, s(if i == j { -1 } else { 0 }));
                v.check(e == expected, || format!("e{} *1 e{} in rank {n}", i + 1, j + 1));
            }
        }
    }
    v.finish();
}

#[test]
fn criterion_12_cokernel() {
    let mut v = Verdict::new(12, "Zhu cokernel");
    let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
    for d in [3, 6] {
        let r = cokernel_probe(&act, &[q(1, 2)], d).unwrap();
        v.check(r.ambient_dim == d as usize + 1, || format!("D={d}: ambient {}", r.ambient_dim));
        v.check(r.codim == 1 && r.image_dim == d as usize, || format!("D={d}: codim {}", r.codim));
        v.check(r.representatives == vec![Poly::var(1, 0)], || format!("D={d}: representatives"));
        v.check(r.theta_covers, || format!("D={d}: theta does not cover"));
    }
    v.finish();
}

#[test]
fn criterion_13_conformal_b_prime() {
    let mut v = Verdict::new(13, "conformal structure B'");
    let act = DiagonalAction::from_ints(&[&[1, -1]]).unwrap();
    let b = act.field_kernel().remove(0);
    let norm = dot(&b, &b);
    for lam in [Scalar::zero(), Scalar::one()] {
        let cs = act.conformal_b_prime(std::slice::from_ref(&lam)).unwrap();
        let c = &s(-4) + &(&Scalar::one() + &(&(&s(12) * &(&lam * &lam)) * &norm));
        v.check(cs.central_charge == c, || format!("lambda={lam}: c = {}", cs.central_charge));
        v.check(verify_virasoro(&cs.state, &c).unwrap(), || format!("lambda={lam}: Virasoro"));
        let report = act.primary_report(&cs.state).unwrap();
        v.check(report.len() == 5, || format!("lambda={lam}: {} generators", report.len()));
        for p in report {
            v.check(p.up_to_central, || format!("lambda={lam}: {} of weight {}", p.name, p.weight));
        }
    }
    v.finish();
}

fn sign(odd: bool) -> Scalar {
    if odd {
        s(-1)
    } else {
        s(1)
    }
}

#[test]
fn criterion_14_engine_axioms() {
    let mut v = Verdict::new(14, "engine axioms");
    let mut rng = ChaCha8Rng::seed_from_u64(1618);
    let alg = FreeAlgebraSpec::new(1, 1, vec![Scalar::one()]).shared();
    let one = State::vacuum(&alg);
    let gradings = [Grading::Weight(vec![q(1, 2), q(1, 2)]), Grading::BgCharge, Grading::BcCharge];
    for case in 0..100 {
        let (u, w, x) = (random_monomial(&mut rng, &alg), random_monomial(&mut rng, &alg), random_monomial(&mut rng, &alg));
        let (pu, pw) = (u.parity() == Some(true), w.parity() == Some(true));
        let top = pole_bound(&u, &w);
        for n in -1..top {
            let mut rhs = State::zero(&alg);
            let mut fact = Scalar::one();
            for j in 0..=(top - n) as u32 {
                if j > 0 {
                    fact = &fact * &s(j as i64);
                }
                let sg = &sign((n + j as i64 + 1) % 2 != 0) * &sign(pu && pw);
                rhs = &rhs + &circle(&u, &w, n + j as i64).unwrap().derive_n(j).scale(&(&sg / &fact));
            }
            v.check(circle(&w, &u, n).unwrap() == rhs, || format!("case {case}: skew symmetry at n={n}"));
        }
        for n in 0..=3i64 {
            v.check(
                circle(&u.derive(), &w, n).unwrap() == circle(&u, &w, n - 1).unwrap().scale(&s(-n)),
                || format!("case {case}: (Du) o{n} w"),
            );
            let rhs = &circle(&u, &w, n).unwrap().derive() + &circle(&u, &w, n - 1).unwrap().scale(&s(n));
            v.check(circle(&u, &w.derive(), n).unwrap() == rhs, || format!("case {case}: u o{n} Dw"));
        }
        v.check(circle(&one, &u, -1).unwrap() == u && circle(&u, &one, -1).unwrap() == u, || format!("case {case}: vacuum"));
        v.check((0..3).all(|n| circle(&one, &u, n).unwrap().is_zero() && circle(&u, &one, n).unwrap().is_zero()), || {
            format!("case {case}: vacuum annihilation")
        });
        v.check(circle(&u, &one, -2).unwrap() == u.derive(), || format!("case {case}: translation"));

        let lhs = &wick(&wick(&u, &w).unwrap(), &x).unwrap() - &wick(&u, &wick(&w, &x).unwrap()).unwrap();
        let mut rhs = State::zero(&alg);
        let mut fact = Scalar::one();
        for k in 0..pole_bound(&u, &x).max(pole_bound(&w, &x)).max(0) {
            fact = &fact * &s(k + 1);
            let a = wick(&u.derive_n(k as u32 + 1), &circle(&w, &x, k).unwrap()).unwrap();
            let b = wick(&w.derive_n(k as u32 + 1), &circle(&u, &x, k).unwrap()).unwrap().scale(&sign(pu && pw));
            rhs = &rhs + &(&a + &b).scale(&fact.inverse().unwrap());
        }
        v.check(lhs == rhs, || format!("case {case}: quasi-associativity"));

        let uw = wick(&u, &w).unwrap();
        for g in &gradings {
            if let (Grade::Homogeneous(a), Grade::Homogeneous(b)) = (u.grading(g), w.grading(g)) {
                let ok = match uw.grading(g) {
                    Grade::Zero => true,
                    Grade::Homogeneous(c) => c == &a + &b,
                    Grade::Inhomogeneous => false,
                };
                v.check(ok, || format!("case {case}: {g:?} additivity"));
            }
        }
    }
    v.finish();
}
