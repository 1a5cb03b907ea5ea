//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL` line with its timing.
//!
//! Run with `cargo test -p halfsph --test acceptance -- --nocapture` to see
//! the lines.

use std::time::{Duration, Instant};

use num_complex::Complex64;

use halfsph::lattice::{
    builtin, lift_check_with, rescaling_check, reverify_witness, unitary_group_lift_check, verify_diagram,
    LatticeConfig, ProperStatus,
};
use halfsph::models::{
    check_relations, complex_doubling, gram_family, gram_rank, group_model, op_norm, preset, sign_pattern_determinants,
    sign_pattern_matrices, sample, u2n_group_identities, GramFamily, Manifold, ModelPoint, Sampler, SVD_TOL,
};
use halfsph::presentations::{
    annihilation, biunitarity, free_complexification, lift_conjugation_stable, make_group, make_sphere, make_sphere_on,
    pk_ideals, real_version, torus_ideal, w, word_poly, Coordinates, GroupKind, LiftVariant, SphereKind,
};
use halfsph::qisom::{
    check_step_instances, collect_conditions, replay_saturation, saturate, verify_coaction_numeric,
    verify_coaction_symbolic, Shape,
};
use halfsph::rewrite::{
    check_implication, check_presentation_equivalence, reduce, verify_trace, SearchConfig, DEFAULT_BUDGET,
};
use halfsph::{Exec, Letter, NCPolynomial, Scalar};

fn report(k: usize, ok: bool, elapsed: Duration, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {k}: {verdict} ({detail}; {:.3} s)", elapsed.as_secs_f64());
}

fn z(i: usize) -> Letter {
    Letter::z(i)
}

fn u(i: usize, j: usize) -> Letter {
    Letter::u(i, j)
}

/// Proves and replays; returns the trace length.
fn prove(p: &halfsph::presentations::Presentation, t: &NCPolynomial) -> Option<usize> {
    let o = check_implication(p, t, DEFAULT_BUDGET).ok()?;
    let tr = o.trace()?;
    verify_trace(p, tr).ok()?;
    Some(tr.len())
}

#[test]
fn criterion_01_derivation_suite() {
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let mut timed = |f: &mut dyn FnMut() -> bool| {
        let t0 = Instant::now();
        let r = f();
        slowest = slowest.max(t0.elapsed());
        r
    };
    let total = Instant::now();

    // sharp relations give the starred triple commutation in at most three moves
    ok &= timed(&mut || {
        let p = make_sphere(SphereKind::CSharp, 3).unwrap();
        let mut fine = true;
        for a in 1..=3 {
            for b in 1..=3 {
                for c in 1..=3 {
                    let t = &word_poly(&[z(a), z(b).star(), z(c)]) - &word_poly(&[z(c), z(b).star(), z(a)]);
                    if !t.is_zero() {
                        fine &= prove(&p, &t).is_some_and(|n| n <= 3);
                    }
                }
            }
        }
        fine
    });
    // projective coordinates commute in C* in at most two moves
    ok &= timed(&mut || {
        let p = make_sphere(SphereKind::CStar, 4).unwrap();
        let x = &word_poly(&[z(1), z(2).star()]) * &word_poly(&[z(3), z(4).star()]);
        let y = &word_poly(&[z(3), z(4).star()]) * &word_poly(&[z(1), z(2).star()]);
        prove(&p, &(&x - &y)).is_some_and(|n| n <= 2)
    });
    // real versions
    ok &= timed(&mut || {
        [(SphereKind::CSharp, SphereKind::R), (SphereKind::CStar, SphereKind::RStar)].into_iter().all(|(a, b)| {
            let rv = real_version(&make_sphere(a, 2).unwrap());
            let r = make_sphere(b, 2).unwrap();
            let rep = check_presentation_equivalence(&rv, &r, &SearchConfig::default(), Exec::Parallel).unwrap();
            rep.forward_all() && rep.backward_all()
        })
    });
    // free complexification: w-words reduce to zero
    ok &= timed(&mut || {
        let fc = free_complexification(&make_sphere(SphereKind::CStar, 2).unwrap());
        let triples = [(1, 2, 1), (1, 1, 2), (2, 1, 1), (2, 2, 1)].into_iter().all(|(i, j, k)| {
            let t = &(&(&w(i) * &w(j).star()) * &w(k)) - &(&(&w(k) * &w(j).star()) * &w(i));
            reduce(&t, &fc, DEFAULT_BUDGET).result.is_zero() && prove(&fc, &t).is_some()
        });
        let fr = free_complexification(&make_sphere(SphereKind::R, 2).unwrap());
        let t = &(&w(1) * &w(2).star()) - &(&w(2) * &w(1).star());
        triples && prove(&fr, &t).is_some()
    });
    ok &= slowest < Duration::from_secs(1);
    report(1, ok, total.elapsed(), &format!("slowest query group {:.3} s", slowest.as_secs_f64()));
    assert!(ok);
}

/// Leibniz expansion, independent of the elimination used by the library.
fn leibniz(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Scalar::zero();
    fn sign(p: &[usize]) -> i64 {
        let mut s = 1;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    s = -s;
                }
            }
        }
        s
    }
    loop {
        let mut term = Scalar::int(sign(&perm));
        for (r, &c) in perm.iter().enumerate() {
            term = term * m[r][c].clone();
        }
        total = total + term;
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

#[test]
fn criterion_02_coefficient_determinants() {
    let t0 = Instant::now();
    let (d1, d2) = sign_pattern_determinants();
    let elapsed = t0.elapsed();
    let (m1, m2) = sign_pattern_matrices();
    let abs_is_16 = |d: &Scalar| d.norm_sqr() == Scalar::int(16).norm_sqr();
    let ok = m1.len() == 4
        && m2.len() == 4
        && leibniz(&m1) == d1
        && leibniz(&m2) == d2
        && abs_is_16(&d1)
        && abs_is_16(&d2);
    let ok = ok && elapsed < Duration::from_millis(1);
    report(2, ok, elapsed, &format!("det = {d1}, {d2}"));
    assert!(ok, "{d1} {d2} {elapsed:?}");
}

/// Largest singular value of a 2×2 complex matrix in closed form.
fn norm2x2(m: [[Complex64; 2]; 2]) -> f64 {
    let fro: f64 = m.iter().flatten().map(|x| x.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    ((fro + (fro * fro - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
}

#[test]
fn criterion_03_circ_counterexample() {
    let circ = make_sphere(SphereKind::CCirc, 2).unwrap();
    let t0 = Instant::now();
    let pt = preset("circ-witness", 2).unwrap();
    let rep = check_relations(&circ, &pt, 1e-12).unwrap();
    let lib = op_norm(&pt.eval(&(&word_poly(&[z(1), z(2)]) - &word_poly(&[z(2), z(1)]))).unwrap());
    let elapsed = t0.elapsed();
    // hand-built copy of the doubled point
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (o, i) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, h));
    let z1 = [[o, i], [-i, o]];
    let z2 = [[o, i], [i, o]];
    let same = |l: Letter, m: [[Complex64; 2]; 2]| {
        let x = pt.matrix(l).unwrap();
        (0..2).all(|r| (0..2).all(|c| (x[(r, c)] - m[r][c]).norm() < 1e-15))
    };
    let mul = |a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]| {
        let mut out = [[o; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    };
    let (ab, ba) = (mul(z1, z2), mul(z2, z1));
    let mut comm = [[o; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            comm[r][c] = ab[r][c] - ba[r][c];
        }
    }
    let oracle = norm2x2(comm);
    let ok = rep.holds()
        && rep.max < 1e-12
        && same(z(1), z1)
        && same(z(2), z2)
        && (oracle - 1.0).abs() < 1e-12
        && (lib - 1.0).abs() < 1e-12;
    let ok = ok && elapsed < Duration::from_millis(1);
    report(3, ok, elapsed, &format!("residual {:.1e}, commutator norm {lib:.15}", rep.max));
    assert!(ok, "{elapsed:?}");
}

#[test]
fn criterion_04_gram_ranks() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut seen = Vec::new();
    for n in [2usize, 3] {
        for (f, sampler, want) in [
            (GramFamily::ZZs, "pq-doubling", n * (n + 1) / 2),
            (GramFamily::ZZZ, "pq-doubling", n * n * (n + 1) / 2),
            (GramFamily::ZZsZ, "cd:dotS", n * n * (n + 1) / 2),
        ] {
            let s: Sampler = sampler.parse().unwrap();
            let pts: Vec<ModelPoint> = (0..200).map(|k| s.draw(n, k).unwrap()).collect();
            let r = gram_rank(&gram_family(f, n), &pts, SVD_TOL, Exec::Parallel).unwrap();
            ok &= r.rank == want && !r.degenerate;
            seen.push(format!("{f}@{n}={}", r.rank));
        }
    }
    let elapsed = t0.elapsed();
    ok &= elapsed < Duration::from_secs(5);
    report(4, ok, elapsed, &seen.join(" "));
    assert!(ok, "{seen:?}");
}

#[test]
fn criterion_05_saturation() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut seen = Vec::new();
    for (shape, sphere) in [
        (Shape::Triple { star: true }, SphereKind::CStar),
        (Shape::Triple { star: false }, SphereKind::CStarStar),
        (Shape::PairRight, SphereKind::CSharp),
        (Shape::PairLeft, SphereKind::CSharp),
    ] {
        let c = collect_conditions(shape, sphere).unwrap();
        let sat = saturate(&c, 10_000).unwrap();
        let classes_ok = shape.degree() == 2 || sat.proofs.len() == 25;
        let replayed = replay_saturation(&c, &sat).is_ok();
        let instances = check_step_instances(&c, &sat, Exec::Parallel);
        ok &= sat.global && !sat.exhausted && sat.derived <= 10_000 && classes_ok && replayed && instances.is_ok();
        seen.push(format!(
            "{shape}/{}: {} classes, {} statements, {} instances",
            sphere.name(),
            sat.proofs.len(),
            sat.steps.len(),
            instances.as_ref().map_or(0, |n| *n)
        ));
    }
    let elapsed = t0.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    report(5, ok, elapsed, &seen.join("; "));
    assert!(ok, "{seen:?}");
}

#[test]
fn criterion_06_coaction() {
    let t0 = Instant::now();
    let pairs = [
        (SphereKind::C, GroupKind::UN),
        (SphereKind::CStarStar, GroupKind::UNStarStar),
        (SphereKind::CStar, GroupKind::UNStar),
        (SphereKind::CSharp, GroupKind::UNSharp),
        (SphereKind::CCirc, GroupKind::UNCirc),
        (SphereKind::Tsr, GroupKind::TON),
    ];
    let mut open = Vec::new();
    for (s, g) in pairs {
        let v = verify_coaction_symbolic(s, g, 2, DEFAULT_BUDGET, Exec::Parallel).unwrap();
        if !v.proved {
            open.push(format!("{g}/{s}"));
        }
    }
    let mut worst = 0.0f64;
    let mut failures = 0;
    for seed in 0..100u64 {
        let cases = [
            (sample(Manifold::UN, 2, seed).unwrap(), sample(Manifold::SC, 2, 1000 + seed).unwrap(), SphereKind::C),
            (sample(Manifold::TON, 2, seed).unwrap(), sample(Manifold::Tsr, 2, 1000 + seed).unwrap(), SphereKind::Tsr),
            (
                group_model(&sample(Manifold::U2N, 2, seed).unwrap()).unwrap(),
                complex_doubling(&sample(Manifold::DotS, 2, 1000 + seed).unwrap()).unwrap(),
                SphereKind::CStarStar,
            ),
        ];
        for (g, pt, s) in cases {
            let r = verify_coaction_numeric(&g, &pt, &make_sphere(s, 2).unwrap(), 1e-10).unwrap();
            worst = worst.max(r.max);
            failures += usize::from(!r.holds());
        }
    }
    let elapsed = t0.elapsed();
    let ok = open.is_empty() && failures == 0 && worst < 1e-10 && elapsed < Duration::from_secs(10);
    report(6, ok, elapsed, &format!("6 symbolic pairs, open {open:?}; numeric worst {worst:.1e}"));
    assert!(open.is_empty(), "{open:?}");
    assert!(failures == 0 && worst < 1e-10, "{worst}");
    assert!(elapsed < Duration::from_secs(10), "{elapsed:?}");
}

#[test]
fn criterion_07_two_block_group_identities() {
    let t0 = Instant::now();
    let r = u2n_group_identities(2, 100, 7, Exec::Parallel);
    let r3 = u2n_group_identities(3, 100, 8, Exec::Parallel);
    let ok = r.identity1 && r.identity2 && r.pairs == 100 && r.passes(1e-10) && r3.passes(1e-10);
    report(7, ok, t0.elapsed(), &format!("closure defect {:.1e}", r.t2on_un_prime_defect.max(r3.t2on_un_prime_defect)));
    assert!(ok, "{r:?} {r3:?}");
}

#[test]
fn criterion_08_biunitarity_contraction() {
    let t0 = Instant::now();
    let g = make_group(GroupKind::UN, 2).unwrap();
    let letters: Vec<Letter> = (1..=2).flat_map(|i| (1..=2).map(move |j| u(i, j))).collect();
    let row = |i: usize, x: &NCPolynomial| {
        (1..=2).fold(NCPolynomial::zero(), |acc, k| &acc + &(x * &word_poly(&[u(i, k), u(i, k).star()])))
    };
    let mut ok = true;
    let (mut pairs, mut by_reduce) = (0, 0);
    for &a in &letters {
        for &b in &letters {
            let t = &word_poly(&[a, b.star()]) - &word_poly(&[b, a.star()]);
            if t.is_zero() {
                continue;
            }
            // Σ_c (ab* − ba*) cc* and ab* − ba* agree modulo biunitarity, for either row of c
            for i in 1..=2 {
                let diff = &row(i, &t) - &t;
                let r = reduce(&diff, &g, DEFAULT_BUDGET);
                if r.result.is_zero() {
                    by_reduce += 1;
                    ok &= verify_trace(&g, &r.trace).is_ok();
                } else {
                    ok &= prove(&g, &diff).is_some();
                }
                pairs += 1;
            }
        }
    }
    // Σ_c a b* c c* collapses to a b* over UN#
    let sharp = make_group(GroupKind::UNSharp, 2).unwrap();
    let ab = word_poly(&[u(1, 1), u(1, 2).star()]);
    ok &= reduce(&(&row(1, &ab) - &ab), &sharp, DEFAULT_BUDGET).result.is_zero();
    let lift = unitary_group_lift_check(2, &LatticeConfig::default()).unwrap();
    let lift1 = unitary_group_lift_check(1, &LatticeConfig::default()).unwrap();
    let empty = lift_check_with(2, &[], &[], &LatticeConfig::default()).unwrap();
    ok &= lift.holds() && lift1.holds() && !empty.holds();
    report(
        8,
        ok,
        t0.elapsed(),
        &format!(
            "{pairs} contractions, {by_reduce} by plain reduction; lift {}/{}",
            lift.biunitarity.proved, lift.biunitarity.total
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_09_six_sphere_lattice() {
    let t0 = Instant::now();
    let d = builtin("six-spheres").unwrap();
    let cfg = LatticeConfig { seed: 0, ..LatticeConfig::default() };
    let r = verify_diagram(&d, &cfg).unwrap();
    let meet = r.intersections.iter().find(|v| v.node == "TSR");
    let meet_ok = meet.is_some_and(|v| v.proved && v.samples.unwrap_or(0) >= 1000 && v.disagreements.is_empty());
    let mut reverified = 0;
    for v in &r.properness {
        if v.status != ProperStatus::Certified {
            continue;
        }
        let large = halfsph::lattice::NodeKind::presentation(v.larger.parse().unwrap(), 2).unwrap();
        let target = halfsph::dsl::parse_polynomial(v.target.as_deref().unwrap(), &large.alphabet()).unwrap();
        let json = serde_json::to_string(&ModelPoint::from_doc(v.witness.as_ref().unwrap()).unwrap()).unwrap();
        if reverify_witness(&large, &target, &json, cfg.tol, cfg.margin).is_ok() {
            reverified += 1;
        }
    }
    let elapsed = t0.elapsed();
    let ok = r.inclusions.len() == 7
        && r.inclusions_proved() == 7
        && meet_ok
        && r.certified() == r.properness.len()
        && r.properness.len() == 7
        && reverified == 7
        && elapsed < Duration::from_secs(60);
    report(
        9,
        ok,
        elapsed,
        &format!("{}/7 inclusions, {} certified, {reverified} re-verified", r.inclusions_proved(), r.certified()),
    );
    assert!(ok, "{}", r.to_markdown());
}

#[test]
fn criterion_10_lifts_and_rescaling() {
    let t0 = Instant::now();
    let mut ok = true;
    for n in [2usize, 3] {
        let target = make_sphere(SphereKind::CStar, n).unwrap();
        let torus =
            lift_conjugation_stable(&torus_ideal(n, LiftVariant::P), &torus_ideal(n, LiftVariant::Q), &target).unwrap();
        let inv = NCPolynomial::constant(Scalar::ratio(1, n as i64));
        for i in 1..=n {
            ok &= prove(&torus.presentation, &(&word_poly(&[z(i), z(i).star()]) - &inv)).is_some();
            ok &= prove(&torus.presentation, &(&word_poly(&[z(i).star(), z(i)]) - &inv)).is_some();
        }
    }
    let (pk, qk) = pk_ideals(2);
    let m = make_sphere_on(SphereKind::CStar, Coordinates::Matrix(2));
    let kn = lift_conjugation_stable(&pk, &qk, &m).unwrap();
    ok &= !kn.one_sided && annihilation(2).iter().all(|r| prove(&kn.presentation, r).is_some());
    ok &= biunitarity(2).len() == 16;
    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        let r = rescaling_check(n, 100, 11, Exec::Parallel).unwrap();
        worst = worst.max(r.max_residual);
    }
    ok &= worst < 1e-12;
    report(10, ok, t0.elapsed(), &format!("rescaling residual {worst:.1e}"));
    assert!(ok);
}
