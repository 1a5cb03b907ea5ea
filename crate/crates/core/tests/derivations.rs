use std::time::Instant;

use halfsph::presentations::{free_complexification, make_sphere, real_version, w, word_poly, SphereKind};
use halfsph::rewrite::{check_implication, check_presentation_equivalence, verify_trace, SearchConfig, DEFAULT_BUDGET};
use halfsph::{Exec, Letter, NCPolynomial};

fn z(i: usize) -> Letter {
    Letter::z(i)
}

#[test]
fn sharp_implies_star_chain_all_instances() {
    let p = make_sphere(SphereKind::CSharp, 3).unwrap();
    let t0 = Instant::now();
    let mut worst = 0;
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                let t = &word_poly(&[z(a), z(b).star(), z(c)]) - &word_poly(&[z(c), z(b).star(), z(a)]);
                if t.is_zero() {
                    continue;
                }
                let o = check_implication(&p, &t, DEFAULT_BUDGET).unwrap();
                let tr = o.trace().unwrap_or_else(|| panic!("not proved: {t}"));
                verify_trace(&p, tr).unwrap();
                worst = worst.max(tr.len());
            }
        }
    }
    assert!(worst <= 3, "{worst}");
    eprintln!("chain: worst {worst} steps in {:?}", t0.elapsed());
}

#[test]
fn projective_commutation_two_steps() {
    let p = make_sphere(SphereKind::CStar, 4).unwrap();
    let x = &word_poly(&[z(1), z(2).star()]) * &word_poly(&[z(3), z(4).star()]);
    let y = &word_poly(&[z(3), z(4).star()]) * &word_poly(&[z(1), z(2).star()]);
    let o = check_implication(&p, &(&x - &y), DEFAULT_BUDGET).unwrap();
    let tr = o.trace().expect("proved");
    assert!(tr.len() <= 2);
    verify_trace(&p, tr).unwrap();
}

#[test]
fn real_versions() {
    let t0 = Instant::now();
    let cfg = SearchConfig::default();
    for (a, b) in [(SphereKind::CSharp, SphereKind::R), (SphereKind::CStar, SphereKind::RStar)] {
        let rv = real_version(&make_sphere(a, 2).unwrap());
        let r = make_sphere(b, 2).unwrap();
        let rep = check_presentation_equivalence(&rv, &r, &cfg, Exec::Parallel).unwrap();
        assert!(rep.forward_all(), "{a}: {:?}", rep.q_from_p.iter().filter(|v| !v.proved).collect::<Vec<_>>());
        assert!(rep.backward_all(), "{a}: {:?}", rep.p_from_q.iter().filter(|v| !v.proved).collect::<Vec<_>>());
    }
    eprintln!("real versions in {:?}", t0.elapsed());
}

#[test]
fn complexification() {
    let fc = free_complexification(&make_sphere(SphereKind::CStar, 2).unwrap());
    for (i, j, k) in [(1, 2, 1), (1, 1, 2), (2, 1, 1)] {
        let t = &(&(&w(i) * &w(j).star()) * &w(k)) - &(&(&w(k) * &w(j).star()) * &w(i));
        let o = check_implication(&fc, &t, DEFAULT_BUDGET).unwrap();
        verify_trace(&fc, o.trace().expect("w-triple")).unwrap();
    }
    let fr = free_complexification(&make_sphere(SphereKind::R, 2).unwrap());
    let t = &(&w(1) * &w(2).star()) - &(&w(2) * &w(1).star());
    let o = check_implication(&fr, &t, DEFAULT_BUDGET).unwrap();
    verify_trace(&fr, o.trace().expect("w-pair")).unwrap();
    let _ = NCPolynomial::zero();
}
