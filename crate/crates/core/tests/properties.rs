use proptest::prelude::*;

use halfsph::dsl::{parse_polynomial, parse_presentation, render_presentation};
use halfsph::models::{
    gram_family, gram_rank, refute_implication, sample, GramFamily, Manifold, RefuteConfig, Refutation, Sampler,
    SVD_TOL,
};
use halfsph::presentations::{make_schema_relation, make_sphere, Exp, Presentation, SphereKind};
use halfsph::rewrite::{check_implication, replay, verify_trace};
use halfsph::{Exec, Letter, NCPolynomial, Scalar, TensorPolynomial, Word};

const N: usize = 2;

fn letter() -> impl Strategy<Value = Letter> {
    (1..=N, any::<bool>()).prop_map(|(i, s)| Letter::z(i).with_star(s))
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max).prop_map(Word::new)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(a, b, c)| Scalar::ratio(a, b) + Scalar::int(c) * Scalar::i())
}

fn poly(terms: usize, len: usize) -> impl Strategy<Value = NCPolynomial> {
    prop::collection::vec((word(len), scalar()), 0..=terms).prop_map(NCPolynomial::from_terms)
}

fn small() -> impl Strategy<Value = NCPolynomial> {
    poly(3, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(p in small(), q in small(), r in small()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&q + &r) * &p, &(&q * &p) + &(&r * &p));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &NCPolynomial::one(), p.clone());
        prop_assert!((&p * &NCPolynomial::zero()).is_zero());
    }

    #[test]
    fn star_is_an_antilinear_anti_involution(p in small(), q in small(), c in scalar()) {
        prop_assert_eq!(p.star().star(), p.clone());
        prop_assert_eq!((&p * &q).star(), &q.star() * &p.star());
        prop_assert_eq!((&p + &q).star(), &p.star() + &q.star());
        prop_assert_eq!(p.scale(&c).star(), p.star().scale(&c.conj()));
    }

    #[test]
    fn tensor_legs(a in small(), b in small(), x in small(), y in small()) {
        let t = TensorPolynomial::pure(&a, &x);
        prop_assert_eq!(t.star(), TensorPolynomial::pure(&a.star(), &x.star()));
        prop_assert_eq!(
            TensorPolynomial::pure(&(&a + &b), &x),
            &TensorPolynomial::pure(&a, &x) + &TensorPolynomial::pure(&b, &x)
        );
        prop_assert_eq!(
            TensorPolynomial::pure(&a, &(&x + &y)),
            &TensorPolynomial::pure(&a, &x) + &TensorPolynomial::pure(&a, &y)
        );
        let s = &TensorPolynomial::pure(&a, &x) + &TensorPolynomial::pure(&b, &y);
        prop_assert_eq!(TensorPolynomial::from_right(&s.by_right()), s);
    }

    #[test]
    fn polynomial_text_round_trip(p in poly(4, 4)) {
        let alphabet = make_sphere(SphereKind::CPlus, N).unwrap().alphabet();
        prop_assert_eq!(parse_polynomial(&p.to_string(), &alphabet).unwrap(), p);
    }

    #[test]
    fn presentation_text_round_trip(rels in prop::collection::vec(poly(3, 3), 0..4)) {
        let mut p = make_sphere(SphereKind::CPlus, N).unwrap().renamed("random");
        for r in &rels {
            p.push(r, "r");
        }
        let back = parse_presentation(&render_presentation(&p)).unwrap();
        let polys = |q: &Presentation| q.relations().iter().map(|r| r.poly.to_string()).collect::<Vec<_>>();
        prop_assert_eq!(polys(&back), polys(&p));
        prop_assert_eq!(back.name, p.name);
    }

    #[test]
    fn evaluation_is_a_star_homomorphism(p in small(), q in small(), seed in 0u64..1000) {
        let pt = sample(Manifold::Udiag { d: 2 }, N, seed).unwrap();
        let (ep, eq) = (pt.eval(&p).unwrap(), pt.eval(&q).unwrap());
        let prod = pt.eval(&(&p * &q)).unwrap();
        prop_assert!((prod - &ep * &eq).norm() < 1e-9);
        prop_assert!((pt.eval(&p.star()).unwrap() - ep.adjoint()).norm() < 1e-9);
    }
}

/// `Σ c_k u_k r_k v_k` for relations `r_k` of `p`.
fn ideal_element(p: &Presentation) -> impl Strategy<Value = NCPolynomial> {
    let rels: Vec<NCPolynomial> = p.relations().iter().map(|r| r.poly.clone()).collect();
    let k = rels.len();
    prop::collection::vec((0..k, word(1), word(1), scalar()), 1..=2).prop_map(move |parts| {
        parts
            .into_iter()
            .fold(NCPolynomial::zero(), |acc, (i, u, v, c)| &acc + &rels[i].sandwich(&u, &v).scale(&c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn proofs_replay_and_vanish_on_classical_points(
        g in ideal_element(&make_sphere(SphereKind::C, N).unwrap()),
        noise in small(),
        add_noise in any::<bool>(),
        seed in 0u64..1000,
    ) {
        let p = make_sphere(SphereKind::C, N).unwrap();
        let target = if add_noise { &g + &noise } else { g };
        let o = check_implication(&p, &target, 2_000).unwrap();
        if let Some(t) = o.trace() {
            verify_trace(&p, t).unwrap();
            prop_assert!(replay(&p, &target, &t.steps).unwrap().is_zero());
            // commutative points satisfy every relation of C, hence every consequence
            let pt = sample(Manifold::SC, N, seed).unwrap();
            prop_assert!(pt.residual(&target).unwrap() < 1e-9, "{}", target);
        }
    }

    #[test]
    fn sorted_schema_is_trivial(k in 1usize..=3, stars in prop::collection::vec(any::<bool>(), 3)) {
        let e: Vec<Exp> = stars[..k].iter().map(|&s| if s { Exp::Star } else { Exp::One }).collect();
        let id: Vec<usize> = (1..=k).collect();
        let out = make_schema_relation(&id, &e, &e, N).unwrap();
        prop_assert!(out.iter().all(NCPolynomial::is_zero));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn execution_arms_agree(seed in 0u64..10_000) {
        let s: Sampler = "pq-doubling".parse().unwrap();
        let pts: Vec<_> = (0..12).map(|k| s.draw(N, seed + k).unwrap()).collect();
        let fam = gram_family(GramFamily::ZZs, N);
        let a = gram_rank(&fam, &pts, SVD_TOL, Exec::Sequential).unwrap();
        let b = gram_rank(&fam, &pts, SVD_TOL, Exec::Parallel).unwrap();
        prop_assert_eq!(a.rank, b.rank);
        prop_assert_eq!(a.singular_values, b.singular_values);

        let sphere = make_sphere(SphereKind::CStar, N).unwrap();
        let target = &NCPolynomial::from_letters(&[Letter::z(1), Letter::z(2)])
            - &NCPolynomial::from_letters(&[Letter::z(2), Letter::z(1)]);
        let sampler: Sampler = "udiag:2".parse().unwrap();
        let run = |exec| {
            let cfg = RefuteConfig { trials: 20, seed, exec, ..RefuteConfig::default() };
            match refute_implication(&sphere, &target, &sampler, &cfg).unwrap() {
                Refutation::Counterexample { trial, residual, .. } => (Some(trial), residual),
                Refutation::NotFound { best_residual, .. } => (None, best_residual),
            }
        };
        prop_assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
        prop_assert_eq!(Exec::Sequential.map_range(50, |k| k * k), Exec::Parallel.map_range(50, |k| k * k));
    }

    #[test]
    fn gram_rank_grows_with_samples(seed in 0u64..10_000, extra in 1usize..20) {
        let s: Sampler = "cd:dotS".parse().unwrap();
        let fam = gram_family(GramFamily::ZZsZ, N);
        let base = fam.len();
        let pts: Vec<_> = (0..(base + extra) as u64).map(|k| s.draw(N, seed + k).unwrap()).collect();
        let fewer = gram_rank(&fam, &pts[..base], SVD_TOL, Exec::Sequential).unwrap();
        let more = gram_rank(&fam, &pts, SVD_TOL, Exec::Sequential).unwrap();
        prop_assert!(fewer.rank <= more.rank);
        prop_assert!(more.rank <= fam.len());
    }
}
