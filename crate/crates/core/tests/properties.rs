mod common;

use predual::duality::{
    detect_character, evaluation_functional_check, l1_norm, pair, CharacterVerdict,
};
use predual::funcspace::{sample_unit_ball, tietze_extend, CFunc};
use predual::scalar::{int, Mode, Real, Scalar};
use predual::sequences::{
    convergent_subsequence, limit_in_metric, limit_in_topology, LimitVerdict,
};
use predual::topology::{
    self, closure, distinguish, interior, is_open, metric_d, TopologyId, Verdict,
};
use predual::{L1Vec, RawRtSet, RtSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const WINDOW: u64 = 400;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn raw_rtset(n: u64) -> impl Strategy<Value = RtSet> {
    (
        prop::collection::vec(1..=n, 0..4),
        prop::collection::btree_map(1..=n, 0u64..10, 0..4),
        prop::collection::vec(1u64..15 * n + 15, 0..10),
    )
        .prop_map(move |(limits, tails, extra)| {
            RtSet::canonicalize(RawRtSet {
                n,
                limits,
                tails,
                extra,
            })
            .unwrap()
        })
}

fn set_pair() -> impl Strategy<Value = (RtSet, RtSet)> {
    (1u64..7).prop_flat_map(|n| (raw_rtset(n), raw_rtset(n)))
}

proptest! {
    // ---- settops ----------------------------------------------------------

    #[test]
    fn boolean_ops_agree_with_membership((s, t) in set_pair()) {
        let and = s.intersect(&t).unwrap();
        let or = s.union(&t).unwrap();
        let not = s.complement();
        let minus = s.difference(&t).unwrap();
        for j in 1..=WINDOW {
            let (a, b) = (s.contains(j), t.contains(j));
            prop_assert_eq!(and.contains(j), a && b);
            prop_assert_eq!(or.contains(j), a || b);
            prop_assert_eq!(not.contains(j), !a);
            prop_assert_eq!(minus.contains(j), a && !b);
        }
    }

    #[test]
    fn canonical_form_is_unique((s, t) in set_pair()) {
        prop_assert_eq!(s.complement().complement(), s.clone());
        prop_assert_eq!(RtSet::canonicalize(s.clone().into()).unwrap(), s.clone());
        let same_members = (1..=WINDOW).all(|j| s.contains(j) == t.contains(j));
        // sets here only vary below the window, so membership decides equality
        prop_assert_eq!(same_members, s == t);
    }

    #[test]
    fn lattice_laws((s, t) in set_pair()) {
        prop_assert_eq!(s.union(&t).unwrap(), t.union(&s).unwrap());
        prop_assert_eq!(s.intersect(&t).unwrap(), t.intersect(&s).unwrap());
        // De Morgan
        prop_assert_eq!(
            s.union(&t).unwrap().complement(),
            s.complement().intersect(&t.complement()).unwrap()
        );
        prop_assert_eq!(s.intersect(&s.union(&t).unwrap()).unwrap(), s.clone());
    }

    #[test]
    fn basic_open_intersections(n in 1u64..=20, k in 1u64..=20, k2 in 1u64..=20, l in 1u64..=50, h in 1u64..=50) {
        let (k, k2) = ((k - 1) % n + 1, (k2 - 1) % n + 1);
        let a = RtSet::basic_open(n, k, l).unwrap();
        let b = RtSet::basic_open(n, k2, h).unwrap();
        let meet = a.intersect(&b).unwrap();
        if k == k2 {
            prop_assert_eq!(meet, RtSet::basic_open(n, k, l.max(h)).unwrap());
        } else {
            prop_assert!(meet.is_empty());
        }
    }

    #[test]
    fn counting_matches_enumeration((s, _t) in set_pair(), bound in 0u64..300) {
        prop_assert_eq!(s.count_upto(bound), s.members_upto(bound).len() as u64);
    }

    // ---- topology ---------------------------------------------------------

    #[test]
    fn opens_form_a_topology(seed in any::<u64>(), n in 1u64..8) {
        let mut r = rng(seed);
        let top = TopologyId::tn(n).unwrap();
        let u = common::open_set(&mut r, n);
        let v = common::open_set(&mut r, n);
        prop_assert!(is_open(top, &u).unwrap());
        prop_assert!(is_open(top, &u.union(&v).unwrap()).unwrap());
        prop_assert!(is_open(top, &u.intersect(&v).unwrap()).unwrap());
        // unions of basic opens
        let mut acc = RtSet::empty(n).unwrap();
        for k in 1..=n {
            acc = acc.union(&RtSet::basic_open(n, k, (seed % 7) + k).unwrap()).unwrap();
            prop_assert!(is_open(top, &acc).unwrap());
        }
    }

    #[test]
    fn closure_and_interior(seed in any::<u64>(), n in 1u64..8) {
        let mut r = rng(seed);
        let s = common::rtset(&mut r, n);
        let t = s.union(&common::rtset(&mut r, n)).unwrap();
        let c = closure(n, &s).unwrap();
        let i = interior(n, &s).unwrap();
        prop_assert!(s.is_subset(&c).unwrap());
        prop_assert!(i.is_subset(&s).unwrap());
        prop_assert_eq!(closure(n, &c).unwrap(), c.clone());
        prop_assert_eq!(interior(n, &i).unwrap(), i.clone());
        prop_assert_eq!(i.clone(), closure(n, &s.complement()).unwrap().complement());
        prop_assert!(c.is_subset(&closure(n, &t).unwrap()).unwrap());
        prop_assert!(i.is_subset(&interior(n, &t).unwrap()).unwrap());
        prop_assert!(topology::is_closed(n, &c).unwrap());
        prop_assert!(is_open(TopologyId::tn(n).unwrap(), &i).unwrap());
    }

    #[test]
    fn appert_openness_is_a_lattice(seed in any::<u64>(), n in 1u64..8) {
        let mut r = rng(seed);
        let s = common::rtset(&mut r, n);
        let t = common::rtset(&mut r, n);
        let ap = TopologyId::Appert;
        if is_open(ap, &s).unwrap() && is_open(ap, &t).unwrap() {
            prop_assert!(is_open(ap, &s.union(&t).unwrap()).unwrap());
            prop_assert!(is_open(ap, &s.intersect(&t).unwrap()).unwrap());
        }
        // density verdicts are always definite and match the counting limit
        let d = topology::appert_density(&s);
        let big = 1_000_000 * n;
        let approx = topology::appert_count(&s, big) as f64 / big as f64;
        let exact = num_traits::ToPrimitive::to_f64(&d).unwrap();
        prop_assert!((approx - exact).abs() < 1e-4);
    }

    #[test]
    fn separation_always_certifies(n in 1u64..12, x in 1u64..300, y in 1u64..300) {
        prop_assume!(x != y);
        let c = topology::separate(n, x, y).unwrap();
        prop_assert!(c.verify().unwrap());
    }

    #[test]
    fn distinguish_iff_counts_differ(n in 1u64..100, m in 1u64..100) {
        let r = distinguish(n, m).unwrap();
        prop_assert_eq!(r.verdict == Verdict::Distinguished, n != m);
    }

    #[test]
    fn metric_axioms(n in 1u64..10, x in 1u64..120, y in 1u64..120, z in 1u64..120) {
        let d = |a, b| metric_d(n, a, b).unwrap();
        prop_assert_eq!(d(x, y), d(y, x));
        prop_assert_eq!(d(x, y) == int(0), x == y);
        prop_assert!(d(x, y) <= d(x, z) + d(z, y));
    }

    // ---- sequences --------------------------------------------------------

    #[test]
    fn verdicts_agree_and_replay(seed in any::<u64>(), n in 1u64..=10) {
        let s = common::uaseq(&mut rng(seed), n);
        let top = limit_in_topology(&s, n).unwrap();
        let met = limit_in_metric(&s, n).unwrap();
        prop_assert_eq!(top.limit(), met.limit());
        match top {
            LimitVerdict::Converges { point, certificate } => {
                for l in [1, 3, 20] {
                    let idx = certificate.index_for(l);
                    for t in idx..idx + 50 {
                        let v = s.eval(t).unwrap();
                        if point <= n {
                            prop_assert!(RtSet::basic_open(n, point, l).unwrap().contains(v));
                        } else {
                            prop_assert_eq!(v, point);
                        }
                    }
                }
            }
            LimitVerdict::Diverges { witness } => {
                prop_assert!(witness[0].limit < witness[1].limit);
                for b in witness {
                    let sub = s.compose(&b.selector).unwrap();
                    prop_assert_eq!(limit_in_topology(&sub, n).unwrap().limit(), Some(b.limit));
                }
            }
        }
        let b = convergent_subsequence(&s, n).unwrap();
        let sub = s.compose(&b.selector).unwrap();
        prop_assert_eq!(limit_in_topology(&sub, n).unwrap().limit(), Some(b.limit));
    }

    // ---- funcspace --------------------------------------------------------

    #[test]
    fn sup_norm_is_a_norm(seed in any::<u64>(), n in 1u64..6) {
        let mut r = rng(seed);
        let f = common::cfunc_with(&mut r, n, common::exact_complex);
        let g = common::cfunc_with(&mut r, n, common::exact_complex);
        let c = common::exact_complex(&mut r);
        let sq = |h: &CFunc| h.sup_norm().squared;
        // homogeneity on squares: ‖c f‖² = |c|² ‖f‖²
        prop_assert_eq!(sq(&f.scalar_mul(&c).unwrap()), c.norm_sqr().mul(&sq(&f)));
        // triangle: ‖f+g‖ ≤ ‖f‖ + ‖g‖, compared in floats with slack
        let lhs = f.add(&g).unwrap().sup_norm().value.to_f64();
        let rhs = f.sup_norm().value.to_f64() + g.sup_norm().value.to_f64();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        let zero = CFunc::zero(n, Mode::Exact).unwrap();
        prop_assert_eq!(sq(&f) == Real::Exact(int(0)), f == zero);
        // submultiplicative and C*-identity
        prop_assert!(sq(&f.mul(&g).unwrap()).cmp_real(&sq(&f).mul(&sq(&g))).is_le());
        let cstar = f.conj().mul(&f).unwrap().sup_norm().value;
        prop_assert_eq!(cstar, sq(&f));
    }

    #[test]
    fn square_roots_invert_squares(seed in any::<u64>(), n in 1u64..6) {
        let mut r = rng(seed);
        let h = common::cfunc_with(&mut r, n, common::positive_real);
        let a = h.mul(&h).unwrap();
        prop_assert!(a.is_positive());
        prop_assert_eq!(a.sqrt_positive().unwrap(), h.clone());
        for k in 1..40 {
            prop_assert!(evaluation_functional_check(k, &a).unwrap());
        }
    }

    #[test]
    fn class_values_converge_to_base(seed in any::<u64>(), n in 1u64..6) {
        let f = common::cfunc_with(&mut rng(seed), n, common::exact_complex);
        for k in 1..=n {
            let m0 = f.settles_at(k);
            for m in m0..m0 + 20 {
                prop_assert_eq!(f.eval(m * n + k).unwrap(), f.base()[(k - 1) as usize].clone());
            }
        }
    }

    #[test]
    fn tietze_reproduces_values(seed in any::<u64>(), n in 1u64..6) {
        let mut r = rng(seed);
        let y = common::l1_real(&mut r, 10);
        let values = y.entries().clone();
        let g = tietze_extend(n, &values, None).unwrap();
        for (j, v) in &values {
            prop_assert_eq!(&g.eval(*j).unwrap(), v);
        }
        let max = values.values().map(|v| v.norm_sqr()).max_by(|a, b| a.cmp_real(b)).unwrap();
        prop_assert_eq!(g.sup_norm().squared, max);
    }

    // ---- duality ----------------------------------------------------------

    #[test]
    fn pairing_is_bounded(seed in any::<u64>(), n in 1u64..6) {
        let mut r = rng(seed);
        let y = common::l1_real(&mut r, 12);
        let g = common::cfunc_with(&mut r, n, common::exact_complex);
        let p = pair(&g, &y).unwrap().norm_sqr();
        let norm = l1_norm(&y);
        prop_assert!(p.cmp_real(&g.sup_norm().squared.mul(&norm.mul(&norm))).is_le());
        let ball = sample_unit_ball(&mut r, n, Mode::Exact, &y.support()).unwrap();
        prop_assert!(pair(&ball, &y).unwrap().norm_sqr().cmp_real(&norm.mul(&norm)).is_le());
    }

    #[test]
    fn l1_norm_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let y = common::l1_real(&mut r, 8);
        let z = common::l1_real(&mut r, 8);
        let c = common::exact_real(&mut r);
        let sum = l1_norm(&y.add(&z).unwrap());
        prop_assert!(sum.cmp_real(&l1_norm(&y).add(&l1_norm(&z))).is_le());
        prop_assert_eq!(l1_norm(&y.scale(&c).unwrap()), c.abs().mul(&l1_norm(&y)));
        prop_assert!(l1_norm(&y).cmp_real(&Real::Exact(int(0))).is_gt());
    }

    #[test]
    fn characters_are_point_masses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let y = common::l1_real(&mut r, 6);
        let norm = l1_norm(&y);
        let y = y.scale(&Scalar::real(norm.as_exact().unwrap().recip())).unwrap();
        match detect_character(&y).unwrap() {
            CharacterVerdict::Evaluation { k } => {
                prop_assert_eq!(y, L1Vec::point_mass(k, Mode::Exact).unwrap());
            }
            CharacterVerdict::Violation { i, value, .. } => {
                prop_assert_eq!(&value, &y.get(i));
                prop_assert_ne!(value.clone(), value.mul(&value).unwrap());
            }
        }
    }
}
