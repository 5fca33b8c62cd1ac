use mipf::characters::{circle_character, QSeries};
use mipf::extension::block_decompose;
use mipf::fusion::{fusion_isomorphic, monodromy_charge, simple_currents, verlinde, FusionRing};
use mipf::invariants::{build_dinv, verify, Mipf};
use mipf::numerics::{approx_eq, fmt_rational, frac, parse_rational, rat, CMatrix, Tolerance};
use mipf::spectra::{modular_data, TheoryId};
use num_complex::Complex64;
use proptest::prelude::*;

fn theory() -> impl Strategy<Value = TheoryId> {
    prop_oneof![
        (1u32..=12).prop_map(TheoryId::CircleU1),
        (1u32..=12).prop_map(TheoryId::OrbifoldC1),
        (2u32..=12).prop_map(TheoryId::AffineD2),
        (1u32..=6).prop_map(TheoryId::AffineB2),
    ]
}

fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| CMatrix::from_fn(n, n, |i, j| Complex64::new(v[i * n + j].0, v[i * n + j].1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_text_roundtrip(p in -1000i64..1000, q in 1i64..1000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rational(&fmt_rational(&x)).unwrap(), x);
    }

    #[test]
    fn approx_eq_is_reflexive_and_symmetric(a in matrix(4), b in matrix(4)) {
        let tol = Tolerance::default();
        prop_assert!(approx_eq(&a, &a, tol).unwrap().0);
        let (ab, dab) = approx_eq(&a, &b, tol).unwrap();
        let (ba, dba) = approx_eq(&b, &a, tol).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(dab, dba);
    }

    #[test]
    fn fusion_axioms_hold(t in theory()) {
        let ring = verlinde(&modular_data(t).unwrap()).unwrap();
        prop_assert!(ring.check_axioms().is_ok());
    }

    #[test]
    fn monodromy_charge_is_additive(t in theory(), a in 0usize..64, b in 0usize..64) {
        let md = modular_data(t).unwrap();
        let n = md.len();
        let (a, b) = (a % n, b % n);
        let ring = verlinde(&md).unwrap();
        for j in simple_currents(&ring) {
            let qa = monodromy_charge(&md, &j, a);
            let qb = monodromy_charge(&md, &j, b);
            for (c, _) in ring.product(a, b) {
                prop_assert_eq!(monodromy_charge(&md, &j, c), frac(qa + qb));
            }
        }
    }

    #[test]
    fn relabelled_ring_is_isomorphic(r in 2u32..=9, seed in any::<u64>()) {
        let ring = verlinde(&modular_data(TheoryId::AffineD2(r)).unwrap()).unwrap();
        let n = ring.size;
        let mut sigma: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (2..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            sigma.swap(i, 1 + (s >> 33) as usize % i);
        }
        let mut tensor = vec![0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    tensor[(sigma[a] * n + sigma[b]) * n + sigma[c]] = ring.get(a, b, c);
                }
            }
        }
        let other = FusionRing::from_tensor(n, tensor).unwrap();
        let p = fusion_isomorphic(&ring, &other).expect("isomorphic");
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    prop_assert_eq!(ring.get(a, b, c), other.get(p[a], p[b], p[c]));
                }
            }
        }
    }

    #[test]
    fn series_inverse_roundtrip(c in proptest::collection::vec(-5i64..5, 1..10)) {
        let mut coeffs = vec![1];
        coeffs.extend(c);
        let s = QSeries::from_ints(rat(1, 8), 1, &coeffs);
        let one = s.mul(&s.inverse().unwrap()).unwrap();
        prop_assert_eq!(one.lead, rat(0, 1));
        prop_assert_eq!(one.coeffs[0], rat(1, 1));
        prop_assert!(one.coeffs[1..].iter().all(|x| *x == rat(0, 1)));
    }

    #[test]
    fn square_root_squares_back(c in proptest::collection::vec(-4i64..4, 1..8)) {
        let mut coeffs = vec![1];
        coeffs.extend(c);
        let s = QSeries::from_ints(rat(1, 4), 1, &coeffs);
        let r = s.sqrt().unwrap();
        let back = r.mul(&r).unwrap();
        prop_assert_eq!(back.lead, s.lead);
        prop_assert_eq!(&back.coeffs[..], &s.coeffs[..back.coeffs.len()]);
    }

    #[test]
    fn circle_characters_are_reflection_symmetric(r in 1u32..=10, j in 0u32..20) {
        let j = j % (2 * r);
        prop_assert_eq!(
            circle_character(r, j, 8).unwrap(),
            circle_character(r, (2 * r - j) % (2 * r), 8).unwrap()
        );
    }

    #[test]
    fn mipf_json_roundtrip(t in theory()) {
        let md = modular_data(t).unwrap();
        let m = mipf::invariants::diagonal(&md).with_param("note", "x");
        let back: Mipf = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn dinv_is_invariant(rt in 1u32..=4, m in prop::sample::select(vec![3u32, 5])) {
        let t = TheoryId::AffineD2(rt * m * m);
        let md = modular_data(t).unwrap();
        let inv = build_dinv(t, rt, m).unwrap();
        prop_assert!(verify(&md, &inv, Tolerance::new(1e-8).unwrap()).unwrap().pass);
        prop_assert_eq!(block_decompose(&inv).unwrap().len(), rt as usize + 7);
    }
}
