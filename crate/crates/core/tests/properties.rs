use nalgebra::DVector;
use ncindex::charmaps::{alpha, alpha_partial_sum, shuffles, HopfWord};
use ncindex::fredholm::{
    erf_path_oracle, negative_count_difference, simplex_exp_integral, spectral_flow_crossings,
    spectral_flow_integral, CMatrix, LinearPath, Spectrum, C64,
};
use ncindex::io::SimplexChainJson;
use ncindex::simplex::{SimplexChain, SimplexPoint};
use ncindex::Rational;
use num::{BigInt, One, Zero};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = SimplexPoint> {
    (0usize..6, 1i64..13).prop_flat_map(|(n, q)| {
        prop::collection::vec(0..=q, n).prop_map(move |mut v| {
            v.sort();
            SimplexPoint::new(v.into_iter().map(|p| Rational::new(p.into(), q.into())).collect())
                .unwrap()
        })
    })
}

fn diag(v: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|x| C64::new(*x, 0.0))))
}

fn nonzero() -> impl Strategy<Value = f64> {
    prop_oneof![-3.0..-0.1f64, 0.1..3.0f64]
}

proptest! {
    #[test]
    fn shuffle_count_and_parity(p in 0usize..7, q in 0usize..7) {
        let sh = shuffles(p, q);
        let n = p + q;
        let want: BigInt = (1..=n).map(BigInt::from).product::<BigInt>()
            / ((1..=p).map(BigInt::from).product::<BigInt>() * (1..=q).map(BigInt::from).product::<BigInt>());
        prop_assert_eq!(BigInt::from(sh.len()), want);
        for s in &sh {
            let w = s.permutation();
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).count();
            prop_assert_eq!(s.sign, if inv % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn alpha_telescopes(n in 0usize..40) {
        let sum = (0..=n).map(alpha).fold(Rational::zero(), |a, b| a + b);
        prop_assert_eq!(&sum, &alpha_partial_sum(n));
        let fact: BigInt = (1..=2 * n).map(BigInt::from).product();
        prop_assert_eq!(sum, Rational::new(BigInt::one(), fact));
    }

    #[test]
    fn simplicial_relations(x in point()) {
        let n = x.degree();
        for j in 0..=n {
            // s_j d_j = s_j d_{j+1} = Id
            prop_assert_eq!(&x.coface(j).unwrap().codegeneracy(j).unwrap(), &x);
            prop_assert_eq!(&x.coface(j + 1).unwrap().codegeneracy(j).unwrap(), &x);
        }
        for j in 1..=n + 1 {
            for i in 0..j {
                let lhs = x.coface(i).unwrap().coface(j + 1).unwrap();
                let rhs = x.coface(j).unwrap().coface(i).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
        let mut y = x.clone();
        for _ in 0..=n {
            y = y.cyclic();
        }
        prop_assert_eq!(y, x.clone());
        let gaps = x.gaps();
        prop_assert_eq!(gaps.len(), n + 1);
        prop_assert!(gaps.iter().all(|g| *g >= Rational::zero()));
        prop_assert_eq!(gaps.into_iter().fold(Rational::zero(), |a, b| a + b), Rational::one());
    }

    #[test]
    fn chain_json_round_trip(xs in prop::collection::vec(point(), 1..6), d in 0usize..4) {
        let mut c = SimplexChain::zero(d);
        for (k, x) in xs.iter().enumerate() {
            let mut x = x.clone();
            while x.degree() < d {
                x = x.coface(0).unwrap();
            }
            while x.degree() > d {
                x = x.codegeneracy(0).unwrap();
            }
            c.add_term(x, &Rational::new((k as i64 - 2).into(), 3.into()));
        }
        prop_assert_eq!(SimplexChainJson::from(&c).to_chain().unwrap(), c);
    }

    #[test]
    fn hopf_words_multiply_degreewise(a in prop::collection::vec(0u32..4, 0..5), b in prop::collection::vec(0u32..4, 0..5)) {
        let (wa, wb) = (HopfWord::new(a.clone()), HopfWord::new(b.clone()));
        if a.len() == b.len() {
            let p = wa.multiply(&wb).unwrap();
            prop_assert_eq!(p.weight(), wa.weight() + wb.weight());
            prop_assert_eq!(p, wb.multiply(&wa).unwrap());
        } else {
            prop_assert!(wa.multiply(&wb).is_err());
        }
    }

    #[test]
    fn exp_integral_symmetric_and_shifts(mut x in prop::collection::vec(0.0..6.0f64, 1..6), c in 0.0..3.0f64) {
        let base = simplex_exp_integral(&x);
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        prop_assert!((simplex_exp_integral(&shifted) - (-c).exp() * base).abs() <= 1e-12 * base.max(1e-3));
        x.reverse();
        prop_assert!((simplex_exp_integral(&x) - base).abs() <= 1e-12 * base.max(1e-3));
    }

    #[test]
    fn heat_semigroup(v in prop::collection::vec(-2.0..2.0f64, 1..5), s in 0.1..2.0f64, t in 0.1..2.0f64) {
        let sp = Spectrum::new(&diag(&v)).unwrap();
        let lhs = sp.heat(s).unwrap() * sp.heat(t).unwrap();
        prop_assert!((lhs - sp.heat(s + t).unwrap()).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagonal_paths_flow_and_integral(pairs in prop::collection::vec((nonzero(), nonzero()), 1..4)) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let path = LinearPath::new(diag(&a), diag(&b)).unwrap();
        let want = a.iter().filter(|x| **x < 0.0).count() as i64 - b.iter().filter(|x| **x < 0.0).count() as i64;
        prop_assert_eq!(negative_count_difference(&path).unwrap(), want);
        prop_assert_eq!(spectral_flow_crossings(&path, 32).unwrap().flow, want);
        let got = spectral_flow_integral(&path, 2.0, 1e-11).unwrap().value;
        let oracle = erf_path_oracle(&path, 2.0, statrs::function::erf::erf).unwrap();
        prop_assert!((got - oracle).abs() < 1e-9);
    }
}
