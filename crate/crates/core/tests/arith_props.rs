use cybmw::arith::{
    expand_series, specialize, BigRational, Direction, Field, Fp, LaurentPoly, Monomial, RatFunc, Specialization, Var,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn vars() -> [Var; 4] {
    [Var::Q, Var::u(1).unwrap(), Var::u(2).unwrap(), Var::T]
}

fn term() -> impl Strategy<Value = (Monomial, BigInt)> {
    (prop::array::uniform4(-3i32..=3), -6i64..=6).prop_map(|(es, c)| {
        let m = vars()
            .iter()
            .zip(es)
            .fold(Monomial::one(), |m, (v, e)| m.mul(&Monomial::var(*v, e)));
        (m, BigInt::from(c))
    })
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(term(), 0..5).prop_map(LaurentPoly::from_terms)
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::from_poly(&n).div(&RatFunc::from_poly(&d)).unwrap())
}

fn point() -> impl Strategy<Value = Specialization<BigRational>> {
    prop::array::uniform4((1i64..=40, 1i64..=40, any::<bool>())).prop_filter_map("q^2 = 1", |vals| {
        let map = vars()
            .iter()
            .zip(vals)
            .map(|(v, (n, d, s))| {
                let n = if s { n } else { -n };
                (*v, BigRational::new(n.into(), d.into()))
            })
            .collect();
        Specialization::new(map).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn poly_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&LaurentPoly::one()), a);
    }

    #[test]
    fn poly_exact_division(a in poly(), b in nonzero_poly()) {
        prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fraction_equality_is_a_congruence(a in ratfunc(), b in ratfunc(), k in nonzero_poly()) {
        let kk = RatFunc::from_poly(&k);
        // a·k/k is a different representative of a.
        let a2 = a.mul(&kk).div(&kk).unwrap();
        prop_assert!(a.equals(&a2));
        prop_assert!(a2.equals(&a));
        prop_assert!(a.add(&b).equals(&a2.add(&b)));
        prop_assert!(a.mul(&b).equals(&a2.mul(&b)));
        prop_assert!(a.sub(&b).equals(&b.neg().add(&a2)));
        prop_assert!(a.mul(&b.add(&kk)).equals(&a.mul(&b).add(&a2.mul(&kk))));
    }

    #[test]
    fn text_round_trip(a in ratfunc()) {
        let back: RatFunc = a.to_string().parse().unwrap();
        prop_assert!(back.equals(&a));
    }

    #[test]
    fn specialize_is_a_homomorphism(a in ratfunc(), b in ratfunc(), s in point()) {
        let (Ok(x), Ok(y)) = (specialize(&a, &s), specialize(&b, &s)) else { return Ok(()) };
        prop_assert_eq!(specialize(&a.add(&b), &s).unwrap(), x.clone() + y.clone());
        prop_assert_eq!(specialize(&a.mul(&b), &s).unwrap(), x.clone() * y.clone());
        prop_assert_eq!(specialize(&a.sub(&b), &s).unwrap(), x.clone() - y.clone());
        if !y.is_zero() {
            if let Ok(q) = specialize(&a.div(&b).unwrap(), &s) {
                prop_assert_eq!(q, x / y);
            }
        }
    }

    #[test]
    fn fp_field_axioms(a in 1u64..u64::MAX, b in 1u64..u64::MAX, c in 0u64..u64::MAX) {
        let (a, b, c) = (Fp::new(a), Fp::new(b), Fp::new(c));
        prop_assert!(a.mul(&b.add(&c)).equals(&a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.mul(&b).mul(&c).equals(&a.mul(&b.mul(&c))));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }
}

/// `(f − resum) · den` has t-valuation at least N.
fn series_residual_valuation(f: &RatFunc, n: usize) -> Option<i32> {
    let s = expand_series(f, Var::T, Direction::AtZero, n).unwrap();
    let (_, den) = f.num_den();
    let res = f.sub(&s.resum()).mul(&RatFunc::from_poly(&den));
    if res.is_zero() {
        return None;
    }
    let (rn, rd) = res.num_den();
    Some(rn.min_exponent(Var::T).unwrap() - rd.min_exponent(Var::T).unwrap())
}

#[test]
fn series_resum_agrees_to_order() {
    let t = RatFunc::t();
    let one = RatFunc::one();
    for r in 1..=3 {
        let mut f = one.clone();
        for j in 1..=r {
            let u = RatFunc::u(j).unwrap();
            f = f.mul(&t.sub(&u).div(&t.mul(&u).sub(&one)).unwrap());
        }
        for n in [1usize, 4, 7] {
            if let Some(v) = series_residual_valuation(&f, n) {
                assert!(v >= n as i32, "r={r} N={n}: valuation {v}");
            }
        }
    }
}

#[test]
fn specialization_rejects_poles() {
    let u = RatFunc::u(1).unwrap();
    let f = RatFunc::one().div(&u.sub(&RatFunc::one())).unwrap();
    let one = || BigRational::from_integer(1.into());
    let s = Specialization::new([(Var::u(1).unwrap(), one())].into_iter().collect()).unwrap();
    assert!(specialize(&f, &s).is_err());
    assert!(Specialization::new([(Var::Q, one())].into_iter().collect()).is_err());
}
