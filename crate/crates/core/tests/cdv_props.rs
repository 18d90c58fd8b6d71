mod common;

use common::q;
use mindisc::cdv::{certify, split_f_g, verify_certificate, T, Y1, Y2, Y3};
use mindisc::report::Certificate;
use mindisc::{parse, Monomial, Polynomial, Rational, Ring};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TYPES: [&str; 13] = [
    "A1", "A2", "A3", "A4", "A5", "D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8",
];

fn ycut() -> Ring {
    Ring::new(&["y1", "y2", "y3", "t"]).unwrap()
}

fn normal_form(ty: &str) -> Polynomial {
    let n: u32 = ty[1..].parse().unwrap();
    let text = match (&ty[..1], n) {
        ("A", n) => format!("y1^2 + y2^2 + y3^{}", n + 1),
        ("D", n) => format!("y1^2 + y2*y3^2 + y3^{}", n - 1),
        ("E", 6) => "y1^2 + y2^3 + y3^4".into(),
        ("E", 7) => "y1^2 + y2^3 + y2*y3^3".into(),
        _ => "y1^2 + y2^3 + y3^5".into(),
    };
    parse(&ycut(), &text).unwrap()
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-5i64..=5);
    }
    q(n, rng.gen_range(1..=3))
}

fn random_monomial(rng: &mut ChaCha8Rng, min_deg: u32, max_deg: u32) -> Monomial {
    let deg = rng.gen_range(min_deg..=max_deg);
    let mut e = [0u32; 4];
    for _ in 0..deg {
        e[rng.gen_range(0..4)] += 1;
    }
    Monomial::new(e.to_vec())
}

/// `G = f + t·g` with `g(0) = 0` and `deg g ≤ 4`. Besides plain sparse
/// perturbations, applies coordinate shifts `yᵢ → yᵢ + t·(…)` to the
/// normal form; those leave `f` intact and drive the certifier into its
/// deeper branches.
fn random_germ(ty: &str, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = ycut();
    let f = normal_form(ty);
    let t = Polynomial::var(&r, T);
    let mode = rng.gen_range(0..3);
    let mut g0 = Polynomial::zero(&r);
    if mode < 2 {
        for _ in 0..rng.gen_range(0..=4) {
            let m = random_monomial(&mut rng, if mode == 0 { 1 } else { 2 }, 4);
            g0 = &g0 + &Polynomial::monomial(&r, m, small(&mut rng));
        }
    }
    let mut big = &f + &(&t * &g0);
    if mode > 0 {
        for _ in 0..rng.gen_range(1..=3) {
            let var = [Y1, Y2, Y3][rng.gen_range(0..3)];
            let mut h = Polynomial::constant(&r, small(&mut rng));
            if var == Y1 && rng.gen_bool(0.5) {
                let other = [Y2, Y3, T][rng.gen_range(0..3)];
                h = &h + &Polynomial::var(&r, other).scale(&small(&mut rng));
            }
            let repl = &Polynomial::var(&r, var) + &(&t * &h);
            let candidate = big.substitute(var, &repl).unwrap();
            let (_, g) = split_f_g(&candidate).unwrap();
            if g.is_zero() || g.total_degree().unwrap() <= 4 {
                big = candidate;
            }
        }
    }
    big
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(260))]

    #[test]
    fn certify_always_reaches_one(ty in 0usize..13, seed in any::<u64>()) {
        let g = random_germ(TYPES[ty], seed);
        let c = certify(&g).map_err(|e| TestCaseError::fail(format!("{g}: {e}")))?;
        prop_assert_eq!(c.d, 1);
        prop_assert_eq!(c.du_val.to_string(), TYPES[ty]);
        prop_assert_eq!(verify_certificate(&g, &c), Ok(()));

        let mut h = g.clone();
        for s in &c.transforms {
            prop_assert!(s.is_origin_fixing_and_invertible());
            h = s.apply(&h).unwrap();
        }
        for s in c.transforms.iter().rev() {
            h = h.substitute(s.variable, &s.inverse()).unwrap();
        }
        prop_assert_eq!(&h, &g);

        let cert = Certificate::Cdv(c);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(back.verify(&g), Ok(()));
    }
}
