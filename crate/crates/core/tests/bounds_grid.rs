use num_bigint::BigInt;
use spreadlab::bounds::{
    best_known, c1_c2, check_descent_hypotheses, compare_bounds, delta, drake_freeman, h_of,
    lemma_main_bound, lower_bound, main_bound, main_excess, omega_floor, scaled_theta_ceil, theta,
    BoundSource, SpreadParams,
};

fn pw(q: i128, k: u32) -> i128 {
    q.pow(k)
}

fn th(i: u32, q: i128) -> i128 {
    (pw(q, i) - 1) / (q - 1)
}

fn isqrt(v: i128) -> i128 {
    let mut x = (v as f64).sqrt() as i128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

fn ceil_div(a: i128, b: i128) -> i128 {
    (a + b - 1).div_euclid(b)
}

fn big(v: i128) -> BigInt {
    BigInt::from(v)
}

/// Drake–Freeman bound in machine integers.
fn df_oracle(q: i128, n: u32, t: u32) -> i128 {
    let r = n % t;
    let (qt, qr) = (pw(q, t), pw(q, r));
    let root = isqrt(4 * qt * (qt - qr) + 1);
    let omega = (root - (2 * qt - 2 * qr + 1)).div_euclid(2);
    (pw(q, n) - pw(q, t + r)) / (qt - 1) + qr - omega - 1
}

fn grid() -> impl Iterator<Item = (u64, u32, u32)> {
    [2u64, 3, 4, 5]
        .into_iter()
        .flat_map(|q| (2..=8u32).flat_map(move |t| (t + 1..=4 * t).map(move |n| (q, n, t))))
}

#[test]
fn lower_bound_below_every_upper() {
    for (q, n, t) in grid() {
        let p = SpreadParams::new(q, n, t).unwrap();
        let r = best_known(&p);
        let lower = lower_bound(&p);
        for u in &r.uppers {
            assert!(lower <= u.value || u.source == BoundSource::TrivialOverlap, "{p}: {u:?}");
            assert!(r.lower <= u.value, "{p}: {u:?}");
        }
        assert!(r.uppers.iter().all(|u| r.best_upper <= u.value));
        if let Some(e) = &r.exact {
            assert_eq!(e.value, r.best_upper, "{p}");
        }
        if p.r() > 0 {
            assert_eq!(drake_freeman(&p).unwrap(), big(df_oracle(q as i128, n, t)), "{p}");
        }
    }
}

#[test]
fn omega_matches_closed_form_when_t_at_least_2r() {
    for (q, n, t) in grid() {
        let r = n % t;
        if r >= 1 && t >= 2 * r {
            let closed = (pw(q as i128, r) - 2).div_euclid(2);
            assert_eq!(omega_floor(q, t, r).unwrap(), big(closed), "q={q} t={t} r={r}");
        }
    }
}

#[test]
fn main_bound_is_lemma_at_default_excess() {
    let mut covered = 0;
    for (q, n, t) in grid() {
        let p = SpreadParams::new(q, n, t).unwrap();
        let Ok(m) = main_bound(&p) else {
            assert!(!p.in_main_regime());
            continue;
        };
        covered += 1;
        let r = p.r();
        let x = main_excess(q, t, r);
        check_descent_hypotheses(&p, &x).unwrap();
        assert_eq!(lemma_main_bound(&p, &x).unwrap(), m, "{p}");
        let qi = q as i128;
        let c = c1_c2(q, t);
        let oracle = (pw(qi, n) - pw(qi, t + r)) / (pw(qi, t) - 1) + pw(qi, r)
            - (qi - 1) * (t as i128 - 2)
            - c.c1 as i128
            + c.c2 as i128;
        assert_eq!(m, big(oracle), "{p}");
        // Remark: t ≡ 1 (mod q), t ≢ 1 (mod q²) gives excess q^r − (q−1)(t−1).
        if (t as u64) % q == 1 % q && (t as u64) % (q * q) != 1 {
            assert_eq!(x, big(pw(qi, r) - (qi - 1) * (t as i128 - 1)), "{p}");
        }
    }
    assert!(covered > 10);
}

#[test]
fn c1_c2_definition() {
    for q in [2u64, 3, 4, 5, 7] {
        for t in 2..=40u32 {
            let c = c1_c2(q, t);
            assert!(c.c1 < q);
            assert_eq!((c.c1 + q * 100) % q, (t as u64 + q * 100 - 2) % q);
            let s = (q - 1) * (t as u64 - 2) + c.c1;
            assert_eq!(c.c2, if s.is_multiple_of(q * q) { q } else { 0 });
        }
    }
}

#[test]
fn corollary_comparisons() {
    let p = SpreadParams::new(2, 17, 13).unwrap();
    let c = c1_c2(2, 13);
    let expected = 16 / 2 - 11 - c.c1 as i128 + c.c2 as i128;
    assert_eq!(compare_bounds(&p).unwrap(), big(expected));
    assert_eq!(expected, -2);
    assert_eq!(
        compare_bounds(&p).unwrap(),
        main_bound(&p).unwrap() - big(df_oracle(2, 17, 13))
    );
    // Closed form on the whole corollary regime, negative on its upper part.
    let mut negative = 0;
    let regime = [2u64, 3, 4, 5].into_iter().flat_map(|q| {
        (2..=4u32).flat_map(move |r| {
            let top = (th(r, q as i128) as u32).min(40);
            // Keep q^n inside the i128 oracle.
            (2 * r..=top)
                .filter(move |&t| ((2 * t + r + 2) as f64) * (q as f64).log2() < 120.0)
                .map(move |t| (q, 2 * t + r, t))
        })
    });
    for (q, n, t) in regime.chain(grid()) {
        let p = SpreadParams::new(q, n, t).unwrap();
        let Ok(d) = compare_bounds(&p) else { continue };
        let (qi, r) = (q as i128, p.r());
        assert!(r >= 2 && t >= 2 * r && big(t as i128) <= theta(r, q));
        let c = c1_c2(q, t);
        let closed = pw(qi, r) / 2 - (qi - 1) * (t as i128 - 2) - c.c1 as i128 + c.c2 as i128;
        assert_eq!(d, big(closed), "{p}");
        assert_eq!(d, main_bound(&p).unwrap() - big(df_oracle(qi, n, t)), "{p}");
        let th_r = th(r, qi);
        let from = (th_r + 1) / 2 + if q == 2 { 5 } else { 4 };
        if (from..=th_r).contains(&(t as i128)) {
            assert!(d < BigInt::from(0), "{p}: {d}");
            negative += 1;
        }
    }
    assert!(negative > 0);
}

#[test]
fn delta_lemma_brute_force() {
    let mut checks = 0u64;
    for q in [2i128, 3, 4, 5] {
        for t in 2..=8u32 {
            for r in 1..t {
                for x in 1..pw(q, r) {
                    let bx = big(x);
                    // (i) at every i > r, in particular i = t.
                    for i in r + 1..=t {
                        let direct = ceil_div(x * th(i, q), pw(q, i));
                        assert_eq!(direct, ceil_div(x, q - 1));
                        assert_eq!(scaled_theta_ceil(&bx, i, q as u64), big(direct));
                        checks += 1;
                    }
                    assert_eq!(h_of(&bx, q as u64), big(ceil_div(x, q - 1)));
                    let ds: Vec<i128> = (0..=t)
                        .map(|i| pw(q, i) * ceil_div(x * th(i, q), pw(q, i)) - x * th(i, q))
                        .collect();
                    for i in 1..=t {
                        let d = ds[i as usize];
                        assert_eq!(delta(&bx, i, q as u64), big(d), "q={q} x={x} i={i}");
                        // (ii) range and (iii) zero iff q^i | x.
                        assert!((0..pw(q, i)).contains(&d));
                        assert_eq!(d == 0, x % pw(q, i) == 0);
                        if i < t {
                            let next = ds[i as usize + 1];
                            assert_eq!((x + next) % q, 0);
                            assert_eq!(((x + next) / q).rem_euclid(pw(q, i)), d);
                        }
                        checks += 3;
                    }
                }
            }
        }
    }
    assert!(checks > 100_000, "{checks}");
}

#[test]
fn theta_matches_oracle() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for i in 0..20 {
            assert_eq!(theta(i, q), big(th(i, q as i128)));
        }
    }
}
