use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use spreadlab::bounds::{delta, main_bound, theta, SpreadParams};
use spreadlab::partition::{check_certificate, descent_certificate, Closure, DescentCertificate, HedenCase};

fn regime_grid() -> Vec<SpreadParams> {
    let mut out = Vec::new();
    for q in [2u64, 3] {
        for r in 2..=3u32 {
            let th = u32::try_from(theta(r, q)).unwrap();
            for t in r + 1..=th {
                for n in t + r + 1..=3 * t + r {
                    if n % t == r {
                        out.push(SpreadParams::new(q, n, t).unwrap());
                    }
                }
            }
        }
    }
    out
}

#[test]
fn default_certificates_check_on_the_regime_grid() {
    let grid = regime_grid();
    assert!(grid.len() > 20);
    for p in grid {
        let c = descent_certificate(&p, None).unwrap();
        let verdict = check_certificate(&c);
        assert!(verdict.valid, "{p}: {verdict:?}");
        assert_eq!(c.claimed_bound, main_bound(&p).unwrap(), "{p}");
        assert_eq!(c.steps.len() as u32, p.t() - 1);
        // Each recorded δ equals the delta operation at the step's index.
        for s in &c.steps {
            assert_eq!(s.delta, delta(&c.x, p.t() - s.j, p.q()));
        }
        let Closure::HedenCases { delta_2, case_s_eq_2, .. } = &c.closure else {
            panic!("{p}: x < q^r expected");
        };
        assert!(*delta_2 > BigInt::from(0) && *delta_2 < BigInt::from(p.q() * p.q()));
        assert_eq!(case_s_eq_2.case, HedenCase::IV);
        assert!(!case_s_eq_2.satisfied);
    }
}

#[test]
fn golden_trace_2_8_3() {
    let c = descent_certificate(&SpreadParams::new(2, 8, 3).unwrap(), Some(BigInt::from(2))).unwrap();
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(v["h"], 2);
    assert_eq!(v["ell"], 4);
    assert_eq!(v["claimed_bound"], 34);
    assert_eq!(v["n_1"], 10);
    assert_eq!(v["steps"][0]["delta"], 2);
    assert_eq!(v["steps"][0]["c_cap"], 1);
    assert_eq!(v["steps"][1]["delta"], 2);
    assert_eq!(v["steps"][1]["c_cap"], 0);
    assert_eq!(v["closure"]["kind"], "HEDEN_CASES");
    assert_eq!(v["closure"]["case_s_eq_2"]["case"], "IV");
    assert_eq!(v["closure"]["case_s_eq_2"]["required_min"], 4);
}

#[test]
fn golden_trace_3_10_4() {
    let c = descent_certificate(&SpreadParams::new(3, 10, 4).unwrap(), Some(BigInt::from(3))).unwrap();
    assert_eq!((c.h.clone(), c.ell.clone(), c.claimed_bound.clone()), (2.into(), 9.into(), 732.into()));
    let deltas: Vec<BigInt> = c.steps.iter().map(|s| s.delta.clone()).collect();
    let expected: Vec<BigInt> = (2..=4).rev().map(|i| delta(&BigInt::from(3), i, 3)).collect();
    assert_eq!(deltas, expected);
    assert!(check_certificate(&c).valid);
}

/// Paths to every scalar leaf of a JSON value.
fn leaves(v: &Value, path: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                path.push(Value::String(k.clone()));
                leaves(x, path, out);
                path.pop();
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                path.push(Value::from(i));
                leaves(x, path, out);
                path.pop();
            }
        }
        _ => out.push(path.clone()),
    }
}

fn leaf_mut<'a>(v: &'a mut Value, path: &[Value]) -> &'a mut Value {
    path.iter().fold(v, |node, key| match key {
        Value::String(k) => node.get_mut(k.as_str()).unwrap(),
        Value::Number(i) => node.get_mut(i.as_u64().unwrap() as usize).unwrap(),
        _ => unreachable!(),
    })
}

fn mutate(leaf: &mut Value, rng: &mut ChaCha8Rng) {
    let bump = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..4i64);
    *leaf = match leaf.take() {
        Value::Bool(b) => Value::Bool(!b),
        Value::Number(n) => Value::from(n.as_i64().unwrap() + bump),
        Value::String(s) if s.parse::<BigInt>().is_ok() => {
            Value::String((s.parse::<BigInt>().unwrap() + bump).to_string())
        }
        Value::String(s) => Value::String(format!("{s}X")),
        Value::Null => Value::from(bump.abs()),
        other => other,
    };
}

fn rejected(original: &DescentCertificate, rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut v = serde_json::to_value(original).unwrap();
    let mut paths = Vec::new();
    leaves(&v, &mut Vec::new(), &mut paths);
    let path = &paths[rng.gen_range(0..paths.len())];
    mutate(leaf_mut(&mut v, path), rng);
    let label = format!("{path:?}");
    match serde_json::from_value::<DescentCertificate>(v) {
        Err(_) => (true, label),
        Ok(c) => (!check_certificate(&c).valid, label),
    }
}

#[test]
fn random_single_field_mutations_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in regime_grid().into_iter().take(12) {
        let c = descent_certificate(&p, None).unwrap();
        for _ in 0..100 {
            let (caught, label) = rejected(&c, &mut rng);
            assert!(caught, "{p}: mutation at {label} slipped through");
        }
    }
}

#[test]
fn every_leaf_mutation_is_rejected() {
    let c = descent_certificate(&SpreadParams::new(2, 8, 3).unwrap(), Some(BigInt::from(2))).unwrap();
    let v = serde_json::to_value(&c).unwrap();
    let mut paths = Vec::new();
    leaves(&v, &mut Vec::new(), &mut paths);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for path in &paths {
        for _ in 0..4 {
            let mut m = v.clone();
            mutate(leaf_mut(&mut m, path), &mut rng);
            let caught = match serde_json::from_value::<DescentCertificate>(m) {
                Err(_) => true,
                Ok(c) => !check_certificate(&c).valid,
            };
            assert!(caught, "mutation at {path:?} slipped through");
        }
    }
}

#[test]
fn drake_freeman_closure_for_large_x() {
    let p = SpreadParams::new(2, 8, 3).unwrap();
    let c = descent_certificate(&p, Some(BigInt::from(6))).unwrap();
    assert!(matches!(c.closure, Closure::DrakeFreeman { .. }));
    assert!(check_certificate(&c).valid);
}
