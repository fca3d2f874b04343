use num_bigint::BigInt;
use spreadlab::bounds::{best_known, lower_bound, theta, SpreadParams};
use spreadlab::construct::{build_lower_bound_spread, mult_map_matrix, verify_partial_spread, PartialSpread, SpreadViolation, Verification};
use spreadlab::gf::{ExtField, Field};
use spreadlab::linalg::Subspace;

fn grid() -> Vec<SpreadParams> {
    let mut out = Vec::new();
    for q in [2u64, 3] {
        for t in 2..=4u32 {
            for n in 2 * t..=3 * t {
                out.push(SpreadParams::new(q, n, t).unwrap());
            }
        }
    }
    out
}

#[test]
fn grid_spreads_verify_and_meet_lower_bound() {
    for p in grid() {
        let s = build_lower_bound_spread(&p).unwrap();
        assert!(s.status().is_verified(), "{p}");
        assert_eq!(BigInt::from(s.len()), lower_bound(&p), "{p}");
        assert!(BigInt::from(s.len()) <= best_known(&p).best_upper, "{p}");
        assert!(s.members().iter().all(|m| m.dim() == p.t() as usize));
        // Pairwise rank check, independent of the point-table verifier.
        if s.len() <= 300 {
            for (i, a) in s.members().iter().enumerate() {
                for b in &s.members()[i + 1..] {
                    assert!(a.is_disjoint(b).unwrap(), "{p}");
                }
            }
        }
    }
}

#[test]
fn exact_spreads_cover_every_point() {
    for p in grid().into_iter().filter(|p| p.r() == 0) {
        let s = build_lower_bound_spread(&p).unwrap();
        let total: usize = s.members().iter().map(|m| m.points().len()).sum();
        assert_eq!(BigInt::from(total), theta(p.n(), p.q()), "{p}");
    }
}

#[test]
fn known_sizes() {
    for (q, n, t, size) in [(2, 7, 3, 17), (2, 6, 3, 9), (3, 5, 2, 28), (2, 8, 3, 33)] {
        let s = build_lower_bound_spread(&SpreadParams::new(q, n, t).unwrap()).unwrap();
        assert_eq!(s.len(), size);
    }
    let s = build_lower_bound_spread(&SpreadParams::new(2, 5, 3).unwrap()).unwrap();
    assert_eq!(s.len(), 1);
}

#[test]
fn multiplication_maps_are_mrd() {
    for q in [2u64, 3] {
        let base = Field::with_order(q).unwrap();
        for t in 1..=4usize {
            for m in t..=4 {
                let ext = ExtField::new(&base, m).unwrap();
                let mats: Vec<_> = ext.elements().map(|a| mult_map_matrix(&ext, a, t).unwrap()).collect();
                assert_eq!(mats.len() as u64, q.pow(m as u32));
                for i in 0..mats.len() {
                    for j in i + 1..mats.len() {
                        assert_eq!(mats[i].sub(&mats[j]).unwrap().rank(), t, "q={q} t={t} m={m}");
                    }
                }
            }
        }
    }
}

#[test]
fn verifier_reports_first_violation() {
    let p = SpreadParams::new(2, 4, 2).unwrap();
    let built = build_lower_bound_spread(&p).unwrap();
    let mut members = built.members().to_vec();
    members.push(members[2].clone());
    let s = PartialSpread::new(p, members).unwrap();
    assert_eq!(
        verify_partial_spread(&s),
        Verification::Failed { violation: SpreadViolation::Overlap { first: 2, second: 5 } }
    );

    let f = Field::with_order(2).unwrap();
    let s = PartialSpread::new(p, vec![Subspace::coordinate(&f, 4, 0, 1)]).unwrap();
    assert!(matches!(
        verify_partial_spread(&s),
        Verification::Failed { violation: SpreadViolation::WrongDimension { index: 0, dim: 1 } }
    ));

    let s = PartialSpread::new(p, Vec::new()).unwrap();
    assert_eq!(verify_partial_spread(&s), Verification::Verified);
}

#[test]
fn spread_files_round_trip() {
    let s = build_lower_bound_spread(&SpreadParams::new(3, 5, 2).unwrap()).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: PartialSpread = serde_json::from_str(&text).unwrap();
    assert_eq!(back.members(), s.members());
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    // Deterministic bytes across builds.
    let again = build_lower_bound_spread(&SpreadParams::new(3, 5, 2).unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&again).unwrap(), text);
}
