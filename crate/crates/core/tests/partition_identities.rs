use std::collections::BTreeSet;

use num_bigint::BigInt;
use spreadlab::bounds::{theta, SpreadParams};
use spreadlab::construct::build_lower_bound_spread;
use spreadlab::gf::Field;
use spreadlab::linalg::{contains, enumerate_subspaces, hyperplanes, Subspace};
use spreadlab::partition::{
    heden_case, heden_check, hyperplane_profile, partition_from_spread, verify_partition,
    HedenCase, PartitionCheck, SubspacePartition, DEFAULT_POINT_BUDGET,
};

fn grid() -> Vec<SpreadParams> {
    let mut out = Vec::new();
    for q in [2u64, 3] {
        for t in 2..=4u32 {
            for n in 2 * t..=3 * t {
                if (q as f64).powi(n as i32) <= (1u64 << 22) as f64 {
                    out.push(SpreadParams::new(q, n, t).unwrap());
                }
            }
        }
    }
    out
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// Checks both counting identity families from scratch on a profile table.
fn check_identities(part: &SubspacePartition, b: &[Vec<u64>], dims: &[usize]) {
    let q = part.field().order() as u64;
    let n = part.ambient() as u32;
    let size = part.len() as u64;
    for row in b {
        let s: u64 = row.iter().zip(dims).map(|(&c, &d)| c * q.pow(d as u32)).sum();
        assert_eq!(1 + s, size);
    }
    assert_eq!(big(b.len() as u64), theta(n, q));
    let types = part.type_vector();
    for (k, &d) in dims.iter().enumerate() {
        let sum: u64 = b.iter().map(|row| row[k]).sum();
        assert_eq!(big(sum), big(types[&d] as u64) * theta(n - d as u32, q));
    }
}

#[test]
fn spread_partitions_satisfy_all_identities() {
    for p in grid() {
        let s = build_lower_bound_spread(&p).unwrap();
        let part = partition_from_spread(&s).unwrap();
        assert_eq!(verify_partition(&part, DEFAULT_POINT_BUDGET).unwrap(), PartitionCheck::Valid);
        let types = part.type_vector();
        let nt = s.len() as u64;
        assert_eq!(types[&(p.t() as usize)] as u64, nt);
        let n1 = theta(p.n(), p.q()) - big(nt) * theta(p.t(), p.q());
        assert_eq!(big(types.get(&1).copied().unwrap_or(0) as u64), n1, "{p}");

        let prof = hyperplane_profile(&part).unwrap();
        let rows: Vec<Vec<u64>> = (0..prof.hyperplane_count()).map(|h| prof.b(h).to_vec()).collect();
        check_identities(&part, &rows, prof.dims());
        let tally_total: u64 = prof.tally().values().sum();
        assert_eq!(big(tally_total), theta(p.n(), p.q()));
        if let Some(v) = heden_check(&part) {
            assert!(v.satisfied, "{p}: {v:?}");
        }
    }
}

#[test]
fn profile_matches_direct_containment() {
    for (q, n, t) in [(2u64, 5u32, 2u32), (2, 6, 3), (3, 4, 2), (2, 7, 3)] {
        let s = build_lower_bound_spread(&SpreadParams::new(q, n, t).unwrap()).unwrap();
        let part = partition_from_spread(&s).unwrap();
        let prof = hyperplane_profile(&part).unwrap();
        for (h, hyp) in hyperplanes(n as usize, part.field()).enumerate() {
            let direct: Vec<u64> = prof
                .dims()
                .iter()
                .map(|&d| part.parts().iter().filter(|p| p.dim() == d && contains(&hyp, p)).count() as u64)
                .collect();
            assert_eq!(prof.b(h), &direct[..], "({q},{n},{t}) h={h}");
        }
    }
}

#[test]
fn profile_examples() {
    let f = Field::with_order(2).unwrap();
    let s = build_lower_bound_spread(&SpreadParams::new(2, 4, 2).unwrap()).unwrap();
    let prof = hyperplane_profile(&partition_from_spread(&s).unwrap()).unwrap();
    assert_eq!(prof.tally().get(&vec![1]), Some(&15));
    let triv = SubspacePartition::trivial(&f, 4);
    let prof = hyperplane_profile(&triv).unwrap();
    assert!((0..15).all(|h| prof.b(h) == [7]));
}

#[test]
fn broken_partitions_are_rejected() {
    let s = build_lower_bound_spread(&SpreadParams::new(2, 5, 2).unwrap()).unwrap();
    let part = partition_from_spread(&s).unwrap();
    assert_eq!(part.type_string(), "[2^9, 1^4]");
    let mut parts = part.parts().to_vec();
    parts.pop();
    let broken = SubspacePartition::new(part.field(), 5, parts).unwrap();
    assert!(matches!(
        verify_partition(&broken, DEFAULT_POINT_BUDGET).unwrap(),
        PartitionCheck::Invalid { .. }
    ));
}

/// Every partition of V(4,2) into subspaces of dimension 1, 2 or 3.
/// Two planes always meet and a plane meets every line, so a plane occurs
/// only alone with points; otherwise the parts are disjoint lines plus points.
fn all_partition_types_v42() -> (Vec<SubspacePartition>, BTreeSet<Vec<(usize, usize)>>) {
    let f = Field::with_order(2).unwrap();
    let lines: Vec<Subspace> = enumerate_subspaces(4, 2, &f, 1000).unwrap().collect();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    fn grow(lines: &[Subspace], start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for i in start..lines.len() {
            if cur.iter().all(|&j| lines[j].is_disjoint(&lines[i]).unwrap()) {
                cur.push(i);
                grow(lines, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    grow(&lines, 0, &mut Vec::new(), &mut sets);

    let complete = |parts: Vec<Subspace>| {
        let mut all = parts.clone();
        for v in Subspace::full(&f, 4).points() {
            if parts.iter().all(|p| !p.contains_vector(&v)) {
                all.push(Subspace::span(&f, 4, &[v]).unwrap());
            }
        }
        SubspacePartition::new(&f, 4, all).unwrap()
    };
    let mut partitions: Vec<SubspacePartition> = sets
        .iter()
        .map(|set| complete(set.iter().map(|&i| lines[i].clone()).collect()))
        .collect();
    for plane in enumerate_subspaces(4, 3, &f, 1000).unwrap() {
        partitions.push(complete(vec![plane]));
    }
    let types = partitions
        .iter()
        .map(|p| p.type_vector().into_iter().collect())
        .collect();
    (partitions, types)
}

#[test]
fn heden_agrees_with_brute_force_on_v42() {
    let (partitions, types) = all_partition_types_v42();
    for p in &partitions {
        assert!(verify_partition(p, DEFAULT_POINT_BUDGET).unwrap().is_valid());
        if let Some(v) = heden_check(p) {
            assert!(v.satisfied, "{}: {v:?}", p.type_string());
        }
    }
    // Exactly two points next to lines only is impossible, as case IV says.
    assert!(!types.iter().any(|t| t.as_slice() == [(1, 2), (2, t.get(1).map_or(0, |x| x.1))]));
    let v = heden_case(&BigInt::from(2), 1, 2, 2);
    assert_eq!((v.case, v.satisfied), (HedenCase::IV, false));
    // For every count of points that appears beside lines only, the theorem agrees;
    // for every count it forbids, no partition has it.
    for m in 1..=15u64 {
        let realized = types.iter().any(|t| t.len() == 2 && t[0] == (1, m as usize) && t[1].0 == 2);
        let allowed = heden_case(&BigInt::from(m), 1, 2, 2).satisfied;
        if realized {
            assert!(allowed, "m={m}");
        }
        if !allowed {
            assert!(!realized, "m={m}");
        }
    }
}
