// Families that have more than one of the extremal shapes.

use spid_core::classify::all_shape_matches;
use spid_core::oracle::{oracle_intersection_dim, oracle_rank};
use spid_core::sweep::{bundles, SweepConfig};
use spid_core::*;

fn rank_of(spaces: &[&Subspace]) -> usize {
    let s = spaces[0];
    let rows: Vec<&[u32]> = spaces.iter().flat_map(|x| x.basis().iter().map(Vec::as_slice)).collect();
    oracle_rank(s.field().order(), s.ambient_dim(), rows)
}

/// For every subset of members: its size, span dimension and the dimension
/// of the common intersection. Sorted, so it ignores member order and any
/// change of coordinates.
fn subset_profile(f: &SpidFamily) -> Vec<(usize, usize, usize)> {
    let n = f.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let members: Vec<&Subspace> = idx.iter().map(|&i| f.member(i)).collect();
        let mut common = members[0].clone();
        for m in &members[1..] {
            common = common.intersect(m).unwrap();
        }
        out.push((idx.len(), rank_of(&members), common.dim()));
    }
    out.sort();
    out
}

fn check_pencil(f: &SpidFamily, t: usize, w: &Witness) {
    let k = f.k();
    let Witness::Pencil { anchor, v_prime, hyperplanes, classes, anchor_dims } = w else {
        panic!("expected a pencil witness, got {w:?}");
    };
    assert_eq!(v_prime.dim(), k - t + 2);
    let plane = f.member(anchor[0]).sum(f.member(anchor[1])).unwrap();
    for (h, class) in hyperplanes.iter().zip(classes) {
        assert_eq!(h.dim(), k - t + 1);
        assert!(v_prime.contains(h).unwrap());
        for &j in class {
            assert_eq!(oracle_intersection_dim(f.member(j), &plane), k - t + 1);
            assert!(f.member(j).contains(h).unwrap());
        }
    }
    let mut dims = *anchor_dims;
    dims.sort();
    assert_eq!(dims, [k - t, k - t + 1]);
}

#[test]
fn class_i_with_three_petals_has_the_class_iii_shape() {
    let p = ClassIParams::new(2, 3, 2, 5, 3);
    let f = build_class_i(&p).unwrap();
    let matches = all_shape_matches(&f, 2).unwrap();
    let iii = matches.iter().find(|m| m.verdict == Verdict::ClassIII).expect("a class III shape");
    check_pencil(&f, 2, &iii.witness);
    assert!(matches.iter().any(|m| m.verdict == Verdict::ClassI));
}

#[test]
fn class_i_with_three_petals_looks_like_some_class_iii_build() {
    let cfg = SweepConfig {
        q: vec![2, 3],
        k: vec![3, 4],
        n: vec![5, 6],
        classes: vec!["I".into(), "III".into()],
        ..SweepConfig::default()
    };
    let all = bundles(&cfg);
    let mut seen = 0;
    for p in &all {
        let ConstructionParams::ClassI(c) = p else { continue };
        if c.m != 3 {
            continue;
        }
        seen += 1;
        let prof = subset_profile(&p.build().unwrap());
        let twin = all.iter().any(|o| {
            matches!(o, ConstructionParams::ClassIII(_))
                && (o.q(), o.k(), o.n(), o.t_pair()) == (p.q(), p.k(), p.n(), p.t_pair())
                && subset_profile(&o.build().unwrap()) == prof
        });
        assert!(twin, "{c:?} has no class III twin");
    }
    assert!(seen > 0);
}

#[test]
fn class_iii_builds_carry_a_three_petal_sunflower() {
    let cfg = SweepConfig {
        q: vec![2, 3],
        k: (3..=5).collect(),
        n: (4..=6).collect(),
        classes: vec!["III".into()],
        ..SweepConfig::default()
    };
    for p in bundles(&cfg) {
        let f = p.build().unwrap();
        let t = p.t_pair().0;
        let sf = find_max_sunflower(&f, f.k() - t).unwrap().unwrap();
        assert!(sf.indices.len() >= 3, "{p:?}");
        let r = classify_extremal(&f).unwrap();
        assert_eq!(r.verdict, Verdict::ClassIII);
        assert!(r.also_matches.contains(&Verdict::ClassI), "{p:?}");
    }
}

#[test]
fn class_ii_also_has_the_class_iv_shape() {
    for (q, k, t, n) in [(2, 3, 2, 4), (3, 4, 3, 5), (2, 5, 2, 6)] {
        let f = build_class_ii(&ClassIIParams::new(q, k, t, n)).unwrap();
        let r = classify_extremal(&f).unwrap();
        assert_eq!(r.verdict, Verdict::ClassII);
        let Witness::CommonHyperplane { anchor, w } = &r.witness else {
            panic!("{:?}", r.witness)
        };
        assert_eq!(w.dim(), k - t + 1);
        for j in (0..n).filter(|j| !anchor.contains(j)) {
            assert!(f.member(j).contains(w).unwrap());
        }
        assert!(r.also_matches.contains(&Verdict::ClassIV), "{q} {k} {t} {n}");
    }
}

#[test]
fn class_iv_and_wide_class_i_round_trip() {
    let cfg = SweepConfig {
        q: vec![2, 3],
        k: (3..=6).collect(),
        n: (3..=7).collect(),
        classes: vec!["I".into(), "IV".into()],
        ..SweepConfig::default()
    };
    for p in bundles(&cfg) {
        if let ConstructionParams::ClassI(c) = &p {
            if c.m == 3 {
                continue;
            }
        }
        let want = if p.name() == "I" { Verdict::ClassI } else { Verdict::ClassIV };
        assert_eq!(classify_extremal(&p.build().unwrap()).unwrap().verdict, want, "{p:?}");
    }
}
