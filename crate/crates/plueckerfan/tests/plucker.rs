use plueckerfan::order::{diamond_pairs, OrderIdeal};
use plueckerfan::plucker::*;

fn count_formula(n: i64) -> (i64, i64) {
    let p = |e: i64, x: i64| if e >= 0 { x << e } else { x >> -e };
    let diamond = p(n - 5, n * n - n - 2);
    let special = p(n - 4, n - 3) + p(n - 3, 1);
    (diamond, special)
}

#[test]
fn diamond_and_special_counts() {
    for n in 3..=8 {
        let m = build_m(n).unwrap();
        let pairs = diamond_pairs(m.lattice());
        let special = pairs
            .iter()
            .filter(|&&(a, b)| m.classify_pair(a, b).unwrap().kind == PairKind::DiamondSpecial)
            .count() as i64;
        let (d, s) = count_formula(n as i64);
        assert_eq!((pairs.len() as i64, special), (d, s), "n = {n}");
    }
}

#[test]
fn every_incomparable_pair_classifies_consistently() {
    for n in 3..=6 {
        let m = build_m(n).unwrap();
        let nl = build_n(n).unwrap();
        for (a, b) in m.lattice().incomparable_pairs() {
            let cm = m.classify_pair(a, b).unwrap();
            let cn = nl.classify_pair(nl.tau(a).unwrap(), nl.tau(b).unwrap()).unwrap();
            assert_eq!(cm.kind, cn.kind);
        }
    }
}

#[test]
fn ranks_match_closed_form() {
    for n in 2..=7 {
        let m = build_m(n).unwrap();
        for a in 0..m.len() {
            assert_eq!(m.lattice().grade(a), m_grade(m.label(a), n));
        }
    }
}

#[test]
fn join_irreducible_order_is_componentwise() {
    for n in 2..=7 {
        let m = build_m(n).unwrap();
        let ji = m.lattice().join_irreducible_elements();
        for &x in ji {
            for &y in ji {
                let (r, s) = m.ji_coord(x).unwrap();
                let (u, v) = m.ji_coord(y).unwrap();
                assert_eq!(m.lattice().leq(x, y), r <= u && s <= v);
            }
        }
    }
}

#[test]
fn n3_pbw_lattice_shape() {
    let nl = build_n(3).unwrap();
    let names: Vec<String> = (0..nl.len()).map(|a| nl.id(a)).collect();
    assert_eq!(names, ["1", "2", "1,2", "3", "3,2", "1,3"]);
    let h = nl.hasse_json();
    let mut covers = h.covers.clone();
    covers.sort();
    let mut want: Vec<(String, String)> = [("1", "2"), ("2", "1,2"), ("2", "3"), ("1,2", "3,2"), ("3", "3,2"), ("3,2", "1,3")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    want.sort();
    assert_eq!(covers, want);
}

#[test]
fn n4_pbw_extremes() {
    let nl = build_n(4).unwrap();
    assert_eq!(nl.label(nl.lattice().bottom()), &[1]);
    assert_eq!(nl.label(nl.lattice().top()), &[1, 2, 4]);
}

#[test]
fn comparable_pair_is_rejected() {
    let m = build_m(3).unwrap();
    let a = m.element(&[1, 2]).unwrap();
    let b = m.element(&[3]).unwrap();
    assert!(matches!(m.classify_pair(a, b), Err(plueckerfan::Error::Comparable(_, _))));
}

#[test]
fn capacity_and_range_guards() {
    assert!(matches!(build_m(13), Err(plueckerfan::Error::Capacity(_))));
    assert!(build_m(1).is_err());
}

#[test]
fn n7_tableau_from_red_ideal() {
    let nl = build(LatticeKind::N, 7).unwrap();
    let red: &[(u8, u8)] = &[
        (2, 2),
        (3, 3),
        (4, 4),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (1, 3),
        (2, 4),
        (3, 5),
        (1, 4),
        (2, 5),
        (3, 6),
        (1, 5),
        (2, 6),
        (1, 6),
        (1, 7),
    ];
    let l = nl.lattice();
    let jp = l.ji_poset();
    let members: Vec<usize> = red
        .iter()
        .map(|&(r, s)| l.ji_position(nl.ji_element(r, s).unwrap()).unwrap())
        .collect();
    let j = OrderIdeal::from_members(jp, &members).unwrap();
    assert_eq!(j.len(), red.len());
    assert_eq!(tableau_from_ideal(&nl, &j).unwrap(), vec![7, 2, 6, 5]);
    let c = l.element_of_ideal(&j).unwrap();
    assert_eq!(nl.label(c), &[7, 2, 6, 5]);
    let covers = l.poset().upper_covers(c);
    let mut added: Vec<(u8, u8)> = covers
        .iter()
        .map(|&d| {
            let extra = l.ideal_of(d).bits().difference(j.bits());
            let i = extra.iter().next().unwrap();
            nl.ji_coord(l.join_irreducible_elements()[i]).unwrap()
        })
        .collect();
    added.sort();
    assert_eq!(added, vec![(2, 7), (4, 6), (5, 5)]);
}
