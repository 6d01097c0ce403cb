use plueckerfan::oracle::{coefficients_mod_p, lattice_membership, standard_expansion_mod_p, OracleMode};
use plueckerfan::plucker::{build_m, build_n, PluckerLattice};
use plueckerfan::polytope::odot_elements;
use plueckerfan::straighten::*;

fn check_ladders(pl: &PluckerLattice, pbw: bool) {
    let l = pl.lattice();
    let p = l.poset();
    for (a, b) in l.incomparable_pairs() {
        let s = straighten_pair(pl, a, b).unwrap();
        let terms = ladder(pl, &s, a, b);
        let first_lower = if pbw { odot_elements(l, pl.partition(), a, b).unwrap() } else { l.meet(a, b) };
        assert_eq!((terms[0].lower, terms[0].upper), (first_lower, l.join(a, b)), "{} {}", pl.id(a), pl.id(b));
        assert!(terms[0].coeff == plueckerfan::poly::coeff(1));
        for t in &terms[1..] {
            if pbw {
                assert!(p.leq(t.lower, l.meet(a, b)));
            } else {
                assert!(p.lt(t.lower, l.meet(a, b)));
            }
            assert!(p.lt(l.join(a, b), t.upper));
        }
        assert!(lattice_membership(pl, &s, OracleMode::Probabilistic, 4, 7).unwrap().member);
    }
}

#[test]
fn semistandard_ladders() {
    for n in 3..=5 {
        check_ladders(&build_m(n).unwrap(), false);
    }
}

#[test]
fn pbw_ladders() {
    for n in 3..=5 {
        check_ladders(&build_n(n).unwrap(), true);
    }
}

#[test]
fn expansion_matches_linear_algebra() {
    for n in 3..=4 {
        for pl in [build_m(n).unwrap(), build_n(n).unwrap()] {
            for (a, b) in pl.lattice().incomparable_pairs() {
                let s = straighten_pair(&pl, a, b).unwrap();
                let mut rhs = plueckerfan::poly::Poly::term(vec![a, b], plueckerfan::poly::coeff(1));
                rhs = &rhs - &s;
                let want = standard_expansion_mod_p(&pl, a, b, 3).unwrap();
                assert_eq!(coefficients_mod_p(&rhs).unwrap(), want);
            }
        }
    }
}
