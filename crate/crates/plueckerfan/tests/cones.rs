use plueckerfan::cone::*;
use plueckerfan::plucker::{build_m, build_n, PairKind};

#[test]
fn witnesses_certify_every_facet() {
    for n in 3..=5 {
        let m = build_m(n).unwrap();
        let nl = build_n(n).unwrap();
        let cases = [
            (ConeTarget::Hibi, ConeContext::Lattice(m.lattice())),
            (ConeTarget::Genhibi, ConeContext::Partitioned(nl.lattice(), nl.partition())),
            (ConeTarget::Ssyt, ConeContext::Plucker(&m)),
            (ConeTarget::Pbw, ConeContext::Plucker(&nl)),
        ];
        for (t, ctx) in cases {
            let h = cone_hrep(t, ctx).unwrap();
            for f in 0..h.len() {
                let w = facet_witness(&h, ctx, f).unwrap();
                let c = check_witness(&h, f, &w);
                assert!(c.ok(), "{t} n={n} facet {f}: {c:?}");
            }
        }
    }
}

#[test]
fn toric_cones_build() {
    for n in 3..=5 {
        let m = build_m(n).unwrap();
        let nl = build_n(n).unwrap();
        cone_hrep(ConeTarget::ToricGt, ConeContext::Plucker(&m)).unwrap();
        cone_hrep(ConeTarget::ToricFflv, ConeContext::Plucker(&nl)).unwrap();
    }
}

#[test]
fn facets_against_subcone() {
    for n in 3..=6 {
        for pl in [build_m(n).unwrap(), build_n(n).unwrap()] {
            let t = if pl.kind() == plueckerfan::plucker::LatticeKind::M { ConeTarget::Ssyt } else { ConeTarget::Pbw };
            let h = cone_hrep(t, ConeContext::Plucker(&pl)).unwrap();
            for f in 0..h.len() {
                let c = classify_facet_vs_subcone(&h, f, &pl).unwrap();
                let special = h.provenance[f].index == 1;
                assert_eq!(matches!(c, FacetSubcone::MeetsInFacet { .. }), special, "{t} n={n} facet {f}");
                let k = pl.classify_pair(h.provenance[f].a, h.provenance[f].b).unwrap().kind;
                assert_eq!(special, k == PairKind::DiamondSpecial && h.provenance[f].index == 1);
            }
        }
    }
}

#[test]
fn facet_count_formulas() {
    for n in 3..=8 {
        let c = facet_count(n).unwrap();
        assert_eq!(c.diamond as u64, c.diamond_formula);
        assert_eq!(c.special as u64, c.special_formula);
        assert_eq!(c.ssyt as u64, c.total_formula);
        assert_eq!(c.pbw as u64, c.total_formula);
    }
}
