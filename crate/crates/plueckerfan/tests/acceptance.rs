//! The eleven acceptance criteria, one pass/fail line each.

use std::time::{Duration, Instant};

use plueckerfan::cone::{check_witness, cone_hrep, facet_count, facet_witness, ConeContext, ConeTarget};
use plueckerfan::oracle::{coefficients_mod_p, standard_expansion_mod_p};
use plueckerfan::order::lattice_of_ideals;
use plueckerfan::plucker::{build_m, build_n, PluckerLattice};
use plueckerfan::poly::{coeff, Poly};
use plueckerfan::polytope::ChainOrderPartition;
use plueckerfan::straighten::{
    hibi_generator, lattice_relation_to_json, psi_exponent, straighten_pair, theta_in_z, theta_of_monomial,
    RelationJson, TermJson,
};
use plueckerfan::suites::{random_poset, run_suite, Suite, SuiteConfig, SuiteReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn suites(suite: Suite, ns: &[usize]) -> Result<Vec<SuiteReport>, String> {
    ns.iter()
        .map(|&n| {
            let cfg = SuiteConfig {
                n: Some(n),
                ..SuiteConfig::default()
            };
            run_suite(suite, &cfg).map_err(|e| format!("{suite} n={n}: {e}"))
        })
        .collect()
}

fn summarize(reports: &[SuiteReport]) -> Outcome {
    let checks: usize = reports.iter().map(|r| r.checks).sum();
    let failures: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failures
                .iter()
                .take(3)
                .map(move |f| format!("{} n={}: {} at {} (expected {}, got {})", r.suite, r.n, f.check, f.reproducer, f.expected, f.actual))
        })
        .collect();
    if failures.is_empty() {
        Ok(format!("{checks} checks"))
    } else {
        Err(failures.join("; "))
    }
}

fn within(limit: Duration, start: Instant, out: Outcome) -> Outcome {
    let t = start.elapsed();
    let out = out?;
    if t > limit {
        return Err(format!("{out}, but took {:.1}s (limit {}s)", t.as_secs_f64(), limit.as_secs()));
    }
    Ok(format!("{out} in {:.2}s", t.as_secs_f64()))
}

fn facet_counts() -> Outcome {
    let start = Instant::now();
    let mut rows = Vec::new();
    for n in 3..=9 {
        let c = facet_count(n).map_err(|e| e.to_string())?;
        let ok = c.ssyt as u64 == c.total_formula
            && c.diamond as u64 == c.diamond_formula
            && c.special as u64 == c.total_formula - c.diamond_formula
            && c.pbw == c.ssyt;
        if !ok {
            return Err(format!("n={n}: {c:?}"));
        }
        rows.push(format!("{}={}+{}", c.ssyt, c.diamond, c.special));
    }
    within(Duration::from_secs(10), start, Ok(format!("n=3..9: {}", rows.join(", "))))
}

fn relation(pl: &PluckerLattice, a: &[u8], b: &[u8]) -> Result<RelationJson, String> {
    let x = pl.element(a).map_err(|e| e.to_string())?;
    let y = pl.element(b).map_err(|e| e.to_string())?;
    let s = straighten_pair(pl, x, y).map_err(|e| e.to_string())?;
    Ok(lattice_relation_to_json(pl, &s))
}

fn expected(terms: &[(&str, [&[u8]; 2])]) -> RelationJson {
    let mut terms: Vec<TermJson> = terms
        .iter()
        .map(|(c, f)| TermJson {
            coeff: c.to_string(),
            factors: f.iter().map(|x| x.to_vec()).collect(),
        })
        .collect();
    terms.sort_by(|x, y| x.factors.cmp(&y.factors));
    RelationJson { terms }
}

fn sorted_terms(mut r: RelationJson) -> RelationJson {
    for t in r.terms.iter_mut() {
        t.factors.sort();
    }
    r.terms.sort_by(|x, y| x.factors.cmp(&y.factors));
    r
}

fn straightening_examples() -> Outcome {
    let m4 = build_m(4).map_err(|e| e.to_string())?;
    let m3 = build_m(3).map_err(|e| e.to_string())?;
    let ex1 = sorted_terms(relation(&m4, &[1, 4], &[2, 3])?);
    let want1 = expected(&[("1", [&[1, 4], &[2, 3]]), ("-1", [&[1, 3], &[2, 4]]), ("1", [&[1, 2], &[3, 4]])]);
    let ex2 = sorted_terms(relation(&m3, &[2, 3], &[1])?);
    let want2 = expected(&[("1", [&[1], &[2, 3]]), ("-1", [&[1, 3], &[2]]), ("1", [&[1, 2], &[3]])]);
    if ex1 != want1 {
        return Err(format!("s(a_14, a_23) = {ex1:?}"));
    }
    if ex2 != want2 {
        return Err(format!("s(a_23, a_1) = {ex2:?}"));
    }
    Ok("X14X23 - X13X24 + X12X34 and X23X1 - X13X2 + X12X3".into())
}

fn straightening_laws() -> Outcome {
    let start = Instant::now();
    let mut reports = suites(Suite::Strlaws, &[3, 4, 5])?;
    reports.extend(suites(Suite::Pbwstrlaws, &[3, 4, 5])?);
    let out = summarize(&reports)?;
    let worst = reports
        .iter()
        .map(|r| r.membership_bound_log2.ok_or_else(|| format!("{} n={}: no membership checks", r.suite, r.n)))
        .collect::<Result<Vec<i64>, String>>()?
        .into_iter()
        .max()
        .unwrap_or(i64::MIN);
    let aggregate = worst + 3;
    if aggregate >= -1000 {
        return Err(format!("aggregate failure bound 2^{aggregate} is not below 2^-1000"));
    }
    within(Duration::from_secs(300), start, Ok(format!("{out}; aggregate failure bound < 2^{aggregate}")))
}

fn oracle_equivalence() -> Outcome {
    let mut pairs = 0;
    for n in 3..=4 {
        for pl in [build_m(n).map_err(|e| e.to_string())?, build_n(n).map_err(|e| e.to_string())?] {
            for (a, b) in pl.lattice().incomparable_pairs() {
                let s = straighten_pair(&pl, a, b).map_err(|e| e.to_string())?;
                let rhs = &Poly::term(vec![a, b], coeff(1)) - &s;
                let got = coefficients_mod_p(&rhs).map_err(|e| e.to_string())?;
                let want = standard_expansion_mod_p(&pl, a, b, 11).map_err(|e| e.to_string())?;
                if got != want {
                    return Err(format!("{}({n}) pair ({}, {})", pl.kind(), pl.id(a), pl.id(b)));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs agree"))
}

fn tau_isomorphism() -> Outcome {
    let start = Instant::now();
    let reports = suites(Suite::Tau, &[2, 3, 4, 5, 6, 7])?;
    within(Duration::from_secs(10), start, summarize(&reports))
}

fn ehrhart_transfer() -> Outcome {
    let start = Instant::now();
    let mut reports = suites(Suite::Ehrhart, &[5])?;
    reports.extend(suites(Suite::Minkowski, &[5])?);
    within(Duration::from_secs(120), start, summarize(&reports))
}

fn cone_soundness() -> Outcome {
    let mut reports = Vec::new();
    for s in [Suite::HibiCone, Suite::GenhibiCone, Suite::SsytCone, Suite::PbwCone] {
        reports.extend(suites(s, &[3, 4, 5])?);
    }
    summarize(&reports)
}

fn irredundancy() -> Outcome {
    let mut facets = 0;
    for n in 3..=5 {
        let m = build_m(n).map_err(|e| e.to_string())?;
        let nl = build_n(n).map_err(|e| e.to_string())?;
        let cases = [
            (ConeTarget::Hibi, ConeContext::Lattice(m.lattice())),
            (ConeTarget::Genhibi, ConeContext::Partitioned(nl.lattice(), nl.partition())),
            (ConeTarget::Ssyt, ConeContext::Plucker(&m)),
            (ConeTarget::Pbw, ConeContext::Plucker(&nl)),
        ];
        for (t, ctx) in cases {
            let h = cone_hrep(t, ctx).map_err(|e| e.to_string())?;
            for f in 0..h.len() {
                let w = facet_witness(&h, ctx, f).map_err(|e| e.to_string())?;
                let c = check_witness(&h, f, &w);
                if !c.ok() {
                    return Err(format!("{t}({n}) facet {f}: {c:?}"));
                }
                facets += 1;
            }
        }
    }
    Ok(format!("{facets} facets certified"))
}

fn convex_geometry() -> Outcome {
    let start = Instant::now();
    let reports = suites(Suite::Convex, &[4, 5, 6])?;
    within(Duration::from_secs(30), start, summarize(&reports))
}

fn standard_basis() -> Outcome {
    summarize(&suites(Suite::Asl, &[3, 4])?)
}

fn theta_equal(l: &plueckerfan::order::DistributiveLattice, part: &ChainOrderPartition) -> Result<usize, String> {
    let mut count = 0;
    for (a, b) in l.incomparable_pairs() {
        let g = hibi_generator(l, part, a, b).map_err(|e| e.to_string())?;
        let exps = g
            .terms()
            .map(|(m, _)| theta_of_monomial(l, part, m))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        if exps.len() != 2 || exps[0] != exps[1] {
            return Err(format!("pair ({}, {}): {exps:?}", l.id(a), l.id(b)));
        }
        count += 1;
    }
    Ok(count)
}

fn hibi_kernel() -> Outcome {
    let mut binomials = 0;
    let mut elements = 0;
    for n in 2..=5 {
        let nl = build_n(n).map_err(|e| e.to_string())?;
        let m = build_m(n).map_err(|e| e.to_string())?;
        binomials += theta_equal(nl.lattice(), nl.partition())?;
        binomials += theta_equal(m.lattice(), &ChainOrderPartition::all_order(m.lattice().ji_poset()))?;
        for a in 0..nl.len() {
            let psi = psi_exponent(nl.label(a));
            let theta = theta_in_z(&nl, a).map_err(|e| e.to_string())?;
            if psi != theta {
                return Err(format!("N({n}) element {}: ψ {psi:?} vs θ {theta:?}", nl.id(a)));
            }
            elements += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..30 {
        let size = rng.gen_range(2..=7);
        let p = random_poset(size, 0.3, &mut rng);
        let l = lattice_of_ideals(&p).map_err(|e| e.to_string())?;
        let mask = rng.gen_range(0..1u64 << size);
        let part = ChainOrderPartition::from_mask(l.ji_poset().len(), mask);
        binomials += theta_equal(&l, &part)?;
    }
    Ok(format!("{binomials} binomials in the kernel; ψ = θ on {elements} elements"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("facet counts", facet_counts),
        ("straightening examples", straightening_examples),
        ("straightening laws", straightening_laws),
        ("oracle equivalence", oracle_equivalence),
        ("tau isomorphism", tau_isomorphism),
        ("ehrhart and transfer", ehrhart_transfer),
        ("cone soundness", cone_soundness),
        ("irredundancy witnesses", irredundancy),
        ("convex geometry", convex_geometry),
        ("standard monomial basis", standard_basis),
        ("generalized hibi kernel", hibi_kernel),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
