use std::cmp::Ordering;

use plueckerfan::bitset::BitSet;
use plueckerfan::order::{down_closure, is_order_ideal, lattice_of_ideals};
use plueckerfan::poly::coeff;
use plueckerfan::polytope::{dilation_points_ints, interpolating_hrep, zeta_generic, zeta_prime_generic, ChainOrderPartition};
use plueckerfan::straighten::{apply_index_permutation, canonicalize, exchange_relation, grevlex_cmp, plucker_term};
use plueckerfan::suites::random_poset;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn inversions(v: &[u8]) -> usize {
    (0..v.len()).flat_map(|i| (i + 1..v.len()).map(move |j| (i, j))).filter(|&(i, j)| v[i] > v[j]).count()
}

fn inverse(perm: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize - 1] = i as u8 + 1;
    }
    inv
}

proptest! {
    #[test]
    fn bitset_word_round_trip(word in any::<u64>(), other in any::<u64>()) {
        let a = BitSet::from_u64(64, word);
        let b = BitSet::from_u64(64, other);
        prop_assert_eq!(a.to_u64(), word);
        prop_assert_eq!(a.count(), word.count_ones() as usize);
        prop_assert_eq!(a.union(&b).to_u64(), word | other);
        prop_assert_eq!(a.intersection(&b).to_u64(), word & other);
        prop_assert_eq!(a.difference(&b).to_u64(), word & !other);
        prop_assert_eq!(a.intersection_count(&b), (word & other).count_ones() as usize);
        prop_assert_eq!(a.is_subset(&b), word & !other == 0);
    }

    #[test]
    fn ideals_closed_under_union_and_intersection(seed in any::<u64>(), size in 1usize..9, m1 in any::<u64>(), m2 in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = lattice_of_ideals(&random_poset(size, 0.35, &mut rng)).unwrap();
        let p = l.ji_poset();
        let mask = (1u64 << size) - 1;
        let i = down_closure(p, &BitSet::from_u64(size, m1 & mask));
        let j = down_closure(p, &BitSet::from_u64(size, m2 & mask));
        prop_assert!(is_order_ideal(p, i.bits()));
        prop_assert!(is_order_ideal(p, i.union(&j).bits()));
        prop_assert!(is_order_ideal(p, i.intersection(&j).bits()));
        let (a, b) = (l.element_of_ideal(&i).unwrap(), l.element_of_ideal(&j).unwrap());
        prop_assert_eq!(l.ideal_of(l.join(a, b)), &i.union(&j));
        prop_assert_eq!(l.ideal_of(l.meet(a, b)), &i.intersection(&j));
        prop_assert_eq!(l.grade(a) as usize, i.len());
    }

    #[test]
    fn zeta_round_trip(seed in any::<u64>(), size in 1usize..7, mask in any::<u64>(), t in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poset(size, 0.4, &mut rng);
        let part = ChainOrderPartition::from_mask(size, mask);
        let hrep = interpolating_hrep(&p, &part).unwrap();
        for x in dilation_points_ints(&p, &ChainOrderPartition::all_order(&p), t).unwrap() {
            let y = zeta_generic(&p, &part, &x);
            prop_assert!(hrep.contains_scaled_ints(&y, t as i64));
            prop_assert_eq!(zeta_prime_generic(&p, &part, &y), x);
        }
    }

    #[test]
    fn canonicalize_tracks_sign(perm in Just((1u8..=7).collect::<Vec<_>>()).prop_shuffle(), len in 1usize..7) {
        let idx = &perm[..len];
        let (sign, col) = canonicalize(idx, 8).unwrap().unwrap();
        let mut sorted = idx.to_vec();
        sorted.sort();
        prop_assert_eq!(col, sorted);
        prop_assert_eq!(sign, if inversions(idx) % 2 == 0 { 1 } else { -1 });
        let mut rep = idx.to_vec();
        rep.push(idx[0]);
        if rep.len() < 8 {
            prop_assert!(canonicalize(&rep, 8).unwrap().is_none());
        }
    }

    #[test]
    fn grevlex_is_a_total_order(x in prop::collection::vec(0usize..6, 3), y in prop::collection::vec(0usize..6, 3), z in prop::collection::vec(0usize..6, 3)) {
        prop_assert_eq!(grevlex_cmp(&x, &y), grevlex_cmp(&y, &x).reverse());
        let mut xs = x.clone();
        xs.reverse();
        prop_assert_eq!(grevlex_cmp(&x, &xs), Ordering::Equal);
        if grevlex_cmp(&x, &y) != Ordering::Greater && grevlex_cmp(&y, &z) != Ordering::Greater {
            prop_assert_ne!(grevlex_cmp(&x, &z), Ordering::Greater);
        }
    }

    #[test]
    fn index_permutation_is_invertible(perm in Just((1u8..=6).collect::<Vec<_>>()).prop_shuffle(), r in 1usize..3) {
        let rel = exchange_relation(&[1, 3, 5], &[2, 4, 6], r, 7).unwrap();
        let mut full = perm.clone();
        full.push(7);
        let moved = apply_index_permutation(&rel, &full, 7).unwrap();
        prop_assert_eq!(apply_index_permutation(&moved, &inverse(&full), 7).unwrap(), rel);
        let term = plucker_term(coeff(1), &[&[1, 2]], 7).unwrap();
        let swapped = apply_index_permutation(&term, &[2, 1, 3, 4, 5, 6, 7], 7).unwrap();
        prop_assert_eq!(swapped, plucker_term(coeff(-1), &[&[1, 2]], 7).unwrap());
    }
}
