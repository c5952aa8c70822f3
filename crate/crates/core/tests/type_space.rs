use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use sce_core::type_space::{classify_values, enumerate_types, parse_type, Symbol, EXCLUDED};

/// Ordered Bell numbers by the recurrence F(n) = sum_k C(n, k) F(n - k).
fn fubini(n: usize) -> u64 {
    let mut f = vec![1u64; n + 1];
    for m in 1..=n {
        let mut binom = 1u64;
        let mut total = 0;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u64 / k as u64;
            total += binom * f[m - k];
        }
        f[m] = total;
    }
    f[n]
}

/// Canonical string of a chain like `x0 r0 x1 r1 x2 r2 x3` with r in {'<', '='}.
fn chain_canonical(order: [char; 4], rels: [char; 3]) -> String {
    let mut blocks: Vec<Vec<char>> = vec![vec![order[0]]];
    for (sym, rel) in order[1..].iter().zip(rels) {
        if rel == '=' {
            blocks.last_mut().unwrap().push(*sym);
        } else {
            blocks.push(vec![*sym]);
        }
    }
    blocks
        .into_iter()
        .map(|mut b| {
            b.sort();
            b.into_iter().map(String::from).collect::<Vec<_>>().join("=")
        })
        .collect::<Vec<_>>()
        .join("<")
}

fn permutations(items: &[char]) -> Vec<Vec<char>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

#[test]
fn count_is_the_fourth_ordered_bell_number() {
    assert_eq!(fubini(4), 75);
    assert_eq!(enumerate_types().len() as u64, fubini(4));
}

#[test]
fn brute_force_weak_orderings_match() {
    // Every map {a,b,c,d} -> {0..3}, compressed to dense ranks.
    let mut seen = BTreeSet::new();
    for code in 0..256u32 {
        let vals: Vec<u64> = (0..4).map(|i| ((code >> (2 * i)) & 3) as u64).collect();
        seen.insert(classify_values([vals[0], vals[1], vals[2], vals[3]]).canonical().to_string());
    }
    let listed: BTreeSet<String> = enumerate_types().iter().map(|t| t.canonical().to_string()).collect();
    assert_eq!(seen, listed);
}

#[test]
fn anchored_expansions_collapse_to_75_with_category_sizes() {
    // Four anchors, each followed by an ordering of the other three symbols
    // joined by < or =: 4 * 6 * 8 = 192 structures before deduplication.
    let mut first_anchor: BTreeMap<String, usize> = BTreeMap::new();
    let mut expanded = 0;
    for (anchor_pos, anchor) in ['d', 'c', 'b', 'a'].into_iter().enumerate() {
        let rest: Vec<char> = ['a', 'b', 'c', 'd'].into_iter().filter(|&s| s != anchor).collect();
        for perm in permutations(&rest) {
            for mask in 0..8 {
                let rels = [0, 1, 2].map(|i| if mask >> i & 1 == 1 { '=' } else { '<' });
                let order = [anchor, perm[0], perm[1], perm[2]];
                let s = chain_canonical(order, rels);
                first_anchor.entry(s).or_insert(anchor_pos + 1);
                expanded += 1;
            }
        }
    }
    assert_eq!(expanded, 192);
    assert_eq!(first_anchor.len(), 75);
    let mut sizes = [0; 4];
    for &cat in first_anchor.values() {
        sizes[cat - 1] += 1;
    }
    assert_eq!(sizes, [26, 20, 16, 13]);
    for t in enumerate_types() {
        assert_eq!(first_anchor[t.canonical()], t.category as usize, "{t}");
    }
}

#[test]
fn category_recomputed_from_minimal_block() {
    for t in enumerate_types() {
        let min_block = &t.blocks()[0];
        let cat = if min_block.contains(&Symbol::D) {
            1
        } else if min_block.contains(&Symbol::C) {
            2
        } else if min_block.contains(&Symbol::B) {
            3
        } else {
            4
        };
        assert_eq!(t.category, cat, "{t}");
    }
}

#[test]
fn exactly_the_three_excluded() {
    let excluded: Vec<&str> = enumerate_types()
        .iter()
        .filter(|t| t.excluded)
        .map(|t| t.canonical())
        .collect();
    let mut want = EXCLUDED.to_vec();
    want.sort();
    assert_eq!(excluded, want);
    for s in EXCLUDED {
        assert_eq!(parse_type(s).unwrap().category, 1);
    }
}

#[test]
fn synthetic_quadruples_round_trip() {
    for t in enumerate_types() {
        let v = t.ranks().map(u64::from);
        assert_eq!(classify_values(v), t);
        assert_eq!(parse_type(t.canonical()), Some(t));
    }
}

#[test]
fn blocks_partition_the_symbols() {
    let mut shapes = BTreeSet::new();
    for t in enumerate_types() {
        let blocks = t.blocks();
        let mut all: Vec<Symbol> = blocks.iter().flatten().copied().collect();
        all.sort();
        assert_eq!(all, Symbol::ALL.to_vec());
        assert!(blocks.iter().all(|b| !b.is_empty()));
        assert!(shapes.insert(blocks));
    }
}

proptest! {
    #[test]
    fn classification_ignores_positive_scaling(
        v in prop::array::uniform4(0u64..6),
        k in 1u64..1000,
    ) {
        prop_assert_eq!(classify_values(v), classify_values(v.map(|x| x * k)));
    }

    #[test]
    fn classification_matches_pairwise_order(v in prop::array::uniform4(0u64..5)) {
        let t = classify_values(v);
        for i in 0..4 {
            for j in 0..4 {
                let (si, sj) = (Symbol::ALL[i], Symbol::ALL[j]);
                prop_assert_eq!(v[i].cmp(&v[j]), t.rank_of(si).cmp(&t.rank_of(sj)));
            }
        }
    }
}
