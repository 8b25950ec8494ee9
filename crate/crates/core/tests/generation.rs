mod common;

use std::collections::{BTreeMap, BTreeSet};

use rank3::generation::{
    atom_balance_bound, deficiency_parity_prune, enumerate_multiplicity_vectors, generate_all, generate_for_n,
    generate_raw, iterator_from_state, GenOptions, GenTree, GenerationState, PruneOptions,
};
use rank3::permgroup::canonical_form;
use rank3::{Block, MultiplicityVector, TwoPartition};
use treeiter::{RecursiveIterator, Step};

fn mv(n: usize, dense: &[usize]) -> MultiplicityVector {
    MultiplicityVector::from_dense(n, dense).unwrap()
}

fn blocks(lists: &[&[usize]]) -> Vec<Block> {
    lists.iter().map(|l| Block::from_atoms(l.iter().copied())).collect()
}

/// Multiplicity vectors by exhaustive search over bounded dense vectors.
fn mv_oracle(n: usize, int_split: bool) -> BTreeSet<Vec<usize>> {
    let total = n * (n - 1) / 2;
    let mut out = BTreeSet::new();
    let mut dense = vec![0usize; n - 2];
    loop {
        let pairs: usize = dense.iter().enumerate().map(|(i, &c)| c * (i + 2) * (i + 1) / 2).sum();
        let count: usize = dense.iter().sum();
        if pairs == total && count >= n {
            let b2: i64 = dense.iter().enumerate().map(|(i, &c)| (c * (i + 1)) as i64).sum();
            let n = n as i64;
            let disc = (n - 1) * (n - 1) - 4 * (b2 - n + 1);
            let square = disc >= 0 && (0..=disc).any(|r| r * r == disc);
            if !int_split || square {
                let mut d = dense.clone();
                while d.len() > 1 && d.last() == Some(&0) {
                    d.pop();
                }
                out.insert(d);
            }
        }
        let mut i = 0;
        loop {
            if i == dense.len() {
                return out;
            }
            let per = (i + 2) * (i + 1) / 2;
            if (dense[i] + 1) * per <= total {
                dense[i] += 1;
                break;
            }
            dense[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn six_atoms_have_three_integrally_splitting_vectors() {
    let got: BTreeSet<Vec<usize>> = enumerate_multiplicity_vectors(6, true).iter().map(|m| m.to_dense()).collect();
    let want: BTreeSet<Vec<usize>> = [vec![3, 4], vec![6, 1, 1], vec![5, 0, 0, 1]].into_iter().collect();
    assert_eq!(got, want);
}

#[test]
fn multiplicity_vectors_match_exhaustive_search() {
    for n in 3..=9 {
        for int_split in [false, true] {
            let got: Vec<Vec<usize>> = enumerate_multiplicity_vectors(n, int_split).iter().map(|m| m.to_dense()).collect();
            let set: BTreeSet<Vec<usize>> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "n={n} repeats a vector");
            assert_eq!(set, mv_oracle(n, int_split), "n={n} int_split={int_split}");
        }
    }
}

#[test]
fn multiplicity_vectors_are_ordered_by_largest_sizes_first() {
    let all = enumerate_multiplicity_vectors(8, false);
    let keys: Vec<Vec<usize>> = all
        .iter()
        .map(|m| (2..8).rev().map(|k| m.get(k)).collect())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn integrally_splitting_vector_counts_at_13_and_14() {
    assert_eq!(enumerate_multiplicity_vectors(13, true).len(), 404);
    assert_eq!(enumerate_multiplicity_vectors(14, true).len(), 695);
}

#[test]
fn braid_and_fano_vectors_have_one_matroid() {
    let braid = generate_all(&mv(6, &[3, 4]), &GenOptions::sequential());
    assert_eq!(braid, vec![canonical_form(&common::braid())]);
    let fano = generate_all(&mv(7, &[0, 7]), &GenOptions::sequential());
    assert_eq!(fano, vec![canonical_form(&common::fano())]);
}

#[test]
fn matroid_counts_for_small_atom_numbers() {
    let all: Vec<usize> = (3..=9).map(|n| generate_for_n(n, false, &GenOptions::sequential()).len()).collect();
    assert_eq!(all, [1, 2, 4, 9, 23, 68, 383]);
    let split: Vec<usize> = (3..=10).map(|n| generate_for_n(n, true, &GenOptions::sequential()).len()).collect();
    assert_eq!(split, [1, 1, 2, 3, 7, 7, 17, 35]);
}

fn by_mv(list: impl IntoIterator<Item = TwoPartition>) -> BTreeMap<MultiplicityVector, BTreeSet<TwoPartition>> {
    let mut out: BTreeMap<MultiplicityVector, BTreeSet<TwoPartition>> = BTreeMap::new();
    for m in list {
        out.entry(m.multiplicity_vector()).or_default().insert(m);
    }
    out
}

#[test]
fn generation_equals_brute_force_up_to_eight_atoms() {
    for n in 3..=8 {
        let classes: Vec<TwoPartition> = common::brute_force_classes(n)
            .into_iter()
            .map(|b| TwoPartition::from_blocks(n, b).unwrap())
            .collect();
        let oracle = by_mv(classes);
        let mvs = enumerate_multiplicity_vectors(n, false);
        let nonempty: BTreeSet<&MultiplicityVector> = oracle.keys().collect();
        assert!(nonempty.iter().all(|m| mvs.contains(m)), "n={n}: oracle found an unlisted vector");
        for m in &mvs {
            let want = oracle.get(m).cloned().unwrap_or_default();
            for prune in [PruneOptions::default(), PruneOptions::none()] {
                let got = generate_all(m, &GenOptions::sequential().with_prune(prune));
                let set: BTreeSet<TwoPartition> = got.iter().cloned().collect();
                assert_eq!(set.len(), got.len(), "n={n} mv={m}: duplicate output");
                assert_eq!(set, want, "n={n} mv={m} prune={prune:?}");
            }
        }
    }
}

#[test]
fn each_prune_alone_is_sound_at_eight_atoms() {
    for m in enumerate_multiplicity_vectors(8, false) {
        let reference = generate_all(&m, &GenOptions::sequential().with_prune(PruneOptions::none()));
        for i in 0..4 {
            let mut p = PruneOptions::none();
            match i {
                0 => p.parity = true,
                1 => p.atom_balance = true,
                2 => p.capacity = true,
                _ => p.twins = true,
            }
            let got = generate_all(&m, &GenOptions::sequential().with_prune(p));
            assert_eq!(got, reference, "mv={m} prune={p:?}");
        }
    }
}

fn leaves_and_paths(it: rank3::generation::GenerationIter, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, TwoPartition)>) {
    let mut it = it;
    loop {
        match it.next_step() {
            Step::Child(c) => {
                let parent = it.state();
                let child = c.state();
                assert!(child.level < parent.level);
                assert_eq!(child.blocks.len(), parent.blocks.len() + parent.mv.get(parent.level));
                let added: Vec<Block> = child
                    .blocks
                    .iter()
                    .filter(|b| !parent.blocks.contains(b))
                    .copied()
                    .collect();
                assert!(added.iter().all(|b| b.len() == parent.level));
                path.push(parent.level);
                leaves_and_paths(c, path, out);
                path.pop();
            }
            Step::Leaf(l) => {
                let mut p = path.clone();
                p.push(it.state().level);
                out.push((p, l));
            }
            Step::Done => {
                assert!(matches!(it.next_step(), Step::Done), "exhausted iterators stay exhausted");
                return;
            }
        }
    }
}

#[test]
fn levels_decrease_along_every_path_and_leaves_are_valid() {
    for n in 4..=8 {
        for m in enumerate_multiplicity_vectors(n, false) {
            let mut out = Vec::new();
            let root = iterator_from_state(GenerationState::initial(&m), PruneOptions::default());
            leaves_and_paths(root, &mut Vec::new(), &mut out);
            let mut sizes: Vec<usize> = m.entries().map(|(k, _)| k).collect();
            sizes.reverse();
            for (path, leaf) in out {
                assert_eq!(path, sizes, "mv={m}");
                let again = TwoPartition::from_blocks(n, leaf.blocks().to_vec()).unwrap();
                assert_eq!(again.multiplicity_vector(), m);
            }
        }
    }
}

#[test]
fn pair_level_is_the_forced_completion() {
    let m = mv(6, &[3, 4]);
    let triples = blocks(&[&[1, 2, 3], &[1, 4, 5], &[2, 4, 6], &[3, 5, 6]]);
    let st = GenerationState::from_blocks(&m, 2, triples).unwrap();
    let mut it = iterator_from_state(st, PruneOptions::default());
    let Step::Leaf(leaf) = it.next_step() else {
        panic!("expected the completed braid")
    };
    let pairs: Vec<Block> = leaf.blocks().iter().filter(|b| b.len() == 2).copied().collect();
    assert_eq!(pairs, blocks(&[&[1, 6], &[2, 5], &[3, 4]]));
    assert!(matches!(it.next_step(), Step::Done));
}

#[test]
fn parity_prune_on_fourteen_atoms() {
    let m = mv(14, &[0, 21, 3, 1]);
    let placed = blocks(&[&[1, 2, 3, 4, 5], &[1, 6, 7, 8], &[2, 9, 10, 11], &[3, 12, 13, 14]]);
    let st = GenerationState::from_blocks(&m, 3, placed).unwrap();
    assert_eq!(st.deficiency(4), 9);
    assert!(deficiency_parity_prune(&st));

    let m = mv(14, &[1, 23, 1, 0, 1]);
    let placed = blocks(&[&[1, 2, 3, 4, 5, 6], &[7, 8, 9, 10]]);
    let st = GenerationState::from_blocks(&m, 3, placed).unwrap();
    let odd: Vec<usize> = (1..=14).filter(|&e| st.deficiency(e) % 2 == 1).collect();
    assert_eq!(odd, [11, 12, 13, 14]);
    assert!(deficiency_parity_prune(&st));
}

#[test]
fn exactly_two_refinement_needs_an_odd_atom() {
    // With only one or two pairs among even sizes, some atom ends with an odd
    // deficiency, so an all-even state cannot complete.
    let m = mv(7, &[0, 7]);
    let st = GenerationState::initial(&m);
    assert!((1..=7).all(|e| st.deficiency(e) % 2 == 0));
    assert!(!deficiency_parity_prune(&st));
    let m = mv(9, &[2, 8, 0, 1]);
    let st = GenerationState::initial(&m);
    assert!((1..=9).all(|e| st.deficiency(e) % 2 == 0));
    assert!(deficiency_parity_prune(&st));
    assert!(generate_all(&m, &GenOptions::sequential().with_prune(PruneOptions::none())).is_empty());
}

#[test]
fn complete_partitions_are_never_parity_pruned() {
    for n in 3..=8 {
        for m in generate_for_n(n, false, &GenOptions::sequential()) {
            let st = GenerationState::from_blocks(&m.multiplicity_vector(), 1, m.blocks().to_vec()).unwrap();
            assert!(!deficiency_parity_prune(&st), "{m:?}");
        }
    }
}

#[test]
fn atom_balance_bound_values() {
    assert_eq!(atom_balance_bound(14), 6);
    assert_eq!(atom_balance_bound(7), 3);
    for n in 3..=8 {
        for m in generate_for_n(n, false, &GenOptions::sequential()) {
            for a in 1..=n {
                let deep = m.blocks().iter().filter(|b| b.len() >= 3 && b.contains(a)).count();
                assert!(deep <= atom_balance_bound(n) as usize);
            }
        }
    }
}

#[test]
fn parallel_evaluation_matches_sequential() {
    let seq = generate_for_n(9, false, &GenOptions::sequential());
    for opts in [
        GenOptions::parallel(1),
        GenOptions::parallel(4),
        GenOptions {
            fifo_capacity: Some(3),
            drain_leaf_runs: true,
            ..GenOptions::parallel(3)
        },
    ] {
        assert_eq!(generate_for_n(9, false, &opts), seq, "{opts:?}");
    }
}

#[test]
fn sequential_emission_order_is_deterministic() {
    let mvs = enumerate_multiplicity_vectors(8, false);
    let a = generate_raw(GenTree::for_mvs(&mvs, PruneOptions::default()), &GenOptions::sequential());
    let b = generate_raw(GenTree::for_mvs(&mvs, PruneOptions::default()), &GenOptions::sequential());
    assert_eq!(a, b);
    assert_eq!(a.len(), 68);
}
