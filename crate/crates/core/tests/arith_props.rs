//! Property tests for the exact arithmetic layer: invariance of the p-local
//! cokernel under unimodular moves, block-diagonal additivity, and agreement
//! with the independent oracles.

mod support;

use proptest::prelude::*;
use thh_core::arith::{cokernel_p, AbelianGroup, IntMat, Prime};

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-8i64..=8, c), r)
    })
}

#[derive(Debug, Clone)]
enum Move {
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    AddRow(usize, usize, i64),
    AddCol(usize, usize, i64),
}

fn moves() -> impl Strategy<Value = Vec<Move>> {
    proptest::collection::vec(
        prop_oneof![
            (0usize..4, 0usize..4).prop_map(|(a, b)| Move::SwapRows(a, b)),
            (0usize..4, 0usize..4).prop_map(|(a, b)| Move::SwapCols(a, b)),
            (0usize..4, 0usize..4, -3i64..=3).prop_map(|(a, b, k)| Move::AddRow(a, b, k)),
            (0usize..4, 0usize..4, -3i64..=3).prop_map(|(a, b, k)| Move::AddCol(a, b, k)),
        ],
        0..16,
    )
}

fn apply_moves(m: &mut Vec<Vec<i64>>, ms: &[Move]) {
    let rows = m.len();
    let cols = m[0].len();
    for mv in ms {
        match *mv {
            Move::SwapRows(a, b) => {
                let (a, b) = (a % rows, b % rows);
                m.swap(a, b);
            }
            Move::SwapCols(a, b) => {
                let (a, b) = (a % cols, b % cols);
                for row in m.iter_mut() {
                    row.swap(a, b);
                }
            }
            Move::AddRow(dst, src, k) => {
                let (dst, src) = (dst % rows, src % rows);
                if dst != src {
                    for c in 0..cols {
                        m[dst][c] = m[dst][c].saturating_add(k.saturating_mul(m[src][c]));
                    }
                }
            }
            Move::AddCol(dst, src, k) => {
                let (dst, src) = (dst % cols, src % cols);
                if dst != src {
                    for row in m.iter_mut() {
                        row[dst] = row[dst].saturating_add(k.saturating_mul(row[src]));
                    }
                }
            }
        }
    }
}

fn primes() -> Vec<Prime> {
    [2u64, 3, 5]
        .iter()
        .map(|&p| Prime::new(p).unwrap())
        .collect()
}

proptest! {
    #[test]
    fn cokernel_invariant_under_unimodular_moves(m in small_matrix(), ms in moves()) {
        let before = IntMat::from_rows(m.clone());
        let mut transformed = m;
        apply_moves(&mut transformed, &ms);
        let after = IntMat::from_rows(transformed);
        for p in primes() {
            prop_assert_eq!(cokernel_p(&before, p), cokernel_p(&after, p));
        }
    }

    #[test]
    fn cokernel_block_diagonal_merges(a in small_matrix(), b in small_matrix()) {
        let (ra, ca) = (a.len(), a[0].len());
        let (rb, cb) = (b.len(), b[0].len());
        let mut block = vec![vec![0i64; ca + cb]; ra + rb];
        for (i, row) in a.iter().enumerate() {
            block[i][..ca].copy_from_slice(row);
        }
        for (i, row) in b.iter().enumerate() {
            block[ra + i][ca..].copy_from_slice(row);
        }
        let block = IntMat::from_rows(block);
        let (ma, mb) = (IntMat::from_rows(a), IntMat::from_rows(b));
        for p in primes() {
            let merged = cokernel_p(&ma, p).merge(&cokernel_p(&mb, p));
            prop_assert_eq!(cokernel_p(&block, p), merged);
        }
    }

    #[test]
    fn cokernel_agrees_with_determinantal_oracle(m in small_matrix()) {
        let mat = IntMat::from_rows(m.clone());
        for p in primes() {
            let got = cokernel_p(&mat, p);
            let (rank, torsion) = support::oracle_determinantal(&m, p.get());
            prop_assert_eq!(got, AbelianGroup::new(rank, torsion));
        }
    }
}

#[test]
fn enumeration_oracle_on_the_book_example() {
    // Z^2 / <(2,0),(0,12)> on representatives mod 24
    let m = vec![vec![2, 0], vec![0, 12]];
    let (free2, tor2) = support::oracle_enumeration(&m, 2, 1_000_000).unwrap();
    assert_eq!((free2, tor2), (0, vec![1, 2]));
    let (free3, tor3) = support::oracle_enumeration(&m, 3, 1_000_000).unwrap();
    assert_eq!((free3, tor3), (0, vec![1]));
    let mat = IntMat::from_rows(m);
    assert_eq!(
        cokernel_p(&mat, Prime::new(2).unwrap()),
        AbelianGroup::new(0, vec![1, 2])
    );
    assert_eq!(
        cokernel_p(&mat, Prime::new(3).unwrap()),
        AbelianGroup::new(0, vec![1])
    );
}

#[test]
fn oracles_agree_with_each_other() {
    // Where the enumeration oracle is feasible, it must match the
    // determinantal oracle as well as the implementation.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 60 {
        let n = rng.gen_range(1..=3);
        let m: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect())
            .collect();
        for p in [2u64, 3, 5] {
            if let Some((free, tor)) = support::oracle_enumeration(&m, p, 300_000) {
                let (dfree, dtor) = support::oracle_determinantal(&m, p);
                assert_eq!((free, tor.clone()), (dfree, dtor), "matrix {m:?} p {p}");
                let got = cokernel_p(&IntMat::from_rows(m.clone()), Prime::new(p).unwrap());
                assert_eq!(got, AbelianGroup::new(free, tor), "matrix {m:?} p {p}");
                checked += 1;
            }
        }
    }
}
