mod common;

use ntged::assignment::{solve_lap, CostMatrix};
use ntged::cost::{cost, Cost};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, max: i64) -> (CostMatrix, Vec<Vec<Cost>>) {
    let rows: Vec<Vec<Cost>> = (0..n)
        .map(|_| (0..n).map(|_| cost(rng.gen_range(0..=max))).collect())
        .collect();
    (CostMatrix::from_rows(rows.clone()).unwrap(), rows)
}

#[test]
fn optimal_against_permutation_bruteforce() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    for round in 0..400 {
        let n = rng.gen_range(1..=7);
        let (matrix, rows) = random_matrix(&mut rng, n, 20);
        let solved = solve_lap(&matrix).unwrap();
        assert_eq!(solved.total, common::lap_bruteforce(&rows), "round {round}");
        // The permutation really is a bijection achieving the cost.
        let mut seen = vec![false; n];
        let mut recomputed = cost(0);
        for (i, &j) in solved.row_to_col.iter().enumerate() {
            assert!(!seen[j]);
            seen[j] = true;
            recomputed += *matrix.get(i, j);
        }
        assert_eq!(recomputed, solved.total);
    }
}

#[test]
fn six_by_six_random_integer_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(402);
    for _ in 0..1000 {
        let (matrix, rows) = random_matrix(&mut rng, 6, 50);
        let solved = solve_lap(&matrix).unwrap();
        assert_eq!(solved.total, common::lap_bruteforce(&rows));
    }
}

#[test]
fn cost_is_invariant_under_row_and_column_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(403);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let (matrix, rows) = random_matrix(&mut rng, n, 30);
        let base = solve_lap(&matrix).unwrap();

        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        use rand::seq::SliceRandom;
        row_perm.shuffle(&mut rng);
        col_perm.shuffle(&mut rng);
        let permuted: Vec<Vec<Cost>> = (0..n)
            .map(|i| (0..n).map(|j| rows[row_perm[i]][col_perm[j]]).collect())
            .collect();
        let shuffled = solve_lap(&CostMatrix::from_rows(permuted).unwrap()).unwrap();
        assert_eq!(shuffled.total, base.total);
        // The permutation conjugates: row_perm[i] -> col_perm[pi'(i)]
        // must be optimal in the original matrix.
        let conjugated_cost: Cost = (0..n)
            .map(|i| rows[row_perm[i]][col_perm[shuffled.row_to_col[i]]])
            .sum();
        assert_eq!(conjugated_cost, base.total);
    }
}

#[test]
fn row_constant_shifts_cost_and_keeps_optimal_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let (_, rows) = random_matrix(&mut rng, n, 12);
        let row = rng.gen_range(0..n);
        let delta = cost(rng.gen_range(1..=9));
        let mut shifted = rows.clone();
        for entry in &mut shifted[row] {
            *entry += delta;
        }

        // Optimal permutation sets by exhaustive enumeration.
        let optimal_set = |table: &Vec<Vec<Cost>>| {
            let best = common::lap_bruteforce(table);
            let mut perms = Vec::new();
            let mut ids: Vec<usize> = (0..n).collect();
            common::permute(&mut ids, 0, &mut |p: &[usize]| {
                let total: Cost = (0..n).map(|i| table[i][p[i]]).sum();
                if total == best {
                    perms.push(p.to_vec());
                }
            });
            perms.sort();
            (best, perms)
        };
        let (base_cost, base_set) = optimal_set(&rows);
        let (shift_cost, shift_set) = optimal_set(&shifted);
        assert_eq!(shift_cost, base_cost + delta);
        assert_eq!(base_set, shift_set);

        let solved = solve_lap(&CostMatrix::from_rows(shifted).unwrap()).unwrap();
        assert_eq!(solved.total, shift_cost);
    }
}

#[test]
fn rational_entries_are_handled_exactly() {
    use num_rational::Ratio;
    let rows: Vec<Vec<Cost>> = vec![
        vec![Ratio::new(1, 2), Ratio::new(1, 3)],
        vec![Ratio::new(1, 5), Ratio::new(1, 7)],
    ];
    let solved = solve_lap(&CostMatrix::from_rows(rows.clone()).unwrap()).unwrap();
    assert_eq!(solved.total, common::lap_bruteforce(&rows));
    assert_eq!(solved.total, Ratio::new(1, 3) + Ratio::new(1, 5));
}
