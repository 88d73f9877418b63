use csg_core::analysis::sparsity_bounds;
use csg_core::game::{cs_value, generate_game, load_game, save_game};
use csg_core::solvers::{solve_enum, solve_qubo_exhaustive, SetPartitions};
use csg_core::transform::{
    bits_from_mask, build_bilp, build_qubo, decode_solution, default_lambda, interaction_count,
    qubo_energy, qubo_to_ising, read_ising_json, read_qubo_json, read_qubo_text, write_ising_json,
    write_qubo_json, write_qubo_text,
};
use csg_core::{Coalition, CoalitionGame, CoalitionStructure, DistributionKind, DistributionSpec};
use num_bigint::BigUint;

fn game(n: usize, kind: DistributionKind, seed: u64) -> CoalitionGame {
    generate_game(n, &DistributionSpec::new(kind), seed).unwrap()
}

#[test]
fn infeasible_states_cost_more_than_the_optimum() {
    for kind in DistributionKind::ALL {
        for n in 2..=4 {
            let bilp = build_bilp(&game(n, kind, 1), &[]).unwrap();
            let qubo = build_qubo(&bilp, None).unwrap();
            let m = qubo.len();
            let mut best_feasible = f64::INFINITY;
            let mut best_infeasible = f64::INFINITY;
            for mask in 0..1u64 << m {
                let x = bits_from_mask(mask, m);
                let e = qubo_energy(&qubo, &x).unwrap();
                if decode_solution(&x, &bilp).feasible {
                    best_feasible = best_feasible.min(e);
                } else {
                    best_infeasible = best_infeasible.min(e);
                }
            }
            assert!(best_infeasible > best_feasible, "{kind} n={n}");
        }
    }
}

#[test]
fn larger_penalties_keep_the_argmin() {
    for kind in DistributionKind::ALL {
        for n in 2..=4 {
            let bilp = build_bilp(&game(n, kind, 2), &[]).unwrap();
            let lambda = default_lambda(&bilp);
            let structures: Vec<Option<CoalitionStructure>> = [1.0, 2.0, 10.0]
                .iter()
                .map(|k| {
                    let qubo = build_qubo(&bilp, Some(k * lambda)).unwrap();
                    solve_qubo_exhaustive(&qubo, &bilp).unwrap().best_cs
                })
                .collect();
            assert!(structures[0].is_some());
            assert!(
                structures.iter().all(|cs| *cs == structures[0]),
                "{kind} n={n}"
            );
        }
    }
}

#[test]
fn interaction_count_matches_closed_form() {
    for n in 2..=9 {
        let g = game(n, DistributionKind::Laplace, n as u64);
        let qubo = build_qubo(&build_bilp(&g, &[]).unwrap(), None).unwrap();
        let bounds = sparsity_bounds(n as u32).unwrap();
        assert_eq!(
            BigUint::from(interaction_count(&qubo)),
            bounds.actual,
            "n={n}"
        );
    }
}

#[test]
fn exclusion_matches_restricted_enumeration() {
    let g = game(4, DistributionKind::Mu, 3);
    let excluded = [Coalition::grand(4), Coalition(0b0011), Coalition(0b0101)];
    let bilp = build_bilp(&g, &excluded).unwrap();
    assert_eq!(bilp.len(), 15 - 3);
    let qubo = build_qubo(&bilp, None).unwrap();
    let report = solve_qubo_exhaustive(&qubo, &bilp).unwrap();

    let mut best = f64::NEG_INFINITY;
    for rgs in SetPartitions::new(4) {
        let mut masks = [0u32; 4];
        for (agent, &b) in rgs.iter().enumerate() {
            masks[b] |= 1 << agent;
        }
        let blocks: Vec<Coalition> = masks
            .iter()
            .filter(|&&m| m != 0)
            .map(|&m| Coalition(m))
            .collect();
        if blocks.iter().any(|b| excluded.contains(b)) {
            continue;
        }
        let cs = CoalitionStructure::new(4, blocks).unwrap();
        best = best.max(cs_value(&g, &cs).unwrap());
    }
    assert!(report.feasible);
    assert!((report.best_value - best).abs() < 1e-9 * best.abs().max(1.0));
    assert!(report.best_value <= solve_enum(&g).unwrap().best_value + 1e-9);
}

#[test]
fn exports_round_trip_energies() {
    let bilp = build_bilp(&game(3, DistributionKind::Weibull, 4), &[]).unwrap();
    let qubo = build_qubo(&bilp, None).unwrap();

    let mut text = Vec::new();
    write_qubo_text(&qubo, &mut text).unwrap();
    let from_text = read_qubo_text(text.as_slice()).unwrap();
    let mut json = Vec::new();
    write_qubo_json(&qubo, &mut json).unwrap();
    let from_json = read_qubo_json(json.as_slice()).unwrap();
    assert_eq!(from_json, qubo);
    assert_eq!(from_text.constant(), qubo.constant());
    for mask in 0..1u64 << qubo.len() {
        let x = bits_from_mask(mask, qubo.len());
        assert_eq!(
            qubo_energy(&from_text, &x).unwrap(),
            qubo_energy(&qubo, &x).unwrap()
        );
    }

    let ising = qubo_to_ising(&qubo);
    let mut buf = Vec::new();
    write_ising_json(&ising, &mut buf).unwrap();
    assert_eq!(read_ising_json(buf.as_slice()).unwrap(), ising);
}

#[test]
fn saved_games_reload_identically() {
    let dir = tempfile::tempdir().unwrap();
    for kind in DistributionKind::ALL {
        let g = game(3, kind, 9);
        let path = dir.path().join(format!("{kind}.json"));
        save_game(&g, &path).unwrap();
        assert_eq!(load_game(&path).unwrap(), g);
    }
}
