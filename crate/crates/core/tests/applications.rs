use cardzkp::apps::bridges::{solve_bridges, verify_bridges, BridgesInstance, BridgesSolution};
use cardzkp::SeededSource;

const PUZZLE_7X7: &str = ".1.....\n2..2..1\n.......\n.5.6.1.\n....2.3\n.2.....\n3..4..2\n";

// 0-indexed (row, col) pairs with multiplicities.
const PUZZLE_7X7_BRIDGES: [((usize, usize), (usize, usize), u8); 12] = [
    ((6, 0), (6, 3), 1),
    ((6, 3), (6, 6), 1),
    ((4, 4), (4, 6), 2),
    ((3, 1), (3, 3), 2),
    ((3, 3), (3, 5), 1),
    ((1, 3), (1, 6), 1),
    ((1, 0), (6, 0), 2),
    ((3, 1), (5, 1), 2),
    ((0, 1), (3, 1), 1),
    ((3, 3), (6, 3), 2),
    ((1, 3), (3, 3), 1),
    ((4, 6), (6, 6), 1),
];

fn puzzle_7x7() -> (BridgesInstance, BridgesSolution) {
    (BridgesInstance::parse(PUZZLE_7X7).unwrap(), BridgesSolution::new(PUZZLE_7X7_BRIDGES).unwrap())
}

#[test]
fn solver_finds_known_7x7_solution() {
    let (inst, known) = puzzle_7x7();
    assert!(known.is_valid(&inst));
    assert_eq!(solve_bridges(&inst).unwrap(), Some(known));
}

#[test]
fn known_7x7_solution_accepted() {
    let (inst, known) = puzzle_7x7();
    let out = verify_bridges(&inst, &known, &mut SeededSource::new(4)).unwrap();
    assert!(out.verdict.is_accept(), "{:?}", out.verdict);
}
