use edvqe::graph::{brute_force_maxcut, gen_complete, WeightRange};
use edvqe::gw::{gw_solve, GwConfig};
use edvqe::haplotype::{
    build_conflict_graph, gen_synthetic_diploid, phase, read_components, ConflictMode,
    FragmentMatrix, PhaseSolver,
};

#[test]
fn brute_force_phasing_reaches_zero_mec_on_clean_reads() {
    let trials = 40;
    let mut hits = 0;
    let mut misses = Vec::new();
    for seed in 0..trials {
        let (frags, truth) = gen_synthetic_diploid(12, 18, 4, 0.0, seed).unwrap();
        let r = phase(
            &frags,
            ConflictMode::Signed,
            &PhaseSolver::Brute,
            seed,
            Some(&truth),
        )
        .unwrap();
        if r.mec == 0 {
            hits += 1;
        } else {
            misses.push((seed, r.mec));
        }
    }
    assert!(
        hits * 10 >= trials * 9,
        "{hits}/{trials} at MEC 0; misses {misses:?}"
    );
}

#[test]
fn clean_reads_phase_exactly_with_gw() {
    for seed in 0..3 {
        let (frags, truth) = gen_synthetic_diploid(30, 60, 6, 0.0, seed).unwrap();
        let r = phase(
            &frags,
            ConflictMode::Signed,
            &PhaseSolver::Gw(GwConfig::default()),
            seed,
            Some(&truth),
        )
        .unwrap();
        assert_eq!(r.mec, 0);
        assert_eq!(r.completeness, 1.0);
        assert_eq!(r.switch_error, Some(0.0));
        assert_eq!(r.hamming_error, Some(0.0));
    }
}

#[test]
fn disjoint_read_groups_are_separate_components() {
    let frags = FragmentMatrix::from_dense(&[
        vec![1, -1, 0, 0],
        vec![-1, 1, 0, 0],
        vec![0, 0, 1, 1],
        vec![0, 0, -1, -1],
    ])
    .unwrap();
    assert_eq!(read_components(&frags), vec![vec![0, 1], vec![2, 3]]);
    let g = build_conflict_graph(&frags, ConflictMode::Signed);
    assert_eq!(g.n_edges(), 2);
    let r = phase(&frags, ConflictMode::Signed, &PhaseSolver::Brute, 0, None).unwrap();
    assert_eq!(r.n_components, 2);
    assert_eq!(r.mec, 0);
    assert_eq!(r.completeness, 1.0);
}

#[test]
fn gw_best_cut_never_beats_brute_force() {
    for seed in 0..5 {
        let g = gen_complete(11, seed, WeightRange::new(1.0, 10.0)).unwrap();
        let opt = brute_force_maxcut(&g).unwrap().cut;
        let (cut, report) = gw_solve(&g, &GwConfig::default(), seed).unwrap();
        assert!(cut.cut <= opt + 1e-9);
        assert!(report.relaxation_value >= opt - 1e-6 * opt);
    }
}
