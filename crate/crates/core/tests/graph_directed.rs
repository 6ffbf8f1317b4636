use basilica_core::forms::balanced;
use basilica_core::geometry::left_piece_fraction;
use basilica_core::graphdir::{self, Label, Mass};
use basilica_core::spectra::{
    eigenvalue_ratios, graph_directed_weyl, graphdirected_spectrum, symbolic_ds,
};
use num_rational::Ratio;

#[test]
fn symbolic_dimension_is_four_thirds() {
    assert_eq!(symbolic_ds(), (Ratio::new(2, 3), Ratio::new(4, 3)));
}

#[test]
fn weyl_slope_on_level_eleven() {
    let report = graph_directed_weyl(11).unwrap();
    assert!((report.fit.slope - 2.0 / 3.0).abs() < 0.05, "{report:?}");
    assert!(report.fit.samples >= 30);
}

#[test]
fn low_eigenvalues_settle_instead_of_scaling() {
    for n in 8..=10 {
        for r in eigenvalue_ratios(n, &[2, 3, 4, 5, 6]).unwrap() {
            assert!((r - 1.0).abs() < 0.05, "n = {n}: {r}");
        }
    }
}

#[test]
fn zero_mode_is_constant() {
    let eigs = graphdirected_spectrum(5).unwrap();
    assert!(eigs[0].abs() < 1e-10);
    assert_eq!(eigs.iter().filter(|x| x.abs() < 1e-8).count(), 1);
}

#[test]
fn first_generation_masses_match_the_balanced_measure() {
    let g = graphdir::generate(1).unwrap();
    let top = |s: &str| balanced(&s.parse().unwrap()).unwrap();
    let arcs: Vec<Mass> = g
        .edges
        .iter()
        .filter(|e| e.label == Label::A)
        .map(|e| e.mass)
        .collect();
    assert_eq!(arcs, vec![top("1"), top("2")]);
    let loops: Vec<(usize, Mass)> = g
        .edges
        .iter()
        .filter(|e| e.label == Label::B)
        .map(|e| (e.u, e.mass))
        .collect();
    assert_eq!(loops, vec![(0, top("3")), (1, top("4"))]);
}

#[test]
fn left_loop_mass_matches_point_counting() {
    let g = graphdir::seed_graph();
    let m = g.edges[0].mass;
    let estimate = left_piece_fraction(14).unwrap();
    let exact = *m.numer() as f64 / *m.denom() as f64;
    assert!((estimate - exact).abs() < 0.02 * exact);
}
