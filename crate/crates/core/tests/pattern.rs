use mipf::spectra::{fit_phase_pattern, PhasePattern};

#[test]
fn refit_matches_embedded_pattern() {
    let embedded = PhasePattern::embedded();
    let refit = fit_phase_pattern(&embedded.fitted_ranks).unwrap();
    assert_eq!(&refit, embedded);
}
