mod common;

use skewgame::{linalg, oracle, solver};

#[test]
fn every_multi_optimum_fixture_has_a_singular_even_submatrix() {
    let fixtures = common::multi_optimum_fixtures();
    assert!(fixtures.len() > 20);
    for g in &fixtures {
        assert!(g.n() <= 5);
        assert!(!solver::is_unique(g), "{g:?}");
        let s = oracle::singular_submatrix_witness(g)
            .unwrap()
            .unwrap_or_else(|| panic!("no witness for {g:?}"));
        assert_eq!(s.len() % 2, 0);
        let sub = g.restrict(s).unwrap();
        assert!(
            linalg::pfaffian(&sub.to_rows()).unwrap().is_zero(),
            "{g:?} {s}"
        );
        assert!(oracle::determinant_by_elimination(&sub.to_rows()).is_zero());
    }
}

#[test]
fn random_degenerate_games_have_witnesses() {
    let mut rng = common::rng(21);
    let mut found = 0;
    for i in 0..600 {
        let g = common::small_int_game(2 + i % 4, 1, &mut rng);
        let w = oracle::singular_submatrix_witness(&g).unwrap();
        if solver::is_unique(&g) {
            assert_eq!(w, None);
        } else {
            let s = w.unwrap_or_else(|| panic!("no witness for {g:?}"));
            assert_eq!(s.len() % 2, 0);
            assert!(
                oracle::determinant_by_elimination(&g.restrict(s).unwrap().to_rows()).is_zero()
            );
            found += 1;
        }
    }
    assert!(found > 50);
}
