//! Seeded generators for randomized perturbations.
//!
//! Every generator draws from a ChaCha8 stream seeded with a 64-bit value
//! (`ChaCha8Rng::seed_from_u64`), so a seed reproduces the same series on every
//! platform. Coefficients come from `{±1, ±1/2, ±1/3}`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rat, MultiIndex, QSeries, Rational};
use crate::exterior::QForm;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One of `±1, ±1/2, ±1/3`.
pub fn small_coeff(rng: &mut SeededRng) -> Rational {
    let den = rng.gen_range(1..=3);
    let num = if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(num, den)
}

pub fn random_monomial(rng: &mut SeededRng, nvars: usize, degree: u32) -> MultiIndex {
    let all = MultiIndex::all_of_degree(nvars, degree);
    *all.choose(rng).expect("nonempty")
}

/// Sparse series with `terms` random monomials of degree in `min_deg..=max_deg`.
pub fn sparse_series(
    rng: &mut SeededRng,
    nvars: usize,
    order: usize,
    min_deg: u32,
    max_deg: u32,
    terms: usize,
) -> QSeries {
    let t = (0..terms).map(|_| {
        let d = rng.gen_range(min_deg..=max_deg);
        (random_monomial(rng, nvars, d), small_coeff(rng))
    });
    QSeries::from_terms(nvars, order, t.collect::<Vec<_>>())
}

/// Sparse series restricted to the first `active` variables.
pub fn sparse_series_in(
    rng: &mut SeededRng,
    nvars: usize,
    active: usize,
    order: usize,
    min_deg: u32,
    max_deg: u32,
    terms: usize,
) -> QSeries {
    sparse_series(rng, active, order, min_deg, max_deg, terms).remap_vars(nvars, &(0..active).collect::<Vec<_>>())
}

/// Sparse 1-form with `terms_per_component` terms in each coefficient.
pub fn sparse_one_form(
    rng: &mut SeededRng,
    nvars: usize,
    order: usize,
    min_deg: u32,
    max_deg: u32,
    terms_per_component: usize,
) -> QForm {
    let comps = (0..nvars)
        .map(|_| sparse_series(rng, nvars, order, min_deg, max_deg, terms_per_component))
        .collect();
    QForm::one_form(comps).expect("consistent dimensions")
}

/// A random rational in `[-bound, bound]` with denominator at most `max_den`.
pub fn random_rational(rng: &mut SeededRng, bound: i64, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(-bound * den..=bound * den);
    rat(num, den)
}
