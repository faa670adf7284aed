//! Seeded random presentations for the property and acceptance suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::homology::cm_check;
use crate::module::{BigradedPresentation, FreeModule, ModuleMap};
use crate::ring::{coeff_int, monomials_of_bidegree, BiDegree, Polynomial, RingSig};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random bihomogeneous presentation: up to `max_gens` generators with
/// small shifts and up to `max_rels` relation columns whose entries are
/// random bihomogeneous polynomials of total degree at most `max_deg`.
pub fn random_presentation(
    rng: &mut ChaCha8Rng,
    sig: RingSig,
    max_gens: usize,
    max_rels: usize,
    max_deg: i64,
) -> BigradedPresentation {
    let n_gens = rng.gen_range(1..=max_gens);
    let shifts: Vec<BiDegree> = (0..n_gens)
        .map(|_| BiDegree::new(rng.gen_range(0..=1), rng.gen_range(0..=1)))
        .collect();
    let generators = FreeModule::new(sig, shifts.clone());

    let n_rels = rng.gen_range(0..=max_rels);
    let mut src_shifts = Vec::new();
    let mut columns: Vec<Vec<Polynomial>> = Vec::new();
    for _ in 0..n_rels {
        let anchor = shifts[rng.gen_range(0..n_gens)];
        let dx = rng.gen_range(0..=max_deg.min(2));
        let dt = rng.gen_range(0..=(max_deg - dx).min(3)).max(1 - dx.min(1));
        let src = anchor + BiDegree::new(dx, dt);
        let mut column = Vec::with_capacity(n_gens);
        for gen_shift in &shifts {
            let entry_deg = src - *gen_shift;
            let mut entry = Polynomial::zero(sig);
            if entry_deg.x >= 0 && entry_deg.t >= 0 {
                for m in monomials_of_bidegree(sig, entry_deg) {
                    if rng.gen_bool(0.5) {
                        let c = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
                        entry.add_term(m, coeff_int(c));
                    }
                }
            }
            column.push(entry);
        }
        src_shifts.push(src);
        columns.push(column);
    }
    let source = FreeModule::new(sig, src_shifts);
    let matrix: Vec<Vec<Polynomial>> = (0..n_gens)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    BigradedPresentation::new(generators.clone(), ModuleMap { source, target: generators, matrix })
        .expect("constructed bihomogeneous")
}

/// Rejection-sample a presentation failing the CM test (square signatures).
pub fn random_non_cm(
    rng: &mut ChaCha8Rng,
    sig: RingSig,
    max_gens: usize,
    max_rels: usize,
    max_deg: i64,
) -> BigradedPresentation {
    loop {
        let g = random_presentation(rng, sig, max_gens, max_rels, max_deg);
        if let Ok(report) = cm_check(&g) {
            if !report.is_cm {
                return g;
            }
        }
    }
}
