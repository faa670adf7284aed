//! Monomial and module term orders. The ring order is a block order with
//! the fiber variables dominant: graded reverse lex on t over graded
//! reverse lex on x, so leading terms respect the primary t-grading. The
//! module extension is position-over-term with a generator priority list.

use std::cmp::Ordering;

use crate::ring::Monomial;

/// Graded reverse lex on one exponent block: higher total degree wins, ties
/// broken by the last nonzero difference being negative.
fn grevlex(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// t-block over x-block comparison of monomials.
pub fn mono_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    match grevlex(&a.t, &b.t) {
        Ordering::Equal => grevlex(&a.x, &b.x),
        other => other,
    }
}

/// Position-over-term order on (generator, monomial) pairs. A generator
/// earlier in the priority list dominates; ties fall back to `mono_cmp`.
#[derive(Clone, Debug)]
pub struct ModuleOrder {
    rank_of: Vec<usize>,
}

impl ModuleOrder {
    /// Natural priority: generator 0 strongest.
    pub fn standard(rank: usize) -> Self {
        ModuleOrder { rank_of: (0..rank).collect() }
    }

    /// Priority list: `priority[0]` is the strongest generator index.
    pub fn with_priority(priority: Vec<usize>) -> Self {
        let mut rank_of = vec![0; priority.len()];
        for (r, &g) in priority.iter().enumerate() {
            rank_of[g] = r;
        }
        ModuleOrder { rank_of }
    }

    pub fn term_cmp(&self, a: &(usize, Monomial), b: &(usize, Monomial)) -> Ordering {
        // Lower rank = stronger position, so flip the comparison.
        match self.rank_of[a.0].cmp(&self.rank_of[b.0]) {
            Ordering::Equal => mono_cmp(&a.1, &b.1),
            Ordering::Less => Ordering::Greater,
            Ordering::Greater => Ordering::Less,
        }
    }
}
