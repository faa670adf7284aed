//! Free resolutions of bigraded presentations. Each stage is the Groebner
//! basis of the previous syzygies, so images equal kernels by construction;
//! `minimalize` cancels unit entries to reach the minimal resolution.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::groebner::{buchberger_standard, kernel_of_map, MVec};
use crate::module::{BigradedPresentation, FreeModule, ModuleMap};
use crate::piece::free_piece_basis;
use crate::qmat::QuotientComplex;
use crate::ring::{BiDegree, Coeff, Polynomial};

/// Chain of free modules F_len -> ... -> F_1 -> F_0 with maps[i]: F_(i+1) -> F_i
/// and coker(maps[0]) the resolved module.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub maps: Vec<ModuleMap>,
    pub terminated: bool,
}

impl FreeResolution {
    /// Number of maps in the chain.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// F_i; rank 0 beyond the computed length when the resolution terminated.
    pub fn module(&self, i: usize) -> FreeModule {
        if i == 0 {
            self.maps[0].target.clone()
        } else if i <= self.maps.len() {
            self.maps[i - 1].source.clone()
        } else {
            FreeModule::zero(self.maps[0].sig())
        }
    }

    pub fn sig(&self) -> crate::ring::RingSig {
        self.maps[0].sig()
    }

    /// Exact composite check: d_i . d_(i+1) = 0 as matrices.
    pub fn composites_vanish(&self) -> bool {
        for i in 0..self.maps.len().saturating_sub(1) {
            let outer = &self.maps[i];
            let inner = &self.maps[i + 1];
            for row in 0..outer.target.rank() {
                for col in 0..inner.source.rank() {
                    let mut acc = Polynomial::zero(outer.sig());
                    for mid in 0..outer.source.rank() {
                        acc = &acc + &(&outer.matrix[row][mid] * &inner.matrix[mid][col]);
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Dimension of the homology at stage i (i >= 1 interior) in one bidegree,
    /// computed on the free pieces.
    pub fn homology_dim(&self, stage: usize, deg: BiDegree) -> usize {
        assert!(stage >= 1);
        let complex = self.piece_complex_around(stage, deg);
        complex.cohomology_dim(1)
    }

    fn piece_complex_around(&self, stage: usize, deg: BiDegree) -> QuotientComplex {
        // Positions stage+1 -> stage -> stage-1 as a cochain read right-to-left.
        let spaces: Vec<usize> = [stage + 1, stage, stage - 1]
            .iter()
            .map(|&i| free_piece_basis(&self.module(i), deg).len())
            .collect();
        let d_in = self.map_piece(stage, deg);
        let d_out = self.map_piece(stage - 1, deg);
        QuotientComplex {
            ambient: vec![spaces[0], spaces[1], spaces[2]],
            rel: vec![
                crate::qmat::QMat::zeros(spaces[0], 0),
                crate::qmat::QMat::zeros(spaces[1], 0),
                crate::qmat::QMat::zeros(spaces[2], 0),
            ],
            maps: vec![d_in, d_out],
        }
    }

    /// Matrix of maps[i] on bidegree pieces; zero matrix beyond the length.
    pub fn map_piece(&self, i: usize, deg: BiDegree) -> crate::qmat::QMat {
        if i >= self.maps.len() {
            let tgt = free_piece_basis(&self.module(i), deg);
            return crate::qmat::QMat::zeros(tgt.len(), free_piece_basis(&self.module(i + 1), deg).len());
        }
        crate::piece::map_piece(&self.maps[i], deg)
    }

    /// Betti ranks per stage and shift.
    pub fn betti(&self) -> BettiTable {
        let mut table = BTreeMap::new();
        let stages = self.maps.len() + 1;
        for i in 0..stages {
            let module = self.module(i);
            if i > 0 && module.rank() == 0 {
                continue;
            }
            for shift in &module.shifts {
                *table.entry((i, *shift)).or_insert(0) += 1;
            }
        }
        BettiTable { entries: table }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, BiDegree), usize>,
}

#[derive(Serialize)]
pub struct BettiRecord {
    pub stage: usize,
    pub x_shift: i64,
    pub t_shift: i64,
    pub rank: usize,
}

impl BettiTable {
    pub fn stage_ranks(&self) -> Vec<usize> {
        let max_stage = self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0);
        let mut ranks = vec![0; max_stage + 1];
        for ((i, _), r) in &self.entries {
            ranks[*i] += r;
        }
        ranks
    }

    pub fn records(&self) -> Vec<BettiRecord> {
        self.entries
            .iter()
            .map(|((stage, deg), rank)| BettiRecord {
                stage: *stage,
                x_shift: deg.x,
                t_shift: deg.t,
                rank: *rank,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.records()).expect("serializable")
    }
}

/// Default resolution length: the global dimension bound plus one stage so
/// the final kernel is visible.
pub fn default_length(g: &BigradedPresentation) -> usize {
    g.sig().total_vars() + 1
}

/// Resolve by repeated Groebner bases and Schreyer syzygies. Stops early
/// when the syzygies vanish; `length` bounds the number of maps. If the
/// chain has not terminated within the global-dimension bound, the complex
/// is minimalized, which brings it within the bound.
pub fn free_resolution(g: &BigradedPresentation, length: usize) -> FreeResolution {
    let sig = g.sig();
    let bound = sig.total_vars() + 1;
    let mut maps: Vec<ModuleMap> = Vec::new();
    let mut target = g.generators().clone();
    let mut columns: Vec<MVec> = g
        .relations()
        .columns()
        .into_iter()
        .map(MVec::from_column)
        .collect();
    let mut terminated = false;
    for stage in 0..length.max(1) {
        let gb = buchberger_standard(&target, &columns);
        if gb.elems.is_empty() {
            maps.push(ModuleMap::zero(FreeModule::zero(sig), target.clone()));
            terminated = true;
            break;
        }
        let source = FreeModule::new(sig, gb.element_degrees());
        let matrix: Vec<Vec<Polynomial>> = (0..target.rank())
            .map(|i| gb.elems.iter().map(|e| e.comps[i].clone()).collect())
            .collect();
        maps.push(
            ModuleMap::new(source.clone(), target.clone(), matrix)
                .expect("Groebner columns are homogeneous"),
        );
        if stage + 1 == length.max(1) {
            break;
        }
        let syz = gb.syzygies();
        if syz.is_empty() {
            terminated = true;
            break;
        }
        target = source;
        columns = syz;
    }
    let mut res = FreeResolution { maps, terminated };
    if !res.terminated && res.maps.len() >= bound {
        // The Schreyer chain may carry redundant generators past the global
        // dimension; the minimal form cannot.
        res = minimalize(&res);
        res.terminated = kernel_of_map(res.maps.last().expect("nonempty")).is_empty();
    }
    if !res.terminated && res.maps.len() < length {
        res.terminated = kernel_of_map(res.maps.last().expect("nonempty")).is_empty();
    }
    res
}

pub fn free_resolution_default(g: &BigradedPresentation) -> FreeResolution {
    free_resolution(g, default_length(g))
}

/// Cancel unit entries until none remain. Each cancellation is the standard
/// Schur-complement step, with the neighbouring maps corrected: the row of
/// the next map is folded in before deletion, and the column of the previous
/// map vanishes identically once the bases are adjusted.
pub fn minimalize(res: &FreeResolution) -> FreeResolution {
    let mut maps = res.maps.clone();
    loop {
        let mut found: Option<(usize, usize, usize)> = None;
        'search: for (s, map) in maps.iter().enumerate() {
            for r in 0..map.target.rank() {
                for c in 0..map.source.rank() {
                    let entry = &map.matrix[r][c];
                    if entry.is_zero() {
                        continue;
                    }
                    if entry.bidegree() == Some(BiDegree::new(0, 0)) {
                        found = Some((s, r, c));
                        break 'search;
                    }
                }
            }
        }
        let Some((s, r, c)) = found else { break };
        cancel_unit(&mut maps, s, r, c);
    }
    // Drop trailing zero stages but keep the terminal zero map if the last
    // module resolves freely.
    while maps.len() > 1 {
        let last = maps.last().unwrap();
        if last.source.rank() == 0 && maps[maps.len() - 2].source.rank() == 0 {
            maps.pop();
        } else {
            break;
        }
    }
    let terminated = res.terminated || maps.last().map(|m| m.source.rank() == 0).unwrap_or(false);
    FreeResolution { maps, terminated }
}

fn cancel_unit(maps: &mut [ModuleMap], s: usize, r: usize, c: usize) {
    let unit = maps[s].matrix[r][c].clone();
    let unit_coeff = unit
        .terms()
        .next()
        .map(|(_, co)| co.clone())
        .expect("unit entry is a nonzero constant");
    let inv = {
        let mut one = Coeff::zero();
        one += Coeff::new(1.into(), 1.into());
        one / unit_coeff.clone()
    };

    // Fold the cancelled source generator into the next map's rows first,
    // while row r of maps[s] is still available.
    if s + 1 < maps.len() {
        let lambda: Vec<Polynomial> = (0..maps[s].source.rank())
            .map(|cp| maps[s].matrix[r][cp].scale(&inv))
            .collect();
        let next = &mut maps[s + 1];
        for j in 0..next.source.rank() {
            let mut folded = next.matrix[c][j].clone();
            for cp in 0..lambda.len() {
                if cp == c {
                    continue;
                }
                folded = &folded + &(&lambda[cp] * &next.matrix[cp][j]);
            }
            next.matrix[c][j] = folded;
        }
    }

    // Schur complement on maps[s], then delete row r and column c.
    {
        let map = &mut maps[s];
        let row_r: Vec<Polynomial> = map.matrix[r].clone();
        let col_c: Vec<Polynomial> = (0..map.target.rank()).map(|i| map.matrix[i][c].clone()).collect();
        for i in 0..map.target.rank() {
            if i == r {
                continue;
            }
            for j in 0..map.source.rank() {
                if j == c {
                    continue;
                }
                let correction = (&col_c[i] * &row_r[j]).scale(&inv);
                map.matrix[i][j] = &map.matrix[i][j] - &correction;
            }
        }
        map.matrix.remove(r);
        for row in map.matrix.iter_mut() {
            row.remove(c);
        }
        map.target.shifts.remove(r);
        map.source.shifts.remove(c);
    }

    // The next map loses the cancelled generator of F_(s+1).
    if s + 1 < maps.len() {
        let next = &mut maps[s + 1];
        next.matrix.remove(c);
        next.target.shifts.remove(c);
    }

    // The previous map loses its column for the cancelled generator of F_s;
    // in the adjusted basis that column is exactly zero.
    if s > 0 {
        let prev = &mut maps[s - 1];
        for row in prev.matrix.iter_mut() {
            row.remove(r);
        }
        prev.source.shifts.remove(r);
    }
}

/// The presentation coker(maps[0]) of a resolution, used to compare a
/// resolved module against the original.
pub fn presented_by(res: &FreeResolution) -> Result<BigradedPresentation> {
    BigradedPresentation::new(res.maps[0].target.clone(), res.maps[0].clone())
}
