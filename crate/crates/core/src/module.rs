//! Free bigraded modules, bihomogeneous maps between them, and finitely
//! presented bigraded S-modules.
//!
//! A free module is recorded by the bidegrees of its generators; the twist
//! convention is G(m)_k = G_(m+k), so shifting a module by m lowers every
//! generator t-degree by m.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{BiDegree, Polynomial, RingSig};

/// Free bigraded module, one bidegree per generator.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FreeModule {
    pub sig: RingSig,
    pub shifts: Vec<BiDegree>,
}

impl FreeModule {
    pub fn new(sig: RingSig, shifts: Vec<BiDegree>) -> Self {
        FreeModule { sig, shifts }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn zero(sig: RingSig) -> Self {
        FreeModule { sig, shifts: Vec::new() }
    }

    pub fn standard(sig: RingSig, rank: usize) -> Self {
        FreeModule { sig, shifts: vec![BiDegree::new(0, 0); rank] }
    }
}

/// Map of free modules given by a matrix of polynomials; entry (i, j) is the
/// coefficient of target generator i in the image of source generator j, so
/// entry (i, j) must be bihomogeneous of bidegree shift_src(j) - shift_tgt(i)
/// (or zero).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMap {
    pub source: FreeModule,
    pub target: FreeModule,
    pub matrix: Vec<Vec<Polynomial>>,
}

impl ModuleMap {
    pub fn new(source: FreeModule, target: FreeModule, matrix: Vec<Vec<Polynomial>>) -> Result<Self> {
        source.sig.check(&target.sig)?;
        let map = ModuleMap { source, target, matrix };
        map.validate()?;
        Ok(map)
    }

    pub fn zero(source: FreeModule, target: FreeModule) -> Self {
        let matrix = (0..target.rank())
            .map(|_| (0..source.rank()).map(|_| Polynomial::zero(source.sig)).collect())
            .collect();
        ModuleMap { source, target, matrix }
    }

    pub fn validate(&self) -> Result<()> {
        if self.matrix.len() != self.target.rank() {
            return Err(Error::ModuleFile(format!(
                "relation matrix has {} rows but the module has {} generators",
                self.matrix.len(),
                self.target.rank()
            )));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != self.source.rank() {
                return Err(Error::ModuleFile(format!(
                    "row {} has {} entries but there are {} columns",
                    i,
                    row.len(),
                    self.source.rank()
                )));
            }
            for (j, entry) in row.iter().enumerate() {
                self.source.sig.check(&entry.sig())?;
                entry.require_bihomogeneous()?;
                if let Some(deg) = entry.bidegree() {
                    let expected = self.source.shifts[j] - self.target.shifts[i];
                    if deg != expected {
                        return Err(Error::WrongEntryDegree {
                            row: i,
                            col: j,
                            gx: deg.x,
                            gt: deg.t,
                            ex: expected.x,
                            et: expected.t,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        self.matrix.iter().map(|row| row[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Polynomial>> {
        (0..self.source.rank()).map(|j| self.column(j)).collect()
    }

    /// Transpose with negated shifts: the matrix of Hom(-, S(twist)) applied
    /// to this map. `twist` is the bidegree of the dualizing generator.
    pub fn dual(&self, twist: BiDegree) -> ModuleMap {
        let dual_source = FreeModule::new(
            self.sig(),
            self.target.shifts.iter().map(|&s| twist - s).collect(),
        );
        let dual_target = FreeModule::new(
            self.sig(),
            self.source.shifts.iter().map(|&s| twist - s).collect(),
        );
        let matrix = (0..self.source.rank())
            .map(|j| (0..self.target.rank()).map(|i| self.matrix[i][j].clone()).collect())
            .collect();
        ModuleMap { source: dual_source, target: dual_target, matrix }
    }

    pub fn sig(&self) -> RingSig {
        self.source.sig
    }

    pub fn max_entry_x_degree(&self) -> i64 {
        self.matrix
            .iter()
            .flat_map(|row| row.iter().map(|p| p.max_x_degree()))
            .max()
            .unwrap_or(0)
    }

    pub fn max_entry_t_degree(&self) -> i64 {
        self.matrix
            .iter()
            .flat_map(|row| row.iter().map(|p| p.max_t_degree()))
            .max()
            .unwrap_or(0)
    }
}

/// A finitely generated bigraded S-module presented as coker(F1 -> F0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigradedPresentation {
    generators: FreeModule,
    relations: ModuleMap,
}

impl BigradedPresentation {
    /// Build and canonicalize: generators sorted by shift, relation columns
    /// sorted by source shift (stable, so input order breaks ties).
    pub fn new(generators: FreeModule, relations: ModuleMap) -> Result<Self> {
        generators.sig.check(&relations.sig())?;
        if relations.target.shifts != generators.shifts {
            return Err(Error::ModuleFile(
                "relation map target does not match the generator shifts".into(),
            ));
        }
        relations.validate()?;
        Ok(Self::canonicalize(generators, relations))
    }

    fn canonicalize(generators: FreeModule, relations: ModuleMap) -> Self {
        let mut gen_order: Vec<usize> = (0..generators.rank()).collect();
        gen_order.sort_by_key(|&i| (generators.shifts[i], i));
        let new_gens = FreeModule::new(
            generators.sig,
            gen_order.iter().map(|&i| generators.shifts[i]).collect(),
        );
        let mut col_order: Vec<usize> = (0..relations.source.rank()).collect();
        col_order.sort_by_key(|&j| (relations.source.shifts[j], j));
        let new_source = FreeModule::new(
            relations.sig(),
            col_order.iter().map(|&j| relations.source.shifts[j]).collect(),
        );
        let matrix = gen_order
            .iter()
            .map(|&i| col_order.iter().map(|&j| relations.matrix[i][j].clone()).collect())
            .collect();
        BigradedPresentation {
            generators: new_gens.clone(),
            relations: ModuleMap { source: new_source, target: new_gens, matrix },
        }
    }

    /// The free module S(-shift_1) + ... with no relations.
    pub fn free(sig: RingSig, shifts: Vec<BiDegree>) -> Self {
        let generators = FreeModule::new(sig, shifts);
        let relations = ModuleMap::zero(FreeModule::zero(sig), generators.clone());
        Self::canonicalize(generators, relations)
    }

    /// S itself.
    pub fn ring(sig: RingSig) -> Self {
        Self::free(sig, vec![BiDegree::new(0, 0)])
    }

    pub fn zero(sig: RingSig) -> Self {
        Self::free(sig, Vec::new())
    }

    /// Cyclic quotient S/(f1, ..., fr) for bihomogeneous f_i.
    pub fn cyclic(sig: RingSig, relations: Vec<Polynomial>) -> Result<Self> {
        let generators = FreeModule::new(sig, vec![BiDegree::new(0, 0)]);
        let shifts: Vec<BiDegree> = relations
            .iter()
            .map(|p| {
                p.require_bihomogeneous()?;
                Ok(p.bidegree().unwrap_or(BiDegree::new(0, 0)))
            })
            .collect::<Result<_>>()?;
        let source = FreeModule::new(sig, shifts);
        let map = ModuleMap::new(source, generators.clone(), vec![relations])?;
        Self::new(generators, map)
    }

    pub fn generators(&self) -> &FreeModule {
        &self.generators
    }

    pub fn relations(&self) -> &ModuleMap {
        &self.relations
    }

    pub fn sig(&self) -> RingSig {
        self.generators.sig
    }

    /// shift(G, m)_k = G_(m+k): lower every generator and relation t-shift by m.
    pub fn shift_t(&self, m: i64) -> BigradedPresentation {
        self.shift(BiDegree::new(0, m))
    }

    /// Simultaneous shift in both gradings, same convention in each.
    pub fn shift(&self, by: BiDegree) -> BigradedPresentation {
        let lower = |s: &BiDegree| *s - by;
        let generators = FreeModule::new(self.sig(), self.generators.shifts.iter().map(lower).collect());
        let source = FreeModule::new(self.sig(), self.relations.source.shifts.iter().map(lower).collect());
        BigradedPresentation {
            generators: generators.clone(),
            relations: ModuleMap {
                source,
                target: generators,
                matrix: self.relations.matrix.clone(),
            },
        }
    }

    /// The reversal G^r: t_i acts with an extra sign, realized by substituting
    /// t_i -> -t_i in every relation entry. Generator shifts are unchanged.
    pub fn reverse(&self) -> BigradedPresentation {
        let matrix = self
            .relations
            .matrix
            .iter()
            .map(|row| row.iter().map(|p| p.reverse_fibers()).collect())
            .collect();
        BigradedPresentation {
            generators: self.generators.clone(),
            relations: ModuleMap {
                source: self.relations.source.clone(),
                target: self.relations.target.clone(),
                matrix,
            },
        }
    }

    pub fn direct_sum(&self, other: &BigradedPresentation) -> Result<BigradedPresentation> {
        self.sig().check(&other.sig())?;
        let sig = self.sig();
        let mut shifts = self.generators.shifts.clone();
        shifts.extend(other.generators.shifts.iter().copied());
        let generators = FreeModule::new(sig, shifts);
        let mut src_shifts = self.relations.source.shifts.clone();
        src_shifts.extend(other.relations.source.shifts.iter().copied());
        let source = FreeModule::new(sig, src_shifts);
        let (r1, c1) = (self.generators.rank(), self.relations.source.rank());
        let (r2, c2) = (other.generators.rank(), other.relations.source.rank());
        let mut matrix = vec![vec![Polynomial::zero(sig); c1 + c2]; r1 + r2];
        for i in 0..r1 {
            for j in 0..c1 {
                matrix[i][j] = self.relations.matrix[i][j].clone();
            }
        }
        for i in 0..r2 {
            for j in 0..c2 {
                matrix[r1 + i][c1 + j] = other.relations.matrix[i][j].clone();
            }
        }
        Ok(Self::canonicalize(
            generators.clone(),
            ModuleMap { source, target: generators, matrix },
        ))
    }

    /// Reorder relation columns by the given permutation. Dimension data must
    /// not depend on this; tests rely on it.
    pub fn permute_relation_columns(&self, perm: &[usize]) -> BigradedPresentation {
        assert_eq!(perm.len(), self.relations.source.rank());
        let source = FreeModule::new(
            self.sig(),
            perm.iter().map(|&j| self.relations.source.shifts[j]).collect(),
        );
        let matrix = self
            .relations
            .matrix
            .iter()
            .map(|row| perm.iter().map(|&j| row[j].clone()).collect())
            .collect();
        BigradedPresentation {
            generators: self.generators.clone(),
            relations: ModuleMap { source, target: self.generators.clone(), matrix },
        }
    }

    pub fn min_generator_t(&self) -> Option<i64> {
        self.generators.shifts.iter().map(|s| s.t).min()
    }

    pub fn max_generator_t(&self) -> Option<i64> {
        self.generators.shifts.iter().map(|s| s.t).max()
    }
}
