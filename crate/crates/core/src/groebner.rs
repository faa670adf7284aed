//! Module Groebner bases over S by Buchberger's algorithm, syzygies of a
//! basis via the Schreyer construction (recording how each S-pair reduces
//! to zero), and kernels of free-module maps by elimination.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::One;

use crate::module::{FreeModule, ModuleMap};
use crate::order::ModuleOrder;
use crate::piece::{expand_columns, free_piece_basis};
use crate::ring::{BiDegree, Coeff, Monomial, Polynomial, RingSig};

/// Element of a free module: one polynomial per generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MVec {
    pub comps: Vec<Polynomial>,
}

impl MVec {
    pub fn zero(sig: RingSig, rank: usize) -> Self {
        MVec { comps: vec![Polynomial::zero(sig); rank] }
    }

    pub fn unit(sig: RingSig, rank: usize, idx: usize) -> Self {
        let mut v = MVec::zero(sig, rank);
        v.comps[idx] = Polynomial::one(sig);
        v
    }

    pub fn from_column(column: Vec<Polynomial>) -> Self {
        MVec { comps: column }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    pub fn lead_term(&self, order: &ModuleOrder) -> Option<(usize, Monomial, Coeff)> {
        let mut best: Option<(usize, Monomial, Coeff)> = None;
        for (g, p) in self.comps.iter().enumerate() {
            for (m, c) in p.terms() {
                let better = match &best {
                    None => true,
                    Some((bg, bm, _)) => {
                        order.term_cmp(&(g, m.clone()), &(*bg, bm.clone())) == Ordering::Greater
                    }
                };
                if better {
                    best = Some((g, m.clone(), c.clone()));
                }
            }
        }
        best
    }

    /// self += c * mono * other
    pub fn add_scaled(&mut self, other: &MVec, mono: &Monomial, c: &Coeff) {
        for (i, p) in other.comps.iter().enumerate() {
            let scaled = p.mul_monomial(mono, c);
            self.comps[i] = self.comps[i].checked_add(&scaled).expect("same ring");
        }
    }

    pub fn scale(&self, c: &Coeff) -> MVec {
        MVec { comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    /// Degree of a homogeneous element with respect to generator shifts.
    pub fn degree(&self, shifts: &[BiDegree]) -> Option<BiDegree> {
        let mut deg = None;
        for (i, p) in self.comps.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let d = p.bidegree()? + shifts[i];
            match deg {
                None => deg = Some(d),
                Some(existing) if existing == d => {}
                Some(_) => return None,
            }
        }
        deg
    }
}

/// An auto-reduced Groebner basis of a submodule of `free`.
#[derive(Clone, Debug)]
pub struct Gb {
    pub free: FreeModule,
    pub elems: Vec<MVec>,
    pub order: ModuleOrder,
}

/// Fully reduce `elem` against `basis`; the remainder has no term divisible
/// by any basis lead term. When `track` is given, it accumulates the used
/// multiples: elem = remainder + sum track[k] * basis[k].
fn normal_form(
    elem: MVec,
    basis: &[MVec],
    order: &ModuleOrder,
    sig: RingSig,
    mut track: Option<&mut Vec<Polynomial>>,
) -> MVec {
    let leads: Vec<Option<(usize, Monomial, Coeff)>> =
        basis.iter().map(|b| b.lead_term(order)).collect();
    let rank = elem.comps.len();
    let mut work = elem;
    let mut remainder = MVec::zero(sig, rank);
    while let Some((g, m, c)) = work.lead_term(order) {
        let mut reduced = false;
        for (k, lead) in leads.iter().enumerate() {
            let Some((lg, lm, lc)) = lead else { continue };
            if *lg != g {
                continue;
            }
            let Some(q) = m.div(lm) else { continue };
            let factor = -(c.clone() / lc.clone());
            work.add_scaled(&basis[k], &q, &factor);
            if let Some(t) = track.as_deref_mut() {
                let mult = Polynomial::monomial(sig, q, c.clone() / lc.clone());
                t[k] = t[k].checked_add(&mult).expect("same ring");
            }
            reduced = true;
            break;
        }
        if !reduced {
            // Move the irreducible head term to the remainder.
            remainder.comps[g].add_term(m.clone(), c.clone());
            work.comps[g].add_term(m, -c);
        }
    }
    remainder
}

fn monic(v: MVec, order: &ModuleOrder) -> MVec {
    match v.lead_term(order) {
        None => v,
        Some((_, _, c)) => {
            let inv = Coeff::one() / c;
            v.scale(&inv)
        }
    }
}

/// Buchberger's algorithm with the normal selection strategy (smallest lcm
/// bidegree first); the result is auto-reduced, monic, and sorted by lead
/// term so identical submodules give identical bases.
pub fn buchberger(free: &FreeModule, columns: &[MVec], order: &ModuleOrder) -> Gb {
    let sig = free.sig;
    let mut basis: Vec<MVec> = Vec::new();
    for col in columns {
        if !col.is_zero() {
            basis.push(monic(col.clone(), order));
        }
    }

    // Pairs ordered by lcm bidegree (t-degree dominant), then exponents,
    // then indices: the normal selection strategy, deterministically.
    type PairKey = (i64, i64, Vec<i32>, Vec<i32>);
    let pair_key = |basis: &[MVec], i: usize, j: usize| -> Option<PairKey> {
        let (gi, mi, _) = basis[i].lead_term(order)?;
        let (gj, mj, _) = basis[j].lead_term(order)?;
        if gi != gj {
            return None;
        }
        let lcm = mi.lcm(&mj);
        Some((lcm.t_degree(), lcm.x_degree(), lcm.t.clone(), lcm.x.clone()))
    };

    let mut queue: BTreeSet<(PairKey, usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if let Some(key) = pair_key(&basis, i, j) {
                queue.insert((key, i, j));
            }
        }
    }

    while let Some(entry) = queue.iter().next().cloned() {
        queue.remove(&entry);
        let (_, i, j) = entry;
        let (gi, mi, _) = basis[i].lead_term(order).expect("nonzero basis element");
        let (gj, mj, _) = basis[j].lead_term(order).expect("nonzero basis element");
        debug_assert_eq!(gi, gj);
        let lcm = mi.lcm(&mj);
        let ui = lcm.div(&mi).unwrap();
        let uj = lcm.div(&mj).unwrap();
        let mut spair = MVec::zero(sig, free.rank());
        spair.add_scaled(&basis[i], &ui, &Coeff::one());
        spair.add_scaled(&basis[j], &uj, &-Coeff::one());
        let nf = normal_form(spair, &basis, order, sig, None);
        if nf.is_zero() {
            continue;
        }
        let new_idx = basis.len();
        basis.push(monic(nf, order));
        for k in 0..new_idx {
            if let Some(key) = pair_key(&basis, k, new_idx) {
                queue.insert((key, k, new_idx));
            }
        }
    }

    // Auto-reduce: every element fully reduced against the others.
    loop {
        let mut changed = false;
        let mut k = 0;
        while k < basis.len() {
            let elem = basis[k].clone();
            let others: Vec<MVec> = basis
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, b)| b.clone())
                .collect();
            let nf = normal_form(elem, &others, order, sig, None);
            if nf.is_zero() {
                basis.remove(k);
                changed = true;
            } else {
                let nf = monic(nf, order);
                if nf != basis[k] {
                    basis[k] = nf;
                    changed = true;
                }
                k += 1;
            }
        }
        if !changed {
            break;
        }
    }

    basis.sort_by(|a, b| {
        let la = a.lead_term(order).expect("nonzero");
        let lb = b.lead_term(order).expect("nonzero");
        order.term_cmp(&(la.0, la.1), &(lb.0, lb.1))
    });

    Gb { free: free.clone(), elems: basis, order: order.clone() }
}

pub fn buchberger_standard(free: &FreeModule, columns: &[MVec]) -> Gb {
    let order = ModuleOrder::standard(free.rank());
    buchberger(free, columns, &order)
}

impl Gb {
    pub fn normal_form(&self, elem: MVec) -> MVec {
        normal_form(elem, &self.elems, &self.order, self.free.sig, None)
    }

    pub fn reduces_to_zero(&self, elem: MVec) -> bool {
        self.normal_form(elem).is_zero()
    }

    /// Degrees of the basis elements as elements of `free`.
    pub fn element_degrees(&self) -> Vec<BiDegree> {
        self.elems
            .iter()
            .map(|e| e.degree(&self.free.shifts).expect("homogeneous basis element"))
            .collect()
    }

    /// Schreyer syzygies, trimmed: one candidate per S-pair of the basis
    /// (the recorded reduction to zero u_i e_i - u_j e_j - sum h_k e_k),
    /// with members generated by the others removed. The result still
    /// generates the full syzygy module of the basis.
    pub fn syzygies(&self) -> Vec<MVec> {
        let raw = self.syzygies_raw();
        let syz_free = FreeModule::new(self.free.sig, self.element_degrees());
        trim_generators(&syz_free, raw)
    }

    /// Untrimmed Schreyer syzygies, one per S-pair.
    pub fn syzygies_raw(&self) -> Vec<MVec> {
        let sig = self.free.sig;
        let n = self.elems.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let (gi, mi, ci) = self.elems[i].lead_term(&self.order).expect("nonzero");
                let (gj, mj, cj) = self.elems[j].lead_term(&self.order).expect("nonzero");
                if gi != gj {
                    continue;
                }
                let lcm = mi.lcm(&mj);
                let ui = lcm.div(&mi).unwrap();
                let uj = lcm.div(&mj).unwrap();
                let mut spair = MVec::zero(sig, self.free.rank());
                spair.add_scaled(&self.elems[i], &ui, &(Coeff::one() / ci.clone()));
                spair.add_scaled(&self.elems[j], &uj, &-(Coeff::one() / cj.clone()));
                let mut track = vec![Polynomial::zero(sig); n];
                let nf = normal_form(spair, &self.elems, &self.order, sig, Some(&mut track));
                assert!(nf.is_zero(), "S-pair of a Groebner basis must reduce to zero");
                let mut syz = MVec::zero(sig, n);
                syz.comps[i] = Polynomial::monomial(sig, ui, Coeff::one() / ci);
                syz.comps[j] = syz.comps[j]
                    .checked_add(&Polynomial::monomial(sig, uj, -(Coeff::one() / cj)))
                    .expect("same ring");
                for (k, h) in track.into_iter().enumerate() {
                    syz.comps[k] = &syz.comps[k] - &h;
                }
                if !syz.is_zero() {
                    out.push(syz);
                }
            }
        }
        out
    }
}

/// Drop generators that lie in the submodule spanned by the others,
/// highest degree first, keeping the result a generating set. Deterministic
/// because candidates are sorted by degree and lead term before scanning.
pub fn trim_generators(free: &FreeModule, elems: Vec<MVec>) -> Vec<MVec> {
    let order = ModuleOrder::standard(free.rank());
    let mut kept: Vec<MVec> = elems.into_iter().filter(|e| !e.is_zero()).collect();
    kept.sort_by(|a, b| {
        let da = a.degree(&free.shifts).expect("homogeneous");
        let db = b.degree(&free.shifts).expect("homogeneous");
        (da.t, da.x)
            .cmp(&(db.t, db.x))
            .then_with(|| {
                let la = a.lead_term(&order).expect("nonzero");
                let lb = b.lead_term(&order).expect("nonzero");
                order.term_cmp(&(la.0, la.1), &(lb.0, lb.1))
            })
    });
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        if kept.len() == 1 {
            break;
        }
        let candidate = kept[i].clone();
        let others: Vec<MVec> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, e)| e.clone())
            .collect();
        let gb = buchberger(free, &others, &order);
        if gb.reduces_to_zero(candidate) {
            kept.remove(i);
        }
    }
    kept
}

/// Generators of ker(map) computed by elimination: run Buchberger on the
/// graph elements (column_j, e_j) in F_target + F_source with the target
/// positions dominant; basis elements with zero target part generate the
/// kernel.
pub fn kernel_of_map(map: &ModuleMap) -> Vec<MVec> {
    let sig = map.sig();
    let rt = map.target.rank();
    let rs = map.source.rank();
    let mut shifts = map.target.shifts.clone();
    shifts.extend(map.source.shifts.iter().copied());
    let combined = FreeModule::new(sig, shifts);
    let order = ModuleOrder::standard(rt + rs);
    let mut columns = Vec::with_capacity(rs);
    for j in 0..rs {
        let mut v = MVec::zero(sig, rt + rs);
        for (i, entry) in map.column(j).into_iter().enumerate() {
            v.comps[i] = entry;
        }
        v.comps[rt + j] = Polynomial::one(sig);
        columns.push(v);
    }
    let gb = buchberger(&combined, &columns, &order);
    let mut kernel = Vec::new();
    for e in &gb.elems {
        if e.comps[..rt].iter().all(|p| p.is_zero()) {
            kernel.push(MVec { comps: e.comps[rt..].to_vec() });
        }
    }
    kernel
}

/// Dimension of the piece of the submodule generated by `columns` inside
/// `free` at the given bidegree: the rank of all monomial multiples of the
/// columns landing in that piece. Used as a degreewise oracle in tests and
/// for witness extraction.
pub fn submodule_piece_rank(free: &FreeModule, columns: &[MVec], deg: BiDegree) -> usize {
    let basis = free_piece_basis(free, deg);
    let index: std::collections::HashMap<(usize, Monomial), usize> = basis
        .iter()
        .enumerate()
        .map(|(idx, (j, m))| ((*j, m.clone()), idx))
        .collect();
    let mut expanded = Vec::new();
    for col in columns {
        let Some(cdeg) = col.degree(&free.shifts) else { continue };
        for mult in crate::ring::monomials_of_bidegree(free.sig, deg - cdeg) {
            expanded.push((mult, col.comps.clone()));
        }
    }
    expand_columns(&basis, &index, &expanded).rank()
}

/// Brute-force kernel dimension of a free-module map in one bidegree.
pub fn map_piece_kernel_dim(map: &ModuleMap, deg: BiDegree) -> usize {
    let src_basis = free_piece_basis(&map.source, deg);
    let tgt_basis = free_piece_basis(&map.target, deg);
    let tgt_index: std::collections::HashMap<(usize, Monomial), usize> = tgt_basis
        .iter()
        .enumerate()
        .map(|(idx, (j, m))| ((*j, m.clone()), idx))
        .collect();
    let cols: Vec<(Monomial, Vec<Polynomial>)> = src_basis
        .iter()
        .map(|(j, m)| (m.clone(), map.column(*j)))
        .collect();
    let mat = expand_columns(&tgt_basis, &tgt_index, &cols);
    src_basis.len() - mat.rank()
}
