//! Ext modules over S against the dualizing module omega_S = S(-d), the
//! Cohen-Macaulay test, and the CM dual.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{buchberger_standard, kernel_of_map, trim_generators, MVec};
use crate::module::{BigradedPresentation, FreeModule, ModuleMap};
use crate::resolution::{free_resolution_default, FreeResolution};
use crate::ring::{BiDegree, Polynomial, RingSig};

/// omega_S = S(-d) up to an x-shift standing in for the trivialized
/// det-dual twist; its generator sits in bidegree (x_shift, d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaS {
    pub x_shift: i64,
}

impl OmegaS {
    pub fn standard() -> Self {
        OmegaS { x_shift: 0 }
    }

    /// Bidegree of the dualizing generator: t-twist is exactly -d.
    pub fn generator_degree(&self, sig: RingSig) -> BiDegree {
        BiDegree::new(self.x_shift, sig.fiber_vars as i64)
    }

    pub fn presentation(&self, sig: RingSig) -> BigradedPresentation {
        BigradedPresentation::free(sig, vec![self.generator_degree(sig)])
    }
}

/// Presentation of Ext^q_S(G, omega_S).
#[derive(Clone, Debug)]
pub struct ExtResult {
    pub index: usize,
    pub module: BigradedPresentation,
}

/// True when the cokernel presentation is the zero module: every generator
/// reduces to zero against a Groebner basis of the relations.
pub fn module_is_zero(g: &BigradedPresentation) -> bool {
    nonzero_generator_degrees(g).is_empty()
}

/// Degrees of generators whose class in the cokernel is nonzero.
pub fn nonzero_generator_degrees(g: &BigradedPresentation) -> Vec<BiDegree> {
    let sig = g.sig();
    let free = g.generators();
    if free.rank() == 0 {
        return Vec::new();
    }
    let columns: Vec<MVec> = g.relations().columns().into_iter().map(MVec::from_column).collect();
    let gb = buchberger_standard(free, &columns);
    let mut out = Vec::new();
    for j in 0..free.rank() {
        let e = MVec::unit(sig, free.rank(), j);
        if !gb.reduces_to_zero(e) {
            out.push(free.shifts[j]);
        }
    }
    out
}

/// Ext^q_S(G, omega) from a fresh Schreyer resolution.
pub fn ext_s(g: &BigradedPresentation, q: usize, omega: &OmegaS) -> Result<ExtResult> {
    let res = free_resolution_default(g);
    ext_s_from_resolution(g.sig(), &res, q, omega)
}

/// Ext^q from any resolution: dualize into omega, then present
/// ker(delta_(q+1)) / im(delta_q) with kernel generators as the module
/// generators and lifted syzygies as relations.
pub fn ext_s_from_resolution(
    sig: RingSig,
    res: &FreeResolution,
    q: usize,
    omega: &OmegaS,
) -> Result<ExtResult> {
    let gldim = sig.total_vars();
    if q > gldim {
        return Ok(ExtResult { index: q, module: BigradedPresentation::zero(sig) });
    }
    // Ext^q needs the map out of F_(q+1); an unterminated chain of length q
    // leaves that kernel unknown.
    if q >= res.length() && !res.terminated {
        return Err(Error::ResolutionTooShort { have: res.length(), required: q + 1 });
    }
    let twist = omega.generator_degree(sig);
    let dual_q = dual_module(&res.module(q), twist);
    if dual_q.rank() == 0 {
        return Ok(ExtResult { index: q, module: BigradedPresentation::zero(sig) });
    }

    // Kernel of delta_(q+1): Hom(F_q) -> Hom(F_(q+1)).
    let kernel: Vec<MVec> = if q < res.length() && res.module(q + 1).rank() > 0 {
        let delta_out = res.maps[q].dual(twist);
        kernel_of_map(&delta_out)
    } else {
        (0..dual_q.rank()).map(|j| MVec::unit(sig, dual_q.rank(), j)).collect()
    };
    if kernel.is_empty() {
        return Ok(ExtResult { index: q, module: BigradedPresentation::zero(sig) });
    }

    // Image of delta_q: columns of the dualized previous map.
    let image: Vec<MVec> = if q >= 1 {
        let delta_in = res.maps[q - 1].dual(twist);
        delta_in.columns().into_iter().map(MVec::from_column).filter(|v| !v.is_zero()).collect()
    } else {
        Vec::new()
    };

    let kernel_degrees: Vec<BiDegree> = kernel
        .iter()
        .map(|v| v.degree(&dual_q.shifts).expect("homogeneous kernel generator"))
        .collect();
    let generators = FreeModule::new(sig, kernel_degrees.clone());

    // Relations: u with sum u_l k_l in the image submodule, found as the
    // kernel of [K | B] projected to the K coordinates.
    let mut combined_shifts = kernel_degrees;
    let image_degrees: Vec<BiDegree> = image
        .iter()
        .map(|v| v.degree(&dual_q.shifts).expect("homogeneous image generator"))
        .collect();
    combined_shifts.extend(image_degrees.iter().copied());
    let combined_source = FreeModule::new(sig, combined_shifts);
    let mut matrix = vec![Vec::new(); dual_q.rank()];
    for col in kernel.iter().chain(image.iter()) {
        for (i, row) in matrix.iter_mut().enumerate() {
            row.push(col.comps[i].clone());
        }
    }
    let combined = ModuleMap::new(combined_source, dual_q, matrix)
        .expect("kernel and image columns are homogeneous");
    let z = kernel.len();
    let relations: Vec<MVec> = kernel_of_map(&combined)
        .into_iter()
        .map(|v| MVec { comps: v.comps[..z].to_vec() })
        .filter(|v| !v.is_zero())
        .collect();
    let relations = trim_generators(&generators, relations);

    let rel_shifts: Vec<BiDegree> = relations
        .iter()
        .map(|v| v.degree(&generators.shifts).expect("homogeneous relation"))
        .collect();
    let rel_source = FreeModule::new(sig, rel_shifts);
    let rel_matrix: Vec<Vec<Polynomial>> = (0..generators.rank())
        .map(|i| relations.iter().map(|v| v.comps[i].clone()).collect())
        .collect();
    let module = BigradedPresentation::new(
        generators.clone(),
        ModuleMap::new(rel_source, generators, rel_matrix).expect("homogeneous relations"),
    )?;
    Ok(ExtResult { index: q, module })
}

fn dual_module(free: &FreeModule, twist: BiDegree) -> FreeModule {
    FreeModule::new(free.sig, free.shifts.iter().map(|&s| twist - s).collect())
}

/// Outcome of the Cohen-Macaulay test: either clean or witnessed by the
/// first nonvanishing off-diagonal Ext.
#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    pub is_cm: bool,
    pub witness_q: Option<usize>,
    pub witness_bidegree: Option<(i64, i64)>,
}

/// Ext^q(G, S) must vanish for q != d. The engine insists on m = d here:
/// the concentration statement presumes the base dimension matches the
/// fiber rank.
pub fn cm_check(g: &BigradedPresentation) -> Result<CmReport> {
    let sig = g.sig();
    if sig.base_vars != sig.fiber_vars {
        return Err(Error::RequiresSquareSignature(sig.base_vars, sig.fiber_vars));
    }
    let d = sig.fiber_vars;
    let omega = OmegaS::standard();
    let res = free_resolution_default(g);
    for q in 0..=sig.total_vars() {
        if q == d {
            continue;
        }
        let ext = ext_s_from_resolution(sig, &res, q, &omega)?;
        let mut nonzero = nonzero_generator_degrees(&ext.module);
        if !nonzero.is_empty() {
            nonzero.sort_by_key(|deg| (deg.t, deg.x));
            let w = nonzero[0];
            return Ok(CmReport {
                is_cm: false,
                witness_q: Some(q),
                witness_bidegree: Some((w.x, w.t)),
            });
        }
    }
    Ok(CmReport { is_cm: true, witness_q: None, witness_bidegree: None })
}

/// The CM dual G^ = Ext^d_S(G, omega_S); refuses non-CM inputs.
pub fn cm_dual(g: &BigradedPresentation) -> Result<BigradedPresentation> {
    cm_dual_with(g, &OmegaS::standard())
}

pub fn cm_dual_with(g: &BigradedPresentation, omega: &OmegaS) -> Result<BigradedPresentation> {
    let report = cm_check(g)?;
    if !report.is_cm {
        let (x, t) = report.witness_bidegree.unwrap();
        return Err(Error::NotCohenMacaulay {
            q: report.witness_q.unwrap(),
            witness: BiDegree::new(x, t),
        });
    }
    let d = g.sig().fiber_vars;
    Ok(ext_s(g, d, omega)?.module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piece::dim;
    use crate::resolution::{free_resolution, minimalize};
    use crate::ring::Polynomial;

    fn s11() -> RingSig {
        RingSig::new(1, 1)
    }

    fn s_mod_t1() -> BigradedPresentation {
        BigradedPresentation::cyclic(s11(), vec![Polynomial::t_var(s11(), 0)]).unwrap()
    }

    fn s_mod_x1() -> BigradedPresentation {
        BigradedPresentation::cyclic(s11(), vec![Polynomial::x_var(s11(), 0)]).unwrap()
    }

    fn dims_match(a: &BigradedPresentation, b: &BigradedPresentation, xr: (i64, i64), tr: (i64, i64)) {
        for x in xr.0..=xr.1 {
            for t in tr.0..=tr.1 {
                let deg = BiDegree::new(x, t);
                assert_eq!(dim(a, deg), dim(b, deg), "bidegree {deg}");
            }
        }
    }

    #[test]
    fn ext_of_fiber_hypersurface_is_self_dual() {
        // 0 -> S(-1) -t1-> S -> S/(t1) -> 0 gives Ext^1 = S/(t1).
        let g = s_mod_t1();
        let ext = ext_s(&g, 1, &OmegaS::standard()).unwrap();
        dims_match(&ext.module, &g, (-2, 3), (-2, 3));
        assert!(module_is_zero(&ext_s(&g, 0, &OmegaS::standard()).unwrap().module));
        assert!(module_is_zero(&ext_s(&g, 2, &OmegaS::standard()).unwrap().module));
    }

    #[test]
    fn ext_of_base_hypersurface_shifts() {
        // Ext^1(S/(x1), omega) = S/(x1) with generator in bidegree (-1, 1).
        let g = s_mod_x1();
        let ext = ext_s(&g, 1, &OmegaS::standard()).unwrap();
        let reference = {
            let gens = FreeModule::new(s11(), vec![BiDegree::new(-1, 1)]);
            let src = FreeModule::new(s11(), vec![BiDegree::new(0, 1)]);
            let map = ModuleMap::new(src, gens.clone(), vec![vec![Polynomial::x_var(s11(), 0)]]).unwrap();
            BigradedPresentation::new(gens, map).unwrap()
        };
        dims_match(&ext.module, &reference, (-2, 2), (-2, 3));
        // As a t-graded module this is shift(S/(x1), -1).
        let shifted = s_mod_x1().shift_t(-1);
        for t in -2..=3i64 {
            let total_ext: usize = (-2..=2i64).map(|x| dim(&ext.module, BiDegree::new(x, t))).sum();
            let total_ref: usize = (-2..=2i64).map(|x| dim(&shifted, BiDegree::new(x, t))).sum();
            assert_eq!(total_ext, total_ref, "t-degree {t}");
        }
    }

    #[test]
    fn ext_of_free_module_is_omega() {
        let s = BigradedPresentation::ring(s11());
        let ext0 = ext_s(&s, 0, &OmegaS::standard()).unwrap();
        let omega = OmegaS::standard().presentation(s11());
        dims_match(&ext0.module, &omega, (-1, 3), (-1, 3));
        for q in 1..=2 {
            assert!(module_is_zero(&ext_s(&s, q, &OmegaS::standard()).unwrap().module));
        }
    }

    #[test]
    fn ext_zero_of_shifted_free_module_dualizes_shifts() {
        // Hom(S(a,b) + S(c,e), omega) is free on the twisted dual shifts.
        let shifts = vec![BiDegree::new(1, 2), BiDegree::new(0, -1)];
        let f = BigradedPresentation::free(s11(), shifts.clone());
        let ext0 = ext_s(&f, 0, &OmegaS::standard()).unwrap();
        let omega_gen = OmegaS::standard().generator_degree(s11());
        let mut expected: Vec<BiDegree> = shifts.iter().map(|&s| omega_gen - s).collect();
        expected.sort();
        assert_eq!(ext0.module.generators().shifts, expected);
        assert_eq!(ext0.module.relations().source.rank(), 0);
        assert!(module_is_zero(&ext_s(&f, 1, &OmegaS::standard()).unwrap().module));
    }

    #[test]
    fn cm_check_hypersurfaces() {
        assert!(cm_check(&s_mod_x1()).unwrap().is_cm);
        assert!(cm_check(&s_mod_t1()).unwrap().is_cm);
        // A free module has Ext concentrated in q = 0, not q = d: its
        // support is the whole of E, not a d-dimensional cone.
        let report = cm_check(&BigradedPresentation::ring(s11())).unwrap();
        assert!(!report.is_cm);
        assert_eq!(report.witness_q, Some(0));
    }

    #[test]
    fn cm_check_rejects_point() {
        // S/(x1, t1) has support of dimension 0 < d; Ext^2 is nonzero.
        let g = BigradedPresentation::cyclic(
            s11(),
            vec![Polynomial::x_var(s11(), 0), Polynomial::t_var(s11(), 0)],
        )
        .unwrap();
        let report = cm_check(&g).unwrap();
        assert!(!report.is_cm);
        assert_eq!(report.witness_q, Some(2));
        assert!(cm_dual(&g).is_err());
    }

    #[test]
    fn cm_requires_square_signature() {
        let sig = RingSig::new(0, 2);
        let g = BigradedPresentation::ring(sig);
        assert!(matches!(cm_check(&g), Err(Error::RequiresSquareSignature(0, 2))));
    }

    #[test]
    fn cm_dual_values() {
        // S/(t1) is its own dual; S/(x1) dualizes to the (-1, 1)-shifted copy.
        let dual_t = cm_dual(&s_mod_t1()).unwrap();
        dims_match(&dual_t, &s_mod_t1(), (-2, 3), (-2, 3));
        let dual_x = cm_dual(&s_mod_x1()).unwrap();
        assert_eq!(dim(&dual_x, BiDegree::new(-1, 1)), 1);
        assert_eq!(dim(&dual_x, BiDegree::new(0, 1)), 0);
    }

    #[test]
    fn biduality_on_dimension_tables() {
        for g in [s_mod_t1(), s_mod_x1()] {
            let double = cm_dual(&cm_dual(&g).unwrap()).unwrap();
            dims_match(&double, &g, (-2, 3), (-2, 4));
        }
    }

    #[test]
    fn truncated_resolution_reports_required_length() {
        // A length-1 chain of a module with second syzygies cannot answer
        // Ext^1 and must say how much is missing.
        let sig = RingSig::new(0, 2);
        let g = BigradedPresentation::cyclic(
            sig,
            vec![Polynomial::t_var(sig, 0), Polynomial::t_var(sig, 1)],
        )
        .unwrap();
        let short = free_resolution(&g, 1);
        assert!(!short.terminated);
        let err = ext_s_from_resolution(sig, &short, 1, &OmegaS::standard()).unwrap_err();
        assert!(matches!(err, Error::ResolutionTooShort { have: 1, required: 2 }));
        assert!(ext_s_from_resolution(sig, &short, 0, &OmegaS::standard()).is_ok());
    }

    #[test]
    fn ext_dims_resolution_independent() {
        let sig = RingSig::new(1, 1);
        let rels = vec![
            &Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 0),
            &Polynomial::t_var(sig, 0) * &Polynomial::t_var(sig, 0),
        ];
        let g = BigradedPresentation::cyclic(sig, rels).unwrap();
        let schreyer = free_resolution(&g, 3);
        let minimal = minimalize(&schreyer);
        for q in 0..=2usize {
            let from_schreyer = ext_s_from_resolution(sig, &schreyer, q, &OmegaS::standard()).unwrap();
            let from_minimal = ext_s_from_resolution(sig, &minimal, q, &OmegaS::standard()).unwrap();
            dims_match(&from_schreyer.module, &from_minimal.module, (-2, 2), (-2, 3));
        }
    }

    #[test]
    fn reverse_commutes_with_cm_dual_on_dims() {
        let sig = RingSig::new(1, 1);
        let rel = &Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 0);
        let g = BigradedPresentation::cyclic(sig, vec![rel]).unwrap();
        assert!(cm_check(&g).unwrap().is_cm);
        let a = cm_dual(&g.reverse()).unwrap();
        let b = cm_dual(&g).unwrap().reverse();
        dims_match(&a, &b, (-2, 2), (-2, 4));
    }
}
