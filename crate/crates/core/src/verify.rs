//! End-to-end verification commands: the duality theorem checks, the
//! spectral-sequence Euler identity for non-CM inputs, and the de Rham
//! check battery. Each produces a canonical VerificationReport.

use crate::cech::{cech_slice, local_cohomology_stabilized, CapConfig};
use crate::derham::{e1_table_with, verify_der3, verify_der4_euler_with, verify_final_prop};
use crate::dual::{graded_dual, selfdual_scan_with};
use crate::error::{Error, Result};
use crate::homology::{cm_check, cm_dual_with, ext_s_from_resolution, OmegaS};
use crate::module::BigradedPresentation;
use crate::piece::dim as piece_dim;
use crate::report::{CheckRecord, VerificationReport};
use crate::resolution::free_resolution_default;
use crate::ring::BiDegree;
use crate::window::Window;

fn subject(deg: BiDegree) -> String {
    format!("x={:+04},t={:+04}", deg.x, deg.t)
}

/// Default window: t-degrees from (min shift - d - 2) to (max shift + d + 2),
/// x-degrees from 0 (or the lowest generator) to the relation reach plus 4.
pub fn default_window(g: &BigradedPresentation) -> Window {
    let d = g.sig().fiber_vars as i64;
    let mut t_shifts: Vec<i64> = g.generators().shifts.iter().map(|s| s.t).collect();
    t_shifts.extend(g.relations().source.shifts.iter().map(|s| s.t));
    if t_shifts.is_empty() {
        t_shifts.push(0);
    }
    let t_min = t_shifts.iter().copied().min().unwrap() - d - 2;
    let t_max = t_shifts.iter().copied().max().unwrap() + d + 2;
    let mut x_shifts: Vec<i64> = g.generators().shifts.iter().map(|s| s.x).collect();
    x_shifts.push(0);
    let x_min = x_shifts.iter().copied().min().unwrap().min(0);
    let x_max = x_shifts.iter().copied().max().unwrap().max(g.relations().max_entry_x_degree()) + 4;
    Window::new(x_min, x_max, t_min, t_max)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub window: Option<Window>,
    pub caps: CapConfig,
    pub w_range: (i64, i64),
    pub omega: OmegaS,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            window: None,
            caps: CapConfig::default(),
            w_range: (-3, 5),
            omega: OmegaS::standard(),
        }
    }
}

/// Gamma_* plus H^0..H^d plus the module dimension at one bidegree, all
/// stabilized jointly.
struct CechNumbers {
    dim_module: usize,
    dim_gamma: usize,
    h: Vec<usize>,
    r_gamma: Vec<usize>,
}

fn cech_numbers(
    g: &BigradedPresentation,
    deg: BiDegree,
    caps: &CapConfig,
) -> Result<CechNumbers> {
    let d = g.sig().fiber_vars;
    let mut cap = caps
        .initial
        .unwrap_or_else(|| crate::cech::default_cap(g, deg.t))
        .max(1);
    loop {
        let compute = |n: u32| -> Vec<usize> {
            let aug = cech_slice(g, deg, n, true);
            let plain = cech_slice(g, deg, n, false);
            let mut v = vec![
                aug.complex.space_dim(0),
                if plain.complex.is_empty() { 0 } else { plain.complex.cohomology_dim(0) },
            ];
            for i in 0..=d {
                v.push(aug.complex.cohomology_dim(i));
            }
            for q in 1..d.max(1) {
                v.push(if q < plain.complex.len() { plain.complex.cohomology_dim(q) } else { 0 });
            }
            v
        };
        let v0 = compute(cap);
        let v1 = compute(cap + 1);
        if v0 == v1 {
            let dim_module = v1[0];
            let dim_gamma = v1[1];
            let h = v1[2..2 + d + 1].to_vec();
            let r_gamma = v1[2 + d + 1..].to_vec();
            return Ok(CechNumbers { dim_module, dim_gamma, h, r_gamma });
        }
        let next = cap.saturating_mul(2);
        if next > caps.max {
            return Err(Error::NonStabilized { max_cap: caps.max, x: deg.x, t: deg.t });
        }
        cap = next;
    }
}

/// Duality verification: for CM inputs the degreewise checks
/// (i) dim D(G^) = dim H^0, (ii) dim D^1(G^) = dim H^1,
/// (iii) dim D^i(G^) = dim H^i = dim R^(i-1)Gamma_* for 2 <= i <= d,
/// (iv) dim G - dim Gamma_* = dim D(G^) - dim D^1(G^);
/// otherwise the spectral-sequence Euler identity
/// sum (-1)^(p+q) dim D^p(Ext^(-q)(G, omega)) = sum (-1)^(i-d) dim H^i.
/// A self-duality scan over the weight range is appended for CM inputs.
pub fn verify_duality(
    g: &BigradedPresentation,
    digest: &str,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let sig = g.sig();
    let d = sig.fiber_vars;
    let window = opts.window.unwrap_or_else(|| default_window(g));
    let mut report = VerificationReport::new("verify-duality", digest.to_string(), window, opts.caps.initial);

    let square = sig.base_vars == sig.fiber_vars;
    let cm = if square { Some(cm_check(g)?) } else { None };
    let is_cm = cm.as_ref().map(|r| r.is_cm).unwrap_or(false);

    if is_cm {
        let dual = cm_dual_with(g, &opts.omega)?;
        let tables: Vec<_> = (0..=sig.base_vars)
            .map(|i| graded_dual(&dual, i, &window))
            .collect();
        for deg in window.bidegrees() {
            let numbers = cech_numbers(g, deg, &opts.caps)?;
            let d0 = tables[0].get(0, deg);
            let d1 = if sig.base_vars >= 1 { tables[1].get(1, deg) } else { 0 };
            report.push(CheckRecord::dims(
                "cm.D0_vs_H0",
                subject(deg),
                vec![d0 as i64],
                vec![numbers.h[0] as i64],
            ));
            report.push(CheckRecord::dims(
                "cm.D1_vs_H1",
                subject(deg),
                vec![d1 as i64],
                vec![numbers.h[1] as i64],
            ));
            for i in 2..=d {
                let di = tables.get(i).map(|t| t.get(i, deg)).unwrap_or(0);
                let hi = numbers.h[i];
                let ri = numbers.r_gamma[i - 2];
                report.push(CheckRecord::dims(
                    &format!("cm.D{i}_vs_H{i}_vs_RGamma{}", i - 1),
                    subject(deg),
                    vec![di as i64, di as i64],
                    vec![hi as i64, ri as i64],
                ));
            }
            report.push(CheckRecord::dims(
                "cm.euler_four_term",
                subject(deg),
                vec![numbers.dim_module as i64 - numbers.dim_gamma as i64],
                vec![d0 as i64 - d1 as i64],
            ));
        }
    } else {
        let note = if square {
            let r = cm.as_ref().unwrap();
            format!(
                "not Cohen-Macaulay: Ext^{} nonzero at ({}, {}); using the spectral Euler identity",
                r.witness_q.unwrap(),
                r.witness_bidegree.unwrap().0,
                r.witness_bidegree.unwrap().1
            )
        } else {
            "signature not square: CM-duality checks do not apply; using the spectral Euler identity".to_string()
        };
        report.push(CheckRecord::flag("spectral.path", "input".into(), true, Some(note)));

        let res = free_resolution_default(g);
        let exts: Vec<BigradedPresentation> = (0..=sig.total_vars())
            .map(|qp| ext_s_from_resolution(sig, &res, qp, &opts.omega).map(|e| e.module))
            .collect::<Result<_>>()?;
        let tables: Vec<Vec<crate::dual::DualTable>> = exts
            .iter()
            .map(|e| (0..=sig.base_vars).map(|p| graded_dual(e, p, &window)).collect())
            .collect();
        for deg in window.bidegrees() {
            let mut lhs: i64 = 0;
            for (qp, per_p) in tables.iter().enumerate() {
                for (p, table) in per_p.iter().enumerate() {
                    let sign = if (p + qp) % 2 == 0 { 1 } else { -1 };
                    lhs += sign * table.get(p, deg) as i64;
                }
            }
            let mut rhs: i64 = 0;
            for i in 0..=d {
                let (hi, _) = local_cohomology_stabilized(g, i, deg, &opts.caps)?;
                let sign = if (i as i64 - d as i64).rem_euclid(2) == 0 { 1 } else { -1 };
                rhs += sign * hi as i64;
            }
            report.push(CheckRecord::dims("spectral.euler", subject(deg), vec![lhs], vec![rhs]));
        }
    }

    if is_cm {
        let scan = selfdual_scan_with(g, opts.w_range, &window, &opts.omega)?;
        let weights = scan.exact_weights();
        report.push(CheckRecord::flag(
            "selfdual.exact_weights",
            format!("{:?}", weights),
            true,
            Some(format!("w_range {:?}", opts.w_range)),
        ));
        for fit in &scan.fits {
            report.push(CheckRecord::flag(
                "selfdual.fit",
                format!("w={:+03}", fit.weight),
                true,
                Some(format!("x_shift={}, mismatches={}", fit.x_shift, fit.mismatches)),
            ));
        }
    } else {
        report.push(CheckRecord::flag(
            "selfdual.skipped",
            "input".into(),
            true,
            Some("self-duality scan requires a Cohen-Macaulay module".into()),
        ));
    }

    report.finalize();
    Ok(report)
}

/// m_bound from the Hilbert table: smallest bound with G_k = 0 for all
/// k <= -m_bound, scanning from the structural floor.
pub fn compute_m_bound(g: &BigradedPresentation, window: &Window) -> i64 {
    let floor = g.min_generator_t().unwrap_or(0);
    let x_lo = window
        .x_min
        .min(g.generators().shifts.iter().map(|s| s.x).min().unwrap_or(0));
    let mut lowest_nonzero: Option<i64> = None;
    for k in floor..=window.t_max {
        let nonzero = (x_lo..=window.x_max).any(|a| piece_dim(g, BiDegree::new(a, k)) > 0);
        if nonzero {
            lowest_nonzero = Some(k);
            break;
        }
    }
    match lowest_nonzero {
        Some(k) => 1 - k,
        None => 1 - floor,
    }
}

/// De Rham battery: torsion vanishing (der3), the Euler identity against
/// the dual tables (der4, CM only), the slice exactness range, and the E1
/// table when a weight is supplied and self-duality holds at it.
pub fn verify_derham(
    g: &BigradedPresentation,
    digest: &str,
    opts: &VerifyOptions,
    weight: Option<i64>,
) -> Result<VerificationReport> {
    let sig = g.sig();
    let window = opts.window.unwrap_or_else(|| default_window(g));
    let mut report = VerificationReport::new("verify-derham", digest.to_string(), window, None);

    let der3 = verify_der3(g, &window)?;
    for r in &der3.records {
        report.push(CheckRecord::flag(
            "der3.vanishing",
            format!("x={:+04}", r.x),
            r.pass,
            Some(format!("cohomology vanishes from t={}", r.vanish_from)),
        ));
    }

    let square = sig.base_vars == sig.fiber_vars;
    let cm_ok = square && cm_check(g)?.is_cm;
    if cm_ok {
        let der4 = verify_der4_euler_with(g, &window, &opts.omega)?;
        for r in &der4.records {
            report.push(CheckRecord::dims(
                "der4.euler",
                subject(BiDegree::new(r.x, r.t)),
                vec![r.lhs],
                vec![r.rhs],
            ));
        }
    } else {
        report.push(CheckRecord::flag(
            "der4.skipped",
            "input".into(),
            true,
            Some("Euler identity against the CM dual requires a Cohen-Macaulay module".into()),
        ));
    }

    let m_bound = compute_m_bound(g, &window);
    match weight {
        Some(w) => {
            let n = w - sig.fiber_vars as i64;
            let fp = verify_final_prop(g, m_bound, n, &window)?;
            for r in &fp.records {
                let pass = !r.required || r.exact;
                report.push(CheckRecord::flag(
                    "final_prop.slice_exact",
                    format!("t={:+04}", r.t),
                    pass,
                    Some(format!(
                        "exact={}, required={} (m_bound={}, n={})",
                        r.exact, r.required, m_bound, n
                    )),
                ));
            }
        }
        None => {
            report.push(CheckRecord::flag(
                "final_prop.skipped",
                "input".into(),
                true,
                Some(format!("no weight given; m_bound={} recorded, range check vacuous", m_bound)),
            ));
        }
    }

    if let Some(w) = weight {
        if cm_ok {
            match e1_table_with(g, w, &window, &opts.omega) {
                Ok(e1) => {
                    for r in &e1.euler {
                        report.push(CheckRecord::dims(
                            "e1.euler",
                            subject(BiDegree::new(r.x, r.t)),
                            vec![r.lhs],
                            vec![r.rhs],
                        ));
                    }
                }
                Err(Error::Precondition(reason)) => {
                    report.push(CheckRecord::flag("e1.refused", "input".into(), true, Some(reason)));
                }
                Err(e) => return Err(e),
            }
        } else {
            report.push(CheckRecord::flag(
                "e1.refused",
                "input".into(),
                true,
                Some("requires a Cohen-Macaulay module and the polarization weight".into()),
            ));
        }
    }

    report.finalize();
    Ok(report)
}

/// Local cohomology tables plus the four-term sequence verification.
pub fn verify_localcoh(
    g: &BigradedPresentation,
    digest: &str,
    index: usize,
    window: &Window,
    caps: &CapConfig,
) -> Result<VerificationReport> {
    if index > g.sig().fiber_vars {
        return Err(Error::Precondition(format!(
            "local cohomology index {} exceeds the fiber rank {}",
            index,
            g.sig().fiber_vars
        )));
    }
    let mut report = VerificationReport::new("localcoh", digest.to_string(), *window, caps.initial);
    for deg in window.bidegrees() {
        let (dim, cap) = local_cohomology_stabilized(g, index, deg, caps)?;
        report.push(CheckRecord::flag(
            &format!("localcoh.H{index}"),
            subject(deg),
            true,
            Some(format!("dim={dim}, cap={cap}")),
        ));
    }
    let prop1 = crate::cech::verify_prop1(g, window, caps)?;
    for r in &prop1.records {
        report.push(CheckRecord::dims(
            "prop1.sequence",
            subject(BiDegree::new(r.x, r.t)),
            vec![r.map_kernel as i64, r.map_cokernel as i64, r.dim_module as i64 - r.dim_gamma as i64],
            vec![r.dim_h0 as i64, r.dim_h1 as i64, r.dim_h0 as i64 - r.dim_h1 as i64],
        ));
        for (i, hi, ri) in &r.higher {
            report.push(CheckRecord::dims(
                &format!("prop1.H{i}_vs_RGamma{}", i - 1),
                subject(BiDegree::new(r.x, r.t)),
                vec![*hi as i64],
                vec![*ri as i64],
            ));
        }
    }
    report.finalize();
    Ok(report)
}

/// The four-term dimensions (H^0, G, Gamma_*, H^1) at one bidegree, all
/// jointly stabilized; used by tests wanting the raw numbers.
pub fn four_term_numbers(
    g: &BigradedPresentation,
    deg: BiDegree,
    caps: &CapConfig,
) -> Result<(usize, usize, usize, usize)> {
    let numbers = cech_numbers(g, deg, caps)?;
    Ok((numbers.h[0], numbers.dim_module, numbers.dim_gamma, numbers.h[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Polynomial, RingSig};

    fn s11() -> RingSig {
        RingSig::new(1, 1)
    }

    fn s_mod_x1() -> BigradedPresentation {
        BigradedPresentation::cyclic(s11(), vec![Polynomial::x_var(s11(), 0)]).unwrap()
    }

    fn s_mod_t1() -> BigradedPresentation {
        BigradedPresentation::cyclic(s11(), vec![Polynomial::t_var(s11(), 0)]).unwrap()
    }

    #[test]
    fn default_window_covers_boundary() {
        let w = default_window(&s_mod_x1());
        assert!(w.t_min <= -3 && w.t_max >= 3);
        assert_eq!(w.x_min, 0);
        assert!(w.x_max >= 5);
    }

    #[test]
    fn duality_report_on_base_hypersurface() {
        let g = s_mod_x1();
        let opts = VerifyOptions { window: Some(Window::new(0, 2, -3, 3)), ..Default::default() };
        let report = verify_duality(&g, "sha256:test", &opts).unwrap();
        assert!(report.overall, "{}", report.render_text());
        // Spot-check the recorded dims at k <= -1: (G, Gamma, D0, D1) = (0, 1, 0, 1).
        let euler = report
            .records
            .iter()
            .find(|r| r.check_id == "cm.euler_four_term" && r.subject.contains("t=-001") && r.subject.contains("x=+000"))
            .unwrap();
        assert_eq!(euler.lhs, vec![-1]);
        let d1 = report
            .records
            .iter()
            .find(|r| r.check_id == "cm.D1_vs_H1" && r.subject.contains("t=-001") && r.subject.contains("x=+000"))
            .unwrap();
        assert_eq!(d1.lhs, vec![1]);
        // The scan finds exactly w = 2.
        let ws = report.records.iter().find(|r| r.check_id == "selfdual.exact_weights").unwrap();
        assert_eq!(ws.subject, "[2]");
    }

    #[test]
    fn duality_report_degenerate_case() {
        // S/(t1): Gamma_* = 0 and D(G^) = G everywhere.
        let g = s_mod_t1();
        let opts = VerifyOptions { window: Some(Window::new(0, 1, -2, 2)), ..Default::default() };
        let report = verify_duality(&g, "sha256:test", &opts).unwrap();
        assert!(report.overall, "{}", report.render_text());
        for r in &report.records {
            if r.check_id == "cm.D0_vs_H0" && r.subject.contains("t=+000") && r.subject.contains("x=+000") {
                assert_eq!(r.lhs, vec![1]);
            }
        }
        let ws = report.records.iter().find(|r| r.check_id == "selfdual.exact_weights").unwrap();
        assert_eq!(ws.subject, "[1]");
    }

    #[test]
    fn duality_report_mixed_hypersurface() {
        // S/(x1*t1) is CM of dimension 1 with both a torsion-free and a
        // Gamma-visible part; all four checks must pass degreewise.
        let sig = s11();
        let rel = &Polynomial::x_var(sig, 0) * &Polynomial::t_var(sig, 0);
        let g = BigradedPresentation::cyclic(sig, vec![rel]).unwrap();
        let opts = VerifyOptions { window: Some(Window::new(0, 2, -3, 3)), ..Default::default() };
        let report = verify_duality(&g, "sha256:test", &opts).unwrap();
        assert!(report.overall, "{}", report.render_text());
        // At (0, -1) the module vanishes but Gamma_* and D^1 see the tail.
        let euler = report
            .records
            .iter()
            .find(|r| r.check_id == "cm.euler_four_term" && r.subject == "x=+000,t=-001")
            .unwrap();
        assert_eq!(euler.lhs, vec![-1]);
        assert_eq!(euler.rhs, vec![-1]);
    }

    #[test]
    fn duality_report_on_cm_direct_sum() {
        // Both summands are CM of dimension 1, so the sum takes the CM path
        // and every degreewise check is the sum of the worked examples.
        let g = s_mod_t1().direct_sum(&s_mod_x1()).unwrap();
        let opts = VerifyOptions { window: Some(Window::new(0, 2, -2, 2)), ..Default::default() };
        let report = verify_duality(&g, "sha256:test", &opts).unwrap();
        assert!(report.overall, "{}", report.render_text());
        assert!(report.records.iter().any(|r| r.check_id == "cm.D0_vs_H0"));
        // No single weight fits the sum.
        let ws = report.records.iter().find(|r| r.check_id == "selfdual.exact_weights").unwrap();
        assert_eq!(ws.subject, "[]");
    }

    #[test]
    fn duality_report_non_cm_path() {
        let q = BigradedPresentation::cyclic(
            s11(),
            vec![Polynomial::x_var(s11(), 0), Polynomial::t_var(s11(), 0)],
        )
        .unwrap();
        let g = q.direct_sum(&BigradedPresentation::ring(s11())).unwrap();
        let opts = VerifyOptions { window: Some(Window::new(0, 1, -2, 2)), ..Default::default() };
        let report = verify_duality(&g, "sha256:test", &opts).unwrap();
        assert!(report.overall, "{}", report.render_text());
        assert!(report.records.iter().any(|r| r.check_id == "spectral.euler"));
    }

    #[test]
    fn derham_report_full_battery() {
        let opts = VerifyOptions { window: Some(Window::new(0, 2, -3, 3)), ..Default::default() };
        let report = verify_derham(&s_mod_x1(), "sha256:test", &opts, Some(2)).unwrap();
        assert!(report.overall, "{}", report.render_text());
        assert!(report.records.iter().any(|r| r.check_id == "e1.euler"));
        assert!(report.records.iter().any(|r| r.check_id == "final_prop.slice_exact"));
    }

    #[test]
    fn derham_report_free_module() {
        let s = BigradedPresentation::ring(s11());
        let opts = VerifyOptions { window: Some(Window::new(0, 1, -3, 2)), ..Default::default() };
        let report = verify_derham(&s, "sha256:test", &opts, None).unwrap();
        assert!(report.overall, "{}", report.render_text());
        assert!(report.records.iter().any(|r| r.check_id == "der4.skipped"));
        assert!(report.records.iter().any(|r| r.check_id == "final_prop.skipped"));
    }

    #[test]
    fn derham_refuses_e1_for_non_cm() {
        let q = BigradedPresentation::cyclic(
            s11(),
            vec![Polynomial::x_var(s11(), 0), Polynomial::t_var(s11(), 0)],
        )
        .unwrap();
        let opts = VerifyOptions { window: Some(Window::new(0, 1, -2, 2)), ..Default::default() };
        let report = verify_derham(&q, "sha256:test", &opts, Some(1)).unwrap();
        assert!(report.records.iter().any(|r| r.check_id == "e1.refused"));
        assert!(report.overall, "{}", report.render_text());
    }

    #[test]
    fn m_bound_from_hilbert_table() {
        let w = Window::new(0, 2, -3, 3);
        assert_eq!(compute_m_bound(&s_mod_t1(), &w), 1);
        assert_eq!(compute_m_bound(&s_mod_t1().shift_t(-2), &w), -1);
    }

    #[test]
    fn reports_byte_stable() {
        let g = s_mod_t1();
        let opts = VerifyOptions { window: Some(Window::new(0, 1, -2, 1)), ..Default::default() };
        let a = verify_duality(&g, "sha256:test", &opts).unwrap().to_json();
        let b = verify_duality(&g, "sha256:test", &opts).unwrap().to_json();
        assert_eq!(a, b);
    }
}
