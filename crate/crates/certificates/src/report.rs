use std::collections::BTreeMap;

use ib_geometry::{ConvexBody, GeomError};
use ib_model::Scenario;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_gap, bound_main, bound_simplex, delta_default, eta_main, eta_simplex};
use crate::{
    gap_compute, param_c, param_r, param_s, restrict_to_span, BoundDims, CertError, CertValues,
    Result, SineMethod, ZBar,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub theorem: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub eta: f64,
    /// Absent for the gap bound, which has no `δ`.
    pub delta: Option<f64>,
    pub value: f64,
}

/// Serialized certificate. `gap = null` means no pair of hypotheses
/// qualifies, i.e. the gap is infinite (see `methods.gap`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub gap: Option<f64>,
    #[serde(rename = "D_Z")]
    pub d_z: usize,
    #[serde(rename = "D_W")]
    pub d_w: usize,
    pub methods: BTreeMap<String, String>,
    pub grid_resolutions: BTreeMap<String, f64>,
    pub bounds: Vec<BoundEntry>,
}

impl CertificateReport {
    pub fn values(&self) -> CertValues {
        CertValues {
            r: self.r,
            s: self.s,
            c: self.c,
        }
    }

    pub fn dims(&self) -> BoundDims {
        BoundDims {
            d_z: self.d_z,
            d_w: self.d_w,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub sine: SineMethod,
    /// Horizons at which bounds are evaluated.
    pub horizons: Vec<usize>,
    /// Constant in the exponent of the main and gap tails.
    pub c_exp: f64,
    /// Work on `span(H)` instead of the declared `Z`.
    pub restrict_span: bool,
    pub compute_gap: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            sine: SineMethod::Auto,
            horizons: vec![500],
            c_exp: 1.0,
            restrict_span: true,
            compute_gap: true,
        }
    }
}

/// All certificates and bound curves for a scenario.
pub fn certify(sc: &Scenario, opts: &CertifyOptions) -> Result<CertificateReport> {
    sc.ensure_valid()?;
    let mut methods = BTreeMap::new();
    let fam = if opts.restrict_span {
        let (f, _) = restrict_to_span(&sc.family);
        methods.insert("Z".into(), format!("span(H), dim {}", f.dim_z));
        f
    } else {
        sc.family.clone()
    };
    let zb = ZBar::build(&fam, &sc.space)?;
    let r = param_r(&zb)?;
    methods.insert(
        "R".into(),
        if zb.is_approximate() {
            "grid max, round body sampled".into()
        } else {
            "grid max, exact per cell".into()
        },
    );
    let sine = param_s(sc, &opts.sine)?;
    methods.insert(
        "S".into(),
        format!(
            "{} (min at arm {}, theta {})",
            sine.method, sine.arm, sine.theta
        ),
    );
    let c = param_c(&sc.reward, &sc.space)?;
    methods.insert("C".into(), "range over arms and body".into());
    let gap = if !opts.compute_gap {
        methods.insert("gap".into(), "skipped".into());
        None
    } else {
        match gap_compute(&sc.family, &sc.reward, &sc.space) {
            Ok(g) if g.is_finite() => {
                methods.insert("gap".into(), "pairwise section distance".into());
                Some(g)
            }
            Ok(_) => {
                methods.insert("gap".into(), "no qualifying pair (infinite)".into());
                None
            }
            Err(CertError::Geometry(GeomError::UnsupportedBody(m))) => {
                methods.insert("gap".into(), format!("unavailable: {m}"));
                None
            }
            Err(e) => return Err(e),
        }
    };
    let cert = CertValues {
        r,
        s: sine.value,
        c,
    };
    let dims = BoundDims {
        d_z: zb.d_z(),
        d_w: fam.dim_w,
    };
    let mut bounds = Vec::new();
    for &n in &opts.horizons {
        let delta = delta_default(n);
        let eta = eta_main(&cert, &dims, n, 1.0);
        bounds.push(BoundEntry {
            theorem: "main".into(),
            n,
            eta,
            delta: Some(delta),
            value: bound_main(&cert, &dims, n, eta, delta, opts.c_exp),
        });
        if let ConvexBody::SimplexOfLabels { labels } = sc.space.body {
            let eta = eta_simplex(&cert, &dims, n, labels);
            bounds.push(BoundEntry {
                theorem: "simplex".into(),
                n,
                eta,
                delta: Some(delta),
                value: bound_simplex(&cert, &dims, n, eta, delta, labels),
            });
        }
        if let Some(g) = gap.filter(|g| *g > 0.0) {
            bounds.push(BoundEntry {
                theorem: "gap".into(),
                n,
                eta,
                delta: None,
                value: bound_gap(&cert, &dims, n, eta, g, opts.c_exp)?,
            });
        }
    }
    Ok(CertificateReport {
        r,
        s: sine.value,
        c,
        gap,
        d_z: dims.d_z,
        d_w: dims.d_w,
        methods,
        grid_resolutions: sc.meta.grid.clone(),
        bounds,
    })
}
