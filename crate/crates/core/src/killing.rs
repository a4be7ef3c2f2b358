//! Killing-type residuals of a manifest field over a set of sample points.

use std::fmt;
use std::str::FromStr;

use crate::curvature::parallel_residual_at;
use crate::jets::Point;
use crate::lie::{lie_lie_metric_matrix, lie_metric_matrix, max_abs, ssm_lie_metric_matrix, Mat};
use crate::manifest::Manifest;
use crate::metric::{GeomError, LocalGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KillingKind {
    /// `L_ζ g = 0`.
    Killing,
    /// `L̄_ζ g = 0` for the manifest's semi-symmetric connection.
    SsmKilling,
    /// `L_ζ L_ζ g = 0`.
    TwoKilling,
    /// `L_ζ g = c g` for one constant `c`.
    Homothetic,
    /// `∇ζ = 0`.
    Parallel,
}

impl KillingKind {
    pub const ALL: [KillingKind; 5] = [
        KillingKind::Killing,
        KillingKind::SsmKilling,
        KillingKind::TwoKilling,
        KillingKind::Homothetic,
        KillingKind::Parallel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KillingKind::Killing => "killing",
            KillingKind::SsmKilling => "ssm-killing",
            KillingKind::TwoKilling => "two-killing",
            KillingKind::Homothetic => "homothetic",
            KillingKind::Parallel => "parallel",
        }
    }
}

impl fmt::Display for KillingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KillingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KillingKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = KillingKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown kind `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Largest coordinate-basis entry of the defining tensor over all points.
#[derive(Debug, Clone, PartialEq)]
pub struct KillingResidual {
    pub kind: KillingKind,
    pub field: String,
    pub samples: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Fitted homothety constant, for [`KillingKind::Homothetic`].
    pub c: Option<f64>,
}

pub fn killing_residual(
    manifest: &Manifest,
    field: &str,
    kind: KillingKind,
    points: &[Point],
) -> Result<KillingResidual, GeomError> {
    let vf = manifest
        .field(field)
        .ok_or_else(|| GeomError::Invalid(format!("manifest has no field `{field}`")))?;
    let ps = &manifest.structure;
    let mut per_point = Vec::with_capacity(points.len());
    let mut pairs: Vec<(Mat, Mat)> = Vec::new();
    for p in points {
        let geom = LocalGeometry::at(ps, p)?;
        let z = vf.jets(ps, p)?;
        let r = match kind {
            KillingKind::Killing => max_abs(&lie_metric_matrix(&geom, &z)),
            KillingKind::SsmKilling => {
                let pv = manifest.torsion.values(ps, p)?;
                max_abs(&ssm_lie_metric_matrix(&geom, &z, &pv))
            }
            KillingKind::TwoKilling => max_abs(&lie_lie_metric_matrix(&geom, &z)),
            KillingKind::Parallel => parallel_residual_at(&geom, &z),
            KillingKind::Homothetic => {
                let n = geom.n;
                let g: Mat = (0..n)
                    .map(|a| (0..n).map(|b| geom.g(a, b)).collect())
                    .collect();
                pairs.push((lie_metric_matrix(&geom, &z), g));
                continue;
            }
        };
        per_point.push(r);
    }
    let mut c = None;
    if kind == KillingKind::Homothetic {
        // Least-squares constant over all points, then the worst deviation.
        let (num, den) = pairs.iter().fold((0.0, 0.0), |(n, d), (l, g)| {
            l.iter()
                .flatten()
                .zip(g.iter().flatten())
                .fold((n, d), |(n, d), (lv, gv)| (n + lv * gv, d + gv * gv))
        });
        let c_fit = if den > 0.0 { num / den } else { 0.0 };
        per_point = pairs
            .iter()
            .map(|(l, g)| {
                l.iter()
                    .flatten()
                    .zip(g.iter().flatten())
                    .fold(0.0f64, |m, (lv, gv)| m.max((lv - c_fit * gv).abs()))
            })
            .collect();
        c = Some(c_fit);
    }
    let samples = per_point.len();
    let max_abs = per_point.iter().copied().fold(0.0f64, f64::max);
    let mean_abs = per_point.iter().sum::<f64>() / samples.max(1) as f64;
    Ok(KillingResidual {
        kind,
        field: field.to_string(),
        samples,
        max_abs,
        mean_abs,
        c,
    })
}
