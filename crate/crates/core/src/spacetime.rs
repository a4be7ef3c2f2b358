//! Generalized Robertson-Walker, standard static and generalized Kasner
//! spacetimes as product structures.

use std::collections::BTreeMap;

use crate::fieldexpr::FieldExpr;
use crate::metric::{BlockMetric, GeomError, ProductStructure};
use crate::sampling::Interval;

#[derive(Debug, Clone, PartialEq)]
pub enum SpacetimeKind {
    /// `−dt² ⊕ f² g_i` with one common `f(t)` for every fiber.
    Grw { f: String, fibers: Vec<BlockMetric> },
    /// `g_1 ⊕ (−f²) dt²` with `f` over the base coordinates.
    StandardStatic { f: String, base: BlockMetric },
    /// `−dt² ⊕ φ^{2p_1} g_1 ⊕ … ⊕ φ^{2p_m} g_m`.
    Kasner {
        phi: String,
        exponents: Vec<f64>,
        fibers: Vec<BlockMetric>,
    },
}

impl SpacetimeKind {
    pub fn name(&self) -> &'static str {
        match self {
            SpacetimeKind::Grw { .. } => "grw",
            SpacetimeKind::StandardStatic { .. } => "static",
            SpacetimeKind::Kasner { .. } => "kasner",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeSpec {
    /// Name of the time coordinate.
    pub time: String,
    pub interval: Interval,
    pub kind: SpacetimeKind,
    pub constants: BTreeMap<String, f64>,
}

fn time_block(time: &str, interval: Interval) -> BlockMetric {
    BlockMetric::flat(&[time], &[-1], vec![interval])
}

fn positive_at_center(ps: &ProductStructure) -> Result<(), GeomError> {
    let center: Vec<f64> = ps.base.boxes.iter().map(|b| 0.5 * (b.lo + b.hi)).collect();
    for i in 0..ps.m() {
        ps.warping::<f64>(i, &center)?;
    }
    Ok(())
}

pub fn build_spacetime(spec: &SpacetimeSpec) -> Result<ProductStructure, GeomError> {
    if spec.interval.lo.partial_cmp(&spec.interval.hi) != Some(std::cmp::Ordering::Less) {
        return Err(GeomError::Invalid(format!(
            "empty time interval ({}, {})",
            spec.interval.lo, spec.interval.hi
        )));
    }
    let t = spec.time.as_str();
    let ps = match &spec.kind {
        SpacetimeKind::Grw { f, fibers } => {
            if fibers.is_empty() {
                return Err(GeomError::Invalid("a GRW spacetime needs a fiber".into()));
            }
            let w = FieldExpr::parse_with(f, &[t], &spec.constants)?;
            ProductStructure::new(
                time_block(t, spec.interval),
                fibers.clone(),
                vec![w; fibers.len()],
            )?
        }
        SpacetimeKind::StandardStatic { f, base } => {
            let coords: Vec<&str> = base.coords.iter().map(String::as_str).collect();
            let w = FieldExpr::parse_with(f, &coords, &spec.constants)?;
            ProductStructure::new(base.clone(), vec![time_block(t, spec.interval)], vec![w])?
        }
        SpacetimeKind::Kasner {
            phi,
            exponents,
            fibers,
        } => {
            if exponents.len() != fibers.len() {
                return Err(GeomError::Invalid(format!(
                    "{} Kasner exponents for {} fibers",
                    exponents.len(),
                    fibers.len()
                )));
            }
            let warpings = exponents
                .iter()
                .map(|p| FieldExpr::parse_with(&format!("({phi})^({p:?})"), &[t], &spec.constants))
                .collect::<Result<Vec<_>, _>>()?;
            ProductStructure::new(time_block(t, spec.interval), fibers.clone(), warpings)?
        }
    };
    positive_at_center(&ps)?;
    Ok(ps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Point;

    fn plane() -> BlockMetric {
        BlockMetric::flat(&["x", "y"], &[1, 1], vec![Interval::new(-1.0, 1.0); 2])
    }

    fn spec(kind: SpacetimeKind, lo: f64, hi: f64) -> SpacetimeSpec {
        SpacetimeSpec {
            time: "t".into(),
            interval: Interval::new(lo, hi),
            kind,
            constants: BTreeMap::new(),
        }
    }

    #[test]
    fn grw_with_exponential_warping() {
        let ps = build_spacetime(&spec(
            SpacetimeKind::Grw {
                f: "exp(t)".into(),
                fibers: vec![plane()],
            },
            -1.0,
            1.0,
        ))
        .unwrap();
        assert_eq!(ps.total_dim(), 3);
        assert_eq!(ps.signature(), vec![-1, 1, 1]);
        let g = ps
            .assemble(&Point::new(vec![0.5, 0.1, 0.2]).unwrap())
            .unwrap();
        assert_eq!(g.matrix[(0, 0)], -1.0);
        assert!((g.matrix[(1, 1)] - 1f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn static_fiber_is_timelike() {
        let ps = build_spacetime(&spec(
            SpacetimeKind::StandardStatic {
                f: "2 + x^2".into(),
                base: plane(),
            },
            0.0,
            1.0,
        ))
        .unwrap();
        let g = ps
            .assemble(&Point::new(vec![1.0, 0.0, 0.5]).unwrap())
            .unwrap();
        assert_eq!(g.matrix[(2, 2)], -9.0);
    }

    #[test]
    fn kasner_warpings() {
        let ps = build_spacetime(&spec(
            SpacetimeKind::Kasner {
                phi: "t".into(),
                exponents: vec![2.0 / 3.0, 2.0 / 3.0],
                fibers: vec![
                    BlockMetric::flat(&["x"], &[1], vec![Interval::new(0.0, 1.0)]),
                    BlockMetric::flat(&["y"], &[1], vec![Interval::new(0.0, 1.0)]),
                ],
            },
            1.0,
            2.0,
        ))
        .unwrap();
        let w = ps.warping::<f64>(1, &[1.5]).unwrap();
        assert!((w - 1.5f64.powf(2.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_specs() {
        let empty = spec(
            SpacetimeKind::Grw {
                f: "exp(t)".into(),
                fibers: vec![plane()],
            },
            1.0,
            1.0,
        );
        assert!(build_spacetime(&empty).is_err());
        let negative = spec(
            SpacetimeKind::Kasner {
                phi: "t".into(),
                exponents: vec![0.5],
                fibers: vec![plane()],
            },
            -2.0,
            -1.0,
        );
        assert!(build_spacetime(&negative).is_err());
    }
}
