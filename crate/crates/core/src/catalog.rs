//! Bundled schemes and their default windows.

use crate::cps::SchemeBasis;
use crate::geometry::AxisBox;
use crate::window::WindowUnion;

/// Golden ratio, rounded to 17 significant digits.
pub const TAU_DECIMAL: &str = "1.6180339887498948";
/// √2, rounded to 17 significant digits.
pub const SQRT2_DECIMAL: &str = "1.4142135623730950";

pub fn tau() -> f64 {
    TAU_DECIMAL.parse().unwrap()
}

pub fn sqrt2() -> f64 {
    SQRT2_DECIMAL.parse().unwrap()
}

/// `ℤ^(d+m)` with the identity basis.
pub fn identity(d: usize, m: usize) -> SchemeBasis {
    let n = d + m;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    SchemeBasis::new("identity", d, m, &rows).unwrap()
}

/// Columns `(1, 1)` and `(τ, 1 − τ)`.
pub fn fibonacci() -> SchemeBasis {
    let t = tau();
    SchemeBasis::new("fibonacci", 1, 1, &[vec![1.0, t], vec![1.0, 1.0 - t]]).unwrap()
}

/// Columns `(1, 1)` and `(1 + √2, 1 − √2)`.
pub fn silver_mean() -> SchemeBasis {
    let s = sqrt2();
    SchemeBasis::new("silver_mean", 1, 1, &[vec![1.0, 1.0 + s], vec![1.0, 1.0 - s]]).unwrap()
}

/// Product of two Fibonacci schemes, `d = m = 2`.
pub fn box2d() -> SchemeBasis {
    let t = tau();
    let rows = vec![
        vec![1.0, t, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, t],
        vec![1.0, 1.0 - t, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 1.0 - t],
    ];
    SchemeBasis::new("box2d", 2, 2, &rows).unwrap()
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub d: usize,
    /// `None` for measures not derived from a scheme.
    pub m: Option<usize>,
    pub window: &'static str,
    pub description: &'static str,
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "fibonacci",
            d: 1,
            m: Some(1),
            window: "[0, 1]",
            description: "golden-mean scheme, columns (1,1) and (tau,1-tau)",
        },
        CatalogEntry {
            name: "silver_mean",
            d: 1,
            m: Some(1),
            window: "[-0.3, 1.1]",
            description: "silver-mean scheme, columns (1,1) and (1+sqrt2,1-sqrt2)",
        },
        CatalogEntry {
            name: "box2d",
            d: 2,
            m: Some(2),
            window: "[0, 1]^2",
            description: "product of two golden-mean schemes",
        },
        CatalogEntry {
            name: "fixtures",
            d: 1,
            m: None,
            window: "-",
            description: "delta_Z + delta_(sqrt2 Z + 1/2) and delta_Z - sum_(n!=0) delta_(n-1/n)",
        },
    ]
}

/// Scheme and default window for a bundled name.
pub fn scheme_by_name(name: &str) -> Option<(SchemeBasis, WindowUnion)> {
    match name {
        "fibonacci" => Some((fibonacci(), WindowUnion::interval(0.0, 1.0))),
        "silver_mean" => Some((silver_mean(), WindowUnion::interval(-0.3, 1.1))),
        "box2d" => Some((box2d(), WindowUnion::single(AxisBox::closed(&[0.0, 0.0], &[1.0, 1.0])))),
        "identity" => Some((identity(1, 1), WindowUnion::interval(-0.5, 0.5))),
        _ => None,
    }
}
